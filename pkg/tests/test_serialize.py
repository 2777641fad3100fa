import io
import random

import pytest

from helpers import max_table_deviation, random_model
from netag.decoder import decode
from netag.estimation import Regime, SchemeKind
from netag.serialize import ModelFormatError, dump_model, load_model, read_model, write_model


def _text(model):
    buf = io.StringIO()
    dump_model(model, buf)
    return buf.getvalue()


@pytest.mark.parametrize("kind", ["implicit", "explicit"])
def test_round_trip(kind, tmp_path):
    rng = random.Random(50)
    for n in range(8):
        model, _ = random_model(rng, kind, rng.choice(list(Regime)),
                                rng.choice([SchemeKind.ABSOLUTE, SchemeKind.GT_ABS_COMBINED]))
        path = tmp_path / f"m{n}.model"
        write_model(model, path)
        back = read_model(path)
        assert max_table_deviation(model, back) == 0.0
        assert back.vocab == model.vocab and back.classes == model.classes and back.scheme == model.scheme
        words = [f"W{rng.randrange(14)}" for _ in range(6)] + ["NEVER"]
        assert decode(back, words) == decode(model, words)
        assert _text(back) == path.read_text()


def test_implicit_inventory_survives():
    model, _ = random_model(random.Random(51), "implicit", Regime.BACKOFF, SchemeKind.ABSOLUTE, cutoff=1)
    back = load_model(_text(model))
    assert model.inventory is not None and back.inventory == model.inventory and back.order == model.order


def _corrupt(text, old, new):
    assert old in text
    return text.replace(old, new, 1)


@pytest.fixture(scope="module")
def good():
    model, _ = random_model(random.Random(52), "explicit", Regime.BACKOFF, SchemeKind.ABSOLUTE)
    return _text(model)


@pytest.mark.parametrize("mutate", [
    lambda t: "",
    lambda t: "hello\n" + t,
    lambda t: _corrupt(t, "\\netag-model 1", "\\netag-model 9"),
    lambda t: _corrupt(t, "kind EXPLICIT", "kind OTHER"),
    lambda t: _corrupt(t, "regime ", "regime bogus"),
    lambda t: t.replace("\\end", ""),
    lambda t: t[: len(t) // 2],
    lambda t: _corrupt(t, "\\level 1", "\\level 1 9,9"),
    lambda t: _corrupt(t, "\\chain class_a", "\\chain class_q"),
])
def test_corrupt_files_are_rejected(good, mutate):
    with pytest.raises(ModelFormatError):
        load_model(mutate(good))
