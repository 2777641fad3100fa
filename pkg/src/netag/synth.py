"""Template grammar for seed broadcast-news style transcripts.

The grammar is only used to build the bundled generator model: templates
of ordinary words with entity slots, long-tail name lists and a few words
that are ambiguous between classes (MAY, JORDAN, WASHINGTON, ...).
"""
from __future__ import annotations

import random

from .corpus import AnnotatedTranscript, ClassLabel, EntitySpan

__all__ = ["seed_corpus", "SeedGrammar"]

P, L, O, D, T, M, R = (ClassLabel.PERSON, ClassLabel.LOCATION, ClassLabel.ORGANIZATION,
                       ClassLabel.DATE, ClassLabel.TIME, ClassLabel.MONEY, ClassLabel.PERCENT)

FIRST = """JOHN MARY JAMES ROBERT MICHAEL WILLIAM DAVID RICHARD JOSEPH THOMAS CHARLES SUSAN
LINDA BARBARA ELIZABETH JENNIFER MARIA NANCY KAREN BETTY HELEN SANDRA DONNA CAROL RUTH
SHARON MICHELLE LAURA SARAH KIMBERLY DEBORAH JESSICA GEORGE KENNETH STEVEN EDWARD BRIAN
RONALD ANTHONY KEVIN JASON MATTHEW GARY TIMOTHY LARRY JEFFREY FRANK SCOTT ERIC STEPHEN
ANDREW RAYMOND GREGORY JOSHUA JERRY DENNIS WALTER PATRICK PETER HAROLD DOUGLAS HENRY CARL
ARTHUR RYAN ROGER BILL NEWT BOB AL HILLARY BORIS HELMUT YASSER BENJAMIN ADRIAN TONY JACQUES
MADELEINE WARREN JANET MADELINE KOFI NELSON FIDEL SADDAM LEON DIANA CHARLIE MAY JORDAN
PAULA IRENE""".split()

REAL_SURNAMES = """SMITH JOHNSON WILLIAMS BROWN JONES MILLER DAVIS WILSON ANDERSON TAYLOR THOMAS
MOORE MARTIN JACKSON THOMPSON WHITE HARRIS CLARK LEWIS ROBINSON WALKER YOUNG ALLEN KING
WRIGHT SCOTT GREEN BAKER ADAMS NELSON HILL CAMPBELL MITCHELL ROBERTS CARTER PHILLIPS
CLINTON GINGRICH DOLE GORE YELTSIN KOHL ARAFAT NETANYAHU BLAIR CHIRAC ALBRIGHT CHRISTOPHER
RENO ANNAN MANDELA CASTRO HUSSEIN PANETTA LOTT GEPHARDT KEMP PEROT MCCURRY REAGAN
WASHINGTON LINCOLN""".split()

_ONSETS = "B BR C CH D DR F G GR H J K KL L M N P PR R S ST SH T TR V W Z".split()
_VOWELS = "A E I O U AI EA OU IE".split()
_CODAS = "N R S L T M NG RT ND LL SS CK RD".split()

CITIES = """LONDON PARIS MOSCOW BEIJING TOKYO BOSTON CHICAGO ATLANTA DALLAS HOUSTON DENVER SEATTLE
MIAMI DETROIT JERUSALEM BAGHDAD CAIRO BERLIN ROME MADRID SARAJEVO BELGRADE GENEVA HAVANA
TEHRAN ISLAMABAD DELHI SEOUL MANILA JAKARTA NAIROBI LAGOS PHILADELPHIA PITTSBURGH CLEVELAND
WASHINGTON JORDAN""".split()
MULTI_LOC = [("NEW", "YORK"), ("LOS", "ANGELES"), ("SAN", "FRANCISCO"), ("SOUTH", "YORKSHIRE"),
             ("WEST", "BANK"), ("SIMI", "VALLEY"), ("HONG", "KONG"), ("NORTH", "KOREA"),
             ("SOUTH", "AFRICA"), ("SAUDI", "ARABIA"), ("NEW", "JERSEY"), ("MIDDLE", "EAST"),
             ("GAZA", "STRIP"), ("UNITED", "STATES"), ("NEW", "ORLEANS")]
STATES = """CALIFORNIA TEXAS FLORIDA OHIO GEORGIA VIRGINIA ILLINOIS MICHIGAN ARIZONA OREGON
ALABAMA KENTUCKY IOWA NEVADA UTAH""".split()
COUNTRIES = """RUSSIA CHINA JAPAN ISRAEL IRAQ IRAN EGYPT FRANCE GERMANY BRITAIN MEXICO CANADA BOSNIA
SERBIA CUBA INDIA PAKISTAN SYRIA LEBANON KOREA AMERICA ITALY SPAIN ALBANIA ZAIRE""".split()

FIXED_ORG = [("CONGRESS",), ("NATO",), ("PENTAGON",), ("UNITED", "NATIONS"), ("WHITE", "HOUSE"),
             ("SUPREME", "COURT"), ("SENATE",), ("C.", "N.", "N."), ("A.", "B.", "C."), ("N.", "B.", "C."),
             ("F.", "B.", "I."), ("C.", "I.", "A."), ("STATE", "DEPARTMENT"), ("JUSTICE", "DEPARTMENT"),
             ("REPUBLICAN", "PARTY"), ("DEMOCRATIC", "PARTY"), ("LABOR", "PARTY"), ("HAMAS",),
             ("MICROSOFT",), ("BOEING",), ("GENERAL", "MOTORS"), ("I.", "B.", "M."), ("FEDERAL", "RESERVE"),
             ("RED", "CROSS"), ("WORLD", "BANK"), ("TEAMSTERS",), ("PEMEX",)]
ORG_SUFFIX = """CORPORATION INCORPORATED GROUP BANK UNIVERSITY ASSOCIATION COMPANY AIRLINES
INSTITUTE FOUNDATION""".split()
ORG_PREFIX = ["RONALD REAGAN CENTER", "BOSTON GLOBE", "NEW YORK TIMES", "WALL STREET JOURNAL"]

WEEKDAYS = "MONDAY TUESDAY WEDNESDAY THURSDAY FRIDAY SATURDAY SUNDAY".split()
MONTHS = "JANUARY FEBRUARY MARCH APRIL MAY JUNE JULY AUGUST SEPTEMBER OCTOBER NOVEMBER DECEMBER".split()
ORDINALS = """FIRST SECOND THIRD FOURTH FIFTH SIXTH SEVENTH EIGHTH NINTH TENTH TWELFTH FIFTEENTH
TWENTIETH TWENTY-FIRST THIRTIETH""".split()
YEARS = [("NINETEEN", "NINETY", "SIX"), ("NINETEEN", "NINETY", "SEVEN"), ("NINETEEN", "NINETY", "EIGHT"),
         ("NINETEEN", "EIGHTY", "NINE"), ("NINETEEN", "SIXTY", "EIGHT")]
NUMS = """ONE TWO THREE FOUR FIVE SIX SEVEN EIGHT NINE TEN ELEVEN TWELVE FIFTEEN TWENTY THIRTY
FORTY FIFTY SIXTY SEVENTY EIGHTY NINETY HUNDRED""".split()

TITLES = """PRESIDENT DIRECTOR SENATOR MINISTER GOVERNOR SECRETARY CHAIRMAN GENERAL SPOKESMAN
CORRESPONDENT ATTORNEY JUDGE MAYOR AMBASSADOR LEADER""".split()
NOUNS = """GOVERNMENT PLAN BILL TALKS ECONOMY MARKET BUDGET ELECTION CAMPAIGN WAR PEACE POLICE
OFFICIALS TROOPS VOTERS COMPANY STOCKS PRICES TAXES REPORT INVESTIGATION TRIAL JURY STORM
FIRE CRASH DEAL AGREEMENT SUMMIT CRISIS PROGRAM PROPOSAL DECISION WEATHER RAIN PEOPLE
WORKERS STRIKE UNION OIL DOLLAR RATES JOBS SCHOOLS HOSPITAL PATIENTS DRUG VACCINE SHOW
NEWS STORY WEEK YEAR MONTH NIGHT MORNING EVENING CITY COUNTRY STATE NATION WORLD VOTE
COURT CASE LAW RULE SPEECH STATEMENT INTERVIEW QUESTION ANSWER TEAM GAME SEASON""".split()
VERBS = """SAYS SAID TOLD ANNOUNCED REPORTED DENIED CONFIRMED WARNED EXPECTS WANTS PLANS AGREED
REJECTED APPROVED VISITED MET LEFT ARRIVED RETURNED CALLED ASKED REFUSED PROMISED
DECIDED BEGAN ENDED ROSE FELL CLIMBED DROPPED""".split()
ADJ = """NEW OLD BIG SMALL STRONG WEAK IMPORTANT DIFFICULT CLEAR LIKELY UNLIKELY SERIOUS
FEDERAL LOCAL FOREIGN NATIONAL MILITARY POLITICAL ECONOMIC FORMER""".split()
FUNC = "THE A OF IN ON TO FOR WITH AT FROM BY AND BUT THAT THIS IS WAS WILL HAS HAVE".split()
PRON = "HE SHE THEY WE IT".split()
ADV = "NOW TODAY TONIGHT YESTERDAY AGAIN STILL ALSO ALREADY SOON HERE THERE".split()

# template items: plain word, "{X}" word-list slot, or "<X>" entity slot
TEMPLATES = [
    "{TITLE} <PER> SAYS THE {NOUN} WILL {VERBB} {ADV}",
    "{TITLE} <PER> SAYS {PRON} {VERB} THE {NOUN}",
    "<PER> TOLD <ORG> ON <DATE> THAT THE {NOUN} {VERB} <PCT>",
    "IN <LOC> <ORG> REPORTED PROFITS OF <MONEY> FOR <DATE>",
    "THE {NOUN} BEGAN AT <TIME> <DATE> IN <LOC>",
    "GOOD EVENING I'M <PER> AND THIS IS <ORG> NEWS",
    "<PER> OF <ORG> SAID {PRON} {VERB} THE {ADJ} {NOUN}",
    "SHARES OF <ORG> {VERB} <PCT> TO <MONEY>",
    "FROM <LOC> THIS IS <PER> REPORTING",
    "<ORG> SPOKESMAN <PER> SAID THE {NOUN} IS {ADJ}",
    "PRESIDENT <SUR> VISITED <LOC> ON <DATE>",
    "THE {NOUN} {VERB} {ADV} AND {PRON} {VERB} THE {NOUN}",
    "THE {ADJ} {NOUN} IN <LOC> {VERB} {ADV}",
    "{PRON} {VERB} <PER> {ADV}",
    "THE {NOUN} {VERB} <PCT> {ADV} AFTER THE {NOUN}",
    "OFFICIALS IN <LOC> <LOC> SAY THE {NOUN} COST <MONEY>",
    "<PER> AND <PER> MET IN <LOC> ON <DATE>",
    "THE {NOUN} WILL {VERBB} AT <TIME>",
    "<ORG> WILL VOTE ON THE {NOUN} <DATE>",
    "{ADV} THE {NOUN} FROM <LOC> {VERB} THE {NOUN}",
    "IT WAS {ADJ} FOR THE {NOUN} OF <LOC>",
    "MISTER <SUR> {VERB} ON <DATE>",
    "THE {NOUN} IS {ADJ} AND THE {NOUN} IS {ADJ}",
    "{TITLE} <SUR> OF <LOC> {VERB} THE {NOUN}",
    "WE'LL BE RIGHT BACK",
    "I'M <PER> <ORG> NEWS <LOC>",
    "UNEMPLOYMENT {VERB} TO <PCT> IN <DATE>",
    "THE {NOUN} {VERB} BY <MONEY> <DATE>",
    "AT <TIME> <DATE> THE {NOUN} {VERB} {ADV}",
    "THE {NOUN} {VERB} AT <TIME> IN <LOC>",
]
VERBB = "MEET CONTINUE END BEGIN CHANGE FAIL PASS RISE FALL WAIT".split()


class SeedGrammar:
    def __init__(self, seed: int = 0, n_rare_surnames: int = 1500, n_rare_words: int = 800):
        self.rng = random.Random(seed)
        gen = random.Random(seed + 1)
        known = set(REAL_SURNAMES) | set(FIRST) | set(NOUNS)
        self.rare_surnames = self._coin(gen, n_rare_surnames, known)
        known |= set(self.rare_surnames)
        self.rare_words = self._coin(gen, n_rare_words, known)
        self.rare_orgs = self._coin(gen, 300, known | set(self.rare_words))

    @staticmethod
    def _coin(gen: random.Random, n: int, avoid: set[str]) -> list[str]:
        out: list[str] = []
        seen = set(avoid)
        while len(out) < n:
            w = "".join(gen.choice(_ONSETS) + gen.choice(_VOWELS) for _ in range(gen.randint(1, 2)))
            w += gen.choice(_CODAS)
            if w not in seen:
                seen.add(w)
                out.append(w)
        return out

    def _zipf(self, items):
        # rank-weighted draw, long tail
        r = self.rng
        i = int(len(items) * r.random() ** 3)
        return items[min(i, len(items) - 1)]

    def person(self) -> tuple[str, ...]:
        r = self.rng
        sur = self.surname()
        u = r.random()
        if u < 0.55:
            return (self._zipf(FIRST), sur)
        if u < 0.65:
            return (self._zipf(FIRST), r.choice("A B C D E H J K L M R S W".split()) + ".", sur)
        return (sur,)

    def surname(self) -> str:
        r = self.rng
        return self._zipf(REAL_SURNAMES) if r.random() < 0.5 else r.choice(self.rare_surnames)

    def location(self) -> tuple[str, ...]:
        r = self.rng
        u = r.random()
        if u < 0.35:
            return (self._zipf(CITIES),)
        if u < 0.55:
            return r.choice(MULTI_LOC)
        if u < 0.75:
            return (r.choice(STATES),)
        if u < 0.95:
            return (self._zipf(COUNTRIES),)
        return (r.choice(self.rare_surnames), "CITY")

    def organization(self) -> tuple[str, ...]:
        r = self.rng
        u = r.random()
        if u < 0.5:
            return self._zipf(FIXED_ORG)
        if u < 0.6:
            return tuple(r.choice(ORG_PREFIX).split())
        if u < 0.85:
            return (r.choice(self.rare_orgs), r.choice(ORG_SUFFIX))
        return (self.surname(), r.choice(ORG_SUFFIX))

    def date(self) -> tuple[str, ...]:
        r = self.rng
        u = r.random()
        if u < 0.4:
            return (r.choice(WEEKDAYS),)
        if u < 0.7:
            return (r.choice(MONTHS), r.choice(ORDINALS))
        if u < 0.85:
            return (r.choice(MONTHS),)
        return r.choice(YEARS)

    def time(self) -> tuple[str, ...]:
        r = self.rng
        u = r.random()
        if u < 0.4:
            return (r.choice(NUMS[:12]), "O'CLOCK")
        if u < 0.7:
            return (r.choice(NUMS[:12]), r.choice(["THIRTY", "FIFTEEN", "FORTY", "A.", "P."]), "M.") \
                if r.random() < 0.3 else (r.choice(NUMS[:12]), r.choice(["THIRTY", "FIFTEEN", "FORTY"]))
        return (r.choice(["NOON", "MIDNIGHT"]),)

    def money(self) -> tuple[str, ...]:
        r = self.rng
        n = (r.choice(NUMS),) if r.random() < 0.7 else (r.choice(NUMS[:12]), "HUNDRED")
        unit = r.choice([("MILLION", "DOLLARS"), ("BILLION", "DOLLARS"), ("DOLLARS",), ("CENTS",)])
        return n + unit

    def percent(self) -> tuple[str, ...]:
        r = self.rng
        if r.random() < 0.7:
            return (r.choice(NUMS), "PERCENT")
        return (r.choice(NUMS[:12]), "POINT", r.choice(NUMS[:12]), "PERCENT")

    def word(self, slot: str) -> str:
        r = self.rng
        lists = {"TITLE": TITLES, "NOUN": NOUNS, "VERB": VERBS, "VERBB": VERBB, "ADJ": ADJ, "PRON": PRON,
                 "ADV": ADV}
        if slot == "NOUN" and r.random() < 0.15:
            return r.choice(self.rare_words)
        return self._zipf(lists[slot])

    def line(self) -> AnnotatedTranscript:
        r = self.rng
        slots = {"PER": (self.person, P), "SUR": (lambda: (self.surname(),), P), "LOC": (self.location, L),
                 "ORG": (self.organization, O), "DATE": (self.date, D), "TIME": (self.time, T),
                 "MONEY": (self.money, M), "PCT": (self.percent, R)}
        tokens: list[str] = []
        spans = []
        for item in r.choice(TEMPLATES).split():
            if item.startswith("<"):
                make, cls = slots[item[1:-1]]
                words = make()
                spans.append(EntitySpan(len(tokens), len(words), cls))
                tokens.extend(words)
            elif item.startswith("{"):
                tokens.append(self.word(item[1:-1]))
            else:
                tokens.append(item)
            if r.random() < 0.04:
                tokens.append(r.choice(FUNC + self.rare_words[:200]))
        return AnnotatedTranscript(tuple(tokens), tuple(spans))


def seed_corpus(n_tokens: int = 30000, seed: int = 0, lines_per_doc: int = 20) -> list[AnnotatedTranscript]:
    g = SeedGrammar(seed)
    docs, lines, total = [], [], 0
    while total < n_tokens:
        t = g.line()
        lines.append(t)
        total += len(t.tokens)
        if len(lines) == lines_per_doc:
            docs.append(AnnotatedTranscript.from_lines(lines, f"seed{len(docs):04d}"))
            lines = []
    if lines:
        docs.append(AnnotatedTranscript.from_lines(lines, f"seed{len(docs):04d}"))
    return docs
