"""Propositional team logic: syntax, team semantics, the exhaustive decision
procedure, and the two translations to and from powerset Kripke models.

A team is a set of classical valuations; split disjunction quantifies over
covers of the team by two subteams, which is exactly the binary-diamond
clause over the powerset-union frame. Restricting Kripke valuations to
principal ones (all subsets of a fixed world set) makes the correspondence
exact in both directions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from tilemodal import formula as fm
from tilemodal.frames import Model, bits, mask_of, powerset_frame
from tilemodal.semantics import Evaluator


class TeamFormula:
    __slots__ = ()

    def __repr__(self):
        return f"<{type(self).__name__} {render_team_formula(self)!r}>"


@dataclass(frozen=True, repr=False)
class Letter(TeamFormula):
    name: str


@dataclass(frozen=True, repr=False)
class And(TeamFormula):
    left: TeamFormula
    right: TeamFormula


@dataclass(frozen=True, repr=False)
class SplitOr(TeamFormula):
    """Local disjunction: the team splits as a union of two subteams."""

    left: TeamFormula
    right: TeamFormula


@dataclass(frozen=True, repr=False)
class GlobalOr(TeamFormula):
    """Inquisitive disjunction: the whole team satisfies one disjunct."""

    left: TeamFormula
    right: TeamFormula


@dataclass(frozen=True, repr=False)
class BoolNeg(TeamFormula):
    sub: TeamFormula


def team_letters(f: TeamFormula) -> set[str]:
    if isinstance(f, Letter):
        return {f.name}
    if isinstance(f, BoolNeg):
        return team_letters(f.sub)
    return team_letters(f.left) | team_letters(f.right)


@dataclass(frozen=True)
class Team:
    """Valuations as bit rows over an ordered letter inventory."""

    inventory: tuple[str, ...]
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        limit = 1 << len(self.inventory)
        if any(not (0 <= row < limit) for row in self.members):
            raise ValueError("row out of range for the inventory")

    def value(self, row: int, letter: str) -> int:
        return (row >> self.inventory.index(letter)) & 1


class _TeamEvaluator:
    """Memoized team satisfaction for a fixed inventory."""

    def __init__(self, inventory: tuple[str, ...]):
        self.inventory = inventory
        self._memo: dict[tuple[frozenset[int], int], bool] = {}
        self._keep: list[TeamFormula] = []

    def sat(self, members: frozenset[int], f: TeamFormula) -> bool:
        key = (members, id(f))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._keep.append(f)
        val = self._eval(members, f)
        self._memo[key] = val
        return val

    def _eval(self, members: frozenset[int], f: TeamFormula) -> bool:
        if isinstance(f, Letter):
            col = self.inventory.index(f.name)
            return all((row >> col) & 1 for row in members)
        if isinstance(f, BoolNeg):
            return not self.sat(members, f.sub)
        if isinstance(f, And):
            return self.sat(members, f.left) and self.sat(members, f.right)
        if isinstance(f, GlobalOr):
            return self.sat(members, f.left) or self.sat(members, f.right)
        if isinstance(f, SplitOr):
            rows = sorted(members)
            # each row goes left, right, or both: all covers of the team
            for assign in itertools.product((0, 1, 2), repeat=len(rows)):
                left = frozenset(r for r, a in zip(rows, assign) if a != 1)
                right = frozenset(r for r, a in zip(rows, assign) if a != 0)
                if self.sat(left, f.left) and self.sat(right, f.right):
                    return True
            return False
        raise TypeError(f"not a TeamFormula: {f!r}")


def team_sat(t: Team, f: TeamFormula) -> bool:
    """Team satisfaction; the empty team satisfies every letter."""
    missing = team_letters(f) - set(t.inventory)
    if missing:
        raise ValueError(f"letters {sorted(missing)} not in inventory")
    return _TeamEvaluator(t.inventory).sat(t.members, f)


@dataclass(frozen=True)
class TeamValid:
    pass


@dataclass(frozen=True)
class Counterteam:
    team: Team


def ptl_decide(f: TeamFormula) -> TeamValid | Counterteam:
    """Exhaustive validity check over all teams on the letters of f.

    Teams are visited by cardinality, then lexicographic bit pattern over the
    row indices, and the first failing team is returned.
    """
    inventory = tuple(sorted(team_letters(f)))
    if len(inventory) > 4:
        raise ValueError("at most 4 letters are supported")
    rows = 1 << len(inventory)
    ev = _TeamEvaluator(inventory)
    patterns = sorted(range(1 << rows), key=lambda m: (m.bit_count(), m))
    for pattern in patterns:
        members = frozenset(bits(pattern))
        if not ev.sat(members, f):
            return Counterteam(Team(inventory, members))
    return TeamValid()


def translate(f: TeamFormula) -> fm.Formula:
    """Split disjunction to the diamond, global disjunction to disjunction,
    Boolean negation to negation."""
    if isinstance(f, Letter):
        return fm.Letter(f.name)
    if isinstance(f, And):
        return fm.And(translate(f.left), translate(f.right))
    if isinstance(f, SplitOr):
        return fm.Comp(translate(f.left), translate(f.right))
    if isinstance(f, GlobalOr):
        return fm.Or(translate(f.left), translate(f.right))
    if isinstance(f, BoolNeg):
        return fm.Neg(translate(f.sub))
    raise TypeError(f"not a TeamFormula: {f!r}")


def translate_back(g: fm.Formula) -> TeamFormula | None:
    """Inverse of translate on its image; None on any other node."""
    if isinstance(g, fm.Letter):
        return Letter(g.name)
    if isinstance(g, fm.And):
        left, right = translate_back(g.left), translate_back(g.right)
    elif isinstance(g, fm.Comp):
        left, right = translate_back(g.left), translate_back(g.right)
    elif isinstance(g, fm.Or):
        left, right = translate_back(g.left), translate_back(g.right)
    elif isinstance(g, fm.Neg):
        sub = translate_back(g.sub)
        return BoolNeg(sub) if sub is not None else None
    else:
        return None
    if left is None or right is None:
        return None
    if isinstance(g, fm.And):
        return And(left, right)
    if isinstance(g, fm.Comp):
        return SplitOr(left, right)
    return GlobalOr(left, right)


def to_kripke(f: TeamFormula) -> tuple[Model, dict[frozenset[int], int]]:
    """Model over the powerset frame of all valuations on the letters of f.

    Worlds are teams; the valuation of each letter is the powerset of its
    true valuations, so Kripke satisfaction of the translation agrees with
    team satisfaction at every world. The returned map sends a team (a
    frozenset of rows) to its world index.
    """
    inventory = tuple(sorted(team_letters(f)))
    if len(inventory) > 3:
        raise ValueError("at most 3 letters are supported")
    ground = 1 << len(inventory)
    frame = powerset_frame(ground, "union")
    valuation = {}
    for j, p in enumerate(inventory):
        true_rows = mask_of(r for r in range(ground) if (r >> j) & 1)
        valuation[p] = {w for w in range(1 << ground) if w & ~true_rows == 0}
    model = Model(frame, valuation)
    state_map = {
        frozenset(bits(w)): w for w in range(1 << ground)
    }
    return model, state_map


class NonPrincipalValuation(ValueError):
    def __init__(self, letter: str):
        self.letter = letter
        super().__init__(f"valuation of {letter!r} is not a powerset")


@dataclass(frozen=True)
class PMorphismReport:
    """Outcome of checking that world-to-team collapse is a p-morphism.

    forth: the image of every union triple is again a union triple.
    back: every split of an image team lifts to a split of the world.
    equivalence: Kripke satisfaction of each supplied formula's translation
    agrees with team satisfaction of its image, at every world.
    """

    forth: bool
    back: bool
    equivalence: bool
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return self.forth and self.back and self.equivalence


def from_kripke(model: Model, formulas: tuple[TeamFormula, ...] = ()) -> tuple[
        dict[int, int], PMorphismReport]:
    """Collapse a principal-valuation powerset model onto teams.

    The model's frame must be powerset_frame(k, "union"); every letter's
    valuation must be the powerset of some world set, else
    NonPrincipalValuation is raised. Returns the map from ground elements to
    valuation rows over the model's (sorted) letters, and the p-morphism
    report for the collapse, checking satisfaction equivalence on the given
    formulas.
    """
    frame = model.frame
    k = frame.size.bit_length() - 1
    if k < 1 or frame.size != 1 << k or frame != powerset_frame(k, "union"):
        raise ValueError("model is not over a powerset union frame")
    letters = tuple(sorted(model.valuation))
    tops: dict[str, int] = {}
    for p in letters:
        mask = model.letter_mask(p)
        top = 0
        for w in bits(mask):
            top |= w
        expect = mask_of(w for w in range(1 << k) if w & ~top == 0)
        if mask != expect:
            raise NonPrincipalValuation(p)
        tops[p] = top

    def v_row(x: int) -> int:
        row = 0
        for j, p in enumerate(letters):
            if (tops[p] >> x) & 1:
                row |= 1 << j
        return row

    team_map = {x: v_row(x) for x in range(k)}

    def image(world: int) -> frozenset[int]:
        return frozenset(team_map[x] for x in bits(world))

    failures = []
    forth = True
    for (x, y, z) in frame.triples:
        if image(x) != image(y) | image(z):
            forth = False
            failures.append(f"forth fails at triple {(x, y, z)}")
    back = True
    for world in range(1 << k):
        img = image(world)
        subteams = [frozenset(c) for r in range(len(img) + 1)
                    for c in itertools.combinations(sorted(img), r)]
        for s1 in subteams:
            for s2 in subteams:
                if s1 | s2 != img:
                    continue
                y = mask_of(x for x in bits(world) if team_map[x] in s1)
                z = mask_of(x for x in bits(world) if team_map[x] in s2)
                if y | z != world or image(y) != s1 or image(z) != s2:
                    back = False
                    failures.append(
                        f"back fails at world {world} split {sorted(s1)}|{sorted(s2)}"
                    )
    equivalence = True
    ev = Evaluator(model)
    for tf in formulas:
        extra = team_letters(tf) - set(letters)
        if extra:
            raise ValueError(f"formula mentions unvalued letters {sorted(extra)}")
        mask = ev.mask(translate(tf))
        for world in range(1 << k):
            team = Team(letters, image(world))
            if team_sat(team, tf) != bool((mask >> world) & 1):
                equivalence = False
                failures.append(
                    f"equivalence fails at world {world} for "
                    f"{render_team_formula(tf)}"
                )
    return team_map, PMorphismReport(forth, back, equivalence, tuple(failures))


# -- concrete syntax ----------------------------------------------------------
#
# Letters as in the modal grammar; `&` conjunction, `|` split disjunction,
# `\|/` global disjunction, `~~` Boolean negation. Precedence loosest to
# tightest: \|/, |, &, ~~; the binary connectives are left-associative.

_T_GLOBAL = 1
_T_SPLIT = 2
_T_AND = 3
_T_NEG = 4
_T_ATOM = 5


class TeamSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"syntax error at byte {self.offset}: {message}")


def _team_tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        m = fm.IDENT_RE.match(text, i)
        if m:
            toks.append(("ident", m.group(0), i))
            i = m.end()
            continue
        for sym in ("\\|/", "~~", "&", "|", "(", ")"):
            if text.startswith(sym, i):
                toks.append((sym, sym, i))
                i += len(sym)
                break
        else:
            raise TeamSyntaxError(text, i, f"unexpected character {c!r}")
    toks.append(("end", "", n))
    return toks


def parse_team_formula(text: str) -> TeamFormula:
    toks = _team_tokenize(text)
    pos = 0

    def peek() -> str:
        return toks[pos][0]

    def advance():
        nonlocal pos
        pos += 1

    def global_or() -> TeamFormula:
        f = split_or()
        while peek() == "\\|/":
            advance()
            f = GlobalOr(f, split_or())
        return f

    def split_or() -> TeamFormula:
        f = conjunction()
        while peek() == "|":
            advance()
            f = SplitOr(f, conjunction())
        return f

    def conjunction() -> TeamFormula:
        f = negation()
        while peek() == "&":
            advance()
            f = And(f, negation())
        return f

    def negation() -> TeamFormula:
        if peek() == "~~":
            advance()
            return BoolNeg(negation())
        return atom()

    def atom() -> TeamFormula:
        kind, value, at = toks[pos]
        if kind == "ident":
            advance()
            return Letter(value)
        if kind == "(":
            advance()
            f = global_or()
            if peek() != ")":
                raise TeamSyntaxError(text, toks[pos][2], "expected ')'")
            advance()
            return f
        raise TeamSyntaxError(text, at, f"expected a letter or '(', found {value!r}")

    f = global_or()
    if peek() != "end":
        raise TeamSyntaxError(text, toks[pos][2], "trailing input")
    return f


def _render_team(f: TeamFormula) -> tuple[str, int]:
    if isinstance(f, Letter):
        return f.name, _T_ATOM
    if isinstance(f, BoolNeg):
        s, prec = _render_team(f.sub)
        if prec < _T_NEG:
            s = f"({s})"
        return "~~" + s, _T_NEG
    ops = {GlobalOr: ("\\|/", _T_GLOBAL), SplitOr: ("|", _T_SPLIT), And: ("&", _T_AND)}
    op, prec = ops[type(f)]
    ls, lp = _render_team(f.left)
    rs, rp = _render_team(f.right)
    if lp < prec:
        ls = f"({ls})"
    if rp <= prec:  # left-associative: same-level right children need parens
        rs = f"({rs})"
    return f"{ls} {op} {rs}", prec


def render_team_formula(f: TeamFormula) -> str:
    return _render_team(f)[0]
