"""Formal Laurent expansions in the six coordinates z, w, t, z-w, z-t, w-t.

A target space is described by a :class:`SpaceTag`: an ordered tower of
levels, innermost (dominant) first.  A level is either a single coordinate,
giving a Laurent factor ``((x))``, or a block of three coordinates spanning
two dimensions, giving a localized power-series factor such as
``[[w,t]][w^-1, t^-1, (w-t)^-1]``.  ``V((z))((w))`` is the tower ``z ; w``.

Expanding a power ``l^n`` of a coordinate into a tower follows one rule.
Split ``l`` along the levels.  The part on the first level it touches must be
``+-`` one coordinate ``u`` of that level.  Everything else, ``v``, lives on
later levels.  Then ``l^n = sum_k binom(n, k) u^(n-k) v^k``, where ``v^k`` is a
finite multinomial sum.  Every expansion convention for pairs of
coordinates, the three-coordinate binomials, and the trinomial identities
used when composing embeddings are instances of this rule.

Truncation is by weight.  A coordinate on level ``p`` has weight ``p``, and
a term's weight is the exponent-weighted sum.  Every term of ``u^(n-k) v^k``
exceeds the leading weight by at least ``k``, so "all terms up to weight W"
is a finite, exactly computable set.  A :class:`TruncatedSeries` records
the weight ``known_below`` up to which its coefficients are exact.

>>> s = expand((0, 0, 0, -1, 0, 0), "z;w", frontier=3)
>>> s.to_text()
'z^-1 + z^-2*w + z^-3*w^2 + z^-4*w^3'
>>> expand((0, 2, 0, 0, 0, 0), "z;z-w").to_text()
'z^2 - 2*z*(z-w) + (z-w)^2'
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, inf
from typing import Iterable, Sequence

import sympy

__all__ = [
    "COORDINATES",
    "SpaceTag",
    "TruncatedSeries",
    "UniversalMonomial",
    "NoSuchEmbedding",
    "DivergentInTarget",
    "TagMismatch",
    "SPACES",
    "DIAGRAMS",
    "BASIC_EMBEDDINGS",
    "tag",
    "expand",
    "expand_series",
    "series_add",
    "series_mul",
    "taylor_shift",
    "weird_isom",
    "verify_diagram",
    "DiagramReport",
]

# exponent order of a universal monomial z^a w^b t^c (z-w)^d (z-t)^f (w-t)^g
COORDINATES = ("z", "w", "t", "z-w", "z-t", "w-t")
_VECTORS = {
    "z": (1, 0, 0),
    "w": (0, 1, 0),
    "t": (0, 0, 1),
    "z-w": (1, -1, 0),
    "z-t": (1, 0, -1),
    "w-t": (0, 1, -1),
}


class NoSuchEmbedding(ValueError):
    """The target tower has no expansion for the given coordinate."""


class DivergentInTarget(ArithmeticError):
    """A coefficient would receive infinitely many contributions."""


class TagMismatch(TypeError):
    """Binary operation on series that live in different spaces."""


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class SpaceTag:
    """A tower of levels, innermost first.

    ``levels`` is a tuple of coordinate tuples; a 1-tuple is a Laurent level
    and a 3-tuple a localized power-series block.  The universal space is a
    single block holding all six coordinates.
    """

    name: str
    levels: tuple

    @property
    def coords(self) -> tuple:
        return tuple(c for lev in self.levels for c in lev)

    @property
    def weights(self) -> tuple:
        return tuple(p for p, lev in enumerate(self.levels) for _ in lev)

    @property
    def is_pure(self) -> bool:
        return all(len(lev) == 1 for lev in self.levels)

    def describe(self) -> str:
        if self.levels == (COORDINATES,):
            return "V[[z,w,t]][z^-1,w^-1,t^-1,(z-w)^-1,(z-t)^-1,(w-t)^-1]"
        out = "V"
        for lev in self.levels:
            if len(lev) == 1:
                out += f"(({lev[0]}))"
            else:
                inv = ",".join(_paren(c) + "^-1" for c in lev)
                out += f"[[{lev[0]},{lev[1]}]][{inv}]"
        return out

    def __str__(self) -> str:
        return self.name


def _paren(c: str) -> str:
    return f"({c})" if "-" in c else c


def _level_from_text(text: str) -> tuple:
    text = text.strip()
    if text.startswith("{"):
        parts = tuple(p.strip() for p in text.strip("{}").split(","))
    else:
        parts = (text,)
    for p in parts:
        if p not in _VECTORS:
            raise ValueError(f"unknown coordinate {p!r}")
    return parts


def _make(name: str, spec: str) -> SpaceTag:
    return SpaceTag(name, tuple(_level_from_text(x) for x in spec.split(";")))


UNIVERSAL = SpaceTag("ijkl", (COORDINATES,))

_SPACE_SPECS = {
    # star
    "i(jkl)": "z;{w,t,w-t}",
    "ij(kl)": "{z,w,z-w};t",
    "i(jk)l": "{z,t,z-t};w-t",
    "[(ij)k]l": "{w,t,w-t};z-w",
    "(ijk)l": "t;{z-w,w-t,z-t}",
    "i(j(kl))": "z;w;t",
    "i((jk)l)": "z;t;w-t",
    "(ij)(kl)": "w;t;z-w",
    "(i(jk))l": "t;z-t;w-t",
    "((ij)k)l": "t;w-t;z-w",
    # octagons
    "j((ki)l)": "w;z;z-t",
    "((jk)i)l": "z;z-t;w-t",
    "(j(ki))l": "z;z-w;z-t",
    "j((ik)l)": "w;t;z-t",
    "(j(ik))l": "t;w-t;z-t",
    "((ji)k)l": "t;z-t;z-w",
    "(k(ij))l": "w;w-t;z-w",
    "((ki)j)l": "w;z-w;z-t",
    "((ik)j)l": "w;w-t;z-t",
    "(i(kj))l": "w;z-w;w-t",
    "i((kj)l)": "z;w;w-t",
    "j([ik]l)": "w;{z,t,z-t}",
    "j(ki)l": "{z,w,z-w};z-t",
    "j(ik)l": "{w,t,w-t};z-t",
    "([jk]i)l": "z;{z-w,z-t,w-t}",
    "[i(jk)]l": "{z,t,z-t};w-t",
    "([ik]j)l": "w;{z-w,z-t,w-t}",
    "i(kj)l": "{z,w,z-w};w-t",
    "i([jk]l)": "z;{w,t,w-t}",
}

SPACES: dict[str, SpaceTag] = {"ijkl": UNIVERSAL}
SPACES.update({k: _make(k, v) for k, v in _SPACE_SPECS.items()})
# the same spaces under their alternative names
SPACES["([ij]k)l"] = SPACES["(ijk)l"]
SPACES["[(jk)i]l"] = SPACES["[i(jk)]l"]

# the two-variable spaces of the basic embeddings; the first two share a
# source block {z, w, z-w}, the last two the block {z-w, w-t, z-t}
BASIC_EMBEDDINGS = (
    ("{z,w,z-w}", "z;w"),
    ("{z,w,z-w}", "w;z"),
    ("{z,w,z-w}", "z;z-w"),
    ("{z,w,z-w}", "w;z-w"),
    ("{z-w,w-t,z-t}", "z-t;w-t"),
    ("{z-w,w-t,z-t}", "w-t;z-w"),
)

# arrows from the first-layer spaces to the sinks, per diagram
DIAGRAMS: dict[str, tuple] = {
    "star": (
        ("i(jkl)", "i(j(kl))"), ("i(jkl)", "i((jk)l)"),
        ("ij(kl)", "i(j(kl))"), ("ij(kl)", "(ij)(kl)"),
        ("i(jk)l", "i((jk)l)"), ("i(jk)l", "(i(jk))l"),
        ("[(ij)k]l", "(ij)(kl)"), ("[(ij)k]l", "((ij)k)l"),
        ("(ijk)l", "(i(jk))l"), ("(ijk)l", "((ij)k)l"),
    ),
    "octagon-1": (
        ("j(ki)l", "j((ki)l)"), ("j(ki)l", "(j(ki))l"),
        ("j([ik]l)", "j((ki)l)"), ("j([ik]l)", "j((ik)l)"),
        ("j(ik)l", "j((ik)l)"), ("j(ik)l", "(j(ik))l"),
        ("([jk]i)l", "(j(ki))l"), ("([jk]i)l", "((jk)i)l"),
        ("([ij]k)l", "(j(ik))l"), ("([ij]k)l", "((ji)k)l"),
        ("([ij]k)l", "(i(jk))l"), ("([ij]k)l", "((ij)k)l"),
        ("[(jk)i]l", "((jk)i)l"), ("[(jk)i]l", "(i(jk))l"),
    ),
    "octagon-2": (
        ("([ik]j)l", "((ki)j)l"), ("([ik]j)l", "(k(ij))l"),
        ("([ik]j)l", "((ik)j)l"), ("([ik]j)l", "(i(kj))l"),
        ("[(ij)k]l", "(k(ij))l"), ("[(ij)k]l", "((ij)k)l"),
        ("i(kj)l", "(i(kj))l"), ("i(kj)l", "i((kj)l)"),
        ("([ij]k)l", "((ij)k)l"), ("([ij]k)l", "(i(jk))l"),
        ("i(jk)l", "(i(jk))l"), ("i(jk)l", "i((jk)l)"),
        ("i([jk]l)", "i((kj)l)"), ("i([jk]l)", "i((jk)l)"),
    ),
}


def tag(spec) -> SpaceTag:
    """Look up a space by name (``"i(j(kl))"``) or parse a tower (``"z;w;t"``)."""
    if isinstance(spec, SpaceTag):
        return spec
    if spec in SPACES:
        return SPACES[spec]
    if spec in ("universal", "ijkl"):
        return UNIVERSAL
    return _make(spec, spec)


# ---------------------------------------------------------------------------
# the expansion rule


@lru_cache(maxsize=None)
def _decompose(coord: str, levels: tuple):
    """``(u position, sign, [(v position, coefficient), ...])`` for ``coord``.

    Positions index the flattened coordinate list of the tower.
    """
    flat = [c for lev in levels for c in lev]
    basis, owner = [], []
    for p, lev in enumerate(levels):
        picks = lev[:1] if len(lev) == 1 else _block_basis(lev)
        for c in picks:
            basis.append(c)
            owner.append(p)
    B = sympy.Matrix([_VECTORS[c] for c in basis]).T
    target = sympy.Matrix(_VECTORS[coord])
    try:
        sol, params = B.gauss_jordan_solve(target)
    except ValueError:
        raise NoSuchEmbedding(f"{coord} is not in the span of {_levels_text(levels)}") from None
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    comps: dict[int, list] = {}
    for x, c, p in zip(sol, basis, owner):
        if x != 0:
            comps.setdefault(p, []).append((c, int(x)))
    if not comps:
        raise NoSuchEmbedding("zero coordinate")
    first = min(comps)
    lead_vec = _combine(comps[first])
    u = None
    for c in levels[first]:
        for sign in (1, -1):
            if lead_vec == tuple(sign * a for a in _VECTORS[c]):
                u = (flat.index(c), sign)
    if u is None:
        raise NoSuchEmbedding(f"{coord} has no dominant coordinate in {_levels_text(levels)}")
    rest = []
    for p in sorted(comps):
        if p == first:
            continue
        vec = _combine(comps[p])
        single = [(c, s) for c in levels[p] for s in (1, -1) if tuple(s * a for a in _VECTORS[c]) == vec]
        if single:
            c, s = single[0]
            rest.append((flat.index(c), s))
        else:
            rest.extend((flat.index(c), x) for c, x in comps[p])
    return u[0], u[1], tuple(rest)


def _block_basis(lev: tuple) -> tuple:
    for a, b in combinations(lev, 2):
        va, vb = _VECTORS[a], _VECTORS[b]
        cross = (va[1] * vb[2] - va[2] * vb[1], va[2] * vb[0] - va[0] * vb[2], va[0] * vb[1] - va[1] * vb[0])
        if any(cross):
            if len(lev) == 6:  # universal block: three independent coordinates
                return ("z", "w", "t")
            return (a, b)
    raise ValueError(f"degenerate block {lev}")


def _combine(parts) -> tuple:
    out = [0, 0, 0]
    for c, x in parts:
        for q in range(3):
            out[q] += x * _VECTORS[c][q]
    return tuple(out)


def _levels_text(levels) -> str:
    return ";".join(lev[0] if len(lev) == 1 else "{" + ",".join(lev) + "}" for lev in levels)


def _binom(n: int, k: int) -> int:
    """Generalized binomial coefficient, ``n`` any integer, ``k >= 0``."""
    num = 1
    for q in range(k):
        num *= n - q
    return num // factorial(k)


def _compositions(k: int, parts: int):
    if parts == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(k - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _power_terms(coord: str, n: int, levels: tuple, excess: int):
    """Terms of ``coord^n`` with weight excess at most ``excess``.

    Returns ``(terms, lead, complete)``; ``terms`` is a tuple of
    ``(exponents, coefficient, weight)`` sorted by weight.
    """
    flat = [c for lev in levels for c in lev]
    weights = [p for p, lev in enumerate(levels) for _ in lev]
    width = len(flat)
    if n == 0:
        return (((0,) * width, 1, 0),), 0, True
    upos, sign, rest = _decompose(coord, levels)
    lead = n * weights[upos]
    if not rest:
        e = [0] * width
        e[upos] = n
        return ((tuple(e), sign ** (n % 2), lead),), lead, True
    deltas = [weights[p] - weights[upos] for p, _ in rest]
    terms = {}
    # a finite binomial is complete unless some of its terms are cut off
    complete = n >= 0
    kmax = min(n, excess) if n >= 0 else excess
    if n > excess:
        complete = False
    for k in range(0, kmax + 1):
        b = _binom(n, k) * (sign if (n - k) % 2 else 1)
        for ks in _compositions(k, len(rest)):
            ex = sum(kr * d for kr, d in zip(ks, deltas))
            if ex > excess:
                complete = False
                continue
            coef = b * _multinomial(ks)
            for kr, (_, beta) in zip(ks, rest):
                coef *= beta ** kr
            e = [0] * width
            e[upos] += n - k
            for kr, (p, _) in zip(ks, rest):
                e[p] += kr
            key = tuple(e)
            terms[key] = terms.get(key, 0) + coef
    out = tuple(sorted(((e, c, lead + _excess(e, upos, n, weights)) for e, c in terms.items() if c),
                       key=lambda x: (x[2], x[0])))
    return out, lead, complete


def _excess(e, upos, n, weights) -> int:
    return sum(x * w for x, w in zip(e, weights)) - n * weights[upos]


def _multinomial(ks) -> int:
    out = factorial(sum(ks))
    for k in ks:
        out //= factorial(k)
    return out


# ---------------------------------------------------------------------------
# series


@dataclass(frozen=True)
class UniversalMonomial:
    """``coefficient * z^a w^b t^c (z-w)^d (z-t)^f (w-t)^g``."""

    exponents: tuple
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        if len(self.exponents) != 6:
            raise ValueError("a universal monomial has six exponents")
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))


class TruncatedSeries:
    """Exact coefficients of a series up to a weight bound.

    Attributes:
        tag: ambient space.
        terms: ``{exponent tuple: coefficient}`` over ``tag.coords``; only
            terms of weight at most ``known_below`` are kept.
        lead: a lower bound for the weight of every term.
        known_below: coefficients of weight at most this are exact
            (``math.inf`` for an exactly known series).
    """

    __slots__ = ("tag", "terms", "lead", "known_below", "_weights")

    def __init__(self, tag: SpaceTag, terms: dict, lead, known_below=inf):
        self.tag = tag
        self._weights = tag.weights
        self.lead = lead
        self.known_below = known_below
        self.terms = {e: c for e, c in terms.items() if c != 0 and self.weight(e) <= known_below}

    def weight(self, exps) -> int:
        return sum(x * w for x, w in zip(exps, self._weights))

    @property
    def frontier(self):
        """Exact range above the leading weight."""
        return self.known_below - self.lead

    @classmethod
    def zero(cls, space) -> "TruncatedSeries":
        return cls(tag(space), {}, inf, inf)

    @classmethod
    def one(cls, space) -> "TruncatedSeries":
        t = tag(space)
        return cls(t, {(0,) * len(t.coords): 1}, 0, inf)

    def _check(self, other):
        if not isinstance(other, TruncatedSeries) or other.tag.levels != self.tag.levels:
            raise TagMismatch(f"{self.tag} vs {getattr(other, 'tag', other)}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.tag, out, min(self.lead, other.lead), min(self.known_below, other.known_below))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.tag, {e: -c for e, c in self.terms.items()}, self.lead, self.known_below)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries(self.tag, {e: c * v for e, v in self.terms.items()}, self.lead, self.known_below)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        bound = min(self.known_below + other.lead, other.known_below + self.lead)
        return TruncatedSeries(self.tag, _mul_terms(self._sorted(), other._sorted(), bound),
                               self.lead + other.lead, bound)

    def _sorted(self):
        return sorted(((e, c, self.weight(e)) for e, c in self.terms.items()), key=lambda x: x[2])

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), 0)

    def first_difference(self, other: "TruncatedSeries"):
        """First exponent (by weight, then lexicographic) where the series differ
        below both frontiers, or ``None``."""
        self._check(other)
        bound = min(self.known_below, other.known_below)
        keys = {e for e in self.terms if self.weight(e) <= bound} | {e for e in other.terms if other.weight(e) <= bound}
        for e in sorted(keys, key=lambda e: (self.weight(e), e)):
            if self.terms.get(e, 0) != other.terms.get(e, 0):
                return e
        return None

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        return self.first_difference(other) is None

    def truncate(self, known_below) -> "TruncatedSeries":
        return TruncatedSeries(self.tag, self.terms, self.lead, min(self.known_below, known_below))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        coords = self.tag.coords
        parts = []
        for e in sorted(self.terms, key=lambda e: (self.weight(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(_paren(x) + (f"^{k}" if k != 1 else "") for x, k in zip(coords, e) if k)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.tag.name}, {len(self.terms)} terms, known_below={self.known_below})"


def _mul_terms(a, b, bound) -> dict:
    """Product of two weight-sorted term lists, keeping weight <= bound."""
    out: dict = {}
    if not a or not b:
        return out
    bmin = b[0][2]
    for ea, ca, wa in a:
        if wa + bmin > bound:
            break
        for eb, cb, wb in b:
            if wa + wb > bound:
                break
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return out


def _product_of_powers(powers, levels: tuple, excess: int, bound=None):
    """Multiply the expansions of ``coord^n`` for ``(coord, n)`` in ``powers``.

    ``bound`` caps the absolute weight kept; by default the product is
    exact up to ``lead + excess``.
    """
    width = sum(len(lev) for lev in levels)
    parts = [_power_terms(c, n, levels, excess) for c, n in powers if n]
    lead = sum(p[1] for p in parts)
    known = inf if all(p[2] for p in parts) else lead + excess
    limit = known if bound is None else bound
    acc = [((0,) * width, 1, 0)]
    acc_lead = 0
    rest_lead = lead
    for terms, plead, _ in parts:
        rest_lead -= plead
        prod = _mul_terms(acc, list(terms), limit - rest_lead)
        w = [p for p, lev in enumerate(levels) for _ in lev]
        acc = sorted(((e, c, sum(x * y for x, y in zip(e, w))) for e, c in prod.items() if c), key=lambda x: x[2])
        acc_lead += plead
    return {e: c for e, c, _ in acc}, lead, min(known, limit)


def expand(monomial, target, frontier: int = 8) -> TruncatedSeries:
    """Expand a universal monomial in the space ``target``.

    Args:
        monomial: a :class:`UniversalMonomial` or an exponent six-tuple
            ``(a, b, c, d, f, g)``.
        target: a :class:`SpaceTag`, a registered space name, or a tower
            such as ``"z;w"``.
        frontier: exact range above the leading weight.

    Raises:
        NoSuchEmbedding: some coordinate has no expansion in ``target``.
    """
    if not isinstance(monomial, UniversalMonomial):
        monomial = UniversalMonomial(tuple(monomial))
    T = tag(target)
    terms, lead, known = _product_of_powers(tuple(zip(COORDINATES, monomial.exponents)), T.levels, frontier)
    s = TruncatedSeries(T, terms, lead, known)
    return s.scale(monomial.coefficient) if monomial.coefficient != 1 else s


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """``a + b``, known below the smaller of the two frontiers."""
    return a + b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """``a * b``, known below the largest weight both truncations determine."""
    return a * b


def expand_series(s: TruncatedSeries, target, frontier: int = 8) -> TruncatedSeries:
    """Push a series along the embedding ``s.tag -> target``.

    Each term is a product of coordinate powers of ``s.tag``; each power is
    expanded in ``target`` and the products are summed.  The result is exact
    up to ``lead + frontier`` in ``target``.
    """
    T = tag(target)
    coords = s.tag.coords
    leads = []
    jobs = []
    for e, c in s.terms.items():
        powers = tuple((x, k) for x, k in zip(coords, e) if k)
        plead = sum(_power_terms(x, k, T.levels, frontier)[1] for x, k in powers)
        leads.append(plead)
        jobs.append((powers, c, plead))
    if not jobs:
        return TruncatedSeries.zero(T)
    lead = min(leads)
    limit = lead + frontier
    out: dict = {}
    exact = s.known_below == inf
    for powers, c, plead in jobs:
        if plead > limit:
            continue
        terms, _, known = _product_of_powers(powers, T.levels, frontier, bound=limit)
        exact = exact and known == inf
        for e, v in terms.items():
            out[e] = out.get(e, 0) + c * v
    return TruncatedSeries(T, out, lead, inf if exact else limit)


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class DiagramReport:
    ok: bool
    diagram: str
    exponents: tuple
    frontier: int
    comparisons: int
    mismatch: dict | None = field(default=None)

    def describe(self) -> str:
        if self.ok:
            return f"{self.diagram}: {self.comparisons} path pairs agree below frontier {self.frontier}"
        m = self.mismatch
        return (f"{self.diagram}: paths via {m['via'][0]} and {m['via'][1]} to {m['sink']} differ at "
                f"{m['exponents']}: {m['coefficients'][0]} != {m['coefficients'][1]}")


def verify_diagram(diagram: str, exponents: Sequence[int], frontier: int = 8,
                   sources: dict | None = None) -> DiagramReport:
    """Expand a monomial along every path of a diagram and compare at each sink.

    Every path runs universal space -> first-layer space -> sink; two paths
    ending in the same sink are compared below the smaller frontier.
    ``sources`` may supply first-layer series in place of the expansions
    (used to check that a wrong convention is caught).
    """
    if diagram not in DIAGRAMS:
        raise KeyError(f"unknown diagram {diagram!r}; choose from {sorted(DIAGRAMS)}")
    exps = tuple(int(e) for e in exponents)
    middle: dict[str, TruncatedSeries] = dict(sources or {})
    at_sink: dict[str, list] = {}
    for src, dst in DIAGRAMS[diagram]:
        if src not in middle:
            middle[src] = expand(exps, SPACES[src], frontier)
        at_sink.setdefault(dst, []).append((src, expand_series(middle[src], SPACES[dst], frontier)))
    comparisons = 0
    for sink, routes in at_sink.items():
        for (sa, a), (sb, b) in combinations(routes, 2):
            if SPACES[sa] is SPACES[sb]:
                continue
            comparisons += 1
            bad = a.first_difference(b)
            if bad is not None:
                mismatch = {"sink": sink, "via": (sa, sb), "exponents": bad,
                            "coefficients": (a.coefficient(bad), b.coefficient(bad))}
                return DiagramReport(False, diagram, exps, frontier, comparisons, mismatch)
    return DiagramReport(True, diagram, exps, frontier, comparisons)


# ---------------------------------------------------------------------------
# Taylor shifts


def taylor_shift(s: TruncatedSeries, shift: str, along: str, scale=1, frontier: int = 8) -> TruncatedSeries:
    """``exp(scale * shift * d/d along)`` applied term by term.

    ``d/d along`` acts on the coordinate ``along`` alone, treating the other
    coordinates of the tower as independent.  Both coordinates must be
    coordinates of the (pure) tower of ``s``.  An exactly known input whose
    image is an infinite series is cut off at ``lead + frontier``.

    Raises:
        DivergentInTarget: ``shift`` does not outweigh ``along`` and some
            term has a negative power of ``along``.
    """
    T = s.tag
    coords = T.coords
    if shift not in coords or along not in coords:
        raise NoSuchEmbedding(f"{shift} and {along} must both be coordinates of {T.name}")
    if scale == 0 or not s.terms:
        return s
    a, b = coords.index(shift), coords.index(along)
    if a == b:
        raise ValueError("shift and derivative coordinates must differ")
    delta = T.weights[a] - T.weights[b]
    limit = s.known_below
    if limit == inf and delta > 0 and any(e[b] < 0 for e in s.terms):
        limit = s.lead + frontier
    out: dict = {}
    for e, c in s.terms.items():
        m = e[b]
        n = 0
        while True:
            if m >= 0 and n > m:
                break
            if delta <= 0 and n > 0 and m < 0:
                raise DivergentInTarget(
                    f"exp({shift} d/d{along}) does not converge in {T.describe()}")
            w = s.weight(e) + n * delta
            if w > limit:
                break
            coef = Fraction(c) * _binom(m, n) * Fraction(scale) ** n
            if coef:
                key = list(e)
                key[b] -= n
                key[a] += n
                key = tuple(key)
                out[key] = out.get(key, 0) + coef
            n += 1
    out = {k: (v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v) for k, v in out.items()}
    return TruncatedSeries(T, out, s.lead, limit)


def weird_isom(s: TruncatedSeries, frontier: int = 8) -> TruncatedSeries:
    """``f(z, z-w) -> exp((z-w) d/dw) f(w, z-w)`` from ``z;z-w`` to ``w;z-w``."""
    if s.tag.levels != (("z",), ("z-w",)):
        raise TagMismatch(f"expected a series in z;z-w, got {s.tag.name}")
    renamed = TruncatedSeries(tag("w;z-w"), s.terms, s.lead, s.known_below)
    return taylor_shift(renamed, "z-w", "w", frontier=frontier)


def random_mixed_element(rng, terms: int = 3, low: int = -3, high: int = 3) -> list[tuple[Fraction, tuple]]:
    """A finite rational combination of monomials ``z^a w^b (z-w)^d``."""
    out = []
    for _ in range(terms):
        e = (rng.randint(low, high), rng.randint(low, high), 0, rng.randint(low, high), 0, 0)
        out.append((Fraction(rng.randint(-5, 5), rng.randint(1, 4)), e))
    return out


def expand_combination(combo: Iterable, target, frontier: int = 8) -> TruncatedSeries:
    """Expand a finite combination ``[(coefficient, exponents), ...]``."""
    total = TruncatedSeries.zero(target)
    for c, e in combo:
        total = total + expand(UniversalMonomial(e, Fraction(c)), target, frontier)
    return total
