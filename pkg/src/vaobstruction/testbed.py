"""Graded algebras with Laurent-polynomial multiplications, as concrete test data.

An instance has a finite-dimensional rational space ``M_i`` for every element
``i`` of a finite abelian group, a nilpotent translation operator ``L`` on
each space, and multiplications ``m^{i,j}_z : M_i (x) M_j -> M_{i+j}[z, z^-1]``.
The multiplications are stored as rational tensors; a separate table of
nonzero scalars ``scales`` multiplies them, so that twists by roots of unity
keep every tensor rational.

The two structure constants are read off from the data:

* ``F(i, j, k)`` is the ratio of the two ways to multiply three vectors,
  ``m^{i,j+k}_z (1 (x) m^{j,k}_w)`` against ``m^{i+j,k}_w (m^{i,j}_{z-w} (x) 1)``,
  compared as elements of ``Q[z, w][z^-1, w^-1, (z-w)^-1]``;
* ``Omega(i, j)`` is the ratio of ``m^{i,j}`` to the star of ``m^{j,i}``,
  ``star(m)_z(v (x) u) = e^{zL} m_{-z}(u (x) v)``.

Comparison in the mixed space is exact: both composites are multiplied by
the power of ``z - w`` clearing negative exponents and expanded into
``Q[z, z^-1][w, w^-1]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Mapping, Sequence

import numpy as np
import sympy

from .cohomology import (
    AbelianCochain3,
    Cochain1,
    Cochain2,
    IntertwinerCocycle,
    ModuleCocycle,
    NotACocycle,
    check_module_cocycle,
    check_psi_cocycle,
    d1,
    is_abelian_3_cocycle,
    pullback_cocycle,
    trace,
    trivialize_2cocycle,
    trivialize_3cocycle,
)
from .formal import expand
from .forms import NotCosetConstant, QuadraticForm, cocycle_from_form, pullback_form
from .groups import ASet, FiniteAbelianGroup, format_element
from .scalar import Scalar, ScalarArray

__all__ = [
    "GradedAlgebraData",
    "ValidationReport",
    "ExtensionReport",
    "ObstructionReport",
    "ParityResult",
    "PairingResult",
    "Parity",
    "PairingKind",
    "CosetModule",
    "CosetBuild",
    "NotProportional",
    "ZeroComposite",
    "ZeroOperator",
    "NotNormalized",
    "Degenerate",
    "TraceNotCosetConstant",
    "InvalidAlgebra",
    "validate",
    "star_operator",
    "classify_parity",
    "derive_cocycle",
    "obstruction_report",
    "apply_twist",
    "verify_extension",
    "pairing_parity",
    "coset_module_build",
    "relate_extensions",
    "FIXTURES",
]


class NotProportional(ValueError):
    """Two maps that must agree up to a scalar do not."""


class ZeroComposite(ValueError):
    """Both composites vanish, so no structure constant is defined."""


class ZeroOperator(ValueError):
    """The multiplication under study is identically zero."""


class NotNormalized(ValueError):
    """A twist would break the unit axioms."""


class Degenerate(ValueError):
    """A pairing matrix is singular."""


class TraceNotCosetConstant(ValueError):
    """The trace separates two elements of a coset of the chosen subgroup."""


class InvalidAlgebra(ValueError):
    def __init__(self, report: "ValidationReport"):
        super().__init__(report.describe())
        self.report = report


def frac_array(x, shape=None) -> np.ndarray:
    """Object array of :class:`Fraction` from nested lists (strings allowed)."""
    arr = np.array(x, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(*arr.shape):
        v = arr[idx]
        out[idx] = Fraction(v) if not isinstance(v, str) else Fraction(v.strip())
    if shape is not None:
        out = out.reshape(shape)
    return out


def _zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def _is_zero(arr: np.ndarray) -> bool:
    return not any(v != 0 for v in arr.flat)


def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.einsum("ab,bc->ac", A, B) if A.size and B.size else _zeros((A.shape[0], B.shape[1]))


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True, eq=False)
class GradedAlgebraData:
    """One instance.  All per-element data is indexed by element position.

    Attributes:
        group: the grading group.
        dims: ``dims[a]`` is the dimension of ``M_a``.
        unit: basis index of the unit vector in ``M_0``.
        lminus1: ``lminus1[a]`` is the ``(d_a, d_a)`` matrix of ``L`` on ``M_a``.
        mult: ``mult[(a, b)]`` maps an exponent to a ``(d_{a+b}, d_a, d_b)``
            tensor; a missing pair is the zero map.
        scales: a 2-cochain multiplying ``m^{a,b}``; ``None`` means all ones.
    """

    group: FiniteAbelianGroup
    dims: tuple
    unit: int
    lminus1: tuple
    mult: Mapping
    scales: Cochain2 | None = None

    def __post_init__(self):
        n = self.group.order
        if len(self.dims) != n or len(self.lminus1) != n:
            raise ValueError("dims and lminus1 need one entry per group element")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "lminus1", tuple(frac_array(L).reshape(d, d) for L, d in zip(self.lminus1, self.dims)))
        clean = {}
        for (a, b), table in self.mult.items():
            c = int(self.group.add_table[a, b])
            shape = (self.dims[c], self.dims[a], self.dims[b])
            terms = {}
            for e, T in table.items():
                T = frac_array(T).reshape(shape)
                if not _is_zero(T):
                    terms[int(e)] = T
            if terms:
                clean[(int(a), int(b))] = terms
        object.__setattr__(self, "mult", clean)
        if self.scales is None:
            object.__setattr__(self, "scales", Cochain2.ones(self.group))

    def m(self, a: int, b: int) -> dict:
        return self.mult.get((a, b), {})

    def scale(self, a: int, b: int) -> Scalar:
        return self.scales.table.scalar((a, b))

    def target(self, a: int, b: int) -> int:
        return int(self.group.add_table[a, b])

    def label(self, a: int) -> str:
        return format_element(self.group.element(a))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    condition: str | None = None
    at: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "valid"
        return f"{self.condition} fails at {self.at}: {self.detail}"

    def to_dict(self) -> dict:
        return {"ok": self.ok, "condition": self.condition, "at": self.at, "detail": self.detail}


def validate(a: GradedAlgebraData) -> ValidationReport:
    """Unit axioms, nilpotency of ``L`` and translation covariance, exactly.

    Checks run in that order; the first violation is reported.
    """
    A = a.group
    n = A.order
    for x in range(n):
        L = a.lminus1[x]
        P = L.copy()
        for _ in range(max(a.dims[x], 1) - 1):
            P = _matmul(P, L)
        if a.dims[x] and not _is_zero(P):
            return ValidationReport(False, "nilpotent-translation", (a.label(x),), "L is not nilpotent")
    d0 = a.dims[0]
    if not 0 <= a.unit < d0:
        return ValidationReport(False, "left-unit", (), "unit index out of range")
    for x in range(n):
        eye = frac_array(np.eye(a.dims[x], dtype=int))
        table = a.m(0, x)
        for e in sorted(set(table) | {0}):
            got = table[e][:, a.unit, :] if e in table else _zeros((a.dims[x], a.dims[x]))
            want = eye if e == 0 else _zeros(eye.shape)
            if not np.array_equal(got, want):
                return ValidationReport(False, "left-unit", (a.label(x),), f"coefficient of z^{e} is wrong")
        table = a.m(x, 0)
        for e in sorted(set(table) | {0}):
            if e > 0:
                continue
            got = table[e][:, :, a.unit] if e in table else _zeros((a.dims[x], a.dims[x]))
            want = eye if e == 0 else _zeros(eye.shape)
            if not np.array_equal(got, want):
                return ValidationReport(False, "right-unit", (a.label(x),), f"coefficient of z^{e} is wrong")
        if not (a.scale(0, x).is_one() and a.scale(x, 0).is_one()):
            return ValidationReport(False, "left-unit", (a.label(x),), "scale on a unit map is not 1")
    for (x, y), table in sorted(a.mult.items()):
        Lx, Ly, Lxy = a.lminus1[x], a.lminus1[y], a.lminus1[a.target(x, y)]
        lo, hi = min(table), max(table)
        zero = _zeros(next(iter(table.values())).shape)
        for e in range(lo - 1, hi + 1):
            M = table.get(e, zero)
            deriv = table.get(e + 1, zero) * (e + 1)
            left = np.einsum("aub,uc->acb", M, Lx)
            right = np.einsum("ab,buv->auv", Lxy, M) - np.einsum("auv,vc->auc", M, Ly)
            if not np.array_equal(deriv, left):
                return ValidationReport(False, "translation-covariance", (a.label(x), a.label(y)),
                                        f"d/dz m != m(L (x) 1) at z^{e}")
            if not np.array_equal(deriv, right):
                return ValidationReport(False, "translation-covariance", (a.label(x), a.label(y)),
                                        f"d/dz m != L m - m(1 (x) L) at z^{e}")
    return ValidationReport(True)


def _require_valid(a: GradedAlgebraData):
    rep = validate(a)
    if not rep.ok:
        raise InvalidAlgebra(rep)


# ---------------------------------------------------------------------------
# star operator and composites


def star_operator(a: GradedAlgebraData, i, j) -> dict:
    """``v (x) u -> e^{zL} m^{i,j}_{-z}(u (x) v)`` as a table on ``M_j (x) M_i``.

    ``L`` is nilpotent, so the exponential is a finite sum.  The scale of
    ``m^{i,j}`` is not included.
    """
    A = a.group
    x, y = A.index(i), A.index(j)
    L = a.lminus1[a.target(x, y)]
    powers = [frac_array(np.eye(L.shape[0], dtype=int))]
    while not _is_zero(powers[-1]):
        powers.append(_matmul(powers[-1], L))
    powers.pop()
    out: dict = {}
    for e, M in a.m(x, y).items():
        sign = -1 if e % 2 else 1
        for k, P in enumerate(powers):
            T = np.einsum("ab,buv->avu", P, M) * Fraction(sign, factorial(k))
            out[e + k] = out[e + k] + T if e + k in out else T
    return {e: T for e, T in out.items() if not _is_zero(T)}


def _mixed_composites(a: GradedAlgebraData, x: int, y: int, w: int):
    """Both triple composites as Laurent polynomials in ``z, w``.

    Returns ``(lhs, rhs)``: dicts from ``(z exponent, w exponent)`` to
    ``(d_out, d_x, d_y, d_w)`` tensors, both multiplied by the same power of
    ``z - w``.
    """
    yw = a.target(y, w)
    xy = a.target(x, y)
    outer_l, inner_l = a.m(x, yw), a.m(y, w)
    outer_r, inner_r = a.m(xy, w), a.m(x, y)
    lhs_terms = {(p, q): np.einsum("aub,bvx->auvx", P, Q)
                 for p, P in outer_l.items() for q, Q in inner_l.items()}
    rhs_terms = {(p, q): np.einsum("abx,buv->auvx", P, Q)
                 for p, P in outer_r.items() for q, Q in inner_r.items()}
    shift = max([0] + [-q for _, q in rhs_terms])
    lhs: dict = {}
    for (p, q), T in lhs_terms.items():
        # z^p w^q (z-w)^shift
        _accumulate(lhs, expand((p, q, 0, shift, 0, 0), "z;w", frontier=shift), T)
    rhs: dict = {}
    for (p, q), T in rhs_terms.items():
        # w^p (z-w)^(q + shift)
        _accumulate(rhs, expand((0, p, 0, q + shift, 0, 0), "z;w", frontier=q + shift), T)
    return lhs, rhs


def _accumulate(acc: dict, series, T: np.ndarray):
    if series.known_below != float("inf"):  # pragma: no cover - polynomial expansions are exact
        raise ArithmeticError("expected an exact expansion")
    for e, c in series.terms.items():
        key = (e[0], e[1])
        acc[key] = acc[key] + T * c if key in acc else T * c


def _ratio(lhs: dict, rhs: dict):
    """``r`` with ``lhs == r * rhs``; ``"zero"`` if both vanish; ``None`` otherwise."""
    ratio = None
    for key in sorted(rhs):
        R = rhs[key]
        nz = [k for k, v in enumerate(R.flat) if v != 0]
        if nz:
            ratio = Fraction(lhs[key].flat[nz[0]]) / R.flat[nz[0]] if key in lhs else Fraction(0)
            break
    if ratio is None:
        return "zero" if all(_is_zero(T) for T in lhs.values()) else None
    if ratio == 0:
        return None
    for key in set(lhs) | set(rhs):
        L = lhs.get(key)
        R = rhs.get(key)
        if L is None:
            L = _zeros(R.shape)
        if R is None:
            R = _zeros(L.shape)
        if not np.array_equal(L, R * ratio):
            return None
    return ratio


def _labels(a: GradedAlgebraData, *idx) -> tuple:
    return tuple(a.label(t) for t in idx)


# ---------------------------------------------------------------------------
# structure constants


def derive_cocycle(a: GradedAlgebraData) -> AbelianCochain3:
    """``(F, Omega)`` read off from the composites and the star operator.

    Raises:
        InvalidAlgebra: ``validate`` fails.
        ZeroComposite: both composites of some triple vanish.
        NotProportional: two composites (or ``m`` and its star) are not
            proportional.
        NotACocycle: the result fails the pentagon or a hexagon.
    """
    _require_valid(a)
    A = a.group
    n = A.order
    F = np.empty((n, n, n), dtype=object)
    for x, y, w in product(range(n), repeat=3):
        lhs, rhs = _mixed_composites(a, x, y, w)
        r = _ratio(lhs, rhs)
        if r == "zero":
            raise ZeroComposite(f"both composites vanish at {_labels(a, x, y, w)}")
        if r is None:
            raise NotProportional(f"composites are not proportional at {_labels(a, x, y, w)}")
        s = a.scale(x, a.target(y, w)) * a.scale(y, w) / (a.scale(a.target(x, y), w) * a.scale(x, y))
        F[x, y, w] = Scalar.from_rational(r) * s
    Om = np.empty((n, n), dtype=object)
    for x, y in product(range(n), repeat=2):
        r = _ratio(a.m(x, y), star_operator(a, A.element(y), A.element(x)))
        if r == "zero":
            raise ZeroComposite(f"m vanishes at {_labels(a, x, y)}")
        if r is None:
            raise NotProportional(f"m is not proportional to the star of its transpose at {_labels(a, x, y)}")
        Om[x, y] = Scalar.from_rational(r) * a.scale(x, y) / a.scale(y, x)
    c = AbelianCochain3(A, ScalarArray.from_scalars(F), ScalarArray.from_scalars(Om))
    rep = is_abelian_3_cocycle(c)
    if not rep.ok:
        raise NotACocycle(rep)
    return c


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class ParityResult:
    parity: Parity
    omega: Scalar
    leading_exponent: int
    alternating: bool


def classify_parity(a: GradedAlgebraData, i) -> ParityResult:
    """Even or odd, from the leading exponent of ``m^{i,i}``.

    In the alternating case (``m(u (x) u) = 0`` for all ``u``) an odd leading
    exponent means even; otherwise the leading exponent of ``m(u (x) u)``
    for generic ``u`` decides, even meaning even.  ``omega`` is the ratio of
    ``m^{i,i}`` to its star, found independently.

    Raises:
        ZeroOperator: ``m^{i,i}`` vanishes.
        NotProportional: ``m^{i,i}`` is not a multiple of its star.
    """
    x = a.group.index(i)
    m = a.m(x, x)
    if not m:
        raise ZeroOperator(f"m^(i,i) vanishes for i = {a.label(x)}")
    r = _ratio(m, star_operator(a, i, i))
    if not isinstance(r, Fraction):
        raise NotProportional(f"m^(i,i) is not proportional to its star for i = {a.label(x)}")
    symmetric = {e: M + M.transpose(0, 2, 1) for e, M in m.items()}
    symmetric = {e: M for e, M in symmetric.items() if not _is_zero(M)}
    if symmetric:
        lead = min(symmetric)
        parity = Parity.EVEN if lead % 2 == 0 else Parity.ODD
    else:
        lead = min(m)
        parity = Parity.EVEN if lead % 2 else Parity.ODD
    return ParityResult(parity, Scalar.from_rational(r), lead, not symmetric)


class PairingKind(enum.Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"
    NEITHER = "neither"


@dataclass(frozen=True)
class PairingResult:
    kind: PairingKind
    compatible: bool | None
    proportionality: Fraction | None = None


def pairing_parity(a: GradedAlgebraData, i, pairing, functional=None, subspace=None) -> PairingResult:
    """Classify a bilinear pairing on (a subspace of) ``M_i``.

    Args:
        pairing: square rational matrix.
        functional: optional linear functional on ``M_{2i}``; when given,
            the pairing is compatible with ``m^{i,i}`` if the functional applied
            to ``m^{i,i}`` on the subspace is a single power of ``z`` times a
            nonzero multiple of ``pairing``.
        subspace: optional list of vectors of ``M_i`` (defaults to its basis)
            on which ``pairing`` lives.

    Raises:
        Degenerate: ``pairing`` is singular.
    """
    P = frac_array(pairing)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError("pairing must be a square matrix")
    if sympy.Matrix(P.tolist()).det() == 0:
        raise Degenerate("the pairing matrix is singular")
    if np.array_equal(P, P.T):
        kind = PairingKind.SYMMETRIC
    elif np.array_equal(P, -P.T):
        kind = PairingKind.ANTISYMMETRIC
    else:
        kind = PairingKind.NEITHER
    if functional is None:
        return PairingResult(kind, None)
    x = a.group.index(i)
    d = a.dims[x]
    U = frac_array(np.eye(d, dtype=int)) if subspace is None else frac_array(subspace).reshape(-1, d).T
    if U.shape[1] != P.shape[0]:
        raise ValueError("subspace dimension does not match the pairing")
    phi = frac_array(functional)
    grams = {}
    for e, M in a.m(x, x).items():
        G = np.einsum("a,auv,up,vq->pq", phi, M, U, U)
        if not _is_zero(G):
            grams[e] = G
    if len(grams) != 1:
        return PairingResult(kind, False)
    (G,) = grams.values()
    r = _ratio({0: G}, {0: P})
    return PairingResult(kind, isinstance(r, Fraction), r if isinstance(r, Fraction) else None)


# ---------------------------------------------------------------------------
# obstruction, twists, verification


@dataclass
class ObstructionReport:
    """``extendable`` iff the trace is identically 1.

    ``twist`` is the normalized cochain to pass to :func:`apply_twist`;
    ``witness`` lists the elements where the trace is not 1.
    """

    cocycle: AbelianCochain3
    form: QuadraticForm
    extendable: bool
    witness: tuple = ()
    twist: Cochain2 | None = None
    notes: list = field(default_factory=list)


def _show(s: Scalar) -> str:
    q = s.rational_value()
    return str(q) if q is not None else str(s)


def obstruction_report(a: GradedAlgebraData) -> ObstructionReport:
    c = derive_cocycle(a)
    Q = trace(c)
    tr = trivialize_3cocycle(c)
    notes = []
    if c.F.is_one():
        notes.append("associativity constants are all 1")
    if c.Omega.is_one():
        notes.append("commutativity constants are all 1")
    if tr.obstructed:
        notes.append("trace is not identically 1: " + ", ".join(
            f"Q({format_element(x)})={_show(Q(x))}" for x in tr.witness))
        return ObstructionReport(c, Q, False, tr.witness, None, notes)
    return ObstructionReport(c, Q, True, (), tr.cochain.inverse(), notes)


def apply_twist(a: GradedAlgebraData, lam: Cochain2) -> GradedAlgebraData:
    """Multiply ``m^{i,j}`` by ``lam(i, j)``.

    Raises:
        NotNormalized: ``lam`` is not 1 when an argument is 0.
    """
    if lam.group != a.group:
        raise ValueError("twist lives on a different group")
    if not lam.is_normalized():
        raise NotNormalized("a twist must be 1 whenever an argument is 0")
    return replace(a, scales=a.scales * lam)


@dataclass(frozen=True)
class ExtensionReport:
    ok: bool
    condition: str | None = None
    at: tuple | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"associative and skew-symmetric ({self.checked} checks)"
        return f"{self.condition} fails at {self.at}"


def _equal_scaled(lhs: dict, rhs: dict, ratio: Scalar) -> bool:
    """``lhs == ratio * rhs`` for rational tables and a scalar ``ratio``."""
    zero_l = all(_is_zero(T) for T in lhs.values())
    zero_r = all(_is_zero(T) for T in rhs.values())
    if zero_l or zero_r:
        return zero_l and zero_r
    q = ratio.rational_value()
    if q is None:
        return False
    for key in set(lhs) | set(rhs):
        L, R = lhs.get(key), rhs.get(key)
        if L is None:
            L = _zeros(R.shape)
        if R is None:
            R = _zeros(L.shape)
        if not np.array_equal(L, R * q):
            return False
    return True


def verify_extension(a: GradedAlgebraData) -> ExtensionReport:
    """Check associativity on every triple, then skew-symmetry on every pair.

    Both composites (and ``m`` against its star) must be equal, scales
    included, as elements of the mixed space.
    """
    A = a.group
    n = A.order
    checked = 0
    for x, y, w in product(range(n), repeat=3):
        lhs, rhs = _mixed_composites(a, x, y, w)
        s = a.scale(a.target(x, y), w) * a.scale(x, y) / (a.scale(x, a.target(y, w)) * a.scale(y, w))
        checked += 1
        if not _equal_scaled(lhs, rhs, s):
            return ExtensionReport(False, "associativity", _labels(a, x, y, w), checked)
    for x, y in product(range(n), repeat=2):
        st = star_operator(a, A.element(y), A.element(x))
        checked += 1
        if not _equal_scaled(a.m(x, y), st, a.scale(y, x) / a.scale(x, y)):
            return ExtensionReport(False, "skew-symmetry", _labels(a, x, y), checked)
    return ExtensionReport(True, checked=checked)


def relate_extensions(a1: GradedAlgebraData, a2: GradedAlgebraData) -> Cochain1:
    """``c`` such that ``x -> c(i) x`` on each ``M_i`` maps ``a1`` onto ``a2``.

    Both instances must share their rational tables and differ only in
    scales by an abelian 2-cocycle, which is then ``d1(c)``.

    Raises:
        NotAbelian2Cocycle: the scale ratio is not symmetric and closed.
    """
    if a1.group != a2.group or a1.dims != a2.dims:
        raise ValueError("instances live on different data")
    for key in set(a1.mult) | set(a2.mult):
        t1, t2 = a1.mult.get(key, {}), a2.mult.get(key, {})
        if set(t1) != set(t2) or any(not np.array_equal(t1[e], t2[e]) for e in t1):
            raise ValueError("instances differ beyond their scales")
    ratio = a1.scales / a2.scales
    c = trivialize_2cocycle(ratio)
    if not d1(c) == ratio:  # pragma: no cover - trivialize_2cocycle verifies itself
        raise ArithmeticError("rescaling does not match")
    return c


# ---------------------------------------------------------------------------
# coset modules


@dataclass
class CosetModule:
    """``M_{B+k}``: the spaces of one coset and the action of ``M_B`` on them."""

    coset: list
    dims: dict
    action: dict  # (b, s) element pair -> {exponent: tensor}, scale folded in as `scales`
    scales: dict


@dataclass
class CosetBuild:
    algebra: GradedAlgebraData
    twist: Cochain2
    quotient_form: QuadraticForm
    cocycle: AbelianCochain3
    matches_pullback: bool
    modules: list
    phi: list  # (coset, ModuleCocycle, CheckReport)
    psi: list  # ((coset_i, coset_j), IntertwinerCocycle, CheckReport)

    @property
    def ok(self) -> bool:
        return (self.matches_pullback
                and all(rep.ok and phi.table.is_one() for _, phi, rep in self.phi)
                and all(rep.ok and psi.table.is_one() for _, psi, rep in self.psi))


def coset_module_build(a: GradedAlgebraData, subgroup: Sequence) -> CosetBuild:
    """Re-choose the multiplications so that the cosets of ``B`` become modules.

    The trace of the derived cocycle descends to ``A / B``.  A cocycle with
    that trace is built on the quotient and pulled back to ``A``; its ratio
    with the derived cocycle has trivial trace, and the cochain trivializing
    that ratio is used as a twist.  The twisted instance has associativity
    constants pulled back from ``A / B``, hence trivial on ``B x B x (B+k)`` and
    on ``B x (B+i) x (B+j)``; both restrictions are checked as cocycles.

    Raises:
        TraceNotCosetConstant: the trace separates two elements of a coset.
    """
    A = a.group
    B = [A.normalize(x) for x in subgroup]
    c = derive_cocycle(a)
    Q = trace(c)
    try:
        pb = pullback_form(Q, B)
    except NotCosetConstant as exc:
        raise TraceNotCosetConstant(str(exc)) from None
    pulled = pullback_cocycle(cocycle_from_form(pb.form), A, pb.projection)
    mu = trivialize_3cocycle(c / pulled)
    if mu.obstructed:  # pragma: no cover - equal traces
        raise ArithmeticError("ratio of cocycles with equal trace is not trivial")
    lam = mu.cochain.inverse()
    twisted = apply_twist(a, lam)
    c2 = derive_cocycle(twisted)
    G, emb = A.subgroup_presentation(B)
    F = c2.F
    cosets = A.cosets(B)

    def action_on(coset):
        return ASet(G, coset, lambda g, s: A.add(A.element(int(emb[G.index(g)])), s))

    modules, phis, psis = [], [], []
    for K in cosets:
        aset = action_on(K)
        ks = [A.index(s) for s in K]
        phi = ModuleCocycle(aset, F[np.ix_(emb, emb, ks)])
        phis.append((K, phi, check_module_cocycle(phi)))
        modules.append(CosetModule(
            K,
            {s: twisted.dims[A.index(s)] for s in K},
            {(A.element(int(b)), s): twisted.m(int(b), A.index(s)) for b in emb for s in K},
            {(A.element(int(b)), s): twisted.scale(int(b), A.index(s)) for b in emb for s in K},
        ))
    for K1, K2 in product(cosets, repeat=2):
        aset = action_on(K1)
        r = [A.index(s) for s in K1]
        s = [A.index(t) for t in K2]
        psi = IntertwinerCocycle(aset, K2, F[np.ix_(emb, r, s)])
        psis.append(((K1[0], K2[0]), psi, check_psi_cocycle(psi)))
    return CosetBuild(twisted, lam, pb.form, c2, c2 == pulled, modules, phis, psis)


# ---------------------------------------------------------------------------
# fixtures


def _wedge(S: tuple, T: tuple):
    if set(S) & set(T):
        return 0, ()
    seq = list(S + T)
    inversions = sum(1 for p in range(len(seq)) for q in range(p + 1, len(seq)) if seq[p] > seq[q])
    return (-1) ** inversions, tuple(sorted(seq))


def exterior_basis(generators: int = 3) -> tuple[list, list]:
    """Even and odd monomials of an exterior algebra, each sorted by degree."""
    subsets = [S for k in range(generators + 1) for S in _subsets(generators, k)]
    return [S for S in subsets if len(S) % 2 == 0], [S for S in subsets if len(S) % 2]


def _subsets(n: int, k: int):
    from itertools import combinations

    return [tuple(c) for c in combinations(range(1, n + 1), k)]


def _super_instance(group: FiniteAbelianGroup, parity_of: Callable[[int], int], generators: int = 3):
    even, odd = exterior_basis(generators)
    bases = [even if parity_of(x) == 0 else odd for x in range(group.order)]
    dims = [len(b) for b in bases]
    mult = {}
    for x, y in product(range(group.order), repeat=2):
        z = int(group.add_table[x, y])
        T = _zeros((dims[z], dims[x], dims[y]))
        pos = {S: k for k, S in enumerate(bases[z])}
        for u, S in enumerate(bases[x]):
            for v, U in enumerate(bases[y]):
                sign, W = _wedge(S, U)
                if sign:
                    T[pos[W], u, v] = Fraction(sign)
        mult[(x, y)] = {0: T}
    zero = [_zeros((d, d)) for d in dims]
    return GradedAlgebraData(group, tuple(dims), 0, tuple(zero), mult)


def exterior_algebra_z2() -> GradedAlgebraData:
    """``Lambda(Q^3)`` split into even and odd parts over ``Z/2``, ``L = 0``."""
    return _super_instance(FiniteAbelianGroup((2,)), lambda x: x)


def super_exterior_z4() -> GradedAlgebraData:
    """``M_x = Lambda^{x mod 2}(Q^3)`` over ``Z/4`` with the wedge product."""
    return _super_instance(FiniteAbelianGroup((4,)), lambda x: x % 2)


def group_algebra(orders, eps: Callable | None = None) -> GradedAlgebraData:
    """One-dimensional ``M_i`` with ``m(e_i (x) e_j) = eps(i, j) e_{i+j}``.

    ``eps`` takes element labels and must be 1 when an argument is 0.
    """
    A = FiniteAbelianGroup(orders)
    n = A.order
    mult = {}
    for x, y in product(range(n), repeat=2):
        v = Fraction(1) if eps is None else Fraction(eps(A.label(x), A.label(y)))
        mult[(x, y)] = {0: frac_array([[[v]]])}
    return GradedAlgebraData(A, (1,) * n, 0, tuple(_zeros((1, 1)) for _ in range(n)), mult)


def _twisting_eps(i, j) -> Fraction:
    if isinstance(i, tuple):
        i, j = sum(i), sum(j)
    return Fraction((-1) ** (i * j) * (1 + i * j * j))


def twisted_group_algebra(n: int) -> GradedAlgebraData:
    """Group algebra of ``Z/n`` twisted by ``eps(i, j) = (-1)^{ij} (1 + i j^2)``."""
    return group_algebra((n,), _twisting_eps)


def symmetric_pairing_algebra(matrix=((1, 0), (0, 1))) -> GradedAlgebraData:
    """``Z/2`` with ``M_0 = Q``, ``M_1 = Q^2`` and ``m^{1,1}`` the bilinear form ``matrix`` at ``z^0``.

    Valid but not associative up to scalars, so it only feeds the parity
    and pairing checks.
    """
    A = FiniteAbelianGroup((2,))
    mult = {
        (0, 0): {0: frac_array([[[1]]])},
        (0, 1): {0: frac_array(np.eye(2, dtype=int).reshape(2, 1, 2))},
        (1, 0): {0: frac_array(np.eye(2, dtype=int).reshape(2, 2, 1))},
        (1, 1): {0: frac_array(matrix).reshape(1, 2, 2)},
    }
    return GradedAlgebraData(A, (1, 2), 0, (_zeros((1, 1)), _zeros((2, 2))), mult)


def truncated_polynomial_algebra() -> GradedAlgebraData:
    """``Q[x]/(x^3)`` with ``L = x^2 d/dx`` and ``m_z(u (x) v) = (e^{zL} u) v``.

    A single graded piece, so only the trivial group; it exercises a
    nonzero translation operator and positive powers of ``z``.
    """
    A = FiniteAbelianGroup((1,))
    # basis 1, x, x^2; L x = x^2
    L = _zeros((3, 3))
    L[2, 1] = Fraction(1)
    M0, M1 = _zeros((3, 3, 3)), _zeros((3, 3, 3))
    for u in range(3):
        for v in range(3):
            if u + v < 3:
                M0[u + v, u, v] = Fraction(1)
    # z * (L u) v; only u = x contributes: z x^2 * v
    M1[2, 1, 0] = Fraction(1)
    return GradedAlgebraData(A, (3,), 0, (L,), {(0, 0): {0: M0, 1: M1}})


FIXTURES: dict[str, Callable[[], GradedAlgebraData]] = {
    "exterior_z2": exterior_algebra_z2,
    "super_z4": super_exterior_z4,
    "z3_twisted": lambda: twisted_group_algebra(3),
    "z5_twisted": lambda: twisted_group_algebra(5),
    "z2_group_algebra": lambda: group_algebra((2,)),
    "klein_group_algebra": lambda: group_algebra((2, 2)),
    "truncated_polynomial": truncated_polynomial_algebra,
}
