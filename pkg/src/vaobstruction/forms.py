"""Quadratic forms ``Q: A -> C^x`` on finite abelian groups.

A quadratic form here satisfies ``Q(i) == Q(-i)`` and the cube relation
``Q(i+j+k) Q(i) Q(j) Q(k) == Q(i+j) Q(i+k) Q(j+k)``.  The module checks
these axioms, inspects +-1-valued forms, pushes a form down to a quotient,
and writes down an explicit normalized abelian 3-cocycle whose trace is a
given form.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb

import numpy as np

from .cohomology import AbelianCochain3, CheckReport, Cochain2, _check_relation, _first_failure, _grid, is_abelian_3_cocycle
from .groups import FiniteAbelianGroup
from .scalar import Scalar, ScalarArray

__all__ = [
    "QuadraticForm",
    "NotAQuadraticForm",
    "ValuesNotPm1",
    "NotCosetConstant",
    "UnsupportedValues",
    "GroupTooLarge",
    "Pm1Structure",
    "PulledBackForm",
    "is_quadratic_form",
    "associated_bilinear",
    "check_pm1_structure",
    "pullback_form",
    "cocycle_from_form",
    "enumerate_pm1_forms",
    "pm1_forms_from_parameters",
    "PM1_ENUMERATION_BOUND",
]

PM1_ENUMERATION_BOUND = 16


class NotAQuadraticForm(ValueError):
    def __init__(self, report: CheckReport):
        super().__init__(report.describe())
        self.report = report


class ValuesNotPm1(ValueError):
    pass


class NotCosetConstant(ValueError):
    pass


class UnsupportedValues(ValueError):
    pass


class GroupTooLarge(ValueError):
    pass


class QuadraticForm:
    """A table ``Q`` on ``A``; the axioms are checked by :func:`is_quadratic_form`."""

    __slots__ = ("group", "table")

    def __init__(self, group: FiniteAbelianGroup, table: ScalarArray):
        if table.shape != (group.order,):
            raise ValueError("form table must have one entry per element")
        self.group = group
        self.table = table

    @classmethod
    def from_values(cls, group: FiniteAbelianGroup, values) -> "QuadraticForm":
        """Values listed in element order; strings, rationals or Scalars."""
        vals = [v if isinstance(v, Scalar) else Scalar.parse(str(v)) for v in values]
        return cls(group, ScalarArray.from_scalars(vals))

    @classmethod
    def from_function(cls, group: FiniteAbelianGroup, fn) -> "QuadraticForm":
        return cls.from_values(group, [fn(group.label(a)) for a in range(group.order)])

    @classmethod
    def from_dict(cls, group: FiniteAbelianGroup, entries) -> "QuadraticForm":
        vals = [Scalar()] * group.order
        for x, v in entries.items():
            vals[group.index(x)] = v if isinstance(v, Scalar) else Scalar.parse(str(v))
        return cls.from_values(group, vals)

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "QuadraticForm":
        return cls(group, ScalarArray.ones((group.order,)))

    def __call__(self, x) -> Scalar:
        return self.table.scalar(self.group.index(x))

    def values(self) -> list[Scalar]:
        return list(self.table.to_scalars())

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticForm) and other.group == self.group and self.table == other.table

    __hash__ = None

    def is_trivial(self) -> bool:
        return self.table.is_one()

    def __repr__(self) -> str:
        return f"QuadraticForm({self.group!r}, [{', '.join(str(v) for v in self.values())}])"


def is_quadratic_form(Q: QuadraticForm) -> CheckReport:
    """Exhaustive check of ``Q(i) == Q(-i)`` and the cube relation.

    >>> from vaobstruction.groups import FiniteAbelianGroup
    >>> Q = QuadraticForm.from_values(FiniteAbelianGroup((4,)), ["1", "1", "-1", "-1"])
    >>> is_quadratic_form(Q).describe()
    'symmetry fails at (1): 1 != 1/1@1/2'
    """
    A = Q.group
    n = A.order
    S = A.add_table
    labels = [A.element] * 3
    (x,) = _grid((n,))
    bad = _check_relation("symmetry", [Q.table], [(0, x, 1, 1), (0, A.neg_table[x], 1, -1)], (n,), labels)
    if bad is not None:
        return bad
    i, j, k = _grid((n, n, n))
    terms = [(0, S[S[i, j], k], 1, 1), (0, i, 1, 1), (0, j, 1, 1), (0, k, 1, 1),
             (0, S[i, j], 1, -1), (0, S[i, k], 1, -1), (0, S[j, k], 1, -1)]
    bad = _check_relation("cube", [Q.table], terms, (n, n, n), labels)
    if bad is not None:
        return bad
    return CheckReport(True, checked=("symmetry", "cube"))


def _require_form(Q: QuadraticForm):
    rep = is_quadratic_form(Q)
    if not rep.ok:
        raise NotAQuadraticForm(rep)


def associated_bilinear(Q: QuadraticForm) -> Cochain2:
    """``b(i, j) = Q(i+j) / (Q(i) Q(j))``, a symmetric bicharacter.

    Raises:
        NotAQuadraticForm: the axioms fail.
    """
    _require_form(Q)
    A = Q.group
    t = Q.table
    n = A.order
    i, j = np.indices((n, n)).reshape(2, -1)
    b = (t[A.add_table[i, j]] / (t[i] * t[j])).reshape(n, n)
    # the cube relation is bi-multiplicativity of b; both are rechecked here
    assert b == b.T
    k = np.indices((n, n, n)).reshape(3, -1)
    x, y, z = k
    assert b[x, A.add_table[y, z]] == b[x, y] * b[x, z]
    return Cochain2(A, b)


@dataclass(frozen=True)
class Pm1Structure:
    """Whether a +-1 form is 1 on ``2A`` and constant on cosets of ``2A``."""

    trivial_on_2A: bool
    coset_constant: bool
    doubled: tuple
    cosets: tuple

    @property
    def ok(self) -> bool:
        return self.trivial_on_2A and self.coset_constant


def _pm1_bits(Q: QuadraticForm) -> np.ndarray:
    """0/1 array with 1 where ``Q = -1``; raises unless every value is +-1."""
    t = Q.table
    if not t.magnitude_is_one() or t.denom > 2:
        raise ValuesNotPm1("form takes values outside {1, -1}")
    return t.num.astype(np.int64) if t.denom == 2 else np.zeros(t.shape, dtype=np.int64)


def check_pm1_structure(Q: QuadraticForm) -> Pm1Structure:
    """Test the two structural properties of a +-1-valued form.

    Raises:
        ValuesNotPm1: some value is neither 1 nor -1.
    """
    bits = _pm1_bits(Q)
    A = Q.group
    dbl = A.double_subgroup()
    on_2A = not any(bits[A.index(x)] for x in dbl.subgroup)
    constant = all(len({int(bits[A.index(x)]) for x in coset}) == 1 for coset in dbl.cosets)
    return Pm1Structure(on_2A, constant, tuple(dbl.subgroup), tuple(tuple(c) for c in dbl.cosets))


@dataclass(frozen=True)
class PulledBackForm:
    """A form on ``A / B`` whose pullback along ``projection`` is the input."""

    form: QuadraticForm
    projection: np.ndarray
    report: CheckReport


def pullback_form(Q: QuadraticForm, subgroup) -> PulledBackForm:
    """Push ``Q`` down to ``A / B`` when it is constant on cosets of ``B``.

    Raises:
        NotCosetConstant: ``Q`` separates two elements of some coset.
    """
    A = Q.group
    quotient, proj = A.quotient_group(subgroup)
    t = Q.table
    rep_of = np.full(quotient.order, -1, dtype=np.int64)
    for a in range(A.order):
        if rep_of[proj[a]] < 0:
            rep_of[proj[a]] = a
    bar = t[rep_of]
    pulled = bar[proj]
    bad = _first_failure(t, pulled)
    if bad:
        (a,), _, _ = bad
        raise NotCosetConstant(
            f"Q differs on {A.element(a)} and {A.element(int(rep_of[proj[a]]))}, which share a coset")
    Qbar = QuadraticForm(quotient, bar)
    return PulledBackForm(Qbar, proj, is_quadratic_form(Qbar))


# ---------------------------------------------------------------------------
# representative cocycles


def cocycle_from_form(Q: QuadraticForm) -> AbelianCochain3:
    """A normalized abelian 3-cocycle with trace ``Q``.

    Write ``x = sum x_t e_t`` with ``0 <= x_t < n_t``.  Then
    ``Q(x) = prod_t q_t^(x_t^2) * prod_{s<t} b_st^(x_s x_t)`` with
    ``q_t = Q(e_t)`` and ``b_st`` the associated bicharacter on generators.
    Each cyclic factor gets ``Omega(a, b) = q^(ab)`` and
    ``F(a, b, c) = q^(n a carry(b, c))``, where ``carry(b, c)`` is 1 when
    ``b + c >= n``.  The cross terms get ``F = 1`` and
    ``Omega = prod_{s<t} b_st^(x_s y_t)``.  The result is checked before it
    is returned.

    Raises:
        NotAQuadraticForm: ``Q`` fails the axioms.
        UnsupportedValues: some value is not a root of unity.
    """
    _require_form(Q)
    if not Q.table.magnitude_is_one():
        raise UnsupportedValues("cocycle_from_form needs root-of-unity values")
    A = Q.group
    n = A.order
    orders = A.cyclic_orders
    X = A.coords  # (|A|, rank)
    D = Q.table.denom
    gens = [tuple(1 if s == t else 0 for s in range(A.rank)) for t in range(A.rank)]
    q = [int(Q.table.num[A.index(g)]) for g in gens]
    b = associated_bilinear(Q).table
    b_num = {(s, t): int(b.num[A.index(gens[s]), A.index(gens[t])]) * (D // b.denom)
             for s, t in combinations(range(A.rank), 2)}

    i, j, k = np.indices((n, n, n)).reshape(3, -1)
    F_num = np.zeros(n ** 3, dtype=np.int64)
    for t, nt in enumerate(orders):
        carry = (X[j, t] + X[k, t]) >= nt
        F_num += q[t] * nt * X[i, t] * carry
    a, c = np.indices((n, n)).reshape(2, -1)
    O_num = np.zeros(n * n, dtype=np.int64)
    for t in range(A.rank):
        O_num += q[t] * X[a, t] * X[c, t]
    for (s, t), v in b_num.items():
        O_num += v * X[a, s] * X[c, t]
    cocycle = AbelianCochain3(A, ScalarArray(D, F_num.reshape(n, n, n)), ScalarArray(D, O_num.reshape(n, n)))
    rep = is_abelian_3_cocycle(cocycle)
    if not rep.ok:  # pragma: no cover - guarded by the test suite
        raise ArithmeticError(f"constructed cochain is not a cocycle: {rep.describe()}")
    diag = np.arange(n)
    if not cocycle.Omega[diag, diag] == Q.table:  # pragma: no cover
        raise ArithmeticError("constructed cocycle has the wrong trace")
    return cocycle


# ---------------------------------------------------------------------------
# +-1 forms


def enumerate_pm1_forms(A: FiniteAbelianGroup, bound: int = PM1_ENUMERATION_BOUND) -> list[QuadraticForm]:
    """Every +-1-valued quadratic form on ``A``, by exhaustive filtering.

    All ``2^(|A|-1)`` sign patterns with ``Q(0) = 1`` are tested against the
    axioms, written as parity conditions on bit masks.  Forms come out in
    lexicographic order of their value vectors, with 1 before -1.

    Raises:
        GroupTooLarge: ``|A| > bound``.
    """
    n = A.order
    if n > bound:
        raise GroupTooLarge(f"|A| = {n} exceeds the enumeration bound {bound}")
    # bit e of a candidate mask is set where Q(element e) = -1
    cands = np.arange(1 << (n - 1), dtype=np.uint32) << np.uint32(1)
    one = np.uint32(1)
    constraints = set()
    for a in range(n):
        constraints.add((1 << a) ^ (1 << int(A.neg_table[a])))
    S = A.add_table
    for i, j, k in product(range(n), repeat=3):
        m = 0
        for e in (S[S[i, j], k], i, j, k, S[i, j], S[i, k], S[j, k]):
            m ^= 1 << int(e)
        constraints.add(m)
    constraints.discard(0)
    keep = np.ones(len(cands), dtype=bool)
    for m in sorted(constraints):
        keep &= (np.bitwise_count(cands & np.uint32(m)) & one) == 0
    masks = sorted(cands[keep].tolist(), key=lambda m: [(m >> e) & 1 for e in range(n)])
    return [_form_from_mask(A, m) for m in masks]


def _form_from_mask(A: FiniteAbelianGroup, mask: int) -> QuadraticForm:
    num = np.array([(mask >> e) & 1 for e in range(A.order)], dtype=np.int64)
    return QuadraticForm(A, ScalarArray(2, num))


def pm1_forms_from_parameters(A: FiniteAbelianGroup) -> list[QuadraticForm]:
    """The +-1 forms, generated from signs on generators and generator pairs.

    A sign ``q_t`` is free on each even cyclic factor and a sign ``b_st`` on
    each pair of even factors; ``Q(x) = prod q_t^(x_t^2) prod b_st^(x_s x_t)``.
    Used as an independent cross-check of :func:`enumerate_pm1_forms`.
    """
    even = [t for t, m in enumerate(A.cyclic_orders) if m % 2 == 0]
    pairs = list(combinations(even, 2))
    X = A.coords
    out = []
    for signs in product((0, 1), repeat=len(even) + len(pairs)):
        num = np.zeros(A.order, dtype=np.int64)
        for s, t in zip(signs, even):
            num += s * X[:, t] ** 2
        for s, (u, v) in zip(signs[len(even):], pairs):
            num += s * X[:, u] * X[:, v]
        out.append(QuadraticForm(A, ScalarArray(2, num)))
    assert len(out) == 2 ** (len(even) + comb(len(even), 2))
    return out
