"""Low-degree abelian (Eilenberg-Mac Lane) cochains of a finite abelian group.

Cochains are dense tables of :class:`~vaobstruction.scalar.Scalar` values
indexed by element positions.  Every check is a vectorised comparison over
all index tuples in lexicographic order, so the first reported failure is
deterministic.  Every trivialization goes through
:class:`~vaobstruction.solver.MultiplicativeSystem` with an operator matrix
cached per group.

>>> from vaobstruction.groups import FiniteAbelianGroup
>>> Z2 = FiniteAbelianGroup((2,))
>>> f = Cochain2.from_dict(Z2, {(1, 1): "-1"})
>>> phi = trivialize_2cocycle(f)
>>> str(phi(1)), d1(phi) == f
('1/1@1/4', True)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from math import lcm
from typing import Callable, Mapping

import numpy as np

from .groups import ASet, FiniteAbelianGroup, format_element
from .scalar import Scalar, ScalarArray, _embed_exps
from .solver import MultiplicativeSystem

__all__ = [
    "Cochain1",
    "Cochain2",
    "AbelianCochain3",
    "ModuleCocycle",
    "IntertwinerCocycle",
    "CheckReport",
    "Trivialization",
    "NotACocycle",
    "NotAbelian2Cocycle",
    "d1",
    "d2",
    "is_abelian_3_cocycle",
    "trace",
    "twist",
    "pullback_cocycle",
    "normalize_cocycle",
    "trivialize_2cocycle",
    "trivialize_3cocycle",
    "module_coboundary",
    "check_module_cocycle",
    "trivialize_module_cocycle",
    "psi_coboundary",
    "check_psi_cocycle",
    "trivialize_psi_cocycle",
]


class NotACocycle(ValueError):
    """Raised when an operation needs an abelian 3-cocycle and gets something else."""

    def __init__(self, report: "CheckReport"):
        super().__init__(report.describe())
        self.report = report


class NotAbelian2Cocycle(ValueError):
    """The 2-cochain is not a symmetric group 2-cocycle."""


@dataclass(frozen=True)
class CheckReport:
    """Outcome of an exhaustive identity check.

    ``at`` holds the first failing tuple (as group elements or set labels) in
    lexicographic order, and ``condition`` names the identity that failed.
    """

    ok: bool
    condition: str | None = None
    at: tuple | None = None
    lhs: Scalar | None = None
    rhs: Scalar | None = None
    checked: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok (" + ", ".join(self.checked) + ")" if self.checked else "ok"
        where = ",".join(_fmt(x) for x in self.at)
        return f"{self.condition} fails at ({where}): {self.lhs} != {self.rhs}"

    def to_dict(self) -> dict:
        out = {"ok": self.ok, "checked": list(self.checked)}
        if not self.ok:
            out.update(condition=self.condition, at=[_fmt(x) for x in self.at],
                       lhs=str(self.lhs), rhs=str(self.rhs))
        return out


def _fmt(x) -> str:
    if isinstance(x, tuple):
        return format_element(x)
    return str(x)


def _first_failure(lhs: ScalarArray, rhs: ScalarArray):
    bad = ~lhs.equal_mask(rhs)
    if not bad.any():
        return None
    flat = int(np.argmax(bad.ravel()))
    idx = np.unravel_index(flat, bad.shape)
    return tuple(int(t) for t in idx), lhs.scalar(idx), rhs.scalar(idx)


def _to_scalar(v) -> Scalar:
    if isinstance(v, Scalar):
        return v
    if isinstance(v, str):
        return Scalar.parse(v)
    return Scalar.from_rational(v)


# ---------------------------------------------------------------------------
# cochain containers


class _GroupTable:
    """Scalar table on ``A^arity``."""

    arity = 0
    __slots__ = ("group", "table")

    def __init__(self, group: FiniteAbelianGroup, table: ScalarArray):
        n = group.order
        if table.shape != (n,) * self.arity:
            raise ValueError(f"expected table of shape {(n,) * self.arity}, got {table.shape}")
        self.group = group
        self.table = table

    @classmethod
    def ones(cls, group: FiniteAbelianGroup):
        return cls(group, ScalarArray.ones((group.order,) * cls.arity))

    @classmethod
    def from_function(cls, group: FiniteAbelianGroup, fn: Callable):
        """Tabulate ``fn`` on element labels (ints for cyclic groups)."""
        n = group.order
        vals = np.empty((n,) * cls.arity, dtype=object)
        for idx in np.ndindex(*vals.shape):
            vals[idx] = _to_scalar(fn(*(group.label(i) for i in idx)))
        return cls(group, ScalarArray.from_scalars(vals))

    @classmethod
    def from_dict(cls, group: FiniteAbelianGroup, entries: Mapping):
        """Entries keyed by element tuples; omitted entries are 1."""
        n = group.order
        vals = np.full((n,) * cls.arity, Scalar(), dtype=object)
        for key, v in entries.items():
            if cls.arity == 1 and not (isinstance(key, tuple) and len(key) == 1 and isinstance(key[0], tuple)):
                key = (key,)
            vals[tuple(group.index(x) for x in key)] = _to_scalar(v)
        return cls(group, ScalarArray.from_scalars(vals))

    def __call__(self, *elements) -> Scalar:
        return self.table.scalar(tuple(self.group.index(x) for x in elements))

    def _same(self, other):
        if type(other) is not type(self) or other.group != self.group:
            raise TypeError("cochains live on different groups or degrees")

    def __mul__(self, other):
        self._same(other)
        return type(self)(self.group, self.table * other.table)

    def __truediv__(self, other):
        self._same(other)
        return type(self)(self.group, self.table / other.table)

    def inverse(self):
        return type(self)(self.group, self.table.inverse())

    def __pow__(self, k: int):
        return type(self)(self.group, self.table ** k)

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and other.group == self.group and self.table == other.table

    __hash__ = None

    def is_one(self) -> bool:
        return self.table.is_one()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.group!r})"

    def entries(self) -> dict:
        """Non-identity entries keyed by element tuples."""
        vals = self.table.to_scalars()
        out = {}
        for idx in np.ndindex(*vals.shape):
            if not vals[idx].is_one():
                out[tuple(self.group.element(i) for i in idx)] = vals[idx]
        return out


class Cochain1(_GroupTable):
    """A function ``A -> C^x``."""

    arity = 1


class Cochain2(_GroupTable):
    """A function ``A x A -> C^x``."""

    arity = 2

    def is_normalized(self) -> bool:
        t = self.table
        return t[0].is_one() and t[:, 0].is_one()


class AbelianCochain3:
    """A pair ``(F, Omega)`` with ``F`` on ``A^3`` and ``Omega`` on ``A^2``."""

    __slots__ = ("group", "F", "Omega")

    def __init__(self, group: FiniteAbelianGroup, F: ScalarArray, Omega: ScalarArray):
        n = group.order
        if F.shape != (n, n, n) or Omega.shape != (n, n):
            raise ValueError("F must be |A|^3 and Omega |A|^2")
        self.group = group
        self.F = F
        self.Omega = Omega

    @classmethod
    def ones(cls, group: FiniteAbelianGroup) -> "AbelianCochain3":
        n = group.order
        return cls(group, ScalarArray.ones((n, n, n)), ScalarArray.ones((n, n)))

    @classmethod
    def from_functions(cls, group, F: Callable | None = None, Omega: Callable | None = None):
        Ft = Cochain3Table.from_function(group, F).table if F else ScalarArray.ones((group.order,) * 3)
        Ot = Cochain2.from_function(group, Omega).table if Omega else ScalarArray.ones((group.order,) * 2)
        return cls(group, Ft, Ot)

    @classmethod
    def from_dicts(cls, group, F: Mapping | None = None, Omega: Mapping | None = None):
        return cls(group, Cochain3Table.from_dict(group, F or {}).table,
                   Cochain2.from_dict(group, Omega or {}).table)

    def F_at(self, i, j, k) -> Scalar:
        g = self.group
        return self.F.scalar((g.index(i), g.index(j), g.index(k)))

    def Omega_at(self, i, j) -> Scalar:
        g = self.group
        return self.Omega.scalar((g.index(i), g.index(j)))

    def __mul__(self, other: "AbelianCochain3") -> "AbelianCochain3":
        return AbelianCochain3(self.group, self.F * other.F, self.Omega * other.Omega)

    def __truediv__(self, other: "AbelianCochain3") -> "AbelianCochain3":
        return AbelianCochain3(self.group, self.F / other.F, self.Omega / other.Omega)

    def inverse(self) -> "AbelianCochain3":
        return AbelianCochain3(self.group, self.F.inverse(), self.Omega.inverse())

    def __eq__(self, other) -> bool:
        return (isinstance(other, AbelianCochain3) and other.group == self.group
                and self.F == other.F and self.Omega == other.Omega)

    __hash__ = None

    def is_one(self) -> bool:
        return self.F.is_one() and self.Omega.is_one()

    def is_normalized(self) -> bool:
        F, O = self.F, self.Omega
        return (F[0].is_one() and F[:, 0].is_one() and F[:, :, 0].is_one()
                and O[0].is_one() and O[:, 0].is_one())

    def __repr__(self) -> str:
        return f"AbelianCochain3({self.group!r})"


class Cochain3Table(_GroupTable):
    """Bare table on ``A^3``; used to build the ``F`` part of a 3-cochain."""

    arity = 3


# ---------------------------------------------------------------------------
# differentials and checks


@lru_cache(maxsize=None)
def _grid(shape: tuple) -> np.ndarray:
    g = np.indices(shape).reshape(len(shape), -1)
    g.flags.writeable = False
    return g


def _index_grid(n: int, k: int):
    return _grid((n,) * k)


def _check_relation(name, tables, terms, shape, labels) -> CheckReport | None:
    """Test ``prod(lhs terms) == prod(rhs terms)`` at every index of ``shape``.

    ``terms`` holds ``(table number, flat index array, power, side)`` with
    side ``+1`` for the left-hand side and ``-1`` for the right.  The work is
    integer addition on phase numerators and prime exponents.
    """
    d = reduce(lcm, (t.denom for t in tables), 1)
    primes = tuple(sorted({p for t in tables for p in t.primes}))
    nums = [t.num.reshape(-1) * (d // t.denom) for t in tables]
    exps = [_embed_exps(t, primes).reshape(t.num.size, len(primes)) for t in tables]
    size = terms[0][1].shape[0]
    phase = np.zeros(size, dtype=np.int64)
    mag = np.zeros((size, len(primes)), dtype=np.int64)
    for tid, idx, power, side in terms:
        phase += (side * power) * nums[tid][idx]
        if primes:
            mag += (side * power) * exps[tid][idx]
    bad = (phase % d) != 0
    if primes:
        bad |= np.any(mag != 0, axis=1)
    if not bad.any():
        return None
    pos = int(np.argmax(bad))
    sides = {1: Scalar(), -1: Scalar()}
    for tid, idx, power, side in terms:
        sides[side] = sides[side] * tables[tid].scalar(np.unravel_index(int(idx[pos]), tables[tid].shape)) ** power
    at = tuple(lab(int(t)) for lab, t in zip(labels, np.unravel_index(pos, shape)))
    return CheckReport(False, name, at, sides[1], sides[-1])


@lru_cache(maxsize=None)
def _cocycle_terms(orders: tuple):
    A = FiniteAbelianGroup(orders)
    n = A.order
    S = A.add_table

    def f3(a, b, c):
        return (a * n + b) * n + c

    def f2(a, b):
        return a * n + b

    i, j, k, l = _index_grid(n, 4)
    pentagon = [
        (0, f3(i, j, k), 1, 1), (0, f3(i, S[j, k], l), 1, 1), (0, f3(j, k, l), 1, 1),
        (0, f3(S[i, j], k, l), 1, -1), (0, f3(i, j, S[k, l]), 1, -1),
    ]
    i, j, k = _index_grid(n, 3)
    hexagon1 = [
        (1, f2(i, S[j, k]), 1, 1), (0, f3(i, j, k), -1, 1), (0, f3(j, k, i), -1, 1),
        (1, f2(i, j), 1, -1), (1, f2(i, k), 1, -1), (0, f3(j, i, k), -1, -1),
    ]
    hexagon2 = [
        (0, f3(i, j, k), 1, 1), (1, f2(S[i, j], k), 1, 1), (0, f3(k, i, j), 1, 1),
        (1, f2(j, k), 1, -1), (0, f3(i, k, j), 1, -1), (1, f2(i, k), 1, -1),
    ]
    return pentagon, hexagon1, hexagon2


def d1(phi: Cochain1) -> Cochain2:
    """Group coboundary ``phi(j) phi(i) / phi(i+j)``."""
    S = phi.group.add_table
    t = phi.table
    n = phi.group.order
    i, j = _index_grid(n, 2)
    out = t[j] * t[i] / t[S[i, j]]
    return Cochain2(phi.group, out.reshape(n, n))


def d2(f: Cochain2) -> AbelianCochain3:
    """Abelian coboundary: group coboundary ``F`` plus antisymmetrizer ``Omega``."""
    A = f.group
    n = A.order
    S = A.add_table
    t = f.table
    i, j, k = _index_grid(n, 3)
    F = t[j, k] * t[i, S[j, k]] / (t[S[i, j], k] * t[i, j])
    return AbelianCochain3(A, F.reshape(n, n, n), t / t.T)


def is_abelian_3_cocycle(c: AbelianCochain3) -> CheckReport:
    """Pentagon over ``A^4`` then both hexagons over ``A^3``.

    The hexagons are checked in the form
    ``Omega(i, j+k) / (F(i,j,k) F(j,k,i)) == Omega(i,j) Omega(i,k) / F(j,i,k)`` and
    ``F(i,j,k) Omega(i+j, k) F(k,i,j) == Omega(j,k) F(i,k,j) Omega(i,k)``.

    >>> from vaobstruction.groups import FiniteAbelianGroup
    >>> Z2 = FiniteAbelianGroup((2,))
    >>> c = AbelianCochain3.from_dicts(Z2, Omega={(1, 1): "1@1/4"})
    >>> is_abelian_3_cocycle(c).describe()
    'hexagon-1 fails at (1,1,1): 1 != 1/1@1/2'
    """
    A = c.group
    n = A.order
    tables = [c.F, c.Omega]
    checked = []
    names = ("pentagon", "hexagon-1", "hexagon-2")
    for name, terms in zip(names, _cocycle_terms(A.cyclic_orders)):
        k = 4 if name == "pentagon" else 3
        bad = _check_relation(name, tables, terms, (n,) * k, [A.element] * k)
        if bad is not None:
            return bad
        checked.append(name)
    return CheckReport(True, checked=tuple(checked))


def _require_cocycle(c: AbelianCochain3):
    rep = is_abelian_3_cocycle(c)
    if not rep.ok:
        raise NotACocycle(rep)


def trace(c: AbelianCochain3):
    """The quadratic form ``i -> Omega(i, i)``.

    Raises:
        NotACocycle: ``c`` fails the pentagon or a hexagon.
    """
    from .forms import QuadraticForm

    _require_cocycle(c)
    n = c.group.order
    diag = np.arange(n)
    return QuadraticForm(c.group, c.Omega[diag, diag])


def pullback_cocycle(c: AbelianCochain3, group: FiniteAbelianGroup, proj) -> AbelianCochain3:
    """``c`` composed with a homomorphism ``group -> c.group`` given by its index table."""
    p = np.asarray(proj, dtype=np.int64)
    i, j, k = np.ix_(p, p, p)
    a, b = np.ix_(p, p)
    return AbelianCochain3(group, c.F[i, j, k], c.Omega[a, b])


def twist(c: AbelianCochain3, lam: Cochain2) -> AbelianCochain3:
    """``c * d2(lam)``."""
    return c * d2(lam)


# ---------------------------------------------------------------------------
# operator matrices


@lru_cache(maxsize=None)
def _d1_matrix(orders: tuple) -> np.ndarray:
    A = FiniteAbelianGroup(orders)
    n = A.order
    i, j = _index_grid(n, 2)
    rows = np.arange(n * n)
    D = np.zeros((n * n, n), dtype=np.int64)
    np.add.at(D, (rows, j), 1)
    np.add.at(D, (rows, i), 1)
    np.add.at(D, (rows, A.add_table[i, j]), -1)
    return D


@lru_cache(maxsize=None)
def _d2_matrix(orders: tuple) -> np.ndarray:
    A = FiniteAbelianGroup(orders)
    n = A.order
    S = A.add_table
    i, j, k = _index_grid(n, 3)
    rows = np.arange(n ** 3)
    D = np.zeros((n ** 3 + n ** 2, n * n), dtype=np.int64)
    np.add.at(D, (rows, j * n + k), 1)
    np.add.at(D, (rows, i * n + S[j, k]), 1)
    np.add.at(D, (rows, S[i, j] * n + k), -1)
    np.add.at(D, (rows, i * n + j), -1)
    a, b = _index_grid(n, 2)
    rows = n ** 3 + np.arange(n * n)
    np.add.at(D, (rows, a * n + b), 1)
    np.add.at(D, (rows, b * n + a), -1)
    return D


def _touches_zero(n: int, k: int) -> np.ndarray:
    return np.any(_index_grid(n, k) == 0, axis=0)


@lru_cache(maxsize=None)
def _system(orders: tuple, kind: str) -> tuple[MultiplicativeSystem, np.ndarray, np.ndarray]:
    """Solver, row selection and column selection for one operator."""
    n = FiniteAbelianGroup(orders).order
    if kind == "d1":
        D = _d1_matrix(orders)
        rows, cols = np.arange(D.shape[0]), np.arange(n)
    else:
        D = _d2_matrix(orders)
        all_rows = np.arange(D.shape[0])
        if kind == "d2":
            rows, cols = all_rows, np.arange(n * n)
        elif kind == "d2-normalized":
            rows, cols = all_rows, np.nonzero(~_touches_zero(n, 2))[0]
        elif kind == "d2-zero-rows":
            mask = np.concatenate([_touches_zero(n, 3), _touches_zero(n, 2)])
            rows, cols = all_rows[mask], np.arange(n * n)
        else:
            raise ValueError(kind)
    return MultiplicativeSystem(D[np.ix_(rows, cols)]), rows, cols


def _solve(orders, kind, target: ScalarArray, n_unknowns: int) -> ScalarArray | None:
    system, rows, cols = _system(orders, kind)
    sol = system.solve(target[rows])
    if sol is None:
        return None
    if len(cols) == n_unknowns:
        return sol
    # unknowns outside ``cols`` are pinned to 1
    num = np.zeros(n_unknowns, dtype=np.int64)
    num[cols] = sol.num
    exps = np.zeros((n_unknowns, len(sol.primes)), dtype=np.int64)
    exps[cols] = sol.exps
    return ScalarArray(sol.denom, num, sol.primes, exps)


# ---------------------------------------------------------------------------
# trivialization


def trivialize_2cocycle(f: Cochain2) -> Cochain1:
    """A 1-cochain ``phi`` with ``d1(phi) == f``.

    Every symmetric 2-cocycle with values in ``C^x`` is a coboundary, so this
    only fails outside the supported value class.

    Raises:
        NotAbelian2Cocycle: ``d2(f)`` is not identically 1.
        IrrationalRoot: magnitudes would need an irrational root.
    """
    if not d2(f).is_one():
        raise NotAbelian2Cocycle("2-cochain is not a symmetric group 2-cocycle")
    A = f.group
    sol = _solve(A.cyclic_orders, "d1", f.table.reshape(-1), A.order)
    if sol is None:  # pragma: no cover - excluded by the vanishing of H^2_ab
        raise ArithmeticError("solver found no root for a symmetric 2-cocycle")
    return Cochain1(A, sol)


def normalize_cocycle(c: AbelianCochain3) -> tuple[Cochain2, AbelianCochain3]:
    """``(lam, twist(c, lam))`` with the twisted cocycle normalized.

    Raises:
        NotACocycle: ``c`` is not an abelian 3-cocycle.
    """
    _require_cocycle(c)
    A = c.group
    n = A.order
    target = ScalarArray.concatenate([c.F, c.Omega]).inverse()
    sol = _solve(A.cyclic_orders, "d2-zero-rows", target, n * n)
    if sol is None:  # pragma: no cover - every class has a normalized representative
        raise ArithmeticError("no normalizing cochain found")
    lam = Cochain2(A, sol.reshape(n, n))
    return lam, twist(c, lam)


@dataclass(frozen=True)
class Trivialization:
    """Result of :func:`trivialize_3cocycle`.

    Exactly one of ``cochain`` (with ``d2(cochain) == c``) and a non-empty
    ``witness`` (elements where the trace is not 1) is set.
    """

    cochain: Cochain2 | None
    witness: tuple
    trace: object

    @property
    def obstructed(self) -> bool:
        return self.cochain is None


def trivialize_3cocycle(c: AbelianCochain3) -> Trivialization:
    """Find ``lam`` with ``d2(lam) == c`` or report the obstruction.

    When ``c`` is normalized the search is restricted to normalized ``lam``.

    >>> from vaobstruction.groups import FiniteAbelianGroup
    >>> Z2 = FiniteAbelianGroup((2,))
    >>> sup = AbelianCochain3.from_dicts(Z2, Omega={(1, 1): "-1"})
    >>> trivialize_3cocycle(sup).witness
    ((1,),)
    """
    Q = trace(c)
    A = c.group
    n = A.order
    mask = ~Q.table.one_mask()
    if mask.any():
        return Trivialization(None, tuple(A.element(int(i)) for i in np.nonzero(mask)[0]), Q)
    kind = "d2-normalized" if c.is_normalized() else "d2"
    target = ScalarArray.concatenate([c.F, c.Omega])
    sol = _solve(A.cyclic_orders, kind, target, n * n)
    if sol is None:  # pragma: no cover - the trace classifies the class
        raise ArithmeticError("trivial trace but no trivializing cochain")
    return Trivialization(Cochain2(A, sol.reshape(n, n)), (), Q)


# ---------------------------------------------------------------------------
# module data: Phi on A x A x S


class ModuleCocycle:
    """``Phi(i, j, s)`` for ``i, j`` in ``A`` and ``s`` in an A-set ``S``."""

    __slots__ = ("aset", "table")

    def __init__(self, aset: ASet, table: ScalarArray):
        n = aset.group.order
        if table.shape != (n, n, aset.size):
            raise ValueError("Phi table must have shape (|A|, |A|, |S|)")
        self.aset = aset
        self.table = table

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.aset.group

    @classmethod
    def ones(cls, aset: ASet) -> "ModuleCocycle":
        n = aset.group.order
        return cls(aset, ScalarArray.ones((n, n, aset.size)))

    def __call__(self, i, j, s) -> Scalar:
        g = self.group
        return self.table.scalar((g.index(i), g.index(j), self.aset.carrier.index(s)))


def module_coboundary(aset: ASet, lam: ScalarArray) -> ModuleCocycle:
    """``lam(i, j+s) lam(j, s) / lam(i+j, s)`` for ``lam`` of shape ``(|A|, |S|)``."""
    A = aset.group
    n, m = A.order, aset.size
    i, j, s = np.indices((n, n, m)).reshape(3, -1)
    act = aset.table
    out = lam[i, act[j, s]] * lam[j, s] / lam[A.add_table[i, j], s]
    return ModuleCocycle(aset, out.reshape(n, n, m))


def check_module_cocycle(phi: ModuleCocycle) -> CheckReport:
    """``Phi(i, j+k, s) Phi(j, k, s) == Phi(i+j, k, s) Phi(i, j, k+s)`` everywhere."""
    aset = phi.aset
    A = aset.group
    n, m = A.order, aset.size
    S, act = A.add_table, aset.table
    i, j, k, s = _grid((n, n, n, m))

    def at(a, b, c):
        return (a * n + b) * m + c

    terms = [(0, at(i, S[j, k], s), 1, 1), (0, at(j, k, s), 1, 1),
             (0, at(S[i, j], k, s), 1, -1), (0, at(i, j, act[k, s]), 1, -1)]
    labels = [A.element] * 3 + [lambda q: aset.carrier[q]]
    bad = _check_relation("module-cocycle", [phi.table], terms, (n, n, n, m), labels)
    return bad if bad is not None else CheckReport(True, checked=("module-cocycle",))


@lru_cache(maxsize=None)
def _module_system(orders: tuple, act_bytes: bytes, m: int) -> MultiplicativeSystem:
    A = FiniteAbelianGroup(orders)
    n = A.order
    act = np.frombuffer(act_bytes, dtype=np.int64).reshape(n, m)
    i, j, s = np.indices((n, n, m)).reshape(3, -1)
    rows = np.arange(n * n * m)
    D = np.zeros((n * n * m, n * m), dtype=np.int64)
    np.add.at(D, (rows, i * m + act[j, s]), 1)
    np.add.at(D, (rows, j * m + s), 1)
    np.add.at(D, (rows, A.add_table[i, j] * m + s), -1)
    return MultiplicativeSystem(D)


def trivialize_module_cocycle(phi: ModuleCocycle) -> ScalarArray | None:
    """``lam`` of shape ``(|A|, |S|)`` with ``module_coboundary(lam) == Phi``.

    Returns ``None`` when the linear solver certifies that no such ``lam``
    exists.

    Raises:
        NotACocycle: the cocycle identity fails.
        IrrationalRoot: magnitudes would need an irrational root.
    """
    rep = check_module_cocycle(phi)
    if not rep.ok:
        raise NotACocycle(rep)
    aset = phi.aset
    n, m = aset.group.order, aset.size
    system = _module_system(aset.group.cyclic_orders, aset.table.astype(np.int64).tobytes(), m)
    sol = system.solve(phi.table.reshape(-1))
    return None if sol is None else sol.reshape(n, m)


# ---------------------------------------------------------------------------
# intertwiner data: Psi on A x S1 x S2, A acting on S1 only


class IntertwinerCocycle:
    """``Psi(i, r, s)`` with ``r`` in the A-set ``S1`` and ``s`` in a plain set ``S2``."""

    __slots__ = ("aset", "labels2", "table")

    def __init__(self, aset: ASet, labels2, table: ScalarArray):
        self.aset = aset
        self.labels2 = list(labels2)
        if table.shape != (aset.group.order, aset.size, len(self.labels2)):
            raise ValueError("Psi table must have shape (|A|, |S1|, |S2|)")
        self.table = table

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.aset.group

    @classmethod
    def ones(cls, aset: ASet, labels2) -> "IntertwinerCocycle":
        labels2 = list(labels2)
        return cls(aset, labels2, ScalarArray.ones((aset.group.order, aset.size, len(labels2))))

    def __call__(self, i, r, s) -> Scalar:
        return self.table.scalar((self.group.index(i), self.aset.carrier.index(r), self.labels2.index(s)))


def psi_coboundary(aset: ASet, labels2, lam: ScalarArray) -> IntertwinerCocycle:
    """``lam(i+r, s) / lam(r, s)`` for ``lam`` of shape ``(|S1|, |S2|)``."""
    n, m1, m2 = aset.group.order, aset.size, len(list(labels2))
    i, r, s = np.indices((n, m1, m2)).reshape(3, -1)
    out = lam[aset.table[i, r], s] / lam[r, s]
    return IntertwinerCocycle(aset, labels2, out.reshape(n, m1, m2))


def check_psi_cocycle(psi: IntertwinerCocycle) -> CheckReport:
    """``Psi(i, j+r, s) Psi(j, r, s) == Psi(i+j, r, s)`` everywhere."""
    aset = psi.aset
    A = aset.group
    n, m1, m2 = A.order, aset.size, len(psi.labels2)
    act = aset.table
    i, j, r, s = _grid((n, n, m1, m2))

    def at(a, b, c):
        return (a * m1 + b) * m2 + c

    terms = [(0, at(i, act[j, r], s), 1, 1), (0, at(j, r, s), 1, 1),
             (0, at(A.add_table[i, j], r, s), 1, -1)]
    labels = [A.element, A.element, lambda q: aset.carrier[q], lambda q: psi.labels2[q]]
    bad = _check_relation("intertwiner-cocycle", [psi.table], terms, (n, n, m1, m2), labels)
    return bad if bad is not None else CheckReport(True, checked=("intertwiner-cocycle",))


def trivialize_psi_cocycle(psi: IntertwinerCocycle) -> ScalarArray | None:
    """``lam`` of shape ``(|S1|, |S2|)`` with ``psi_coboundary(lam) == Psi``, or ``None``.

    Raises:
        NotACocycle: the cocycle identity fails.
    """
    rep = check_psi_cocycle(psi)
    if not rep.ok:
        raise NotACocycle(rep)
    aset = psi.aset
    n, m1, m2 = aset.group.order, aset.size, len(psi.labels2)
    i, r, s = np.indices((n, m1, m2)).reshape(3, -1)
    rows = np.arange(n * m1 * m2)
    D = np.zeros((n * m1 * m2, m1 * m2), dtype=np.int64)
    np.add.at(D, (rows, aset.table[i, r] * m2 + s), 1)
    np.add.at(D, (rows, r * m2 + s), -1)
    sol = MultiplicativeSystem(D).solve(psi.table.reshape(-1))
    return None if sol is None else sol.reshape(m1, m2)
