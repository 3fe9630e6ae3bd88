"""Exact nonzero complex scalars of the form (positive rational) * (root of unity).

A :class:`Scalar` stores a reduced positive rational magnitude and a rational
phase in ``[0, 1)``; its value is ``magnitude * exp(2*pi*i*phase)``.  This is
the subgroup ``Q_{>0} x Q/Z`` of ``C^x``, which is closed under every operation
the cohomology and testbed modules need, and keeps all arithmetic exact.

:class:`ScalarArray` is a dense, vectorised table of scalars.  Phases are held
as integer numerators over one common denominator and magnitudes as integer
prime-exponent vectors, so products and quotients of whole tables reduce to
integer additions.  These two integer pieces are also the phase and magnitude
coordinates used by the linear solver in :mod:`vaobstruction.solver`.

>>> a = Scalar.parse("1/1@1/2")
>>> a * a == ONE
True
>>> Scalar.parse("2") * Scalar.parse("1/3@1/4")
Scalar('2/3@1/4')
>>> [str(r) for r in nth_roots(Scalar.parse("1@1/2"), 2)]
['1/1@1/4', '1/1@3/4']
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import numpy as np
from sympy import factorint, integer_nthroot

__all__ = [
    "Scalar",
    "ScalarArray",
    "IrrationalRoot",
    "ONE",
    "nth_roots",
    "scalar_mul",
    "root_of_unity",
]


class IrrationalRoot(ArithmeticError):
    """A required root of a rational magnitude is not rational."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class Scalar:
    """An exact element ``magnitude * e^{2 pi i phase}`` of ``C^x``.

    Args:
        magnitude: positive rational (anything :class:`fractions.Fraction` accepts).
        phase: rational, reduced mod 1.
    """

    __slots__ = ("magnitude", "phase")

    def __init__(self, magnitude=1, phase=0):
        m = _as_fraction(magnitude)
        if m <= 0:
            raise ValueError(f"magnitude must be positive, got {m}")
        p = _as_fraction(phase)
        object.__setattr__(self, "magnitude", m)
        object.__setattr__(self, "phase", p - (p.numerator // p.denominator))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def from_rational(cls, q) -> "Scalar":
        """Embed a nonzero rational; negative values get phase 1/2."""
        q = _as_fraction(q)
        if q == 0:
            raise ValueError("0 is not a unit")
        return cls(abs(q), Fraction(1, 2) if q < 0 else 0)

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``"p/q@r/s"``, a bare rational ``"p/q"`` or ``"1"``."""
        text = str(text).strip()
        if "@" in text:
            mag, ph = text.split("@", 1)
            return cls(_as_fraction(mag), _as_fraction(ph))
        return cls.from_rational(_as_fraction(text))

    def __str__(self) -> str:
        if self.is_one():
            return "1"
        m, p = self.magnitude, self.phase
        return f"{m.numerator}/{m.denominator}@{p.numerator}/{p.denominator}"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    def is_one(self) -> bool:
        return self.magnitude == 1 and self.phase == 0

    def is_root_of_unity(self) -> bool:
        return self.magnitude == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            try:
                other = Scalar.from_rational(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.magnitude == other.magnitude and self.phase == other.phase

    def __hash__(self) -> int:
        return hash((self.magnitude, self.phase))

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar.from_rational(other)
        return Scalar(self.magnitude * other.magnitude, self.phase + other.phase)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        return Scalar(1 / self.magnitude, -self.phase)

    def __truediv__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar.from_rational(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.from_rational(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        k = int(k)
        return Scalar(self.magnitude**k, self.phase * k)

    def to_complex(self) -> complex:
        """Floating point value; for display only."""
        return complex(float(self.magnitude) * np.exp(2j * np.pi * float(self.phase)))

    def rational_value(self) -> Fraction | None:
        """The value as a rational if it is real, else ``None``."""
        if self.phase == 0:
            return self.magnitude
        if self.phase == Fraction(1, 2):
            return -self.magnitude
        return None


ONE = Scalar(1, 0)


def root_of_unity(phase) -> Scalar:
    """``e^{2 pi i phase}``."""
    return Scalar(1, phase)


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def _rational_nth_root(q: Fraction, n: int) -> Fraction:
    num, exact_n = integer_nthroot(q.numerator, n)
    den, exact_d = integer_nthroot(q.denominator, n)
    if not (exact_n and exact_d):
        raise IrrationalRoot(f"{q} has no rational {n}-th root")
    return Fraction(int(num), int(den))


def nth_roots(a: Scalar, n: int) -> list[Scalar]:
    """All ``n`` scalars ``r`` with ``r**n == a``, ordered by phase.

    Raises:
        IrrationalRoot: if the positive real ``n``-th root of the magnitude is
            irrational.
    """
    if n < 1:
        raise ValueError("n must be positive")
    mag = _rational_nth_root(a.magnitude, n)
    return [Scalar(mag, (a.phase + k) / n) for k in range(n)]


# ---------------------------------------------------------------------------
# vectorised tables


def _factor(q: Fraction) -> dict[int, int]:
    out: dict[int, int] = {}
    for p, e in factorint(q.numerator).items():
        out[int(p)] = out.get(int(p), 0) + int(e)
    for p, e in factorint(q.denominator).items():
        out[int(p)] = out.get(int(p), 0) - int(e)
    return {p: e for p, e in out.items() if e}


class ScalarArray:
    """A dense n-dimensional table of :class:`Scalar` values.

    Attributes:
        denom: common phase denominator ``M``.
        num: int64 array of phase numerators in ``[0, M)``.
        primes: sorted tuple of primes that may occur in magnitudes.
        exps: int64 array of shape ``num.shape + (len(primes),)``.
    """

    __slots__ = ("denom", "num", "primes", "exps")

    def __init__(self, denom: int, num, primes=(), exps=None):
        num = np.asarray(num, dtype=np.int64)
        primes = tuple(primes)
        if exps is None:
            exps = np.zeros(num.shape + (len(primes),), dtype=np.int64)
        exps = np.asarray(exps, dtype=np.int64)
        if exps.shape != num.shape + (len(primes),):
            raise ValueError("exponent array has the wrong shape")
        self.denom = int(denom)
        self.num = np.mod(num, self.denom)
        self.primes = primes
        self.exps = exps
        self._compact()

    def _compact(self):
        # smallest denominator and prime list that still represent the table
        g = gcd(int(np.gcd.reduce(self.num, axis=None)), self.denom) if self.num.size else self.denom
        if g > 1:
            self.num = self.num // g
            self.denom //= g
        if self.primes:
            used = np.any(self.exps != 0, axis=tuple(range(self.num.ndim)))
            if not np.all(used):
                keep = np.nonzero(used)[0]
                self.primes = tuple(self.primes[k] for k in keep)
                self.exps = self.exps[..., keep]

    # construction -------------------------------------------------------

    @classmethod
    def ones(cls, shape) -> "ScalarArray":
        return cls(1, np.zeros(shape, dtype=np.int64))

    @classmethod
    def full(cls, shape, value: Scalar) -> "ScalarArray":
        one = cls.from_scalars(value)
        return cls(one.denom, np.full(shape, int(one.num), dtype=np.int64), one.primes,
                   np.broadcast_to(one.exps, tuple(shape) + (len(one.primes),)).copy())

    @classmethod
    def roots_of_unity(cls, num, denom: int) -> "ScalarArray":
        """Table of ``e^{2 pi i num/denom}``."""
        return cls(denom, num)

    @classmethod
    def from_scalars(cls, values) -> "ScalarArray":
        """Build from a (nested) array-like of :class:`Scalar`."""
        if isinstance(values, np.ndarray):
            arr = values
        elif isinstance(values, (Scalar, str, int, Fraction)):
            arr = np.empty((), dtype=object)
            arr[()] = values
        else:
            arr = _nested_fill(values)
        flat = [v if isinstance(v, Scalar) else Scalar.parse(v) if isinstance(v, str) else Scalar.from_rational(v) for v in arr.ravel()]
        denom = reduce(lcm, (s.phase.denominator for s in flat), 1)
        num = np.array([s.phase.numerator * (denom // s.phase.denominator) for s in flat], dtype=np.int64)
        factors = [_factor(s.magnitude) if s.magnitude != 1 else {} for s in flat]
        primes = tuple(sorted({p for f in factors for p in f}))
        pos = {p: k for k, p in enumerate(primes)}
        exps = np.zeros((len(flat), len(primes)), dtype=np.int64)
        for row, f in enumerate(factors):
            for p, e in f.items():
                exps[row, pos[p]] = e
        return cls(denom, num.reshape(arr.shape), primes, exps.reshape(arr.shape + (len(primes),)))

    @classmethod
    def concatenate(cls, parts) -> "ScalarArray":
        """Join flat arrays end to end."""
        parts = [p.reshape(-1) for p in parts]
        d = reduce(lcm, (p.denom for p in parts), 1)
        primes = tuple(sorted({q for p in parts for q in p.primes}))
        num = np.concatenate([p.num * (d // p.denom) for p in parts])
        exps = np.concatenate([_embed_exps(p, primes) for p in parts], axis=0)
        return cls(d, num, primes, exps)

    # conversion ---------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return self.num.shape

    def scalar(self, index) -> Scalar:
        """The entry at ``index`` as a :class:`Scalar`."""
        if not isinstance(index, tuple):
            index = (index,)
        ph = Fraction(int(self.num[index]), self.denom)
        mag = Fraction(1)
        for p, e in zip(self.primes, self.exps[index]):
            mag *= Fraction(p) ** int(e)
        return Scalar(mag, ph)

    def to_scalars(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(*self.shape):
            out[idx] = self.scalar(idx)
        return out

    def phases(self) -> np.ndarray:
        """Phases as an object array of Fractions."""
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(*self.shape):
            out[idx] = Fraction(int(self.num[idx]), self.denom)
        return out

    # algebra ------------------------------------------------------------

    def _aligned(self, other: "ScalarArray"):
        d = lcm(self.denom, other.denom)
        a_num = self.num * (d // self.denom)
        b_num = other.num * (d // other.denom)
        primes = tuple(sorted(set(self.primes) | set(other.primes)))
        a_exp = _embed_exps(self, primes)
        b_exp = _embed_exps(other, primes)
        return d, a_num, b_num, primes, a_exp, b_exp

    def __mul__(self, other: "ScalarArray") -> "ScalarArray":
        if isinstance(other, Scalar):
            other = ScalarArray.full(self.shape, other)
        d, a, b, primes, ae, be = self._aligned(other)
        return ScalarArray(d, a + b, primes, ae + be)

    def __truediv__(self, other: "ScalarArray") -> "ScalarArray":
        if isinstance(other, Scalar):
            other = ScalarArray.full(self.shape, other)
        d, a, b, primes, ae, be = self._aligned(other)
        return ScalarArray(d, a - b, primes, ae - be)

    def inverse(self) -> "ScalarArray":
        return ScalarArray(self.denom, -self.num, self.primes, -self.exps)

    def __pow__(self, k: int) -> "ScalarArray":
        return ScalarArray(self.denom, self.num * int(k), self.primes, self.exps * int(k))

    def __getitem__(self, index) -> "ScalarArray":
        num = self.num[index]
        exps = self.exps[index] if isinstance(index, tuple) else self.exps[index]
        return ScalarArray(self.denom, num, self.primes, exps)

    def transpose(self, *axes) -> "ScalarArray":
        axes = axes or tuple(reversed(range(self.num.ndim)))
        return ScalarArray(self.denom, self.num.transpose(axes), self.primes, self.exps.transpose(tuple(axes) + (self.num.ndim,)))

    @property
    def T(self) -> "ScalarArray":
        return self.transpose()

    def reshape(self, *shape) -> "ScalarArray":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        num = self.num.reshape(shape)
        return ScalarArray(self.denom, num, self.primes, self.exps.reshape(num.shape + (len(self.primes),)))

    def one_mask(self) -> np.ndarray:
        """Boolean array, True where the entry equals 1."""
        mask = self.num == 0
        if self.primes:
            mask &= ~np.any(self.exps != 0, axis=-1)
        return mask

    def is_one(self) -> bool:
        return bool(np.all(self.one_mask()))

    def equal_mask(self, other: "ScalarArray") -> np.ndarray:
        return (self / other).one_mask()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarArray):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.equal_mask(other)))

    def __hash__(self):
        raise TypeError("ScalarArray is not hashable")

    def __repr__(self) -> str:
        return f"ScalarArray(shape={self.shape}, denom={self.denom}, primes={self.primes})"

    def magnitude_is_one(self) -> bool:
        return not self.primes or not np.any(self.exps)


def _embed_exps(a: ScalarArray, primes: tuple) -> np.ndarray:
    if a.primes == primes:
        return a.exps
    out = np.zeros(a.num.shape + (len(primes),), dtype=np.int64)
    pos = {p: k for k, p in enumerate(primes)}
    for k, p in enumerate(a.primes):
        out[..., pos[p]] = a.exps[..., k]
    return out


def _nested_fill(values):
    shape = []
    v = values
    while isinstance(v, (list, tuple)):
        shape.append(len(v))
        v = v[0] if len(v) else None
    arr = np.empty(tuple(shape), dtype=object)
    for idx in np.ndindex(*shape):
        v = values
        for i in idx:
            v = v[i]
        arr[idx] = v
    return arr
