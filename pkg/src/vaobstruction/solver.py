"""Exact integer linear algebra behind every trivialization in the package.

A coboundary operator sends a table ``x`` of scalars to a table whose entries
are monomials ``prod_c x[c]^D[r, c]`` in the entries of ``x``.  Solving
``d x = b`` therefore splits into two integer problems sharing the matrix
``D``:

* phases: ``D theta = beta`` in ``Q/Z`` (roots of unity),
* magnitudes: ``D e = beta'`` over ``Z`` in prime-exponent coordinates.

Both are handled by one diagonalization ``U D V = S`` with ``U, V``
unimodular.  Writing ``y = V^{-1} x`` decouples the system into ``s_i y_i =
(U b)_i``.  Over ``Q/Z`` every such equation with ``s_i != 0`` is solvable, so
the only obstructions are the rows past the rank.  Over ``Z`` each equation
also needs ``s_i | (U b)_i``.  Free coordinates are set to zero, which fixes a
canonical solution.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm

import numpy as np

from .scalar import IrrationalRoot, ScalarArray

__all__ = ["diagonalize", "smith_normal_form", "MultiplicativeSystem"]

_LIMIT = 1 << 40


class _Overflow(Exception):
    pass


def _diagonalize_with(A: np.ndarray, guard: bool):
    m, n = A.shape
    dtype = A.dtype
    U = np.eye(m, dtype=dtype) if dtype != object else _eye_obj(m)
    V = np.eye(n, dtype=dtype) if dtype != object else _eye_obj(n)
    r = 0
    while r < min(m, n):
        sub = A[r:, r:]
        nz_rows, nz_cols = np.nonzero(sub)
        if len(nz_rows) == 0:
            break
        k = int(np.argmin(np.abs(sub[nz_rows, nz_cols])))
        _swap_rows(A, U, r, r + int(nz_rows[k]))
        _swap_cols(A, V, r, r + int(nz_cols[k]))
        while True:
            p = A[r, r]
            col = A[r + 1 :, r]
            if np.any(col != 0):
                q = col // p
                A[r + 1 :, :] -= q[:, None] * A[r, :]
                U[r + 1 :, :] -= q[:, None] * U[r, :]
            row = A[r, r + 1 :]
            if np.any(row != 0):
                q = row // p
                A[:, r + 1 :] -= A[:, r][:, None] * q[None, :]
                V[:, r + 1 :] -= V[:, r][:, None] * q[None, :]
            col = A[r + 1 :, r]
            row = A[r, r + 1 :]
            col_nz = np.nonzero(col)[0]
            row_nz = np.nonzero(row)[0]
            if len(col_nz) == 0 and len(row_nz) == 0:
                break
            best_c = min(col_nz, key=lambda t: abs(col[t])) if len(col_nz) else None
            best_r = min(row_nz, key=lambda t: abs(row[t])) if len(row_nz) else None
            if best_r is None or (best_c is not None and abs(col[best_c]) <= abs(row[best_r])):
                _swap_rows(A, U, r, r + 1 + int(best_c))
            else:
                _swap_cols(A, V, r, r + 1 + int(best_r))
        if A[r, r] < 0:
            A[r, :] = -A[r, :]
            U[r, :] = -U[r, :]
        if guard and max(_absmax(A), _absmax(U), _absmax(V)) > _LIMIT:
            raise _Overflow
        r += 1
    diag = [int(A[t, t]) for t in range(min(m, n))]
    return U, diag, V, r


def _absmax(X) -> int:
    return int(np.abs(X).max()) if X.size else 0


def _eye_obj(k: int) -> np.ndarray:
    E = np.zeros((k, k), dtype=object)
    for t in range(k):
        E[t, t] = 1
    return E


def _swap_rows(A, U, i, j):
    if i != j:
        A[[i, j], :] = A[[j, i], :]
        U[[i, j], :] = U[[j, i], :]


def _swap_cols(A, V, i, j):
    if i != j:
        A[:, [i, j]] = A[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]


def diagonalize(D) -> tuple[np.ndarray, list[int], np.ndarray, int]:
    """Unimodular ``U, V`` with ``U @ D @ V`` diagonal.

    The nonzero diagonal entries come first and are positive.  The
    divisibility chain of the Smith form is not enforced (see
    :func:`smith_normal_form`).  Arithmetic runs in int64 while entries stay
    small and falls back to Python integers otherwise.

    Returns:
        ``(U, diag, V, rank)``.
    """
    D = np.asarray(D)
    if D.ndim != 2:
        raise ValueError("expected a matrix")
    try:
        return _diagonalize_with(D.astype(np.int64).copy(), guard=True)
    except _Overflow:
        return _diagonalize_with(D.astype(object).copy(), guard=False)


def smith_normal_form(D) -> tuple[np.ndarray, list[int], np.ndarray, int]:
    """Smith normal form ``U @ D @ V = diag(s_1 | s_2 | ...)`` over Python ints.

    >>> U, s, V, r = smith_normal_form([[2, 0], [0, 3]])
    >>> s, r
    ([1, 6], 2)
    """
    U, diag, V, r = _diagonalize_with(np.asarray(D, dtype=object).copy(), guard=False)
    U = U.astype(object)
    V = V.astype(object)
    changed = True
    while changed:
        changed = False
        for i in range(r):
            for j in range(i + 1, r):
                di, dj = diag[i], diag[j]
                if dj % di == 0:
                    continue
                g, a, b = _xgcd(di, dj)
                ui, uj = U[i, :].copy(), U[j, :].copy()
                U[i, :] = a * ui + b * uj
                U[j, :] = -(dj // g) * ui + (di // g) * uj
                vi, vj = V[:, i].copy(), V[:, j].copy()
                V[:, i] = vi + vj
                V[:, j] = -(b * dj // g) * vi + (a * di // g) * vj
                diag[i], diag[j] = g, di * dj // g
                changed = True
    return U, diag, V, r


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer product; int64 when provably safe, Python ints otherwise."""
    if A.size == 0 or B.size == 0:
        return (A.astype(object) @ B.astype(object)) if A.ndim and B.ndim else A @ B
    bound = _absmax(A) * _absmax(B) * A.shape[-1]
    if bound < (1 << 62) and A.dtype != object and B.dtype != object:
        return A @ B
    return A.astype(object) @ B.astype(object)


class MultiplicativeSystem:
    """Solver for ``prod_c x[c] ** D[r, c] == b[r]`` with scalar unknowns.

    Args:
        D: integer matrix, rows indexed by equations, columns by unknowns.

    The diagonalization is computed once; each :meth:`solve` call costs a
    few matrix-vector products.
    """

    def __init__(self, D):
        self.D = np.asarray(D, dtype=np.int64)
        U, diag, V, r = diagonalize(self.D)
        self.rank = r
        self.Ur = np.asarray(U[:r])
        self.s = [int(d) for d in diag[:r]]
        self.Vr = np.asarray(V[:, :r])

    @property
    def shape(self) -> tuple[int, int]:
        return self.D.shape

    def solve(self, target: ScalarArray) -> ScalarArray | None:
        """Canonical solution, or ``None`` if the system is inconsistent.

        Args:
            target: one scalar per equation (flat, length ``D.shape[0]``).

        Raises:
            IrrationalRoot: the system is consistent over ``C^x`` but every
                solution needs an irrational positive magnitude.
        """
        m, n = self.D.shape
        if target.shape != (m,):
            raise ValueError(f"target must have shape ({m},), got {target.shape}")
        phase = self._solve_phase(target)
        if phase is None:
            return None
        L, x_num = phase
        exps = self._solve_magnitude(target)
        if exps is None:
            return None
        return ScalarArray(L, np.array(x_num, dtype=object).astype(np.int64), target.primes, exps)

    def _solve_phase(self, target: ScalarArray):
        N = target.denom
        n = self.D.shape[1]
        if self.rank == 0:
            x_num = np.zeros(n, dtype=np.int64)
            L = 1
        else:
            c = _matmul(self.Ur, target.num.reshape(-1, 1)).ravel()
            L = N * reduce(lcm, self.s, 1)
            y = np.array([int(ci) * (L // (N * si)) for ci, si in zip(c, self.s)], dtype=object)
            x_num = np.array(_matmul(self.Vr, y.reshape(-1, 1)).ravel() % L, dtype=object)
        lhs = _matmul(self.D, np.asarray(x_num).reshape(-1, 1)).ravel() % L
        want = (target.num.astype(object) * (L // N)) % L if L % N == 0 else None
        if want is None:
            # L is always a multiple of N except in the rank-zero case
            M = lcm(L, N)
            lhs = (lhs * (M // L)) % M
            want = (target.num.astype(object) * (M // N)) % M
            x_num = np.asarray(x_num, dtype=object) * (M // L)
            L = M
        if not np.array_equal(np.asarray(lhs, dtype=object), np.asarray(want, dtype=object)):
            return None
        return L, np.asarray(x_num, dtype=object)

    def _solve_magnitude(self, target: ScalarArray):
        P = len(target.primes)
        n = self.D.shape[1]
        if P == 0:
            return np.zeros((n, 0), dtype=np.int64)
        B = target.exps.reshape(-1, P)
        if self.rank == 0:
            X = np.zeros((n, P), dtype=np.int64)
        else:
            C = _matmul(self.Ur, B)
            s = np.array(self.s, dtype=object).reshape(-1, 1)
            if np.any(np.asarray(C, dtype=object) % s != 0):
                Y = np.vectorize(Fraction, otypes=[object])(np.asarray(C, dtype=object)) / s
                Xq = self.Vr.astype(object) @ Y
                if np.array_equal(self.D.astype(object) @ Xq, B.astype(object)):
                    raise IrrationalRoot("the magnitude system needs a non-rational root")
                return None
            Y = np.asarray(C, dtype=object) // s
            X = _matmul(self.Vr, Y)
        if not np.array_equal(np.asarray(_matmul(self.D, X), dtype=object), B.astype(object)):
            return None
        return np.asarray(X, dtype=object).astype(np.int64)
