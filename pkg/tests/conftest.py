"""Shared strategies and slow reference implementations.

The oracles here loop over group elements with plain :class:`Scalar`
arithmetic and the textbook formulas, so they share no code with the
vectorised tables they are compared against.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from vaobstruction.groups import FiniteAbelianGroup
from vaobstruction.scalar import Scalar

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# every abelian group of order <= 16, one per isomorphism class
GROUPS_UP_TO_16 = [
    (1,), (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (4, 2), (2, 2, 2), (9,), (3, 3), (10,),
    (11,), (12,), (6, 2), (13,), (14,), (15,), (16,), (8, 2), (4, 4), (4, 2, 2), (2, 2, 2, 2),
]
SMALL_GROUPS = [(1,), (2,), (3,), (4,), (2, 2), (5,), (6,), (4, 2)]


def group(orders) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(orders)


# ---------------------------------------------------------------------------
# strategies


def phases(max_denom: int = 12):
    return st.builds(lambda q, r: Fraction(r % q, q), st.integers(1, max_denom), st.integers(0, 10 ** 6))


def magnitudes():
    return st.builds(Fraction, st.integers(1, 30), st.integers(1, 30))


def scalars(max_denom: int = 12, rational_magnitude: bool = True):
    mags = magnitudes() if rational_magnitude else st.just(Fraction(1))
    return st.builds(Scalar, mags, phases(max_denom))


def unit_scalars(max_denom: int = 12):
    return scalars(max_denom, rational_magnitude=False)


group_orders = st.sampled_from(SMALL_GROUPS)


def table_of(draw, A, arity, values):
    vals = np.empty((A.order,) * arity, dtype=object)
    for idx in np.ndindex(*vals.shape):
        vals[idx] = draw(values)
    return vals


# ---------------------------------------------------------------------------
# reference implementations


def ref_d1(A, phi):
    """``phi(j) phi(i) / phi(i+j)`` on a dict keyed by elements."""
    E = A.elements()
    return {(i, j): phi[j] * phi[i] / phi[A.add(i, j)] for i in E for j in E}


def ref_d2(A, f):
    E = A.elements()
    F = {(i, j, k): f[(j, k)] * f[(i, A.add(j, k))] / (f[(A.add(i, j), k)] * f[(i, j)])
         for i in E for j in E for k in E}
    O = {(i, j): f[(i, j)] / f[(j, i)] for i in E for j in E}
    return F, O


def ref_is_cocycle(A, F, O) -> bool:
    """Pentagon and both hexagons, written out directly."""
    E = A.elements()
    add = A.add
    for i, j, k, l in itertools.product(E, repeat=4):
        if F[(i, j, k)] * F[(i, add(j, k), l)] * F[(j, k, l)] != F[(add(i, j), k, l)] * F[(i, j, add(k, l))]:
            return False
    for i, j, k in itertools.product(E, repeat=3):
        if O[(i, add(j, k))] / (F[(i, j, k)] * F[(j, k, i)]) != O[(i, j)] * O[(i, k)] / F[(j, i, k)]:
            return False
        if F[(i, j, k)] * O[(add(i, j), k)] * F[(k, i, j)] != O[(j, k)] * F[(i, k, j)] * O[(i, k)]:
            return False
    return True


def as_dict(A, table, arity):
    vals = table.to_scalars()
    return {tuple(A.element(i) for i in idx): vals[idx] for idx in np.ndindex(*(A.order,) * arity)}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
