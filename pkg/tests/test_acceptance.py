"""The nine acceptance criteria, each at its stated time budget.

Every criterion records one ``PASS`` / ``FAIL`` line; the lines are printed
in the terminal summary (see ``conftest.py``).  Run the file directly with
``python3 tests/test_acceptance.py`` or through pytest.
"""

from __future__ import annotations

import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from math import gcd
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from vaobstruction.cohomology import (  # noqa: E402
    Cochain1,
    Cochain2,
    check_module_cocycle,
    check_psi_cocycle,
    d1,
    d2,
    is_abelian_3_cocycle,
    module_coboundary,
    psi_coboundary,
    trace,
    trivialize_2cocycle,
    trivialize_module_cocycle,
    trivialize_psi_cocycle,
)
from vaobstruction.formal import (  # noqa: E402
    DIAGRAMS,
    expand_combination,
    random_mixed_element,
    verify_diagram,
    weird_isom,
)
from vaobstruction.forms import (  # noqa: E402
    QuadraticForm,
    check_pm1_structure,
    cocycle_from_form,
    enumerate_pm1_forms,
)
from vaobstruction.groups import ASet, FiniteAbelianGroup  # noqa: E402
from vaobstruction.scalar import Scalar, ScalarArray  # noqa: E402
from vaobstruction.testbed import (  # noqa: E402
    FIXTURES,
    PairingKind,
    Parity,
    apply_twist,
    classify_parity,
    coset_module_build,
    derive_cocycle,
    exterior_algebra_z2,
    obstruction_report,
    pairing_parity,
    relate_extensions,
    super_exterior_z4,
    symmetric_pairing_algebra,
    twisted_group_algebra,
    verify_extension,
)

GROUPS_UP_TO_16 = [
    (1,), (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (4, 2), (2, 2, 2), (9,), (3, 3), (10,),
    (11,), (12,), (6, 2), (13,), (14,), (15,), (16,), (8, 2), (4, 4), (4, 2, 2), (2, 2, 2, 2),
]
GROUPS_UP_TO_8 = [g for g in GROUPS_UP_TO_16 if int(np.prod(g)) <= 8]
PRIMES = (2, 3, 5)
ONE, MINUS = Scalar(), Scalar.from_rational(-1)


def random_table(rng, shape, denom=12, normalized=False) -> ScalarArray:
    """Random nonzero scalars: phases with denominator ``denom``, magnitudes over 2, 3, 5."""
    num = rng.integers(0, denom, size=shape)
    exps = rng.integers(-2, 3, size=tuple(shape) + (len(PRIMES),))
    if normalized:
        for axis in range(len(shape)):
            idx = [slice(None)] * len(shape)
            idx[axis] = 0
            num[tuple(idx)] = 0
            exps[tuple(idx)] = 0
    return ScalarArray(denom, num, PRIMES, exps)


def random_symmetric_bicharacter(rng, A: FiniteAbelianGroup) -> Cochain2:
    """``exp(2 pi i sum k_ab x_a y_b / gcd(n_a, n_b))`` with ``k`` symmetric."""
    orders = A.cyclic_orders
    r = len(orders)
    denom = int(np.lcm.reduce(orders))
    weight = np.zeros((r, r), dtype=np.int64)
    for a in range(r):
        for b in range(a, r):
            g = gcd(orders[a], orders[b])
            weight[a, b] = weight[b, a] = int(rng.integers(0, g)) * (denom // g)
    X = np.array(A.elements(), dtype=np.int64).reshape(A.order, r)
    return Cochain2(A, ScalarArray(denom, X @ weight @ X.T))


RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        if status == "PASS" and elapsed > budget:
            status = "FAIL"
        line = f"{status} criterion {number}: {title} ({elapsed:.2f} s, budget {budget:g} s)"
        RESULTS[number] = line
    assert elapsed <= budget, f"criterion {number} took {elapsed:.2f} s, budget {budget} s"


# ---------------------------------------------------------------------------


def test_criterion_1_em_complex():
    groups = [(n,) for n in range(1, 9)] + [(2, 2), (4, 2), (2, 2, 2)]
    rng = np.random.default_rng(1)
    with criterion(1, "d2 d1 = 1 and d2(f) is an abelian 3-cocycle", 10):
        for orders in groups:
            A = FiniteAbelianGroup(orders)
            n = A.order
            for _ in range(500):
                phi = Cochain1(A, random_table(rng, (n,)))
                assert d2(d1(phi)).is_one()
                f = Cochain2(A, random_table(rng, (n, n)))
                assert is_abelian_3_cocycle(d2(f)).ok


def test_criterion_2_trace_bijection():
    with criterion(2, "cocycle_from_form is a cocycle and its trace round-trips", 60):
        for orders in GROUPS_UP_TO_16:
            A = FiniteAbelianGroup(orders)
            for Q in enumerate_pm1_forms(A):
                c = cocycle_from_form(Q)
                assert is_abelian_3_cocycle(c).ok and trace(c) == Q
        Z2 = FiniteAbelianGroup((2,))
        four = [QuadraticForm.from_values(Z2, [ONE, Scalar(1, Fraction(k, 4))]) for k in range(4)]
        assert [Q((1,)) for Q in four] == [ONE, Scalar(1, "1/4"), MINUS, Scalar(1, "3/4")]
        for Q in four:
            c = cocycle_from_form(Q)
            assert is_abelian_3_cocycle(c).ok and trace(c) == Q
        for n in range(1, 7):
            A = FiniteAbelianGroup((n,))
            N = 2 * n if n % 2 == 0 else n
            for a in range(N):
                Q = QuadraticForm.from_function(A, lambda x, a=a: Scalar(1, Fraction(a * x * x, N)))
                c = cocycle_from_form(Q)
                assert is_abelian_3_cocycle(c).ok and trace(c) == Q


def test_criterion_3_h2_ab_vanishes():
    rng = np.random.default_rng(3)
    with criterion(3, "random abelian 2-cocycles are trivialized exactly", 10):
        Z2 = FiniteAbelianGroup((2,))
        f = Cochain2.from_dict(Z2, {((1,), (1,)): "-1"})
        phi = trivialize_2cocycle(f)
        assert d1(phi) == f and phi((1,)).phase.denominator == 4
        for orders in GROUPS_UP_TO_16:
            A = FiniteAbelianGroup(orders)
            for _ in range(200):
                f = d1(Cochain1(A, random_table(rng, (A.order,)))) * random_symmetric_bicharacter(rng, A)
                phi = trivialize_2cocycle(f)
                assert (d1(phi) / f).is_one()


def test_criterion_4_obstruction_end_to_end():
    rng = random.Random(4)
    with criterion(4, "exterior algebra obstructed; twisted group algebras extend; twists unique", 30):
        a = exterior_algebra_z2()
        c = derive_cocycle(a)
        assert c.F.is_one() and c.Omega_at(1, 1) == MINUS
        rep = obstruction_report(a)
        assert not rep.extendable and rep.witness == ((1,),)
        for p in sorted({Fraction(k, d) for d in range(1, 9) for k in range(d)}):
            lam = Cochain2.from_dict(a.group, {((1,), (1,)): Scalar(1, p)})
            assert not verify_extension(apply_twist(a, lam)).ok
        for n in (3, 5):
            b = twisted_group_algebra(n)
            rep = obstruction_report(b)
            assert rep.extendable and verify_extension(apply_twist(b, rep.twist)).ok
            A = b.group
            for _ in range(5):
                vals = [ONE] + [Scalar(Fraction(rng.randint(1, 9), rng.randint(1, 9)), Fraction(rng.randint(0, 11), 12))
                                for _ in range(n - 1)]
                other = rep.twist * d1(Cochain1(A, ScalarArray.from_scalars(np.array(vals, dtype=object))))
                b1, b2 = apply_twist(b, rep.twist), apply_twist(b, other)
                assert verify_extension(b2).ok
                diff = trivialize_2cocycle(other / rep.twist)
                assert d1(diff) == other / rep.twist
                assert d1(relate_extensions(b1, b2)) == rep.twist / other


def test_criterion_5_odd_groups_are_even():
    with criterion(5, "odd groups carry only the trivial sign form; sign forms descend", 5):
        for orders in GROUPS_UP_TO_16:
            A = FiniteAbelianGroup(orders)
            if A.order % 2 == 0:
                continue
            forms = enumerate_pm1_forms(A)
            assert len(forms) == 1 and forms[0].is_trivial()
        for orders in [(4,), (2, 2)]:
            for Q in enumerate_pm1_forms(FiniteAbelianGroup(orders)):
                s = check_pm1_structure(Q)
                assert s.trivial_on_2A and s.coset_constant


def test_criterion_6_diagrams():
    rng = random.Random(6)
    with criterion(6, "star and both octagons commute on 200 random monomials", 60):
        for _ in range(200):
            exps = tuple(rng.randint(-3, 3) for _ in range(6))
            for d in DIAGRAMS:
                rep = verify_diagram(d, exps, 8)
                assert rep.ok, rep.describe()


def test_criterion_7_weird_isomorphism():
    rng = random.Random(7)
    with criterion(7, "the z;z-w to w;z-w triangle commutes on 100 random elements", 10):
        for _ in range(100):
            combo = random_mixed_element(rng)
            lhs = weird_isom(expand_combination(combo, "z;z-w", 8))
            assert lhs.agrees_with(expand_combination(combo, "w;z-w", 8))


def test_criterion_8_evenness():
    with criterion(8, "parity matches Omega(i,i) and the pairing symmetry", 5):
        for make in FIXTURES.values():
            a = make()
            c = derive_cocycle(a)
            for x in a.group.elements():
                r = classify_parity(a, x)
                assert r.omega == c.Omega_at(x, x)
                assert (r.parity is Parity.EVEN) == (c.Omega_at(x, x) == ONE)
        a = exterior_algebra_z2()
        res = pairing_parity(a, (1,), [[0, 1], [-1, 0]], [0, 1, 0, 0], [[1, 0, 0, 0], [0, 1, 0, 0]])
        assert res.compatible and res.kind is PairingKind.ANTISYMMETRIC
        assert classify_parity(a, (1,)).parity is Parity.ODD
        s = symmetric_pairing_algebra()
        res = pairing_parity(s, (1,), [[1, 0], [0, 1]], [1])
        assert res.compatible and res.kind is PairingKind.SYMMETRIC
        assert classify_parity(s, (1,)).parity is Parity.EVEN


def _asets(A: FiniteAbelianGroup):
    seen = set()
    for g in A.elements():
        B = tuple(A.generated_subgroup([g]))
        if B in seen or A.order // len(B) > 6:
            continue
        seen.add(B)
        yield ASet.coset_space(A, list(B))
    yield ASet.disjoint_union([ASet.coset_space(A, A.elements()), ASet.trivial(A, ["p", "q"])])


def test_criterion_9_module_data():
    rng = np.random.default_rng(9)
    with criterion(9, "module and intertwiner coboundaries trivialize; coset modules on Z/4", 10):
        for orders in GROUPS_UP_TO_8:
            A = FiniteAbelianGroup(orders)
            for S in _asets(A):
                assert S.size <= 6
                for _ in range(3):
                    lam = random_table(rng, (A.order, S.size))
                    phi = module_coboundary(S, lam)
                    assert check_module_cocycle(phi).ok
                    back = trivialize_module_cocycle(phi)
                    assert back is not None and module_coboundary(S, back).table == phi.table
                    labels2 = ["u", "v"]
                    mu = random_table(rng, (S.size, 2))
                    psi = psi_coboundary(S, labels2, mu)
                    assert check_psi_cocycle(psi).ok
                    back = trivialize_psi_cocycle(psi)
                    assert back is not None and psi_coboundary(S, labels2, back).table == psi.table
        a = super_exterior_z4()
        assert [trace(derive_cocycle(a))(x) for x in a.group.elements()] == [ONE, MINUS, ONE, MINUS]
        build = coset_module_build(a, [(0,), (2,)])
        assert build.ok
        assert all(phi.table.is_one() and rep.ok for _, phi, rep in build.phi)
        assert all(psi.table.is_one() and rep.ok for _, psi, rep in build.psi)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
