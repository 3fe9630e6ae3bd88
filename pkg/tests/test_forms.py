import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GROUPS_UP_TO_16, as_dict, group, ref_is_cocycle
from vaobstruction.cohomology import AbelianCochain3, is_abelian_3_cocycle, trace, trivialize_3cocycle
from vaobstruction.forms import (
    GroupTooLarge,
    NotAQuadraticForm,
    NotCosetConstant,
    QuadraticForm,
    ValuesNotPm1,
    associated_bilinear,
    check_pm1_structure,
    cocycle_from_form,
    enumerate_pm1_forms,
    is_quadratic_form,
    pm1_forms_from_parameters,
    pullback_form,
)
from vaobstruction.scalar import Scalar

Z2, Z4 = group((2,)), group((4,))
ONE, MINUS, I = Scalar(), Scalar.from_rational(-1), Scalar(1, Fraction(1, 4))


def form(A, values):
    return QuadraticForm.from_values(A, values)


def ref_is_form(Q) -> bool:
    A = Q.group
    E = A.elements()
    add = A.add
    if any(Q(x) != Q(A.neg(x)) for x in E):
        return False
    return all(Q(add(add(i, j), k)) * Q(i) * Q(j) * Q(k) == Q(add(i, j)) * Q(add(i, k)) * Q(add(j, k))
               for i, j, k in itertools.product(E, repeat=3))


def cyclic_forms(n):
    """Every form ``x -> exp(2 pi i a x^2 / N)`` on Z/n, N = 2n for even n."""
    N = 2 * n if n % 2 == 0 else n
    return [QuadraticForm.from_function(group((n,)), lambda x, a=a: Scalar(1, Fraction(a * x * x, N)))
            for a in range(N)]


def test_is_quadratic_form_examples():
    assert is_quadratic_form(QuadraticForm.trivial(Z2)).ok
    assert is_quadratic_form(form(Z2, ["1", "-1"])).ok
    rep = is_quadratic_form(form(Z4, ["1", "1", "-1", "-1"]))
    assert not rep.ok and rep.condition == "symmetry" and rep.at == ((1,),)


@given(st.sampled_from([(2,), (3,), (4,), (2, 2)]), st.data())
def test_form_check_agrees_with_reference(orders, data):
    A = group(orders)
    vals = data.draw(st.lists(st.sampled_from([0, 1, 2, 3]), min_size=A.order, max_size=A.order))
    Q = form(A, [Scalar(1, Fraction(v, 4)) for v in vals])
    assert is_quadratic_form(Q).ok == ref_is_form(Q)


def test_associated_bilinear_examples():
    assert associated_bilinear(form(Z2, ["1", "-1"]))((1,), (1,)) == ONE
    assert associated_bilinear(form(Z2, [ONE, I]))((1,), (1,)) == MINUS
    assert associated_bilinear(QuadraticForm.trivial(Z4)).is_one()
    with pytest.raises(NotAQuadraticForm):
        associated_bilinear(form(Z4, ["1", "1", "-1", "-1"]))


def test_pm1_structure_examples():
    s = check_pm1_structure(form(Z4, ["1", "-1", "1", "-1"]))
    assert s.trivial_on_2A and s.coset_constant and s.doubled == ((0,), (2,))
    assert check_pm1_structure(QuadraticForm.trivial(Z4)).ok
    with pytest.raises(ValuesNotPm1):
        check_pm1_structure(form(Z2, [ONE, I]))
    # the check also flags a non-form
    assert not check_pm1_structure(form(Z4, ["1", "1", "-1", "-1"])).ok


def test_pullback_examples():
    Q = form(Z4, ["1", "-1", "1", "-1"])
    pb = pullback_form(Q, [(0,), (2,)])
    assert pb.form.group.cyclic_orders == (2,) and pb.form.values() == [ONE, MINUS] and pb.report.ok
    assert [pb.form.values()[p] for p in pb.projection] == Q.values()
    whole = pullback_form(QuadraticForm.trivial(Z4), Z4.elements())
    assert whole.form.group.order == 1 and whole.form.is_trivial()
    with pytest.raises(NotCosetConstant):
        pullback_form(Q, Z4.elements())
    same = pullback_form(Q, [(0,)])
    assert same.form.values() == Q.values()


def test_cocycle_from_form_super_example():
    c = cocycle_from_form(form(Z2, ["1", "-1"]))
    assert c.F.is_one()
    assert all(c.Omega_at(i, j) == (MINUS if i * j % 2 else ONE) for i in range(2) for j in range(2))


def test_cocycle_from_form_semion_matches_exhaustive_search():
    """All normalized 8th-root cochains on Z/2 with trace i, found by brute force."""
    solutions = []
    for a, b in itertools.product(range(8), repeat=2):
        F = {k: ONE for k in itertools.product([(0,), (1,)], repeat=3)}
        O = {k: ONE for k in itertools.product([(0,), (1,)], repeat=2)}
        F[((1,), (1,), (1,))] = Scalar(1, Fraction(a, 8))
        O[((1,), (1,))] = Scalar(1, Fraction(b, 8))
        if O[((1,), (1,))] == I and ref_is_cocycle(Z2, F, O):
            solutions.append((F[((1,), (1,), (1,))], O[((1,), (1,))]))
    assert solutions == [(MINUS, I)]
    c = cocycle_from_form(form(Z2, [ONE, I]))
    assert (c.F_at(1, 1, 1), c.Omega_at(1, 1)) == solutions[0]


def test_cocycle_from_form_errors():
    with pytest.raises(NotAQuadraticForm):
        cocycle_from_form(form(Z4, ["1", "1", "-1", "-1"]))
    # on a finite group the axioms already force root-of-unity values, so a
    # rational value other than +-1 is rejected as a non-form
    with pytest.raises(NotAQuadraticForm):
        cocycle_from_form(form(Z2, ["1", "4"]))


def test_enumerate_examples():
    assert [Q.values() for Q in enumerate_pm1_forms(Z2)] == [[ONE, ONE], [ONE, MINUS]]
    assert len(enumerate_pm1_forms(group((3,)))) == 1
    assert len(enumerate_pm1_forms(group((1,)))) == 1
    with pytest.raises(GroupTooLarge):
        enumerate_pm1_forms(group((4, 4, 2)))


@pytest.mark.parametrize("orders", GROUPS_UP_TO_16)
def test_pm1_forms_structure_and_round_trip(orders):
    A = group(orders)
    forms = enumerate_pm1_forms(A)
    # independent generator: signs on generators and generator pairs
    assert sorted(str(Q.values()) for Q in forms) == sorted(str(Q.values()) for Q in pm1_forms_from_parameters(A))
    if A.order % 2:
        assert len(forms) == 1 and forms[0].is_trivial()
    for Q in forms:
        assert check_pm1_structure(Q).ok
        c = cocycle_from_form(Q)
        assert c.is_normalized() and trace(c) == Q


@pytest.mark.parametrize("orders", [(2,), (4,), (2, 2), (3,), (4, 2)])
def test_pm1_enumeration_matches_brute_force(orders):
    A = group(orders)
    brute = []
    for signs in itertools.product([ONE, MINUS], repeat=A.order - 1):
        Q = form(A, [ONE, *signs])
        if ref_is_form(Q):
            brute.append(Q.values())
    assert sorted(map(str, brute)) == sorted(str(Q.values()) for Q in enumerate_pm1_forms(A))


@pytest.mark.parametrize("n", range(1, 9))
def test_cyclic_forms_round_trip(n):
    for Q in cyclic_forms(n):
        assert ref_is_form(Q)
        c = cocycle_from_form(Q)
        assert is_abelian_3_cocycle(c).ok and trace(c) == Q


@pytest.mark.parametrize("orders", [(2,), (4,), (2, 2), (3,)])
def test_cyclic_representatives_pass_reference_check(orders):
    A = group(orders)
    for Q in enumerate_pm1_forms(A):
        c = cocycle_from_form(Q)
        assert ref_is_cocycle(A, as_dict(A, c.F, 3), as_dict(A, c.Omega, 2))


def test_equal_traces_give_cohomologous_cocycles():
    A = group((4, 2))
    for Q in enumerate_pm1_forms(A):
        c1 = cocycle_from_form(Q)
        # a second representative: the same form built on the swapped presentation
        B = group((2, 4))
        Qs = QuadraticForm.from_function(B, lambda x: Q((x[1], x[0])))
        cs = cocycle_from_form(Qs)
        c2 = AbelianCochain3.from_functions(
            A, F=lambda i, j, k: cs.F_at((i[1], i[0]), (j[1], j[0]), (k[1], k[0])),
            Omega=lambda i, j: cs.Omega_at((i[1], i[0]), (j[1], j[0])))
        assert trace(c2) == Q
        assert not trivialize_3cocycle(c1 / c2).obstructed
