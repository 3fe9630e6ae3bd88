"""Abelian 3-cocycles on small groups: build, check, trace, trivialize.

Run with ``python3 demos/01_cocycles_and_traces.py``.
"""
from fractions import Fraction

from vaobstruction.cohomology import AbelianCochain3, Cochain2, d2, is_abelian_3_cocycle, trace, trivialize_3cocycle
from vaobstruction.forms import QuadraticForm, cocycle_from_form, enumerate_pm1_forms
from vaobstruction.groups import FiniteAbelianGroup
from vaobstruction.scalar import Scalar

Z2 = FiniteAbelianGroup((2,))
Z4 = FiniteAbelianGroup((4,))

# Super vector spaces: trivial associator, odd-odd braiding -1.
sup = AbelianCochain3.from_dicts(Z2, Omega={(1, 1): "-1"})
print("super cocycle:", is_abelian_3_cocycle(sup).ok)
print("its trace:", trace(sup))
tr = trivialize_3cocycle(sup)
print("obstructed:", tr.obstructed, "witness:", tr.witness)

# A coboundary with arbitrary phases is always trivializable.
lam = Cochain2.from_function(Z4, lambda i, j: Scalar(1, Fraction(i * j, 8)))
c = d2(lam)
tr = trivialize_3cocycle(c)
print("coboundary trivialized:", not tr.obstructed, "and d2 recovers it:", d2(tr.cochain) == c)

# Every form comes from a cocycle, and the trace gives it back.
Q = QuadraticForm.from_function(Z4, lambda x: Scalar(1, Fraction(x * x, 8)))
print("form -> cocycle -> trace round trip:", trace(cocycle_from_form(Q)) == Q)

K = FiniteAbelianGroup((2, 2))
forms = enumerate_pm1_forms(K)
print(f"{len(forms)} forms with values +-1 on Z/2 x Z/2")
