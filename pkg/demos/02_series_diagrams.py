"""Expansions of universal monomials and commuting diagrams of embeddings."""
from vaobstruction.formal import DIAGRAMS, expand, taylor_shift, verify_diagram

INV = (0, 0, 0, -1, 0, 0)  # (z-w)^-1; exponent order z, w, t, z-w, z-t, w-t

print("(z-w)^-1 in z;w :", expand(INV, "z;w", frontier=4).to_text())
print("(z-w)^-1 in w;z :", expand(INV, "w;z", frontier=4).to_text())

# Shifting w by z-w turns the expansion of w^-1 into that of z^-1.
s = expand((0, -1, 0, 0, 0, 0), "w;z-w", 5)
print("w^-1 shifted    :", taylor_shift(s, "z-w", "w").to_text())

exps = (1, -1, 0, -1, 1, -2)
for name in sorted(DIAGRAMS):
    print(verify_diagram(name, exps, frontier=6).describe())
