"""
Euler characteristics of twists of B^1 on a quartic surface
===========================================================

An Ulrich bundle E on a surface has chi(E(-1)) = chi(E(-2)) = 0.  For the
quartic K3 chi(B^1(s)) = 2 s^2 (p^2 - 1), which vanishes only at s = 0, so no
twist of B^1 clears both conditions.
"""

from charp import chi_b1, make_fermat, ulrich_twist_obstruction

X = make_fermat(3, 3, 4)
print([chi_b1(X, s) for s in range(-3, 4)])

v = ulrich_twist_obstruction(X, range(-10, 11))
print(v.value, "admissible:", v.evidence["admissible"])
