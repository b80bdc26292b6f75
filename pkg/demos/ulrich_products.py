"""
Ulrich bundles from B^1 on curves and their products
====================================================

On an ordinary plane cubic B^1(1) has no cohomology at the twists the Ulrich
condition looks at.  Products of such curves inherit this through Kunneth;
one supersingular factor is enough to break it.
"""

from charp import b1_table, kunneth_ulrich_check, make_fermat, ulrich_check_curve

ordinary = make_fermat(7, 2, 3)
supersingular = make_fermat(5, 2, 3)

print(ulrich_check_curve(ordinary).summary())
print(ulrich_check_curve(supersingular).evidence["witness"])

good = b1_table(ordinary, [-1, 0, 1])
bad = b1_table(supersingular, [-1, 0, 1])
print("7 x 7:", kunneth_ulrich_check([good, good]).summary())
print("5 x 7:", kunneth_ulrich_check([bad, good]).summary())

# the tables behind the verdict
for s in (-1, 0, 1):
    print(s, good[s].h, bad[s].h)
