"""
Three ways to test a Legendre curve for ordinarity
==================================================

y^2 z = x (x - z)(x - lam z) is ordinary when Frobenius acts invertibly on
H^1(O_X).  The cohomology model, the Deuring polynomial and the Cartier-Manin
matrix of y^2 = x(x-1)(x-lam) should agree for every lam.
"""

from charp import cartier_manin_hyperelliptic, deuring_hasse, hasse_witt, legendre_h, make_legendre_cubic

for p in (3, 5, 7, 11, 13):
    row = []
    for lam in range(2, p):
        hw = hasse_witt(make_legendre_cubic(p, lam)).tolist()[0][0]
        cm = cartier_manin_hyperelliptic(p, legendre_h(lam), 1).tolist()[0][0]
        H = deuring_hasse(p, lam)
        assert (hw != 0) == (H != 0) == (cm != 0)
        row.append("." if H else "S")
    print(f"p={p:2d}  " + "".join(row))

# S marks a supersingular lambda
