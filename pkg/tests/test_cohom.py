import random

import pytest

from charp.cohom import (
    HypersurfaceDatum,
    NegMonomialBasis,
    b1_dims,
    b1_table,
    cartier_omega_map,
    chi_b1,
    chi_line,
    frobenius_h0_map,
    frobenius_htop_map,
    h0_dim,
    h0_quotient_basis,
    h_line_bundle_pn,
    hasse_witt,
    htop_kernel_basis,
    pushforward_twist_dims,
)
from charp.families import make_fermat, make_legendre_cubic, random_hypersurface
from charp.matfp import mat_rank
from charp.polyfp import poly_parse, poly_permute

from oracles import elliptic_trace_mod_p


def hyp(text, p, n):
    return HypersurfaceDatum(p, n, poly_parse(text, p, n + 1))


FERMAT_QUARTIC_3 = make_fermat(3, 3, 4)
FERMAT_CUBIC_7 = make_fermat(7, 2, 3)


def test_datum_classification():
    assert FERMAT_QUARTIC_3.kind == "calabi-yau" and FERMAT_QUARTIC_3.dim == 2
    assert make_fermat(5, 3, 3).kind == "fano"
    assert make_fermat(7, 2, 5).kind == "general-type"
    assert make_fermat(7, 2, 5).genus == 6
    with pytest.raises(ValueError):
        hyp("x0^2 + x1", 5, 2)
    with pytest.raises(ValueError):
        hyp("x0 - x0", 5, 2)


@pytest.mark.parametrize("n, j, expected", [(2, -3, (0, 1)), (3, 0, (1, 0)), (2, 4, (15, 0)), (3, -6, (0, 10))])
def test_line_bundles_on_pn(n, j, expected):
    assert h_line_bundle_pn(n, j) == expected


def test_neg_monomial_basis():
    B = NegMonomialBasis(2, -4)
    assert len(B) == 3
    assert all(sum(a) == -4 and max(a) <= -1 for a in B.monomials)
    assert len(NegMonomialBasis(3, -3)) == 0


# -- H^0 ---------------------------------------------------------------------------

def test_h0_quotient_examples():
    assert h0_quotient_basis(FERMAT_QUARTIC_3, 0).basis == [(0, 0, 0, 0)]
    assert len(h0_quotient_basis(make_fermat(5, 2, 3), 3)) == 9
    assert len(h0_quotient_basis(FERMAT_QUARTIC_3, -1)) == 0


def test_h0_quotient_reduces_f_to_zero():
    X = random_hypersurface(5, 2, 4, seed=3)
    qb = h0_quotient_basis(X, 4)
    assert not qb.reduce_poly(X.f).any()
    assert len(qb) == h0_dim(X, 4) == 15 - 1


def test_frobenius_h0_examples():
    assert frobenius_h0_map(FERMAT_QUARTIC_3, 0).matrix.tolist() == [[1]]
    F = frobenius_h0_map(make_fermat(2, 2, 3), 1)
    assert F.matrix.shape == (6, 3) and F.is_injective
    assert frobenius_h0_map(FERMAT_QUARTIC_3, -1).matrix.shape == (0, 0)


# -- H^top ---------------------------------------------------------------------------

def test_htop_examples():
    assert len(htop_kernel_basis(FERMAT_QUARTIC_3, 0)) == 1
    assert len(htop_kernel_basis(FERMAT_CUBIC_7, 0)) == 1
    quartic = random_hypersurface(5, 2, 4, seed=0)
    # Serre duality oracle: h^1(O_X(1)) = h^0(O_X(0))
    assert len(htop_kernel_basis(quartic, 1)) == len(h0_quotient_basis(quartic, 0)) == 1


def test_frobenius_htop_examples():
    assert frobenius_htop_map(FERMAT_QUARTIC_3, 0).matrix.tolist() == [[0]]
    assert frobenius_htop_map(FERMAT_CUBIC_7, 0).matrix.tolist() == [[6]]
    F = frobenius_htop_map(FERMAT_CUBIC_7, 1)
    assert F.source_dim == 0 and F.matrix.shape == (0, 0)


def test_hasse_witt_examples():
    assert hasse_witt(make_fermat(2, 2, 3)).tolist() == [[0]]
    assert hasse_witt(FERMAT_CUBIC_7).tolist() == [[6]]
    assert hasse_witt(make_legendre_cubic(3, 2)).tolist() == [[0]]
    with pytest.raises(ValueError):
        hasse_witt(FERMAT_QUARTIC_3)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_hasse_witt_entry_is_trace_of_frobenius(p):
    # oracle: a_p = p + 1 - #E(F_p) by brute-force point count
    for seed in range(4):
        X = random_hypersurface(p, 2, 3, seed)
        assert hasse_witt(X).tolist() == [[elliptic_trace_mod_p(dict(X.f.terms), p)]]


def test_hasse_witt_size_is_genus():
    for p, d in [(3, 4), (5, 4), (3, 5)]:
        X = random_hypersurface(p, 2, d, seed=1)
        assert hasse_witt(X).shape == (X.genus, X.genus)


def test_cartier_dual_to_frobenius_on_curves():
    for p in (3, 5):
        for seed in range(5):
            X = random_hypersurface(p, 2, 4, seed)
            assert mat_rank(cartier_omega_map(X)) == mat_rank(hasse_witt(X))


def test_lazy_matrix_matches_rank_off_zero_twist():
    X = random_hypersurface(3, 2, 4, seed=2)
    F = frobenius_htop_map(X, -1)
    assert F.matrix.shape == (F.target_dim, F.source_dim)
    assert mat_rank(F.matrix) == F.rank


def test_well_definedness_is_checked():
    # every map below runs the f * image == 0 assertion
    for m in range(-3, 1):
        frobenius_htop_map(FERMAT_QUARTIC_3, m, verify=True)
        frobenius_htop_map(random_hypersurface(3, 3, 4, seed=0), m, verify=True)


# -- B^1 -----------------------------------------------------------------------------

def test_b1_ordinary_curve_twist0():
    assert b1_dims(FERMAT_CUBIC_7, 0).h == (0, 0)


def test_b1_fermat_quartic_p3():
    row = b1_dims(FERMAT_QUARTIC_3, 0)
    assert row.h == (0, 1, 1)


def test_b1_fermat_cubic_p2_twist1():
    X = make_fermat(2, 2, 3)
    row = b1_dims(X, 1)
    assert row.h == (3, 0)
    # Riemann-Roch oracle: chi(B1(1)) = chi(O(2)) - chi(O(1)) = 6 - 3
    assert row.euler == 3 == chi_line(X, 2) - chi_line(X, 1)


def test_pushforward_dims():
    X = make_fermat(3, 3, 4)
    for m in range(-3, 4):
        assert pushforward_twist_dims(X, m)[1] == 0
    assert pushforward_twist_dims(X, 0) == (1, 0, 1)
    Q = make_fermat(3, 4, 5)
    dims = pushforward_twist_dims(Q, -1)
    assert dims == (0, 0, 0, len(h0_quotient_basis(Q, 3))) == (0, 0, 0, 35)


def test_chi_closed_form_k3():
    X = FERMAT_QUARTIC_3
    for j in range(-5, 6):
        assert chi_line(X, j) == 2 * j * j + 2
    for s in range(-4, 5):
        assert chi_b1(X, s) == 2 * s * s * (X.p ** 2 - 1)


# -- invariants ----------------------------------------------------------------------

def _instances():
    yield FERMAT_QUARTIC_3
    yield make_fermat(5, 3, 4)
    yield FERMAT_CUBIC_7
    yield make_fermat(5, 2, 3)
    yield make_fermat(2, 3, 3)
    for seed in range(3):
        yield random_hypersurface(3, 2, 4, seed)
        yield random_hypersurface(5, 3, 4, seed)


@pytest.mark.parametrize("X", list(_instances()), ids=repr)
def test_chi_additivity_and_serre(X):
    for s in range(-4, 3):
        row = b1_dims(X, s)  # asserts chi additivity internally
        assert row.euler == chi_line(X, X.p * s) - chi_line(X, s)
        assert all(v >= 0 for v in row.h)
    for m in range(-4, X.canonical_level + 3):
        assert len(htop_kernel_basis(X, m)) == len(h0_quotient_basis(X, X.canonical_level - m))


def test_twist_zero_kernel_equals_cokernel():
    for X in _instances():
        F = frobenius_htop_map(X, 0)
        assert F.kernel_dim == F.cokernel_dim


def test_b1_table_rows():
    t = b1_table(FERMAT_CUBIC_7, [1, -1, 0])
    assert t.twists == [-1, 0, 1]
    assert t[0].h == (0, 0)


@pytest.mark.parametrize("seed", range(20))
def test_ranks_invariant_under_variable_permutation(seed):
    rng = random.Random(seed)
    p, n, d = [(3, 3, 4), (5, 3, 4), (3, 2, 4), (5, 2, 3)][seed % 4]
    X = random_hypersurface(p, n, d, seed)
    perm = list(range(n + 1))
    rng.shuffle(perm)
    Y = HypersurfaceDatum(p, n, poly_permute(X.f, perm))
    for m in (-2, -1, 0):
        assert frobenius_htop_map(X, m).rank == frobenius_htop_map(Y, m).rank
    assert frobenius_h0_map(X, 1).rank == frobenius_h0_map(Y, 1).rank
