import numpy as np
import pytest

from dirac1d import basis, bc
from dirac1d.errors import GridNotReflectiveError
from dirac1d.quadrature import PI, chebyshev_diff_matrix, closed_grid, gauss_panels, inner

CASES = {
    "periodic": bc.CanonicalBc(-1, 0, 0, -1),
    "antiperiodic": bc.CanonicalBc(1, 0, 0, 1),
    "dirichlet": bc.CanonicalBc(0, 1, 1, 0),
    "strictly_regular": bc.CanonicalBc(3, 1, 1, 1),
    "case_i": bc.CanonicalBc(1, 0, 1, 1),
    "case_ii": bc.CanonicalBc(1, 1, 0, 1),
    "case_iii": bc.CanonicalBc(2, 1, -1, 0),
}


@pytest.fixture(scope="module")
def quad():
    return gauss_panels()


@pytest.fixture(scope="module", params=list(CASES))
def fam(request):
    return basis.make_family(CASES[request.param])


class TestClosedForms:
    def test_periodic_phi_is_plain_exponential(self):
        f = basis.make_family(CASES["periodic"])
        x = np.linspace(0, PI, 11)
        vals = basis.eval_phi(f, 1, 4, x)
        assert np.allclose(vals[0], np.exp(-4j * x))
        assert np.allclose(vals[1], 0)

    def test_dirichlet_point_value(self):
        f = basis.make_family(CASES["dirichlet"])
        vals = basis.eval_phi(f, 1, 0, np.array([0.0]))
        assert abs(vals[0, 0] - 1) < 1e-14
        assert abs(vals[1, 0] + 1) < 1e-14

    def test_case_i_associated_function(self):
        # direct substitution of the fixed vectors into the associated form
        f = basis.make_family(CASES["case_i"])
        x = np.linspace(0, PI, 7)
        k = 2
        vals = basis.eval_phi(f, 2, k, x)
        ts = f.cd.tau_star
        expect1 = (PI - 0 * x) * np.exp(1j * ts * (PI - x)) * np.exp(-1j * k * x)
        expect2 = x * np.exp(1j * ts * x) * np.exp(1j * k * x)
        assert np.allclose(vals[0], expect1)
        assert np.allclose(vals[1], expect2)

    def test_periodic_phi_tilde(self):
        f = basis.make_family(CASES["periodic"])
        x = np.linspace(0, PI, 5)
        vals = basis.eval_phi_tilde(f, 1, 6, x)
        assert np.allclose(vals[0], np.exp(-6j * x))
        assert np.allclose(vals[1], 0)


class TestBiorthogonality:
    def test_full_matrix(self, fam, quad):
        x, w = quad
        ks = np.arange(-16, 17, 2)
        worst = 0.0
        blocks_phi = np.concatenate(
            [basis.eval_phi_block(fam, mu, ks, x) for mu in (1, 2)], axis=0
        )
        blocks_til = np.concatenate(
            [basis.eval_phi_block(fam, mu, ks, x, tilde=True) for mu in (1, 2)], axis=0
        )
        weighted = blocks_phi * (w / PI)[None, None, :]
        gram = np.einsum("icq,jcq->ij", weighted, np.conj(blocks_til))
        worst = np.max(np.abs(gram - np.eye(len(gram))))
        assert worst < 1e-10

    def test_spot_values_case_i(self, quad):
        x, w = quad
        f = basis.make_family(CASES["case_i"])
        p = basis.eval_phi(f, 2, 4, x)
        assert abs(inner(p, basis.eval_phi_tilde(f, 2, 4, x), w) - 1) < 1e-10
        assert abs(inner(p, basis.eval_phi_tilde(f, 1, 4, x), w)) < 1e-10


class TestDifferentialEquation:
    def test_eigen_equation_and_chain(self, fam):
        xc, D = chebyshev_diff_matrix(96)
        for k in (-16, -2, 0, 4, 16):
            for mu in (1, 2):
                vals = basis.eval_phi(fam, mu, k, xc)
                lam = fam.free_eigenvalue(mu, k)
                lphi = np.stack([1j * (D @ vals[0]), -1j * (D @ vals[1])])
                if fam.jordan and mu == 2:
                    phi1 = basis.eval_phi(fam, 1, k, xc)
                    resid = lphi - lam * vals + 1j * phi1
                else:
                    resid = lphi - lam * vals
                assert np.max(np.abs(resid)) < 1e-8

    def test_boundary_rows(self, fam):
        for k in (-16, 0, 8):
            for mu in (1, 2):
                assert np.max(np.abs(basis.boundary_residual(fam, mu, k))) < 1e-10

    def test_dual_family_satisfies_adjoint_rows(self, fam):
        for k in (-6, 0, 12):
            for mu in (1, 2):
                r = basis.boundary_residual(fam, mu, k, tilde=True)
                assert np.max(np.abs(r)) < 1e-10


class TestIsomorphism:
    def test_roundtrip_identity(self, fam):
        x = closed_grid(8)
        f = np.sin(3 * x) + 1j * np.cos(x)
        g = np.exp(np.sin(2 * x)) + 0j
        out = basis.apply_A_inv(fam, basis.apply_A(fam, (f, g), x), x)
        assert np.max(np.abs(out[0] - f)) < 1e-12
        assert np.max(np.abs(out[1] - g)) < 1e-12

    def test_maps_exponential_basis_to_phi(self, fam):
        x = closed_grid(8)
        for k, mu in [(4, 1), (-6, 2)]:
            e = np.exp(1j * k * x)
            z = np.zeros_like(e)
            fg = (e, z) if mu == 1 else (z, e)
            lhs = basis.apply_A(fam, fg, x)
            rhs = basis.eval_phi(fam, mu, k, x)
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_periodic_is_identity_transform(self):
        f = basis.make_family(CASES["periodic"])
        x = closed_grid(6)
        g = (np.cos(2 * x) + 0j, np.sin(4 * x) + 0j)
        out = basis.apply_A(f, g, x)
        # alpha = e1, beta = e2, tau = 0: A only reflects the first slot twice
        assert np.max(np.abs(out[0] - g[0][::-1])) < 1e-14
        assert np.max(np.abs(out[1] - g[1])) < 1e-14

    def test_rejects_non_reflective_grid(self, fam):
        x = np.linspace(0, PI, 7) ** 1.0
        x[1] += 1e-3
        with pytest.raises(GridNotReflectiveError):
            basis.apply_A(fam, (x * 0j, x * 0j), x)


class TestRieszConstants:
    def test_periodic_orthonormal(self):
        f = basis.make_family(CASES["periodic"])
        rc = basis.riesz_constants(f, 16)
        assert abs(rc.norm_a - 1) < 1e-10
        assert abs(rc.norm_a_inv - 1) < 1e-10

    def test_product_at_least_one(self, fam):
        rc = basis.riesz_constants(f := fam, 16)
        assert rc.product >= 1 - 1e-12

    def test_dirichlet_stable_in_truncation(self):
        # the fixed eigenvector normalization gives ||phi|| = sqrt(2) here,
        # so norm_a = sqrt(2) and norm_a_inv = 1/sqrt(2); only the product
        # is bounded below by 1
        f = basis.make_family(CASES["dirichlet"])
        r32 = basis.riesz_constants(f, 32)
        r64 = basis.riesz_constants(f, 64)
        assert r32.norm_a >= 1 and r32.product >= 1
        assert abs(r64.norm_a - r32.norm_a) <= 0.01 * r32.norm_a
        assert abs(r64.norm_a_inv - r32.norm_a_inv) <= 0.01 * r32.norm_a_inv
        # monotone non-decreasing with the span
        assert r64.norm_a >= r32.norm_a - 1e-12
        assert r64.norm_a_inv >= r32.norm_a_inv - 1e-12


class TestFreeSpectrum:
    def test_periodic_even_integers(self):
        f = basis.make_family(CASES["periodic"])
        sp = basis.free_spectrum(f, 8)
        vals = sorted(e.value.real for e in sp.eigenvalues)
        assert vals == list(range(-8, 9, 2))
        assert all(e.algebraic_multiplicity == 2 for e in sp.eigenvalues)
        assert all(e.geometric_multiplicity == 2 for e in sp.eigenvalues)

    def test_antiperiodic_odd_integers(self):
        f = basis.make_family(CASES["antiperiodic"])
        sp = basis.free_spectrum(f, 8)
        vals = sorted(round(e.value.real) for e in sp.eigenvalues)
        assert vals == list(range(-7, 10, 2))

    def test_dirichlet_all_integers(self):
        f = basis.make_family(CASES["dirichlet"])
        sp = basis.free_spectrum(f, 8)
        vals = sorted(round(e.value.real) for e in sp.eigenvalues)
        assert vals == list(range(-8, 10))
        assert sp.merged_progression

    def test_jordan_multiplicities(self):
        f = basis.make_family(CASES["case_i"])
        sp = basis.free_spectrum(f, 8)
        assert all(e.algebraic_multiplicity == 2 for e in sp.eigenvalues)
        assert all(e.geometric_multiplicity == 1 for e in sp.eigenvalues)

    def test_separation_by_rho(self):
        f = basis.make_family(CASES["strictly_regular"])
        sp = basis.free_spectrum(f, 16)
        rho = f.cd.rho
        e1 = [e.value for e in sp.eigenvalues if e.branch == 1]
        e2 = [e.value for e in sp.eigenvalues if e.branch == 2]
        gap = min(abs(a - b) for a in e1 for b in e2)
        assert gap >= 2 * rho - 1e-12
