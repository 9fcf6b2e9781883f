import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirac1d import bc
from dirac1d.errors import NotRegularError, SingularA14Error, ZeroRootError

PI = np.pi


def random_regular_canonical(rng):
    """Random canonical bc, rejection-sampled to be safely regular."""
    while True:
        b, a, d, c = (rng.standard_normal(4) + 1j * rng.standard_normal(4)) / np.sqrt(2)
        if abs(b * c - a * d) > 1e-3:
            return bc.CanonicalBc(b=b, a=a, d=d, c=c)


class TestNormalize:
    def test_identity_a14(self):
        out = bc.normalize_bc([[1, -1, 0, 0], [0, 0, -1, 1]])
        assert out.b == -1 and out.a == 0 and out.d == 0 and out.c == -1

    def test_scaled_rows(self):
        # multiply by inv(A14) by hand: rows scaled by 2 and -3
        out = bc.normalize_bc([[2, -2, 0, 0], [0, 0, -3, 3]])
        assert abs(out.b + 1) < 1e-14 and abs(out.c + 1) < 1e-14
        assert abs(out.a) < 1e-14 and abs(out.d) < 1e-14

    def test_singular_a14(self):
        with pytest.raises(SingularA14Error):
            bc.normalize_bc([[0, 1, 1, 0], [0, 1, 0, 1]])

    def test_not_regular(self):
        # b c - a d = 0
        with pytest.raises(NotRegularError):
            bc.normalize_bc([[1, 1, 1, 0], [0, 1, 1, 1]])

    def test_invariance_under_row_operations(self):
        rng = np.random.default_rng(7)
        base = np.array([[1, 3, 1, 0], [0, 1, 1, 1]], dtype=complex)
        ref = bc.normalize_bc(base)
        for _ in range(200):
            g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            while abs(np.linalg.det(g)) < 1e-2:
                g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            out = bc.normalize_bc(g @ base)
            for name in "badc":
                assert abs(getattr(out, name) - getattr(ref, name)) < 1e-10


class TestClassify:
    def test_periodic_type(self):
        cls = bc.classify(bc.CanonicalBc(b=-1, a=0, d=0, c=-1))
        assert cls.kind is bc.BcKind.PERIODIC_TYPE

    def test_dirichlet(self):
        cls = bc.classify(bc.CanonicalBc(b=0, a=1, d=1, c=0))
        assert cls.strictly_regular and cls.dirichlet_type

    def test_case_i(self):
        cls = bc.classify(bc.CanonicalBc(b=1, a=0, d=1, c=1))
        assert cls.kind is bc.BcKind.CASE_I and cls.jordan

    def test_case_ii(self):
        cls = bc.classify(bc.CanonicalBc(b=1, a=1, d=0, c=1))
        assert cls.kind is bc.BcKind.CASE_II

    def test_case_iii(self):
        cls = bc.classify(bc.CanonicalBc(b=2, a=1, d=-1, c=0))
        assert cls.kind is bc.BcKind.CASE_III


class TestCharRoots:
    def test_double_root(self):
        cd = bc.char_roots(bc.CanonicalBc(b=-1, a=0, d=0, c=-1))
        assert cd.double and abs(cd.z_star - 1) < 1e-15

    def test_dirichlet_pm_one(self):
        cd = bc.char_roots(bc.CanonicalBc(b=0, a=1, d=1, c=0))
        assert abs(cd.z[0] - 1) < 1e-15 and abs(cd.z[1] + 1) < 1e-15
        assert abs(cd.tau[0]) < 1e-15 and abs(cd.tau[1] - 1) < 1e-15
        assert abs(cd.rho - 0.5) < 1e-15

    def test_quadratic_oracle(self):
        cbc = bc.CanonicalBc(b=3, a=1, d=1, c=1)
        cd = bc.char_roots(cbc)
        roots = sorted(cd.z, key=lambda z: z.real)
        assert abs(roots[0] - (-2 - np.sqrt(2))) < 1e-14
        assert abs(roots[1] - (-2 + np.sqrt(2))) < 1e-14

    def test_tau_examples(self):
        assert abs(bc.tau_branch(1.0)) < 1e-15
        assert abs(bc.tau_branch(-1.0) - 1.0) < 1e-15
        t = bc.tau_branch(-2 + np.sqrt(2))
        assert abs(t - (1 + 0.17023212609326427j)) < 1e-12

    def test_zero_root(self):
        with pytest.raises(ZeroRootError):
            bc.tau_branch(0.0)

    def test_residuals_random(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            cbc = random_regular_canonical(rng)
            cd = bc.char_roots(cbc)
            q, p = cbc.b + cbc.c, cbc.det_a23
            for z, t in zip(cd.z, cd.tau):
                assert abs(z * z + q * z + p) < 1e-12 * max(1.0, abs(p), abs(q) ** 2)
                assert abs(np.exp(1j * PI * t) - z) < 1e-12 * max(1.0, abs(z))
            if not cd.double:
                t1, t2 = cd.tau
                assert abs(t1.real) <= 1.0 + 1e-14
                assert abs(t1.real - t2.real) <= 1.0 + 1e-14
                assert cd.rho > 0

    def test_minus_z_eigenvalue_of_a23(self):
        # characteristic-polynomial residual of A23 at -z
        rng = np.random.default_rng(5)
        for _ in range(200):
            cbc = random_regular_canonical(rng)
            cd = bc.char_roots(cbc)
            a23 = cbc.a23
            tr, det = a23[0, 0] + a23[1, 1], np.linalg.det(a23)
            for z in cd.z:
                lam = -z
                assert abs(lam * lam - tr * lam + det) < 1e-11 * max(1.0, abs(det), abs(tr) ** 2)


class TestAdjoint:
    def test_periodic_self_adjoint(self):
        cbc = bc.CanonicalBc(b=-1, a=0, d=0, c=-1)
        adj = bc.adjoint_bc(cbc)
        assert abs(adj.b + 1) < 1e-15 and abs(adj.c + 1) < 1e-15
        assert abs(adj.a) < 1e-15 and abs(adj.d) < 1e-15

    def test_inverse_transpose_conjugate_oracle(self):
        cbc = bc.CanonicalBc(b=3, a=1, d=1, c=1)
        adj = bc.adjoint_bc(cbc)
        s = np.array([[3, 1], [1, 1]], dtype=complex)
        ref = np.conj(np.linalg.inv(s)).T
        assert abs(adj.b - ref[0, 0]) < 1e-14 and abs(adj.a - ref[0, 1]) < 1e-14
        assert abs(adj.d - ref[1, 0]) < 1e-14 and abs(adj.c - ref[1, 1]) < 1e-14

    def test_dirichlet_type_preserved(self):
        for params in [(0, 1, 1, 0), (1j, 2, 1, -1j)]:
            cbc = bc.CanonicalBc(*params)
            if not bc.classify(cbc).dirichlet_type:
                continue
            assert bc.classify(bc.adjoint_bc(cbc)).dirichlet_type

    def test_root_reciprocity(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            cbc = random_regular_canonical(rng)
            cd = bc.char_roots(cbc)
            cda = bc.char_roots(bc.adjoint_bc(cbc))
            expect = sorted((1 / np.conj(z) for z in cd.z), key=lambda z: (z.real, z.imag))
            if cd.double:
                expect = expect * 2 if len(cda.z) == 2 else expect
            got = sorted(cda.z, key=lambda z: (z.real, z.imag))
            for e, g in zip(expect, got):
                assert abs(e - g) < 1e-10 * max(1.0, abs(e))


class TestEigenVectors:
    def test_dirichlet_kernel_oracle(self):
        cbc = bc.CanonicalBc(b=0, a=1, d=1, c=0)
        vd = bc.eigen_vectors(cbc, bc.char_roots(cbc))
        # z1 = 1: kernel of [[1, 1], [1, 1]] ~ (1, -1); z2 = -1: (1, 1)
        assert np.allclose(vd.alpha, [1, -1])
        assert np.allclose(vd.beta, [1, 1])
        prime = np.vstack([vd.alpha_prime, vd.beta_prime])
        assert np.linalg.norm(prime @ np.column_stack([vd.alpha, vd.beta]) - np.eye(2)) < 1e-12

    def test_case_i_values(self):
        cbc = bc.CanonicalBc(b=1, a=0, d=1, c=1)
        vd = bc.eigen_vectors(cbc, bc.char_roots(cbc))
        assert np.allclose(vd.alpha, [0, 1])
        assert np.allclose(vd.beta, [PI, 0])
        assert abs(vd.delta + PI) < 1e-14

    def test_periodic_identity(self):
        cbc = bc.CanonicalBc(b=-1, a=0, d=0, c=-1)
        vd = bc.eigen_vectors(cbc, bc.char_roots(cbc))
        assert np.allclose(np.vstack([vd.alpha_prime, vd.beta_prime]), np.eye(2))

    def test_strictly_regular_residuals(self):
        rng = np.random.default_rng(13)
        count = 0
        while count < 100:
            cbc = random_regular_canonical(rng)
            cls = bc.classify(cbc)
            if not cls.strictly_regular:
                continue
            cd = bc.char_roots(cbc, cls)
            try:
                vd = bc.eigen_vectors(cbc, cd, cls)
            except bc.IllConditionedEigvecError:
                continue
            a23 = cbc.a23
            assert np.linalg.norm((a23 + cd.z[0] * np.eye(2)) @ vd.alpha) < 1e-12 * cbc.scale
            assert np.linalg.norm((a23 + cd.z[1] * np.eye(2)) @ vd.beta) < 1e-12 * cbc.scale
            cols = np.column_stack([vd.alpha, vd.beta])
            prime = np.vstack([vd.alpha_prime, vd.beta_prime])
            assert np.linalg.norm(prime @ cols - np.eye(2)) < 1e-12 * np.linalg.cond(cols)
            count += 1

    @pytest.mark.parametrize(
        "params",
        [(1, 0, 1, 1), (1, 1, 0, 1), (2, 1, -1, 0), (1j, 0, 3, 1j)],
    )
    def test_jordan_chain_relation(self, params):
        cbc = bc.CanonicalBc(*params)
        cls = bc.classify(cbc)
        assert cls.jordan
        cd = bc.char_roots(cbc, cls)
        vd = bc.eigen_vectors(cbc, cd, cls)
        m = cbc.a23 + cd.z_star * np.eye(2)
        assert np.linalg.norm(m @ vd.alpha) < 1e-12 * cbc.scale
        assert np.linalg.norm(m @ vd.beta - PI * cbc.b * vd.alpha) < 1e-12 * cbc.scale
        assert abs(vd.delta) > 1e-12


@st.composite
def invertible_2x2(draw):
    vals = draw(
        st.lists(
            st.floats(min_value=-3, max_value=3, allow_nan=False),
            min_size=8,
            max_size=8,
        )
    )
    g = np.array(vals[:4]).reshape(2, 2) + 1j * np.array(vals[4:]).reshape(2, 2)
    if abs(np.linalg.det(g)) < 1e-2:
        g = g + 2.0 * np.eye(2)
    return g


@given(invertible_2x2())
@settings(max_examples=50, deadline=None)
def test_normalization_invariant_property(g):
    if abs(np.linalg.det(g)) < 1e-2:
        return
    base = np.array([[1, 3, 1, 0], [0, 1, 1, 1]], dtype=complex)
    ref = bc.normalize_bc(base)
    out = bc.normalize_bc(g @ base)
    for name in "badc":
        assert abs(getattr(out, name) - getattr(ref, name)) < 1e-8
