"""Boundary-condition algebra for the 1D Dirac operator on [0, pi].

A two-point boundary condition is a pair of linear relations on
(y1(0), y1(pi), y2(0), y2(pi)) given by a 2x4 complex matrix.  Regular
conditions can be normalized to the canonical form

    [ 1  b  a  0 ]        y1(0) + b y1(pi) + a y2(0)          = 0
    [ 0  d  c  1 ]        d y1(pi) + c y2(0) + y2(pi)         = 0

by a left multiplication, and everything downstream (classification,
characteristic roots z^2 + (b+c) z + (bc - ad) = 0, tau exponents,
adjoint condition, eigenvectors of the reduced matrix [[b, a], [d, c]])
is expressed through the four parameters (b, a, d, c).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    ConfigError,
    IllConditionedEigvecError,
    NotRegularError,
    SingularA14Error,
    ZeroRootError,
)

PI = np.pi

EPS_REG = 1e-12  # regularity cutoff on |bc - ad|
EPS_SR = 1e-10  # strict-regularity / subcase classification cutoff


class BcKind(str, Enum):
    STRICTLY_REGULAR = "strictly-regular"
    PERIODIC_TYPE = "periodic-type"
    CASE_I = "case-i"
    CASE_II = "case-ii"
    CASE_III = "case-iii"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class BcClass:
    kind: BcKind
    dirichlet_type: bool = False

    @property
    def strictly_regular(self):
        return self.kind is BcKind.STRICTLY_REGULAR

    @property
    def jordan(self):
        """True for the regular-not-strict cases with associated vectors."""
        return self.kind in (BcKind.CASE_I, BcKind.CASE_II, BcKind.CASE_III)


@dataclass(frozen=True)
class RawBc:
    """Raw 2x4 boundary matrix (a1 b1 a2 b2 / c1 d1 c2 d2)."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=complex)
        if rows.shape != (2, 4):
            raise ConfigError(f"raw bc must be 2x4, got {rows.shape}")
        if not np.all(np.isfinite(rows.view(float))):
            raise ConfigError("raw bc entries must be finite")
        if np.all(rows[0] == 0) or np.all(rows[1] == 0):
            raise ConfigError("raw bc rows must be nonzero")
        object.__setattr__(self, "rows", rows)

    def minor(self, i, j):
        """Determinant |A_ij| of columns i, j (1-based)."""
        m = self.rows[:, [i - 1, j - 1]]
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


@dataclass(frozen=True)
class CanonicalBc:
    b: complex
    a: complex
    d: complex
    c: complex

    def __post_init__(self):
        vals = (self.b, self.a, self.d, self.c)
        if not all(np.isfinite(v.real) and np.isfinite(v.imag) for v in map(complex, vals)):
            raise ConfigError("canonical bc parameters must be finite")
        scale = max(1.0, max(abs(complex(v)) for v in vals) ** 2)
        if abs(self.det_a23) <= EPS_REG * scale:
            raise NotRegularError(f"|bc - ad| = {abs(self.det_a23):.3e} below tolerance")

    @property
    def det_a23(self):
        return self.b * self.c - self.a * self.d

    @property
    def a23(self):
        """The reduced matrix [[b, a], [d, c]]."""
        return np.array([[self.b, self.a], [self.d, self.c]], dtype=complex)

    @property
    def scale(self):
        return max(1.0, abs(self.b), abs(self.a), abs(self.d), abs(self.c))

    def boundary_residual(self, y0, ypi):
        """Both canonical boundary rows evaluated on endpoint values.

        ``y0`` and ``ypi`` are C^2 values at x = 0 and x = pi; returns the
        2-vector of residuals (zero iff the condition is satisfied).
        """
        r1 = y0[0] + self.b * ypi[0] + self.a * y0[1]
        r2 = self.d * ypi[0] + self.c * y0[1] + ypi[1]
        return np.array([r1, r2])


@dataclass(frozen=True)
class CharData:
    """Characteristic roots with branch-normalized tau exponents.

    ``double`` distinguishes the one-double-root case; then ``z`` and
    ``tau`` hold a single entry and ``rho`` is None.  For two distinct
    roots: e^{i pi tau_j} = z_j, Re tau_1 in (-1, 1],
    |Re tau_1 - Re tau_2| <= 1, and rho is the disc radius
    min(1 - |Re(tau1 - tau2)|/2, |tau1 - tau2|/2).
    """

    z: tuple
    tau: tuple
    rho: float | None
    double: bool

    @property
    def z_star(self):
        return self.z[0]

    @property
    def tau_star(self):
        return self.tau[0]

    def tau_of(self, mu):
        """tau for branch mu in {1, 2}; the double root serves both."""
        return self.tau[0] if self.double else self.tau[mu - 1]


@dataclass(frozen=True)
class VectorData:
    """Eigen/associated vectors of the reduced matrix.

    Strictly regular and periodic-type: alpha, beta are eigenvectors for
    -z1, -z2 and (alpha_prime; beta_prime) is the exact inverse of the
    column matrix [alpha beta].  Jordan cases: beta is the associated
    vector, (A23 + z* I) beta = pi*b*alpha, primes are None and
    delta = alpha1*beta2 - alpha2*beta1 + pi*alpha1*alpha2 != 0.
    """

    alpha: np.ndarray
    beta: np.ndarray
    alpha_prime: np.ndarray | None
    beta_prime: np.ndarray | None
    delta: complex | None


def normalize_bc(raw):
    """Left-multiply the raw matrix by inv(A_14) to reach canonical form."""
    if not isinstance(raw, RawBc):
        raw = RawBc(np.asarray(raw, dtype=complex))
    rows = raw.rows
    a14 = rows[:, [0, 3]]
    det14 = a14[0, 0] * a14[1, 1] - a14[0, 1] * a14[1, 0]
    scale = np.max(np.abs(rows)) ** 2
    if abs(det14) <= 1e-12 * scale:
        raise SingularA14Error(f"|det A14| = {abs(det14):.3e}")
    inv14 = np.array([[a14[1, 1], -a14[0, 1]], [-a14[1, 0], a14[0, 0]]]) / det14
    s = inv14 @ rows[:, [1, 2]]
    return CanonicalBc(b=s[0, 0], a=s[0, 1], d=s[1, 0], c=s[1, 1])


def classify(bc):
    """Deterministic class of a canonical boundary condition."""
    m = bc.scale
    disc = (bc.b - bc.c) ** 2 + 4.0 * bc.a * bc.d
    if abs(disc) > EPS_SR * m * m:
        return BcClass(
            kind=BcKind.STRICTLY_REGULAR,
            dirichlet_type=abs(bc.b + bc.c) <= EPS_SR * m,
        )
    a_zero = abs(bc.a) <= EPS_SR * m
    d_zero = abs(bc.d) <= EPS_SR * m
    if a_zero and d_zero and abs(bc.b - bc.c) <= EPS_SR * m:
        return BcClass(kind=BcKind.PERIODIC_TYPE)
    if a_zero:
        return BcClass(kind=BcKind.CASE_I)
    if d_zero:
        return BcClass(kind=BcKind.CASE_II)
    return BcClass(kind=BcKind.CASE_III)


def tau_branch(z):
    """tau with e^{i pi tau} = z and Re tau in (-1, 1].

    Principal argument on (-pi, pi]; purely a branch convention, flagged
    in CLI metadata because the half-open end is not canonical.
    """
    z = complex(z)
    if z == 0:
        raise ZeroRootError("tau undefined for z = 0")
    if z.imag == 0.0:
        z = complex(z.real, 0.0)  # -0j would fall off the (-pi, pi] branch
    return np.angle(z) / PI - 1j * np.log(abs(z)) / PI


def char_roots(bc, cls=None):
    """Roots of z^2 + (b+c) z + (bc - ad) = 0 with tau branches and rho.

    The larger-magnitude root is computed first from the stable form of
    the quadratic formula and the second as (bc - ad)/z1.  If the two
    principal-branch taus violate |Re tau1 - Re tau2| <= 1, the
    larger-Re one is shifted by -2 and labeled tau2, so tau1 always
    keeps |Re tau1| <= 1.
    """
    if cls is None:
        cls = classify(bc)
    q = bc.b + bc.c
    p = bc.det_a23
    if not cls.strictly_regular:
        z_star = -q / 2.0
        return CharData(z=(z_star,), tau=(tau_branch(z_star),), rho=None, double=True)

    sq = np.sqrt(complex(q * q - 4.0 * p))
    z1 = (-q + sq) / 2.0 if abs(-q + sq) >= abs(-q - sq) else (-q - sq) / 2.0
    z2 = p / z1
    t1, t2 = tau_branch(z1), tau_branch(z2)
    if abs(t1.real - t2.real) > 1.0:
        if t1.real > t2.real:
            z1, z2, t1, t2 = z2, z1, t2, t1 - 2.0
        else:
            t2 = t2 - 2.0
    rho = min(1.0 - abs((t1 - t2).real) / 2.0, abs(t1 - t2) / 2.0)
    return CharData(z=(z1, z2), tau=(t1, t2), rho=rho, double=False)


def adjoint_bc(bc):
    """Canonical parameters of the adjoint boundary condition.

    These are the entries of (S^{-1})^* for S = [[b, a], [d, c]]; the
    characteristic roots transform as z -> 1/conj(z).
    """
    det = bc.det_a23
    return CanonicalBc(
        b=np.conj(bc.c / det),
        a=-np.conj(bc.d / det),
        d=-np.conj(bc.a / det),
        c=np.conj(bc.b / det),
    )


def _kernel_vector(m):
    """Unit-normalized kernel vector of a (numerically) singular 2x2 matrix.

    Picks the larger of the two row-orthogonal candidates and scales the
    largest-magnitude component to exactly 1.
    """
    v1 = np.array([m[0, 1], -m[0, 0]])
    v2 = np.array([m[1, 1], -m[1, 0]])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    i = 0 if abs(v[0]) >= abs(v[1]) else 1
    return v / v[i]


def eigen_vectors(bc, cd, cls=None):
    """Eigen/associated vector data consistent with the classification."""
    if cls is None:
        cls = classify(bc)
    a23 = bc.a23

    if cls.strictly_regular:
        z1, z2 = cd.z
        alpha = _kernel_vector(a23 + z1 * np.eye(2))
        beta = _kernel_vector(a23 + z2 * np.eye(2))
        cols = np.column_stack([alpha, beta])
        if np.linalg.cond(cols) > 1e8:
            raise IllConditionedEigvecError("near-coalescing characteristic roots")
        prime = np.linalg.inv(cols)
        return VectorData(
            alpha=alpha,
            beta=beta,
            alpha_prime=prime[0],
            beta_prime=prime[1],
            delta=None,
        )

    if cls.kind is BcKind.PERIODIC_TYPE:
        # A23 + z* I = 0, so any basis works; fix the standard one.
        return VectorData(
            alpha=np.array([1.0 + 0j, 0.0 + 0j]),
            beta=np.array([0.0 + 0j, 1.0 + 0j]),
            alpha_prime=np.array([1.0 + 0j, 0.0 + 0j]),
            beta_prime=np.array([0.0 + 0j, 1.0 + 0j]),
            delta=None,
        )

    # Jordan cases: fixed solutions of (A23 + z* I) alpha = 0 and
    # (A23 + z* I) beta = pi b alpha.
    if cls.kind is BcKind.CASE_I:
        alpha = np.array([0.0 + 0j, bc.d])
        beta = np.array([PI * bc.b, 0.0 + 0j])
    elif cls.kind is BcKind.CASE_II:
        alpha = np.array([bc.a, 0.0 + 0j])
        beta = np.array([0.0 + 0j, PI * bc.b])
    else:
        alpha = np.array([bc.a, (bc.c - bc.b) / 2.0])
        beta = np.array([0.0 + 0j, PI * bc.b])
    delta = alpha[0] * beta[1] - alpha[1] * beta[0] + PI * alpha[0] * alpha[1]
    return VectorData(alpha=alpha, beta=beta, alpha_prime=None, beta_prime=None, delta=delta)
