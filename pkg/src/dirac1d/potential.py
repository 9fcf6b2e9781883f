"""Potentials and their Fourier matrix tables in the basis family.

A potential v = [[0, P], [Q, 0]] acts by V(y1, y2) = (P y2, Q y1).  Its
matrix element against the basis pair (phi^nu_k, phi~^mu_j) depends on
(j, k) only through j + k:

    <V phi^nu_k, phi~^mu_j> = w^{mu nu}(j + k),
    w^{mu nu}(m) = (g^{mu nu} P)^(-m) + (h^{mu nu} Q)^(m),

where g/h are smooth envelope functions (products of the basis
component envelopes) and u^(m) denotes the coefficient
(1/pi) int_0^pi u(x) e^{-imx} dx on the even-exponential system.

P and Q are represented by their coefficients on {e^{imx}, m even}
(sampled input is identified with its trigonometric interpolant, no
smoothing).  The fast table path convolves those coefficients with
closed-form envelope coefficients, which keeps the table exact even for
non-periodic envelopes (complex tau); a direct quadrature oracle guards
it.
"""

from dataclasses import dataclass

import numpy as np

from .basis import eval_phi, eval_phi_tilde
from .errors import ConfigError, FastSlowMismatchError
from .quadrature import PI, gauss_panels, poly_exp_integral

__all__ = [
    "ScalarPotential",
    "PotentialSpec",
    "WTable",
    "v_matrix_element",
    "build_w_table",
]

BRANCH_PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True)
class ScalarPotential:
    """Coefficients on {e^{imx}, m even}; ms ascending, step 2."""

    ms: np.ndarray
    cs: np.ndarray

    def __post_init__(self):
        ms = np.asarray(self.ms, dtype=int)
        cs = np.asarray(self.cs, dtype=complex)
        if ms.shape != cs.shape:
            raise ConfigError("coefficient index/value shape mismatch")
        if ms.size and (np.any(ms % 2) or np.any(np.diff(ms) != 2)):
            raise ConfigError("coefficient indices must be consecutive even integers")
        object.__setattr__(self, "ms", ms)
        object.__setattr__(self, "cs", cs)

    @classmethod
    def zero(cls):
        return cls(ms=np.array([0]), cs=np.array([0.0 + 0j]))

    @classmethod
    def from_fourier(cls, coeff_map):
        """coeff_map: {even m: complex}; densified to a contiguous range."""
        if not coeff_map:
            return cls.zero()
        items = {int(m): complex(c) for m, c in coeff_map.items()}
        if any(m % 2 for m in items):
            raise ConfigError("potential coefficients live on even modes")
        lo, hi = min(items), max(items)
        ms = np.arange(lo, hi + 1, 2)
        cs = np.array([items.get(int(m), 0.0 + 0j) for m in ms])
        return cls(ms=ms, cs=cs)

    @classmethod
    def from_samples(cls, samples):
        """Trapezoid-corrected FFT of closed-grid samples (2^q + 1 points)."""
        samples = np.asarray(samples, dtype=complex)
        n = samples.size - 1
        if n < 2 or n & (n - 1):
            raise ConfigError("samples must live on a closed 2^q + 1 grid")
        u = samples[:-1].copy()
        u[0] = 0.5 * (samples[0] + samples[-1])
        f = np.fft.fft(u) / n
        t = np.arange(n)
        m = 2 * ((t + n // 2) % n - n // 2)
        order = np.argsort(m)
        return cls(ms=m[order], cs=f[order])

    @property
    def norm(self):
        """L^2 norm under the normalized inner product (= coefficient l2)."""
        return float(np.sqrt(np.sum(np.abs(self.cs) ** 2)))

    @property
    def is_zero(self):
        return bool(np.all(self.cs == 0))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_zero:
            return np.zeros(x.shape, dtype=complex)
        return np.exp(1j * np.outer(x, self.ms)) @ self.cs

    def conjugate(self):
        return ScalarPotential(ms=-self.ms[::-1], cs=np.conj(self.cs)[::-1])


@dataclass(frozen=True)
class PotentialSpec:
    P: ScalarPotential
    Q: ScalarPotential

    @classmethod
    def zero(cls):
        return cls(P=ScalarPotential.zero(), Q=ScalarPotential.zero())

    @classmethod
    def from_json(cls, obj):
        def one(entry):
            if entry is None:
                return ScalarPotential.zero()
            if "fourier" in entry:
                return ScalarPotential.from_fourier(
                    {m: complex(re, im) for m, (re, im) in entry["fourier"].items()}
                )
            if "samples" in entry:
                vals = [complex(re, im) for re, im in entry["samples"]]
                return ScalarPotential.from_samples(vals)
            raise ConfigError("potential entry needs 'fourier' or 'samples'")

        return cls(P=one(obj.get("P")), Q=one(obj.get("Q")))

    @property
    def is_zero(self):
        return self.P.is_zero and self.Q.is_zero

    @property
    def norm(self):
        return self.P.norm + self.Q.norm


@dataclass(frozen=True)
class WTable:
    """Fourier matrix tables w^{mu nu}(m) for |m| <= 2M plus the
    dominating sequence r, its tails, and envelope suprema."""

    truncation: int
    ms: np.ndarray  # even, -2M..2M
    w: dict  # (mu, nu) -> complex array over ms
    r: np.ndarray
    envelope_sup: dict  # (mu, nu) -> (sup|g|, sup|h|)

    def _at(self, arr, m):
        two_m = self.truncation * 2
        if abs(m) > two_m:
            return 0.0
        return arr[(m + two_m) // 2]

    def w_of(self, mu, nu, m):
        return self._at(self.w[(mu, nu)], m)

    def r_of(self, m):
        return float(self._at(self.r, m).real) if abs(m) <= 2 * self.truncation else 0.0

    @property
    def norm_r(self):
        return float(np.sqrt(np.sum(self.r**2)))

    def tail(self, m):
        """E_m(r) = sqrt(sum_{|j| >= m} r(j)^2)."""
        mask = np.abs(self.ms) >= m
        return float(np.sqrt(np.sum(self.r[mask] ** 2)))


def v_matrix_element(fam, v, mu, nu, j, k, quad=None):
    """Direct quadrature of <V phi^nu_k, phi~^mu_j> (the slow oracle).

    phi and its dual are evaluated as whole functions of their separate
    indices, so the Toeplitz structure in j + k is an outcome here, not
    an input.  The panel count follows the oscillation frequency.
    """
    if quad is None:
        quad = gauss_panels(n_panels=max(64, abs(j + k)))
    x, w = quad
    pvals = v.P(x)
    qvals = v.Q(x)
    phi = eval_phi(fam, nu, k, x)
    til = eval_phi_tilde(fam, mu, j, x)
    integrand = pvals * phi[1] * np.conj(til[0]) + qvals * phi[0] * np.conj(til[1])
    return complex(np.sum(integrand * w) / PI)


def _envelope_terms(fam, mu, nu):
    """(g, h) ExpTerms with  V^{mu nu}_{jk} = int g P e^{i(j+k)x} + h Q e^{-i(j+k)x}."""
    g = fam.phi_terms[nu - 1][1] * fam.phi_tilde_terms[mu - 1][0].conj()
    h = fam.phi_terms[nu - 1][0] * fam.phi_tilde_terms[mu - 1][1].conj()
    return g, h


def _coeff_convolution(term, pot, out_ms):
    """Coefficients (term * pot)^(m) for m in out_ms, exactly.

    (term*pot)^(m) = sum_l pot_cs[l] * K(m - l) with
    K(u) = (const/pi) * int_0^pi poly(x) e^{i(s - u)x} dx.
    """
    if pot.is_zero:
        return np.zeros(out_ms.shape, dtype=complex)
    u_lo = int(out_ms.min()) - int(pot.ms[-1])
    u_hi = int(out_ms.max()) - int(pot.ms[0])
    us = np.arange(u_lo, u_hi + 1, 2)
    kern = term.const / PI * poly_exp_integral(term.poly, term.s - us)
    conv = np.convolve(pot.cs, kern)
    # conv index t corresponds to m = pot.ms[0] + u_lo + 2t
    m0 = int(pot.ms[0]) + u_lo
    idx = (out_ms - m0) // 2
    return conv[idx]


def build_w_table(fam, v, truncation, validate=True, n_checks=20, rng_seed=1234):
    """Assemble all four w^{mu nu} sequences for |m| <= 2*truncation.

    The coefficient-space path is validated against the quadrature
    oracle on random index pairs; disagreement beyond 1e-8 signals a
    wrong envelope derivation and raises FastSlowMismatchError.
    """
    if truncation % 2 or truncation < 2:
        raise ConfigError("truncation must be even and >= 2")
    two_m = 2 * truncation
    ms = np.arange(-two_m, two_m + 1, 2)
    w = {}
    sup = {}
    for mu, nu in BRANCH_PAIRS:
        g, h = _envelope_terms(fam, mu, nu)
        # w(m) = (gP)^(-m) + (hQ)^(m)
        w[(mu, nu)] = _coeff_convolution(g, v.P, -ms) + _coeff_convolution(h, v.Q, ms)
        sup[(mu, nu)] = (g.sup_norm, h.sup_norm)
    r = np.max(np.abs(np.stack([w[p] for p in BRANCH_PAIRS])), axis=0)
    table = WTable(truncation=truncation, ms=ms, w=w, r=r, envelope_sup=sup)

    if validate and not v.is_zero:
        rng = np.random.default_rng(rng_seed)
        ks = np.arange(-truncation, truncation + 1, 2)
        worst = 0.0
        for _ in range(n_checks):
            j = int(rng.choice(ks))
            k = int(rng.choice(ks))
            mu, nu = BRANCH_PAIRS[rng.integers(0, 4)]
            slow = v_matrix_element(fam, v, mu, nu, j, k)
            fast = table.w_of(mu, nu, j + k)
            worst = max(worst, abs(slow - fast))
        if worst > 1e-8:
            raise FastSlowMismatchError(f"max fast/slow discrepancy {worst:.3e}")

    return table
