"""Spectral inclusion geometry and Hilbert-Schmidt sufficiency sums.

The complex plane is split into unit-width vertical strips around the
free eigenvalue progressions.  A central rectangle (half-width N+1,
half-height T) together with discs around the outer free eigenvalues
(radius rho for two distinct tau branches, radius 1/4 otherwise) is
certified to contain the whole spectrum of L(zeta*v), |zeta| <= 1, once
the weighted Hilbert-Schmidt sum of the dominating sequence r is small
enough on the region boundaries.

Two selection routes for N are computed:

* a certificate route using the closed-form sufficiency bounds
  (30/rho)^2 (||r||^2/sqrt(m) + E_m(r)^2) etc.; the constants are very
  loose, so at desk scale this N can exceed any usable truncation, and
* a practical route that samples the weighted sum on the actual disc
  and rectangle boundaries.

The plan records both; its N is the certificate value when attainable
and the sampled value otherwise.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import NoFiniteNError, PoleHitError
from . import basis as basismod

__all__ = [
    "Disc",
    "LocalizationPlan",
    "hs_weighted_sum",
    "check_t1_t2",
    "make_plan",
    "disc_boundary_points",
    "rect_boundary_points",
]

# non-strict single-sum constant assembled from the same two summation
# inequalities used for the (30/rho)^2 bound: 16 * (12 + 1 + 1 + 1)
NONSTRICT_SUM_CONSTANT = 240.0


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float
    m: int
    branch: int | None

    def boundary(self, n_points):
        th = 2 * np.pi * np.arange(n_points) / n_points
        return self.center + self.radius * np.exp(1j * th)


@dataclass(frozen=True)
class LocalizationPlan:
    N: int
    T: float
    rho: float
    center_re: float
    discs: tuple
    norm_a: float
    norm_a_inv: float
    threshold: float
    n_certificate: int | None
    n_source: str  # "certificate" | "empirical"
    certificate_disc: float
    certificate_rect: float
    empirical_max: float

    @property
    def riesz_product(self):
        return self.norm_a * self.norm_a_inv

    @property
    def rect_halfwidth(self):
        return self.N + 1.0

    def rect_contains(self, z):
        return (abs(np.real(z) - self.center_re) < self.rect_halfwidth) & (
            np.abs(np.imag(z)) < self.T
        )

    def trusted_discs(self, n_max=None):
        if n_max is None:
            return self.discs
        return tuple(d for d in self.discs if abs(d.m) <= n_max)

    def to_json(self):
        return {
            "N": self.N,
            "T": self.T,
            "rho": self.rho,
            "centerRe": self.center_re,
            "normA": self.norm_a,
            "normAinv": self.norm_a_inv,
            "threshold": self.threshold,
            "nCertificate": self.n_certificate,
            "nSource": self.n_source,
            "certificateDisc": self.certificate_disc,
            "certificateRect": self.certificate_rect,
            "empiricalMax": self.empirical_max,
            "discs": [
                {
                    "center": [d.center.real, d.center.imag],
                    "radius": d.radius,
                    "m": d.m,
                    "branch": d.branch,
                }
                for d in self.discs
            ],
        }

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)


def hs_weighted_sum(wt, cd, lam, truncation=None):
    """Truncated weighted Hilbert-Schmidt sum at the point lam.

    Two distinct tau branches: sum over all four branch pairs of
    |r(j+k)|^2 / (|lam - tau_mu - j| |lam - tau_nu - k|); one double
    branch: four times the single-tau sum.  Monotone non-decreasing in
    the truncation.
    """
    if truncation is None:
        truncation = wt.truncation
    truncation = min(truncation, wt.truncation)
    ks = np.arange(-truncation, truncation + 1, 2)
    two_m = 2 * wt.truncation
    r = wt.r
    idx = (np.add.outer(ks, ks) + two_m) // 2
    r2 = (r**2)[idx]

    taus = (cd.tau[0],) if cd.double else cd.tau
    invd = []
    for t in taus:
        d = np.abs(lam - t - ks)
        if np.min(d) < 1e-12:
            raise PoleHitError(f"lambda {lam} hits a free eigenvalue")
        invd.append(1.0 / d)

    if cd.double:
        v = invd[0]
        return float(4.0 * (v @ r2 @ v))
    total = 0.0
    for vmu in invd:
        for vnu in invd:
            total += vmu @ r2 @ vnu
    return float(total)


def _tail_sq(ms, r, n):
    mask = np.abs(ms) >= n
    return float(np.sum(r[mask] ** 2))


def check_t1_t2(ms, r, n, window=256):
    """Both sides of the two discrete summation inequalities at index n.

    ``ms``/``r`` give an even-indexed nonnegative sequence; |n| >= 1.
    Returns (lhs1, rhs1, lhs2, rhs2); the inner double sum is truncated
    to a window, which only lowers the left sides.
    """
    ms = np.asarray(ms, dtype=int)
    r = np.abs(np.asarray(r, dtype=float))
    if abs(n) < 1:
        raise ValueError("need |n| >= 1")
    norm_sq = float(np.sum(r**2))
    rhs1 = norm_sq / abs(n) + _tail_sq(ms, r, abs(n))
    rhs2 = 12.0 * (norm_sq / np.sqrt(abs(n)) + _tail_sq(ms, r, abs(n)))

    # lhs1: sum over even k != n of r(n+k)^2/|n-k|  (m = n + k)
    lhs1 = 0.0
    for m, rm in zip(ms, r):
        if rm == 0.0:
            continue
        k = m - n
        if k % 2 or k == n:
            continue
        lhs1 += rm * rm / abs(n - k)

    # lhs2: sum over even i, k != n with i + k = m
    lo = min(int(ms.min()), -abs(n)) - window
    hi = max(int(ms.max()), abs(n)) + window
    i_range = np.arange(2 * (lo // 2), hi + 1, 2)
    lhs2 = 0.0
    for m, rm in zip(ms, r):
        if rm == 0.0:
            continue
        kk = m - i_range
        ok = (i_range != n) & (kk != n) & (kk % 2 == 0)
        if not np.any(ok):
            continue
        lhs2 += rm * rm * np.sum(1.0 / (np.abs(n - i_range[ok]) * np.abs(n - kk[ok])))
    return lhs1, rhs1, lhs2, rhs2


def disc_boundary_points(disc, n_points=16):
    return disc.boundary(n_points)


def rect_boundary_points(center_re, halfwidth, halfheight, n_points=64):
    """Evenly spread points over the rectangle perimeter (counterclockwise)."""
    w, h = 2 * halfwidth, 2 * halfheight
    per = 2 * (w + h)
    s = per * np.arange(n_points) / n_points
    pts = np.empty(n_points, dtype=complex)
    x0, y0 = center_re - halfwidth, -halfheight
    for i, si in enumerate(s):
        if si < w:
            pts[i] = complex(x0 + si, y0)
        elif si < w + h:
            pts[i] = complex(x0 + w, y0 + (si - w))
        elif si < 2 * w + h:
            pts[i] = complex(x0 + w - (si - w - h), y0 + h)
        else:
            pts[i] = complex(x0, y0 + h - (si - 2 * w - h))
    return pts


def _certificate_value(cd, rho, norm_r_sq, tail_sq):
    """Closed-form bound on the full weighted sum outside a disc at |m|."""
    if cd.double:
        return 4.0 * NONSTRICT_SUM_CONSTANT * (norm_r_sq + tail_sq)
    return (30.0 / rho) ** 2 * (norm_r_sq + tail_sq)


def make_plan(
    fam,
    wt,
    threshold=0.9,
    riesz_truncation=32,
    disc_limit=None,
    samples_per_disc=16,
    samples_rect=64,
):
    """Select (N, T, rho) and the trusted disc list for a family/potential.

    T follows the closed-form height with a 2x safety factor on the
    Riesz-constant estimate.  N is certified when the closed-form route
    converges within 4*truncation, otherwise chosen empirically by
    sampling the weighted sum on candidate boundaries; both values are
    recorded.
    """
    cd = fam.cd
    rc = basismod.riesz_constants(fam, riesz_truncation)
    prod = rc.norm_a * rc.norm_a_inv
    prod_safe = 2.0 * prod
    norm_r = wt.norm_r
    big_m = wt.truncation
    if disc_limit is None:
        disc_limit = big_m // 2

    if cd.double:
        rho = 0.25
        center_re = cd.tau_star.real
        t_height = 2.0 * max(abs(cd.tau_star.imag), 96.0 * prod_safe * norm_r**2)
    else:
        rho = cd.rho
        center_re = ((cd.tau[0] + cd.tau[1]) / 2.0).real
        t_height = 2.0 * max(
            abs(cd.tau[0].imag),
            abs(cd.tau[1].imag),
            384.0 * prod_safe * norm_r**2,
        )
    # positive quadrature height even for v = 0 with real tau
    t_height = max(t_height, 1.0)

    # certificate route
    n_cert = None
    cert_at_cert_n = np.inf
    for n in range(2, 4 * big_m + 1, 2):
        cert = _certificate_value(
            cd, rho, norm_r**2 / np.sqrt(n + 2), wt.tail(n + 2) ** 2
        )
        if prod**2 * cert < threshold**2:
            n_cert = n
            cert_at_cert_n = cert
            break

    def discs_for(n_low, n_high):
        out = []
        for m in range(n_low + 2, n_high + 1, 2):
            for mm in (m, -m):
                if cd.double:
                    out.append(Disc(center=cd.tau_star + mm, radius=rho, m=mm, branch=None))
                else:
                    for br in (1, 2):
                        out.append(
                            Disc(center=cd.tau[br - 1] + mm, radius=rho, m=mm, branch=br)
                        )
        return out

    def empirical_max_at(n):
        worst = 0.0
        for d in discs_for(n, n + 4):
            for lam in disc_boundary_points(d, samples_per_disc):
                worst = max(worst, hs_weighted_sum(wt, cd, lam))
        for lam in rect_boundary_points(center_re, n + 1.0, t_height, samples_rect):
            worst = max(worst, hs_weighted_sum(wt, cd, lam))
        return worst

    def empirical_pass(n):
        return prod**2 * empirical_max_at(n) < threshold**2

    n_limit = 4 * big_m
    if norm_r == 0.0:
        n_sel = n_cert if n_cert is not None else 2
        source = "certificate" if n_cert is not None else "empirical"
        emp = 0.0
    elif n_cert is not None and n_cert + 4 <= big_m:
        n_sel = n_cert
        source = "certificate"
        emp = empirical_max_at(n_sel)
    else:
        # the sampled criterion decays monotonically in practice; find the
        # crossing by doubling + bisection, then confirm minimality
        source = "empirical"
        n_pass = None
        n = 2
        while n <= n_limit:
            if empirical_pass(n):
                n_pass = n
                break
            n *= 2
        if n_pass is None:
            raise NoFiniteNError(
                f"weighted sums stay above threshold through |m| <= {n_limit}"
            )
        lo = n_pass // 2 if n_pass > 2 else 0
        hi = n_pass
        while hi - lo > 2:
            mid = (lo + hi) // 2
            mid += mid % 2
            if mid in (lo, hi):
                break
            if empirical_pass(mid):
                hi = mid
            else:
                lo = mid
        n_sel = hi
        emp = empirical_max_at(n_sel)

    rect_cert = (
        (384.0 if not cd.double else 96.0) * norm_r**2 / t_height
    )

    plan = LocalizationPlan(
        N=n_sel,
        T=float(t_height),
        rho=float(rho),
        center_re=float(center_re),
        discs=tuple(discs_for(n_sel, disc_limit)),
        norm_a=rc.norm_a,
        norm_a_inv=rc.norm_a_inv,
        threshold=threshold,
        n_certificate=n_cert,
        n_source=source,
        certificate_disc=float(cert_at_cert_n) if n_cert is not None else float("inf"),
        certificate_rect=float(rect_cert),
        empirical_max=float(emp),
    )
    return plan
