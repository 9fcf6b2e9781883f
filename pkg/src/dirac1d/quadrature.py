"""Quadrature and exact-integration helpers on [0, pi].

All L^2 inner products in this package use the normalized form
(1/pi) * integral_0^pi (u1 conj(v1) + u2 conj(v2)) dx.  Smooth
integrands go through composite Gauss-Legendre panels; products of
polynomials with complex exponentials are integrated in closed form so
that Fourier-type coefficients come out at machine precision even for
non-periodic envelopes.
"""

import numpy as np
from numpy.polynomial.legendre import leggauss

PI = np.pi

# composite Gauss-Legendre defaults: machine precision for the entire
# integrands that appear in basis inner products
DEFAULT_PANELS = 64
DEFAULT_NODES = 16


def gauss_panels(n_panels=DEFAULT_PANELS, n_nodes=DEFAULT_NODES, a=0.0, b=PI):
    """Composite Gauss-Legendre rule on [a, b]: returns (x, w)."""
    xg, wg = leggauss(n_nodes)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return x, w


def closed_grid(q=12):
    """Uniform closed grid with 2^q + 1 points, symmetric under x -> pi - x."""
    return np.linspace(0.0, PI, (1 << q) + 1)


def is_reflective(x, tol=1e-12):
    """True if the grid maps onto itself under x -> pi - x."""
    return x.shape == x[::-1].shape and np.max(np.abs(x + x[::-1] - PI)) <= tol


def inner(u, v, w):
    """Normalized inner product of C^2-valued samples.

    ``u``, ``v`` have shape (2, n) on quadrature nodes with weights ``w``.
    """
    return np.sum((u * np.conj(v)).sum(axis=0) * w) / PI


def poly_exp_integral(coeffs, w, a=0.0, b=PI):
    """Exact integral_a^b (sum_p coeffs[p] x^p) e^{i w x} dx, vectorized in w.

    ``coeffs`` are ascending power coefficients (complex allowed); ``w``
    is a complex scalar or array.  Uses the recursion

        I_p = (b^p e^{iwb} - a^p e^{iwa}) / (iw) - (p/(iw)) I_{p-1}

    and a Taylor series for |w(b-a)| small, where the recursion loses
    accuracy.
    """
    w = np.asarray(w, dtype=complex)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    deg = len(coeffs) - 1
    out = np.zeros(w.shape, dtype=complex)

    small = np.abs(w) * (abs(b - a) + 1.0) < 0.5
    big = ~small

    if np.any(big):
        wb = w[big]
        iw = 1j * wb
        eb = np.exp(iw * b)
        ea = np.exp(iw * a)
        ip = (eb - ea) / iw
        acc = coeffs[0] * ip
        bp, ap = 1.0, 1.0
        for p in range(1, deg + 1):
            bp *= b
            ap *= a
            ip = (bp * eb - ap * ea) / iw - (p / iw) * ip
            acc = acc + coeffs[p] * ip
        out[big] = acc

    if np.any(small):
        ws = w[small]
        acc = np.zeros(ws.shape, dtype=complex)
        # integral x^p e^{iwx} = sum_j (iw)^j (b^{p+j+1}-a^{p+j+1})/(j! (p+j+1))
        for p in range(deg + 1):
            if coeffs[p] == 0:
                continue
            term = np.zeros(ws.shape, dtype=complex)
            iwj = np.ones(ws.shape, dtype=complex)
            fact = 1.0
            for j in range(0, 30):
                if j > 0:
                    iwj = iwj * (1j * ws)
                    fact *= j
                term = term + iwj * (b ** (p + j + 1) - a ** (p + j + 1)) / (
                    fact * (p + j + 1)
                )
            acc = acc + coeffs[p] * term
        out[small] = acc

    return out[0] if scalar else out


def chebyshev_diff_matrix(n, a=0.0, b=PI):
    """Chebyshev differentiation matrix on n+1 extrema nodes mapped to [a, b].

    Returns (x, D) with x ascending; D @ f(x) approximates f'(x) with
    spectral accuracy for analytic f.
    """
    if n == 0:
        raise ValueError("need n >= 1")
    k = np.arange(n + 1)
    xc = np.cos(np.pi * k / n)  # descending on [-1, 1]
    c = np.ones(n + 1)
    c[0] = c[n] = 2.0
    c = c * (-1.0) ** k
    X = np.tile(xc, (n + 1, 1)).T
    dX = X - X.T
    D = np.outer(c, 1.0 / c) / (dX + np.eye(n + 1))
    D = D - np.diag(D.sum(axis=1))
    # map [-1, 1] -> [a, b] with x = a + (b-a)(1+t)/2 and flip ascending
    x = a + (b - a) * (1.0 + xc[::-1]) / 2.0
    Dm = D[::-1, ::-1] * (2.0 / (b - a))
    return x, Dm
