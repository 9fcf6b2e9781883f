"""Closed-form eigen/associated system of the free operator and its dual.

For a canonical boundary condition the free operator has a Riesz basis
of eigenfunctions (plus associated functions in the Jordan cases)

    phi^mu_k(x),   mu in {1, 2},  k even,

whose components are all of the shape const * poly(x) * e^{i s x} times
e^{-ikx} (first component) or e^{+ikx} (second component).  The same is
true of the biorthogonal family phi~^mu_k.  Everything here is built on
that one ``ExpTerm`` shape: evaluation, boundary residuals, the basis
isomorphism and its inverse, Gram/Riesz constants, and the envelope
products consumed by the potential tables.

The Jordan-case biorthogonal family is derived from the adjoint of the
explicit inverse isomorphism; the associated-vector dual pairs carry the
reversed-chain structure (the polynomial envelope sits on the dual of
phi^1, the pure exponential on the dual of phi^2).
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import bc as bcmod
from .errors import GridNotReflectiveError, NonPositiveGramError
from .quadrature import PI, gauss_panels, is_reflective

__all__ = [
    "ExpTerm",
    "BasisFamily",
    "FreeEigenvalue",
    "FreeSpectrum",
    "RieszConstants",
    "make_family",
    "eval_phi",
    "eval_phi_tilde",
    "apply_A",
    "apply_A_inv",
    "riesz_constants",
    "free_spectrum",
]


@dataclass(frozen=True)
class ExpTerm:
    """One component:  const * poly(x) * exp(i*s*x), poly ascending."""

    const: complex
    s: complex
    poly: tuple

    def envelope(self, x):
        return self.const * npoly.polyval(x, np.asarray(self.poly)) * np.exp(1j * self.s * x)

    def conj(self):
        return ExpTerm(
            const=np.conj(self.const),
            s=-np.conj(self.s),
            poly=tuple(np.conj(np.asarray(self.poly))),
        )

    def __mul__(self, other):
        return ExpTerm(
            const=self.const * other.const,
            s=self.s + other.s,
            poly=tuple(npoly.polymul(np.asarray(self.poly), np.asarray(other.poly))),
        )

    @property
    def sup_norm(self):
        """sup over [0, pi] of |envelope| (sampled; envelopes are smooth)."""
        x = np.linspace(0.0, PI, 513)
        return float(np.max(np.abs(self.envelope(x))))


@dataclass(frozen=True)
class FreeEigenvalue:
    value: complex
    k: int
    branch: int | None
    algebraic_multiplicity: int
    geometric_multiplicity: int


@dataclass(frozen=True)
class FreeSpectrum:
    eigenvalues: tuple
    merged_progression: bool  # Dirichlet-type: the two series interleave, step 1


@dataclass(frozen=True)
class RieszConstants:
    norm_a: float
    norm_a_inv: float
    truncation: int

    @property
    def product(self):
        return self.norm_a * self.norm_a_inv


@dataclass(frozen=True)
class BasisFamily:
    bc: bcmod.CanonicalBc
    cls: bcmod.BcClass
    cd: bcmod.CharData
    vd: bcmod.VectorData
    phi_terms: tuple  # phi_terms[mu-1] = (comp1 ExpTerm, comp2 ExpTerm)
    phi_tilde_terms: tuple

    @property
    def jordan(self):
        return self.cls.jordan

    def tau(self, mu):
        return self.cd.tau_of(mu)

    def free_eigenvalue(self, mu, k):
        return self.tau(mu) + k


def _pair(c1, s1, p1, c2, s2, p2):
    return (ExpTerm(c1, s1, tuple(p1)), ExpTerm(c2, s2, tuple(p2)))


def make_family(cbc, cls=None, cd=None, vd=None):
    """Assemble the closed-form basis family for a canonical bc."""
    if cls is None:
        cls = bcmod.classify(cbc)
    if cd is None:
        cd = bcmod.char_roots(cbc, cls)
    if vd is None:
        vd = bcmod.eigen_vectors(cbc, cd, cls)

    if not cls.jordan:
        t1 = cd.tau_of(1)
        t2 = cd.tau_of(2)
        al, be = vd.alpha, vd.beta
        alp, bep = vd.alpha_prime, vd.beta_prime
        phi = (
            # alpha1 e^{i tau1 (pi - x)}, alpha2 e^{i tau1 x}
            _pair(al[0] * np.exp(1j * t1 * PI), -t1, (1.0,), al[1], t1, (1.0,)),
            _pair(be[0] * np.exp(1j * t2 * PI), -t2, (1.0,), be[1], t2, (1.0,)),
        )
        t1c, t2c = np.conj(t1), np.conj(t2)
        phit = (
            _pair(
                np.conj(alp[0]) * np.exp(1j * t1c * PI), -t1c, (1.0,),
                np.conj(alp[1]), t1c, (1.0,),
            ),
            _pair(
                np.conj(bep[0]) * np.exp(1j * t2c * PI), -t2c, (1.0,),
                np.conj(bep[1]), t2c, (1.0,),
            ),
        )
    else:
        ts = cd.tau_star
        al, be = vd.alpha, vd.beta
        delta = vd.delta
        ep = np.exp(1j * ts * PI)
        phi = (
            _pair(al[0] * ep, -ts, (1.0,), al[1], ts, (1.0,)),
            # (beta1 - alpha1 x) e^{i tau (pi-x)}, (beta2 + alpha2 x) e^{i tau x}
            _pair(ep, -ts, (be[0], -al[0]), 1.0, ts, (be[1], al[1])),
        )
        tsc = np.conj(ts)
        dci = 1.0 / np.conj(delta)
        epc = np.exp(1j * tsc * PI)
        a1c, a2c = np.conj(al[0]), np.conj(al[1])
        b1c, b2c = np.conj(be[0]), np.conj(be[1])
        # Dual chain in reversed order: the dual of the eigenfunction
        # carries the polynomial envelope, the dual of the associated
        # function is pure exponential.  Signs follow from the adjoint of
        # the inverse isomorphism.
        phit = (
            _pair(
                dci * epc, -tsc, (b2c + a2c * PI, -a2c),
                -dci, tsc, (b1c - a1c * PI, a1c),
            ),
            _pair(-dci * a2c * epc, -tsc, (1.0,), dci * a1c, tsc, (1.0,)),
        )

    return BasisFamily(bc=cbc, cls=cls, cd=cd, vd=vd, phi_terms=phi, phi_tilde_terms=phit)


def _eval(terms, k, x):
    x = np.asarray(x, dtype=float)
    t1, t2 = terms
    return np.stack(
        [t1.envelope(x) * np.exp(-1j * k * x), t2.envelope(x) * np.exp(1j * k * x)]
    )


def eval_phi(fam, mu, k, x):
    """phi^mu_k at points x; returns shape (2,) + x.shape."""
    return _eval(fam.phi_terms[mu - 1], k, x)


def eval_phi_tilde(fam, mu, k, x):
    return _eval(fam.phi_tilde_terms[mu - 1], k, x)


def eval_phi_block(fam, mu, ks, x, tilde=False):
    """All phi^mu_k (or duals) for k in ks: shape (len(ks), 2, len(x))."""
    terms = (fam.phi_tilde_terms if tilde else fam.phi_terms)[mu - 1]
    x = np.asarray(x, dtype=float)
    ks = np.asarray(ks)
    osc = np.exp(-1j * np.outer(ks, x))  # e^{-ikx}
    comp1 = terms[0].envelope(x)[None, :] * osc
    comp2 = terms[1].envelope(x)[None, :] / osc
    return np.stack([comp1, comp2], axis=1)


def _require_reflective(x):
    x = np.asarray(x, dtype=float)
    if not is_reflective(x):
        raise GridNotReflectiveError("grid must be symmetric under x -> pi - x")
    return x


def apply_A(fam, fg, x):
    """The basis isomorphism on grid samples: A maps (f, g) with
    exponential coordinates onto the phi family. Grid must be reflective."""
    x = _require_reflective(x)
    f, g = np.asarray(fg[0]), np.asarray(fg[1])
    fr, gr = f[::-1], g[::-1]  # f(pi - x), g(pi - x)
    t1 = fam.phi_terms[0]
    t2 = fam.phi_terms[1]
    # component envelopes of phi^1 and phi^2 evaluated at x:
    # out1(x) = env1_1(x) f(pi-x) + env2_1(x) g(pi-x)
    # out2(x) = env1_2(x) f(x)    + env2_2(x) g(x)
    out1 = t1[0].envelope(x) * fr + t2[0].envelope(x) * gr
    out2 = t1[1].envelope(x) * f + t2[1].envelope(x) * g
    return np.stack([out1, out2])


def apply_A_inv(fam, FG, x):
    x = _require_reflective(x)
    F, G = np.asarray(FG[0]), np.asarray(FG[1])
    Fr = F[::-1]
    if not fam.jordan:
        t1, t2 = fam.tau(1), fam.tau(2)
        alp, bep = fam.vd.alpha_prime, fam.vd.beta_prime
        out1 = np.exp(-1j * t1 * x) * (alp[0] * Fr + alp[1] * G)
        out2 = np.exp(-1j * t2 * x) * (bep[0] * Fr + bep[1] * G)
    else:
        ts = fam.cd.tau_star
        al, be = fam.vd.alpha, fam.vd.beta
        delta = fam.vd.delta
        e = np.exp(-1j * ts * x) / delta
        out1 = e * ((be[1] + al[1] * x) * Fr - (be[0] - PI * al[0] + al[0] * x) * G)
        out2 = e * (-al[1] * Fr + al[0] * G)
    return np.stack([out1, out2])


def riesz_constants(fam, truncation, n_panels=64, n_nodes=16):
    """Gram-spectrum estimates of ||A|| and ||A^{-1}|| on the truncated span."""
    if truncation < 8 or truncation % 2:
        raise ValueError("truncation must be even and >= 8")
    x, w = gauss_panels(n_panels, n_nodes)
    ks = np.arange(-truncation, truncation + 1, 2)
    blocks = [eval_phi_block(fam, mu, ks, x) for mu in (1, 2)]
    basis = np.concatenate(blocks, axis=0)  # (2*nk, 2, nq)
    weighted = basis * (w / PI)[None, None, :]
    gram = np.einsum("icq,jcq->ij", weighted, np.conj(basis))
    gram = 0.5 * (gram + np.conj(gram).T)
    evals = np.linalg.eigvalsh(gram)
    if evals[0] <= 0:
        raise NonPositiveGramError(f"min Gram eigenvalue {evals[0]:.3e}")
    return RieszConstants(
        norm_a=float(np.sqrt(evals[-1])),
        norm_a_inv=float(1.0 / np.sqrt(evals[0])),
        truncation=truncation,
    )


def free_spectrum(fam, truncation):
    """Free eigenvalues for |k| <= truncation with multiplicity tags."""
    ks = range(-truncation, truncation + 1, 2)
    out = []
    if fam.cls.strictly_regular:
        for k in ks:
            for mu in (1, 2):
                out.append(
                    FreeEigenvalue(
                        value=fam.tau(mu) + k,
                        k=k,
                        branch=mu,
                        algebraic_multiplicity=1,
                        geometric_multiplicity=1,
                    )
                )
    else:
        geo = 2 if fam.cls.kind is bcmod.BcKind.PERIODIC_TYPE else 1
        for k in ks:
            out.append(
                FreeEigenvalue(
                    value=fam.cd.tau_star + k,
                    k=k,
                    branch=None,
                    algebraic_multiplicity=2,
                    geometric_multiplicity=geo,
                )
            )
    return FreeSpectrum(
        eigenvalues=tuple(out),
        merged_progression=fam.cls.dirichlet_type,
    )


def boundary_residual(fam, mu, k, tilde=False):
    """Residual of the two canonical boundary rows on phi (or the adjoint
    rows on phi~)."""
    ends = np.array([0.0, PI])
    vals = (eval_phi_tilde if tilde else eval_phi)(fam, mu, k, ends)
    y0, ypi = vals[:, 0], vals[:, 1]
    cbc = bcmod.adjoint_bc(fam.bc) if tilde else fam.bc
    return cbc.boundary_residual(y0, ypi)


def basis_csv_rows(fam, mu, k, x):
    """Rows (x, Re/Im of both components) for basis dumps."""
    vals = eval_phi(fam, mu, k, x)
    return np.column_stack(
        [x, vals[0].real, vals[0].imag, vals[1].real, vals[1].imag]
    )
