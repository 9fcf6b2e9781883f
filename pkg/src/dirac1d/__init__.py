"""Constructive spectral analysis of 1D Dirac operators on [0, pi].

The operator is  L(v) y = i*sigma3*y' + v(x) y  acting on C^2-valued
functions over [0, pi], with an off-diagonal L^2 potential
v = [[0, P], [Q, 0]] and a regular two-point boundary condition.

Subpackage map:

* ``bc`` -- boundary-condition normalization, classification,
  characteristic roots and eigenvector data of the reduced 2x2 matrix.
* ``basis`` -- closed-form eigen/associated system of the free operator,
  its biorthogonal system, the basis isomorphism and Riesz constants.
* ``potential`` -- potentials and their Fourier matrix tables.
* ``localization`` -- spectral inclusion geometry (strips, discs,
  rectangle) and the Hilbert-Schmidt sufficiency sums.
* ``resolvent`` -- truncated operator, resolvent (direct and series),
  contour-integrated Riesz projections, square-summability tables.
* ``solver`` -- dense eigensolution, eigenvalue deviations,
  reconstruction and pointwise/equiconvergence experiments.
* ``cli`` -- the ``dirac`` command-line front end.
"""

from .errors import (
    Dirac1dError,
    SingularA14Error,
    NotRegularError,
    ZeroRootError,
    IllConditionedEigvecError,
    GridNotReflectiveError,
    NonPositiveGramError,
    FastSlowMismatchError,
    PoleHitError,
    NoFiniteNError,
    NearSingularError,
    SeriesInadmissibleError,
    QuadratureDivergenceError,
    DimensionMismatchError,
    ProjectionDegenerateError,
    ConfigError,
)

__all__ = [
    "Dirac1dError",
    "SingularA14Error",
    "NotRegularError",
    "ZeroRootError",
    "IllConditionedEigvecError",
    "GridNotReflectiveError",
    "NonPositiveGramError",
    "FastSlowMismatchError",
    "PoleHitError",
    "NoFiniteNError",
    "NearSingularError",
    "SeriesInadmissibleError",
    "QuadratureDivergenceError",
    "DimensionMismatchError",
    "ProjectionDegenerateError",
    "ConfigError",
]

__version__ = "0.1.0"
