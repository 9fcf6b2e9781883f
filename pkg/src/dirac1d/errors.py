"""Exception hierarchy.

Every failure mode that callers are expected to branch on gets its own
class; the short ``code`` string is what the CLI prints and what tests
match against.
"""


class Dirac1dError(Exception):
    code = "Dirac1dError"

    def __init__(self, message=""):
        super().__init__(f"{self.code}: {message}" if message else self.code)


class ConfigError(Dirac1dError):
    code = "ConfigError"


class SingularA14Error(Dirac1dError):
    """Columns (1, 4) of the raw boundary matrix are (numerically) dependent."""

    code = "SingularA14"


class NotRegularError(Dirac1dError):
    """|bc - ad| below the regularity tolerance."""

    code = "NotRegular"


class ZeroRootError(Dirac1dError):
    code = "ZeroRoot"


class IllConditionedEigvecError(Dirac1dError):
    """Eigenvector matrix condition number signals nearly coalescing roots."""

    code = "IllConditionedEigvec"


class GridNotReflectiveError(Dirac1dError):
    """Sample grid is not symmetric under x -> pi - x."""

    code = "GridNotReflective"


class NonPositiveGramError(Dirac1dError):
    code = "NonPositiveGram"


class FastSlowMismatchError(Dirac1dError):
    """Coefficient-space table disagrees with the direct quadrature oracle."""

    code = "FastSlowMismatch"


class PoleHitError(Dirac1dError):
    code = "PoleHit"


class NoFiniteNError(Dirac1dError):
    code = "NoFiniteN"


class NearSingularError(Dirac1dError):
    code = "NearSingular"


class SeriesInadmissibleError(Dirac1dError):
    code = "SeriesInadmissible"


class QuadratureDivergenceError(Dirac1dError):
    code = "QuadratureDivergence"


class DimensionMismatchError(Dirac1dError):
    """A contour captured the wrong number of eigenvalues."""

    code = "DimensionMismatch"


class ProjectionDegenerateError(Dirac1dError):
    code = "ProjectionDegenerate"
