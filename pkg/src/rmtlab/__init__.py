"""rmtlab: a numerical laboratory for Wigner random matrices.

Analytic objects (semicircle transforms, Green functions, error parameters,
functional calculus) together with a Monte Carlo harness that checks the
spectral laws they satisfy: global and local semicircle laws, eigenvalue
rigidity, eigenvector delocalization, interval counting, edge scaling,
fluctuation averaging, bulk sine-kernel statistics, and four-moment
Green-function comparison.
"""

from . import (  # noqa: F401
    airy,
    ensemble,
    errors,
    hs_calculus,
    resolvent,
    semicircle,
    spectral_stats,
    verification,
)

__version__ = "0.1.0"
