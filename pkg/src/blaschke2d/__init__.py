"""Two-variable Blaschke products: exact degrees, geometry, preimages and torus dynamics."""

__version__ = "0.1.0"

from .errors import BlaschkeError  # noqa: E402
from .maps import Blaschke2D, DegreeMatrix, build_map, lift, monomial_map  # noqa: E402

__all__ = ["BlaschkeError", "Blaschke2D", "DegreeMatrix", "build_map", "lift", "monomial_map", "__version__"]
