"""Upper bounds on kissing numbers and spherical codes by extension polynomials.

Submodules:

* ``orthopoly``  - polynomials, Gegenbauer bases, root isolation and sign certificates
* ``lpsolve``    - a small dense simplex solver
* ``spherical``  - codes, witness configurations and the cap-count bound ``mu``
* ``hbound``     - bounds on ``h_m`` for configurations near the antipode
* ``polysearch`` - LP search for extension polynomials
* ``cli``        - end-to-end certificates and the ``kissbound`` command
"""

from .orthopoly import GegenbauerExpansion, Polynomial, from_gegenbauer, gegenbauer, to_gegenbauer
from .polys import K3_POLY, K4_POLY
from .polysearch import SearchConfig, SearchResult, search
from .spherical import CodeProblem, PointConfig, witness_config

__version__ = "0.1.0"

__all__ = [
    "GegenbauerExpansion",
    "Polynomial",
    "from_gegenbauer",
    "gegenbauer",
    "to_gegenbauer",
    "K3_POLY",
    "K4_POLY",
    "SearchConfig",
    "SearchResult",
    "search",
    "CodeProblem",
    "PointConfig",
    "witness_config",
]
