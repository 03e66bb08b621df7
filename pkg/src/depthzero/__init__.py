"""Depth-zero character computations for tori over local fields.

Layers, bottom to top: exact integer linear algebra and finitely
generated abelian groups (:mod:`depthzero.abelian`), finite groups with
subgroup/coset bookkeeping (:mod:`depthzero.galois`), integral
representations of those groups (:mod:`depthzero.gmodule`), group
cohomology in low degree with restriction, corestriction and transfer
checks (:mod:`depthzero.cohomology`), and the arithmetic applications:
unramified character counts, inertial parameter computations and the
archimedean sanity identity (:mod:`depthzero.langlands`).
"""

from depthzero.abelian import FinAbGroup, IntMatrix, Presentation, cokernel, snf

__all__ = [
    "FinAbGroup",
    "IntMatrix",
    "Presentation",
    "cokernel",
    "snf",
]

__version__ = "0.1.0"
