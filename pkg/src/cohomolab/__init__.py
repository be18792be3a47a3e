"""cohomolab: first group cohomology of finite matrix groups over Z/p^k.

Submodules:

* ``modmat``     exact linear algebra over Z/m (Howell/Smith forms, solvers)
* ``abelian``    finite abelian groups, homomorphisms, divisibility, summands
* ``matgroup``   matrix-group closure and the explicit p-adic group tower
* ``cohomology`` 1-cocycles, H^1, the locally trivial part, inflation
* ``lemma_lab``  exhaustive and randomized verification campaigns
* ``cli``        command-line entry point
"""

from . import abelian, cohomology, lemma_lab, matgroup, modmat, npred

__version__ = "0.1.0"

__all__ = [
    "modmat",
    "npred",
    "abelian",
    "matgroup",
    "cohomology",
    "lemma_lab",
    "__version__",
]
