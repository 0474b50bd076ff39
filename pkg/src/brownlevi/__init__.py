"""brownlevi: a verification workbench for the Brown complex of ell-subgroups
and the simplicial complex of e-split Levi subgroups on small GL_n(q).

Computes, exactly and over explicit finite matrix groups: closure operators on
abelian ell-subgroups, chain involutions and their cancellation identities,
the chain bijection between e-split Levi chains and e-closed abelian chains,
Euler characteristics and integral homology of both complexes, and the
block-free character-counting identities (Knorr-Robinson/Webb, Thevenaz,
Alperin weights).
"""

from ._kernels import active_backend
from .errors import BrownLeviError

__version__ = "0.1.0"

__all__ = ["BrownLeviError", "active_backend", "__version__"]
