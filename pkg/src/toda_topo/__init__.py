"""Cell complexes, homology and Toda flows for compactified Cartan manifolds."""

from .errors import TodaTopoError
from .rootsys import RootSystem, WeylGroup, build_root_system, enumerate_weyl, load

__all__ = ["RootSystem", "WeylGroup", "TodaTopoError", "build_root_system",
           "enumerate_weyl", "load"]
