"""Self-similar tree automorphism groups, their Röver-Nekrashevych groups,
and the affine groups over function fields that act on the p-ary tree."""

from . import agl, ff_poly, fixtures, flagcomplex, mealy, rover, series

__all__ = ["agl", "ff_poly", "fixtures", "flagcomplex", "mealy", "rover", "series"]
__version__ = "0.1.0"
