"""Exact computation of abelian extension groups of matched pairs of finite groups.

The package computes Opext(k^G, kF) for a matched pair of finite groups
(F, G, |>, <|) by independent routes (double complex total cohomology,
relative cohomology of the augmentation kernel, five-term exact sequence
reconstruction) over exact arithmetic, together with the surrounding
group cohomology toolbox the routes need.
"""

from opextkit.exactlin import FpAbGroup

__all__ = ["FpAbGroup"]
__version__ = "0.1.0"
