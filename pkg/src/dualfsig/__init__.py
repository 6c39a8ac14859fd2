"""Dual F-signature positivity for invariants of AGL(1, p), with a surjective-number lab."""

from .agl_group import AffineElement, AffineGroup, SmallGroup, bar_h1, make_group, symmetric_group
from .criteria import ClassificationRow, CriterionReport, classify, evaluate_criteria, kemper_depth
from .gfp_linalg import PrimeField
from .kg_modules import (
    DecompReport,
    Representation,
    TheoryFalsified,
    cover_map_surjective,
    decompose_degree,
    fl_report,
    h1_lhs,
    h1_table,
)
from .surjlab import FdModule, LocalAlgebra, preset_algebra, surj_number
from .theta_space import IndecRegistry, ThetaVector

__version__ = "0.1.0"
