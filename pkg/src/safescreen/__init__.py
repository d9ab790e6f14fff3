"""Lasso coordinate descent with dynamic safe screening."""

from .data import Dataset, generate, load_csv, load_libsvm
from .duality import DualPoint, LassoProblem, dual_map, dual_value, duality_gap, lambda_max, primal_value
from .matrix import DesignMatrix
from .path import PathConfig, PathReport, lambda_grid, solve_path, warm_start_scale
from .regions import (
    Dome,
    EmptyRegion,
    RegionRule,
    Sphere,
    dynamic_edpp,
    dynamic_sasvi,
    gap_safe_dome,
    gap_safe_sphere,
    sup_linear_over_dome,
    sup_linear_over_sphere,
)
from .screening import ActiveSet, ScreenEvent, screen
from .solver import SolveReport, SolverConfig, cd_epoch, solve

__version__ = "0.1.0"
