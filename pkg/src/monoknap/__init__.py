"""Knapsack solvers built on bounded monotone (max,+)-convolution.

Exact Unbounded Knapsack (:func:`solve_unbounded`), randomized exact 0-1
Knapsack (:func:`solve_zeroone`), strong and weak approximation schemes
(:func:`fptas`, :func:`weak_fptas`), pluggable convolution kernels
(:func:`maxconv`) and the reduction chain from convolution back to knapsack
(:func:`solve_bmmaxconv_via_knapsack`).
"""

from .approx import fptas, weak_fptas
from .core import (
    NEG_INF,
    InvalidInstanceError,
    Item,
    KnapsackInstance,
    MonotoneSeq,
    ReconstructionError,
    Solution,
    StepList,
    WindowError,
)
from .maxplus import KernelConfig, maxconv, witness_array
from .reductions import solve_bmmaxconv_via_knapsack
from .unbounded_exact import solve_unbounded
from .zeroone_exact import ZeroOneConfig, solve_zeroone

__version__ = "0.1.0"

__all__ = [
    "NEG_INF",
    "InvalidInstanceError",
    "Item",
    "KernelConfig",
    "KnapsackInstance",
    "MonotoneSeq",
    "ReconstructionError",
    "Solution",
    "StepList",
    "WindowError",
    "ZeroOneConfig",
    "fptas",
    "maxconv",
    "solve_bmmaxconv_via_knapsack",
    "solve_unbounded",
    "solve_zeroone",
    "weak_fptas",
    "witness_array",
]
