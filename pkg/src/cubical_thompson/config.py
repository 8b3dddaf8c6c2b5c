"""Configuration records shared by the solvers and the command line."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class BracketConfig:
    tol: float = 1e-3
    budget: int = 10**6
    k0: int = 4
    max_levels: int = 3
    refine: bool = True


@dataclass
class SearchConfig:
    radius: int = 2
    tol: float = 1e-3
    budget: int = 10**6
    jobs: int = 1


@dataclass
class StaircaseConfig:
    x_max: int = 64
