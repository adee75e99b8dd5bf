"""Differential graded structures on 3-dimensional Sklyanin algebras:
exact normal forms, classification of differentials, Calabi-Yau
verdicts and truncated cohomology."""

from .calabi_yau import (CyVerdict, MonomialMatrix, cy_verdict, noncy_membership,
                         qpl_equivalent, rank_one_factor)
from .classifier import DgClassification, Kind, classify
from .cohomology import differential_matrix, truncated_cohomology
from .dg import DifferentialSpec, NotADifferential, build_constraints, check_differential
from .exact_scalars import RadicalScalar, Rational
from .ncalg import NcPoly, QuadraticAlgebraModel
from .params import CaseTag, SklyaninParams, validate

__version__ = "0.1.0"
