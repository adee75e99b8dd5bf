"""Sklyanin parameters (a, b, c) in P^2: validation against the twelve
forbidden points, projective normalization, case tags and relations."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .exact_scalars import as_rational, format_rational
from .ncalg import NcPoly, QuadraticAlgebraModel


class CaseTag(str, enum.Enum):
    TWO_NONZERO_WITH_C = "TwoNonzeroWithC"
    ALL_NONZERO = "AllNonzero"
    C_ZERO_DISTINCT_SQUARES = "CZeroDistinctSquares"
    C_ZERO_ANTI_DIAGONAL = "CZeroAntiDiagonal"
    C_ZERO_DIAGONAL = "CZeroDiagonal"


class ParameterError(ValueError):
    """Raised for (0,0,0) or a point of the forbidden set."""

    def __init__(self, reason: str, a, b, c):
        self.reason = reason
        super().__init__(f"{reason}: ({a}, {b}, {c})")


class AllZero(ParameterError):
    def __init__(self, a, b, c):
        super().__init__("all-zero", a, b, c)


class Forbidden(ParameterError):
    pass


@dataclass(frozen=True)
class SklyaninParams:
    """A valid point of P^2 minus the forbidden set, scaled so that its
    first nonzero coordinate is 1. Build instances with :func:`validate`."""

    a: Fraction
    b: Fraction
    c: Fraction

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c)

    def to_json(self) -> dict[str, str]:
        return {k: format_rational(v) for k, v in zip("abc", self.as_tuple())}

    @property
    def case(self) -> CaseTag:
        return case_of(self)


def _forbidden_reason(a: Fraction, b: Fraction, c: Fraction) -> str | None:
    if [a, b, c].count(0) == 2:
        return "coordinate-point"
    if a ** 3 == b ** 3 == c ** 3:
        return "equal-cubes"
    return None


def validate(a, b, c) -> SklyaninParams:
    a, b, c = (as_rational(v) for v in (a, b, c))
    if a == b == c == 0:
        raise AllZero(a, b, c)
    reason = _forbidden_reason(a, b, c)
    if reason:
        raise Forbidden(reason, a, b, c)
    lead = next(v for v in (a, b, c) if v != 0)
    return SklyaninParams(a / lead, b / lead, c / lead)


def relations(p, scale=1) -> tuple[NcPoly, NcPoly, NcPoly]:
    """f1 = a·yz + b·zy + c·x², f2 = a·zx + b·xz + c·y², f3 = a·xy + b·yx + c·z².

    ``p`` may be SklyaninParams or a raw (a, b, c) triple; raw triples are
    used as given (not normalized), which is how projective-rescaling
    checks build their models.
    """
    a, b, c = p.as_tuple() if isinstance(p, SklyaninParams) else map(as_rational, p)
    a, b, c = (as_rational(scale) * v for v in (a, b, c))
    return (
        NcPoly({"yz": a, "zy": b, "xx": c}),
        NcPoly({"zx": a, "xz": b, "yy": c}),
        NcPoly({"xy": a, "yx": b, "zz": c}),
    )


def case_of(p: SklyaninParams) -> CaseTag:
    a, b, c = p.as_tuple()
    if c != 0:
        if a != 0 and b != 0:
            return CaseTag.ALL_NONZERO
        return CaseTag.TWO_NONZERO_WITH_C
    if a * a != b * b:
        return CaseTag.C_ZERO_DISTINCT_SQUARES
    if a == -b:
        return CaseTag.C_ZERO_ANTI_DIAGONAL
    return CaseTag.C_ZERO_DIAGONAL


def sklyanin_model(p, cap: int = 3) -> QuadraticAlgebraModel:
    """Quotient-algebra model for SklyaninParams or a raw (a, b, c) triple."""
    if not isinstance(p, SklyaninParams):
        validate(*p)
    return QuadraticAlgebraModel(relations(p), cap=cap)


def parse_params(text: str) -> tuple[Fraction, Fraction, Fraction]:
    """Parse ``"a,b,c"`` with rational entries such as ``"1,-1/2,0"``."""
    parts = [s for s in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated values, got {text!r}")
    return tuple(as_rational(s) for s in parts)  # type: ignore[return-value]
