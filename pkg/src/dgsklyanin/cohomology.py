"""Truncated cohomology of a DG algebra A = (k<x,y,z>/(f), d) in low
degrees, from exact ranks of the matrices of d: A^n -> A^(n+1)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dg import DifferentialSpec, NotADifferential, check_differential, leibniz_coords
from .exact_scalars import format_rational
from .linalg import matmul, nullspace, rank, rref
from .ncalg import NcPoly, QuadraticAlgebraModel


def differential_matrix(alg: QuadraticAlgebraModel, d: DifferentialSpec, deg: int) -> list[list[Fraction]]:
    """dim A^(deg+1) x dim A^deg matrix; column j is d of the j-th basis word."""
    if deg < 0 or deg + 1 > alg.cap:
        raise ValueError(f"degree {deg} beyond cap {alg.cap} - 1")
    cols = [leibniz_coords(d, NcPoly.word(w), alg, degree=deg) for w in alg.basis(deg)]
    nrows = alg.dim(deg + 1)
    return [[col[i] for col in cols] for i in range(nrows)]


@dataclass
class CochainMatrices:
    alg: QuadraticAlgebraModel
    matrices: list[list[list[Fraction]]]

    @classmethod
    def build(cls, alg: QuadraticAlgebraModel, d: DifferentialSpec, top: int) -> "CochainMatrices":
        """Matrices of d in degrees 0..top."""
        return cls(alg, [differential_matrix(alg, d, n) for n in range(top + 1)])

    def composition_is_zero(self) -> bool:
        for lo, hi in zip(self.matrices, self.matrices[1:]):
            if not lo or not hi or not lo[0]:
                continue
            prod = matmul(hi, lo)
            if any(v != 0 for row in prod for v in row):
                return False
        return True


@dataclass
class CohomologyReport:
    dims: list[int]
    representatives: list[list[list[Fraction]]]
    bases: list[list[str]]

    def representative_polys(self) -> list[list[NcPoly]]:
        return [[NcPoly({b[i]: c for i, c in enumerate(vec) if c}) for vec in reps]
                for b, reps in zip(self.bases, self.representatives)]

    def to_json(self) -> dict:
        return {
            "dims": self.dims,
            "representatives": [[p.to_json() for p in reps] for reps in self.representative_polys()],
        }


def _complement(kernel, image, ncols):
    """Vectors completing ``image`` to a basis of span(kernel): kernel
    vectors are reduced modulo the image, then echelonized. Pivots sit on
    the greatest basis words, so the survivors use the least words."""
    order = list(range(ncols - 1, -1, -1))
    img, piv = rref(image, ncols, order) if image else ([], [])
    residues = []
    for v in kernel:
        v = list(v)
        for row, p in zip(img, piv):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        residues.append(v)
    reps, _ = rref(residues, ncols, order)
    return reps


def truncated_cohomology(alg: QuadraticAlgebraModel, d: DifferentialSpec, top: int) -> CohomologyReport:
    """dim H^n and representative cocycles for n = 0..top (needs cap > top)."""
    if top + 1 > alg.cap:
        raise ValueError(f"degree {top} needs a model with cap at least {top + 1}")
    if alg.cap < 3:
        raise ValueError("validity checks need a model with cap at least 3")
    if not check_differential(d, alg).valid:
        raise NotADifferential("not a differential")
    chain = CochainMatrices.build(alg, d, top)
    dims, reps = [], []
    prev_image: list[list[Fraction]] = []
    for n in range(top + 1):
        mat = chain.matrices[n]
        size = alg.dim(n)
        kernel = nullspace(mat, size)
        classes = _complement(kernel, prev_image, size)
        dims.append(len(kernel) - (rank(prev_image, size) if prev_image else 0))
        assert len(classes) == dims[-1]
        reps.append(classes)
        # columns of mat span the image in degree n+1
        prev_image = [list(col) for col in zip(*mat)] if mat else []
    return CohomologyReport(dims, reps, [alg.basis(n) for n in range(top + 1)])


def format_report(report: CohomologyReport) -> str:
    lines = []
    for n, (dim, polys) in enumerate(zip(report.dims, report.representative_polys())):
        shown = ", ".join(" + ".join(f"{format_rational(c)}*{w or '1'}" for w, c in sorted(p.terms.items()))
                          for p in polys)
        lines.append(f"H^{n}: {dim}  [{shown}]")
    return "\n".join(lines)
