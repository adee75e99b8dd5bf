"""Solve the differential constraint system at a fixed parameter point
and match the solution set against the three known answers.

The pipeline is: linear nullspace L of the d(f_i) constraints, pull the
d²(g) quadrics back to L, then either the quadrics vanish identically
(solution set = L) or a square certificate shows that the common zero
set of the quadrics lies inside the predicted subspace P.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .dg import (ConstraintSystem, DifferentialSpec, SymbolicPoly, build_constraints,
                 check_differential)
from .exact_scalars import format_rational
from .linalg import in_span, nullspace, nullspace_with_free, rank, solve
from .ncalg import QuadraticAlgebraModel
from .params import CaseTag, SklyaninParams, case_of, relations, validate


class Kind(str, enum.Enum):
    ZERO_ONLY = "ZeroOnly"
    ALPHA_BETA_GAMMA = "AlphaBetaGammaFamily"
    SYMMETRIC_MATRIX = "SymmetricMatrixFamily"
    UNDECIDED = "Undecided"


EXPECTED_KIND = {
    CaseTag.TWO_NONZERO_WITH_C: Kind.ZERO_ONLY,
    CaseTag.ALL_NONZERO: Kind.ZERO_ONLY,
    CaseTag.C_ZERO_DISTINCT_SQUARES: Kind.ZERO_ONLY,
    CaseTag.C_ZERO_ANTI_DIAGONAL: Kind.ALPHA_BETA_GAMMA,
    CaseTag.C_ZERO_DIAGONAL: Kind.SYMMETRIC_MATRIX,
}


@dataclass
class LinearSolutionSpace:
    """Nullspace of the linear constraints in nf coordinates.

    Basis vectors are in reduced echelon form: vector ``a`` has a 1 in
    ``free[a]`` and 0 in the other free columns, so the L-coordinates of
    any v in L are just ``v[free]``.
    """

    basis: list[list[Fraction]]
    free: list[int]
    ambient: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coordinates_of(self, v: Sequence) -> list[Fraction]:
        return [Fraction(v[f]) for f in self.free]

    def contains(self, v: Sequence) -> bool:
        return in_span(self.basis, v, self.ambient)

    def embed(self, coords: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.ambient
        for c, vec in zip(coords, self.basis):
            if c:
                for i, x in enumerate(vec):
                    if x:
                        out[i] += c * x
        return out


def solve_linear(cs: ConstraintSystem) -> LinearSolutionSpace:
    mat = cs.linear_matrix()
    basis, free = nullspace_with_free(mat, cs.nvars)
    return LinearSolutionSpace(basis, free, cs.nvars)


def restrict_quadratics(cs: ConstraintSystem, L: LinearSolutionSpace) -> list[SymbolicPoly]:
    """Quadratic constraints as forms in the L-coordinates."""
    images = [SymbolicPoly({(a,): vec[i] for a, vec in enumerate(L.basis) if vec[i]})
              for i in range(cs.nvars)]
    return [q.substitute(images) for q in cs.quadratic]


def _monomials(n: int) -> list[tuple]:
    return [(i, j) for i in range(n) for j in range(i, n)]


@dataclass
class SquareCertificate:
    """For each complement functional s (a vector on L), coefficients c
    with s² = sum_j c_j·Q_j identically."""

    dim: int
    complement_coords: list[list[Fraction]]
    combinations: list[list[Fraction]]

    def verify(self, quads: Sequence[SymbolicPoly]) -> bool:
        for s, coeffs in zip(self.complement_coords, self.combinations):
            lin = SymbolicPoly.linear(s)
            total = SymbolicPoly()
            for c, q in zip(coeffs, quads):
                if c:
                    total = total + q.scale(c)
            if (lin * lin - total):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "complement_coords": [[format_rational(v) for v in s] for s in self.complement_coords],
            "combinations": [[format_rational(v) for v in c] for c in self.combinations],
        }


@dataclass
class CertificateFailure:
    unresolved: list[list[Fraction]]


def square_certificate(quads: Sequence[SymbolicPoly], target: Sequence[Sequence],
                       dim: int) -> SquareCertificate | CertificateFailure:
    """Try to prove V(quads) ⊆ target by writing the square of each
    functional vanishing on ``target`` as a linear combination of quads.

    ``target`` is a list of vectors in L-coordinates (dimension ``dim``).
    """
    complement = nullspace([list(t) for t in target], dim)
    if not complement:
        return SquareCertificate(dim, [], [])
    monos = _monomials(dim)
    mindex = {m: i for i, m in enumerate(monos)}
    cols = []
    for q in quads:
        col = [Fraction(0)] * len(monos)
        for m, c in q.terms.items():
            col[mindex[m]] = c
        cols.append(col)
    amat = [[cols[j][i] for j in range(len(cols))] for i in range(len(monos))]
    combos, failed = [], []
    for s in complement:
        sq = SymbolicPoly.linear(s) * SymbolicPoly.linear(s)
        rhs = [Fraction(0)] * len(monos)
        for m, c in sq.terms.items():
            rhs[mindex[m]] = c
        sol = solve(amat, rhs, len(cols)) if cols else None
        if sol is None:
            failed.append(s)
        else:
            combos.append(sol)
    if failed:
        return CertificateFailure(failed)
    return SquareCertificate(dim, complement, combos)


@dataclass
class Family:
    """A linearly parametrized family of differentials."""

    parameters: list[str]
    generators: list[DifferentialSpec]

    def member(self, coeffs: Sequence) -> DifferentialSpec:
        out = DifferentialSpec.zero()
        for c, g in zip(coeffs, self.generators):
            out = out + g.scale(c)
        return out


def _abg_family() -> Family:
    return Family(["alpha", "beta", "gamma"], [
        DifferentialSpec.from_images(["x^2", "yx", "xz"]),
        DifferentialSpec.from_images(["xy", "y^2", "yz"]),
        DifferentialSpec.from_images(["xz", "yz", "z^2"]),
    ])


def _diagonal_family() -> Family:
    gens, names = [], []
    for i in range(3):
        for j in range(3):
            m = [[0] * 3 for _ in range(3)]
            m[i][j] = 1
            gens.append(DifferentialSpec.from_diag(m))
            names.append(f"m{i + 1}{j + 1}")
    return Family(names, gens)


def known_families() -> dict[Kind, Family]:
    return {Kind.ZERO_ONLY: Family([], []), Kind.ALPHA_BETA_GAMMA: _abg_family(),
            Kind.SYMMETRIC_MATRIX: _diagonal_family()}


def predicted_family(p: SklyaninParams | tuple) -> Family:
    """The family predicted for p's case tag."""
    p = p if isinstance(p, SklyaninParams) else validate(*p)
    return known_families()[EXPECTED_KIND[case_of(p)]]


@dataclass
class DgClassification:
    params: SklyaninParams
    case: CaseTag
    kind: Kind
    solution_dim: int
    linear_dim: int
    family_basis: list[DifferentialSpec]
    certificate: SquareCertificate | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def matches_prediction(self) -> bool:
        return self.kind == EXPECTED_KIND[self.case]

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "case": self.case.value,
            "kind": self.kind.value,
            "solution_dim": self.solution_dim,
            "matches_prediction": self.matches_prediction,
            "linear_dim": self.linear_dim,
            "family_basis": [d.to_json() for d in self.family_basis],
            "certificate": self.certificate.to_json() if self.certificate else None,
            "evidence": self.evidence,
        }


def classify(p, alg: QuadraticAlgebraModel | None = None) -> DgClassification:
    """Classify all differentials at ``p``.

    ``p`` is SklyaninParams or a raw triple; a raw triple is validated and
    its (unnormalized) relations are used for the computation, so callers
    can check projective invariance. ``alg`` overrides the model.

    The predicted family for the case tag is tried first. If it does not
    describe the solution set, the other known families are tried, and a
    match is reported with ``matches_prediction`` false.
    """
    if isinstance(p, SklyaninParams):
        params = p
        model = alg or QuadraticAlgebraModel(relations(p), cap=3)
    else:
        params = validate(*p)
        model = alg or QuadraticAlgebraModel(relations(tuple(p)), cap=3)
    tag = case_of(params)
    cs = build_constraints(model)
    L = solve_linear(cs)
    quads = restrict_quadratics(cs, L)
    quads_vanish = all(not q for q in quads)
    evidence: dict = {"linear_constraints": len(cs.linear),
                      "quadratic_constraints": len(cs.quadratic),
                      "quadrics_vanish_on_linear_space": quads_vanish}

    expected = EXPECTED_KIND[tag]
    families = known_families()
    order = [expected] + [k for k in families if k is not expected]
    rejected = {}
    for kind in order:
        family = families[kind]
        found = _match_family(family, model, cs, L, quads, quads_vanish)
        if isinstance(found, str):
            rejected[kind.value] = found
            continue
        fam_rank, cert = found
        evidence.update({"family_in_linear_space": True, "family_rank": fam_rank,
                         "family_satisfies_quadrics": True})
        if cert is not None:
            evidence["certificate_verified"] = cert.verify(quads)
        if kind is not expected:
            evidence["deviation"] = f"solution set is {kind.value}, predicted {expected.value}"
            evidence["rejected"] = rejected
        dim = L.dimension if quads_vanish else fam_rank
        return DgClassification(params, tag, kind, dim, L.dimension, list(family.generators),
                                cert, evidence)

    evidence["reason"] = "no known family matches the solution set"
    evidence["rejected"] = rejected
    basis = []
    if quads_vanish:
        basis = [DifferentialSpec.from_nf(model, _split(v, model)) for v in L.basis]
    return DgClassification(params, tag, Kind.UNDECIDED, L.dimension, L.dimension, basis,
                            None, evidence)


def _match_family(family: Family, model, cs, L, quads, quads_vanish):
    """(rank, certificate) when the solution set equals the span of the
    family, otherwise a short reason string."""
    fam_nf = [[v for vec in g.nf_coords(model) for v in vec] for g in family.generators]
    fam_rank = rank(fam_nf, cs.nvars) if fam_nf else 0
    if not all(L.contains(v) for v in fam_nf):
        return "family violates the linear constraints"
    target = [L.coordinates_of(v) for v in fam_nf]
    # the family satisfies the quadrics identically in its parameters
    images = [SymbolicPoly({(a,): t[i] for a, t in enumerate(target) if t[i]})
              for i in range(L.dimension)]
    if any(q.substitute(images) for q in quads):
        return "family violates the quadratic constraints"
    if quads_vanish:
        if L.dimension != fam_rank:
            return "solution space is larger than the family"
        return fam_rank, None
    cert = square_certificate(quads, target, L.dimension)
    if isinstance(cert, CertificateFailure):
        return "square certificate search failed"
    return fam_rank, cert


def _split(v: Sequence, alg: QuadraticAlgebraModel) -> list[list[Fraction]]:
    n2 = alg.dim(2)
    return [list(v[k * n2:(k + 1) * n2]) for k in range(3)]


def solution_contains(cls: DgClassification, d: DifferentialSpec) -> bool:
    """Whether d lies in the classified solution set (and is valid)."""
    return check_differential(d, cls.params).valid
