"""Quasi-permutation (QPL) equivalence of 3x3 matrices, membership in the
two non-Calabi-Yau families, and the Calabi-Yau verdict for a DG
Sklyanin algebra.

The QPL action is N = C⁻¹·M·(c_ij²) with C monomial. Writing C with
c_{σ(j), j} = e_j, it reads entrywise

    N[j][k] = (e_k² / e_j) · M[σ(j)][σ(k)].

Fixing σ leaves a multiplicative system in (e_1, e_2, e_3), which is
decided over the algebraic closure through the Smith normal form of its
integer exponent matrix.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .dg import DifferentialSpec, NotADifferential, check_differential
from .exact_scalars import (MixedRadicandError, RadicalScalar, Scalar, as_rational,
                            format_rational, rational_root, scalar_from_json,
                            scalar_to_json, simplify)
from .linalg import rank, smith_normal_form
from .ncalg import QuadraticAlgebraModel
from .params import CaseTag, SklyaninParams, case_of, sklyanin_model, validate

PERMUTATIONS = tuple(itertools.permutations(range(3)))

FAMILY_ONE = ((1, 1, 0), (1, 1, 0), (1, 1, 0))


class InvariantViolation(AssertionError):
    """Two independent decision procedures disagreed."""


def as_matrix(m) -> list[list[Fraction]]:
    out = [[as_rational(v) for v in row] for row in m]
    if len(out) != 3 or any(len(r) != 3 for r in out):
        raise ValueError("expected a 3x3 matrix")
    return out


def _equal(a: Scalar, b: Scalar) -> bool:
    return simplify(a) == simplify(b)


@dataclass(frozen=True)
class MonomialMatrix:
    """C with c[sigma[j]][j] = scales[j] and zeros elsewhere (0-based)."""

    sigma: tuple[int, int, int]
    scales: tuple

    def __post_init__(self):
        if sorted(self.sigma) != [0, 1, 2]:
            raise ValueError(f"not a permutation: {self.sigma}")
        if len(self.scales) != 3 or any(not s for s in self.scales):
            raise ValueError("scales must be three nonzero scalars")

    def to_matrix(self) -> list[list]:
        out = [[Fraction(0)] * 3 for _ in range(3)]
        for j in range(3):
            out[self.sigma[j]][j] = self.scales[j]
        return out

    def inverse_matrix(self) -> list[list]:
        out = [[Fraction(0)] * 3 for _ in range(3)]
        for j in range(3):
            out[j][self.sigma[j]] = 1 / self.scales[j]
        return out

    def squared_matrix(self) -> list[list]:
        out = [[Fraction(0)] * 3 for _ in range(3)]
        for j in range(3):
            out[self.sigma[j]][j] = self.scales[j] * self.scales[j]
        return out

    def apply(self, m) -> list[list]:
        """C⁻¹·M·(c_ij²), by honest matrix products."""
        from .linalg import matmul
        prod = matmul(matmul(self.inverse_matrix(), m), self.squared_matrix())
        return [[simplify(v) for v in row] for row in prod]

    @property
    def is_rational(self) -> bool:
        return all(isinstance(simplify(s), Fraction) for s in self.scales)

    def to_json(self) -> dict:
        return {"sigma": [s + 1 for s in self.sigma],
                "scales": [scalar_to_json(s) for s in self.scales]}

    @classmethod
    def from_json(cls, data) -> "MonomialMatrix":
        return cls(tuple(s - 1 for s in data["sigma"]),
                   tuple(scalar_from_json(s) for s in data["scales"]))


def qpl_action(c: MonomialMatrix, m) -> list[list]:
    return c.apply(m)


@dataclass
class ClosureWitness:
    """Scales exist over the algebraic closure but not in Q or a single
    quadratic extension: e = t^V where t_i^{d_i} = rho_i."""

    sigma: tuple[int, int, int]
    degrees: list[int]
    rho: list[Fraction]
    transform: list[list[int]]

    def to_json(self) -> dict:
        return {"sigma": [s + 1 for s in self.sigma], "exists_over_closure": True,
                "root_equations": [{"degree": d, "value": format_rational(r)}
                                   for d, r in zip(self.degrees, self.rho)],
                "transform": self.transform}


def _permuted(m, sigma) -> list[list[Fraction]]:
    return [[m[sigma[j]][sigma[k]] for k in range(3)] for j in range(3)]


def _solve_scales(mp, n, sigma):
    """Solve N[j][k] = (e_k²/e_j)·mp[j][k]; None if inconsistent."""
    rows, rhs = [], []
    for j in range(3):
        for k in range(3):
            if (mp[j][k] == 0) != (n[j][k] == 0):
                return None
            if n[j][k] == 0:
                continue
            row = [0, 0, 0]
            row[k] += 2
            row[j] -= 1
            rows.append(row)
            rhs.append(n[j][k] / mp[j][k])
    if not rows:
        return MonomialMatrix(tuple(sigma), (Fraction(1),) * 3)
    u, s, v = smith_normal_form(rows)
    rho = []
    for i in range(len(rows)):
        val = Fraction(1)
        for r, ex in zip(rhs, u[i]):
            if ex:
                val *= r ** ex
        rho.append(val)
    degrees = [s[i][i] if i < 3 else 0 for i in range(len(rows))]
    for d, r in zip(degrees, rho):
        if d == 0 and r != 1:
            return None
    # one t per unknown; rows beyond the equations leave t free
    degrees = (degrees + [0, 0, 0])[:3]
    rho = (rho + [Fraction(1)] * 3)[:3]
    # free coordinates of t are set to 1
    ts: list = []
    closure = False
    for d, r in zip(degrees, rho):
        if d == 0:
            ts.append(Fraction(1))
            continue
        root = rational_root(r, d)
        if root is not None:
            ts.append(root)
        elif d == 2:
            ts.append(RadicalScalar(0, 1, r))
        else:
            closure = True
            break
    if not closure:
        try:
            scales = []
            for j in range(3):
                e: Scalar = Fraction(1)
                for l in range(3):
                    if v[j][l]:
                        e = e * ts[l] ** v[j][l]
                scales.append(simplify(e))
            return MonomialMatrix(tuple(sigma), tuple(scales))
        except MixedRadicandError:
            pass
    return ClosureWitness(tuple(sigma), degrees, rho, [list(r) for r in v])


def qpl_equivalent(m, n) -> MonomialMatrix | ClosureWitness | None:
    """A monomial C with N = C⁻¹·M·(c_ij²), or None when no C exists over
    the algebraic closure.

    Rational witnesses are preferred, then witnesses in one quadratic
    extension; a :class:`ClosureWitness` is returned only when neither
    exists for any permutation. Materialized witnesses are re-checked.
    """
    m, n = as_matrix(m), as_matrix(n)
    if rank(m) != rank(n):
        return None
    best = None
    for sigma in PERMUTATIONS:
        found = _solve_scales(_permuted(m, sigma), n, sigma)
        if found is None:
            continue
        if isinstance(found, MonomialMatrix):
            got = found.apply(m)
            if not all(_equal(got[i][j], n[i][j]) for i in range(3) for j in range(3)):
                raise InvariantViolation(f"witness {found} does not reproduce the target")
            if found.is_rational:
                return found
            if best is None or isinstance(best, ClosureWitness):
                best = found
        elif best is None:
            best = found
    return best


# ---------- rank one structure ----------

@dataclass(frozen=True)
class RankOneFactorization:
    """N = u·vᵀ with the first nonzero entry of u equal to 1."""

    u: tuple
    v: tuple

    def product(self) -> list[list[Fraction]]:
        return [[a * b for b in self.v] for a in self.u]

    def w(self) -> tuple:
        return tuple(vi * ui * ui for ui, vi in zip(self.u, self.v))


def rank_one_factor(n) -> RankOneFactorization | None:
    n = as_matrix(n)
    if rank(n) != 1:
        return None
    r = next(i for i in range(3) if any(n[i]))
    k = next(j for j in range(3) if n[r][j])
    v = tuple(n[r])
    u = tuple(n[i][k] / n[r][k] for i in range(3))
    fac = RankOneFactorization(u, v)
    assert fac.product() == n
    return fac


def delta_invariant(w: Sequence) -> Fraction:
    w1, w2, w3 = (as_rational(x) for x in w)
    return (w1 - w2 - w3) ** 2 - 4 * w2 * w3


def fast_membership(n) -> bool:
    fac = rank_one_factor(n)
    if fac is None or any(x == 0 for x in fac.u):
        return False
    return delta_invariant(fac.w()) == 0


@dataclass
class FamilyParameters:
    """Parameters (m11, m12, m13, l1, l2) of the rank one family."""

    m11: Fraction
    m12: Fraction
    m13: Fraction
    l1: Fraction
    l2: Fraction

    def matrix(self) -> list[list[Fraction]]:
        row = [self.m11, self.m12, self.m13]
        return [list(row), [self.l1 * x for x in row], [self.l2 * x for x in row]]

    def side_conditions(self) -> dict[str, bool]:
        s = self.m12 * self.l1 ** 2 + self.m13 * self.l2 ** 2
        return {
            "l1_l2_nonzero": self.l1 * self.l2 != 0,
            "not_degenerate": s != self.m11,
            "quadratic_relation": 4 * self.m12 * self.m13 * self.l1 ** 2 * self.l2 ** 2
            == (s - self.m11) ** 2,
        }

    def satisfied(self) -> bool:
        return all(self.side_conditions().values())

    def to_json(self) -> dict:
        return {k: format_rational(getattr(self, k)) for k in ("m11", "m12", "m13", "l1", "l2")}


def family_parameters(m) -> FamilyParameters | None:
    """Read (m11, .., l2) off a matrix whose rows are multiples of a
    nonzero first row; None if it does not have that shape."""
    m = as_matrix(m)
    first = m[0]
    if not any(first):
        return None
    k = next(j for j in range(3) if first[j])
    l1, l2 = m[1][k] / first[k], m[2][k] / first[k]
    cand = FamilyParameters(first[0], first[1], first[2], l1, l2)
    return cand if cand.matrix() == m else None


@dataclass
class MembershipResult:
    member: bool
    family: str | None = None
    witness: MonomialMatrix | ClosureWitness | None = None
    parameters: FamilyParameters | None = None
    canonical: dict | None = None
    w: tuple | None = None
    delta: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "family": self.family,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "parameters": self.parameters.to_json() if self.parameters else None,
            "canonical": self.canonical,
            "w": [format_rational(x) for x in self.w] if self.w is not None else None,
            "delta": format_rational(self.delta) if self.delta is not None else None,
        }


def oracle_membership(n) -> MembershipResult:
    """Search the six permutations for a matrix of the rank one family in
    the orbit of N, then try the two-column family directly.

    The family conditions are homogeneous of the same weight in the
    scales, so unit scales suffice; the search is repeated with scales
    (1, 2, 3) as a consistency check.
    """
    n = as_matrix(n)
    hits = []
    for scales in ((1, 1, 1), (1, 2, 3)):
        found = None
        for sigma in PERMUTATIONS:
            c = MonomialMatrix(sigma, tuple(Fraction(s) for s in scales))
            m = _preimage(c, n)
            params = family_parameters(m)
            if params is not None and params.satisfied():
                if c.apply(m) != n:
                    raise InvariantViolation("preimage does not map back onto N")
                found = (c, params)
                break
        hits.append(found)
    if (hits[0] is None) != (hits[1] is None):
        raise InvariantViolation("family search depends on the chosen scales")
    if hits[0] is not None:
        c, params = hits[0]
        return MembershipResult(True, "rank-one", c, params, canonical_form(params))
    wit = qpl_equivalent(FAMILY_ONE, n)
    if wit is not None:
        return MembershipResult(True, "two-column", wit)
    return MembershipResult(False)


def _preimage(c: MonomialMatrix, n) -> list[list[Fraction]]:
    # N[j][k] = (e_k²/e_j)·M[σj][σk]  =>  M[σj][σk] = N[j][k]·e_j/e_k²
    m = [[Fraction(0)] * 3 for _ in range(3)]
    e, s = c.scales, c.sigma
    for j in range(3):
        for k in range(3):
            m[s[j]][s[k]] = n[j][k] * e[j] / (e[k] * e[k])
    return m


def noncy_membership(n) -> MembershipResult:
    """Whether N is QPL-equivalent to a matrix of either non-Calabi-Yau
    family. Both the Δ test and the orbit oracle run; they must agree."""
    n = as_matrix(n)
    fast = fast_membership(n)
    oracle = oracle_membership(n)
    if fast != oracle.member:
        raise InvariantViolation(f"fast path {fast} disagrees with oracle {oracle.member} on {n}")
    fac = rank_one_factor(n)
    if fac is not None:
        oracle.w = fac.w()
        oracle.delta = delta_invariant(oracle.w)
    return oracle


def canonical_form(params: FamilyParameters) -> dict | None:
    """Real canonical representative X (m11 = 0) or Q (m11·m12 > 0 and
    m11·m13 > 0) when the radicals involved share one radicand."""
    m11, m12, m13, l1, l2 = (params.m11, params.m12, params.m13, params.l1, params.l2)
    try:
        if m11 == 0:
            r = _sqrt(m12 * m13)
            rows = [[0, m12, m12], [0, l1 * m12, l1 * m12], [0, l2 * r, l2 * r]]
            name = "X"
        elif m11 * m12 > 0 and m11 * m13 > 0:
            a, b, c = _sqrt(m12 * m13), _sqrt(m11 * m13), _sqrt(m11 * m12)
            rows = [[m11 * a] * 3, [l1 * m12 * b] * 3, [l2 * m13 * c] * 3]
            name = "Q"
        else:
            return None
        rows = [[simplify(x) if isinstance(x, RadicalScalar) else Fraction(x) for x in row]
                for row in rows]
    except MixedRadicandError:
        return None
    return {"name": name, "matrix": [[scalar_to_json(x) for x in row] for row in rows]}


def _sqrt(q: Fraction) -> Scalar:
    root = rational_root(q, 2) if q >= 0 else None
    if root is not None:
        return root
    return RadicalScalar(0, 1, q)


# ---------- verdict ----------

class CyStatus(str, enum.Enum):
    CALABI_YAU = "CalabiYau"
    NOT_CALABI_YAU = "NotCalabiYau"
    NOT_APPLICABLE = "NotApplicable"


class Justification(str, enum.Enum):
    ZERO_DIFFERENTIAL = "ZeroDifferentialLemma"
    POLYNOMIAL_CASE = "PolynomialCase"
    THEOREM_B = "TheoremB"


@dataclass
class CyVerdict:
    status: CyStatus
    justification: Justification
    matrix: list[list[Fraction]] | None = None
    membership: MembershipResult | None = None
    details: dict = field(default_factory=dict)

    @property
    def witness(self):
        return self.membership.witness if self.membership else None

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "justification": self.justification.value,
            "matrix": [[format_rational(v) for v in row] for row in self.matrix]
            if self.matrix is not None else None,
            "witness": self.membership.to_json() if self.membership else None,
            "details": self.details,
        }


def diagonal_matrix(d: DifferentialSpec, alg: QuadraticAlgebraModel) -> list[list[Fraction]]:
    """M with (dx, dy, dz)ᵀ = M·(x², y², z²)ᵀ, read from the normal-form
    coefficients of x², y², z²."""
    idx = [alg.basis(2).index(w) for w in ("xx", "yy", "zz")]
    return [[row[i] for i in idx] for row in d.nf_coords(alg)]


def cy_verdict(p, d: DifferentialSpec) -> CyVerdict:
    params = p if isinstance(p, SklyaninParams) else validate(*p)
    alg = sklyanin_model(p if not isinstance(p, SklyaninParams) else params, cap=3)
    report = check_differential(d, alg)
    if not report.valid:
        raise NotADifferential("not a differential")
    tag = case_of(params)
    if tag is CaseTag.C_ZERO_DIAGONAL:
        m = diagonal_matrix(d, alg)
        mem = noncy_membership(m)
        status = CyStatus.NOT_CALABI_YAU if mem.member else CyStatus.CALABI_YAU
        return CyVerdict(status, Justification.THEOREM_B, m, mem)
    if tag is CaseTag.C_ZERO_ANTI_DIAGONAL:
        return CyVerdict(CyStatus.CALABI_YAU, Justification.POLYNOMIAL_CASE,
                         details={"zero_differential": d.is_zero()})
    if not all(v == 0 for row in d.nf_coords(alg) for v in row):
        # reached on a = b, c != 0, where d(x, y, z) = M(x², y², z²) is valid
        return CyVerdict(CyStatus.NOT_APPLICABLE, Justification.ZERO_DIFFERENTIAL,
                         details={"reason": "nonzero differential where only zero was predicted"})
    return CyVerdict(CyStatus.CALABI_YAU, Justification.ZERO_DIFFERENTIAL)
