import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgsklyanin.calabi_yau import (FAMILY_ONE, PERMUTATIONS, ClosureWitness, CyStatus,
                                   Justification, MonomialMatrix, cy_verdict, delta_invariant,
                                   fast_membership, noncy_membership, oracle_membership,
                                   qpl_equivalent, rank_one_factor)
from dgsklyanin.dg import DifferentialSpec, NotADifferential
from dgsklyanin.exact_scalars import RadicalScalar
from dgsklyanin.linalg import rank
from oracles import (engineered_delta_zero, matrices, nonzero_rationals, random_matrix,
                     random_monomial, random_rank_one)

M1 = [[1, 1, 0], [1, 1, 0], [1, 1, 0]]
X = [[0, 1, 1], [0, 1, 1], [0, 1, 1]]
Q = [[1, 1, 1], [1, 1, 1], [2, 2, 2]]
ZERO = [[0] * 3 for _ in range(3)]
IDENTITY = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

monomials = st.builds(MonomialMatrix, st.sampled_from(PERMUTATIONS),
                      st.tuples(nonzero_rationals, nonzero_rationals, nonzero_rationals))


def F(m):
    return [[Fraction(v) for v in row] for row in m]


def test_monomial_action_matches_matrix_formula():
    c = MonomialMatrix((1, 0, 2), (Fraction(2), Fraction(-1), Fraction(3)))
    cm, cinv, sq = c.to_matrix(), c.inverse_matrix(), c.squared_matrix()
    prod = [[sum(cinv[i][k] * cm[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert prod == IDENTITY
    m = F(Q)
    lhs = [[sum(cinv[i][k] * m[k][l] * sq[l][j] for k in range(3) for l in range(3))
            for j in range(3)] for i in range(3)]
    assert c.apply(m) == lhs
    assert MonomialMatrix.from_json(c.to_json()) == c


def test_qpl_examples():
    wit = qpl_equivalent(M1, M1)
    assert wit.sigma == (0, 1, 2) and wit.scales == (1, 1, 1)
    swap = MonomialMatrix((1, 0, 2), (Fraction(1),) * 3)
    n = swap.apply(F(M1))
    found = qpl_equivalent(M1, n)
    assert found is not None and found.apply(F(M1)) == n
    assert qpl_equivalent(M1, IDENTITY) is None


def test_rational_witness():
    # diagonal entries scale as e_j²/e_j = e_j
    n = [[2, 0, 0], [0, 1, 0], [0, 0, 1]]
    wit = qpl_equivalent(IDENTITY, n)
    assert isinstance(wit, MonomialMatrix) and wit.is_rational
    assert wit.apply(F(IDENTITY)) == F(n)


@pytest.mark.parametrize("r", [2, 3, Fraction(5, 7)])
def test_square_root_witness(r):
    # entry (1,2) scales by e_2²/e_1 with e_1 pinned to 1 by entry (1,1)
    m = [[1, 1, 0], [0, 0, 0], [0, 0, 0]]
    n = [[1, r, 0], [0, 0, 0], [0, 0, 0]]
    wit = qpl_equivalent(m, n)
    assert isinstance(wit, MonomialMatrix) and not wit.is_rational
    assert any(isinstance(e, RadicalScalar) for e in wit.scales)
    assert wit.apply(F(m)) == F(n)


def test_cube_root_gives_closure_witness():
    # e_2 = e_1² and e_1³ = 2
    m = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    n = [[0, 2, 0], [1, 0, 0], [0, 0, 0]]
    wit = qpl_equivalent(m, n)
    assert isinstance(wit, ClosureWitness)
    assert wit.to_json()["exists_over_closure"] is True
    assert 3 in wit.degrees


def test_zero_pattern_must_match():
    e11 = [[1, 0, 0], [0, 0, 0], [0, 0, 0]]
    assert qpl_equivalent(e11, [[0, 0, 0], [0, 0, 0], [0, 0, 1]]) is not None
    assert qpl_equivalent(e11, [[0, 1, 0], [0, 0, 0], [0, 0, 0]]) is None


@settings(max_examples=60)
@given(matrices)
def test_qpl_reflexive(m):
    assert qpl_equivalent(m, m) is not None


@settings(max_examples=60)
@given(matrices, monomials)
def test_qpl_symmetric_and_round_trip(m, c):
    n = c.apply(F(m))
    fwd = qpl_equivalent(m, n)
    assert fwd is not None
    if isinstance(fwd, MonomialMatrix):
        assert fwd.apply(F(m)) == n
    assert qpl_equivalent(n, m) is not None


def test_rank_one_factor_examples():
    f = rank_one_factor(M1)
    assert f.u == (1, 1, 1) and f.v == (1, 1, 0)
    f = rank_one_factor(Q)
    assert f.u == (1, 1, 2) and f.v == (1, 1, 1)
    assert rank_one_factor(IDENTITY) is None
    assert rank_one_factor(ZERO) is None


@settings(max_examples=80)
@given(matrices)
def test_rank_one_factor_normalized(m):
    f = rank_one_factor(m)
    assert (f is None) == (rank(F(m)) != 1)
    if f is not None:
        assert f.product() == F(m)
        assert next(x for x in f.u if x) == 1


def test_delta_arithmetic():
    assert delta_invariant((1, 1, 0)) == 0
    assert delta_invariant((1, 2, 3)) == (1 - 2 - 3) ** 2 - 24


@pytest.mark.parametrize("m", [M1, X, Q])
def test_noncy_fixtures(m):
    res = noncy_membership(m)
    assert res.member
    assert res.delta == 0


@pytest.mark.parametrize("m", [ZERO, IDENTITY, [[1, 0, 0], [0, 0, 0], [0, 0, 0]]])
def test_cy_fixtures(m):
    assert not noncy_membership(m).member


def test_fast_path_agrees_with_oracle_on_samples():
    rng = random.Random(11)
    for _ in range(150):
        n = random_rank_one(rng)
        assert fast_membership(n) == oracle_membership(n).member
    for _ in range(60):
        n = engineered_delta_zero(rng)
        assert fast_membership(n) and oracle_membership(n).member


@settings(max_examples=60)
@given(matrices, monomials)
def test_membership_invariant_under_action(m, c):
    assert noncy_membership(m).member == noncy_membership(c.apply(F(m))).member


@settings(max_examples=40)
@given(nonzero_rationals, nonzero_rationals)
def test_scaling_keeps_membership(lam, mu):
    rng = random.Random(int(lam * 1000 + mu * 7))
    n = engineered_delta_zero(rng)
    assert noncy_membership([[lam * v for v in row] for row in n]).member


def test_witness_rechecks():
    rng = random.Random(5)
    for _ in range(40):
        n = engineered_delta_zero(rng)
        res = noncy_membership(n)
        assert res.member
        if res.family == "rank-one":
            assert res.parameters.satisfied()
            assert res.witness.apply(res.parameters.matrix()) == F(n)
        else:
            assert qpl_equivalent(FAMILY_ONE, n) is not None


def test_canonical_forms_of_x_and_q():
    assert noncy_membership(X).canonical["name"] == "X"
    assert noncy_membership(Q).canonical["name"] == "Q"


# ---------- verdicts ----------

def test_verdict_examples():
    v = cy_verdict((1, 2, 3), DifferentialSpec.zero())
    assert (v.status, v.justification) == (CyStatus.CALABI_YAU, Justification.ZERO_DIFFERENTIAL)
    d = DifferentialSpec.from_images(["x^2 + 2xy", "yx + 2y^2", "zx + 2zy"])
    v = cy_verdict((1, -1, 0), d)
    assert (v.status, v.justification) == (CyStatus.CALABI_YAU, Justification.POLYNOMIAL_CASE)
    v = cy_verdict((1, 1, 0), DifferentialSpec.from_diag(M1))
    assert (v.status, v.justification) == (CyStatus.NOT_CALABI_YAU, Justification.THEOREM_B)
    assert v.witness is not None
    assert v.matrix == F(M1)


@pytest.mark.parametrize("m,status", [(M1, "NotCalabiYau"), (X, "NotCalabiYau"), (Q, "NotCalabiYau"),
                                      (ZERO, "CalabiYau"), (IDENTITY, "CalabiYau")])
def test_verdict_on_diagonal_case(m, status):
    v = cy_verdict((1, 1, 0), DifferentialSpec.from_diag(m))
    assert v.status.value == status
    assert v.to_json()["status"] == status


def test_verdict_rejects_invalid_differential():
    with pytest.raises(NotADifferential):
        cy_verdict((2, 3, 0), DifferentialSpec.from_images(["x^2", "0", "0"]))


def test_verdict_scale_invariance():
    for lam in (2, Fraction(-1, 3)):
        v = cy_verdict((lam, lam, 0), DifferentialSpec.from_diag(Q))
        assert v.status is CyStatus.NOT_CALABI_YAU


def test_random_diagonal_verdicts_are_consistent():
    rng = random.Random(3)
    for _ in range(30):
        m = random_matrix(rng)
        v = cy_verdict((1, 1, 0), DifferentialSpec.from_diag(m))
        assert (v.status is CyStatus.NOT_CALABI_YAU) == fast_membership(m)


def test_verdict_on_a_equals_b_with_c_nonzero():
    v = cy_verdict((1, 1, Fraction(1, 2)), DifferentialSpec.from_images(["x^2", "0", "0"]))
    assert v.status is CyStatus.NOT_APPLICABLE
    v = cy_verdict((1, 1, Fraction(1, 2)), DifferentialSpec.zero())
    assert v.status is CyStatus.CALABI_YAU
