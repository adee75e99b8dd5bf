"""Independent reference computations and hypothesis strategies shared by
the test modules. Nothing here goes through the incremental normal-form
tables; membership questions are answered by plain elimination on the
full word space."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from dgsklyanin.linalg import in_span, nullspace, rank
from dgsklyanin.ncalg import NcPoly, all_words, relation_space
from dgsklyanin.params import CaseTag, ParameterError, case_of, relations, validate

# ---------- strategies ----------

small_rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_rationals = small_rationals.filter(bool)


def _valid(t):
    try:
        validate(*t)
        return True
    except ParameterError:
        return False


valid_triples = st.tuples(small_rationals, small_rationals, small_rationals).filter(_valid)


def stratum_triples(tag: CaseTag):
    z = Fraction(0)
    nz = nonzero_rationals
    if tag is CaseTag.C_ZERO_ANTI_DIAGONAL:
        return nz.map(lambda a: (a, -a, z))
    if tag is CaseTag.C_ZERO_DIAGONAL:
        return nz.map(lambda a: (a, a, z))
    if tag is CaseTag.C_ZERO_DISTINCT_SQUARES:
        return st.tuples(nz, nz).filter(lambda p: p[0] ** 2 != p[1] ** 2).map(lambda p: (p[0], p[1], z))
    if tag is CaseTag.TWO_NONZERO_WITH_C:
        return st.tuples(nz, nz, st.booleans()).map(lambda p: (p[0], z, p[1]) if p[2] else (z, p[0], p[1]))
    return st.tuples(nz, nz, nz).filter(lambda p: not p[0] == p[1] == p[2])


matrices = st.lists(st.lists(small_rationals, min_size=3, max_size=3), min_size=3, max_size=3)


# ---------- plain random sampling (for the counted acceptance runs) ----------

def rand_q(rng: random.Random, lo=-7, hi=7, den=4, nonzero=False) -> Fraction:
    while True:
        q = Fraction(rng.randint(lo, hi), rng.randint(1, den))
        if q or not nonzero:
            return q


def random_valid(rng: random.Random, pred=lambda p: True):
    while True:
        t = (rand_q(rng), rand_q(rng), rand_q(rng))
        if rng.random() < 0.3:
            t = (t[0], t[1], Fraction(0))
        try:
            p = validate(*t)
        except ParameterError:
            continue
        if pred(p):
            return t


# ---------- brute force over all words ----------

def word_vector(p: NcPoly, d: int) -> list[Fraction]:
    index = {w: i for i, w in enumerate(all_words(d))}
    vec = [Fraction(0)] * len(index)
    for w, c in p.terms.items():
        if len(w) == d:
            vec[index[w]] += c
    return vec


def in_ideal(p: NcPoly, rels, d: int) -> bool:
    """Whether the degree-d part of p lies in the two-sided ideal."""
    return in_span(relation_space(rels, d), word_vector(p, d), 3 ** d)


def brute_dim(rels, d: int) -> int:
    if d < 2:
        return 3 ** d
    return 3 ** d - rank(relation_space(rels, d), 3 ** d)


def free_derivation(images, p: NcPoly) -> NcPoly:
    """Graded Leibniz extension in the free algebra, written out directly."""
    out = NcPoly()
    for w, c in p.terms.items():
        for i, g in enumerate(w):
            head, tail = NcPoly.word(w[:i]), NcPoly.word(w[i + 1:])
            out = out + (head * images["xyz".index(g)] * tail).scale(c * (-1) ** i)
    return out


def brute_valid(images, triple) -> bool:
    """d(f_i) and d(d(g)) lie in the ideal, using literal images."""
    rels = relations(triple)
    for f in rels:
        if not in_ideal(free_derivation(images, f), rels, 3):
            return False
    for img in images:
        if not in_ideal(free_derivation(images, img), rels, 3):
            return False
    return True


# ---------- transcribed linear systems (matrix coordinates m^g_ij) ----------

def mvar(g: str, i: int, j: int) -> int:
    return 9 * "xyz".index(g) + 3 * (i - 1) + (j - 1)


def _row(*pairs) -> list[Fraction]:
    row = [Fraction(0)] * 27
    for (g, i, j), c in pairs:
        row[mvar(g, i, j)] += Fraction(c)
    return row


def system_a_zero(b, c) -> list[list[Fraction]]:
    """The 15 equations equivalent to d(f_i) = 0 at (0, b, c)."""
    r = Fraction(c) / Fraction(b)
    return [
        _row((("x", 2, 3), 1)),
        _row((("y", 3, 1), 1)),
        _row((("z", 1, 2), 1)),
        _row((("x", 1, 2), 1), (("z", 2, 3), -1)),
        _row((("x", 3, 1), 1), (("y", 2, 3), -1)),
        _row((("y", 1, 2), 1), (("z", 3, 1), -1)),
        _row((("x", 2, 2), 1), (("x", 1, 3), -r), (("x", 3, 1), r)),
        _row((("x", 3, 3), 1), (("x", 2, 1), -r), (("x", 1, 2), r)),
        _row((("y", 1, 1), 1), (("y", 3, 2), -r), (("y", 2, 3), r)),
        _row((("y", 3, 3), 1), (("y", 2, 1), -r), (("y", 1, 2), r)),
        _row((("z", 1, 1), 1), (("z", 3, 2), -r), (("z", 2, 3), r)),
        _row((("z", 2, 2), 1), (("z", 1, 3), -r), (("z", 3, 1), r)),
        _row((("x", 1, 1), 1), (("z", 3, 1), -2), (("x", 3, 2), -r)),
        _row((("y", 2, 2), 1), (("x", 1, 2), -2), (("y", 1, 3), -r)),
        _row((("z", 3, 3), 1), (("y", 2, 3), -2), (("z", 2, 1), -r)),
    ]


def system_b_zero(a, c) -> list[list[Fraction]]:
    """The 15 equations equivalent to d(f_i) = 0 at (a, 0, c)."""
    r = Fraction(c) / Fraction(a)
    return [
        _row((("x", 3, 2), 1)),
        _row((("y", 1, 3), 1)),
        _row((("z", 2, 1), 1)),
        _row((("x", 1, 3), 1), (("y", 3, 2), -1)),
        _row((("x", 2, 1), 1), (("z", 3, 2), -1)),
        _row((("y", 2, 1), 1), (("z", 1, 3), -1)),
        _row((("x", 2, 2), 1), (("x", 3, 1), -r), (("x", 1, 3), r)),
        _row((("x", 3, 3), 1), (("x", 1, 2), -r), (("x", 2, 1), r)),
        _row((("y", 1, 1), 1), (("y", 2, 3), -r), (("y", 3, 2), r)),
        _row((("y", 3, 3), 1), (("y", 1, 2), -r), (("y", 2, 1), r)),
        _row((("z", 1, 1), 1), (("z", 2, 3), -r), (("z", 3, 2), r)),
        _row((("z", 2, 2), 1), (("z", 3, 1), -r), (("z", 1, 3), r)),
        _row((("x", 1, 1), 1), (("y", 2, 1), -2), (("x", 2, 3), -r)),
        _row((("y", 2, 2), 1), (("x", 2, 1), -2), (("y", 3, 1), -r)),
        _row((("z", 3, 3), 1), (("x", 1, 3), -2), (("z", 1, 2), -r)),
    ]


def system_c_zero_symmetric() -> list[list[Fraction]]:
    """a = b, c = 0: every M^g symmetric (9 equations)."""
    rows = []
    for g in "xyz":
        for i, j in ((1, 2), (1, 3), (2, 3)):
            rows.append(_row(((g, i, j), 1), ((g, j, i), -1)))
    return rows


def system_c_zero_antidiagonal() -> list[list[Fraction]]:
    """a = -b, c = 0: the full solution set (15 equations)."""
    rows = [_row(((g, i, i), 1)) for g, i in (("x", 2), ("x", 3), ("y", 1), ("y", 3), ("z", 1), ("z", 2))]
    rows += [
        _row((("x", 1, 1), 1), (("z", 3, 1), -1), (("z", 1, 3), -1)),
        _row((("x", 1, 1), 1), (("y", 1, 2), -1), (("y", 2, 1), -1)),
        _row((("y", 2, 2), 1), (("z", 2, 3), -1), (("z", 3, 2), -1)),
        _row((("y", 2, 2), 1), (("x", 1, 2), -1), (("x", 2, 1), -1)),
        _row((("z", 3, 3), 1), (("y", 2, 3), -1), (("y", 3, 2), -1)),
        _row((("z", 3, 3), 1), (("x", 3, 1), -1), (("x", 1, 3), -1)),
        _row((("x", 2, 3), 1), (("x", 3, 2), 1)),
        _row((("y", 3, 1), 1), (("y", 1, 3), 1)),
        _row((("z", 1, 2), 1), (("z", 2, 1), 1)),
    ]
    return rows


def system_c_zero_generic(a, b) -> list[list[Fraction]]:
    """a, b nonzero, a² ≠ b², c = 0: the full solution set (18 equations)."""
    r = Fraction(a) / Fraction(b)
    rows = [_row(((g, i, i), 1)) for g in "xyz" for i in (1, 2, 3)]
    for g, (i, j) in (("x", (1, 2)), ("x", (3, 1)), ("y", (1, 2)), ("y", (2, 3)), ("z", (2, 3)),
                      ("z", (3, 1)), ("x", (2, 3)), ("y", (3, 1)), ("z", (1, 2))):
        rows.append(_row(((g, i, j), 1), ((g, j, i), -r)))
    return rows


def solution_space(rows) -> list[list[Fraction]]:
    return nullspace(rows, 27)


# ---------- commutative cohomology (a = -b, c = 0) ----------

def commutative_cohomology(images, top: int) -> list[int]:
    """Cohomology dims of k[x,y,z] with the sign-twisted derivation given
    by commutative quadratic images, monomials as exponent tuples."""

    def monos(d):
        return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]

    def mul(p, q):
        out = {}
        for m1, c1 in p.items():
            for m2, c2 in q.items():
                m = tuple(u + v for u, v in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return {m: c for m, c in out.items() if c}

    def d_mono(m):
        # ordered word x^i y^j z^k, sign (-1)^position
        word = [0] * m[0] + [1] * m[1] + [2] * m[2]
        out = {}
        for pos, g in enumerate(word):
            rest = [0, 0, 0]
            for h in word[:pos] + word[pos + 1:]:
                rest[h] += 1
            for mm, c in mul({tuple(rest): 1}, images[g]).items():
                out[mm] = out.get(mm, 0) + c * (-1) ** pos
        return out

    mats = []
    for d in range(top + 1):
        src, dst = monos(d), monos(d + 1)
        idx = {m: i for i, m in enumerate(dst)}
        cols = [d_mono(m) for m in src]
        mats.append([[Fraction(col.get(m, 0)) for col in cols] for m in dst])
    dims = []
    for d in range(top + 1):
        n = len(monos(d))
        ker = n - (rank(mats[d], n) if mats[d] and mats[d][0] else 0)
        im = rank(mats[d - 1], len(monos(d - 1))) if d > 0 and mats[d - 1][0] else 0
        dims.append(ker - im)
    return dims


# ---------- monomial matrices and rank one samples ----------

def random_monomial(rng: random.Random):
    from dgsklyanin.calabi_yau import PERMUTATIONS, MonomialMatrix
    sigma = rng.choice(PERMUTATIONS)
    return MonomialMatrix(sigma, tuple(rand_q(rng, -5, 5, 3, nonzero=True) for _ in range(3)))


def random_matrix(rng: random.Random, density=0.7):
    return [[rand_q(rng, -5, 5, 3) if rng.random() < density else Fraction(0) for _ in range(3)]
            for _ in range(3)]


def random_rank_one(rng: random.Random):
    while True:
        u = [rand_q(rng, -4, 4, 3) for _ in range(3)]
        v = [rand_q(rng, -4, 4, 3) for _ in range(3)]
        if any(u) and any(v):
            return [[a * b for b in v] for a in u]


def engineered_delta_zero(rng: random.Random):
    """Rank one N = u·vᵀ with w_i = v_i·u_i² on the cone Δ(w) = 0.

    Δ = 0 solves to w3 = w1 + w2 ± 2·sqrt(w1·w2); taking w1 = k·p²,
    w2 = k·q² gives the rational root w3 = k·(p ± q)².
    """
    while True:
        k = rand_q(rng, -4, 4, 3, nonzero=True)
        p, q = rand_q(rng, -4, 4, 2), rand_q(rng, -4, 4, 2)
        w3 = k * (p + q) ** 2 if rng.random() < 0.5 else k * (p - q) ** 2
        w = [k * p * p, k * q * q, w3]
        if not any(w):
            continue
        u = [rand_q(rng, -4, 4, 3, nonzero=True) for _ in range(3)]
        v = [wi / (ui * ui) for wi, ui in zip(w, u)]
        return [[a * b for b in v] for a in u]
