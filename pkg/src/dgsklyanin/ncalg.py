"""Noncommutative polynomials in x, y, z and normal forms in a quadratic
quotient algebra, computed degree by degree by exact elimination.

Words are plain strings over ``"xyz"``; the empty string is the unit.
Within a degree, words are ordered lexicographically with x < y < z, and
the basis of each graded piece is the lex-least complement of the
relation subspace (the "normal words").
"""

from __future__ import annotations

from fractions import Fraction
import re
from itertools import product
from typing import Iterable, Mapping, Sequence

from .exact_scalars import as_rational, format_rational
from .linalg import rref

ALPHABET = "xyz"

_TERM = re.compile(r"(?P<sign>[+-])(?:(?P<num>\d+(?:/\d+)?)\*?)?(?P<mono>(?:[xyz](?:\^\d+)?)*)")
_POWER = re.compile(r"([xyz])(?:\^(\d+))?")


def all_words(d: int) -> list[str]:
    """All 3**d words of length d in increasing lex order."""
    return ["".join(t) for t in product(ALPHABET, repeat=d)]


class NcPoly:
    """Element of the free algebra k<x,y,z>: a finite map word -> Fraction.

    Zero coefficients are never stored. Instances are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[str, object] | None = None):
        clean: dict[str, Fraction] = {}
        for word, coeff in (terms or {}).items():
            if any(ch not in ALPHABET for ch in word):
                raise ValueError(f"bad word {word!r}")
            c = as_rational(coeff)
            if c:
                clean[word] = clean.get(word, Fraction(0)) + c
                if not clean[word]:
                    del clean[word]
        self.terms = clean

    @classmethod
    def word(cls, w: str, coeff=1) -> "NcPoly":
        return cls({w: coeff})

    @classmethod
    def parse(cls, text: str) -> "NcPoly":
        """Parse sums such as ``"yz - zy + 2*x^2"``; ``"1"`` is the unit."""
        terms: dict[str, Fraction] = {}
        body = text.replace(" ", "")
        if body and body[0] not in "+-":
            body = "+" + body
        pos = 0
        for m in _TERM.finditer(body):
            if m.start() != pos:
                raise ValueError(f"cannot parse {text!r}")
            pos = m.end()
            sign, num, mono = m.group("sign"), m.group("num"), m.group("mono")
            coeff = as_rational(num) if num else Fraction(1)
            if sign == "-":
                coeff = -coeff
            word = ""
            for letter, power in _POWER.findall(mono or ""):
                word += letter * (int(power) if power else 1)
            if not num and not word:
                raise ValueError(f"empty term in {text!r}")
            terms[word] = terms.get(word, Fraction(0)) + coeff
        if pos != len(body):
            raise ValueError(f"cannot parse {text!r}")
        return cls(terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "NcPoly") -> "NcPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return NcPoly(out)

    def __neg__(self):
        return NcPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def scale(self, k) -> "NcPoly":
        k = as_rational(k)
        return NcPoly({w: k * c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NcPoly):
            return mul_poly(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        return len(degs) == 1 and (d is None or d in degs)

    def homogeneous_part(self, d: int) -> "NcPoly":
        return NcPoly({w: c for w, c in self.terms.items() if len(w) == d})

    def to_json(self) -> dict[str, str]:
        return {w: format_rational(c) for w, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "NcPoly":
        return cls({w: as_rational(c) for w, c in data.items()})

    def __repr__(self):
        if not self.terms:
            return "NcPoly(0)"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            parts.append(f"{format_rational(c)}*{w or '1'}")
        return "NcPoly(" + " + ".join(parts) + ")"


def mul_poly(p: NcPoly, q: NcPoly) -> NcPoly:
    """Concatenation product in the free algebra."""
    out: dict[str, Fraction] = {}
    for u, a in p.terms.items():
        for v, b in q.terms.items():
            w = u + v
            out[w] = out.get(w, Fraction(0)) + a * b
    return NcPoly(out)


X, Y, Z = NcPoly.word("x"), NcPoly.word("y"), NcPoly.word("z")
GENERATORS = (X, Y, Z)


class QuadraticAlgebraModel:
    """k<x,y,z>/(f1, f2, f3) for homogeneous quadratic relations, with
    bases and reduction tables cached eagerly up to degree ``cap``.

    Degree d is built from degree d-1: every degree-d word is congruent to
    (normal word of degree d-1)·letter, so only those candidates and the
    images of w·f (w a normal word of degree d-2) need eliminating.
    """

    def __init__(self, relations: Sequence[NcPoly], cap: int = 4):
        rels = [r if isinstance(r, NcPoly) else NcPoly(r) for r in relations]
        for r in rels:
            if not r.is_homogeneous(2) or not r:
                raise ValueError("relations must be nonzero and homogeneous of degree 2")
        self.relations = tuple(rels)
        self.cap = cap
        self._bases: list[list[str]] = []
        self._index: list[dict[str, int]] = []
        self._table: list[dict[str, dict[int, Fraction]]] = []
        for d in range(cap + 1):
            self._build_degree(d)

    # -- construction --------------------------------------------------
    def _build_degree(self, d: int) -> None:
        if d < 2:
            basis = all_words(d)
            self._bases.append(basis)
            self._index.append({w: i for i, w in enumerate(basis)})
            self._table.append({w: {i: Fraction(1)} for i, w in enumerate(basis)})
            return
        prev_basis = self._bases[d - 1]
        candidates = sorted(b + ch for b in prev_basis for ch in ALPHABET)
        cidx = {w: i for i, w in enumerate(candidates)}
        ncand = len(candidates)

        def lift_prefix(word: str) -> dict[int, Fraction]:
            # word of length d -> coordinates over candidates
            head, last = word[:-1], word[-1]
            vec: dict[int, Fraction] = {}
            for bi, c in self._table[d - 1][head].items():
                j = cidx[prev_basis[bi] + last]
                vec[j] = vec.get(j, Fraction(0)) + c
            return vec

        rows = []
        for w in self._bases[d - 2]:
            for f in self.relations:
                vec = [Fraction(0)] * ncand
                for rw, rc in f.terms.items():
                    for j, c in lift_prefix(w + rw).items():
                        vec[j] += rc * c
                if any(vec):
                    rows.append(vec)
        # pivots on the greatest words leave the lex-least words as basis
        red, pivots = rref(rows, ncand, col_order=range(ncand - 1, -1, -1))
        pivset = set(pivots)
        basis_pos = [j for j in range(ncand) if j not in pivset]
        basis = [candidates[j] for j in basis_pos]
        bindex = {candidates[j]: i for i, j in enumerate(basis_pos)}
        cand_nf: dict[int, dict[int, Fraction]] = {}
        for j in basis_pos:
            cand_nf[j] = {bindex[candidates[j]]: Fraction(1)}
        for row, p in zip(red, pivots):
            cand_nf[p] = {bindex[candidates[j]]: -row[j] for j in basis_pos if row[j] != 0}
        table: dict[str, dict[int, Fraction]] = {}
        for word in all_words(d):
            acc: dict[int, Fraction] = {}
            for j, c in lift_prefix(word).items():
                for bi, e in cand_nf[j].items():
                    acc[bi] = acc.get(bi, Fraction(0)) + c * e
            table[word] = {k: v for k, v in acc.items() if v != 0}
        self._bases.append(basis)
        self._index.append(bindex)
        self._table.append(table)

    # -- queries -------------------------------------------------------
    def _check(self, d: int) -> None:
        if d < 0 or d > self.cap:
            raise ValueError(f"degree {d} outside cached range 0..{self.cap}")

    def basis(self, d: int) -> list[str]:
        self._check(d)
        return list(self._bases[d])

    def dim(self, d: int) -> int:
        self._check(d)
        return len(self._bases[d])

    def reduce_word(self, word: str) -> dict[int, Fraction]:
        """Sparse basis coordinates of a single word."""
        self._check(len(word))
        return dict(self._table[len(word)][word])

    def reducer_matrix(self, d: int) -> list[list[Fraction]]:
        """dim(A^d) x 3^d matrix sending word coordinates to basis
        coordinates (words in lex order)."""
        self._check(d)
        words = all_words(d)
        mat = [[Fraction(0)] * len(words) for _ in self._bases[d]]
        for j, w in enumerate(words):
            for i, c in self._table[d][w].items():
                mat[i][j] = c
        return mat

    def coords(self, p: NcPoly, d: int) -> list[Fraction]:
        """Dense coordinates of the degree-d part of p in the basis of A^d."""
        self._check(d)
        out = [Fraction(0)] * len(self._bases[d])
        table = self._table[d]
        for w, c in p.terms.items():
            if len(w) == d:
                for i, e in table[w].items():
                    out[i] += c * e
        return out

    def lift(self, vec: Sequence, d: int) -> NcPoly:
        """Representative polynomial of a coordinate vector in degree d."""
        basis = self._bases[d]
        return NcPoly({basis[i]: c for i, c in enumerate(vec) if c})

    def reduce(self, p: NcPoly) -> NcPoly:
        """Canonical representative (combination of normal words)."""
        out = NcPoly()
        for d in sorted(p.degrees()):
            out = out + self.lift(self.coords(p, d), d)
        return out


def normal_form(p: NcPoly, alg: QuadraticAlgebraModel) -> dict[int, list[Fraction]]:
    """Image of p in the direct sum of the A^d, one coordinate vector per
    degree present in p."""
    return {d: alg.coords(p, d) for d in sorted(p.degrees())}


def degree_basis(alg: QuadraticAlgebraModel, d: int) -> tuple[list[str], list[list[Fraction]]]:
    return alg.basis(d), alg.reducer_matrix(d)


def relation_space(relations: Iterable[NcPoly], d: int) -> list[list[Fraction]]:
    """Spanning vectors (over all 3**d words) of the degree-d part of the
    two-sided ideal: every u·f·v with |u| + |v| = d - 2."""
    words = all_words(d)
    index = {w: i for i, w in enumerate(words)}
    rows = []
    for f in relations:
        for left in range(d - 1):
            for u in all_words(left):
                for v in all_words(d - 2 - left):
                    vec = [Fraction(0)] * len(words)
                    for w, c in f.terms.items():
                        vec[index[u + w + v]] += c
                    rows.append(vec)
    return rows
