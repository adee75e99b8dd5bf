"""Differentials on a quadratic algebra generated in degree 1.

A differential is fixed by the degree-2 images of x, y, z. It is
extended to words by the graded Leibniz rule with all generators in
degree 1, so for a word g1 g2 ... gn

    d(g1...gn) = sum_i (-1)^(i-1) g1...g(i-1) d(gi) g(i+1)...gn.

The symbolic constraint system works in normal-form coordinates: the
unknowns are the coordinates of dx, dy, dz in the basis of A^2 (18
unknowns for a Sklyanin algebra). Matrix coordinates (27 unknowns
m^k_ij) are available by composing with the projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact_scalars import as_rational, format_rational
from .ncalg import ALPHABET, NcPoly, QuadraticAlgebraModel
from .params import SklyaninParams, relations, sklyanin_model

GEN_NAMES = ("x", "y", "z")


class NotADifferential(ValueError):
    pass


def _matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    out = tuple(tuple(as_rational(v) for v in row) for row in rows)
    if len(out) != 3 or any(len(r) != 3 for r in out):
        raise ValueError("expected a 3x3 matrix")
    return out


ZERO3 = ((Fraction(0),) * 3,) * 3


@dataclass(frozen=True)
class DifferentialSpec:
    """d(g) = (x, y, z)·M^g·(x, y, z)^T for g in {x, y, z}."""

    mx: tuple = ZERO3
    my: tuple = ZERO3
    mz: tuple = ZERO3

    def __post_init__(self):
        for name in ("mx", "my", "mz"):
            object.__setattr__(self, name, _matrix(getattr(self, name)))

    @property
    def matrices(self) -> tuple:
        return (self.mx, self.my, self.mz)

    @classmethod
    def zero(cls) -> "DifferentialSpec":
        return cls()

    @classmethod
    def from_diag(cls, m) -> "DifferentialSpec":
        """(dx, dy, dz)^T = M·(x², y², z²)^T."""
        m = _matrix(m)
        mats = []
        for k in range(3):
            mats.append([[m[k][i] if i == j else 0 for j in range(3)] for i in range(3)])
        return cls(*mats)

    @classmethod
    def from_images(cls, images: Sequence[NcPoly | str]) -> "DifferentialSpec":
        mats = []
        for img in images:
            poly = NcPoly.parse(img) if isinstance(img, str) else img
            if not poly.is_homogeneous(2):
                raise ValueError("generator images must be homogeneous of degree 2")
            m = [[Fraction(0)] * 3 for _ in range(3)]
            for w, c in poly.terms.items():
                m[ALPHABET.index(w[0])][ALPHABET.index(w[1])] += c
            mats.append(m)
        return cls(*mats)

    @classmethod
    def from_nf(cls, alg: QuadraticAlgebraModel, coords: Sequence[Sequence]) -> "DifferentialSpec":
        return cls.from_images([alg.lift(v, 2) for v in coords])

    def images(self) -> tuple[NcPoly, NcPoly, NcPoly]:
        out = []
        for m in self.matrices:
            out.append(NcPoly({ALPHABET[i] + ALPHABET[j]: m[i][j]
                               for i in range(3) for j in range(3)}))
        return tuple(out)

    def nf_coords(self, alg: QuadraticAlgebraModel) -> list[list[Fraction]]:
        return [alg.coords(img, 2) for img in self.images()]

    def is_zero(self) -> bool:
        return all(v == 0 for m in self.matrices for row in m for v in row)

    def __add__(self, other: "DifferentialSpec") -> "DifferentialSpec":
        return DifferentialSpec(*[[[p + q for p, q in zip(r1, r2)] for r1, r2 in zip(m1, m2)]
                                  for m1, m2 in zip(self.matrices, other.matrices)])

    def scale(self, k) -> "DifferentialSpec":
        k = as_rational(k)
        return DifferentialSpec(*[[[k * v for v in row] for row in m] for m in self.matrices])

    def to_json(self) -> dict:
        return {name: [[format_rational(v) for v in row] for row in m]
                for name, m in zip(("Mx", "My", "Mz"), self.matrices)}

    @classmethod
    def from_json(cls, data: Mapping) -> "DifferentialSpec":
        if "diag" in data:
            return cls.from_diag(data["diag"])
        return cls(data.get("Mx", ZERO3), data.get("My", ZERO3), data.get("Mz", ZERO3))


# ---------- concrete Leibniz extension ----------

def _generator_reps(d: DifferentialSpec, alg: QuadraticAlgebraModel) -> dict[str, dict[str, Fraction]]:
    # canonical representatives, so results depend only on the map on A
    return {g: alg.lift(v, 2).terms for g, v in zip(ALPHABET, d.nf_coords(alg))}


def _leibniz_free(reps: Mapping[str, Mapping[str, Fraction]], p: NcPoly) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for w, c in p.terms.items():
        for i, g in enumerate(w):
            sign = -c if i % 2 else c
            head, tail = w[:i], w[i + 1:]
            for rw, rc in reps[g].items():
                key = head + rw + tail
                out[key] = out.get(key, Fraction(0)) + sign * rc
    return out


def leibniz_coords(d: DifferentialSpec, p: NcPoly, alg: QuadraticAlgebraModel,
                   reps=None, degree: int | None = None) -> list[Fraction]:
    """Coordinates of d(p) in A^(deg+1); ``degree`` fixes deg when p = 0."""
    degs = p.degrees()
    if len(degs) > 1 or (degree is not None and degs and degs != {degree}):
        raise ValueError("leibniz_apply needs a homogeneous polynomial of the given degree")
    deg = degree if degree is not None else (degs.pop() if degs else 0)
    if deg + 1 > alg.cap:
        raise ValueError(f"degree {deg} beyond cap {alg.cap} - 1")
    reps = _generator_reps(d, alg) if reps is None else reps
    return alg.coords(NcPoly(_leibniz_free(reps, p)), deg + 1)


def leibniz_apply(d: DifferentialSpec, p: NcPoly, alg: QuadraticAlgebraModel) -> NcPoly:
    """d(p) in normal form (a combination of basis words of degree |p|+1)."""
    degs = p.degrees()
    deg = max(degs) if degs else 0
    return alg.lift(leibniz_coords(d, p, alg, degree=deg), deg + 1)


@dataclass
class ValidityReport:
    relation_residuals: list[list[Fraction]]
    square_residuals: list[list[Fraction]]
    basis3: list[str]

    @property
    def valid(self) -> bool:
        return all(v == 0 for vec in self.relation_residuals + self.square_residuals for v in vec)

    def residuals(self) -> list[Fraction]:
        """Flattened in constraint-system order: df1, df2, df3, d²x, d²y, d²z."""
        return [v for vec in self.relation_residuals for v in vec] + \
               [v for vec in self.square_residuals for v in vec]

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "basis3": self.basis3,
            "relation_residuals": [[format_rational(v) for v in r] for r in self.relation_residuals],
            "square_residuals": [[format_rational(v) for v in r] for r in self.square_residuals],
        }


def _model(p, cap=3) -> QuadraticAlgebraModel:
    if isinstance(p, QuadraticAlgebraModel):
        if p.cap < cap:
            raise ValueError(f"model cap {p.cap} below required {cap}")
        return p
    return sklyanin_model(p, cap=cap)


def check_differential(d: DifferentialSpec, p) -> ValidityReport:
    """Residuals of d(f_i) and d²(g) in A^3; valid iff all vanish."""
    alg = _model(p)
    reps = _generator_reps(d, alg)
    rel = [leibniz_coords(d, f, alg, reps, degree=2) for f in alg.relations]
    sq = [leibniz_coords(d, NcPoly(reps[g]), alg, reps, degree=2) for g in ALPHABET]
    return ValidityReport(rel, sq, alg.basis(3))


# ---------- symbolic constraint system ----------

class SymbolicPoly:
    """Polynomial in numbered indeterminates: sorted index tuples -> Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean: dict[tuple, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                key = tuple(sorted(mono))
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    @classmethod
    def var(cls, i: int, coeff=1) -> "SymbolicPoly":
        return cls({(i,): coeff})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "SymbolicPoly":
        return cls({(i,): c for i, c in enumerate(coeffs) if c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, SymbolicPoly):
            return self.terms == other.terms
        return NotImplemented

    def __add__(self, other: "SymbolicPoly") -> "SymbolicPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return SymbolicPoly(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k) -> "SymbolicPoly":
        k = as_rational(k)
        return SymbolicPoly({m: k * c for m, c in self.terms.items()})

    def __mul__(self, other: "SymbolicPoly") -> "SymbolicPoly":
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = tuple(sorted(m1 + m2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return SymbolicPoly(out)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def evaluate(self, values: Sequence) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            t = c
            for i in mono:
                t *= values[i]
            total += t
        return total

    def substitute(self, images: Sequence["SymbolicPoly"]) -> "SymbolicPoly":
        """Replace variable i by images[i]."""
        out = SymbolicPoly()
        one = SymbolicPoly({(): 1})
        for mono, c in self.terms.items():
            t = one.scale(c)
            for i in mono:
                t = t * images[i]
            out = out + t
        return out

    def linear_row(self, n: int) -> list[Fraction]:
        row = [Fraction(0)] * n
        for mono, c in self.terms.items():
            if len(mono) != 1:
                raise ValueError("not a linear form")
            row[mono[0]] = c
        return row

    def to_str(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            parts.append(format_rational(c) + "".join("*" + names[i] for i in mono))
        return " + ".join(parts)


@dataclass
class ConstraintSystem:
    """Linear constraints (coordinates of d f_i) and quadratic constraints
    (coordinates of d²g) in A^3, as polynomials in the unknowns."""

    variables: list[str]
    linear: list[SymbolicPoly]
    quadratic: list[SymbolicPoly]
    labels: list[str]
    coordinates: str
    alg: QuadraticAlgebraModel = field(repr=False)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def linear_matrix(self) -> list[list[Fraction]]:
        return [p.linear_row(self.nvars) for p in self.linear]

    def evaluate(self, values: Sequence) -> list[Fraction]:
        return [p.evaluate(values) for p in self.linear + self.quadratic]

    def unknowns_of(self, d: DifferentialSpec) -> list[Fraction]:
        """The unknown vector describing a concrete differential."""
        if self.coordinates == "nf":
            return [v for vec in d.nf_coords(self.alg) for v in vec]
        return [v for m in d.matrices for row in m for v in row]


def nf_variable_names(alg: QuadraticAlgebraModel) -> list[str]:
    return [f"d{g}[{w}]" for g in GEN_NAMES for w in alg.basis(2)]


def matrix_variable_names() -> list[str]:
    return [f"m^{g}_{i + 1}{j + 1}" for g in GEN_NAMES for i in range(3) for j in range(3)]


def build_constraints(p, coordinates: str = "nf") -> ConstraintSystem:
    """Generate the constraint system d(f_i) = 0, d²(g) = 0.

    ``p`` is SklyaninParams, a raw (a, b, c) triple, or a prepared
    QuadraticAlgebraModel with cap >= 3.
    """
    alg = _model(p)
    basis2 = alg.basis(2)
    n2, n3 = len(basis2), alg.dim(3)
    nvars = 3 * n2

    def var(k: int, beta: int) -> int:
        return k * n2 + beta

    # reduced coordinates of u·v for u, v words (cached)
    cache: dict[str, dict[int, Fraction]] = {}

    def nf3(word: str) -> dict[int, Fraction]:
        if word not in cache:
            cache[word] = alg.reduce_word(word)
        return cache[word]

    linear = []
    labels = []
    for fi, f in enumerate(alg.relations):
        cols: list[dict[int, Fraction]] = [dict() for _ in range(n3)]
        for w, c in f.terms.items():
            p_, q_ = ALPHABET.index(w[0]), ALPHABET.index(w[1])
            for beta, bw in enumerate(basis2):
                for i, e in nf3(bw + w[1]).items():
                    cols[i][var(p_, beta)] = cols[i].get(var(p_, beta), Fraction(0)) + c * e
                for i, e in nf3(w[0] + bw).items():
                    cols[i][var(q_, beta)] = cols[i].get(var(q_, beta), Fraction(0)) - c * e
        for i in range(n3):
            linear.append(SymbolicPoly({(v,): coef for v, coef in cols[i].items()}))
            labels.append(f"d f{fi + 1} @ {alg.basis(3)[i]}")

    quadratic = []
    for k in range(3):
        acc: list[dict[tuple, Fraction]] = [dict() for _ in range(n3)]
        for beta, bw in enumerate(basis2):
            i_, j_ = ALPHABET.index(bw[0]), ALPHABET.index(bw[1])
            for gamma, gw in enumerate(basis2):
                for idx, e in nf3(gw + bw[1]).items():
                    key = tuple(sorted((var(k, beta), var(i_, gamma))))
                    acc[idx][key] = acc[idx].get(key, Fraction(0)) + e
                for idx, e in nf3(bw[0] + gw).items():
                    key = tuple(sorted((var(k, beta), var(j_, gamma))))
                    acc[idx][key] = acc[idx].get(key, Fraction(0)) - e
        for i in range(n3):
            quadratic.append(SymbolicPoly(acc[i]))
            labels.append(f"d^2 {GEN_NAMES[k]} @ {alg.basis(3)[i]}")

    system = ConstraintSystem(nf_variable_names(alg), linear, quadratic, labels, "nf", alg)
    if coordinates == "nf":
        return system
    if coordinates != "matrix":
        raise ValueError("coordinates must be 'nf' or 'matrix'")
    return to_matrix_coordinates(system)


def projection_matrix(alg: QuadraticAlgebraModel) -> list[list[Fraction]]:
    """18 x 27 matrix sending matrix unknowns m^k_ij to nf unknowns."""
    n2 = alg.dim(2)
    proj = [[Fraction(0)] * 27 for _ in range(3 * n2)]
    for k in range(3):
        for i in range(3):
            for j in range(3):
                col = 9 * k + 3 * i + j
                for beta, e in alg.reduce_word(ALPHABET[i] + ALPHABET[j]).items():
                    proj[k * n2 + beta][col] = e
    return proj


def to_matrix_coordinates(system: ConstraintSystem) -> ConstraintSystem:
    proj = projection_matrix(system.alg)
    images = [SymbolicPoly.linear(row) for row in proj]
    return ConstraintSystem(
        matrix_variable_names(),
        [p.substitute(images) for p in system.linear],
        [p.substitute(images) for p in system.quadratic],
        list(system.labels),
        "matrix",
        system.alg,
    )
