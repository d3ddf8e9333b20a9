"""Linear relations among the kappa_{p1^a e^b} classes.

Two sources: the kernel of the phi-matrix, and the vanishing of the
positive-degree parts of the fibrewise L-genus (the families signature
theorem for definite fibres).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import UsageError
from .exact import Poly, VarSpace, kernel_basis, monomials_of_weighted_degree, primitive, symmetric_reduce
from .phi import PHI_SPACE, phi

L_SPACE = VarSpace.of(("p1", 4), ("p2", 8))
_ROOT_SPACE = VarSpace.of(("u1", 4), ("u2", 4))

# Integer rows printed for the signature relations, d = 2..9.
SIGNATURE_TABLE = {
    2: (1, -7),
    3: (2, -13),
    4: (3, -22, 19),
    5: (10, -83, 127),
    6: (1382, -12842, 27635, -8718),
    7: (420, -4322, 11880, -7978),
    8: (10851, -122508, 407726, -423040, 68435),
    9: (438670, -5391213, 20996751, -29509334, 11098737),
}

# Further printed relations, d = 6..12 (coefficients in column order).
EXTRA_RELATIONS = [
    (6, (0, 4, -41, 100)),
    (8, (0, 36, -461, 1843, -2300)),
    (9, (0, 24, -322, 1379, -1900)),
    (10, (0, 108, -1579, 7902, -15531, 9100)),
    (11, (0, 360, -5606, 30923, -71311, 57100)),
    (12, (0, 0, 144, -2552, 16629, -47400, 50000)),
    (12, (0, 6000, -98012, 577796, -1461667, 1338700, 0)),
]


def column_label(d: int, j: int) -> str:
    a, b = d - 2 * j, 2 * j
    parts = []
    if a:
        parts.append("p1" if a == 1 else f"p1^{a}")
    if b:
        parts.append(f"e^{b}")
    return " ".join(parts) or "1"


def labels(d: int) -> list[str]:
    return [column_label(d, j) for j in range(d // 2 + 1)]


@dataclass(frozen=True)
class RelationVector:
    """sum_j coeffs[j] * kappa_{p1^(d-2j) e^(2j)} = 0."""

    d: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.d // 2 + 1:
            raise UsageError(f"degree {self.d} relations have {self.d // 2 + 1} coefficients")

    @property
    def labels(self) -> list[str]:
        return labels(self.d)

    def phi_residual(self) -> Poly:
        return phi_combination(self.d, self.coeffs)

    def is_phi_relation(self) -> bool:
        return not self.phi_residual()

    def to_json(self) -> dict:
        return {"d": self.d, "coeffs": list(self.coeffs), "labels": self.labels}

    def render(self) -> str:
        out = []
        for c, lab in zip(self.coeffs, self.labels):
            if c:
                sign = "-" if c < 0 else "+"
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                out.append(f"{sign} {mag}k[{lab}]")
        if not out:
            return "0 = 0"
        text = " ".join(out)
        text = text[2:] if text.startswith("+ ") else "-" + text[2:]
        return text + " = 0"


def phi_combination(d: int, coeffs) -> Poly:
    if len(coeffs) != d // 2 + 1:
        raise UsageError("coefficient count does not match the degree")
    total = Poly.zero(PHI_SPACE)
    for j, c in enumerate(coeffs):
        if c:
            total = total + phi(d - 2 * j, 2 * j) * c
    return total


def phi_matrix(d: int) -> tuple[list[tuple[int, ...]], list[list[Fraction]]]:
    """Monomials (rows) and the matrix whose column j expands phi_{d-2j, 2j}."""
    monos = monomials_of_weighted_degree(PHI_SPACE, 2 * (d - 1), parity={"y": 0})
    cols = [phi(d - 2 * j, 2 * j) for j in range(d // 2 + 1)]
    return monos, [[col.coefficient(m) for col in cols] for m in monos]


def phi_relation_kernel(d: int) -> list[RelationVector]:
    """Reduced echelon basis of all relations sum c_j phi_{d-2j,2j} = 0."""
    if d < 1:
        raise UsageError("degree must be at least 1")
    monos, matrix = phi_matrix(d)
    ncols = d // 2 + 1
    return [RelationVector(d, v) for v in kernel_basis(matrix, ncols=ncols)]


def relation_count_lower_bound(d: int) -> int:
    if d < 1:
        raise UsageError("degree must be at least 1")
    return d // 2 - (d - 1) // 3


def in_phi_kernel(d: int, coeffs) -> bool:
    return not phi_combination(d, coeffs)


# -- Bernoulli numbers and the L-genus -------------------------------------


class BernoulliCache:
    """B_0, B_1, ... with B_1 = -1/2, from sum_{k<=m} C(m+1, k) B_k = 0."""

    def __init__(self):
        self._values = [Fraction(1)]
        self._lock = threading.Lock()

    def __call__(self, m: int) -> Fraction:
        if m < 0:
            raise UsageError("Bernoulli index must be nonnegative")
        if m >= len(self._values):
            with self._lock:
                vals = self._values
                for r in range(len(vals), m + 1):
                    s = sum((comb(r + 1, k) * vals[k] for k in range(r)), Fraction(0))
                    vals.append(-s / (r + 1))
        return self._values[m]

    def __len__(self):
        return len(self._values)


bernoulli = BernoulliCache()


def l_series_coefficient(m: int) -> Fraction:
    """Coefficient of u^m in sqrt(u)/tanh(sqrt(u))."""
    return Fraction(2 ** (2 * m)) * bernoulli(2 * m) / factorial(2 * m)


def l_polynomial(k: int, series_order: int | None = None) -> Poly:
    """The degree-4k part of L with p3 = p4 = ... = 0, in p1 and p2.

    The two formal roots u1, u2 each contribute the series truncated at
    `series_order` (default k); the product is truncated after degree k.
    """
    if k < 1:
        raise UsageError("k must be at least 1")
    order = k if series_order is None else series_order
    if order < k:
        raise UsageError("series order must be at least k")
    q = [l_series_coefficient(m) for m in range(order + 1)]
    u1 = Poly.var(_ROOT_SPACE, "u1")
    u2 = Poly.var(_ROOT_SPACE, "u2")
    s1 = Poly.zero(_ROOT_SPACE)
    s2 = Poly.zero(_ROOT_SPACE)
    for m, c in enumerate(q):
        s1 = s1 + u1**m * c
        s2 = s2 + u2**m * c
    prod = s1 * s2
    part = Poly.from_terms(_ROOT_SPACE, [(e, c) for e, c in prod.items() if e[0] + e[1] == k])
    return symmetric_reduce(part, "u1", "u2", Poly.var(L_SPACE, "p1"), Poly.var(L_SPACE, "p2"))


def signature_relation(d: int) -> RelationVector:
    """The degree-d component of the fibre integral of L, as a relation."""
    if d < 2:
        raise UsageError("signature relations start at d = 2")
    poly = l_polynomial(d)
    ia, ib = L_SPACE.index("p1"), L_SPACE.index("p2")
    coeffs = [Fraction(0)] * (d // 2 + 1)
    for exps, c in poly.items():
        coeffs[exps[ib]] += c
        assert exps[ia] + 2 * exps[ib] == d
    return RelationVector(d, primitive(coeffs))


def verify_tables(max_degree: int = 12) -> list[tuple[str, bool, str]]:
    """(row id, passed, detail) for every printed table row and consistency check."""
    report = []
    for d, row in SIGNATURE_TABLE.items():
        got = signature_relation(d).coeffs
        # the printed d = 7 row carries an overall factor 2
        want = primitive(row)
        note = "" if want == row else f", printed row is {row[0] // want[0]}x primitive"
        report.append((f"signature-row-d{d}", got == want, f"computed {got}{note}"))
    for n, (d, row) in enumerate(EXTRA_RELATIONS, start=1):
        res = phi_combination(d, row)
        report.append((f"extra-row-{n}-d{d}", not res, f"residual {res.render()}"))
    for d in range(2, max_degree + 1):
        rel = signature_relation(d)
        res = rel.phi_residual()
        report.append((f"signature-in-kernel-d{d}", not res, f"residual {res.render()}"))
    return report
