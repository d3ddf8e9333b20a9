"""The verification suite: one named check per acceptance criterion.

Each check returns a :class:`Check`; on failure `residual` holds the first
offending polynomial (rendered) so a report is self-explaining.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exact import Poly, monomials_of_weighted_degree, primitive
from .family import (
    FamilyPresentation,
    N1_SPACE,
    associativity_obstructions,
    class_e,
    class_p1,
    cubic_check,
    d_space,
    e_squared_lambda,
    fibre_integrate,
    free_obstructions_match,
    kappa_n1,
    presentation,
    trace_integral,
    verify_sw_identities,
)
from .kappa import (
    cp2_pointed_relation,
    express_in_generators_n1,
    i4_span_check,
    i_basis,
    is_invariant,
    kappa_even,
    kappa_odd,
    same_span,
)
from .phi import PHI_SPACE, phi, phi_oracle_residue
from .relations import (
    EXTRA_RELATIONS,
    SIGNATURE_TABLE,
    phi_combination,
    phi_relation_kernel,
    relation_count_lower_bound,
    signature_relation,
)


@dataclass
class Check:
    id: str
    criterion: int | None
    passed: bool
    detail: str = ""
    residual: str | None = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "criterion": self.criterion,
            "passed": self.passed,
            "detail": self.detail,
            "residual": self.residual,
        }


class _Tally:
    """Collects named sub-results; remembers the first failure."""

    def __init__(self):
        self.total = 0
        self.failed: list[str] = []
        self.residual: str | None = None

    def expect(self, name: str, ok: bool, residual=None):
        self.total += 1
        if not ok:
            self.failed.append(name)
            if self.residual is None and residual is not None:
                self.residual = residual.render() if hasattr(residual, "render") else str(residual)

    def zero(self, name: str, p):
        self.expect(name, not p, p)

    def check(self, cid: str, criterion: int | None) -> Check:
        passed = not self.failed
        detail = f"{self.total - len(self.failed)}/{self.total} pass"
        if self.failed:
            detail += "; failed: " + ", ".join(self.failed[:5])
        return Check(cid, criterion, passed, detail, None if passed else self.residual)


def _n1(p: Poly) -> Poly:
    """phi(x, y) read as a polynomial in B, C."""
    return Poly.from_terms(N1_SPACE, p.items())


def check_phi_golden(max_degree: int) -> Check:
    t = _Tally()
    x = Poly.var(PHI_SPACE, "x")
    y = Poly.var(PHI_SPACE, "y")
    want = {
        (0, 0): Poly.zero(PHI_SPACE),
        (0, 1): Poly.const(PHI_SPACE, 3),
        (0, 2): 3 * x,
        (2, 0): 21 * x,
        (3, 0): 117 * x**2,
        (4, 0): 609 * x**3 + 81 * y**2,
    }
    for (a, b), w in want.items():
        t.zero(f"phi({a},{b})", phi(a, b) - w)
    return t.check("phi-golden-values", 1)


def check_phi_three_way(max_degree: int) -> Check:
    t = _Tally()
    for s in range(max_degree + 1):
        for a in range(s + 1):
            b = s - a
            p = phi(a, b)
            t.zero(f"residue({a},{b})", p - phi_oracle_residue(a, b))
            t.zero(f"quotient({a},{b})", _n1(p) - kappa_n1(a, b))
    return t.check("phi-three-way-agreement", 2)


def check_signature_table(max_degree: int) -> Check:
    t = _Tally()
    for d, row in SIGNATURE_TABLE.items():
        got = signature_relation(d).coeffs
        t.expect(f"d{d}", got == primitive(row), f"computed {got}, printed {row}")
    return t.check("signature-table-d2..d9", 3)


def check_extra_relations(max_degree: int) -> Check:
    t = _Tally()
    for d, row in EXTRA_RELATIONS:
        t.zero(f"d{d}:{row}", phi_combination(d, row))
    return t.check("extra-relations-d6..d12", 4)


def check_kernel_bound(max_degree: int) -> Check:
    t = _Tally()
    for d in range(1, 21):
        k = len(phi_relation_kernel(d))
        bound = relation_count_lower_bound(d)
        t.expect(f"d{d}", k >= bound, f"d={d}: kernel {k} < bound {bound}")
    return t.check("kernel-lower-bound-d1..d20", 5)


def check_signature_in_kernel(max_degree: int) -> Check:
    t = _Tally()
    for d in range(2, max(max_degree, 2) + 1):
        t.zero(f"d{d}", signature_relation(d).phi_residual())
    return t.check("signature-in-phi-kernel", 6)


def _d2():
    sp = d_space(2)
    return sp, Poly.var(sp, "D_1_2"), Poly.var(sp, "D_2_1")


def check_n2_closed_forms(max_degree: int) -> Check:
    t = _Tally()
    sp, d1, d2 = _d2()
    pres = presentation(2)
    t.zero("kappa_p1^2", kappa_even(2, 2, 0) - 63 * (d1**2 + d2**2))
    t.zero("B1", pres.b(1) - (Fraction(9, 4) * d1**2 + Fraction(3, 4) * d2**2))
    t.zero("C1", pres.c(1) - Fraction(1, 4) * d2 * (d2**2 - 9 * d1**2))
    k3 = kappa_even(2, 3, 0)
    t.zero("kappa_p1^3=117(B1^2+B2^2)", k3 - 117 * (pres.b(1) ** 2 + pres.b(2) ** 2))
    corrected = Fraction(5265, 8) * (d1**4 + d2**4) + Fraction(3159, 4) * d1**2 * d2**2
    t.zero("kappa_p1^3 corrected form", k3 - corrected)
    printed = Fraction(1053, 8) * (5 * (d1**2 + d2**2) - 4 * d1**2 * d2**2)
    t.expect("printed form is inhomogeneous", not printed.is_homogeneous(), printed)
    return t.check("n2-closed-forms", 7)


def check_ring_oracle(max_degree: int) -> Check:
    t = _Tally()
    for n in (1, 2):
        pres = presentation(n)
        p1, e = class_p1(pres), class_e(pres)
        p1_pows = [pres.one()]
        e_pows = [pres.one()]
        for _ in range(6):
            p1_pows.append(p1_pows[-1] * p1)
            e_pows.append(e_pows[-1] * e)
        for s in range(7):
            for a in range(s + 1):
                b = s - a
                ring = fibre_integrate(p1_pows[a] * e_pows[b])
                if b % 2 == 0:
                    t.zero(f"n{n}:even({a},{b})", kappa_even(n, a, b) - ring)
                else:
                    for i in range(1, n + 1):
                        t.zero(f"n{n}:odd({a},{b},{i})", kappa_odd(n, a, b, i) - ring)
    return t.check("ring-oracle-equivalence", 8)


def _random_element(pres: FamilyPresentation, rng: random.Random):
    monos = [m for d in (0, 2, 4) for m in monomials_of_weighted_degree(pres.space, d)]

    def coeff():
        picks = rng.sample(monos, min(3, len(monos)))
        return Poly.from_terms(pres.space, [(m, rng.randint(-5, 5)) for m in picks])

    return pres.element(coeff(), [coeff() for _ in range(pres.n)], coeff())


def _printed_bici_b(pres: FamilyPresentation, i: int) -> Poly:
    """B_i with the I_2 coefficient -1/(n-1) exactly as displayed."""
    n = pres.n
    s = sum((pres.d(i, j) ** 2 for j in pres.others(i)), pres.zero_poly)
    return s * Fraction(3, 2) + pres.i1 * Fraction(-(n - 5), 2 * n * (n - 1)) + pres.i2 * Fraction(-1, n - 1)


def check_structural(max_degree: int) -> Check:
    t = _Tally()
    for n in range(1, 7):
        for pres in (presentation(n), FamilyPresentation.free(n, symbolic_mu=True)):
            t.zero(f"{pres.label} n{n}: int e", fibre_integrate(class_e(pres)) - (n + 2))
            t.zero(f"{pres.label} n{n}: int p1", fibre_integrate(class_p1(pres)) - 3 * n)
    for n in range(2, 6):
        pres = presentation(n)
        sum_b = sum((pres.b(j) for j in range(1, n + 1)), pres.zero_poly)
        t.zero(f"n{n}: kappa_e2", kappa_even(n, 0, 2) - 3 * sum_b)
        for i in range(1, n + 1):
            t.zero(
                f"n{n}: kappa_p1e[{i}]",
                kappa_odd(n, 1, 1, i) - Fraction(8, 3) * kappa_even(n, 0, 2) - 2 * pres.mu,
            )
    diff, targets = e_squared_lambda(presentation(2))
    t.expect("n2: e^2 - sum e(i)^2 is a base class", diff.is_scalar(), diff)
    for i, lam in enumerate(targets, start=1):
        t.zero(f"n2: lambda[{i}]", diff.c0 - lam)
    for pres in (presentation(1), presentation(2), presentation(3, "constrained", "symmetric"),
                 presentation(4, "constrained", "symmetric")):
        for name, res in verify_sw_identities(pres):
            t.zero(f"{pres!r}: {name}", res)
    rng = random.Random(20240)
    for pres in (presentation(1), presentation(2), presentation(3, "constrained", "symmetric"),
                 presentation(4, "constrained", "symmetric")):
        e = class_e(pres)
        for k in range(50):
            u = _random_element(pres, rng)
            t.zero(f"{pres!r}: trace #{k}", trace_integral(pres, u) - fibre_integrate(u * e))
    return t.check("structural-identities", 9)


def check_bici_erratum(max_degree: int) -> Check:
    """The bk-consistent B_i makes the p1 e identity exact; the displayed I_2
    coefficient does not (n >= 3; for n = 2 the two agree since I_2 = 0)."""
    t = _Tally()
    for n in range(2, 6):
        pres = presentation(n)
        for i in range(1, n + 1):
            # kappa_{p1 e} - 8/3 kappa_{e^2} - 2 mu reduces to 4 B_i - 6 sum_j D_ij^2 - 2 mu
            adopted = 4 * pres.b(i) - 6 * sum((pres.d(i, j) ** 2 for j in pres.others(i)), pres.zero_poly)
            t.zero(f"adopted n{n} i{i}", adopted - 2 * pres.mu)
            printed = 4 * _printed_bici_b(pres, i) - 6 * sum(
                (pres.d(i, j) ** 2 for j in pres.others(i)), pres.zero_poly
            )
            if n >= 3:
                t.expect(f"printed fails n{n} i{i}", printed - 2 * pres.mu != 0)
            else:
                t.zero(f"printed agrees n{n} i{i}", printed - 2 * pres.mu)
    return t.check("erratum-bici-I2-coefficient", None)


def check_invariance(max_degree: int) -> Check:
    t = _Tally()
    for n in range(1, 5):
        for s in range(6):
            for b in range(0, s + 1, 2):
                t.expect(f"n{n}: even({s - b},{b})", is_invariant(n, kappa_even(n, s - b, b)))
    for s in range(1, 6):
        for b in range(1, s + 1, 2):
            a = s - b
            t.zero(f"odd({a},{b}) i-independent", kappa_odd(2, a, b, 1) - kappa_odd(2, a, b, 2))
    dim, basis = i4_span_check(3)
    t.expect("i4 dimension", dim == 2, f"dimension {dim}")
    t.expect("i4 span", same_span(basis, list(i_basis(3))))
    return t.check("invariance-suite", 10)


def check_cp2(max_degree: int) -> Check:
    t = _Tally()
    got = cp2_pointed_relation()
    want = (Fraction(4, 7), Fraction(-5, 49), Fraction(-17, 1029), Fraction(1, 3))
    t.expect("coefficients", got == want, f"computed {tuple(str(c) for c in got)}")
    u = express_in_generators_n1(kappa_n1(3, 0))
    t.zero("kappa_p1^3 = 13/49 u^2", u - Fraction(13, 49) * Poly.var(u.space, "u") ** 2)
    return t.check("cp2-pointed-relation", 11)


def check_associativity(max_degree: int) -> Check:
    t = _Tally()
    for n in (1, 2):
        pres = presentation(n)
        for tid, r in associativity_obstructions(pres):
            t.expect(f"n{n}: {tid}", r.is_zero(), r)
        for i in range(1, n + 1):
            ring_res, d_res = cubic_check(pres, i)
            t.expect(f"n{n}: cubic x{i}", ring_res.is_zero(), ring_res)
            for j, p in d_res.items():
                t.zero(f"n{n}: cubic D_{j}_{i}", p)
    for name, ok in free_obstructions_match(FamilyPresentation.free(3)):
        t.expect(f"free n3: {name}", ok)
    return t.check("associativity", 12)


CHECKS: dict[str, Callable[[int], Check]] = {
    "phi-golden-values": check_phi_golden,
    "phi-three-way-agreement": check_phi_three_way,
    "signature-table-d2..d9": check_signature_table,
    "extra-relations-d6..d12": check_extra_relations,
    "kernel-lower-bound-d1..d20": check_kernel_bound,
    "signature-in-phi-kernel": check_signature_in_kernel,
    "n2-closed-forms": check_n2_closed_forms,
    "ring-oracle-equivalence": check_ring_oracle,
    "structural-identities": check_structural,
    "erratum-bici-I2-coefficient": check_bici_erratum,
    "invariance-suite": check_invariance,
    "cp2-pointed-relation": check_cp2,
    "associativity": check_associativity,
}


def run_check(check_id: str, max_degree: int = 12) -> Check:
    try:
        fn = CHECKS[check_id]
    except KeyError:
        from .errors import UsageError

        raise UsageError(f"unknown check {check_id!r}; known: {', '.join(sorted(CHECKS))}") from None
    return fn(max_degree)


def verify_all(max_degree: int = 12) -> list[Check]:
    """Every check, in check-id order."""
    return [run_check(cid, max_degree) for cid in sorted(CHECKS)]


def report_json(checks: list[Check]) -> dict:
    return {"checks": [c.to_json() for c in checks], "failed": sum(not c.passed for c in checks)}
