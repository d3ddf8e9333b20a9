"""Tautological classes kappa_{p1^a e^b} as polynomials in the D_ij.

Also: the W_n action on D-polynomials, invariance checks, and the rewriting
of the n = 1 and n = 2 answers in terms of kappa generators.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import UsageError
from .exact import (
    Poly,
    VarSpace,
    kernel_basis,
    monomials_of_weighted_degree,
    primitive,
    rank,
    rref,
    symmetric_reduce,
)
from .family import (
    N1_SPACE,
    WeylElement,
    assert_even_in,
    d_name,
    d_pairs,
    d_space,
    n1_mul,
    n1_p1,
    presentation,
)
from .phi import phi

U_SPACE = VarSpace.of(("u", 2), ("v", 6))
K2_SPACE = VarSpace.of(("k_p1_2", 4), ("k_p1_3", 8))


@dataclass(frozen=True)
class KappaExpression:
    n: int
    a: int
    b: int
    choice_i: int | None
    value: Poly

    @property
    def expected_degree(self) -> int:
        # n = 1 uses B, C at weights 2, 3 (half the cohomological degree)
        if self.n == 1:
            return 2 * (self.a + self.b - 1)
        return 4 * (self.a + self.b) - 4

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "choice_i": self.choice_i,
            "poly": self.value.to_json(),
        }


def _check(n: int, a: int, b: int):
    if n < 1:
        raise UsageError("n must be at least 1")
    if a < 0 or b < 0:
        raise UsageError("exponents must be nonnegative")


def _phi_at(pres, a: int, b: int, i: int) -> Poly:
    return phi(a, b).substitute({"x": pres.b(i), "y": pres.c(i)}, target=pres.space)


def _finish(n: int, p: Poly) -> Poly:
    if n == 1:
        assert_even_in(p, "C")
    return p


@lru_cache(maxsize=None)
def kappa_even(n: int, a: int, b: int) -> Poly:
    """kappa_{p1^a e^b} for even b: sum_i phi_{a,b}(B_i, C_i)."""
    _check(n, a, b)
    if b % 2:
        raise UsageError("kappa_even needs an even power of e; use kappa_odd for odd b")
    pres = presentation(n)
    total = pres.zero_poly
    for i in range(1, n + 1):
        total = total + _phi_at(pres, a, b, i)
    return _finish(n, total)


@lru_cache(maxsize=None)
def kappa_odd(n: int, a: int, b: int, i: int = 1) -> Poly:
    """kappa_{p1^a e^b} for odd b, with the correction term at choice index i."""
    _check(n, a, b)
    if b % 2 == 0:
        raise UsageError("kappa_odd needs an odd power of e; use kappa_even for even b")
    if not isinstance(i, int) or not 1 <= i <= n:
        raise UsageError(f"choice index {i!r} out of range 1..{n}")
    pres = presentation(n)
    total = pres.zero_poly
    for j in range(1, n + 1):
        total = total + _phi_at(pres, a, b, j)
    for j in pres.others(i):
        d2 = 3 * pres.d_power(i, j, 2)
        bj = pres.b(j)
        total = total - 2 * (d2 + 2 * bj) ** a * (d2 - bj) ** (b - 1)
    return _finish(n, total)


def kappa(n: int, a: int, b: int, i: int | None = None) -> KappaExpression:
    if b % 2:
        ci = 1 if i is None else i
        return KappaExpression(n, a, b, ci, kappa_odd(n, a, b, ci))
    return KappaExpression(n, a, b, None, kappa_even(n, a, b))


# -- W_n action -------------------------------------------------------------


def _n_of_space(space: VarSpace) -> int:
    if space == N1_SPACE:
        return 1
    m = len(space)
    n = 2
    while n * (n - 1) < m:
        n += 1
    if space != d_space(n):
        raise UsageError("expected a polynomial in the D_ij (or in B, C for n = 1)")
    return n


def weyl_act(g: WeylElement, p: Poly) -> Poly:
    """Apply g with g(D_ij) = eps_j D_{sigma(i) sigma(j)}; for n = 1, C -> eps C."""
    space = p.space
    n = _n_of_space(space)
    if g.n != n:
        raise UsageError(f"Weyl element of rank {g.n} acting on n = {n} polynomial")
    if n == 1:
        eps = g.signs[0]
        return p.relabel([0, 1], [1, eps])
    targets = []
    signs = []
    for i, j in d_pairs(n):
        targets.append(space.index(d_name(g.perm[i - 1], g.perm[j - 1])))
        signs.append(g.signs[j - 1])
    return p.relabel(targets, signs)


def is_invariant(n: int, p: Poly) -> bool:
    """Invariance under adjacent transpositions and the sign flips theta_k."""
    return all(weyl_act(g, p) == p for g in WeylElement.generators(n))


def reynolds_average(n: int, p: Poly) -> Poly:
    if n > 4:
        raise UsageError("group averaging is only supported for n <= 4")
    elems = WeylElement.all_elements(n)
    total = Poly.zero(p.space)
    for g in elems:
        total = total + weyl_act(g, p)
    return total * Fraction(1, len(elems))


def i_basis(n: int) -> tuple[Poly, Poly]:
    pres = presentation(n)
    return pres.i1, pres.i2


def i4_span_check(n: int, degree: int = 4) -> tuple[int, list[Poly]]:
    """Dimension and a basis of the W_n-invariant D-polynomials of a given weight."""
    if not 2 <= n <= 4:
        raise UsageError("i4_span_check supports 2 <= n <= 4")
    space = d_space(n)
    monos = monomials_of_weighted_degree(space, degree)
    images = [reynolds_average(n, Poly.monomial(space, m)) for m in monos]
    rows = [[img.coefficient(m) for m in monos] for img in images]
    red, _ = rref(rows) if rows else ([], [])
    basis = [Poly.from_terms(space, list(zip(monos, primitive(row)))) for row in red]
    return len(basis), basis


def same_span(ps: list[Poly], qs: list[Poly]) -> bool:
    """Whether two lists of polynomials span the same Q-subspace."""
    monos = sorted({e for p in ps + qs for e, _ in p.items()})

    def r(lst):
        return rank([[p.coefficient(m) for m in monos] for p in lst]) if lst else 0

    return r(ps) == r(qs) == r(ps + qs)


# -- generator rewriting ----------------------------------------------------


def express_in_generators_n1(p: Poly) -> Poly:
    """Rewrite a polynomial in B, C^2 through u = kappa_{p1^2}, v = kappa_{p1^4}."""
    if p.space != N1_SPACE:
        raise UsageError("expected a polynomial in B, C")
    if any(e % 2 for e in p.exponents_of("C")):
        raise UsageError("odd power of C: not expressible in kappa_{p1^2}, kappa_{p1^4}")
    u = Poly.var(U_SPACE, "u")
    v = Poly.var(U_SPACE, "v")
    b_val = u * Fraction(1, 21)
    c2_val = v * Fraction(1, 81) - b_val**3 * Fraction(203, 27)
    ib, ic = N1_SPACE.index("B"), N1_SPACE.index("C")
    total = Poly.zero(U_SPACE)
    for exps, c in p.items():
        total = total + b_val ** exps[ib] * c2_val ** (exps[ic] // 2) * c
    return total


def express_in_generators_n2(p: Poly) -> Poly:
    """Rewrite a symmetric polynomial in D_12^2, D_21^2 through kappa_{p1^2}, kappa_{p1^3}."""
    space = d_space(2)
    if p.space != space:
        raise UsageError("expected a polynomial in D_1_2, D_2_1")
    if not is_invariant(2, p):
        raise UsageError("polynomial is not W_2-invariant")
    sq = VarSpace.of(("a", 4), ("b", 4))
    halved = Poly.from_terms(sq, [((e[0] // 2, e[1] // 2), c) for e, c in p.items()])
    k2 = Poly.var(K2_SPACE, "k_p1_2")
    k3 = Poly.var(K2_SPACE, "k_p1_3")
    s1 = k2 * Fraction(1, 63)
    s2 = s1 * s1 * Fraction(5, 4) - k3 * Fraction(2, 1053)
    return symmetric_reduce(halved, "a", "b", s1, s2)


def cp2_pointed_relation() -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Solve p1^3 = alpha k p1^2 + beta k^2 p1 + gamma1 k^3 + gamma2 kappa_{p1^4}.

    Here k = kappa_{p1^2} = 21 B and everything lives in
    Q[B, C][x]/(x^3 - B x - C).  The relation is unique.
    """
    p1 = n1_p1()
    one = [Poly.const(N1_SPACE, 1)]
    p1_2 = n1_mul(p1, p1)
    p1_3 = n1_mul(p1_2, p1)
    k = 21 * Poly.var(N1_SPACE, "B")
    k4 = kappa_even(1, 4, 0)
    basis = [
        [c * k for c in p1_2],
        [c * k**2 for c in n1_mul(p1, one)],
        [k**3] + [Poly.zero(N1_SPACE)] * 2,
        [k4] + [Poly.zero(N1_SPACE)] * 2,
    ]
    target = p1_3
    keys = sorted(
        {(slot, e) for vec in basis + [target] for slot, comp in enumerate(vec) for e, _ in comp.items()}
    )
    # columns: the four unknowns and the target; a kernel vector with last entry -1 solves it
    matrix = [
        [vec[slot].coefficient(e) for vec in basis] + [target[slot].coefficient(e)] for slot, e in keys
    ]
    ker = kernel_basis(matrix)
    if len(ker) != 1 or ker[0][-1] == 0:
        raise AssertionError("pointed relation is not unique")
    v = ker[0]
    scale = Fraction(-1, v[-1])
    return tuple(Fraction(c) * scale for c in v[:-1])
