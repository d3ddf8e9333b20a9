import json
import random
from fractions import Fraction

import pytest

from tautring.errors import UsageError
from tautring.exact import Poly, monomials_of_weighted_degree
from tautring.family import (
    FamilyPresentation,
    N1_SPACE,
    RingElement,
    WeylElement,
    assoc_constraints,
    associativity_obstructions,
    class_e,
    class_p1,
    cubic_check,
    e_squared_lambda,
    fibre_integrate,
    free_obstructions_match,
    in_graded_ideal,
    integrate_poly_diagonal,
    integrate_poly_times_e,
    kappa_n1,
    presentation,
    ring_mul,
    trace_integral,
    verify_sw_identities,
)
from tautring.phi import phi

P1 = presentation(1)
P2 = presentation(2)
B = Poly.var(N1_SPACE, "B")
C = Poly.var(N1_SPACE, "C")


def sym(n):
    return presentation(n, "constrained", "symmetric")


def d2():
    return P2.d(1, 2), P2.d(2, 1)


# -- table products -----------------------------------------------------------


def test_x_squared_for_one_class():
    assert P1.x(1) * P1.x(1) == P1.nu() + B / 2


def test_mixed_product_n2():
    d1, d2_ = d2()
    assert P2.x(1) * P2.x(2) == P2.x(1).scale(d1) + P2.x(2).scale(d2_) - d1 * d2_


def test_shifted_product_vanishes():
    d1, d2_ = d2()
    assert ((P2.x(1) - d2_) * (P2.x(2) - d1)).is_zero()


def test_mismatched_presentations():
    with pytest.raises(UsageError):
        ring_mul(P1.x(1), P2.x(1))


def test_fibre_integration_rules():
    assert fibre_integrate(P2.one()) == 0
    assert fibre_integrate(P2.x(1)) == 0
    assert fibre_integrate(P2.nu()) == 1
    assert fibre_integrate(P2.x(2) * P2.x(2)) == 1
    assert fibre_integrate(P2.x(1) * P2.x(1) * P2.x(2)) == P2.d(1, 2)


def test_ring_element_json_round_trip():
    u = class_p1(P2) * class_e(P2)
    data = json.loads(json.dumps(u.to_json()))
    assert set(data) == {"c0", "cx", "cnu"}
    assert RingElement.from_json(P2, data) == u


def test_reduce_uses_left_to_right_products():
    t1, t2 = P2.t(1), P2.t(2)
    f = t1**2 * t2 + 3 * t2**2
    x1, x2 = P2.x(1), P2.x(2)
    assert P2.reduce(f) == x1 * x1 * x2 + (x2 * x2).scale(3)


# -- derived classes ------------------------------------------------------------


def test_n1_classes():
    x = P1.x(1)
    assert class_e(P1) == (x * x).scale(3) - B
    assert class_p1(P1) == (x * x).scale(3) + 2 * B
    assert P1.mu == 2 * B


def test_n2_forms():
    d1, d2_ = d2()
    assert P2.mu == Fraction(3, 2) * (d1**2 + d2_**2)
    assert P2.b(1) == Fraction(9, 4) * d1**2 + Fraction(3, 4) * d2_**2
    assert P2.c(1) == Fraction(1, 4) * d2_ * (d2_**2 - 9 * d1**2)
    assert P2.g(1) + P2.g(2) == d1**2 + d2_**2
    assert P2.omega_from(1) == P2.omega_from(2) == P2.omega


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_symmetric_specialization(n):
    P = sym(n)
    c = Poly.var(P.space, "c")
    assert P.i1 == n * (n - 1) * c**2
    assert P.mu == -3 * (n - 3) * c**2
    for i in range(1, n + 1):
        assert P.b(i) == 3 * c**2
        assert P.g(i) == Fraction(4 - n, 2) * c**2
        assert P.c(i) == -2 * c**3
        assert P.j(i) == (n - 3) * c**3


@pytest.mark.parametrize("n", range(1, 7))
def test_euler_and_signature_integrals(n):
    for P in (presentation(n), FamilyPresentation.free(n, symbolic_mu=True)):
        assert fibre_integrate(class_e(P)) == n + 2
        assert fibre_integrate(class_p1(P)) == 3 * n


def test_free_mode_needs_mu_for_p1():
    with pytest.raises(UsageError):
        class_p1(FamilyPresentation.free(2))


# -- structure checks -------------------------------------------------------------


@pytest.mark.parametrize("P", [P1, P2, sym(3), sym(4), sym(5)], ids=repr)
def test_associativity_constrained(P):
    assert all(r.is_zero() for _, r in associativity_obstructions(P))


def test_generic_n3_is_not_associative():
    P = presentation(3)
    assert any(not r.is_zero() for _, r in associativity_obstructions(P))


def test_free_n3_obstructions_are_the_constraints():
    P = FamilyPresentation.free(3)
    res = dict(associativity_obstructions(P))
    cons = assoc_constraints(P)
    # hand-derived: x1-coefficient of (x1 x2) x3 - x1 (x2 x3)
    assert res["x1*x2*x3"].cx[0] == cons["assoc1[1,3,2]"]
    # x2-coefficient of (x1 x1) x2 - x1 (x1 x2), and its constant term
    assert res["x1*x1*x2"].cx[1] == cons["assoc2[2,1]"]
    assert res["x1*x1*x2"].c0 == cons["assoc3[1,2]"]
    assert res["x1*x1*nu"].c0 == cons["assoc4[1]"]
    assert all(ok for _, ok in free_obstructions_match(P))


def test_graded_ideal_negative_control():
    P = FamilyPresentation.free(3)
    gens = list(assoc_constraints(P).values())
    assert not in_graded_ideal(P.d(1, 2) ** 2 * P.d(2, 1) ** 2, gens)
    assert in_graded_ideal(P.d(1, 3) * gens[0], gens)


@pytest.mark.parametrize("P", [P1, P2, sym(3), sym(4)], ids=repr)
def test_cubic(P):
    for i in range(1, P.n + 1):
        ring_res, d_res = cubic_check(P, i)
        assert ring_res.is_zero()
        assert not any(d_res.values())


@pytest.mark.parametrize("P", [P1, P2, sym(3), sym(4)], ids=repr)
def test_sw_identities(P):
    assert all(not r for _, r in verify_sw_identities(P))


def test_e_squared_lambda_n2():
    diff, targets = e_squared_lambda(P2)
    d1, d2_ = d2()
    assert diff.is_scalar()
    assert targets[0] == targets[1] == diff.c0
    assert diff.c0 == Fraction(-81, 16) * (d1**2 - d2_**2) ** 2


# -- integration formulas ---------------------------------------------------------


def test_diagonal_integration_examples():
    t1, t2 = P2.t(1), P2.t(2)
    assert integrate_poly_diagonal(P2, t1**2) == 1
    assert integrate_poly_diagonal(P2, t1**2 * t2**2) == P2.d(1, 2) ** 2 + P2.d(2, 1) ** 2
    assert integrate_poly_diagonal(P2, t1**4) == P2.b(1)


def test_times_e_examples():
    assert integrate_poly_times_e(P2, P2.lift(Poly.const(P2.space, 1)), 1) == 4
    f = P2.t(1)
    assert integrate_poly_times_e(P2, f, 1) == P2.d(2, 1)
    assert integrate_poly_times_e(P2, f, 1) == fibre_integrate(P2.x(1) * class_e(P2))
    with pytest.raises(UsageError):
        integrate_poly_times_e(P2, f, 3)


def _random_t_poly(P, rng, degree=6):
    terms = []
    for d in range(0, degree + 1):
        monos = monomials_of_weighted_degree(P.t_space, d)
        for m in rng.sample(monos, min(2, len(monos))):
            terms.append((m, rng.randint(-4, 4)))
    return Poly.from_terms(P.t_space, terms)


@pytest.mark.parametrize("P", [P1, P2, sym(3), sym(4)], ids=repr)
def test_diagonal_integration_matches_reduction(P):
    rng = random.Random(P.n)
    for _ in range(10):
        f = _random_t_poly(P, rng)
        assert integrate_poly_diagonal(P, f) == fibre_integrate(P.reduce(f))


@pytest.mark.parametrize("P", [P1, P2, sym(3)], ids=repr)
def test_times_e_matches_reduction(P):
    rng = random.Random(10 + P.n)
    e = class_e(P)
    for _ in range(6):
        f = _random_t_poly(P, rng, degree=4)
        for i in range(1, P.n + 1):
            assert integrate_poly_times_e(P, f, i) == fibre_integrate(P.reduce(f) * e)


def test_trace_examples():
    assert trace_integral(P2, P2.one()) == 4
    assert trace_integral(P2, P2.x(1)) == P2.d(2, 1)
    F = FamilyPresentation.free(3)
    assert trace_integral(F, F.nu()) == F.g(1) + F.g(2) + F.g(3)


@pytest.mark.parametrize("P", [P1, P2, sym(3), sym(4)], ids=repr)
def test_trace_is_integral_against_e(P):
    rng = random.Random(99)
    e = class_e(P)
    for _ in range(10):
        f = _random_t_poly(P, rng, degree=4)
        u = P.reduce(f)
        assert trace_integral(P, u) == fibre_integrate(u * e)


# -- the n = 1 quotient ring -----------------------------------------------------


def test_kappa_n1_examples():
    assert kappa_n1(0, 0) == 0
    assert kappa_n1(2, 0) == 21 * B
    assert kappa_n1(4, 0) == 81 * C**2 + 609 * B**3


def test_kappa_n1_is_phi():
    for s in range(9):
        for a in range(s + 1):
            assert kappa_n1(a, s - a) == Poly.from_terms(N1_SPACE, phi(a, s - a).items())


def test_quotient_ring_matches_table_for_n1():
    p1, e = class_p1(P1), class_e(P1)
    for a in range(5):
        for b in range(5 - a):
            assert fibre_integrate(p1**a * e**b) == kappa_n1(a, b)


# -- the Weyl group -----------------------------------------------------------------


def test_weyl_group_laws():
    elems = WeylElement.all_elements(3)
    assert len(elems) == 48
    ident = WeylElement.identity(3)
    rng = random.Random(3)
    for _ in range(50):
        g, h, k = rng.sample(elems, 3)
        assert (g * h) * k == g * (h * k)
        assert g * g.inverse() == ident == g.inverse() * g
        assert g * ident == g
    assert len({g * h for g in elems for h in elems[:1]}) == 48


def test_weyl_element_validation():
    with pytest.raises(UsageError):
        WeylElement((1, 1))
    with pytest.raises(UsageError):
        WeylElement((1, 2), (1, 0))
