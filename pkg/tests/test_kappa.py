import json
import random
from fractions import Fraction

import pytest

from tautring.errors import UsageError
from tautring.exact import Poly
from tautring.family import N1_SPACE, WeylElement, class_e, class_p1, d_space, fibre_integrate, kappa_n1, presentation
from tautring.kappa import (
    K2_SPACE,
    U_SPACE,
    cp2_pointed_relation,
    express_in_generators_n1,
    express_in_generators_n2,
    i4_span_check,
    i_basis,
    is_invariant,
    kappa,
    kappa_even,
    kappa_odd,
    reynolds_average,
    same_span,
    weyl_act,
)

SP2 = d_space(2)
D1 = Poly.var(SP2, "D_1_2")
D2 = Poly.var(SP2, "D_2_1")
S1 = D1**2 + D2**2


@pytest.mark.parametrize("n", range(1, 6))
def test_linear_classes(n):
    assert kappa_even(n, 1, 0) == 3 * n
    for i in range(1, n + 1):
        assert kappa_odd(n, 0, 1, i) == n + 2


def test_n2_examples():
    assert kappa_even(2, 0, 2) == 9 * S1
    assert kappa_even(2, 2, 0) == 63 * S1
    assert kappa_odd(2, 1, 1, 1) == 27 * S1


def test_parity_errors():
    with pytest.raises(UsageError, match="kappa_odd"):
        kappa_even(2, 1, 1)
    with pytest.raises(UsageError, match="kappa_even"):
        kappa_odd(2, 1, 2, 1)
    with pytest.raises(UsageError):
        kappa_odd(2, 1, 1, 3)


def test_kappa_expression_json_and_degree():
    expr = kappa(2, 2, 1, 2)
    data = json.loads(json.dumps(expr.to_json()))
    assert data["choice_i"] == 2 and data["a"] == 2 and data["b"] == 1
    assert Poly.from_json(data["poly"]) == expr.value
    assert expr.value.is_homogeneous(expr.expected_degree)
    assert kappa(1, 4, 0).value.is_homogeneous(kappa(1, 4, 0).expected_degree)
    assert kappa(3, 3, 2).choice_i is None


def test_even_c_powers_for_n1():
    for a in range(5):
        for b in range(5):
            p = kappa(1, a, b).value
            assert all(e % 2 == 0 for e in p.exponents_of("C"))


@pytest.mark.parametrize("n", [1, 2])
def test_ring_oracle(n):
    P = presentation(n)
    p1, e = class_p1(P), class_e(P)
    for a in range(4):
        for b in range(4 - a):
            ring = fibre_integrate(p1**a * e**b)
            for i in range(1, n + 1):
                assert kappa(n, a, b, i).value == ring


def test_n2_choice_independence():
    for s in range(1, 6):
        for b in range(1, s + 1, 2):
            assert kappa_odd(2, s - b, b, 1) == kappa_odd(2, s - b, b, 2)


def test_p1e_identity_with_mu():
    for n in range(2, 6):
        mu = presentation(n).mu
        for i in (1, n):
            assert kappa_odd(n, 1, 1, i) == Fraction(8, 3) * kappa_even(n, 0, 2) + 2 * mu


# -- Weyl action and invariants -----------------------------------------------------


def test_weyl_act_examples():
    sp3 = d_space(3)
    d12 = Poly.var(sp3, "D_1_2")
    assert weyl_act(WeylElement.theta(3, 2), d12) == -d12
    assert weyl_act(WeylElement.theta(3, 1), d12) == d12
    m = Poly.var(sp3, "D_1_3") * Poly.var(sp3, "D_2_3")
    assert weyl_act(WeylElement.transposition(3, 1, 2), m) == m


def test_weyl_act_is_a_left_action():
    sp = d_space(3)
    p = Poly.var(sp, "D_1_2") * Poly.var(sp, "D_2_3") ** 2 + Poly.var(sp, "D_3_1") ** 3
    rng = random.Random(5)
    elems = WeylElement.all_elements(3)
    for _ in range(30):
        g, h = rng.sample(elems, 2)
        assert weyl_act(g * h, p) == weyl_act(g, weyl_act(h, p))


def test_invariance_examples():
    assert is_invariant(3, presentation(3).i1)
    assert not is_invariant(2, D1)
    assert reynolds_average(2, D1**2) == (D1**2 + D2**2) / 2
    with pytest.raises(UsageError):
        reynolds_average(5, presentation(5).i1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kappa_even_invariant(n):
    for s in range(6):
        for b in range(0, s + 1, 2):
            assert is_invariant(n, kappa_even(n, s - b, b))


def test_kappa_odd_invariance_fixing_i():
    n = 3
    for a, b in [(0, 1), (1, 1), (2, 1), (0, 3)]:
        p = kappa_odd(n, a, b, 1)
        for k in range(1, n + 1):
            assert weyl_act(WeylElement.theta(n, k), p) == p
        assert weyl_act(WeylElement.transposition(n, 2, 3), p) == p


def test_kappa_odd_n3_symmetric_choice_independence():
    # at D_ij = c every choice index gives the same class
    c_space = presentation(3, "constrained", "symmetric").space
    c = Poly.var(c_space, "c")
    binding = {name: c for name in d_space(3).names}
    for a, b in [(1, 1), (2, 1), (0, 3), (1, 3)]:
        vals = {kappa_odd(3, a, b, i).substitute(binding) for i in (1, 2, 3)}
        assert len(vals) == 1


def test_i4_span():
    dim, basis = i4_span_check(3)
    assert dim == 2 and same_span(basis, list(i_basis(3)))
    dim, basis = i4_span_check(2)
    assert dim == 1 and same_span(basis, [S1])
    assert i4_span_check(2, degree=2)[0] == 0
    assert i4_span_check(4)[0] == 2
    with pytest.raises(UsageError):
        i4_span_check(5)


# -- generators ------------------------------------------------------------------


def test_express_n1():
    u = Poly.var(U_SPACE, "u")
    v = Poly.var(U_SPACE, "v")
    assert express_in_generators_n1(kappa_n1(3, 0)) == Fraction(13, 49) * u**2
    assert express_in_generators_n1(kappa_n1(2, 0)) == u
    assert express_in_generators_n1(kappa_n1(4, 0)) == v
    # 117 B^2 -> 13/49 u^2 is the same statement written in B
    assert express_in_generators_n1(117 * Poly.var(N1_SPACE, "B") ** 2) == Fraction(13, 49) * u**2
    with pytest.raises(UsageError):
        express_in_generators_n1(Poly.var(N1_SPACE, "C"))


def test_express_n2():
    k2 = Poly.var(K2_SPACE, "k_p1_2")
    k3 = Poly.var(K2_SPACE, "k_p1_3")
    assert express_in_generators_n2(63 * S1) == k2
    assert express_in_generators_n2(kappa_even(2, 0, 2)) == k2 / 7
    assert express_in_generators_n2(kappa_even(2, 3, 0)) == k3
    s2 = D1**2 * D2**2
    assert express_in_generators_n2(s2) == Fraction(5, 4) * (k2 / 63) ** 2 - Fraction(2, 1053) * k3
    with pytest.raises(UsageError):
        express_in_generators_n2(D1**2)


def test_cp2_pointed_relation():
    assert cp2_pointed_relation() == (
        Fraction(4, 7),
        Fraction(-5, 49),
        Fraction(-17, 1029),
        Fraction(1, 3),
    )


def test_kappa_e2_in_invariants():
    for n in range(2, 6):
        i1, i2 = i_basis(n)
        assert kappa_even(n, 0, 2) / 3 == i1 * Fraction(n + 1, n - 1) - i2 * Fraction(1, n - 1)
