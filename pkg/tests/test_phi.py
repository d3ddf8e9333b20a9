import threading
from fractions import Fraction

import pytest

from tautring.exact import Poly
from tautring.phi import PHI_SPACE, PhiTable, phi, phi_numeric, phi_oracle_residue

x = Poly.var(PHI_SPACE, "x")
y = Poly.var(PHI_SPACE, "y")


@pytest.mark.parametrize(
    "a,b,expected",
    [
        (0, 0, Poly.zero(PHI_SPACE)),
        (0, 1, Poly.const(PHI_SPACE, 3)),
        (0, 2, 3 * x),
        (1, 1, 12 * x),
        (2, 0, 21 * x),
        (3, 0, 117 * x**2),
        (4, 0, 609 * x**3 + 81 * y**2),
    ],
)
def test_golden_values(a, b, expected):
    assert phi(a, b) == expected


# frozen from the residue oracle
@pytest.mark.parametrize(
    "a,b,text",
    [
        (5, 0, "3093*x^4 + 1539*x*y^2"),
        (2, 2, "96*x^3 + 81*y^2"),
        (0, 4, "15*x^3 + 81*y^2"),
        (1, 3, "42*x^3 + 81*y^2"),
        (6, 0, "15561*x^5 + 17982*x^2*y^2"),
    ],
)
def test_oracle_goldens(a, b, text):
    assert phi(a, b).render() == text


def test_recursion_matches_residue_oracle():
    for s in range(13):
        for a in range(s + 1):
            assert phi(a, s - a) == phi_oracle_residue(a, s - a), (a, s - a)


def test_recurrences():
    disc = 27 * y**2 - 4 * x**3
    for a in range(6):
        for b in range(6):
            assert phi(a + 1, b) == phi(a, b + 1) + 3 * x * phi(a, b)
            assert phi(a, b + 3) == 3 * x * phi(a, b + 2) + disc * phi(a, b)


def test_grading_and_parity():
    for s in range(1, 11):
        for a in range(s + 1):
            p = phi(a, s - a)
            assert p.is_homogeneous(2 * (s - 1))
            assert all(e % 2 == 0 for e in p.exponents_of("y"))
            assert p.has_integer_coefficients()


def test_numeric_evaluation():
    assert phi_numeric(0, 2, 7, -6) == 21
    assert phi_numeric(4, 0, 0, 1) == 81
    assert phi_numeric(3, 0, Fraction(1, 3), 5) == 13


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        phi(-1, 0)
    with pytest.raises(ValueError):
        phi_oracle_residue(0, -2)


def test_table_is_shareable_between_threads():
    table = PhiTable()
    results = {}

    def work(k):
        results[k] = table.get(k % 4, 8 - k % 4)

    threads = [threading.Thread(target=work, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for k, p in results.items():
        assert p == phi(k % 4, 8 - k % 4)
