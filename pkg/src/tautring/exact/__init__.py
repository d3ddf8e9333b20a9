"""Exact rationals, sparse weighted polynomials and exact linear algebra."""
from .linalg import bareiss_echelon, kernel_basis, primitive, rank, rref
from .poly import (
    Poly,
    Rational,
    VarSpace,
    monomials_of_weighted_degree,
    parse_poly,
    render_rational,
    symmetric_reduce,
    to_rational,
)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not isinstance(q, Poly) or p.space != q.space:
        from ..errors import UsageError

        raise UsageError("poly_mul needs two polynomials in the same variable space")
    return p * q


def poly_substitute(p: Poly, bindings, target: VarSpace | None = None) -> Poly:
    return p.substitute(bindings, target)


__all__ = [
    "Poly",
    "Rational",
    "VarSpace",
    "bareiss_echelon",
    "kernel_basis",
    "monomials_of_weighted_degree",
    "parse_poly",
    "poly_mul",
    "poly_substitute",
    "primitive",
    "rank",
    "render_rational",
    "rref",
    "symmetric_reduce",
    "to_rational",
]
