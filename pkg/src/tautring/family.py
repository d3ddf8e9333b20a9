"""The fibrewise cohomology ring H*(E; Q) of a framed definite family.

H*(E; Q) is free over the base with basis 1, x_1..x_n, nu.  Products are
given by the table

    x_i x_j = D_ij x_i + D_ji x_j - D_ij D_ji          (i != j)
    x_i^2   = nu + sum_{j != i} D_ij x_j + G_i
    x_i nu  = G_i x_i - sum_{j != i} D_ij D_ji x_j + J_i
    nu^2    = sum_j J_j x_j + omega

and fibre integration reads off the nu coefficient.  In *free* mode D, G,
J and omega are independent variables.  In *constrained* mode only the
D_ij are variables and everything else is derived from them; for n = 1
the base variables are B and C with x^3 = B x + C.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from .errors import UsageError
from .exact import Poly, VarSpace

N1_SPACE = VarSpace.of(("B", 2), ("C", 3))


def d_name(i: int, j: int) -> str:
    return f"D_{i}_{j}"


def d_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


@lru_cache(maxsize=None)
def d_space(n: int) -> VarSpace:
    return VarSpace.of(*((d_name(i, j), 2) for i, j in d_pairs(n)))


SYMMETRIC_SPACE = VarSpace.of(("c", 2))


class FamilyPresentation:
    """Coefficient data of the product table for a given n and mode.

    Indices are 1-based throughout.  Derived classes are computed lazily
    and cached on the instance; the instance is otherwise immutable.
    """

    def __init__(
        self,
        n: int,
        mode: str,
        space: VarSpace,
        *,
        d_values: Mapping[tuple[int, int], Poly] | None = None,
        symbolic_mu: bool = False,
        label: str = "",
    ):
        if n < 1:
            raise UsageError("n must be at least 1")
        if mode not in ("free", "constrained"):
            raise UsageError(f"unknown mode {mode!r}")
        self.n = n
        self.mode = mode
        self.space = space
        self.label = label or mode
        self._d = dict(d_values or {})
        self._symbolic_mu = symbolic_mu
        self._mono_cache: dict[tuple[int, ...], RingElement] = {}
        self._dpow_cache: dict[tuple[int, int, int], Poly] = {}

    # -- constructors ---------------------------------------------------

    @classmethod
    def constrained(cls, n: int, specialize=None) -> "FamilyPresentation":
        """Constrained presentation.

        `specialize` is None (free D_ij variables), ``"symmetric"`` (every
        D_ij equal to one variable c) or a mapping (i, j) -> Poly giving
        the D_ij in some other coefficient space.
        """
        if n == 1:
            if specialize is not None:
                raise UsageError("n = 1 has no D classes to specialize")
            return cls(1, "constrained", N1_SPACE, label="constrained")
        if specialize is None:
            space = d_space(n)
            values = {(i, j): Poly.var(space, d_name(i, j)) for i, j in d_pairs(n)}
            label = "constrained"
        elif specialize == "symmetric":
            space = SYMMETRIC_SPACE
            c = Poly.var(space, "c")
            values = {ij: c for ij in d_pairs(n)}
            label = "constrained-symmetric"
        else:
            values = dict(specialize)
            if set(values) != set(d_pairs(n)):
                raise UsageError("specialization must give every D_ij, i != j")
            spaces = {p.space for p in values.values()}
            if len(spaces) != 1:
                raise UsageError("specialized D_ij must share one variable space")
            space = spaces.pop()
            label = "constrained-specialized"
        return cls(n, "constrained", space, d_values=values, label=label)

    @classmethod
    def free(cls, n: int, symbolic_mu: bool = False) -> "FamilyPresentation":
        """D_ij, G_i, J_i, omega all independent (weights 2, 4, 6, 8)."""
        pairs = [(d_name(i, j), 2) for i, j in d_pairs(n)]
        pairs += [(f"G_{i}", 4) for i in range(1, n + 1)]
        pairs += [(f"J_{i}", 6) for i in range(1, n + 1)]
        pairs += [("omega", 8)]
        if symbolic_mu:
            pairs += [("mu", 4)]
        space = VarSpace.of(*pairs)
        values = {(i, j): Poly.var(space, d_name(i, j)) for i, j in d_pairs(n)}
        return cls(n, "free", space, d_values=values, symbolic_mu=symbolic_mu, label="free")

    # -- basic pieces ---------------------------------------------------

    def poly(self, value) -> Poly:
        if isinstance(value, Poly):
            if value.space != self.space:
                raise UsageError("coefficient lives in a different variable space")
            return value
        return Poly.const(self.space, value)

    @cached_property
    def zero_poly(self) -> Poly:
        return Poly.zero(self.space)

    def _check_index(self, i: int):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise UsageError(f"index {i!r} out of range 1..{self.n}")

    def d(self, i: int, j: int) -> Poly:
        self._check_index(i)
        self._check_index(j)
        if i == j:
            raise UsageError("D_ii is not defined")
        return self._d[(i, j)]

    def d_power(self, i: int, j: int, e: int) -> Poly:
        key = (i, j, e)
        p = self._dpow_cache.get(key)
        if p is None:
            p = Poly.const(self.space, 1) if e == 0 else self.d_power(i, j, e - 1) * self.d(i, j)
            self._dpow_cache[key] = p
        return p

    def others(self, i: int) -> list[int]:
        return [j for j in range(1, self.n + 1) if j != i]

    # -- invariant sums -------------------------------------------------

    @cached_property
    def i1(self) -> Poly:
        return sum((self.d(i, j) ** 2 for i, j in d_pairs(self.n)), self.zero_poly)

    @cached_property
    def i2(self) -> Poly:
        total = self.zero_poly
        for i, j, k in itertools.permutations(range(1, self.n + 1), 3):
            total = total + self.d(i, k) * self.d(j, k)
        return total

    # -- structure classes ----------------------------------------------

    @cached_property
    def mu(self) -> Poly | None:
        """p_1 = 3 sum x_i^2 + mu; None in free mode without a mu symbol."""
        if self.mode == "free":
            return Poly.var(self.space, "mu") if self._symbolic_mu else None
        n = self.n
        if n == 1:
            return 2 * Poly.var(self.space, "B")
        return self.i1 * Fraction(-(n - 5), n * (n - 1)) + self.i2 * Fraction(-2, n * (n - 1))

    @cached_property
    def _b(self) -> dict[int, Poly]:
        n = self.n
        if self.mode == "free":
            return {
                i: 2 * self.g(i) + sum((self.d(i, j) ** 2 for j in self.others(i)), self.zero_poly)
                for i in range(1, n + 1)
            }
        if n == 1:
            return {1: Poly.var(self.space, "B")}
        half_mu = self.mu * Fraction(1, 2)
        return {
            i: sum((self.d(i, j) ** 2 for j in self.others(i)), self.zero_poly) * Fraction(3, 2)
            + half_mu
            for i in range(1, n + 1)
        }

    @cached_property
    def _c(self) -> dict[int, Poly]:
        n = self.n
        if self.mode == "free":
            return {
                i: self.j(i)
                - sum((self.d(i, j) ** 2 * self.d(j, i) for j in self.others(i)), self.zero_poly)
                for i in range(1, n + 1)
            }
        if n == 1:
            return {1: Poly.var(self.space, "C")}
        out = {}
        for i in range(1, n + 1):
            b = self.b(i)
            s = sum((self.d_power(j, i, 3) - b * self.d(j, i) for j in self.others(i)), self.zero_poly)
            out[i] = s * Fraction(1, n - 1)
        return out

    @cached_property
    def _g(self) -> dict[int, Poly]:
        if self.mode == "free":
            return {i: Poly.var(self.space, f"G_{i}") for i in range(1, self.n + 1)}
        return {
            i: (self.b(i) - sum((self.d(i, j) ** 2 for j in self.others(i)), self.zero_poly))
            * Fraction(1, 2)
            for i in range(1, self.n + 1)
        }

    @cached_property
    def _j(self) -> dict[int, Poly]:
        if self.mode == "free":
            return {i: Poly.var(self.space, f"J_{i}") for i in range(1, self.n + 1)}
        return {
            i: self.c(i)
            + sum((self.d(i, j) ** 2 * self.d(j, i) for j in self.others(i)), self.zero_poly)
            for i in range(1, self.n + 1)
        }

    def omega_from(self, i: int) -> Poly:
        """omega as forced by the nu^2 x_i associativity equation at index i."""
        g = self.g(i)
        total = g * g
        for j in self.others(i):
            dij, dji = self.d(i, j), self.d(j, i)
            total = total + (dij * dji) ** 2 - self.j(j) * dij
        return total

    @cached_property
    def omega(self) -> Poly:
        if self.mode == "free":
            return Poly.var(self.space, "omega")
        total = sum((self.omega_from(i) for i in range(1, self.n + 1)), self.zero_poly)
        return total * Fraction(1, self.n)

    def b(self, i: int) -> Poly:
        self._check_index(i)
        return self._b[i]

    def c(self, i: int) -> Poly:
        self._check_index(i)
        return self._c[i]

    def g(self, i: int) -> Poly:
        self._check_index(i)
        return self._g[i]

    def j(self, i: int) -> Poly:
        self._check_index(i)
        return self._j[i]

    # -- ring elements --------------------------------------------------

    def element(self, c0=0, cx: Sequence = (), cnu=0) -> "RingElement":
        cx = list(cx) + [0] * (self.n - len(cx))
        if len(cx) != self.n:
            raise UsageError("too many x coefficients")
        return RingElement(self, self.poly(c0), tuple(self.poly(v) for v in cx), self.poly(cnu))

    def one(self) -> "RingElement":
        return self.element(c0=1)

    def scalar(self, value) -> "RingElement":
        return self.element(c0=value)

    def x(self, i: int) -> "RingElement":
        self._check_index(i)
        cx = [0] * self.n
        cx[i - 1] = 1
        return self.element(cx=cx)

    def nu(self) -> "RingElement":
        return self.element(cnu=1)

    def generators(self) -> list[tuple[str, "RingElement"]]:
        return [(f"x{i}", self.x(i)) for i in range(1, self.n + 1)] + [("nu", self.nu())]

    @cached_property
    def table(self) -> dict:
        """Products of basis generators, keyed ('x', i, j), ('xnu', i), ('nunu',)."""
        n = self.n
        zero = self.zero_poly
        tab = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                cx = [zero] * n
                if i == j:
                    for k in self.others(i):
                        cx[k - 1] = self.d(i, k)
                    tab[("x", i, i)] = RingElement(self, self.g(i), tuple(cx), self.poly(1))
                else:
                    dij, dji = self.d(i, j), self.d(j, i)
                    cx[i - 1] = dij
                    cx[j - 1] = dji
                    tab[("x", i, j)] = RingElement(self, -(dij * dji), tuple(cx), zero)
            cx = [zero] * n
            cx[i - 1] = self.g(i)
            for k in self.others(i):
                cx[k - 1] = -(self.d(i, k) * self.d(k, i))
            tab[("xnu", i)] = RingElement(self, self.j(i), tuple(cx), zero)
        cx = tuple(self.j(k) for k in range(1, n + 1))
        tab[("nunu",)] = RingElement(self, self.omega, cx, zero)
        return tab

    # -- polynomials in the x_i -----------------------------------------

    @cached_property
    def t_space(self) -> VarSpace:
        """Coefficient variables followed by t_1..t_n (placeholders for x_i)."""
        tw = 1 if self.n == 1 and self.mode == "constrained" else 2
        return VarSpace(
            self.space.names + tuple(f"t_{i}" for i in range(1, self.n + 1)),
            self.space.weights + (tw,) * self.n,
        )

    def t(self, i: int) -> Poly:
        self._check_index(i)
        return Poly.var(self.t_space, f"t_{i}")

    def lift(self, p: Poly) -> Poly:
        """Embed a coefficient polynomial into :attr:`t_space`."""
        p = self.poly(p)
        pad = (0,) * self.n
        return Poly.from_terms(self.t_space, [(e + pad, c) for e, c in p.items()])

    def split_t(self, f: Poly) -> dict[tuple[int, ...], Poly]:
        """Group a t_space polynomial by t-exponents; values are coefficient polys."""
        if f.space != self.t_space:
            raise UsageError("polynomial must live in the presentation's t_space")
        m = len(self.space)
        groups: dict[tuple[int, ...], list] = {}
        for exps, c in f.items():
            groups.setdefault(exps[m:], []).append((exps[:m], c))
        return {k: Poly.from_terms(self.space, v) for k, v in groups.items()}

    def monomial(self, texps: Sequence[int]) -> "RingElement":
        """x_1^e1 ... x_n^en, multiplied strictly left to right."""
        key = tuple(texps)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        last = max((i for i, e in enumerate(key) if e), default=None)
        if last is None:
            result = self.one()
        else:
            prev = list(key)
            prev[last] -= 1
            result = self.x(last + 1) if not any(prev) else self.monomial(prev) * self.x(last + 1)
        self._mono_cache[key] = result
        return result

    def reduce(self, f: Poly) -> "RingElement":
        """The ring element f(x_1, ..., x_n)."""
        zero = self.zero_poly
        c0, cnu = zero, zero
        cx = [zero] * self.n
        for texps, coeff in self.split_t(f).items():
            m = self.monomial(texps)
            c0 = c0 + coeff * m.c0
            cnu = cnu + coeff * m.cnu
            for k in range(self.n):
                if m.cx[k]:
                    cx[k] = cx[k] + coeff * m.cx[k]
        return RingElement(self, c0, tuple(cx), cnu)

    def __repr__(self):
        return f"FamilyPresentation(n={self.n}, {self.label})"


@lru_cache(maxsize=None)
def presentation(n: int, mode: str = "constrained", specialize: str | None = None) -> FamilyPresentation:
    """Shared, lazily filled presentations for the common cases."""
    if mode == "free":
        return FamilyPresentation.free(n, symbolic_mu=specialize == "mu")
    return FamilyPresentation.constrained(n, specialize)


class RingElement:
    """c0 + sum_i cx[i] x_i + cnu nu with coefficients in the base ring."""

    __slots__ = ("pres", "c0", "cx", "cnu")

    def __init__(self, pres: FamilyPresentation, c0: Poly, cx: tuple[Poly, ...], cnu: Poly):
        self.pres = pres
        self.c0 = c0
        self.cx = cx
        self.cnu = cnu

    def components(self) -> list[Poly]:
        return [self.c0, *self.cx, self.cnu]

    def is_zero(self) -> bool:
        return not any(self.components())

    def is_scalar(self) -> bool:
        return not any(self.cx) and not self.cnu

    def _same(self, other: "RingElement"):
        if other.pres is not self.pres:
            raise UsageError("ring elements belong to different presentations")

    def __add__(self, other):
        if not isinstance(other, RingElement):
            other = self.pres.scalar(other)
        self._same(other)
        return RingElement(
            self.pres,
            self.c0 + other.c0,
            tuple(a + b for a, b in zip(self.cx, other.cx)),
            self.cnu + other.cnu,
        )

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.pres, -self.c0, tuple(-a for a in self.cx), -self.cnu)

    def __sub__(self, other):
        if not isinstance(other, RingElement):
            other = self.pres.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.pres.scalar(other) - self

    def scale(self, k) -> "RingElement":
        k = self.pres.poly(k)
        return RingElement(self.pres, self.c0 * k, tuple(a * k for a in self.cx), self.cnu * k)

    def __mul__(self, other):
        if not isinstance(other, RingElement):
            return self.scale(other)
        self._same(other)
        pres = self.pres
        n = pres.n
        tab = pres.table
        a0, ax, anu = self.c0, self.cx, self.cnu
        b0, bx, bnu = other.c0, other.cx, other.cnu
        out = [a0 * b0]
        out += [a0 * bx[k] + b0 * ax[k] for k in range(n)]
        out.append(a0 * bnu + b0 * anu)

        def add(coeff: Poly, elem: RingElement):
            if not coeff:
                return
            for slot, comp in enumerate(elem.components()):
                if comp:
                    out[slot] = out[slot] + coeff * comp

        for i in range(n):
            if ax[i] or bx[i]:
                if ax[i] and bx[i]:
                    add(ax[i] * bx[i], tab[("x", i + 1, i + 1)])
                for j in range(i + 1, n):
                    k = ax[i] * bx[j] + ax[j] * bx[i]
                    add(k, tab[("x", i + 1, j + 1)])
                add(ax[i] * bnu + anu * bx[i], tab[("xnu", i + 1)])
        add(anu * bnu, tab[("nunu",)])
        return RingElement(pres, out[0], tuple(out[1 : n + 1]), out[n + 1])

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise UsageError("ring powers need a nonnegative integer exponent")
        result = self.pres.one()
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.pres is other.pres and self.components() == other.components()
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.components()))

    def render(self) -> str:
        parts = []
        names = ["1"] + [f"x{i}" for i in range(1, self.pres.n + 1)] + ["nu"]
        for name, comp in zip(names, self.components()):
            if comp:
                parts.append(f"({comp.render()})" + ("" if name == "1" else f"*{name}"))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"RingElement({self.render()})"

    def to_json(self) -> dict:
        return {
            "c0": self.c0.to_json(),
            "cx": [c.to_json() for c in self.cx],
            "cnu": self.cnu.to_json(),
        }

    @classmethod
    def from_json(cls, pres: FamilyPresentation, data: Mapping) -> "RingElement":
        return pres.element(
            Poly.from_json(data["c0"]),
            [Poly.from_json(c) for c in data["cx"]],
            Poly.from_json(data["cnu"]),
        )


def ring_mul(u: RingElement, v: RingElement) -> RingElement:
    if not isinstance(u, RingElement) or not isinstance(v, RingElement):
        raise UsageError("ring_mul takes two ring elements")
    return u * v


def fibre_integrate(u: RingElement) -> Poly:
    return u.cnu


def class_p1(pres: FamilyPresentation) -> RingElement:
    """p_1 = 3 (x_1^2 + ... + x_n^2) + mu."""
    if pres.mu is None:
        raise UsageError("p_1 needs mu: use constrained mode or free mode with symbolic mu")
    total = pres.scalar(pres.mu)
    for i in range(1, pres.n + 1):
        total = total + (pres.x(i) * pres.x(i)).scale(3)
    return total


def class_e(pres: FamilyPresentation) -> RingElement:
    """e = 2 nu + x_1^2 + ... + x_n^2."""
    total = pres.nu().scale(2)
    for i in range(1, pres.n + 1):
        total = total + pres.x(i) * pres.x(i)
    return total


def euler_local(pres: FamilyPresentation, i: int) -> RingElement:
    """e(i) = 3 x_i^2 - B_i."""
    return (pres.x(i) * pres.x(i)).scale(3) - pres.b(i)


def cubic_check(pres: FamilyPresentation, i: int) -> tuple[RingElement, dict[int, Poly]]:
    """Residuals of x_i^3 = B_i x_i + C_i and D_ji^3 = B_i D_ji + C_i."""
    if pres.mode != "constrained":
        raise UsageError("cubic_check needs a constrained presentation")
    xi = pres.x(i)
    b, c = pres.b(i), pres.c(i)
    ring_res = xi * xi * xi - xi.scale(b) - c
    d_res = {j: pres.d_power(j, i, 3) - b * pres.d(j, i) - c for j in pres.others(i)}
    return ring_res, d_res


def associativity_obstructions(pres: FamilyPresentation) -> list[tuple[str, RingElement]]:
    """(u v) w - u (v w) for every ordered triple of generators x_i, nu."""
    gens = pres.generators()
    out = []
    for (nu_, u), (nv, v), (nw, w) in itertools.product(gens, repeat=3):
        out.append((f"{nu_}*{nv}*{nw}", (u * v) * w - u * (v * w)))
    return out


def assoc_constraints(pres: FamilyPresentation) -> dict[str, Poly]:
    """LHS - RHS of the four families of associativity equations."""
    n = pres.n
    out: dict[str, Poly] = {}
    d, g, jj = pres.d, pres.g, pres.j
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        out[f"assoc1[{i},{j},{k}]"] = (d(i, j) - d(k, j)) * (d(i, k) - d(j, k))
    for i, j in itertools.permutations(range(1, n + 1), 2):
        rest = [k for k in range(1, n + 1) if k not in (i, j)]
        s2 = sum((d(i, k) * d(j, k) for k in rest), pres.zero_poly)
        out[f"assoc2[{i},{j}]"] = g(i) + g(j) + s2 - d(i, j) ** 2 - d(j, i) ** 2
        s3 = sum((d(i, k) * d(j, k) * d(k, j) for k in rest), pres.zero_poly)
        out[f"assoc3[{i},{j}]"] = (
            jj(j) + d(i, j) * g(j) - s3 - d(i, j) * g(i) + d(i, j) * d(j, i) ** 2
        )
    for i in range(1, n + 1):
        s = pres.zero_poly
        for j in pres.others(i):
            s = s + jj(j) * d(i, j) - d(i, j) ** 2 * d(j, i) ** 2
        out[f"assoc4[{i}]"] = s + pres.omega - g(i) ** 2
    return out


# -- integration formulas -----------------------------------------------------


def _power_integrals(b: Poly, c: Poly, top: int) -> list[Poly]:
    """I_m = integral of x^m when x^3 = b x + c: 0, 0, 1, then I_m = b I_{m-2} + c I_{m-3}."""
    zero = b * 0
    vals = [zero, zero, zero + 1]
    for m in range(3, top + 1):
        vals.append(b * vals[m - 2] + c * vals[m - 3])
    return vals[: top + 1]


def _localize(pres: FamilyPresentation, f: Poly, j: int) -> dict[int, Poly]:
    """f_j: t_k -> D_jk for k != j, grouped by the power of t_j."""
    out: dict[int, Poly] = {}
    for texps, coeff in pres.split_t(f).items():
        term = coeff
        for k, e in enumerate(texps, start=1):
            if k != j and e:
                term = term * pres.d_power(j, k, e)
        m = texps[j - 1]
        out[m] = out.get(m, pres.zero_poly) + term
    return out


def integrate_poly_diagonal(pres: FamilyPresentation, f: Poly) -> Poly:
    """sum_j integral of f_j(x_j), each by reduction with x_j^3 = B_j x_j + C_j."""
    total = pres.zero_poly
    for j in range(1, pres.n + 1):
        local = _localize(pres, f, j)
        ints = _power_integrals(pres.b(j), pres.c(j), max(local, default=0))
        for m, coeff in local.items():
            total = total + coeff * ints[m]
    return total


def integrate_poly_times_e(pres: FamilyPresentation, f: Poly, i: int) -> Poly:
    """integral of f e = sum_j int f_j(x_j) e(j) - 2 sum_{j != i} f_j(D_ij)."""
    if not isinstance(i, int) or not 1 <= i <= pres.n:
        raise UsageError(f"choice index {i!r} out of range 1..{pres.n}")
    total = pres.zero_poly
    for j in range(1, pres.n + 1):
        local = _localize(pres, f, j)
        top = max(local, default=0) + 2
        ints = _power_integrals(pres.b(j), pres.c(j), top)
        bj = pres.b(j)
        for m, coeff in local.items():
            total = total + coeff * (3 * ints[m + 2] - bj * ints[m])
        if j != i:
            for m, coeff in local.items():
                total = total - 2 * coeff * pres.d_power(i, j, m)
    return total


def trace_integral(pres: FamilyPresentation, u: RingElement) -> Poly:
    """Trace of multiplication by u on the basis 1, x_1..x_n, nu."""
    total = (u * pres.one()).c0 + (u * pres.nu()).cnu
    for i in range(1, pres.n + 1):
        total = total + (u * pres.x(i)).cx[i - 1]
    return total


def e_squared_lambda(pres: FamilyPresentation) -> tuple[RingElement, list[Poly]]:
    """e^2 - sum_i (3 x_i^2 - B_i)^2, and the per-i predictions for it.

    The difference should be a base class lambda with
    lambda = -sum_{j != i} (3 D_ij^2 - B_j)^2 for every i.
    """
    e = class_e(pres)
    diff = e * e
    for i in range(1, pres.n + 1):
        ei = euler_local(pres, i)
        diff = diff - ei * ei
    targets = []
    for i in range(1, pres.n + 1):
        s = pres.zero_poly
        for j in pres.others(i):
            s = s + (3 * pres.d(i, j) ** 2 - pres.b(j)) ** 2
        targets.append(-s)
    return diff, targets


def verify_sw_identities(pres: FamilyPresentation) -> list[tuple[str, Poly]]:
    """Residuals of the four integral identities sw1-sw4."""
    if pres.mode != "constrained":
        raise UsageError("the sw identities are checked in constrained mode")
    n = pres.n
    x = pres.x
    p1 = class_p1(pres)
    e = class_e(pres)
    out = []
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        out.append((f"sw1[{i},{j},{k}]", fibre_integrate(x(i) * x(j) * x(k))))
    for i in range(1, n + 1):
        u = x(i) * x(i) * x(i) - p1 * x(i)
        for j in pres.others(i):
            u = u + (x(i) * x(j) * x(j)).scale(3)
        out.append((f"sw2[{i}]", fibre_integrate(u)))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        u = x(i) * x(j) * x(j) * x(j) + x(i) * x(i) * x(i) * x(j) - p1 * x(i) * x(j)
        for k in range(1, n + 1):
            if k not in (i, j):
                u = u + (x(i) * x(j) * x(k) * x(k)).scale(3)
        out.append((f"sw3[{i},{j}]", fibre_integrate(u)))
    sq = pres.scalar(0)
    u = (e * e).scale(3)
    for i in range(1, n + 1):
        xi2 = x(i) * x(i)
        u = u + xi2 * xi2
        sq = sq + xi2
        for j in range(i + 1, n + 1):
            u = u + (xi2 * (x(j) * x(j))).scale(6)
    u = u - (p1 * sq).scale(2)
    out.append(("sw4", fibre_integrate(u)))
    return out


# -- n = 1 quotient ring ----------------------------------------------------


def _n1_reduce(f: list[Poly]) -> list[Poly]:
    """Remainder of a polynomial in x (list, constant first) mod x^3 - B x - C."""
    B = Poly.var(N1_SPACE, "B")
    C = Poly.var(N1_SPACE, "C")
    f = list(f) + [Poly.zero(N1_SPACE)] * max(0, 3 - len(f))
    for k in range(len(f) - 1, 2, -1):
        top = f[k]
        if top:
            f[k - 2] = f[k - 2] + top * B
            f[k - 3] = f[k - 3] + top * C
            f[k] = Poly.zero(N1_SPACE)
    return f[:3]


def n1_mul(f: list[Poly], g: list[Poly]) -> list[Poly]:
    out = [Poly.zero(N1_SPACE)] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        for j, gj in enumerate(g):
            if fi and gj:
                out[i + j] = out[i + j] + fi * gj
    return _n1_reduce(out)


def n1_p1() -> list[Poly]:
    return [2 * Poly.var(N1_SPACE, "B"), Poly.zero(N1_SPACE), Poly.const(N1_SPACE, 3)]


def n1_e() -> list[Poly]:
    return [-Poly.var(N1_SPACE, "B"), Poly.zero(N1_SPACE), Poly.const(N1_SPACE, 3)]


def kappa_n1(a: int, b: int) -> Poly:
    """integral of (3x^2 + 2B)^a (3x^2 - B)^b in Q[B, C][x]/(x^3 - B x - C)."""
    if a < 0 or b < 0:
        raise UsageError("exponents must be nonnegative")
    f = [Poly.const(N1_SPACE, 1)]
    for factor, count in ((n1_p1(), a), (n1_e(), b)):
        for _ in range(count):
            f = n1_mul(f, factor)
    result = _n1_reduce(f)[2]
    assert_even_in(result, "C")
    return result


def assert_even_in(p: Poly, name: str):
    if any(e % 2 for e in p.exponents_of(name)):
        raise AssertionError(f"odd power of {name} in {p.render()}")


# -- the hyperoctahedral group W_n --------------------------------------------


class WeylElement:
    """g = (sigma, eps) acting on the framing by g(e_i) = eps_i e_{sigma(i)}.

    `perm` holds sigma(1), ..., sigma(n) (1-based) and `signs` the eps_i.
    """

    __slots__ = ("perm", "signs")

    def __init__(self, perm: Sequence[int], signs: Sequence[int] | None = None):
        perm = tuple(perm)
        n = len(perm)
        if sorted(perm) != list(range(1, n + 1)):
            raise UsageError(f"not a permutation of 1..{n}: {perm}")
        signs = tuple(signs) if signs is not None else (1,) * n
        if len(signs) != n or any(s not in (1, -1) for s in signs):
            raise UsageError("signs must be n entries of +1 or -1")
        self.perm = perm
        self.signs = signs

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls(range(1, n + 1))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "WeylElement":
        perm = list(range(1, n + 1))
        perm[i - 1], perm[j - 1] = j, i
        return cls(perm)

    @classmethod
    def theta(cls, n: int, k: int) -> "WeylElement":
        """The reflection flipping the sign of the k-th framing vector."""
        signs = [1] * n
        signs[k - 1] = -1
        return cls(range(1, n + 1), signs)

    @classmethod
    def generators(cls, n: int) -> list["WeylElement"]:
        gens = [cls.transposition(n, i, i + 1) for i in range(1, n)]
        return gens + [cls.theta(n, k) for k in range(1, n + 1)]

    @classmethod
    def all_elements(cls, n: int) -> list["WeylElement"]:
        return [
            cls(p, s)
            for p in itertools.permutations(range(1, n + 1))
            for s in itertools.product((1, -1), repeat=n)
        ]

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        """(g h)(e_i) = g(h(e_i))."""
        if other.n != self.n:
            raise UsageError("Weyl elements of different rank")
        perm = [self.perm[other.perm[i] - 1] for i in range(self.n)]
        signs = [other.signs[i] * self.signs[other.perm[i] - 1] for i in range(self.n)]
        return WeylElement(perm, signs)

    def inverse(self) -> "WeylElement":
        n = self.n
        perm = [0] * n
        signs = [0] * n
        for i in range(n):
            s = self.perm[i]
            perm[s - 1] = i + 1
            signs[s - 1] = self.signs[i]
        return WeylElement(perm, signs)

    def act_index(self, i: int) -> tuple[int, int]:
        """(sign, image) with g(e_i) = sign * e_image."""
        return self.signs[i - 1], self.perm[i - 1]

    def __eq__(self, other):
        return isinstance(other, WeylElement) and (self.perm, self.signs) == (other.perm, other.signs)

    def __hash__(self):
        return hash((self.perm, self.signs))

    def __repr__(self):
        return f"WeylElement(perm={self.perm}, signs={self.signs})"


def _leading(p: Poly):
    return p.items()[0]


def in_graded_ideal(target: Poly, generators: Sequence[Poly]) -> bool:
    """Whether a homogeneous target is sum m_k g_k with m_k of complementary degree.

    Linear algebra in one degree only (a Macaulay-matrix test), so True is a
    certificate; False only says no certificate exists in that degree.
    """
    if not target:
        return True
    space = target.space
    deg = target.weighted_degree()
    if not target.is_homogeneous(deg):
        raise UsageError("target must be homogeneous")
    from .exact import monomials_of_weighted_degree

    echelon: dict[tuple[int, ...], Poly] = {}

    def reduce(p: Poly) -> Poly:
        while p:
            lead, c = _leading(p)
            piv = echelon.get(lead)
            if piv is None:
                return p
            p = p - piv * c
        return p

    for g in generators:
        if not g:
            continue
        gd = g.weighted_degree()
        if gd > deg:
            continue
        for m in monomials_of_weighted_degree(space, deg - gd):
            r = reduce(g * Poly.monomial(space, m))
            if r:
                lead, c = _leading(r)
                echelon[lead] = r / c
    return not reduce(target)


def free_obstructions_match(pres: FamilyPresentation) -> list[tuple[str, bool]]:
    """For a free presentation: each assoc expression occurs (up to sign) as a
    residual coefficient, and every residual coefficient lies in the ideal
    they generate."""
    constraints = assoc_constraints(pres)
    gens = list(constraints.values())
    signed = {p for g in gens for p in (g, -g)}
    comps = [c for _, r in associativity_obstructions(pres) for c in r.components() if c]
    seen = set(comps)
    out = [(f"occurs:{name}", g in seen or -g in seen) for name, g in constraints.items()]
    cache: dict[Poly, bool] = {}
    for tid, r in associativity_obstructions(pres):
        ok = True
        for c in r.components():
            if c and c not in signed:
                if c not in cache:
                    cache[c] = in_graded_ideal(c, gens)
                ok = ok and cache[c]
        out.append((f"ideal:{tid}", ok))
    return out
