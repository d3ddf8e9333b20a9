"""Sparse multivariate polynomials with exact rational coefficients.

Variables live in a :class:`VarSpace`, an ordered list of names with a
positive integer weight each.  A :class:`Poly` is an immutable map from
exponent vectors to nonzero :class:`fractions.Fraction` coefficients.

Exponent vectors are packed into a single Python int (32 bits per
variable) so that monomial multiplication is one integer addition.
"""
from __future__ import annotations

import re
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..errors import UsageError

Rational = Fraction

_BITS = 32
_MASK = (1 << _BITS) - 1
_MAX_EXP = 1 << (_BITS - 2)


def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or "num/den" string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def render_rational(q: Fraction) -> str:
    """Lowest-terms string, "n" when the denominator is 1."""
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class VarSpace:
    names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        names = tuple(self.names)
        weights = tuple(int(w) for w in self.weights)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", weights)
        if len(names) != len(weights):
            raise UsageError("one weight per variable is required")
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate variable names in {names}")
        if any(w <= 0 for w in weights):
            raise UsageError("variable weights must be positive")
        for name in names:
            if not _NAME_RE.fullmatch(name):
                raise UsageError(f"invalid variable name {name!r}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "VarSpace":
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"variable {name!r} not in space {self.names}") from None

    def weight(self, name: str) -> int:
        return self.weights[self.index(name)]

    def to_json(self) -> list[dict]:
        return [{"name": n, "weight": w} for n, w in zip(self.names, self.weights)]

    @classmethod
    def from_json(cls, data) -> "VarSpace":
        return cls(tuple(d["name"] for d in data), tuple(d["weight"] for d in data))


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _pack(exps: Iterable[int]) -> int:
    key = 0
    shift = 0
    for e in exps:
        if e < 0 or e >= _MAX_EXP:
            raise UsageError(f"exponent {e} out of range")
        key |= e << shift
        shift += _BITS
    return key


def _unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(nvars))


def _scaled(terms: Mapping[int, Fraction]) -> tuple[int, list[tuple[int, int]]]:
    den = 1
    for c in terms.values():
        d = c.denominator
        if d != 1 and den % d:
            den = den * d // gcd(den, d)
    return den, [(k, c.numerator * (den // c.denominator)) for k, c in terms.items()]


def _unscaled(ints: Mapping[int, int], den: int) -> dict[int, Fraction]:
    if den == 1:
        return {k: Fraction(v) for k, v in ints.items() if v}
    return {k: Fraction(v, den) for k, v in ints.items() if v}


class Poly:
    """Immutable sparse polynomial over Q in a fixed :class:`VarSpace`."""

    __slots__ = ("space", "_terms", "_hash")

    def __init__(self, space: VarSpace, terms: Mapping[int, Fraction] | None = None):
        # `terms` is keyed by packed exponents and must not contain zeros;
        # public construction goes through from_terms / const / var.
        self.space = space
        self._terms = dict(terms) if terms else {}
        self._hash = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_terms(cls, space: VarSpace, terms: Iterable[tuple[Iterable[int], object]]) -> "Poly":
        out: dict[int, Fraction] = {}
        n = len(space)
        for exps, coeff in terms:
            exps = tuple(exps)
            if len(exps) != n:
                raise UsageError(f"exponent vector {exps} does not match {n} variables")
            k = _pack(exps)
            out[k] = out.get(k, Fraction(0)) + to_rational(coeff)
        return cls(space, {k: c for k, c in out.items() if c})

    @classmethod
    def zero(cls, space: VarSpace) -> "Poly":
        return cls(space)

    @classmethod
    def const(cls, space: VarSpace, value) -> "Poly":
        q = to_rational(value)
        return cls(space, {0: q} if q else None)

    @classmethod
    def var(cls, space: VarSpace, name: str, power: int = 1) -> "Poly":
        i = space.index(name)
        return cls(space, {power << (_BITS * i): Fraction(1)})

    @classmethod
    def monomial(cls, space: VarSpace, exps: Iterable[int], coeff=1) -> "Poly":
        return cls.from_terms(space, [(exps, coeff)])

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.space != self.space:
                raise UsageError(
                    f"variable spaces differ: {self.space.names} vs {other.space.names}"
                )
            return other
        return Poly.const(self.space, other)

    # -- inspection ---------------------------------------------------

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def coefficient(self, exps: Iterable[int]) -> Fraction:
        return self._terms.get(_pack(exps), Fraction(0))

    def items(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """(exponents, coefficient) pairs in canonical order."""
        n = len(self.space)
        pairs = [(_unpack(k, n), c) for k, c in self._terms.items()]
        pairs.sort(key=lambda t: self._order_key(t[0]))
        return pairs

    def _order_key(self, exps):
        # graded lexicographic: heavier first, then lexicographically larger
        wdeg = sum(w * e for w, e in zip(self.space.weights, exps))
        return (-wdeg, tuple(-e for e in exps))

    def exponents(self) -> list[tuple[int, ...]]:
        return [e for e, _ in self.items()]

    def coefficients(self) -> list[Fraction]:
        return list(self._terms.values())

    def weighted_degrees(self) -> set[int]:
        w = self.space.weights
        return {sum(a * b for a, b in zip(w, e)) for e, _ in self.items()}

    def weighted_degree(self) -> int:
        """Largest weighted degree of a term; -1 for the zero polynomial."""
        degs = self.weighted_degrees()
        return max(degs) if degs else -1

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.weighted_degrees()
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def degree_in(self, name: str) -> int:
        i = self.space.index(name)
        shift = _BITS * i
        return max(((k >> shift) & _MASK for k in self._terms), default=-1)

    def exponents_of(self, name: str) -> set[int]:
        i = self.space.index(name)
        shift = _BITS * i
        return {(k >> shift) & _MASK for k in self._terms}

    def variables(self) -> tuple[str, ...]:
        """Names of variables that actually occur, in space order."""
        used = 0
        for k in self._terms:
            used |= k
        return tuple(
            name for i, name in enumerate(self.space.names) if (used >> (_BITS * i)) & _MASK
        )

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for k, c in small.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s += c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Poly(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.space, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, value) -> "Poly":
        q = to_rational(value)
        if not q:
            return Poly(self.space)
        return Poly(self.space, {k: c * q for k, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly(self.space)
        if len(b) == 1 and 0 in b:
            return self.scale(b[0])
        if len(a) == 1 and 0 in a:
            return other.scale(a[0])
        if len(a) < len(b):
            a, b = b, a
        # integer numerators over a common denominator: far cheaper than Fractions
        da, ia = _scaled(a)
        db, ib = _scaled(b)
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in ib:
            for ka, ca in ia:
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return Poly(self.space, _unscaled(out, da * db))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise UsageError("division only by nonzero constants")
            other = other.constant_term()
        q = to_rational(other)
        if not q:
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(1 / q)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise UsageError("polynomial powers need a nonnegative integer exponent")
        result = Poly.const(self.space, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.space == other.space and self._terms == other._terms
        try:
            q = to_rational(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_term() == q

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self._terms.items())))
        return self._hash

    # -- substitution -------------------------------------------------

    def substitute(self, bindings: Mapping[str, "Poly"], target: VarSpace | None = None) -> "Poly":
        """Replace each occurring variable by a polynomial in one target space."""
        images = dict(bindings)
        spaces = {p.space for p in images.values() if isinstance(p, Poly)}
        if len(spaces) > 1:
            raise UsageError("substitution images live in different variable spaces")
        if spaces:
            space = spaces.pop()
            if target is not None and target != space:
                raise UsageError("target space does not match the images")
        elif target is not None:
            space = target
        else:
            raise UsageError("substitution needs a target space")
        for name in images:
            self.space.index(name)
            if not isinstance(images[name], Poly):
                images[name] = Poly.const(space, images[name])
        for name in self.variables():
            if name not in images:
                raise UsageError(f"variable {name!r} is unbound in substitution")

        n = len(self.space)
        powers: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            p = powers.get(key)
            if p is None:
                if e == 1:
                    p = images[self.space.names[i]]
                else:
                    half = power(i, e // 2)
                    p = half * half
                    if e % 2:
                        p = p * power(i, 1)
                powers[key] = p
            return p

        parts = []
        one = {0: Fraction(1)}
        for k, c in self._terms.items():
            exps = _unpack(k, n)
            term = None
            for i, e in enumerate(exps):
                if e:
                    term = power(i, e) if term is None else term * power(i, e)
            den, ints = _scaled(one if term is None else term._terms)
            parts.append((c.numerator, c.denominator * den, ints))
        # sum everything over one common denominator
        common = 1
        for _, den, _ in parts:
            common = common * den // gcd(common, den)
        acc: dict[int, int] = {}
        get = acc.get
        for num, den, ints in parts:
            f = num * (common // den)
            for kt, v in ints:
                acc[kt] = get(kt, 0) + f * v
        return Poly(space, _unscaled(acc, common))

    def relabel(self, targets: Sequence[int], signs: Sequence[int] | None = None) -> "Poly":
        """Send variable k to variable targets[k] times signs[k] (a signed permutation)."""
        n = len(self.space)
        if sorted(targets) != list(range(n)):
            raise UsageError("relabel needs a permutation of the variables")
        shifts = [_BITS * t for t in targets]
        flips = [k for k in range(n) if signs is not None and signs[k] < 0]
        out: dict[int, Fraction] = {}
        for key, c in self._terms.items():
            new = 0
            for k in range(n):
                e = (key >> (_BITS * k)) & _MASK
                if e:
                    new |= e << shifts[k]
            odd = sum((key >> (_BITS * k)) & 1 for k in flips)
            out[new] = -c if odd % 2 else c
        return Poly(self.space, out)

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        """Exact value at rational point `values` (every occurring var needed)."""
        n = len(self.space)
        point = [None] * n
        for name, v in values.items():
            point[self.space.index(name)] = to_rational(v)
        total = Fraction(0)
        for k, c in self._terms.items():
            exps = _unpack(k, n)
            term = c
            for i, e in enumerate(exps):
                if e:
                    if point[i] is None:
                        raise UsageError(f"no value for variable {self.space.names[i]!r}")
                    term *= point[i] ** e
            total += term
        return total

    # -- rendering ----------------------------------------------------

    def render(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, c in self.items():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.space.names, exps)
                if e
            )
            mag = abs(c)
            if not mono:
                body = render_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{render_rational(mag)}*{mono}"
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append(("- " if c < 0 else "+ ") + body)
        return " ".join(pieces)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly({self.render()!r}, vars={self.space.names})"

    def to_json(self) -> dict:
        return {
            "vars": self.space.to_json(),
            "terms": [
                {"coeff": render_rational(c), "exps": list(e)} for e, c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Poly":
        space = VarSpace.from_json(data["vars"])
        return cls.from_terms(space, [(t["exps"], t["coeff"]) for t in data["terms"]])


_TERM_RE = re.compile(r"([+-])?([^+-]+)")
_NUM_RE = re.compile(r"\d+(/\d+)?")


def parse_poly(text: str, space: VarSpace) -> Poly:
    """Inverse of :meth:`Poly.render` for a given variable space."""
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty polynomial text")
    pos = 0
    terms = []
    n = len(space)
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse polynomial near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(sign)
        exps = [0] * n
        for factor in m.group(2).split("*"):
            if _NUM_RE.fullmatch(factor):
                coeff *= Fraction(factor)
                continue
            name, _, power = factor.partition("^")
            exps[space.index(name)] += int(power) if power else 1
        terms.append((exps, coeff))
        pos = m.end()
    return Poly.from_terms(space, terms)


def monomials_of_weighted_degree(
    space: VarSpace, degree: int, parity: Mapping[str, int] | None = None
) -> list[tuple[int, ...]]:
    """All exponent vectors of exact weighted degree, in canonical order.

    `parity` optionally pins the parity of selected exponents, e.g.
    ``{"y": 0}`` keeps only even powers of ``y``.
    """
    if degree < 0:
        raise UsageError("degree must be nonnegative")
    rules = [None] * len(space)
    for name, par in (parity or {}).items():
        rules[space.index(name)] = par % 2
    weights = space.weights
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, prefix: list[int]):
        if i == len(weights) - 1:
            w = weights[i]
            if remaining % w == 0:
                e = remaining // w
                if rules[i] is None or e % 2 == rules[i]:
                    out.append(tuple(prefix + [e]))
            return
        for e in range(remaining // weights[i], -1, -1):
            if rules[i] is not None and e % 2 != rules[i]:
                continue
            rec(i + 1, remaining - e * weights[i], prefix + [e])

    if not weights:
        return [()] if degree == 0 else []
    rec(0, degree, [])
    return out


def symmetric_reduce(p: Poly, a: str, b: str, e1: Poly, e2: Poly) -> Poly:
    """Rewrite a polynomial symmetric in `a`, `b` through a+b -> e1, a*b -> e2.

    Raises UsageError if `p` involves other variables or is not symmetric.
    """
    extra = set(p.variables()) - {a, b}
    if extra:
        raise UsageError(f"symmetric reduction: unexpected variables {sorted(extra)}")
    space = p.space
    s1 = Poly.var(space, a) + Poly.var(space, b)
    s2 = Poly.var(space, a) * Poly.var(space, b)
    ia, ib = space.index(a), space.index(b)
    result = Poly.zero(e1.space)
    rest = p
    while rest:
        # leading term: largest a-exponent, then largest b-exponent
        exps, c = max(rest.items(), key=lambda t: (t[0][ia], t[0][ib]))
        i, j = exps[ia], exps[ib]
        if i < j:
            raise UsageError("polynomial is not symmetric in " f"{a}, {b}")
        result = result + (e1 ** (i - j)) * (e2 ** j) * c
        rest = rest - (s1 ** (i - j)) * (s2 ** j) * c
    return result
