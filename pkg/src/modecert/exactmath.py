"""Exact multivariate polynomial and rational-function algebra over Q.

Polynomials live in a fixed ordered variable set.  A monomial is stored as a
single integer that packs the exponent vector (16 bits per variable), so
monomial multiplication is integer addition.  Coefficients are ``Fraction``.

Besides the algebra this module holds the two sign primitives every
certificate is built from: shift-and-sign on an orthant and Sturm counting on
an interval.  Both certify "p <= 0" (resp. "p < 0"); callers negate.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .certificate import Certificate, Kind, make
from .errors import DivisionByZeroPoly

VARIABLES: tuple[str, ...] = ("n", "l", "m", "x", "T", "z", "r", "y1", "y2", "y3")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_BITS = 16
_FIELD = (1 << _BITS) - 1

Number = Union[int, Fraction]


def _unit_key(var: str, power: int = 1) -> int:
    return power << (_BITS * _INDEX[var])


def unpack(key: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _FIELD for i in range(len(VARIABLES)))


def pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0:
            raise ValueError("negative exponent")
        key |= e << (_BITS * i)
    return key


def _exp_of(key: int, idx: int) -> int:
    return (key >> (_BITS * idx)) & _FIELD


def _check_var(var: str) -> int:
    try:
        return _INDEX[var]
    except KeyError:
        raise ValueError(f"unknown variable {var!r}") from None


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


class MultiPoly:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[k] = c if isinstance(c, Fraction) else _as_fraction(c)
        self._terms = clean
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "MultiPoly":
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Number) -> "MultiPoly":
        c = _as_fraction(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        _check_var(name)
        return cls._raw({_unit_key(name, power): Fraction(1)})

    @classmethod
    def from_exponents(cls, terms: Mapping[Sequence[int] | tuple, Number]) -> "MultiPoly":
        return cls({pack(e): _as_fraction(c) for e, c in terms.items()})

    @classmethod
    def from_coeffs(cls, var: str, coeffs: Sequence["MultiPoly | Number"]) -> "MultiPoly":
        v = cls.var(var)
        out = cls()
        for c in reversed(list(coeffs)):
            out = out * v + c
        return out

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        for k, c in self._terms.items():
            yield unpack(k), c

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.constant_term()

    def variables(self) -> tuple[str, ...]:
        present = 0
        for k in self._terms:
            present |= k
        return tuple(v for i, v in enumerate(VARIABLES) if (present >> (_BITS * i)) & _FIELD)

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(unpack(k)) for k in self._terms)
        idx = _check_var(var)
        return max(_exp_of(k, idx) for k in self._terms)

    def coeffs(self, var: str) -> dict[int, "MultiPoly"]:
        """Coefficients with respect to ``var`` as a sparse map power -> poly."""
        idx = _check_var(var)
        shift = _BITS * idx
        buckets: dict[int, dict[int, Fraction]] = {}
        for k, c in self._terms.items():
            e = (k >> shift) & _FIELD
            buckets.setdefault(e, {})[k & ~(_FIELD << shift)] = c
        return {e: MultiPoly._raw(t) for e, t in buckets.items()}

    def coeff_list(self, var: str) -> list["MultiPoly"]:
        c = self.coeffs(var)
        if not c:
            return []
        return [c.get(i, ZERO) for i in range(max(c) + 1)]

    def leading_coeff(self, var: str) -> "MultiPoly":
        c = self.coeffs(var)
        return c[max(c)] if c else ZERO

    def univariate_coeffs(self, var: str) -> list[Fraction]:
        """Dense rational coefficient list (low to high) of a univariate poly."""
        others = [v for v in self.variables() if v != var]
        if others:
            raise ValueError(f"polynomial is not univariate in {var}: also has {others}")
        idx = _check_var(var)
        out = [Fraction(0)] * (self.degree(var) + 1 if self._terms else 0)
        for k, c in self._terms.items():
            out[_exp_of(k, idx)] = c
        return out

    def graded_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in graded-lexicographic order, largest first."""
        return sorted(self.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        return max(self.items(), key=lambda t: (sum(t[0]), t[0]))

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in o._terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return MultiPoly._raw({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, Fraction] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return MultiPoly._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZeroPoly("division by zero constant")
            inv = 1 / Fraction(other)
            return self * inv
        if isinstance(other, MultiPoly):
            return RationalExpr(self, other)
        if isinstance(other, RationalExpr):
            return RationalExpr(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalExpr(o, self)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, RationalExpr):
                return other == self
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- calculus and substitution -----------------------------------
    def diff(self, var: str) -> "MultiPoly":
        idx = _check_var(var)
        unit = 1 << (_BITS * idx)
        out = {}
        for k, c in self._terms.items():
            e = _exp_of(k, idx)
            if e:
                out[k - unit] = c * e
        return MultiPoly._raw(out)

    def subs(self, var: str, value: "MultiPoly | Number") -> "MultiPoly":
        """Substitute a polynomial (or number) for ``var`` by Horner's rule."""
        value = self._coerce(value)
        coeffs = self.coeffs(var)
        if not coeffs:
            return ZERO
        out = ZERO
        for e in range(max(coeffs), -1, -1):
            out = out * value
            c = coeffs.get(e)
            if c is not None:
                out = out + c
        return out

    def shift(self, var: str, offset: Number) -> "MultiPoly":
        offset = _as_fraction(offset)
        if not offset:
            return self
        return self.subs(var, MultiPoly.var(var) + offset)

    def partial_eval(self, values: Mapping[str, Number]) -> "MultiPoly":
        out = self
        for var, val in values.items():
            out = out.subs(var, _as_fraction(val))
        return out

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point; values may be Fraction, QComplex, float, mpmath."""
        needed = self.variables()
        missing = [v for v in needed if v not in values]
        if missing:
            raise ValueError(f"no value for {missing}")
        powers: dict[tuple[int, int], object] = {}
        total = 0
        for k, c in self._terms.items():
            term = c
            for i in range(len(VARIABLES)):
                e = _exp_of(k, i)
                if e:
                    key = (i, e)
                    pw = powers.get(key)
                    if pw is None:
                        pw = values[VARIABLES[i]] ** e
                        powers[key] = pw
                    term = pw * term
            total = term + total
        return total

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        """Rename variables (a permutation or into unused variables)."""
        out = {}
        for exps, c in self.items():
            new = [0] * len(VARIABLES)
            for i, e in enumerate(exps):
                if e:
                    j = _INDEX[mapping.get(VARIABLES[i], VARIABLES[i])]
                    new[j] += e
            out[pack(new)] = c
        return MultiPoly._raw(out)

    # -- content ------------------------------------------------------
    def content(self) -> Fraction:
        """Positive rational content: gcd(numerators) / lcm(denominators)."""
        if not self._terms:
            return Fraction(0)
        g, lcm = 0, 1
        for c in self._terms.values():
            g = math.gcd(g, c.numerator)
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        return Fraction(g, lcm)

    def primitive(self) -> "MultiPoly":
        """Integer polynomial with coprime coefficients and positive leading term."""
        if not self._terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return self / c

    # -- text form ----------------------------------------------------
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.graded_terms():
            factors = [str(abs(c))]
            for name, e in zip(VARIABLES, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = " * ".join(factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r})"


ZERO = MultiPoly()
ONE = MultiPoly.const(1)


def var(name: str) -> MultiPoly:
    return MultiPoly.var(name)


def poly(value) -> MultiPoly:
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, str):
        return parse_poly(value)
    return MultiPoly.const(value)


# ---------------------------------------------------------------------------
# gcd, backed by sympy's sparse polynomial rings
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _ring(names: tuple[str, ...]):
    from sympy.polys.domains import QQ
    from sympy.polys.rings import ring

    return ring(",".join(names), QQ)[0]


def _to_ring(p: MultiPoly, R, idx: Sequence[int]):
    from sympy.polys.domains import QQ

    return R.from_dict({
        tuple(exps[i] for i in idx): QQ(c.numerator, c.denominator) for exps, c in p.items()
    })


def _from_ring(elem, idx: Sequence[int]) -> MultiPoly:
    out = {}
    for mono, c in elem.items():
        exps = [0] * len(VARIABLES)
        for i, e in zip(idx, mono):
            exps[i] = e
        out[pack(exps)] = Fraction(int(c.numerator), int(c.denominator))
    return MultiPoly._raw(out)


def _ring_setup(*polys: MultiPoly):
    names = sorted({v for p in polys for v in p.variables()}, key=_INDEX.__getitem__)
    if not names:
        return None, ()
    idx = tuple(_INDEX[v] for v in names)
    return _ring(tuple(names)), idx


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Monic-normalized gcd (primitive integer form, positive leading term)."""
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    R, idx = _ring_setup(p, q)
    if R is None:
        return ONE
    g = _to_ring(p, R, idx).gcd(_to_ring(q, R, idx))
    return _from_ring(g, idx).primitive()


def poly_div_exact(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Exact quotient p/q; raises ValueError if q does not divide p."""
    if q.is_zero():
        raise DivisionByZeroPoly("exact division by zero polynomial")
    if q.is_constant():
        return p / q.constant_term()
    R, idx = _ring_setup(p, q)
    quo, rem = divmod(_to_ring(p, R, idx), _to_ring(q, R, idx))
    if rem:
        raise ValueError("divisor does not divide dividend")
    return _from_ring(quo, idx)


def poly_sqrt(p: MultiPoly) -> MultiPoly | None:
    """Exact square root with positive leading coefficient, or None."""
    if p.is_zero():
        return ZERO
    exps, c = p.leading_term()
    if c < 0 or any(e % 2 for e in exps):
        return None
    root_c = _rational_sqrt(c)
    if root_c is None:
        return None
    s = MultiPoly.from_exponents({tuple(e // 2 for e in exps): root_c})
    two_lead = (tuple(e // 2 for e in exps), 2 * root_c)
    for _ in range(len(p) + 4):
        rem = p - s * s
        if rem.is_zero():
            return s
        r_exps, r_c = rem.leading_term()
        t_exps = tuple(a - b for a, b in zip(r_exps, two_lead[0]))
        if any(e < 0 for e in t_exps) or sum(r_exps) > sum(exps):
            return None
        s = s + MultiPoly.from_exponents({t_exps: r_c / two_lead[1]})
    return None


def _rational_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    a, b = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if a * a == c.numerator and b * b == c.denominator:
        return Fraction(a, b)
    return None


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

class RationalExpr:
    """Quotient num/den of polynomials, content-normalized.

    The denominator has integer coefficients with positive leading term and the
    integer contents of numerator and denominator are coprime.  Common
    polynomial factors are removed only by :meth:`cancel`.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = poly(num)
        den = ONE if den is None else poly(den)
        if den.is_zero():
            raise DivisionByZeroPoly("rational expression with zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        if den.is_constant():
            self.num, self.den = num / den.constant_term(), ONE
            return
        # scale so that both are integral with jointly coprime contents
        cn, cd = num.content(), den.content()
        lcm = math.lcm(cn.denominator, cd.denominator)
        g = math.gcd(cn.numerator * (lcm // cn.denominator), cd.numerator * (lcm // cd.denominator))
        scale = Fraction(lcm, g)
        if den.leading_term()[1] < 0:
            scale = -scale
        self.num = num * scale
        self.den = den * scale

    @classmethod
    def of(cls, value) -> "RationalExpr":
        if isinstance(value, RationalExpr):
            return value
        if isinstance(value, str):
            return parse_expr(value)
        return cls(value)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = _coerce_rat(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalExpr(self.num + o.num, self.den)
        if o.den == ONE:
            return RationalExpr(self.num + o.num * self.den, self.den)
        if self.den == ONE:
            return RationalExpr(self.num * o.den + o.num, o.den)
        return RationalExpr(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.num, self.den)

    def __sub__(self, other):
        o = _coerce_rat(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce_rat(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce_rat(other)
        if o is None:
            return NotImplemented
        return RationalExpr(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_rat(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise DivisionByZeroPoly("division by zero rational expression")
        return RationalExpr(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = _coerce_rat(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return RationalExpr(self.den ** (-e), self.num ** (-e))
        return RationalExpr(self.num ** e, self.den ** e)

    def __eq__(self, other):
        o = _coerce_rat(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        c = self.cancel()
        return hash((c.num, c.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        c = self if self.den == ONE else self.cancel()
        if not c.den.is_constant():
            raise ValueError(f"not a polynomial: {self}")
        return c.num / c.den.constant_term()

    def is_constant(self) -> bool:
        c = self.cancel()
        return c.num.is_constant() and c.den.is_constant()

    def constant_value(self) -> Fraction:
        c = self.cancel()
        return c.num.constant_value() / c.den.constant_value()

    def variables(self) -> tuple[str, ...]:
        vs = set(self.num.variables()) | set(self.den.variables())
        return tuple(v for v in VARIABLES if v in vs)

    # -- structure ----------------------------------------------------
    def cancel(self) -> "RationalExpr":
        if self.den.is_constant() or self.num.is_zero():
            return self
        R, idx = _ring_setup(self.num, self.den)
        p, q = _to_ring(self.num, R, idx).cancel(_to_ring(self.den, R, idx))
        return RationalExpr(_from_ring(p, idx), _from_ring(q, idx))

    def diff(self, var: str) -> "RationalExpr":
        if self.den.is_constant():
            return RationalExpr(self.num.diff(var), self.den)
        return RationalExpr(self.num.diff(var) * self.den - self.num * self.den.diff(var),
                            self.den * self.den)

    def subs(self, var_name: str, value) -> "RationalExpr":
        """Substitute a rational expression (or number) for a variable."""
        value = _coerce_rat(value)
        return compose(self.num, var_name, value) / compose(self.den, var_name, value)

    def shift(self, var_name: str, offset: Number) -> "RationalExpr":
        return RationalExpr(self.num.shift(var_name, offset), self.den.shift(var_name, offset))

    def partial_eval(self, values: Mapping[str, Number]) -> "RationalExpr":
        return RationalExpr(self.num.partial_eval(values), self.den.partial_eval(values))

    def evaluate(self, values: Mapping[str, object]):
        d = self.den.evaluate(values)
        if d == 0:
            raise DivisionByZeroPoly("denominator vanishes at evaluation point")
        return self.num.evaluate(values) / d

    def rename(self, mapping: Mapping[str, str]) -> "RationalExpr":
        return RationalExpr(self.num.rename(mapping), self.den.rename(mapping))

    def limit_at_infinity(self, var_name: str) -> "RationalExpr":
        """Limit as var -> oo when finite (ratio of leading coefficients)."""
        dn, dd = self.num.degree(var_name), self.den.degree(var_name)
        if self.num.is_zero() or dn < dd:
            return RationalExpr(ZERO)
        if dn > dd:
            raise ValueError(f"expression diverges as {var_name} -> oo")
        return RationalExpr(self.num.leading_coeff(var_name), self.den.leading_coeff(var_name))

    def to_text(self) -> str:
        if self.den == ONE:
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RationalExpr({self.to_text()!r})"


def _coerce_rat(value) -> RationalExpr | None:
    if isinstance(value, RationalExpr):
        return value
    if isinstance(value, (MultiPoly, int, Fraction)):
        return RationalExpr(value)
    return None


def rat(value) -> RationalExpr:
    out = _coerce_rat(value) if not isinstance(value, str) else parse_expr(value)
    if out is None:
        raise TypeError(f"cannot interpret {value!r} as a rational expression")
    return out


def compose(p: MultiPoly, var_name: str, value: RationalExpr) -> RationalExpr:
    """p with ``var_name`` replaced by a rational expression (Horner form)."""
    coeffs = p.coeffs(var_name)
    if not coeffs:
        return RationalExpr(ZERO)
    deg = max(coeffs)
    a, b = value.num, value.den
    # p(a/b) = sum c_k a^k b^(deg-k) / b^deg
    num = ZERO
    a_pow = ONE
    b_pows = [ONE]
    for _ in range(deg):
        b_pows.append(b_pows[-1] * b)
    for k in range(deg + 1):
        c = coeffs.get(k)
        if c is not None:
            num = num + c * a_pow * b_pows[deg - k]
        if k < deg:
            a_pow = a_pow * a
    return RationalExpr(num, b_pows[deg])


# ---------------------------------------------------------------------------
# Exact complex rationals (for concrete growth rates)
# ---------------------------------------------------------------------------

class QComplex:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Number = 0, im: Number = 0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @classmethod
    def of(cls, value) -> "QComplex":
        if isinstance(value, QComplex):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, float):
            return cls(Fraction(value))
        return cls(value)

    def _o(self, other):
        if isinstance(other, QComplex):
            return other
        if isinstance(other, (int, Fraction)):
            return QComplex(other)
        return None

    def __add__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __sub__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return QComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return QComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        d = o.abs2()
        if not d:
            raise ZeroDivisionError("complex division by zero")
        return QComplex((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return QComplex(1) / (self ** (-e))
        result, base = QComplex(1), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def conjugate(self) -> "QComplex":
        return QComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QComplex({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def parse_complex(text: str) -> QComplex:
    """Parse '1+3i', '2i', '-1/2', '0.5-1i' into an exact complex rational."""
    s = text.replace(" ", "").replace("j", "i")
    if not s.endswith("i"):
        return QComplex(Fraction(s))
    body = s[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    while cut > 0 and body[cut - 1] in "eE":
        cut = max(body.rfind("+", 0, cut - 1), body.rfind("-", 0, cut - 1))
    if cut <= 0:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return QComplex(Fraction(re_part), Fraction(im_part))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_expr(text: str) -> RationalExpr:
    """Parse an arithmetic expression over the known variables."""
    tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    return _eval_node(tree.body)


def parse_poly(text: str) -> MultiPoly:
    expr = parse_expr(text)
    if not expr.den.is_constant():
        raise ValueError(f"not a polynomial: {text!r}")
    return expr.num / expr.den.constant_term()


def _eval_node(node) -> RationalExpr:
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left)
        if isinstance(node.op, ast.Pow):
            exp = _eval_node(node.right)
            if not (exp.is_polynomial() and exp.num.is_constant()):
                raise ValueError("exponent must be a constant integer")
            e = exp.num.constant_term() / exp.den.constant_term()
            if e.denominator != 1:
                raise ValueError("exponent must be an integer")
            return left ** int(e)
        right = _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        raise ValueError(f"unsupported operator {type(node.op).__name__}")
    if isinstance(node, ast.UnaryOp):
        val = _eval_node(node.operand)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
        raise ValueError("unsupported unary operator")
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        if isinstance(node.value, bool):
            raise ValueError("booleans are not numbers here")
        return RationalExpr(Fraction(str(node.value)))
    if isinstance(node, ast.Name):
        return RationalExpr(MultiPoly.var(node.id))
    raise ValueError(f"unsupported syntax: {ast.dump(node)}")


# ---------------------------------------------------------------------------
# Certificate-level operations
# ---------------------------------------------------------------------------

def poly_shift(p: MultiPoly, var_name: str, offset: Number) -> MultiPoly:
    _check_var(var_name)
    return p.shift(var_name, offset)


def poly_divmod(num: MultiPoly, den: MultiPoly, var_name: str) -> tuple[RationalExpr, MultiPoly]:
    """Long division in ``var_name`` over Q."""
    if den.is_zero():
        raise DivisionByZeroPoly("polynomial division by zero")
    dd = den.degree(var_name)
    if dd <= 0:
        raise ValueError(f"divisor must have positive degree in {var_name}")
    lead = den.leading_coeff(var_name)
    if not lead.is_constant():
        raise ValueError("divisor leading coefficient must be a rational number")
    lead_inv = 1 / lead.constant_term()
    v = MultiPoly.var(var_name)
    quo, rem = ZERO, num
    while not rem.is_zero() and rem.degree(var_name) >= dd:
        k = rem.degree(var_name) - dd
        term = rem.leading_coeff(var_name) * lead_inv * v ** k
        quo = quo + term
        rem = rem - term * den
    return RationalExpr(quo), rem


def imaginary_axis_abs2(p: MultiPoly, var_name: str = "x", out: str = "T") -> MultiPoly:
    """|p(i t)|^2 as a polynomial in T = t^2 (other variables real).

    With p = E(v^2) + v O(v^2) we have p(it) = E(-T) + i t O(-T), hence
    |p(it)|^2 = E(-T)^2 + T O(-T)^2.
    """
    if out in p.variables():
        raise ValueError(f"{out} already occurs in the polynomial")
    coeffs = p.coeffs(var_name)
    tt = MultiPoly.var(out)
    even, odd = ZERO, ZERO
    for k, c in coeffs.items():
        sign = -1 if (k // 2) % 2 else 1
        term = c * tt ** (k // 2) * sign
        if k % 2:
            odd = odd + term
        else:
            even = even + term
    return even * even + tt * odd * odd


def sign_certificate(p: MultiPoly, starts: Mapping[str, Number], strict: bool = False,
                     kind: Kind = Kind.SIGN) -> Certificate:
    """Shift-and-sign: certify p <= 0 (or < 0) for every var >= its start.

    Every variable of ``p`` must have a start.  After substituting
    v -> v + start for each, all coefficients must be <= 0; in strict mode the
    constant term must be < 0 as well, which makes p < 0 on the whole orthant.
    """
    missing = [v for v in p.variables() if v not in starts]
    if missing:
        raise ValueError(f"no start given for {missing}")
    shifted = p
    for v, s in starts.items():
        if v in p.variables():
            shifted = shifted.shift(v, s)
    positive = [(e, c) for e, c in shifted.graded_terms() if c > 0]
    ok = not positive
    if ok and strict and not shifted.constant_term() < 0:
        ok = False
    witness = {
        "shifts": {v: str(Fraction(s)) for v, s in starts.items()},
        "shifted": shifted,
        "strict": strict,
    }
    if positive:
        exps, c = positive[0]
        witness["first_positive"] = str(MultiPoly.from_exponents({exps: c}))
    msg = "all shifted coefficients non-positive" if ok else (
        "positive coefficient after shift" if positive else "constant term not negative")
    return make(kind, ok, msg, **witness)


def nonpositive_on_halfline(p: MultiPoly, var_name: str, start: Number) -> Certificate:
    others = [v for v in p.variables() if v != var_name]
    if others:
        raise ValueError(f"polynomial must be univariate in {var_name}")
    cert = sign_certificate(p, {var_name: start})
    shifted = cert.witness["shifted"]
    coeffs = shifted.univariate_coeffs(var_name) if not shifted.is_zero() else []
    return make(cert.kind, cert.passed, cert.message, var=var_name, start=str(Fraction(start)),
                coefficients=[str(c) for c in coeffs])


# ---------------------------------------------------------------------------
# Sturm sequences (univariate, dense Fraction lists low -> high)
# ---------------------------------------------------------------------------

def _trim(c: list[Fraction]) -> list[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def _urem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        a.pop()
        _trim(a)
    return a


def _uderiv(a: list[Fraction]) -> list[Fraction]:
    return [a[i] * i for i in range(1, len(a))]


def _ueval(a: Sequence[Fraction], v: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * v + c
    return acc


def sturm_sequence(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    seq = [_trim(list(coeffs))]
    if not seq[0]:
        return seq
    seq.append(_trim(_uderiv(seq[0])))
    while seq[-1]:
        r = _urem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: MultiPoly, var_name: str, lo: Number, hi: Number) -> int:
    """Number of distinct real roots in (lo, hi]."""
    coeffs = p.univariate_coeffs(var_name)
    seq = sturm_sequence(coeffs)
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    return _sign_changes(_ueval(s, lo) for s in seq) - _sign_changes(_ueval(s, hi) for s in seq)


def sturm_sign_on_interval(p: MultiPoly, var_name: str, lo: Number, hi: Number) -> Certificate:
    """Certify p < 0 on [lo, hi]: p(lo) < 0 and no real root in (lo, hi]."""
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    if p.is_zero():
        return make(Kind.SIGN, False, "zero polynomial", var=var_name, lo=str(lo), hi=str(hi))
    coeffs = p.univariate_coeffs(var_name)
    at_lo = _ueval(coeffs, lo)
    roots = count_real_roots(p, var_name, lo, hi)
    ok = at_lo < 0 and roots == 0
    msg = "negative at lo and root-free" if ok else (
        f"{roots} real root(s) in interval" if roots else "not negative at lo")
    return make(Kind.SIGN, ok, msg, var=var_name, lo=str(lo), hi=str(hi),
                value_at_lo=str(at_lo), roots_in_interval=roots,
                sequence_length=len(sturm_sequence(coeffs)))


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------

def nullspace(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : row . v = 0 for all rows} by reduced row echelon form."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {c: Fraction(v) for c, v in raw.items() if v}
        for col, prow in pivots.items():
            f = row.get(col)
            if f:
                for c, v in prow.items():
                    nv = row.get(c, 0) - f * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        if not row:
            continue
        col = min(row)
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        for prow in pivots.values():
            f = prow.get(col)
            if f:
                for c, v in row.items():
                    nv = prow.get(c, 0) - f * v
                    if nv:
                        prow[c] = nv
                    else:
                        prow.pop(c, None)
        pivots[col] = row
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for col, prow in pivots.items():
            vec[col] = -prow.get(free, Fraction(0))
        basis.append(vec)
    return basis
