"""Radial mode equation, SUSY transform and Frobenius data.

Operators are linear differential operators with rational-function
coefficients in one variable.  Multiplications by powers r^a (1-r^2)^b with
symbolic exponents are never evaluated: a chain of such multipliers and
first-order factors is normalized to G * Op where G is a formal power and Op
has rational coefficients (using d o g = g o (d + g'/g)).  For the transforms
used here G always ends with integer exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from .errors import InvalidIndex, NotRegularSingular, TableMismatch, UnsupportedCase
from .exactmath import (ONE, ZERO, MultiPoly, RationalExpr, nullspace, poly_div_exact,
                        poly_gcd, poly_sqrt, rat, var)

R = var("r")
LAMBDA = var("x")
S = 1 - R * R

Number = Union[int, Fraction]
Scalar = Union[RationalExpr, MultiPoly, int, Fraction]


def _poly(v) -> MultiPoly:
    return v if isinstance(v, MultiPoly) else MultiPoly.const(v)


def _lam(lam) -> MultiPoly:
    return LAMBDA if lam is None else _poly(lam)


# ---------------------------------------------------------------------------
# Formal powers
# ---------------------------------------------------------------------------

class FormalPower:
    """Product of base^exponent with polynomial bases and polynomial exponents."""

    __slots__ = ("factors",)

    def __init__(self, factors: Mapping[MultiPoly, Scalar] | Iterable = ()):
        items = factors.items() if isinstance(factors, Mapping) else factors
        store: dict[MultiPoly, MultiPoly] = {}
        for base, e in items:
            e = _poly(e)
            store[base] = store.get(base, ZERO) + e
        self.factors = {b: e for b, e in store.items() if not e.is_zero()}

    @classmethod
    def multiplier(cls, a: Scalar, b: Scalar) -> "FormalPower":
        """r^a (1 - r^2)^b."""
        return cls([(R, a), (S, b)])

    def __mul__(self, other: "FormalPower") -> "FormalPower":
        return FormalPower(list(self.factors.items()) + list(other.factors.items()))

    def inverse(self) -> "FormalPower":
        return FormalPower([(b, -e) for b, e in self.factors.items()])

    def log_derivative(self, var_name: str = "r") -> RationalExpr:
        out = RationalExpr(ZERO)
        for b, e in self.factors.items():
            out = out + RationalExpr(e * b.diff(var_name), b)
        return out.cancel()

    def is_rational(self) -> bool:
        return all(e.is_constant() and e.constant_term().denominator == 1
                   for e in self.factors.values())

    def as_rational(self) -> RationalExpr:
        if not self.is_rational():
            raise ValueError(f"non-integer exponent in {self}")
        out = RationalExpr(ONE)
        for b, e in self.factors.items():
            out = out * RationalExpr(b) ** int(e.constant_term())
        return out

    def to_text(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"({b})^({e})" for b, e in self.factors.items())

    __str__ = to_text

    def __repr__(self):
        return f"FormalPower({self.to_text()!r})"


# ---------------------------------------------------------------------------
# Differential operators
# ---------------------------------------------------------------------------

class DiffOp:
    """sum_k c_k d^k with rational-function coefficients c_k."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Sequence[Scalar], var_name: str = "r"):
        cs = [rat(c).cancel() for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var_name

    @classmethod
    def multiplier(cls, c: Scalar, var_name: str = "r") -> "DiffOp":
        return cls([c], var_name)

    @classmethod
    def d(cls, var_name: str = "r") -> "DiffOp":
        return cls([0, 1], var_name)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> RationalExpr:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else RationalExpr(ZERO)

    def leading(self) -> RationalExpr:
        return self.coeffs[-1]

    def __call__(self, f: Scalar) -> RationalExpr:
        f = rat(f)
        out = RationalExpr(ZERO)
        for c in self.coeffs:
            if not c.is_zero():
                out = out + c * f
            f = f.diff(self.var)
        return out.cancel()

    def _same(self, other: "DiffOp"):
        if other.var != self.var:
            raise ValueError("operators in different variables")

    def __add__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.multiplier(other, self.var)
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.coeff(k) + other.coeff(k) for k in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other if isinstance(other, DiffOp) else -rat(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return self.compose(other)
        return self.compose(DiffOp.multiplier(other, self.var))

    def __rmul__(self, other):
        c = rat(other)
        return DiffOp([c * a for a in self.coeffs], self.var)

    def compose(self, other: "DiffOp") -> "DiffOp":
        """self o other by the Leibniz rule."""
        self._same(other)
        if not self.coeffs or not other.coeffs:
            return DiffOp([], self.var)
        out = [RationalExpr(ZERO)] * (self.order + other.order + 1)
        for j, b in enumerate(other.coeffs):
            derivs = [b]
            for _ in range(self.order):
                derivs.append(derivs[-1].diff(self.var))
            for i, a in enumerate(self.coeffs):
                if a.is_zero():
                    continue
                for k in range(i + 1):
                    bd = derivs[i - k]
                    if not bd.is_zero():
                        out[j + k] = out[j + k] + comb(i, k) * a * bd
        return DiffOp(out, self.var)

    def right_divmod(self, other: "DiffOp") -> tuple["DiffOp", "DiffOp"]:
        """(Q, Rem) with self = Q o other + Rem and order(Rem) < order(other)."""
        self._same(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero operator")
        quo = DiffOp([], self.var)
        rem = self
        lead = other.leading()
        while rem.coeffs and rem.order >= other.order:
            k = rem.order - other.order
            term = DiffOp([0] * k + [(rem.leading() / lead).cancel()], self.var)
            quo = quo + term
            rem = rem - term.compose(other)
        return quo, rem

    def conjugate(self, mu: Scalar) -> "DiffOp":
        """h^-1 o self o h where h'/h = mu, i.e. d replaced by d + mu."""
        mu = rat(mu)
        shift = DiffOp([mu, 1], self.var)
        power = DiffOp([1], self.var)
        out = DiffOp([], self.var)
        for c in self.coeffs:
            out = out + c * power
            power = shift.compose(power)
        return out

    def monic(self) -> "DiffOp":
        lead = self.leading()
        return DiffOp([c / lead for c in self.coeffs], self.var)

    def normal_form(self) -> tuple[RationalExpr, RationalExpr]:
        """(P, Q) of y'' + P y' + Q y for a second-order operator."""
        if self.order != 2:
            raise ValueError("normal form needs a second-order operator")
        m = self.monic()
        return m.coeff(1), m.coeff(0)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return self.var == other.var and all(self.coeff(k) == other.coeff(k) for k in range(n))

    def __hash__(self):
        return hash((self.var, self.order))

    def to_text(self) -> str:
        return " + ".join(f"[{c}] d^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()) or "0"

    __str__ = to_text

    def __repr__(self):
        return f"DiffOp({self.to_text()!r})"


@dataclass(frozen=True)
class ChainStep:
    """Either a formal multiplier or a factor (d - weight)."""

    multiplier: FormalPower | None = None
    weight: RationalExpr | None = None


def normalize_chain(steps: Sequence[ChainStep], var_name: str = "r") -> tuple[FormalPower, DiffOp]:
    """Collapse steps (listed in the order they act) to G o Op."""
    g = FormalPower()
    op = DiffOp([1], var_name)
    for step in steps:
        if step.multiplier is not None:
            g = step.multiplier * g
        else:
            factor = DiffOp([g.log_derivative(var_name) - step.weight, 1], var_name)
            op = factor.compose(op)
    return g, op


# ---------------------------------------------------------------------------
# Mode equation
# ---------------------------------------------------------------------------

def _indices(l, m) -> tuple[MultiPoly, MultiPoly]:
    lp, mp = _poly(l), _poly(m)
    if lp.is_constant() and mp.is_constant():
        lv, mv = lp.constant_term(), mp.constant_term()
        if lv.denominator != 1 or mv.denominator != 1 or lv < 0 or mv < 0:
            raise InvalidIndex(f"indices must be non-negative integers, got ({l}, {m})")
        if lv == 0 and mv != 1:
            raise InvalidIndex("the only l = 0 case is (0, 1)")
        if abs(mv - lv) > 1:
            raise InvalidIndex(f"m must be one of l-1, l, l+1, got ({l}, {m})")
    elif "m" not in mp.variables():
        off = mp - lp
        if not off.is_constant() or off.constant_term() not in (-1, 0, 1):
            raise InvalidIndex(f"m - l must be -1, 0 or 1, got {off}")
    return lp, mp


def potential(l, m) -> RationalExpr:
    """V_{l,m}(r); l and m may be integers or polynomials (e.g. l, l - 1)."""
    lp, mp = _indices(l, m)
    ll, mm = lp * (lp + 1), mp * (mp + 1)
    num = (4 + 2 * mm - ll) * R ** 4 + (2 * mm - 12) * R ** 2 + ll
    return RationalExpr(num, R ** 2 * (1 + R ** 2) ** 2)


@dataclass(frozen=True)
class ModeODE:
    """(1-r^2) f'' + (2/r - 2(lambda+1) r) f' - (lambda^2 + lambda + V) f = 0."""

    l: object
    m: object
    lam: MultiPoly
    potential: RationalExpr

    def operator(self) -> DiffOp:
        r = RationalExpr(R)
        first = 2 / r - 2 * (RationalExpr(self.lam) + 1) * r
        zeroth = -(RationalExpr(self.lam * self.lam + self.lam) + self.potential)
        return DiffOp([zeroth, first, RationalExpr(S)])

    def residual(self, phi: Scalar) -> RationalExpr:
        return self.operator()(phi)


def mode_ode(l, m, lam=None, transformed: bool = False) -> ModeODE:
    pot = transformed_potential(l, m) if transformed else potential(l, m)
    return ModeODE(l, m, _lam(lam), pot)


def mode_ode_residual(phi: Scalar, lam, l, m, transformed: bool = False) -> RationalExpr:
    return mode_ode(l, m, lam, transformed).residual(phi)


def free_operator(lam=None) -> DiffOp:
    """The mode operator without its potential term."""
    return ModeODE(0, 1, _lam(lam), RationalExpr(ZERO)).operator()


# ---------------------------------------------------------------------------
# SUSY data
# ---------------------------------------------------------------------------

def _r(text: str) -> RationalExpr:
    return rat(text.replace("λ", "x"))


@dataclass(frozen=True)
class SusyData:
    case: tuple[int, int]
    rates: tuple[int, ...]
    solutions: tuple[RationalExpr, ...]
    weights: tuple[RationalExpr, ...]
    potential: RationalExpr
    transformed_potential: RationalExpr
    kernel_basis: tuple[tuple[int, RationalExpr], ...]


def _table() -> dict[tuple[int, int], SusyData]:
    phi01_0 = _r("(r^2-3)/(1+r^2)")
    return {
        (0, 1): SusyData(
            (0, 1), (0, 1),
            (phi01_0, _r("1/(1+r^2)")),
            (_r("(r^4+6*r^2-3)/(r*(r^4-2*r^2-3))"), _r("(r^4-9*r^2+6)/(r*(1-r^2)*(3-r^2))")),
            _r("8*(r^2-1)/(1+r^2)^2"), _r("6/r^2"),
            ((0, phi01_0), (1, _r("1/(1+r^2)")), (2, phi01_0 / RationalExpr(S))),
        ),
        (1, 0): SusyData(
            (1, 0), (1,), (_r("r/(1+r^2)"),), (_r("(r^4+3*r^2-2)/(r*(r^4-1))"),),
            _r("(2*r^4-12*r^2+2)/(r^2*(1+r^2)^2)"), _r("(6-2*r^2)/(r^2*(1+r^2))"),
            ((1, _r("r/(1+r^2)")),),
        ),
        (1, 1): SusyData(
            (1, 1), (0,), (_r("r/(1+r^2)"),), (_r("2/(r*(1+r^2))"),),
            _r("(6*r^4-8*r^2+2)/(r^2*(1+r^2)^2)"), _r("(6-2*r^4)/(r^2*(1+r^2))"),
            ((0, _r("r/(1+r^2)")), (2, _r("r/(1-r^4)"))),
        ),
        (2, 1): SusyData(
            (2, 1), (0,), (_r("r^2/(1+r^2)"),), (_r("(3+r^2)/(r*(1+r^2))"),),
            _r("(2*r^4-8*r^2+6)/(r^2*(1+r^2)^2)"), _r("12/(r^2*(1+r^2))"),
            ((0, _r("r^2/(1+r^2)")), (2, _r("r^2/(1-r^4)"))),
        ),
    }


SUSY_TABLE = _table()
SUSY_CASES = tuple(SUSY_TABLE)


def susy_data(l: int, m: int) -> SusyData:
    try:
        return SUSY_TABLE[(l, m)]
    except (KeyError, TypeError):
        raise UnsupportedCase(f"no SUSY transform for ({l}, {m})") from None


def derived_weights(l: int, m: int) -> tuple[RationalExpr, ...]:
    """Weights from their definition as logarithmic derivatives.

    The second (0,1) weight uses the multiplier exponent lambda/2 at the
    second rate, M_{1,1/2}.
    """
    data = susy_data(l, m)
    first = FormalPower.multiplier(1, Fraction(data.rates[0], 2))
    w0 = (first.log_derivative() + data.solutions[0].diff("r") / data.solutions[0]).cancel()
    if len(data.rates) == 1:
        return (w0,)
    steps = [ChainStep(multiplier=FormalPower.multiplier(1, Fraction(data.rates[1], 2))),
             ChainStep(weight=w0),
             ChainStep(multiplier=FormalPower.multiplier(0, 1))]
    g, op = normalize_chain(steps)
    h = op(data.solutions[1])
    w1 = (g.log_derivative() + h.diff("r") / h).cancel()
    return (w0, w1)


def susy_operator(l: int, m: int, lam=None) -> DiffOp:
    """S_{l,m} as a rational operator (the formal powers cancel)."""
    data = susy_data(l, m)
    lam = _lam(lam)
    half = lam * Fraction(1, 2)
    steps = [ChainStep(multiplier=FormalPower.multiplier(1, half)),
             ChainStep(weight=data.weights[0])]
    if len(data.weights) == 2:
        steps += [ChainStep(multiplier=FormalPower.multiplier(0, 1)),
                  ChainStep(weight=data.weights[1])]
    steps.append(ChainStep(multiplier=FormalPower.multiplier(-1, 1 - half)))
    g, op = normalize_chain(steps)
    return g.as_rational() * op


def susy_transform(phi: Scalar, lam, l: int, m: int) -> RationalExpr:
    return susy_operator(l, m, lam)(phi)


@dataclass(frozen=True)
class Intertwining:
    """free o S = K o L + rem and S = sigma o L + s_rem, rem = Vt s_rem."""

    transformed_potential: RationalExpr
    consistent: bool
    lambda_free: bool


def derive_transformed_potential(l: int, m: int) -> Intertwining:
    lam = LAMBDA
    s_op = susy_operator(l, m, lam)
    ell = ModeODE(l, m, lam, potential(l, m)).operator()
    _, rem = free_operator(lam).compose(s_op).right_divmod(ell)
    _, s_rem = s_op.right_divmod(ell)
    vt = (rem.coeff(1) / s_rem.coeff(1)).cancel()
    consistent = (rem.coeff(0) - vt * s_rem.coeff(0)).is_zero() or \
        (rem.coeff(0) - vt * s_rem.coeff(0)).cancel().is_zero()
    return Intertwining(vt, consistent, "x" not in vt.variables())


def transformed_potential(l, m) -> RationalExpr:
    key = (l, m) if isinstance(l, int) and isinstance(m, int) else None
    if key not in SUSY_TABLE:
        return potential(l, m)
    derived = derive_transformed_potential(*key)
    expected = SUSY_TABLE[key].transformed_potential
    if not (derived.consistent and derived.lambda_free and derived.transformed_potential == expected):
        raise TableMismatch(f"transformed potential of {key} disagrees with the table",
                            derived.transformed_potential, expected)
    return expected


def kernel_search(l: int, m: int, lam: int, degree: int = 6,
                  powers: tuple[int, int] = (2, 2)) -> list[RationalExpr]:
    """Rational f = P(r) / ((1+r^2)^a (1-r^2)^b), deg P <= degree, with
    S f = 0 and L f = 0 at the given rate.  Returns a basis."""
    a, b = powers
    den = (1 + R * R) ** a * S ** b
    s_op = susy_operator(l, m, lam)
    ell = ModeODE(l, m, _poly(lam), potential(l, m)).operator()
    images = []
    for k in range(degree + 1):
        f = RationalExpr(R ** k, den)
        images.append((s_op(f), ell(f)))
    rows: dict[tuple[int, int], dict[int, Fraction]] = {}
    for which in (0, 1):
        common = ONE
        for img in images:
            d = img[which].den
            common = poly_div_exact(common * d, poly_gcd(common, d))
        for k, img in enumerate(images):
            num = poly_div_exact(img[which].num * common, img[which].den)
            for key, c in num.terms.items():
                rows.setdefault((which, key), {})[k] = c
    basis = nullspace(list(rows.values()), degree + 1)
    out = []
    for vec in basis:
        p = sum((c * R ** k for k, c in enumerate(vec) if c), ZERO)
        out.append(RationalExpr(p, den).cancel())
    return out


# ---------------------------------------------------------------------------
# Frobenius indices
# ---------------------------------------------------------------------------

INFINITY = "inf"


def _order_at_zero(p: MultiPoly, var_name: str) -> tuple[int, MultiPoly]:
    """Lowest power of var in p and its coefficient."""
    cs = p.coeffs(var_name)
    k = min(cs)
    return k, cs[k]


def local_limit(expr: RationalExpr, var_name: str, point, power: int = 0) -> RationalExpr:
    """lim (v - point)^power * expr as v -> point (point may be INFINITY)."""
    e = expr.cancel()
    if point == INFINITY:
        num = e.num * MultiPoly.var(var_name) ** power
        dn, dd = num.degree(var_name), e.den.degree(var_name)
        if e.num.is_zero() or dn < dd:
            return RationalExpr(ZERO)
        if dn > dd:
            raise NotRegularSingular(f"coefficient has a pole of order {dn - dd} at infinity")
        return RationalExpr(num.leading_coeff(var_name), e.den.leading_coeff(var_name))
    if e.num.is_zero():
        return RationalExpr(ZERO)
    num = e.num.shift(var_name, point)
    den = e.den.shift(var_name, point)
    kn, cn = _order_at_zero(num, var_name)
    kd, cd = _order_at_zero(den, var_name)
    val = kn - kd + power
    if val < 0:
        raise NotRegularSingular(f"pole of excess order {-val} at {var_name} = {point}")
    if val > 0:
        return RationalExpr(ZERO)
    return RationalExpr(cn, cd)


@dataclass(frozen=True)
class IndicialData:
    p0: RationalExpr
    q0: RationalExpr
    roots: tuple[RationalExpr, RationalExpr]

    def as_set(self) -> set[str]:
        return {str(r.cancel()) for r in self.roots}


def _rational_sqrt_expr(e: RationalExpr) -> RationalExpr | None:
    e = e.cancel()
    num_scale = e.den
    top = poly_sqrt(e.num * num_scale)
    if top is None:
        return None
    return RationalExpr(top, e.den)


def indicial_roots(p0: RationalExpr, q0: RationalExpr, at_infinity: bool = False) -> IndicialData:
    """Roots of rho^2 + (p0 - 1) rho + q0 (at infinity rho^2 + (1 - p0) rho + q0)."""
    b = (1 - p0) if at_infinity else (p0 - 1)
    disc = (b * b - 4 * q0).cancel()
    root = _rational_sqrt_expr(disc)
    if root is None:
        raise ValueError(f"indicial discriminant {disc} is not a perfect square")
    r1 = ((-b + root) / 2).cancel()
    r2 = ((-b - root) / 2).cancel()
    return IndicialData(p0, q0, (r1, r2))


def frobenius_indices(equation: Union[ModeODE, DiffOp], point) -> IndicialData:
    """Indices at a regular singular point; point is a number or INFINITY."""
    op = equation.operator() if isinstance(equation, ModeODE) else equation
    p, q = op.normal_form()
    v = op.var
    if point == INFINITY:
        p0 = local_limit(p, v, INFINITY, 1)
        q0 = local_limit(q, v, INFINITY, 2)
        return indicial_roots(p0, q0, at_infinity=True)
    p0 = local_limit(p, v, point, 1)
    q0 = local_limit(q, v, point, 2)
    return indicial_roots(p0, q0)
