"""Frobenius series at z = 0, coefficient ratios, quasisolutions, error model."""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .cases import ModeCase
from .errors import NoBoundsRow, RatioBreakdown, TableMismatch, UnsupportedCase
from .exactmath import MultiPoly, QComplex, RationalExpr, parse_complex, rat, var
from .standardform import HeunParams, to_heun
from . import tables

N = var("n")
LAMBDA = var("x")

Lam = Union[QComplex, int, Fraction, str, complex]


def as_case(c, m=None) -> ModeCase:
    if isinstance(c, ModeCase):
        return c
    if isinstance(c, str):
        return ModeCase(c)
    return ModeCase(f"{c}{m}")


def as_lambda(lam: Lam) -> QComplex:
    if isinstance(lam, QComplex):
        return lam
    if isinstance(lam, str):
        return parse_complex(lam)
    if isinstance(lam, complex):
        return QComplex(Fraction(lam.real), Fraction(lam.imag))
    return QComplex(lam)


# ---------------------------------------------------------------------------
# Recurrence coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecurrenceCoeffs:
    case: ModeCase
    params: HeunParams
    R: RationalExpr
    P: RationalExpr
    Q: RationalExpr
    A: RationalExpr
    B: RationalExpr

    @property
    def r0(self) -> RationalExpr:
        return (self.params.q / (self.params.a * self.params.gamma)).cancel()

    def limits(self) -> tuple[RationalExpr, RationalExpr]:
        return self.A.limit_at_infinity("n"), self.B.limit_at_infinity("n")

    def characteristic_polynomial(self) -> MultiPoly:
        """t^2 - A_oo t - B_oo in the variable T."""
        a_inf, b_inf = self.limits()
        t = var("T")
        return t * t - a_inf.as_poly() * t - b_inf.as_poly()


def _printed(table: dict, case: ModeCase) -> RationalExpr:
    key = case.key if case.key in table else "generic"
    e = rat(table[key])
    if key == "generic":
        e = e.subs("m", RationalExpr(case.m_poly))
        if not case.is_family:
            e = e.subs("l", RationalExpr(case.l_poly))
    return e


@lru_cache(maxsize=None)
def coeff_AB(c, m=None) -> RecurrenceCoeffs:
    case = as_case(c, m)
    if case.key == "01" or not case.is_family and int(case.key[0]) == 0:
        raise UnsupportedCase("the (0,1) case is hypergeometric, not Heun")
    hp = to_heun(case)
    n = RationalExpr(N)
    a = hp.a
    r_n = a * (n + 1) * (hp.gamma + n)
    p_n = (n - 1 + hp.alpha) * (n - 1 + hp.beta)
    q_n = n * ((n - 1 + hp.gamma) * (1 + a) + a * hp.delta + hp.epsilon)
    big_a = ((q_n + hp.q) / r_n).cancel()
    big_b = (-p_n / r_n).cancel()
    exp_a, exp_b = _printed(tables.A_N, case), _printed(tables.B_N, case)
    if big_a != exp_a:
        raise TableMismatch(f"{case}: A_n differs from the printed formula", big_a, exp_a)
    if big_b != exp_b:
        raise TableMismatch(f"{case}: B_n differs from the printed formula", big_b, exp_b)
    return RecurrenceCoeffs(case, hp, r_n.cancel(), p_n.cancel(), q_n.cancel(), big_a, big_b)


# ---------------------------------------------------------------------------
# Concrete evaluation at complex-rational lambda
# ---------------------------------------------------------------------------

class _NPoly:
    """A polynomial in n whose coefficients are pre-evaluated at lambda."""

    __slots__ = ("coeffs",)

    def __init__(self, p: MultiPoly, lam: QComplex, values: dict | None = None):
        p = p.partial_eval(values) if values else p
        extra = set(p.variables()) - {"n", "x"}
        if extra:
            raise ValueError(f"unbound variables {sorted(extra)}")
        cs = p.coeffs("n")
        deg = max(cs) if cs else 0
        self.coeffs = [cs[k].evaluate({"x": lam}) if k in cs else QComplex(0)
                       for k in range(deg + 1)]
        self.coeffs = [c if isinstance(c, QComplex) else QComplex(c) for c in self.coeffs]

    def __call__(self, n):
        acc = QComplex(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc


class _NRational:
    __slots__ = ("num", "den")

    def __init__(self, e: RationalExpr, lam: QComplex, values: dict | None = None):
        self.num = _NPoly(e.num, lam, values)
        self.den = _NPoly(e.den, lam, values)

    def __call__(self, n):
        return self.num(n) / self.den(n)


def _family_values(case: ModeCase, l_value: int | None) -> dict | None:
    if case.is_family:
        if l_value is None:
            raise ValueError(f"{case}: a concrete l is required")
        return {"l": l_value}
    return None


def series_coefficients(c, lam: Lam, count: int, l_value: int | None = None) -> list[QComplex]:
    """x_0 .. x_count of the solution analytic at z = 0 (x_0 = 1)."""
    case = as_case(c)
    co = coeff_AB(case)
    lam = as_lambda(lam)
    vals = _family_values(case, l_value)
    hp = co.params
    q = _NRational(hp.q, lam, vals)(0)
    a_gamma = _NRational(hp.a * hp.gamma, lam, vals)(0)
    rn = _NPoly(co.R.num, lam, vals)
    rd = _NPoly(co.R.den, lam, vals)
    pn = _NPoly(co.P.num, lam, vals)
    pd = _NPoly(co.P.den, lam, vals)
    qn = _NPoly(co.Q.num, lam, vals)
    qd = _NPoly(co.Q.den, lam, vals)
    xs = [QComplex(1)]
    if count >= 1:
        xs.append(q / a_gamma)
    for k in range(1, count):
        rk = rn(k) / rd(k)
        xs.append(((qn(k) / qd(k) + q) * xs[k] - pn(k) / pd(k) * xs[k - 1]) / rk)
    return xs


def ratio_sequence(c, lam: Lam, count: int, l_value: int | None = None) -> list[QComplex]:
    """r_0 .. r_count with r_0 = q/(a gamma) and r_n = A_n + B_n / r_{n-1}."""
    case = as_case(c)
    co = coeff_AB(case)
    lam = as_lambda(lam)
    vals = _family_values(case, l_value)
    a_n = _NRational(co.A, lam, vals)
    b_n = _NRational(co.B, lam, vals)
    rs = [_NRational(co.r0, lam, vals)(0)]
    for k in range(1, count + 1):
        prev = rs[-1]
        if not prev:
            raise RatioBreakdown(f"{case}: r_{k - 1} vanishes at lambda = {lam}", k - 1)
        rs.append(a_n(k) + b_n(k) / prev)
    return rs


def symbolic_ratio(c, n_target: int) -> RationalExpr:
    """r_n as a rational function of lambda (and l for families)."""
    co = coeff_AB(as_case(c))
    r = co.r0
    for k in range(1, n_target + 1):
        r = (co.A.partial_eval({"n": k}) + co.B.partial_eval({"n": k}) / r).cancel()
    return r


# ---------------------------------------------------------------------------
# Quasisolutions and the error model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuasiSolution:
    case: ModeCase
    rtilde: RationalExpr

    def limit(self) -> RationalExpr:
        return self.rtilde.limit_at_infinity("n")

    def limit_is_one(self) -> bool:
        diff = (self.rtilde - 1).cancel()
        return diff.is_zero() or diff.num.degree("n") < diff.den.degree("n")

    def quadratic_coeffs(self) -> tuple[RationalExpr, RationalExpr, RationalExpr]:
        """(c2, c1, c0) with rtilde = c2 x^2 + c1 x + c0."""
        e = self.rtilde.cancel()
        cs = e.num.coeffs("x")
        if max(cs) > 2 or "x" in e.den.variables():
            raise ValueError("quasisolution is not quadratic in lambda")
        return tuple((RationalExpr(cs.get(k, MultiPoly()), e.den)).cancel()
                     for k in (2, 1, 0))  # type: ignore[return-value]


_QUASI_OVERRIDES: dict[str, str] = {}


@contextmanager
def quasisolution_overrides(rows: dict[str, str]):
    """Temporarily replace quasisolution rows (used for negative controls)."""
    saved = dict(_QUASI_OVERRIDES)
    _QUASI_OVERRIDES.update(rows)
    _error_model.cache_clear()
    try:
        yield
    finally:
        _QUASI_OVERRIDES.clear()
        _QUASI_OVERRIDES.update(saved)
        _error_model.cache_clear()


def quasisolution(c, m=None) -> QuasiSolution:
    case = as_case(c, m)
    key, l_value = case.quasi_key
    rows = {**tables.QUASI, **_QUASI_OVERRIDES}
    if key not in rows:
        raise UnsupportedCase(f"no quasisolution row for {case}")
    e = rat(rows[key])
    if l_value is not None:
        e = e.partial_eval({"l": l_value})
    qs = QuasiSolution(case, e.cancel())
    if not qs.limit_is_one():
        raise TableMismatch(f"{case}: quasisolution does not tend to 1", qs.limit(), 1)
    return qs


@dataclass(frozen=True)
class ErrorModel:
    case: ModeCase
    a_n: RationalExpr
    b_n: RationalExpr
    abar: RationalExpr | None
    bbar: RationalExpr | None
    n0: int | None
    u: Fraction | None

    @property
    def has_bounds(self) -> bool:
        return self.abar is not None

    def with_bounds(self, abar, bbar, n0: int, u) -> "ErrorModel":
        return ErrorModel(self.case, self.a_n, self.b_n, rat(abar), rat(bbar), n0, Fraction(u))


def error_terms(rtilde: RationalExpr, co: RecurrenceCoeffs) -> tuple[RationalExpr, RationalExpr]:
    prev = rtilde.shift("n", -1)
    denom = prev * rtilde
    a_n = ((co.A * prev + co.B) / denom - 1).cancel()
    b_n = (-co.B / denom).cancel()
    return a_n, b_n


@lru_cache(maxsize=None)
def _error_model(key: str) -> ErrorModel:
    case = ModeCase(key)
    a_n, b_n = error_terms(quasisolution(case).rtilde, coeff_AB(case))
    row = tables.BOUNDS.get(key)
    if row is None:
        return ErrorModel(case, a_n, b_n, None, None, None, None)
    abar, bbar, n0, u = row
    return ErrorModel(case, a_n, b_n, rat(abar), rat(bbar), n0, Fraction(u))


def error_coeffs(c, m=None) -> ErrorModel:
    """a_n, b_n with the printed bounds; NoBoundsRow (carrying the model) if absent."""
    model = _error_model(as_case(c, m).key)
    if not model.has_bounds:
        raise NoBoundsRow(f"{model.case}: no printed bounds", model)
    return model


def error_model(c, m=None) -> ErrorModel:
    """Like error_coeffs but returns a bound-less model instead of raising."""
    return _error_model(as_case(c, m).key)


def relative_errors(rs: Sequence[QComplex], rtilde: RationalExpr, lam: Lam,
                    l_value: int | None = None) -> list[QComplex]:
    """e_n = r_n / rtilde_n - 1 for n >= 1."""
    lam = as_lambda(lam)
    vals = {"l": l_value} if l_value is not None else None
    rt = _NRational(rtilde, lam, vals)
    return [QComplex(0)] + [rs[k] / rt(k) - 1 for k in range(1, len(rs))]
