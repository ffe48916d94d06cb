"""Reduction of the transformed mode equation to hypergeometric and Heun form.

Reductions transport the operator itself: a change of variable pulls the
operator back and an ansatz f = h g conjugates it by h'/h.  Multivalued
factors such as z^(1/2) only ever enter through their logarithmic derivative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cases import ModeCase
from .errors import InvalidIndex, TableMismatch
from .exactmath import MultiPoly, RationalExpr, rat, var
from .odesystem import (INFINITY, DiffOp, FormalPower, frobenius_indices, local_limit,
                        mode_ode)
from . import tables

Z = var("z")
LAMBDA = var("x")
_R_IDX, _Z_IDX = 6, 5


def _even_to_z(expr: RationalExpr) -> RationalExpr:
    """f(r) even in r, rewritten as g(z) with z = r^2."""
    e = expr.cancel()
    num, den = e.num, e.den

    def parity(p: MultiPoly) -> set[int]:
        return {exps[_R_IDX] % 2 for exps, _ in p.items()}

    if parity(num) == {1} and parity(den) == {1}:
        r = var("r")
        num = RationalExpr(num, r).as_poly()
        den = RationalExpr(den, r).as_poly()
    if parity(num) - {0} or parity(den) - {0}:
        raise ValueError(f"{expr} is not even in r")

    def halve(p: MultiPoly) -> MultiPoly:
        out = {}
        for exps, c in p.items():
            ex = list(exps)
            ex[_Z_IDX] += ex[_R_IDX] // 2
            ex[_R_IDX] = 0
            out[tuple(ex)] = c
        return MultiPoly.from_exponents(out)

    return RationalExpr(halve(num), halve(den))


def square_map(op: DiffOp) -> DiffOp:
    """Second-order operator in r rewritten in z = r^2."""
    if op.var != "r" or op.order != 2:
        raise ValueError("expects a second-order operator in r")
    r = RationalExpr(var("r"))
    c0, c1, c2 = op.coeffs
    new = [c0, 2 * r * c1 + 2 * c2, 4 * r * r * c2]
    lead = new[2]
    return DiffOp([_even_to_z(c / lead) for c in new], "z")


def mobius_map(op: DiffOp) -> DiffOp:
    """Pull back along old z = w / (2 - w), i.e. w = 2 z / (1 + z)."""
    if op.var != "z" or op.order != 2:
        raise ValueError("expects a second-order operator in z")
    w = RationalExpr(var("r"))
    f = w / (2 - w)
    f1 = f.diff("r").cancel()
    f2 = f1.diff("r").cancel()
    c0, c1, c2 = (c.subs("z", f) for c in op.coeffs)
    new = [c0, c1 / f1 - c2 * f2 / (f1 * f1 * f1), c2 / (f1 * f1)]
    lead = new[2]
    return DiffOp([(c / lead).cancel().rename({"r": "z"}) for c in new], "z")


# ---------------------------------------------------------------------------
# Hypergeometric case
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HypergeomParams:
    a: RationalExpr
    b: RationalExpr
    c: RationalExpr

    def at(self, lam) -> "HypergeomParams":
        return HypergeomParams(*(p.partial_eval({"x": lam}) for p in (self.a, self.b, self.c)))

    def operator(self) -> DiffOp:
        z = RationalExpr(Z)
        p = self.c / z + (1 + self.a + self.b - self.c) / (z - 1)
        q = self.a * self.b / (z * (z - 1))
        return DiffOp([q, p, 1], "z")


def hypergeometric_operator(lam=None) -> DiffOp:
    """Transformed (0,1) operator in z = r^2 after the ansatz f = z g."""
    op = square_map(mode_ode(0, 1, lam, transformed=True).operator())
    return op.conjugate(FormalPower([(Z, 1)]).log_derivative("z"))


def to_hypergeometric(lam=None) -> HypergeomParams:
    op = hypergeometric_operator(lam)
    p, q = op.normal_form()
    c = local_limit(p, "z", 0, 1)
    a, b = frobenius_indices(op, INFINITY).roots
    expected = HypergeomParams(*(rat(tables.HYPERGEOM[k]) for k in "abc"))
    if lam is not None:
        expected = expected.at(lam)
    if c != expected.c or {a, b} != {expected.a, expected.b}:
        raise TableMismatch("hypergeometric parameters differ from the table",
                            HypergeomParams(a, b, c), expected)
    if expected.operator().normal_form() != (p, q):
        raise TableMismatch("hypergeometric parameters do not rebuild the equation",
                            op, expected.operator())
    return expected


# ---------------------------------------------------------------------------
# Heun case
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeunParams:
    gamma: RationalExpr
    delta: RationalExpr
    epsilon: RationalExpr
    alpha: RationalExpr
    beta: RationalExpr
    a: RationalExpr
    q: RationalExpr

    def regularity_defect(self) -> RationalExpr:
        """epsilon - (alpha + beta - gamma - delta + 1); zero for regularity at infinity."""
        return (self.epsilon - (self.alpha + self.beta - self.gamma - self.delta + 1)).cancel()

    def operator(self) -> DiffOp:
        z = RationalExpr(Z)
        p = self.gamma / z + self.delta / (z - 1) + self.epsilon / (z - self.a)
        qq = (self.alpha * self.beta * z - self.q) / (z * (z - 1) * (z - self.a))
        return DiffOp([qq, p, 1], "z")

    def subs(self, values: dict) -> "HeunParams":
        return HeunParams(*(getattr(self, f).partial_eval(values).cancel()
                            for f in ("gamma", "delta", "epsilon", "alpha", "beta", "a", "q")))


def _as_case(l, m) -> ModeCase:
    if isinstance(l, ModeCase):
        return l
    if isinstance(l, int) and isinstance(m, int):
        if l <= 0:
            raise InvalidIndex("Heun reduction needs l > 0")
        return ModeCase(f"{l}{m}")
    lp = l if isinstance(l, MultiPoly) else MultiPoly.const(l)
    off = (m if isinstance(m, MultiPoly) else MultiPoly.const(m)) - lp
    if lp != var("l") or not off.is_constant() or off.constant_term() not in (-1, 0, 1):
        raise InvalidIndex(f"unsupported symbolic pair ({l}, {m})")
    return ModeCase({-1: "l1", 0: "l2", 1: "l3"}[int(off.constant_term())])


def h_factor(l, m=None) -> FormalPower:
    """Ansatz factor h with f = h g, as powers of z and (2 - z)."""
    case = _as_case(l, m)
    half_lam = LAMBDA * Fraction(1, 2)
    if case.key == "10":
        return FormalPower([(Z, 1), (2 - Z, half_lam)])
    if case.key == "11":
        return FormalPower([(Z, 1), (2 - Z, (LAMBDA - 1) * Fraction(1, 2))])
    if case.key == "21":
        return FormalPower([(Z, Fraction(3, 2)), (2 - Z, half_lam)])
    return FormalPower([(Z, case.l_poly * Fraction(1, 2)), (2 - Z, half_lam)])


def _display(table: dict, case: ModeCase) -> RationalExpr:
    e = rat(table[case.heun_key])
    if case.heun_key == "generic":
        e = e.subs("m", RationalExpr(case.m_poly))
        if not case.is_family:
            e = e.subs("l", RationalExpr(case.l_poly))
    return e.cancel()


@dataclass(frozen=True)
class HeunReduction:
    case: ModeCase
    square: DiffOp
    mobius: DiffOp
    heun: DiffOp
    params: HeunParams


def heun_reduction(l, m=None) -> HeunReduction:
    case = _as_case(l, m)
    ode = mode_ode(case.l, case.m, None, transformed=True)
    sq = square_map(ode.operator())
    z = RationalExpr(Z)
    vt = _even_to_z(ode.potential)
    lam = RationalExpr(LAMBDA)
    p_sq, q_sq = sq.normal_form()
    if p_sq != rat(tables.SQUARE_P) or q_sq != (lam * lam + lam + vt) / (4 * z * (z - 1)):
        raise TableMismatch(f"{case}: equation in z = r^2 differs from the display", sq)
    mob = mobius_map(sq)
    p_mb, q_mb = mob.normal_form()
    expected_q = (lam * lam + lam + vt.subs("z", z / (2 - z))) / (2 * (z - 2) ** 2 * (z - 1) * z)
    if p_mb != rat(tables.MOBIUS_P) or q_mb != expected_q:
        raise TableMismatch(f"{case}: equation after the Mobius map differs from the display", mob)
    heun = mob.conjugate(h_factor(case).log_derivative("z"))
    p, q = heun.normal_form()
    exp_p, exp_q = _display(tables.HEUN_P, case), _display(tables.HEUN_Q, case)
    if p != exp_p:
        raise TableMismatch(f"{case}: p differs from the display", p, exp_p)
    if q != exp_q:
        raise TableMismatch(f"{case}: q differs from the display", q, exp_q)
    return HeunReduction(case, sq, mob, heun, extract_heun_params(heun))


def extract_heun_params(op: DiffOp, a: int = 2) -> HeunParams:
    p, q = op.normal_form()
    gamma = local_limit(p, "z", 0, 1)
    delta = local_limit(p, "z", 1, 1)
    eps = local_limit(p, "z", a, 1)
    z = RationalExpr(Z)
    if p != gamma / z + delta / (z - 1) + eps / (z - a):
        raise TableMismatch("p has poles outside {0, 1, a}", p)
    cleared = (q * z * (z - 1) * (z - a)).cancel()
    if not cleared.is_polynomial() or cleared.as_poly().degree("z") > 1:
        raise TableMismatch("q is not of Heun shape", q)
    cp = cleared.as_poly()
    ab = RationalExpr(cp.coeffs("z").get(1, MultiPoly()))
    acc = -RationalExpr(cp.coeffs("z").get(0, MultiPoly()))
    r1, r2 = frobenius_indices(op, INFINITY).roots
    # order so that beta - alpha is a positive constant when possible
    diff = (r1 - r2).cancel()
    alpha, beta = (r2, r1) if diff.is_constant() and diff.constant_value() > 0 else (r1, r2)
    if (alpha * beta - ab).cancel().is_zero() is False:
        raise TableMismatch("indices at infinity do not multiply to alpha*beta", (alpha, beta), ab)
    return HeunParams(gamma, delta, eps, alpha, beta, RationalExpr(MultiPoly.const(a)), acc)


def to_heun(l, m=None, lam=None) -> HeunParams:
    params = heun_reduction(l, m).params
    if lam is not None:
        params = params.subs({"x": lam})
    return params


def gamma_admissible(gamma: RationalExpr, l_min: int = 1) -> bool:
    """gamma is a half-integer >= 5/2 for every integer l >= l_min, so 1 - gamma is not in N0."""
    g = gamma.cancel()
    if not g.is_polynomial():
        return False
    gp = g.as_poly()
    if set(gp.variables()) - {"l"} or gp.degree("l") > 1:
        return False
    slope = gp.coeffs("l").get(1, MultiPoly()).constant_term() if "l" in gp.variables() else 0
    const = gp.constant_term()
    slope = Fraction(slope)
    return (slope >= 0 and slope.denominator == 1 and const.denominator == 2
            and slope * l_min + const >= Fraction(5, 2))
