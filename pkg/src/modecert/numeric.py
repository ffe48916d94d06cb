"""Sampled cross-checks: ratio convergence, error trajectories, PDE residuals."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path

import mpmath

from .cases import ModeCase
from .errors import RatioBreakdown
from .exactmath import QComplex, RationalExpr, rat
from .recurrence import _NRational, as_case, as_lambda, coeff_AB, error_model, quasisolution
from .spherical import Field, ModeSolution, Y_NAMES, add, direct_linearized, mode_catalogue, scale

EXACT_CUTOFF = 300
PRECISION_BITS = 128
DEFAULT_N = 2000
OVERLAP_TOLERANCE = 1e-10


@dataclass
class ConvergenceReport:
    case: ModeCase
    lam: complex
    N: int
    n0: int
    final_ratio: complex
    max_abs_error_after_n0: float
    anomalies: list[str] = field(default_factory=list)
    overlap_error: float = 0.0
    rows: list[tuple[int, complex, float]] = field(default_factory=list, repr=False)

    @property
    def final_distance(self) -> float:
        return abs(self.final_ratio - 1)

    def to_json(self) -> dict:
        return {"case": self.case.label, "lambda": format_lambda(self.lam), "N": self.N, "n0": self.n0,
                "final_ratio": str(self.final_ratio), "abs_r_N_minus_1": self.final_distance,
                "max_abs_error_after_n0": self.max_abs_error_after_n0,
                "overlap_error": self.overlap_error, "anomalies": self.anomalies}


def format_lambda(z: complex) -> str:
    """Compact a+bi text, e.g. 0, 2i, 1+3i."""
    re, im = f"{z.real:g}", f"{z.imag:g}"
    if z.imag == 0:
        return re
    if z.real == 0:
        return f"{im}i"
    return f"{re}{'+' if z.imag > 0 else ''}{im}i"


def _mp(z: QComplex) -> mpmath.mpc:
    return mpmath.mpc(mpmath.mpf(z.re.numerator) / z.re.denominator,
                      mpmath.mpf(z.im.numerator) / z.im.denominator)


class _MPRational:
    """Rational function of n with coefficients pre-evaluated at lambda, in mpmath."""

    def __init__(self, exact: _NRational):
        self.num = [_mp(c) for c in exact.num.coeffs]
        self.den = [_mp(c) for c in exact.den.coeffs]

    def __call__(self, n) -> mpmath.mpc:
        return mpmath.polyval(self.num[::-1], n) / mpmath.polyval(self.den[::-1], n)


def hybrid_ratios(c, lam, count: int, cutoff: int = EXACT_CUTOFF,
                  l_value: int | None = None) -> tuple[list, float]:
    """r_0..r_count: exact up to ``cutoff``, then 128-bit floating point.

    Returns the sequence (QComplex then mpc entries) and the largest relative
    difference between the exact prefix and an independent floating run.
    """
    case = as_case(c)
    co = coeff_AB(case)
    lam = as_lambda(lam)
    vals = {"l": l_value} if case.is_family else None
    a_ex, b_ex = _NRational(co.A, lam, vals), _NRational(co.B, lam, vals)
    r0 = _NRational(co.r0, lam, vals)(0)
    with mpmath.workprec(PRECISION_BITS):
        a_mp, b_mp = _MPRational(a_ex), _MPRational(b_ex)
        seq: list = [r0]
        for n in range(1, min(cutoff, count) + 1):
            prev = seq[-1]
            if not prev:
                raise RatioBreakdown(f"{case}: r_{n - 1} vanishes at lambda = {lam}", n - 1)
            seq.append(a_ex(n) + b_ex(n) / prev)
        float_run = [_mp(r0)]
        for n in range(1, len(seq)):
            float_run.append(a_mp(n) + b_mp(n) / float_run[-1])
        overlap = max((float(abs(_mp(e) - f) / max(abs(_mp(e)), mpmath.mpf(10) ** -30))
                       for e, f in zip(seq, float_run)), default=0.0)
        cur = _mp(seq[-1])
        for n in range(len(seq), count + 1):
            if cur == 0:
                raise RatioBreakdown(f"{case}: r_{n - 1} vanishes at lambda = {lam}", n - 1)
            cur = a_mp(n) + b_mp(n) / cur
            seq.append(cur)
    return seq, overlap


def _as_complex(v) -> complex:
    return complex(v) if not isinstance(v, QComplex) else complex(v)


def sample_convergence(c, lam, N: int = DEFAULT_N, tolerance: float = 1e-9,
                       cutoff: int = EXACT_CUTOFF, rtilde: RationalExpr | None = None,
                       n0: int | None = None, keep_rows: bool = False) -> ConvergenceReport:
    """Run the ratio recurrence and compare with the quasisolution."""
    case = as_case(c)
    lam_q = as_lambda(lam)
    anomalies: list[str] = []
    if lam_q.re < 0:
        anomalies.append("Re lambda < 0: outside the certified regime")
    if n0 is None:
        n0 = error_model(case).n0 or 2
    if rtilde is None:
        rtilde = quasisolution(case).rtilde
    try:
        seq, overlap = hybrid_ratios(case, lam_q, N, cutoff)
    except RatioBreakdown as exc:
        anomalies.append(f"RatioBreakdown at n = {exc.index}")
        return ConvergenceReport(case, complex(lam_q), N, n0, complex("nan"), float("inf"),
                                 anomalies)
    if overlap > OVERLAP_TOLERANCE:
        anomalies.append(f"exact/float overlap differs by {overlap:.3g}")
    rt_ex = _NRational(rtilde, lam_q)
    max_err = 0.0
    rows = []
    with mpmath.workprec(PRECISION_BITS):
        rt_mp = _MPRational(rt_ex)
        for n in range(1, N + 1):
            r = seq[n]
            if isinstance(r, QComplex):
                e = abs(complex(r / rt_ex(n) - 1))
            else:
                e = float(abs(r / rt_mp(n) - 1))
            if n >= n0:
                max_err = max(max_err, e)
            if keep_rows:
                rows.append((n, _as_complex(r), e))
    if max_err > Fraction(1, 3) + tolerance:
        anomalies.append(f"max |e_n| = {max_err:.6g} exceeds 1/3")
    final = _as_complex(seq[N])
    return ConvergenceReport(case, complex(lam_q), N, n0, final, max_err, anomalies, overlap, rows)


def write_convergence_csv(report: ConvergenceReport, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "re_r", "im_r", "abs_e"])
        for n, r, e in report.rows:
            w.writerow([n, repr(r.real), repr(r.imag), repr(e)])
    return path


# ---------------------------------------------------------------------------
# Negative controls
# ---------------------------------------------------------------------------

def constant_quasisolution_control(c, lam, N: int = 200) -> ConvergenceReport:
    """With rtilde = 1/2 the error bound must break."""
    return sample_convergence(c, lam, N, rtilde=rat("1/2"))


def tampered_quasisolution(c) -> RationalExpr:
    """The (1,0)-style last summand with denominator 2n+8 instead of 2n+7."""
    case = as_case(c)
    text = {
        "10": "x^2/(8*n^2+36*n+28) + x*(2*n+3)/(2*n^2+9*n+7) + (2*n+4)/(2*n+8)",
    }.get(case.key)
    if text is not None:
        return rat(text)
    return (quasisolution(case).rtilde * rat("(2*n+7)/(2*n+8)")).cancel()


# ---------------------------------------------------------------------------
# PDE residuals on a rational grid
# ---------------------------------------------------------------------------

DIRECTIONS = tuple(d for d in product((-1, 0, 1), repeat=3) if any(d))


# rational radius caps with t * sqrt(|d|^2) <= 9/10
_T_MAX = {1: Fraction(9, 10), 2: Fraction(63, 100), 3: Fraction(51, 100)}


def grid_points(grid_size: int = 9) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Points t d on the 26 cube directions, 0 < |y| <= 9/10, rational coordinates."""
    pts = set()
    for d in DIRECTIONS:
        cap = _T_MAX[sum(x * x for x in d)]
        for k in range(1, grid_size + 1):
            t = cap * Fraction(k, grid_size)
            pts.add(tuple(t * x for x in d))
    return sorted(pts)


def field_residual(psi: Field, lam) -> Field:
    return direct_linearized(psi, lam)


def pde_residual_grid(mode: ModeSolution | Field, grid_size: int = 9, lam=None) -> Fraction:
    """Max |residual component| over the grid, exact."""
    psi = mode.profile if isinstance(mode, ModeSolution) else mode
    lam = mode.growth_rate if lam is None else lam
    res = field_residual(psi, lam)
    worst = Fraction(0)
    for pt in grid_points(grid_size):
        values = dict(zip(Y_NAMES, pt))
        for comp in res:
            v = comp.evaluate({k: values[k] for k in comp.variables()}) if comp.variables() \
                else comp.constant_term()
            worst = max(worst, abs(Fraction(v)))
    return worst


def perturbed_mode(mode: ModeSolution, eps: Fraction = Fraction(1, 10),
                   other: ModeSolution | None = None) -> Field:
    """mode + eps * other, with ``other`` a mode of a different growth rate.

    The default partner is (r^2 - 3) e_1 at rate 0.  The constant e_1 itself is
    a rate-1 mode and would leave a rate-1 profile a solution.
    """
    if other is None:
        other = next(m for m in mode_catalogue() if m.growth_rate != mode.growth_rate)
    if other.growth_rate == mode.growth_rate:
        raise ValueError("the partner mode must have a different growth rate")
    return add(mode.profile, scale(eps, other.profile))
