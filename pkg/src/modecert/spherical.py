"""Vector spherical basis, angular operators and the mode catalogue.

Vector fields are triples of polynomials in y1, y2, y3.  A basis function
Z on the sphere is stored through its homogeneous representative r^l Z, so
every angular operator can be evaluated by plain Cartesian differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EigenvalueMismatch, UnsupportedCase
from .exactmath import ONE, ZERO, MultiPoly, RationalExpr, var

Y = (var("y1"), var("y2"), var("y3"))
Y_NAMES = ("y1", "y2", "y3")
R2 = Y[0] ** 2 + Y[1] ** 2 + Y[2] ** 2

Field = tuple[MultiPoly, MultiPoly, MultiPoly]


def field(*components) -> Field:
    comps = tuple(c if isinstance(c, MultiPoly) else MultiPoly.const(c) for c in components)
    if len(comps) != 3:
        raise ValueError("a vector field has three components")
    return comps  # type: ignore[return-value]


def add(a: Field, b: Field) -> Field:
    return tuple(p + q for p, q in zip(a, b))  # type: ignore[return-value]


def scale(c, a: Field) -> Field:
    return tuple(c * p for p in a)  # type: ignore[return-value]


def is_zero(a: Field) -> bool:
    return all(p.is_zero() for p in a)


def dot(a: Field, b: Field) -> MultiPoly:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@dataclass(frozen=True)
class VectorSphericalFunction:
    """r^l Z^k_{l,m} as a triple of homogeneous polynomials."""

    components: Field
    homogeneity_degree: int
    indices: tuple[int, int, int]

    @property
    def l(self) -> int:
        return self.indices[0]

    @property
    def m(self) -> int:
        return self.indices[1]

    def is_homogeneous(self) -> bool:
        d = self.homogeneity_degree
        return all(sum(e[i] for i in _Y_IDX) == d for c in self.components for e, _ in c.items())


_Y_IDX = (7, 8, 9)  # positions of y1..y3 in the variable order


# ---------------------------------------------------------------------------
# Differential operators on polynomial fields
# ---------------------------------------------------------------------------

def euler(p: MultiPoly) -> MultiPoly:
    """r d/dr = sum_i y_i d/dy_i."""
    return sum((y * p.diff(name) for y, name in zip(Y, Y_NAMES)), ZERO)


def laplacian(p: MultiPoly) -> MultiPoly:
    return sum((p.diff(name).diff(name) for name in Y_NAMES), ZERO)


def sphere_laplacian(p: MultiPoly) -> MultiPoly:
    """r^2 Delta - (r d_r)^2 - r d_r; for degree-l homogeneous p this is r^2 Delta p - l(l+1) p."""
    e = euler(p)
    return R2 * laplacian(p) - euler(e) - e


def _apply(op, a: Field) -> Field:
    return tuple(op(c) for c in a)  # type: ignore[return-value]


def momentum_coupling(a: Field) -> Field:
    """(M a)_i = sum_b (y_b d_i a_b - y_i d_b a_b).

    Sign fixed so that C = -Delta_S2 + 2 + 2M has eigenvalue m(m+1).
    """
    div = sum((a[b].diff(Y_NAMES[b]) for b in range(3)), ZERO)
    out = []
    for i in range(3):
        grad_part = sum((Y[b] * a[b].diff(Y_NAMES[i]) for b in range(3)), ZERO)
        out.append(grad_part - Y[i] * div)
    return tuple(out)  # type: ignore[return-value]


def casimir(a: Field) -> Field:
    lap = _apply(sphere_laplacian, a)
    mom = momentum_coupling(a)
    return tuple(-s + 2 * c + 2 * m for s, c, m in zip(lap, a, mom))  # type: ignore[return-value]


def momentum_coupling_apply(z: VectorSphericalFunction) -> VectorSphericalFunction:
    return VectorSphericalFunction(momentum_coupling(z.components), z.homogeneity_degree, z.indices)


@dataclass(frozen=True)
class EigenCheck:
    eigenvalue: Fraction
    residual: Field

    @property
    def exact(self) -> bool:
        return is_zero(self.residual)


def casimir_apply(z: VectorSphericalFunction) -> EigenCheck:
    """C Z - m(m+1) Z, required to vanish identically."""
    ev = Fraction(z.m * (z.m + 1))
    res = add(casimir(z.components), scale(-ev, z.components))
    if not is_zero(res):
        raise EigenvalueMismatch(f"Casimir eigenrelation fails for {z.indices}", res)
    return EigenCheck(ev, res)


def laplace_apply(z: VectorSphericalFunction) -> EigenCheck:
    """Delta_S2 Z + l(l+1) Z, required to vanish identically."""
    ev = Fraction(-z.l * (z.l + 1))
    res = add(_apply(sphere_laplacian, z.components), scale(-ev, z.components))
    if not is_zero(res):
        raise EigenvalueMismatch(f"Laplace eigenrelation fails for {z.indices}", res)
    return EigenCheck(ev, res)


# ---------------------------------------------------------------------------
# Basis table
# ---------------------------------------------------------------------------

def _table() -> dict[tuple[int, int], list[Field]]:
    y1, y2, y3 = Y
    o = ZERO
    return {
        (0, 1): [field(1, 0, 0), field(0, 1, 0), field(0, 0, 1)],
        (1, 0): [field(y1, y2, y3)],
        (1, 1): [field(o, -y3, y2), field(y3, o, -y1), field(-y2, y1, o)],
        (1, 2): [field(o, y2, -y3), field(o, y3, y2), field(y3, o, y1),
                 field(y1, -y2, o), field(y2, y1, o)],
        (2, 1): [field(-2 * y1**2 + y2**2 + y3**2, -3 * y1 * y2, -3 * y1 * y3),
                 field(-3 * y1 * y2, y1**2 - 2 * y2**2 + y3**2, -3 * y2 * y3),
                 field(-3 * y1 * y3, -3 * y2 * y3, y1**2 + y2**2 - 2 * y3**2)],
    }


_TABLE = _table()
CATALOGUED_CASES = tuple(_TABLE)


def clebsch_gordan_basis(l: int, m: int) -> list[VectorSphericalFunction]:
    try:
        rows = _TABLE[(l, m)]
    except KeyError:
        raise UnsupportedCase(f"no tabulated basis for (l, m) = ({l}, {m})") from None
    return [VectorSphericalFunction(f, l, (l, m, k + 1)) for k, f in enumerate(rows)]


# ---------------------------------------------------------------------------
# Exact integration over the unit sphere
# ---------------------------------------------------------------------------

def _double_factorial_odd(k: int) -> int:
    # (2k-1)!! with (-1)!! = 1
    out = 1
    for j in range(1, 2 * k, 2):
        out *= j
    return out


def sphere_moment(a: int, b: int, c: int) -> Fraction:
    """(1/4pi) * integral over S^2 of y1^a y2^b y3^c."""
    if a % 2 or b % 2 or c % 2:
        return Fraction(0)
    ha, hb, hc = a // 2, b // 2, c // 2
    num = _double_factorial_odd(ha) * _double_factorial_odd(hb) * _double_factorial_odd(hc)
    den = 1
    for j in range(1, 2 * (ha + hb + hc) + 2, 2):
        den *= j
    return Fraction(num, den)


def sphere_average(p: MultiPoly) -> Fraction:
    total = Fraction(0)
    for exps, c in p.items():
        if any(exps[i] for i in range(7)):
            raise ValueError("integrand must be a polynomial in y1, y2, y3 only")
        total += c * sphere_moment(exps[7], exps[8], exps[9])
    return total


def inner_product(a: Field, b: Field) -> Fraction:
    """L2(S^2) inner product of two fields, divided by 4 pi."""
    return sphere_average(dot(a, b))


# ---------------------------------------------------------------------------
# Mode catalogue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeSolution:
    growth_rate: int
    profile: Field
    radial_factor: RationalExpr
    angular_part: VectorSphericalFunction
    case: tuple[int, int, int]
    name: str

    def radial_solution(self) -> RationalExpr:
        """phi = f / (1 + r^2), the solution of the radial mode equation."""
        r = RationalExpr(var("r"))
        return (self.radial_factor / (1 + r * r)).cancel()

    def factorization_residual(self) -> Field:
        """profile - (f / r^l)(r) * (r^l Z); zero for an exact factorization."""
        g = even_radial_to_cartesian(self.radial_factor, self.angular_part.l)
        return add(self.profile, scale(-1, scale(g, self.angular_part.components)))


def even_radial_to_cartesian(f: RationalExpr, l: int) -> MultiPoly:
    """f(r)/r^l as a polynomial in y, provided it is a polynomial in r^2."""
    if not f.is_polynomial():
        raise ValueError("radial factor must be polynomial")
    p = f.as_poly()
    out = ZERO
    for exps, c in p.items():
        e = exps[6] - l
        if e < 0 or e % 2 or any(exps[i] for i in range(10) if i != 6):
            raise ValueError("radial factor is not r^l times a polynomial in r^2")
        out = out + c * R2 ** (e // 2)
    return out


def mode_catalogue() -> list[ModeSolution]:
    r = RationalExpr(var("r"))
    y1, y2, y3 = Y
    o = ZERO
    e_basis = clebsch_gordan_basis(0, 1)
    modes: list[ModeSolution] = []
    z10 = clebsch_gordan_basis(1, 0)[0]
    modes.append(ModeSolution(1, field(y1, y2, y3), r, z10, (1, 0, 1), "Psi_10"))
    for k, z in enumerate(e_basis, 1):
        modes.append(ModeSolution(1, z.components, RationalExpr(ONE), z, (0, 1, k), f"Psi_01^{k}"))
    for k, z in enumerate(e_basis, 1):
        modes.append(ModeSolution(0, scale(R2 - 3, z.components), r * r - 3, z, (0, 1, k),
                                  f"Phi_01^{k}"))
    rotations = [field(o, -y3, y2), field(y3, o, -y1), field(-y2, y1, o)]
    for k, (prof, z) in enumerate(zip(rotations, clebsch_gordan_basis(1, 1)), 1):
        modes.append(ModeSolution(0, prof, r, z, (1, 1, k), f"Psi_11^{k}"))
    for k, z in enumerate(clebsch_gordan_basis(2, 1), 1):
        modes.append(ModeSolution(0, z.components, r * r, z, (2, 1, k), f"Psi_21^{k}"))
    return modes


def coefficient_rank(fields: Sequence[Field]) -> int:
    """Rank of the monomial coefficient vectors, by exact elimination."""
    keys: dict[tuple[int, int], int] = {}
    rows = []
    for f in fields:
        row: dict[int, Fraction] = {}
        for comp, p in enumerate(f):
            for key, c in p.terms.items():
                col = keys.setdefault((comp, key), len(keys))
                row[col] = c
        rows.append(row)
    return _rank(rows)


def _rank(rows: list[dict[int, Fraction]]) -> int:
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        pivot_row = rows.pop()
        if not pivot_row:
            continue
        col, val = next(iter(pivot_row.items()))
        rank += 1
        new_rows = []
        for row in rows:
            f = row.get(col)
            if f:
                ratio = f / val
                for c, v in pivot_row.items():
                    nv = row.get(c, 0) - ratio * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
            if row:
                new_rows.append(row)
        rows = new_rows
    return rank


# ---------------------------------------------------------------------------
# Linearized operator on e^{lambda tau} Psi(y)
# ---------------------------------------------------------------------------

LAMBDA = var("x")


def reduced_linearized(psi: Field, lam=LAMBDA) -> Field:
    """The Casimir form of the linearized operator, times r^2 (1 + r^2).

    d_tau acts as multiplication by lambda, r d_r as the Euler operator.
    """
    lam = lam if isinstance(lam, MultiPoly) else MultiPoly.const(lam)
    r2 = R2
    out = []
    cas = casimir(psi)
    for comp, c_comp in zip(psi, cas):
        e1 = euler(comp)
        e2 = euler(e1)
        s_lap = R2 * laplacian(comp) - e2 - e1
        term = (
            -lam * lam * r2 * (1 + r2) * comp
            - lam * r2 * (1 - 3 * r2) * comp
            - 2 * lam * r2 * (1 + r2) * e1
            + (1 - r2) * (1 + r2) * (e2 - e1)
            + 2 * (1 - r2) ** 2 * e1
            - 2 * r2 * c_comp
            + (1 - r2) * s_lap
            + r2 * (6 - 2 * r2) * comp
        )
        out.append(term)
    return tuple(out)  # type: ignore[return-value]


def _null_form(f: MultiPoly, af, g: MultiPoly, ag) -> MultiPoly:
    """Q0 of e^{af tau} f and e^{ag tau} g with the exponential stripped."""
    ef, eg = euler(f), euler(g)
    grad = sum((f.diff(n) * g.diff(n) for n in Y_NAMES), ZERO)
    return -af * ag * f * g - af * f * eg - ag * ef * g - ef * eg + grad


def _box(w: MultiPoly, lam) -> MultiPoly:
    e1 = euler(w)
    return -lam * lam * w - 2 * lam * e1 - euler(e1) - lam * w - e1 + laplacian(w)


def direct_linearized(psi: Field, lam=LAMBDA) -> Field:
    """Linearization of the stereographic wave-maps system at u = y, times (1+r^2)^2.

    Derived term by term from Box u + 2/(1+|u|^2) (u S(u) - Q0(u, |u|^2)),
    S(u) = sum_j Q0(u_j, u_j), with u = y + eps e^{lambda tau} psi.
    """
    lam = lam if isinstance(lam, MultiPoly) else MultiPoly.const(lam)
    zero = ZERO
    s0 = sum((_null_form(Y[j], zero, Y[j], zero) for j in range(3)), ZERO)
    ydotw = dot(Y, psi)
    ds = 2 * sum((_null_form(Y[j], zero, psi[j], lam) for j in range(3)), ZERO)
    out = []
    for i in range(3):
        background = Y[i] * s0 - _null_form(Y[i], zero, R2, zero)
        dq = _null_form(psi[i], lam, R2, zero) + _null_form(Y[i], zero, 2 * ydotw, lam)
        term = ((1 + R2) ** 2 * _box(psi[i], lam)
                - 4 * ydotw * background
                + 2 * (1 + R2) * (psi[i] * s0 + Y[i] * ds - dq))
        out.append(term)
    return tuple(out)  # type: ignore[return-value]


def catalogue_report(modes: Iterable[ModeSolution] | None = None) -> list[dict]:
    modes = mode_catalogue() if modes is None else modes
    return [
        {
            "name": md.name,
            "lambda": md.growth_rate,
            "case": list(md.case),
            "radial_factor": str(md.radial_factor),
            "angular": [str(c) for c in md.angular_part.components],
            "profile": [str(c) for c in md.profile],
        }
        for md in modes
    ]
