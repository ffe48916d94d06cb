"""Full verification run, reports, supplementary CSV export and the CLI."""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import tables
from .cases import ModeCase
from .certify import (COROTATIONAL_POLICIES, bound_polynomial, certify_bounds, derive_bounds,
                      error_target, verify_case)
from .errors import ModeCertError, NotCertified
from .exactmath import MultiPoly, QComplex, RationalExpr, parse_complex, parse_expr
from .numeric import (DEFAULT_N, constant_quasisolution_control, pde_residual_grid,
                      perturbed_mode, sample_convergence, write_convergence_csv)
from .odesystem import mode_ode_residual
from .recurrence import (as_case, coeff_AB, error_model, quasisolution,
                         quasisolution_overrides, symbolic_ratio)
from .spherical import is_zero, mode_catalogue, reduced_linearized

DEFAULT_FINITE = ("01", "10", "11", "12", "21", "22", "23", "32", "33")
DEFAULT_FAMILIES = ("l1", "l2", "l3")
DEFAULT_LAMBDAS = ("0", "1", "2i", "1+3i", "10i")
RATIO_TOLERANCE = 0.01
TAMPERED_10 = "x^2/(8*n^2+36*n+28) + x*(2*n+3)/(2*n^2+9*n+7) + (2*n+4)/(2*n+8)"


@dataclass
class RunConfig:
    finite_cases: tuple[str, ...] = DEFAULT_FINITE
    symbolic_families: tuple[str, ...] = DEFAULT_FAMILIES
    lambda_samples: tuple[str, ...] = DEFAULT_LAMBDAS
    N: int = DEFAULT_N
    output_dir: Path | None = None
    corotational_policy: str = "auto-derive"
    quasi_overrides: dict[str, str] = field(default_factory=dict)
    catalogue: bool = True
    controls: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.corotational_policy not in COROTATIONAL_POLICIES:
            raise ValueError(f"unknown policy {self.corotational_policy!r}")
        for lam in self.lambda_samples:
            if parse_complex(str(lam)).re < 0:
                raise ValueError(f"lambda sample {lam} has negative real part")

    @property
    def cases(self) -> tuple[str, ...]:
        return tuple(self.finite_cases) + tuple(self.symbolic_families)


# ---------------------------------------------------------------------------
# Coverage
# ---------------------------------------------------------------------------

def covering_cases(l: int, m: int, keys: Sequence[str]) -> list[str]:
    out = []
    for key in keys:
        case = ModeCase(key)
        if case.is_family:
            if l >= case.l_min and m - l == tables.FAMILY_OFFSET[key]:
                out.append(key)
        elif key == f"{l}{m}":
            out.append(key)
    return out


def coverage_gaps(keys: Sequence[str], l_max: int = 12) -> dict[str, list[tuple[int, int]]]:
    """Pairs (l, m) with l <= l_max covered zero times or more than once."""
    pairs = [(0, 1)] + [(l, m) for l in range(1, l_max + 1) for m in (l - 1, l, l + 1)]
    gaps, overlaps = [], []
    for l, m in pairs:
        n = len(covering_cases(l, m, keys))
        if n == 0:
            gaps.append((l, m))
        elif n > 1:
            overlaps.append((l, m))
    return {"gaps": gaps, "overlaps": overlaps}


# ---------------------------------------------------------------------------
# Per-case job
# ---------------------------------------------------------------------------

def _numeric_rows(case: ModeCase, config: RunConfig) -> list[dict]:
    rows = []
    if case.is_family or case.key == "01":
        return rows
    for lam in config.lambda_samples:
        rep = sample_convergence(case, lam, config.N, keep_rows=config.output_dir is not None)
        ok = rep.final_distance <= RATIO_TOLERANCE and not rep.anomalies
        if config.output_dir is not None:
            name = f"convergence_{case.key}_{str(lam).replace('+', 'p')}.csv"
            write_convergence_csv(rep, Path(config.output_dir) / name)
        rows.append({**rep.to_json(), "passed": ok})
    return rows


def _case_job(key: str, config: RunConfig, bounds: tuple | None) -> dict:
    with quasisolution_overrides(config.quasi_overrides):
        result = verify_case(key, config.corotational_policy, bounds)
        numeric = _numeric_rows(result.case, config)
    out = result.to_json()
    out["numeric"] = numeric
    numeric_ok = all(r["passed"] for r in numeric)
    if result.status == "PASS" and not numeric_ok:
        out["status"] = "FAIL"
        out["notes"] = out["notes"] + ["numeric cross-check failed"]
    return out


def _pinned_bounds(config: RunConfig) -> dict[str, tuple]:
    """Bounds derived from the unmodified table for overridden rows that lack printed bounds."""
    pins = {}
    for key in config.quasi_overrides:
        if key in config.cases and key not in tables.BOUNDS and \
                config.corotational_policy == "auto-derive":
            d = derive_bounds(key)
            if d is not None:
                pins[key] = (d.abar, d.bbar, d.n0, d.u)
    return pins


# ---------------------------------------------------------------------------
# Catalogue and controls
# ---------------------------------------------------------------------------

def catalogue_checks() -> list[dict]:
    rows = []
    for md in mode_catalogue():
        l, m, _ = md.case
        reduced = is_zero(reduced_linearized(md.profile, md.growth_rate))
        radial = mode_ode_residual(md.radial_solution(), md.growth_rate, l, m).is_zero()
        grid = pde_residual_grid(md)
        rows.append({"name": md.name, "lambda": md.growth_rate, "case": list(md.case),
                     "reduced_operator_zero": reduced, "radial_ode_zero": radial,
                     "grid_max_residual": str(grid),
                     "passed": reduced and radial and grid == 0})
    return rows


def negative_controls() -> list[dict]:
    """Checks that must fail; ``passed`` records that they did."""
    const = constant_quasisolution_control("11", 0)
    psi = mode_catalogue()[0]
    pert = pde_residual_grid(perturbed_mode(psi), lam=psi.growth_rate)
    return [
        {"name": "constant quasisolution 1/2 on (1,1) at lambda = 0",
         "observed": f"max |e_n| = {const.max_abs_error_after_n0:.6g}",
         "passed": bool(const.anomalies)},
        {"name": "Psi_10 + Phi_01^1/10 at lambda = 1",
         "observed": f"max grid residual = {pert}", "passed": pert != 0},
    ]


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

@dataclass
class Report:
    config: dict
    cases: list[dict]
    catalogue: list[dict]
    controls: list[dict]
    coverage: dict
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (all(c["status"] == "PASS" for c in self.cases)
                and all(r["passed"] for r in self.catalogue)
                and all(r["passed"] for r in self.controls))

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "FAIL"
        complete = not self.coverage["gaps"] and not self.coverage["overlaps"]
        return "THEOREM-VERIFIED" if complete else "PASS"

    def body(self) -> dict:
        return {"verdict": self.verdict, "config": self.config, "coverage": self.coverage,
                "cases": self.cases, "catalogue": self.catalogue, "controls": self.controls}

    def to_json(self, with_metadata: bool = True) -> str:
        data = self.body()
        if with_metadata:
            data["metadata"] = self.metadata
        return json.dumps(data, indent=2, sort_keys=True)

    def render_text(self) -> str:
        lines = [f"verdict: {self.verdict}", "", f"{'case':<14} {'check':<16} result  detail"]
        for c in self.cases:
            for cert in c["certificates"]:
                lines.append(f"{c['case']:<14} {cert['kind']:<16} {cert['verdict']:<7} "
                             f"{cert['message']}")
            for r in c["numeric"]:
                lines.append(f"{c['case']:<14} {'Convergence':<16} "
                             f"{'PASS' if r['passed'] else 'FAIL':<7} lambda = {r['lambda']}, "
                             f"|r_N - 1| = {r['abs_r_N_minus_1']:.3e}, "
                             f"max |e_n| = {r['max_abs_error_after_n0']:.4f}")
            lines.append(f"{c['case']:<14} {'status':<16} {c['status']}")
            lines.extend(f"{'':<14} note: {n}" for n in c["notes"])
        if self.catalogue:
            lines += ["", "catalogue:"]
            lines += [f"  {r['name']:<10} lambda = {r['lambda']}  "
                      f"{'PASS' if r['passed'] else 'FAIL'}" for r in self.catalogue]
        if self.controls:
            lines += ["", "negative controls (expected to fail):"]
            lines += [f"  {r['name']}: {r['observed']}  "
                      f"{'failed as designed' if r['passed'] else 'DID NOT FAIL'}"
                      for r in self.controls]
        cov = self.coverage
        lines += ["", f"coverage: gaps {cov['gaps']}, overlaps {cov['overlaps']}"]
        return "\n".join(lines) + "\n"

    def write(self, out_dir: Path | str) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        js, txt = out / "report.json", out / "report.txt"
        js.write_text(self.to_json())
        txt.write_text(self.render_text())
        return js, txt


def _config_json(config: RunConfig) -> dict:
    return {"finite_cases": list(config.finite_cases),
            "symbolic_families": list(config.symbolic_families),
            "lambda_samples": [str(v) for v in config.lambda_samples], "N": config.N,
            "corotational_policy": config.corotational_policy,
            "quasi_overrides": dict(sorted(config.quasi_overrides.items()))}


def run_all(config: RunConfig | None = None) -> Report:
    config = config or RunConfig()
    start = time.time()
    pins = _pinned_bounds(config)
    keys = list(config.cases)
    if config.workers > 1 and len(keys) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_case_job, k, config, pins.get(k)) for k in keys]
            cases = [f.result() for f in futures]
    else:
        cases = [_case_job(k, config, pins.get(k)) for k in keys]
    report = Report(
        config=_config_json(config), cases=cases,
        catalogue=catalogue_checks() if config.catalogue else [],
        controls=negative_controls() if config.controls else [],
        coverage=coverage_gaps(keys),
        metadata={"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
                  "elapsed_seconds": round(time.time() - start, 2)})
    if config.output_dir is not None:
        report.write(config.output_dir)
    return report


# ---------------------------------------------------------------------------
# Supplementary files
# ---------------------------------------------------------------------------

def _shifted(p: MultiPoly, n0: int | None, l_shift: int) -> MultiPoly:
    if n0 is not None and "n" in p.variables():
        p = p.shift("n", n0)
    if l_shift and "l" in p.variables():
        p = p.shift("l", l_shift)
    return p


def supplement_entries(c) -> dict[str, RationalExpr | MultiPoly | int]:
    """The ten named quantities for one case; NotCertified if its bounds do not certify."""
    case = as_case(c)
    model = error_model(case)
    if not model.has_bounds:
        raise NotCertified(f"{case}: no bounds to export")
    certs = certify_bounds(case, model)
    failed = [ct.kind.value for ct in certs if not ct.passed]
    if failed:
        raise NotCertified(f"{case}: {', '.join(failed)} not certified")
    n0 = model.n0
    a_shift = tables.COEFF_L_SHIFT.get(case.key, 0)
    e_shift = tables.ERROR_L_SHIFT.get(case.key, 0)
    co = coeff_AB(case)
    u = RationalExpr(MultiPoly.const(model.u))
    return {
        "A": co.A, "B": co.B, "n0": n0, "r_{n0}": symbolic_ratio(case, n0),
        "rtilde": quasisolution(case).rtilde, "a": model.a_n, "b": model.b_n,
        "esta": _shifted(bound_polynomial(model.a_n, model.abar)[0], n0, a_shift),
        "estb": _shifted(bound_polynomial(model.b_n, model.bbar)[0], n0, a_shift),
        "esterror": _shifted(bound_polynomial(error_target(case, n0), u)[0], None, e_shift),
    }


def read_supplement(path: Path | str) -> dict[str, RationalExpr]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if rows and rows[0] == ["name", "expression"]:
        rows = rows[1:]
    return {name: parse_expr(text) for name, text in rows}


def export_supplement(c, path: Path | str) -> Path:
    """Write name,expression rows; a directory path receives ``<key>.csv``."""
    case = as_case(c)
    path = Path(path)
    if path.is_dir() or not path.suffix:
        path = path / f"{case.key}.csv"
    entries = supplement_entries(case)
    texts = {k: str(v) for k, v in entries.items()}
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "expression"])
        for name in tables.SUPPLEMENT_VARIABLES:
            w.writerow([name, texts[name]])
    back = read_supplement(path)
    for name, value in entries.items():
        parsed = back[name]
        if str(parsed) != texts[name] or parsed != RationalExpr.of(value):
            raise ModeCertError(f"{path}: {name} does not round-trip")
    return path


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _lambda_grid(text: str | None) -> tuple[str, ...]:
    if not text:
        return DEFAULT_LAMBDAS
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-tail", type=int, default=DEFAULT_N, help="ratio recurrence length N")
    p.add_argument("--lambda-grid", default=None, help="comma-separated samples, e.g. 0,1,2i")
    p.add_argument("--corotational-policy", choices=COROTATIONAL_POLICIES, default="auto-derive")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modecert", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_flags(sub.add_parser("verify", help="full run over all cases"))
    p_case = sub.add_parser("case", help="single case (l, m)")
    p_case.add_argument("l")
    p_case.add_argument("m")
    _add_run_flags(p_case)
    p_exp = sub.add_parser("export-supplement", help="write the supplementary CSV files")
    p_exp.add_argument("cases", nargs="*", default=list(tables.SUPPLEMENT_FILES))
    p_exp.add_argument("--out", type=Path, default=Path("supplement"))
    p_conv = sub.add_parser("convergence", help="ratio convergence at one lambda")
    for name in ("l", "m", "re", "im"):
        p_conv.add_argument(name)
    p_conv.add_argument("--n-tail", type=int, default=DEFAULT_N)
    p_conv.add_argument("--out", type=Path, default=None, help="CSV path for the trajectory")
    return parser


def _case_key(l: str, m: str) -> str:
    if l in ("l", "L"):
        return {"l-1": "l1", "l": "l2", "l+1": "l3"}[m]
    return f"{int(l)}{int(m)}"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("verify", "case"):
            config = RunConfig(lambda_samples=_lambda_grid(args.lambda_grid), N=args.n_tail,
                               output_dir=args.out, corotational_policy=args.corotational_policy,
                               workers=args.workers)
            if args.command == "case":
                key = _case_key(args.l, args.m)
                ModeCase(key)
                config.finite_cases = () if key in DEFAULT_FAMILIES else (key,)
                config.symbolic_families = (key,) if key in DEFAULT_FAMILIES else ()
                config.catalogue = config.controls = False
            report = run_all(config)
            sys.stdout.write(report.render_text())
            return 0 if report.passed else 1
        if args.command == "export-supplement":
            for key in args.cases:
                print(export_supplement(key, args.out))
            return 0
        lam = QComplex(Fraction(args.re), Fraction(args.im))
        rep = sample_convergence(_case_key(args.l, args.m), lam, args.n_tail,
                                 keep_rows=args.out is not None)
        if args.out is not None:
            write_convergence_csv(rep, args.out)
        print(json.dumps(rep.to_json(), indent=2))
        ok = rep.final_distance <= RATIO_TOLERANCE and not rep.anomalies
        return 0 if ok else 1
    except ModeCertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
