"""Command-line front end.

    ballcorr identities --max-N 12 --max-k 30 [--format json|csv]
    ballcorr eval --psi form.json --z 0 --w 0.5 --mode phi
    ballcorr check --suite gradient --seed 7

Exit codes: 0 pass, 1 failed check, 2 bad input, 3 divergent parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import suites
from .config import DEFAULTS
from .correspondence import phi_jet, phi_series, theta_mc
from .errors import ConvergenceError, DivergentWeightError, DomainError
from .exact import c_const
from .integrate import theta_series
from .symdiff import SymDiff

__all__ = ["RunReport", "main", "build_parser"]


def _jsonable(x):
    if isinstance(x, complex) or isinstance(x, np.complexfloating):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "pi_power"):
        return str(x)
    return x


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    status: str = "pass"
    config: dict = field(default_factory=DEFAULTS.as_dict)

    def finalize(self) -> "RunReport":
        ok = all(self.residuals[k] <= self.tolerances[k] for k in self.residuals)
        self.status = "pass" if ok else "fail"
        return self

    def to_json(self) -> str:
        return json.dumps(_jsonable(asdict(self)), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def _parse_point(text: str) -> list[complex]:
    text = text.strip()
    if text.startswith("["):
        items = json.loads(text)
        return [complex(v) if not isinstance(v, list) else complex(*v) for v in items]
    return [complex(s.strip().replace(" ", "")) for s in text.split(",") if s.strip()]


def _min_N(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("--max-N must be >= 2")
    return v


def _non_negative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("value must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ballcorr", description="Integral transforms on the complex unit ball.")
    sub = p.add_subparsers(dest="command", required=True)

    ids = sub.add_parser("identities", help="exact identity grid")
    ids.add_argument("--max-N", type=_min_N, default=12)
    ids.add_argument("--max-k", type=_non_negative, default=30)
    ids.add_argument("--format", choices=("json", "csv"), default="json")

    ev = sub.add_parser("eval", help="evaluate the transform of a symmetric differential")
    ev.add_argument("--psi", required=True, help="JSON file with a symmetric differential")
    ev.add_argument("--z", default=None, help="comma list of complex numbers (default origin)")
    ev.add_argument("--w", required=True)
    ev.add_argument("--mode", choices=("theta", "phi", "jet"), default="phi")
    ev.add_argument("--method", choices=("series", "mc"), default="series")
    ev.add_argument("--tol", type=float, default=DEFAULTS.series_tol)
    ev.add_argument("--samples", type=int, default=DEFAULTS.mc_samples)
    ev.add_argument("--seed", type=int, default=0)

    ch = sub.add_parser("check", help="run a seeded verification suite")
    ch.add_argument("--suite", choices=sorted(suites.SUITES), required=True)
    ch.add_argument("--seed", type=int, default=0)
    ch.add_argument("--tol", type=float, default=None)
    return p


def cmd_identities(args) -> tuple[RunReport, str | None]:
    report = RunReport("identities", {"max_N": args.max_N, "max_k": args.max_k, "format": args.format})
    rows = []
    counts: dict[str, list[int]] = {}
    for name, params, lhs, rhs in suites.identity_suite(args.max_N, args.max_k):
        ok = suites.exact_equal(lhs, rhs)
        rows.append({"identity": name, "params": params, "lhs": str(lhs), "rhs": str(rhs), "equal": ok})
        c = counts.setdefault(name, [0, 0])
        c[0] += 1
        c[1] += 0 if ok else 1
    for name, (total, failed) in counts.items():
        report.residuals[name] = float(failed)
        report.tolerances[name] = 0.0
    report.results = {"counts": {k: {"instances": v[0], "failures": v[1]} for k, v in counts.items()}}
    report.finalize()
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["identity", "params", "lhs", "rhs", "equal"])
        for r in rows:
            writer.writerow([r["identity"], json.dumps(r["params"]), r["lhs"], r["rhs"], r["equal"]])
        return report, buf.getvalue()
    report.results["instances"] = rows
    return report, None


def _load_psi(path: str) -> SymDiff:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return SymDiff.from_json(data)
    except DomainError as exc:
        raise ValueError(f"{path}: {exc}") from exc


def cmd_eval(args) -> RunReport:
    psi = _load_psi(args.psi)
    w = _parse_point(args.w)
    z = _parse_point(args.z) if args.z is not None else [0j] * len(w)
    report = RunReport(
        "eval",
        {"psi": psi.to_json(), "z": z, "w": w, "mode": args.mode, "method": args.method, "tol": args.tol},
    )
    if psi.N < psi.n + 1:
        raise DivergentWeightError(f"N={psi.N} must be >= n+1={psi.n + 1} (integral weight diverges)")
    if args.mode == "jet":
        if any(v != 0 for v in z):
            raise DomainError("mode jet evaluates at z = 0 only")
        report.results = {"value": phi_jet(psi, w), "method": "jet"}
        return report.finalize()
    if args.method == "mc":
        res = theta_mc(psi, z, w, args.samples, args.seed)
        scale = float(c_const(psi.n, psi.N)) if args.mode == "phi" else 1.0
        report.results = {"value": scale * res.estimate, "method": "mc", "stderr": abs(scale) * res.stderr,
                          "samples": res.samples, "seed": res.seed}
        return report.finalize()
    res = phi_series(psi, z, w, args.tol) if args.mode == "phi" else theta_series(psi, z, w, args.tol)
    report.results = {"value": res.value, "method": "series", "tail_bound": res.tail_bound,
                      "degree_used": res.degree_used}
    report.residuals["tail_bound"] = res.tail_bound
    report.tolerances["tail_bound"] = args.tol
    return report.finalize()


def cmd_check(args) -> RunReport:
    outcome = suites.run_suite(args.suite, args.seed, args.tol)
    report = RunReport("check", {"suite": args.suite, "seed": args.seed, "tol": args.tol})
    for c in outcome.cases:
        report.residuals[c.name] = c.residual
        report.tolerances[c.name] = c.tol
    worst = max(outcome.cases, key=lambda c: c.residual / c.tol if c.tol else c.residual, default=None)
    report.results = {
        "cases": len(outcome.cases),
        "failed": [c.name for c in outcome.cases if not c.passed],
        "max_residual": max((c.residual for c in outcome.cases), default=0.0),
        "worst_case": worst.name if worst else None,
        "findings": outcome.findings,
    }
    return report.finalize()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    extra = None
    try:
        if args.command == "identities":
            report, extra = cmd_identities(args)
        elif args.command == "eval":
            report = cmd_eval(args)
        else:
            report = cmd_check(args)
    except DivergentWeightError as exc:
        print(f"ballcorr: divergent parameters: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ValueError, OSError) as exc:
        print(f"ballcorr: invalid input: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"ballcorr: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(extra if extra is not None else report.to_json() + "\n")
    if args.command == "check":
        for f in report.results["findings"]:
            print(f"finding {f['name']}: {f['status']}" + (f" ratio={f['ratio']}" if "ratio" in f else ""),
                  file=sys.stderr)
    return 0 if report.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
