"""Command line entry point.  Every command prints one JSON report on stdout.

Exit codes: 0 pass, 1 theorem check failed, 2 usage or validation error,
3 splitting field required or size budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from contextlib import contextmanager
from dataclasses import replace

from .config import PRESETS, Config, load_config, parse_field, preset
from .errors import AbelDecompError, CenterNotSeparated, SizeBudgetExceeded, SplittingFieldRequired
from .isotypic import decompose, decompose_tensor
from .motivicalg import verify_cor_princ, verify_thm_cle
from .weyldiagrams import diagram_span, matching_count
from .lefschetz import centralizer_basis

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_FIELD = 0, 1, 2, 3
THREADS_ENV = "ABELDECOMP_THREADS"


class UsageError(Exception):
    pass


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


class Report:
    def __init__(self, cfg: Config | None, command: list[str], seed: int, timings: bool):
        self.cfg = cfg
        self.command = command
        self.seed = seed
        self.keep_timings = timings
        self.dims: dict = {}
        self.verdicts: dict = {}
        self.components: list = []
        self.witnesses: list = []
        self.timings: dict = {}
        self.warnings: list = []
        self.error: str | None = None

    @contextmanager
    def timed(self, label: str):
        t0 = time.perf_counter()
        yield
        if self.keep_timings:
            self.timings[label] = round((time.perf_counter() - t0) * 1000, 3)

    def as_dict(self) -> dict:
        out = {
            "config_echo": self.cfg.echo() if self.cfg else None,
            "command": self.command,
            "dims": self.dims,
            "verdicts": self.verdicts,
            "components": self.components,
            "witnesses": self.witnesses,
            "timings_ms": self.timings,
            "seed": self.seed,
            "warnings": self.warnings,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))

    def pretty(self) -> str:
        lines = [f"command: {' '.join(self.command)}"]
        if self.cfg:
            lines.append(f"data: {self.cfg.data.name} over min_poly {self.cfg.echo()['field']['min_poly']}")
        lines.append(f"seed: {self.seed}")
        for key in sorted(self.dims):
            lines.append(f"dims {key}: {self.dims[key]}")
        for key in sorted(self.verdicts):
            lines.append(f"{'PASS' if self.verdicts[key] else 'FAIL'}  {key}")
        for c in self.components:
            tw = "" if c["weight_twist"] is None else f"  weight twist {c['weight_twist']}"
            lines.append(f"component {c['label']}: rank {c['rank']}{tw}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        if self.error:
            lines.append(f"error: {self.error}")
        for key in sorted(self.timings):
            lines.append(f"time {key}: {self.timings[key]} ms")
        return "\n".join(lines)


def _positive(name: str):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--config", help="JSON config file")
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in datum (default: siegel)")
    common.add_argument("--g", type=_positive("g"), help="half dimension for siegel")
    common.add_argument("--d", type=_positive("d"), help="squarefree d for cm")
    common.add_argument("--min-poly", help="comma separated coefficients, low to high, e.g. 1,0,1")
    common.add_argument("--seed", type=int, help="seed for idempotent search (default 0 or config)")
    common.add_argument("--pretty", action="store_true", help="human readable rendering")
    common.add_argument("--allow-large", action="store_true", help="lift the operator size budget")
    common.add_argument("--threads", type=_positive("threads"), default=None,
                        help=f"worker threads (default ${THREADS_ENV} or all cores)")
    common.add_argument("--timings", action="store_true", help="record wall times (breaks byte stability)")

    p = argparse.ArgumentParser(prog="abeldecomp", description="Exact centralizer algebras and "
                                "isotypic decompositions of tensor and exterior powers of polarized data.")
    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("verify", parents=[common], help="closure = centralizer = diagram span on V^(x)n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--drop", action="append", default=[], choices=["perm", "endo", "proj"],
                   help="remove a generator family (negative control)")
    s = sub.add_parser("verify-bir", parents=[common], help="B_{i,r} = End_Lef(Lambda^i(V^(+r)))")
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s = sub.add_parser("decompose", parents=[common], help="isotypic decomposition with witnesses")
    s.add_argument("--i", type=int)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--n", type=int, help="decompose V^(x)n instead of an exterior power")
    s.add_argument("--fine", action="store_true", help="also split components (choice dependent)")
    s = sub.add_parser("oracle-diagram", parents=[common], help="decorated matching span on V^(x)n")
    s.add_argument("--n", type=int, required=True)
    sub.add_parser("report", parents=[common], help="default suite on the chosen datum")
    return p


def _config(args) -> Config:
    field = parse_field(args.min_poly) if args.min_poly else None
    if args.config:
        cfg = load_config(args.config)
        if field is not None and field != cfg.field:
            raise UsageError("--min-poly conflicts with the field of the config file")
    else:
        kw = {"field": field} if field is not None else {}
        cfg = preset(args.preset or "siegel", g=args.g, d=args.d, **kw)
    if args.allow_large:
        cfg = replace(cfg, budgets=replace(cfg.budgets, allow_large=True))
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _need(value, name: str, low: int = 1) -> int:
    if value is None or value < low:
        raise UsageError(f"--{name} must be >= {low}")
    return value


def _check_into(rep: Report, check, prefix: str = ""):
    for k, v in check.dims.items():
        rep.dims[prefix + k] = v
    for k, v in check.verdicts.items():
        rep.verdicts[prefix + k] = bool(v)
    rep.warnings.extend(check.warnings)


def _decomp_into(rep: Report, dec, field, prefix: str = ""):
    comps, wits = dec.to_json(field)
    for c, w in zip(comps, wits):
        c["label"] = prefix + str(c["index"])
        w["label"] = c["label"]
    rep.components.extend(comps)
    rep.witnesses.extend(wits)
    for k, v in dec.dims.items():
        rep.dims[prefix + k] = v
    rep.dims[prefix + "components"] = len(comps)
    for k, v in dec.certificates.items():
        rep.verdicts[prefix + k] = bool(v)
    rep.warnings.extend(dec.warnings)


def cmd_verify(args, cfg: Config, rep: Report):
    n = _need(args.n, "n")
    with rep.timed("verify"):
        chk = verify_thm_cle(cfg.data, n, cfg.budgets, drop=args.drop, threads=args.threads)
    _check_into(rep, chk)
    return chk.passed


def cmd_verify_bir(args, cfg: Config, rep: Report):
    i, r = _need(args.i, "i"), _need(args.r, "r")
    with rep.timed("verify_bir"):
        chk = verify_cor_princ(cfg.data, i, r, cfg.budgets)
    _check_into(rep, chk)
    return chk.passed


def cmd_decompose(args, cfg: Config, rep: Report):
    with rep.timed("decompose"):
        if args.n is not None:
            if args.i is not None:
                raise UsageError("give either --n or --i/--r, not both")
            dec = decompose_tensor(cfg.data, _need(args.n, "n"), cfg.budgets, cfg.seed, args.fine)
        else:
            i, r = _need(args.i, "i"), _need(args.r, "r")
            dec = decompose(cfg.data, i, r, cfg.budgets, cfg.seed, args.fine)
    if args.fine:
        rep.warnings.append("fine splitting requested: components below the isotypic level depend on choices")
    _decomp_into(rep, dec, cfg.field)
    return all(dec.certificates.values())


def cmd_oracle_diagram(args, cfg: Config, rep: Report):
    n = _need(args.n, "n")
    with rep.timed("diagram"):
        diag = diagram_span(cfg.data, n, cfg.budgets, args.threads)
    with rep.timed("centralizer"):
        cent = centralizer_basis(cfg.data, n, cfg.budgets)
    rep.dims.update({
        "diagram": diag.dim,
        "centralizer": cent.dim,
        "matchings": matching_count(n),
        "decorated_matchings": matching_count(n) * len(cfg.data.e_basis) ** n,
    })
    rep.verdicts["diagram_in_centralizer"] = diag.issubset(cent)
    rep.verdicts["diagram_eq_centralizer"] = diag.same_span(cent)
    return rep.verdicts["diagram_eq_centralizer"]


REPORT_TENSOR = (1, 2)
REPORT_WEDGE = ((1, 1), (1, 2), (2, 1), (2, 2))


def cmd_report(args, cfg: Config, rep: Report):
    ok = True
    for n in REPORT_TENSOR:
        with rep.timed(f"verify n={n}"):
            chk = verify_thm_cle(cfg.data, n, cfg.budgets, threads=args.threads)
        _check_into(rep, chk, f"verify n={n}: ")
        ok &= chk.passed
    for i, r in REPORT_WEDGE:
        with rep.timed(f"verify-bir i={i} r={r}"):
            chk = verify_cor_princ(cfg.data, i, r, cfg.budgets)
        _check_into(rep, chk, f"verify-bir i={i} r={r}: ")
        ok &= chk.passed
    for i, r in REPORT_WEDGE:
        tag = f"decompose i={i} r={r}: "
        try:
            with rep.timed(tag.rstrip(": ")):
                dec = decompose(cfg.data, i, r, cfg.budgets, cfg.seed)
        except (SplittingFieldRequired, CenterNotSeparated) as exc:
            rep.warnings.append(f"{tag}{type(exc).__name__}: {exc}")
            continue
        _decomp_into(rep, dec, cfg.field, tag)
        ok &= all(dec.certificates.values())
    return ok


COMMANDS = {
    "verify": cmd_verify,
    "verify-bir": cmd_verify_bir,
    "decompose": cmd_decompose,
    "oracle-diagram": cmd_oracle_diagram,
    "report": cmd_report,
}


def run(argv: list[str] | None = None, out=None) -> int:
    """Parse ``argv``, run one command, write the report to ``out``; return the exit code."""
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    if args.threads is None:
        args.threads = default_threads()
    rep = Report(None, argv, args.seed or 0, args.timings)
    # the command line never carries run-local settings into the report
    rep.command = [a for a in argv if a not in ("--pretty", "--timings")]
    rep.command = _strip_threads(rep.command)
    try:
        cfg = _config(args)
        rep.cfg, rep.seed = cfg, cfg.seed
        passed = COMMANDS[args.cmd](args, cfg, rep)
        code = EXIT_PASS if passed else EXIT_FAIL
    except (SplittingFieldRequired, SizeBudgetExceeded) as exc:
        rep.error, code = f"{type(exc).__name__}: {exc}", EXIT_FIELD
    except (UsageError, ValueError, AbelDecompError) as exc:
        rep.error, code = f"{type(exc).__name__}: {exc}", EXIT_USAGE
    except OSError as exc:
        rep.error, code = f"{type(exc).__name__}: {exc}", EXIT_USAGE
    out.write((rep.pretty() if args.pretty else rep.dumps()) + "\n")
    return code


def _strip_threads(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--threads":
            skip = True
            continue
        if a.startswith("--threads="):
            continue
        out.append(a)
    return out


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
