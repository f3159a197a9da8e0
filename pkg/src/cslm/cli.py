"""Command-line front end.

Exit codes: 0 success, 1 computational or verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .mc_sim import SimConfig, SimulationError, ccdf_at, report_to_csv, run_simulation
from .slm_conventional import run_conventional_slm
from .slm_cyclic import (ShiftTable, check_good_condition, equivalent_phase_vector, gen_mj_shifts,
                         gen_random_shifts, run_cyclic_slm)
from .transform import (StageTapConfig, TwiddleTable, combine_with_shifts, direct_combine, ifft,
                        ifft_to_stage, naive_idft)

REL_TOL = 1e-9


def _rel_err(a, b) -> float:
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def _tap(parser, n_fft, i) -> StageTapConfig:
    try:
        return StageTapConfig(n_fft, i)
    except ValueError as exc:
        parser.error(str(exc))


def _shift_table(parser, args, tap) -> ShiftTable:
    try:
        if getattr(args, "shift_file", None):
            return ShiftTable.load(args.shift_file, tap)
        if args.shift_method == "mj":
            return gen_mj_shifts(args.u, tap)
        return gen_random_shifts(args.u, tap, seed=[args.seed, 2])
    except (OSError, ValueError) as exc:
        parser.error(f"shift table: {exc}")


def cmd_ccdf(args, parser) -> int:
    table = None
    if args.shift_file:
        table = _shift_table(parser, args, _tap(parser, args.n, args.i))
    try:
        thresholds = np.round(np.arange(args.min_db, args.max_db + args.step_db / 2, args.step_db), 6)
        cfg = SimConfig(n_fft=args.n, U=args.u, i=args.i, trials=args.trials, seed=args.seed,
                        schemes=args.scheme, shift_method="file" if table else args.shift_method,
                        phase_seed=args.phase_seed, thresholds_db=tuple(thresholds), shift_table=table)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        report = run_simulation(cfg, threads=args.threads)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    Path(args.out).write_text(report_to_csv(report))
    for scheme, curve in report.curves.items():
        for level in (1e-1, 1e-2):
            try:
                val = f"{ccdf_at(curve, level):.3f} dB"
            except ValueError:
                val = "out of range"
            print(f"{scheme} ccdf_at({level:g}) = {val}")
    print(f"wrote {args.out}")
    return 0


def cmd_ccrr_table(args, parser) -> int:
    text = analysis.format_ccrr_csv() if args.format == "csv" else analysis.format_ccrr_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_rho(args, parser) -> int:
    tap = _tap(parser, args.n, args.i)
    table = _shift_table(parser, args, tap)
    bound = analysis.correlation_bound(tap)
    rows = ["j,v,tau,rho"]
    print(f"N={tap.n_fft} M={tap.M} L={tap.L} bound L^2/N^2={bound!r}")
    for j in range(table.U):
        for v in range(j + 1, table.U):
            prof = analysis.rho_profile(equivalent_phase_vector(tap, table.shifts[j]),
                                        equivalent_phase_vector(tap, table.shifts[v]))
            print(f"pair ({j},{v}): max rho = {prof.max_value:.6g} "
                  f"({'at bound' if abs(prof.max_value - bound) < 1e-12 else 'above bound'})")
            rows += [f"{j},{v},{t},{r!r}" for t, r in enumerate(prof.values)]
    report = check_good_condition(table)
    print(f"good-shift condition: {'satisfied' if report.satisfied else f'{len(report.violations)} violations'}")
    if args.out:
        Path(args.out).write_text("\n".join(rows) + "\n")
    return 0


def cmd_shifts(args, parser) -> int:
    tap = _tap(parser, args.n, args.i)
    table = _shift_table(parser, args, tap)
    report = check_good_condition(table)
    if args.out:
        table.save(args.out)
    else:
        sys.stdout.write(table.to_text())
    print(f"# method={table.method} U={table.U} M={tap.M} L={tap.L} "
          f"good={'yes' if report.satisfied else 'no'} violations={len(report.violations)}",
          file=sys.stderr)
    return 0


def verify(max_n: int = 256, cases: int = 200, seed: int = 0, fault: bool = False, log=print) -> bool:
    """Run the transform / equivalence / op-count checks on random cases."""
    max_log = max_n.bit_length() - 1
    checks = {"ifft_vs_naive": 0, "combine_vs_direct": 0, "scheme_equivalence": 0, "op_counts": 0}
    for case in range(cases):
        rng = np.random.default_rng([seed, case])
        n = int(rng.integers(3, max_log + 1))
        N, i, U = 1 << n, int(rng.integers(1, n)), int(rng.choice([2, 4, 8]))
        tw = TwiddleTable(N, sign=-1) if fault else None
        tap = StageTapConfig(N, i)
        X = rng.normal(size=N) + 1j * rng.normal(size=N)
        table = gen_random_shifts(U, tap, seed=rng.integers(2**32))
        where = f"case={case} seed={seed} N={N} i={i} U={U}"

        x, _ = ifft(X, table=tw)
        err = _rel_err(x, naive_idft(X))
        if err > REL_TOL:
            log(f"FAIL ifft_vs_naive: {where} rel_err={err:.3e}")
            return False
        checks["ifft_vs_naive"] += 1

        sb, _ = ifft_to_stage(X, tap, tw)
        for row in table.shifts:
            err = _rel_err(combine_with_shifts(sb, row, tw)[0], direct_combine(sb, row))
            if err > REL_TOL:
                log(f"FAIL combine_vs_direct: {where} shifts={row.tolist()} rel_err={err:.3e}")
                return False
        checks["combine_vs_direct"] += 1

        res = run_cyclic_slm(X, table, tw)
        pvs = np.stack([equivalent_phase_vector(tap, row) for row in table.shifts])
        conv = run_conventional_slm(X, pvs, tw)
        err = _rel_err(res.alternatives, conv.alternatives)
        if err > REL_TOL:
            log(f"FAIL scheme_equivalence: {where} rel_err={err:.3e}")
            return False
        checks["scheme_equivalence"] += 1

        want_p = analysis.complexity_model("proposed", n, i, U)
        want_c = analysis.complexity_model("conventional", n, i, U)
        if (res.op_count.cmul, res.op_count.cadd) != (want_p.cmul_total, want_p.cadd_total) or \
                (conv.op_count.cmul, conv.op_count.cadd) != (want_c.cmul_total, want_c.cadd_total):
            log(f"FAIL op_counts: {where} proposed={res.op_count} conventional={conv.op_count}")
            return False
        checks["op_counts"] += 1
        if case == 0:
            log(f"op-count cross-check {where}: proposed cmul={want_p.cmul_total} cadd={want_p.cadd_total}, "
                f"conventional cmul={want_c.cmul_total} cadd={want_c.cadd_total} (matched)")
    for name, passed in checks.items():
        log(f"PASS {name}: {passed}/{cases} cases")
    return True


def cmd_verify(args, parser) -> int:
    if args.max_n < 8 or args.max_n & (args.max_n - 1):
        parser.error("--max-n must be a power of two >= 8")
    if args.cases < 1:
        parser.error("--cases must be >= 1")
    return 0 if verify(args.max_n, args.cases, args.seed, args.inject_twiddle_fault) else 1


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cslm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("ccdf", help="Monte Carlo CCDF of selected PAPR, written as CSV")
    c.add_argument("--n", type=int, required=True, help="number of subcarriers N")
    c.add_argument("--u", type=_positive_int, required=True, help="number of alternatives U")
    c.add_argument("--i", type=_positive_int, required=True, help="remaining IFFT stages i")
    c.add_argument("--trials", type=_positive_int, default=100_000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--phase-seed", type=int, default=None)
    c.add_argument("--scheme", choices=["conventional", "proposed", "both"], default="both")
    c.add_argument("--shift-method", choices=["random", "mj"], default="random")
    c.add_argument("--shift-file", default=None, help="plain-text shift table (overrides --shift-method)")
    c.add_argument("--min-db", type=float, default=4.0)
    c.add_argument("--max-db", type=float, default=13.0)
    c.add_argument("--step-db", type=float, default=0.1)
    c.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_ccdf)

    t = sub.add_parser("ccrr-table", help="complexity reduction ratio table")
    t.add_argument("--format", choices=["text", "csv"], default="text")
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_ccrr_table)

    for name, func, helptext in (("rho", cmd_rho, "correlation profiles of equivalent phase vectors"),
                                 ("shifts", cmd_shifts, "generate a shift table")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--i", type=_positive_int, required=True)
        s.add_argument("--u", type=_positive_int, required=True)
        s.add_argument("--shift-method", "--method", dest="shift_method", choices=["random", "mj"],
                       default="mj")
        s.add_argument("--seed", type=int, default=0)
        if name == "rho":
            s.add_argument("--shift-file", default=None)
        s.add_argument("--out", default=None)
        s.set_defaults(func=func)

    v = sub.add_parser("verify", help="equivalence and op-count property checks")
    v.add_argument("--max-n", type=int, default=256)
    v.add_argument("--cases", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-twiddle-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    return args.func(args, sub)


if __name__ == "__main__":
    sys.exit(main())
