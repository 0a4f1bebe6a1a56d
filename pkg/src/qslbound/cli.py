"""Command-line entry point: ``qslbound`` / ``python3 -m qslbound``.

Exit codes: 0 success, 1 invalid configuration, 2 numerical failure,
3 analytic/oracle mismatch.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .density import DerivativeMethod
from .errors import OracleMismatch, QslError
from .oracle import oracle_check
from .params import ModelParams, NormalizationMode
from .runner import (OutputFormat, RunConfig, SweepSpec, emit, run_single, run_sweep,
                     sweep_path, to_csv, to_json)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ORACLE = 0, 1, 2, 3

ORACLE_T_MAX = 5.0
ORACLE_POINTS = 25

log = logging.getLogger("qslbound")


class _ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default, which is reserved here
    def error(self, message):
        raise _ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qslbound",
                description="Quantum speed limit lower bound of a spin coupled to a boson mode.")
    p.add_argument("--omega", type=float, default=1.0, help="spin frequency (default 1)")
    p.add_argument("--beta", type=float, default=1.0, help="boson frequency (default 1)")
    p.add_argument("--eta", type=float, nargs="+", default=None,
                   help="coupling; several values with --sweep (default 0.1, sweep 0.1 1 5)")
    p.add_argument("--j", type=float, default=0.5, help="spin quantum number (default 1/2)")
    p.add_argument("--nmax", type=int, nargs="+", default=None,
                   help="retained boson occupation; several with --sweep (default 0, sweep 0 5 10)")
    p.add_argument("--t-max", type=float, default=20.0, help="end of the time grid (default 20)")
    p.add_argument("--steps", type=int, default=400, help="grid intervals (default 400)")
    p.add_argument("--mode", choices=[m.value for m in NormalizationMode],
                   default=NormalizationMode.INITIAL_UNIT.value)
    p.add_argument("--derivative", choices=[m.value for m in DerivativeMethod],
                   default=DerivativeMethod.ANALYTIC.value)
    p.add_argument("--sweep", action="store_true",
                   help="run every (eta, nmax) combination and report saturation")
    p.add_argument("--oracle-check", action="store_true",
                   help="compare against full propagation on 25 points before running")
    p.add_argument("--format", choices=[f.value for f in OutputFormat], default="csv")
    p.add_argument("--out", default=None,
                   help="output file; with --sweep one file per key is derived from it")
    p.add_argument("--workers", type=int, default=None,
                   help="processes for --sweep (default: number of CPUs)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _base_params(args, eta: float, n_max: int) -> ModelParams:
    return ModelParams(omega=args.omega, beta=args.beta, eta=eta, j=args.j, n_max=n_max)


def _check(params: ModelParams, mode: NormalizationMode, out):
    rep = oracle_check(params, mode, t_max=ORACLE_T_MAX, points=ORACLE_POINTS)
    print(f"oracle-check eta={params.eta:g} n_max={params.n_max}: max |diff| = "
          f"{rep.max_error:.3e} (fock {rep.fock_dim}, doubling drift {rep.fock_drift:.3e})",
          file=out)


def _single(args) -> int:
    if len(args.eta or [0.1]) > 1 or len(args.nmax or [0]) > 1:
        raise _ConfigError("several --eta/--nmax values need --sweep")
    params = _base_params(args, (args.eta or [0.1])[0], (args.nmax or [0])[0])
    cfg = RunConfig(params, args.t_max, args.steps, NormalizationMode(args.mode),
                    DerivativeMethod(args.derivative))
    if args.oracle_check:
        _check(params, cfg.mode, sys.stderr)
    records = run_single(cfg)
    fmt = OutputFormat(args.format)
    if args.out:
        emit(records, fmt, args.out, cfg)
    else:
        sys.stdout.write(to_csv(records) if fmt is OutputFormat.CSV else to_json(records, cfg))
    return EXIT_OK


def _sweep(args) -> int:
    spec = SweepSpec(
        eta_list=tuple(args.eta or (0.1, 1.0, 5.0)),
        n_max_list=tuple(args.nmax or (0, 5, 10)),
        grid=(args.t_max, args.steps),
        base=_base_params(args, 0.1, 0),
        mode=NormalizationMode(args.mode),
        derivative=DerivativeMethod(args.derivative))
    for key in spec.keys():
        spec.config(*key)  # validate every key before any work
    if args.oracle_check:
        for key in spec.keys():
            _check(spec.config(*key).params, spec.mode, sys.stderr)
    res = run_sweep(spec, args.workers)
    fmt = OutputFormat(args.format)
    for key, recs in res.records.items():
        if args.out:
            emit(recs, fmt, sweep_path(args.out, *key), spec.config(*key))
        peak = max(r.t_LB for r in recs)
        print(f"eta={key[0]:g} n_max={key[1]}: {len(recs)} rows, peak t_LB = {peak:.6g}")
    for key, err in res.errors.items():
        print(f"eta={key[0]:g} n_max={key[1]}: FAILED {err}")
    for s in res.saturation:
        print(f"saturation eta={s.eta:g}: sup|t_LB(10) - t_LB(5)| = {s.sup_diff:.4g} "
              f"= {s.ratio:.2%} of peak {s.peak:.4g} -> {'saturated' if s.passed else 'not saturated'}")
    return EXIT_OK if res.ok else EXIT_NUMERIC


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return _sweep(args) if args.sweep else _single(args)
    except _ConfigError as exc:
        print(f"qslbound: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OracleMismatch as exc:
        print(f"qslbound: oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except QslError as exc:
        print(f"qslbound: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"qslbound: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"qslbound: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
