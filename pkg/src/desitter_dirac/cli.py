"""
Command-line interface.

    desitter-dirac run <scenario.json>
    desitter-dirac predict-blowup <scenario.json>
    desitter-dirac scattering <scenario.json>
    desitter-dirac compare-oracles <scenario.json>
    desitter-dirac selftest [--out DIR]

A scenario argument may also be the name of a bundled scenario
(``desitter-dirac run free_decay``). The environment variable
``DESITTER_DIRAC_THREADS`` caps the number of threads used by the numerical
libraries. Exit status: 0 success (including a flagged blow-up), 1
configuration error, 2 failed precondition, 3 runtime failure, 4 a check
did not pass.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import scenario as scn
from . import selftest
from .errors import ConfigError, NumericalError, PreconditionError

THREADS_ENV = "DESITTER_DIRAC_THREADS"
_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def thread_cap():
    """Thread limit from ``DESITTER_DIRAC_THREADS``, or ``None`` when unset."""
    raw = os.environ.get(THREADS_ENV)
    if raw in (None, ""):
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def build_parser():
    ap = argparse.ArgumentParser(prog="desitter-dirac",
                                 description="Semilinear Dirac equations in de Sitter space")
    ap.add_argument("-v", "--verbose", action="store_true", help="log preconditions and progress")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (("run", "evolve a scenario and run its checks"),
                           ("predict-blowup", "lifespan prediction and blow-up detection"),
                           ("scattering", "scattering datum and asymptotic freeness"),
                           ("compare-oracles", "kernel formula vs finite differences")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("scenario", help="scenario JSON file or bundled scenario name")
        p.add_argument("--out", help="output directory (overrides the scenario)")
    p = sub.add_parser("selftest", help="fast deterministic invariant suite")
    p.add_argument("--out", default="selftest_out", help="directory for selftest.csv")
    sub.add_parser("list", help="list the bundled scenarios")
    return ap


def _dispatch(args):
    if args.command == "list":
        for path in scn.bundled_scenarios():
            print(path.stem)
        return scn.EXIT_OK
    if args.command == "selftest":
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        ok, rows = selftest.run(out / "selftest.csv")
        for name, value, tol, passed in rows:
            print(f"{'PASS' if passed else 'FAIL'}  {name:<34} {value:.3e} (tol {tol:.1e})")
        print(f"selftest {'passed' if ok else 'FAILED'}; CSV in {out / 'selftest.csv'}")
        return scn.EXIT_OK if ok else scn.EXIT_CHECK_FAILED
    sc_ = scn.load(scn.scenario_path(args.scenario), args.out)
    action = {"run": scn.run_scenario, "predict-blowup": scn.predict_blowup,
              "scattering": scn.scattering_report, "compare-oracles": scn.compare_oracles}
    code, _, lines = action[args.command](sc_)
    print("\n".join(lines))
    print(f"artifacts in {sc_.output_dir}")
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cap = thread_cap()
        if cap is not None:
            for var in _THREAD_VARS:
                os.environ.setdefault(var, str(cap))
            with threadpool_limits(limits=cap):
                return _dispatch(args)
        return _dispatch(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return scn.EXIT_CONFIG
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return scn.EXIT_PRECONDITION
    except (NumericalError, FloatingPointError, MemoryError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return scn.EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
