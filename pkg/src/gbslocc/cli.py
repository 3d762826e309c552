"""Command-line interface.

Machine-readable JSON goes to stdout, human-readable notes to stderr.
Exit codes: 0 success, 2 invalid input / domain error, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__, kernels
from .census import CensusConfig, CensusError, run_census
from .clifford import build_unitary, verify_clifford
from .criterion import SUFFICIENCY_ONLY, classify
from .oracle import CERT_TOL, SearchBudget, search_phi
from .protocol import simulate_discrimination
from .weyl import GbsSet
from .zmod import DomainError, is_prime, sp_new

EXIT_OK, EXIT_INTERNAL, EXIT_DOMAIN = 0, 1, 2


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def read_set(arg: str) -> GbsSet:
    """A GBS set from inline JSON, ``-`` (stdin) or a file path."""
    if arg == "-":
        text = sys.stdin.read()
    elif arg.lstrip().startswith("{"):
        text = arg
    else:
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise DomainError(f"cannot read {arg}: {exc.strerror}") from None
    return GbsSet.from_json(text)


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_check(args) -> int:
    s = read_set(args.set)
    verdict = classify(s)
    out = verdict.to_dict()
    exact_case = is_prime(s.d) and len(s) == s.d
    out["sufficiency_only"] = not exact_case
    if args.oracle:
        if args.seed is None:
            raise UsageError("--oracle needs --seed")
        rep = search_phi(s, args.restarts, args.max_iters, args.tol, seed=args.seed)
        out["oracle"] = rep.to_dict()
    _emit(out, args.out)
    scope = "necessary and sufficient (prime d, d states)" if exact_case else SUFFICIENCY_ONLY
    _note(f"d={s.d}, {len(s)} states: {verdict.status.value} [{scope}]")
    return EXIT_OK


def _parse_sp(text: str) -> tuple[int, int, int, int]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--sp expects four comma-separated integers, got {text!r}") from None
    if len(vals) != 4:
        raise UsageError(f"--sp expects four comma-separated integers, got {text!r}")
    return vals


def cmd_unitary(args) -> int:
    sp = sp_new(*_parse_sp(args.sp), args.d)
    u = build_unitary(sp)
    ok, (rx, rz) = verify_clifford(u)
    if not ok:
        raise RuntimeError(f"synthesized unitary failed verification (residuals {rx:.3g}, {rz:.3g})")
    _emit(u.to_dict(), args.out)
    _note(f"U for {sp.rows()} mod {args.d}: conjugation residuals {rx:.2e}, {rz:.2e}")
    return EXIT_OK


def cmd_protocol(args) -> int:
    s = read_set(args.set)
    res = simulate_discrimination(s, args.trials, args.seed)
    _emit(res.to_dict(), args.out)
    _note(f"{res.trials} trials, success rate {res.success_rate}")
    return EXIT_OK


def cmd_phi_search(args) -> int:
    s = read_set(args.set)
    rep = search_phi(s, args.restarts, args.max_iters, args.tol, seed=args.seed)
    _emit(rep.to_dict(), args.out)
    _note(f"{rep.status.value}, residual {rep.residual:.3e} (restart {rep.restart_index})")
    return EXIT_OK


def cmd_census(args) -> int:
    if args.mode == "sample" and args.count is None:
        raise UsageError("--mode sample needs --count")
    cfg = CensusConfig(
        d=args.d,
        l=args.l,
        mode=args.mode,
        count=args.count or 0,
        seed=args.seed,
        oracle=not args.no_oracle,
        budget=SearchBudget(args.restarts, args.max_iters, args.tol),
        out=args.out,
        checkpoint_every=args.checkpoint_every,
        jobs=args.jobs,
    )
    summary = run_census(cfg)
    _emit(summary)
    _note(
        f"census d={cfg.d} l={cfg.l}: {summary['total']} sets, {summary['f_equivalent']} F-equivalent, "
        f"{summary['oracle_only_certified']} oracle-only certificates [{kernels.BACKEND} kernels]"
    )
    return EXIT_OK


def _add_budget(p, default_restarts=64, default_iters=2000):
    p.add_argument("--restarts", type=int, default=default_restarts)
    p.add_argument("--max-iters", type=int, default=default_iters)
    p.add_argument("--tol", type=float, default=CERT_TOL)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gbslocc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gbslocc {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="classify a GBS set")
    p.add_argument("set", help='inline JSON {"d":..,"states":[[m,n],..]}, a file path, or -')
    p.add_argument("--oracle", action="store_true", help="also run the numerical one-way search")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    _add_budget(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("unitary", help="synthesize U for an Sp(d) matrix")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--sp", required=True, help="alpha,beta,gamma,delta")
    p.add_argument("--out")
    p.set_defaults(func=cmd_unitary)

    p = sub.add_parser("protocol", help="simulate the computational-basis protocol on an F-type set")
    p.add_argument("set")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("phi-search", help="numerical search for a Ghosh state")
    p.add_argument("set")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    _add_budget(p)
    p.set_defaults(func=cmd_phi_search)

    p = sub.add_parser("census", help="classify all or sampled l-subsets")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="JSONL rows; summary goes to OUT.summary.json and stdout")
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("--checkpoint-every", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    _add_budget(p)
    p.set_defaults(func=cmd_census)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _note(f"gbslocc: error: {exc}")
        return EXIT_DOMAIN
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except (DomainError, CensusError) as exc:
        _note(f"gbslocc {args.command}: {exc}")
        return EXIT_DOMAIN
    except Exception as exc:  # noqa: BLE001
        _note(f"gbslocc {args.command}: internal error: {exc!r}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
