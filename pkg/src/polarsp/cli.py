"""Command-line interface: construct, polarize, simulate, verify, encode, decode.

Configuration can come from flags or from a key-value text file given with
``--config`` (one ``key = value`` pair per line, keys matching the long flag
names); explicit flags win.  All stochastic commands take a 64-bit ``--seed``
and echo it, together with the generator name and worker count, in '#'
comment lines at the top of their CSV output, so identical invocations yield
identical bytes.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .channels import InputDist, joint_from
from .codec import sc_decode, sc_encode
from .construction import (construct_code, load_codespec, make_channel,
                           periodic_profile_sweep, save_codespec)
from .simulate import RNG_NAME, fer_simulation
from .verify import ALL_SUITES, run_suites

__all__ = ["main"]


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _parse_channel(text: str) -> tuple[str, float]:
    if text == "uninformative":
        return "uninformative", 0.0
    try:
        family, param = text.split(":")
        return family, float(param)
    except ValueError:
        raise SystemExit(f"cannot parse channel spec {text!r}; "
                         "expected e.g. bsc:0.11, bec:0.5, uninformative")


def _parse_m_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _read_config(path: str) -> dict:
    values = {}
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, val = line.split("=", 1)
            else:
                key, val = line.split(None, 1)
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _write_lines(path, lines) -> None:
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def _count_from_args(args, M: int) -> int:
    if args.count is not None:
        return args.count
    if args.rate is not None:
        return int(round(args.rate * M))
    raise SystemExit("give either --count or --rate")


def cmd_construct(args) -> int:
    family, param = _parse_channel(args.channel)
    spec = construct_code(args.M, family, param, args.mode,
                          _count_from_args(args, args.M),
                          mu=args.mu, p0=args.p0)
    save_codespec(spec, args.output)
    return 0


def cmd_polarize(args) -> int:
    family, param = _parse_channel(args.channel)
    w = joint_from(InputDist(args.p0), make_channel(family, param))
    from .channels import cond_entropy
    h_xy = cond_entropy(w)
    ms = args.M
    profiles = periodic_profile_sweep(ms, w, args.mode, mu=args.mu)
    lines = [
        f"# polarize channel={args.channel} p0={_fmt(args.p0)} mode={args.mode} "
        f"mu={args.mu} beta={_fmt(args.beta)}"
        + (f" threshold={_fmt(args.threshold)}" if args.threshold else ""),
        f"# rng: {RNG_NAME}(seed={args.seed}) workers=1",
        "M,fraction_good_Z,fraction_good_K,one_minus_H,H",
    ]
    for m_val in ms:
        z, k, _ = profiles[m_val]
        thr = args.threshold if args.threshold else 2.0 ** (-float(m_val) ** args.beta)
        frac_z = float((z < thr).sum()) / m_val
        frac_k = float((k < thr).sum()) / m_val
        lines.append(",".join([str(m_val), _fmt(frac_z), _fmt(frac_k),
                               _fmt(1.0 - h_xy), _fmt(h_xy)]))
    _write_lines(args.output, lines)
    return 0


def cmd_simulate(args) -> int:
    spec = load_codespec(args.code)
    rate = len(spec.info) / spec.M
    stats = fer_simulation(spec, args.trials, args.seed,
                           workers=args.workers, method=args.method)
    lines = [
        f"# simulate code={args.code} channel={spec.channel}:{_fmt(spec.param)} "
        f"mode={spec.mode} method={args.method}",
        f"# rng: {RNG_NAME}(seed={args.seed}) workers={args.workers}",
        "M,rate,trials,frame_errors,FER,ci_low,ci_high",
        ",".join([str(spec.M), _fmt(rate), str(stats["trials"]),
                  str(stats["errors"]), _fmt(stats["fer"]),
                  _fmt(stats["ci_low"]), _fmt(stats["ci_high"])]),
    ]
    _write_lines(args.output, lines)
    return 0


def cmd_verify(args) -> int:
    names = [args.suite] if args.suite else None
    if names and names[0] not in ALL_SUITES:
        raise SystemExit(f"unknown suite {args.suite!r}; "
                         f"choose from {', '.join(ALL_SUITES)}")
    results = run_suites(names, trials=args.trials, seed=args.seed,
                         fault=args.inject_fault)
    failed = 0
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        print(f"{res.name}: {status} ({res.passed} checks passed, "
              f"{res.failed} failed)")
        for msg in res.messages[:10]:
            print(f"  {msg}")
        failed += res.failed
    return 1 if failed else 0


def _read_bits(text: str) -> np.ndarray:
    return np.array([int(c) for c in text.strip()], dtype=np.uint8)


def cmd_encode(args) -> int:
    spec = load_codespec(args.code)
    data = _read_bits(args.data)
    cw = sc_encode(data, spec)
    print("".join(str(int(b)) for b in cw))
    return 0


def cmd_decode(args) -> int:
    spec = load_codespec(args.code)
    symbols = {"0": 0, "1": 1, "?": 2}
    y = np.array([symbols[c] for c in args.received.strip()], dtype=np.int64)
    _, data = sc_decode(y, spec, method=args.method)
    print("".join(str(int(b)) for b in data))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarsp",
        description="Shortened and punctured polar codes: construction, "
                    "polarization experiments, simulation, verification.")
    parser.add_argument("--config", help="key-value file of default options")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and write its profile")
    p.add_argument("--channel", required=True, help="e.g. bsc:0.11 or bec:0.5")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--mode", choices=("shortened", "punctured"),
                   default="shortened")
    p.add_argument("--rate", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--mu", type=int, default=128)
    p.add_argument("--p0", type=float, default=0.5)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("polarize", help="threshold-fraction sweep over lengths")
    p.add_argument("--channel", required=True)
    p.add_argument("--M", type=_parse_m_list, required=True,
                   help="comma- or space-separated lengths")
    p.add_argument("--mode", choices=("shortened", "punctured"),
                   default="shortened")
    p.add_argument("--mu", type=int, default=128)
    p.add_argument("--p0", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.3,
                   help="threshold exponent, in (0, 1/2)")
    p.add_argument("--threshold", type=float,
                   help="absolute threshold override")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_polarize)

    p = sub.add_parser("simulate", help="Monte Carlo frame error rate")
    p.add_argument("--code", required=True, help="codespec file")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--method", choices=("exact", "minsum"), default="exact")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the randomized verification suites")
    p.add_argument("--suite", help=f"one of {', '.join(ALL_SUITES)}")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--inject-fault", dest="inject_fault",
                   help="corrupt one table cell, e.g. minus:S:B (must fail)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("encode", help="encode a bit string")
    p.add_argument("--code", required=True)
    p.add_argument("--data", required=True, help="information bits, e.g. 0110")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a received string")
    p.add_argument("--code", required=True)
    p.add_argument("--received", required=True,
                   help="received symbols, e.g. 01?10 (BEC erasure = ?)")
    p.add_argument("--method", choices=("exact", "minsum"), default="exact")
    p.set_defaults(func=cmd_decode)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    if "--config" in argv:
        at = argv.index("--config")
        config = _read_config(argv[at + 1])
        # config values become defaults; explicit flags still win
        for action in parser._subparsers._group_actions[0].choices.values():
            known = {a.dest for a in action._actions}
            action.set_defaults(**{k: _coerce(action, k, v)
                                   for k, v in config.items() if k in known})
    args = parser.parse_args(argv)
    return args.func(args)


def _coerce(subparser, dest: str, value: str):
    for action in subparser._actions:
        if action.dest == dest and action.type is not None:
            return action.type(value)
    return value


if __name__ == "__main__":
    raise SystemExit(main())
