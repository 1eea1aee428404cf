"""Command line interface: ``opentropy {sample,boundary,verify,evolve,channel}``.

Data goes to standard output (CSV or JSON), diagnostics to standard error.
Exit codes: 0 success, 1 a bound violation was found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .channel import (
    choi,
    choi_stack,
    coherent_information_at_mixed,
    complementary,
    entropy_from_spectrum,
    entropy_pairs,
    entropy_point,
)
from .errors import OpentropyError
from .families import (
    LMatrix,
    NAMED_CHANNELS,
    boundary_curve,
    kraus_from_L,
    named_channel,
    product_saturating_channel,
    violation_depth,
)
from .io import fmt, log_divisor, read_channel, write_points_csv
from .linalg import RngStream, gue_hamiltonian, haar_unitary, hermitian_eigenvalues
from .sampling import SamplerConfig, boundary_starts, evolve_many, sample_operators, survey_arrays

VIOLATION_TOL = 1e-9
BOUNDARY_TOL = 1e-6
METHOD_NAMES = {"haar": "haar_block", "stratified": "stratified"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text}")
    return value


def _nonnegative_float(text):
    value = float(text)
    if not math.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return value


def _emit_json(obj, out):
    out.write(json.dumps(obj, indent=2))
    out.write("\n")


# -- sample -----------------------------------------------------------------

def cmd_sample(args, out):
    cfg = SamplerConfig(args.n, args.env or args.n, METHOD_NAMES[args.method], args.samples, args.seed)
    s, st, _ = survey_arrays(cfg, workers=args.workers)
    write_points_csv(out, s, st, [args.method] * len(s), log_divisor(args.log_base))
    return 0


# -- boundary ---------------------------------------------------------------

def cmd_boundary(args, out):
    if args.n not in (2, 3, 4):
        raise UsageError(f"boundary: closed-form curves exist for --n 2, 3, 4 only, got {args.n}")
    s_all, st_all, tags = [], [], []
    for curve in boundary_curve(args.n):
        _, s, st = curve.sample(args.points)
        s_all.extend(s)
        st_all.extend(st)
        tags.extend([curve.branch] * len(s))
    write_points_csv(out, s_all, st_all, tags, log_divisor(args.log_base))
    return 0


# -- verify -----------------------------------------------------------------

def _prop1_gaps(ops):
    """Largest gaps in both entropy identities for a stack of Kraus sets."""
    s, st = entropy_pairs(ops)
    s_choi = entropy_from_spectrum(np.linalg.eigvalsh(choi_stack(ops)))
    comp = np.swapaxes(ops, -3, -2)
    st_choi = entropy_from_spectrum(np.linalg.eigvalsh(choi_stack(comp)))
    return s, st, float(max(np.max(np.abs(s - s_choi)), np.max(np.abs(st - st_choi))))


def _divisor_pairs(n):
    return [(a, n // a) for a in range(2, n) if n % a == 0]


def cmd_verify(args, out):
    if args.channel:
        ch = read_channel(args.channel)
        ops = ch.operators[np.newaxis]
        n, env, samples, label = ch.dim_in, ch.m, 1, ch.label
        resid = ch.identity_residual()
    else:
        if args.n is None:
            raise UsageError("verify: give --n (with --env/--samples/--seed) or --channel")
        env = args.env or args.n
        cfg = SamplerConfig(args.n, env, METHOD_NAMES[args.method], args.samples, args.seed)
        ops = sample_operators(cfg)
        n, samples, label = args.n, args.samples, cfg.method
        total = np.einsum("ckji,ckjl->cil", ops.conj(), ops)
        resid = float(np.max(np.abs(total - np.eye(n))))
    s, st, gap = _prop1_gaps(ops)
    bound = math.log(n)
    sums = s + st
    violations = int(np.sum(sums < bound - VIOLATION_TOL))
    report = {
        "n": n,
        "env": env,
        "source": label,
        "samples": samples,
        "min_sum": float(sums.min()),
        "bound": bound,
        "violations": violations,
        "prop1_max_gap": gap,
        "max_S": float(s.max()),
        "max_Stilde": float(st.max()),
        "individual_bound_violations": int(
            np.sum(s > math.log(env) + VIOLATION_TOL) + np.sum(st > bound + VIOLATION_TOL)
        ),
        "max_identity_residual": resid,
    }
    if not args.channel:
        sat = []
        root = RngStream(args.seed, key=(1,))
        for k, (n_a, n_b) in enumerate(_divisor_pairs(n)):
            ch = product_saturating_channel(n_a, n_b, haar_unitary(n, root.spawn(k)))
            p = entropy_point(ch)
            sat.append({
                "n_a": n_a,
                "n_b": n_b,
                "S": p.s,
                "Stilde": p.s_tilde,
                "sum": p.total,
                "expected": [math.log(n_b), math.log(n_a)],
                "max_gap": max(abs(p.s - math.log(n_b)), abs(p.s_tilde - math.log(n_a))),
            })
        report["saturation"] = sat
    _emit_json(report, out)
    return 0 if violations == 0 else 1


# -- evolve -----------------------------------------------------------------

def cmd_evolve(args, out):
    if args.dt <= 0:
        raise UsageError("evolve: --dt must be positive")
    steps = int(round(args.t_max / args.dt))
    times = np.arange(steps + 1) * args.dt
    if args.start == "boundary-grid":
        if args.n not in (2, 3, 4):
            raise UsageError(f"evolve: boundary-grid starts exist for --n 2, 3, 4 only, got {args.n}")
        starts = boundary_starts(args.n)
        n = args.n
    else:
        ch = read_channel(args.start)
        if not ch.is_square:
            raise UsageError("evolve: start channel must have dim_in == dim_out")
        starts, n = [ch], ch.dim_in
    divisor = log_divisor(args.log_base)
    root = RngStream(args.seed)
    worst = -math.inf
    min_sum = math.inf
    out.write("hamiltonian,start,t,S,Stilde\n")
    for k in range(args.hamiltonians):
        h = gue_hamiltonian(starts[0].m * n, root.spawn(k))
        s, st, _ = evolve_many(starts, h, times)
        if n in (2, 3, 4):
            depth = violation_depth(n, s.ravel(), st.ravel())
        else:
            depth = math.log(n) - (s + st).ravel()
        worst = max(worst, float(depth.max()))
        min_sum = min(min_sum, float((s + st).min()))
        for j in range(len(starts)):
            for i, t in enumerate(times):
                out.write(f"{k},{j},{fmt(t)},{fmt(s[i, j] / divisor)},{fmt(st[i, j] / divisor)}\n")
    out.write(f"# max_violation={fmt(worst)} starts={len(starts)} times={len(times)} min_sum={fmt(min_sum)}\n")
    violated = worst > BOUNDARY_TOL or min_sum < math.log(n) - VIOLATION_TOL
    return 1 if violated else 0


# -- channel ----------------------------------------------------------------

def cmd_channel(args, out):
    chosen = [x is not None for x in (args.channel, args.named, args.L)]
    if sum(chosen) != 1:
        raise UsageError("channel: give exactly one of --channel, --named, --L")
    if args.channel:
        ch = read_channel(args.channel)
    elif args.named:
        if args.n is None:
            raise UsageError("channel: --named needs --n")
        ch = named_channel(args.named, args.n)
    else:
        ch = kraus_from_L(LMatrix.parse(args.L))
    p = entropy_point(ch)
    spectrum = hermitian_eigenvalues(choi(ch))
    report = {
        "label": ch.label,
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "m": ch.m,
        "S": p.s,
        "Stilde": p.s_tilde,
        "sum": p.total,
        "bound": math.log(ch.dim_in),
        "coherent_information": coherent_information_at_mixed(ch),
        "choi_spectrum": [float(x) for x in spectrum],
        "complementary_m": complementary(ch).m,
        "validity_residual": ch.identity_residual(),
    }
    _emit_json(report, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="opentropy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("sample", help="entropy points of random channels (CSV)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--env", type=_positive)
    p.add_argument("--method", choices=sorted(METHOD_NAMES), default="haar")
    p.add_argument("--samples", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--log-base", choices=["e", "2"], default="e")
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("boundary", help="lower boundary curves (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--points", type=_positive, default=512)
    p.add_argument("--log-base", choices=["e", "2"], default="e")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("verify", help="check the trade-off bound (JSON)")
    p.add_argument("--n", type=_positive)
    p.add_argument("--env", type=_positive)
    p.add_argument("--method", choices=sorted(METHOD_NAMES), default="haar")
    p.add_argument("--samples", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--channel")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("evolve", help="evolve boundary channels under GUE Hamiltonians (CSV)")
    p.add_argument("--n", type=_positive, default=3)
    p.add_argument("--hamiltonians", type=_positive, default=30)
    p.add_argument("--t-max", type=_nonnegative_float, default=0.5)
    p.add_argument("--dt", type=_nonnegative_float, default=0.01)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--start", default="boundary-grid")
    p.add_argument("--log-base", choices=["e", "2"], default="e")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("channel", help="inspect a single channel (JSON)")
    p.add_argument("--channel")
    p.add_argument("--named", choices=sorted(NAMED_CHANNELS))
    p.add_argument("--n", type=_positive)
    p.add_argument("--L")
    p.set_defaults(func=cmd_channel)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 2
    except OpentropyError as exc:
        err.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
