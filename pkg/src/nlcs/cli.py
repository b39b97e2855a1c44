"""Command-line front end: ``nlcs {state,sweep,series,verify}``."""
import argparse
import sys

import numpy as np

from nlcs import oracle
from nlcs.analysis import moments_direct, series, sweep, sweep_csv
from nlcs.errors import (
    Divergence,
    InvalidArgument,
    SingularDenominator,
    TailOverflow,
    ZeroNonlinearity,
)
from nlcs.nonlinearity import NonlinearitySpec, load_table
from nlcs.states import TruncationPolicy, build_displacement_state, build_eigenstate, build_state

EXIT_NUMERIC = 2
VERIFY_DIM = 32

VERIFY_THRESHOLDS = {
    "comm_N_A": 1e-10,
    "comm_N_Adag": 1e-10,
    "comm_A_Adag": 1e-10,
    "comm_A_Bdag": 1e-10,
    "comm_B_Adag": 1e-10,
    "eigen_residual": 1e-9,
    "bch_D_defect": 1e-8,
    "bch_D1_defect": 1e-8,
    "normal_order_residual": 1e-10,
}


def _spec(args):
    kind = args.nonlinearity
    if kind == "identity":
        return NonlinearitySpec.identity()
    if kind == "trapped-ion":
        return NonlinearitySpec.trapped_ion(args.eta)
    if kind.startswith("table:"):
        return load_table(kind[len("table:") :])
    raise InvalidArgument(f"unknown nonlinearity {kind!r}")


def _policy(args):
    n_min = min(32, args.nmax)
    return TruncationPolicy(
        tail_tol=args.tail_tol, n_min=n_min, n_hard=args.nmax, window=min(8, n_min - 1)
    )


def _amplitude(text):
    try:
        return complex(text.replace(" ", "")) if "j" in text else float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _echo(args, keys):
    parts = [f"{k}={getattr(args, k)}" for k in keys]
    return f"# nlcs {args.command} " + " ".join(parts) + "\n"


def run_state(args):
    spec = _spec(args)
    state = build_state(args.family, spec, args.beta, _policy(args))
    out = _echo(args, ["eta", "nonlinearity", "beta", "family", "nmax", "tail_tol", "output"])
    return out + state.to_csv(), 0


def run_series(args):
    spec = _spec(args)
    s = series(spec, args.beta, _policy(args))
    out = _echo(args, ["eta", "nonlinearity", "beta", "nmax", "tail_tol", "output"])
    out += "beta,eta,I1,I2,I3,I4,I5,terms_used\n"
    vals = [s.beta, spec.eta, s.I1, s.I2, s.I3, s.I4, s.I5]
    out += ",".join(f"{v:.12g}" for v in vals) + f",{s.terms_used}\n"
    return out, 0


def run_sweep(args):
    if args.beta_steps < 1:
        raise InvalidArgument("--beta-steps must be >= 1")
    if args.beta_min > args.beta_max:
        raise InvalidArgument("--beta-min must not exceed --beta-max")
    spec = _spec(args)
    grid = np.linspace(args.beta_min, args.beta_max, args.beta_steps)
    records = sweep(spec, grid, _policy(args))
    for rec in records:
        if not rec.ok:
            print(f"nlcs: beta={rec.beta:.12g}: {rec.error}", file=sys.stderr)
    out = _echo(
        args,
        ["eta", "nonlinearity", "beta_min", "beta_max", "beta_steps", "family", "nmax",
         "tail_tol", "output"],
    )
    code = 0 if any(r.ok for r in records) else EXIT_NUMERIC
    return out + sweep_csv(records, spec), code


def verify_battery(spec, beta, dim):
    """Ordered (name, value) pairs of every oracle check."""
    fam = oracle.build_operators(spec, dim)
    comm = oracle.check_commutators(fam)
    results = [(f"comm_{k}", v) for k, v in comm.residuals.items()]
    results.append(("comm_A_Adag_corner", comm.corner))
    eig = build_eigenstate(spec, beta)
    results.append(("eigen_residual", oracle.eigen_residual(eig.coeffs, spec, beta, dim)))
    disp = build_displacement_state(spec, beta)
    d = oracle.displace_exact(spec, beta, "D", dim)
    d1 = oracle.displace_exact(spec, beta, "D1", dim)
    results.append(("bch_D_defect", 1.0 - oracle.overlap(d, disp.coeffs)))
    results.append(("bch_D1_defect", 1.0 - oracle.overlap(d1, eig.coeffs)))
    psi = disp.padded(dim)
    q = oracle.quadratic_form
    no = q(psi, "a^2 a†^2") - q(psi, "a†^2 a^2") - 4 * q(psi, "a†a") - 2
    results.append(("normal_order_residual", abs(no)))
    return results


def run_verify(args):
    spec = _spec(args)
    dim = args.nmax if args.nmax is not None else VERIFY_DIM
    args.nmax = dim
    results = verify_battery(spec, args.beta, dim)
    out = _echo(args, ["eta", "nonlinearity", "beta", "nmax", "output"])
    failed = False
    for name, value in results:
        out += f"{name}={value:.6e}\n"
        limit = VERIFY_THRESHOLDS.get(name)
        if limit is not None and not abs(value) < limit:
            failed = True
            print(f"nlcs: {name}={value:.3e} exceeds {limit:.0e}", file=sys.stderr)
    out += f"result={'FAIL' if failed else 'PASS'}\n"
    return out, 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="nlcs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nmax_default=4096):
        p.add_argument("--nonlinearity", default="trapped-ion",
                       help="identity | trapped-ion | table:<path>")
        p.add_argument("--eta", type=float, default=0.2, help="Lamb-Dicke parameter")
        p.add_argument("--family", choices=["displacement", "eigenstate"], default="displacement")
        p.add_argument("--nmax", type=int, default=nmax_default,
                       help="truncation cap (verify: oracle dimension, default 32)")
        p.add_argument("--tail-tol", type=float, default=1e-16)
        p.add_argument("--output", default="-", help="output path, '-' for stdout")

    p = sub.add_parser("state", help="number-basis coefficients of one state")
    common(p)
    p.add_argument("--beta", type=_amplitude, default=0.5)
    p.set_defaults(func=run_state)

    p = sub.add_parser("series", help="closed-form series I1..I5 at one beta")
    common(p)
    p.add_argument("--beta", type=float, default=0.5)
    p.set_defaults(func=run_series)

    p = sub.add_parser("sweep", help="squeezing and g2 indicators over a beta grid")
    common(p)
    p.add_argument("--beta-min", type=float, default=0.02)
    p.add_argument("--beta-max", type=float, default=1.0)
    p.add_argument("--beta-steps", type=int, default=50)
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("verify", help="oracle residual battery")
    common(p, nmax_default=None)
    p.add_argument("--beta", type=_amplitude, default=0.5)
    p.set_defaults(func=run_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.eta < 0:
        parser.error("--eta must be >= 0")
    if args.nmax is not None and args.nmax < 8:
        parser.error("--nmax must be >= 8")
    try:
        text, code = args.func(args)
    except (SingularDenominator, Divergence, ZeroNonlinearity, TailOverflow) as exc:
        print(f"nlcs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidArgument, OSError) as exc:
        print(f"nlcs: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
