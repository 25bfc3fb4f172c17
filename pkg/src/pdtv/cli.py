"""Command-line front end: ``pdtv {denoise,segment,demo1d,phantom}``.

Exit codes: 0 success (tolerance reached), 2 iteration limit hit before the
tolerance, 64 usage error, 65 bad input data, 74 I/O failure.
"""

import argparse
import os
import sys

import numpy as np

from . import certificates, grid, imageio, pde_sim
from .grid import make_seed_mask
from .solver import ROF, ProblemSpec, Seg, converged, run, threshold

EX_OK = 0
EX_BACKSTOP = 2
EX_USAGE = 64
EX_DATAERR = 65
EX_IOERR = 74


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _size(text):
    try:
        n, m = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}") from None
    if n < 1 or m < 1:
        raise argparse.ArgumentTypeError("sizes must be positive")
    return n, m


def _floats(k):
    def parse(text):
        try:
            vals = tuple(float(v) for v in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {k} comma-separated numbers") from None
        if len(vals) != k:
            raise argparse.ArgumentTypeError(f"expected {k} comma-separated numbers")
        return vals
    return parse


def _level(text):
    s = float(text)
    if not 0.0 < s < 1.0:
        raise argparse.ArgumentTypeError("threshold must lie in (0, 1)")
    return s


def _phantom_arg(text):
    kind, _, size = text.partition(":")
    kind = {"rect": "rectangle"}.get(kind, kind)
    if kind not in ("rectangle", "disk", "blob"):
        raise argparse.ArgumentTypeError(f"unknown phantom {kind!r}")
    return kind, _size(size) if size else (64, 64)


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(sub, args, argv):
    """Re-parse with config values as defaults so explicit flags still win."""
    try:
        values = read_config(args.config)
    except OSError as exc:
        raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r}")
        if action.const is not None and action.nargs == 0:
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        else:
            conv = action.type or str
            try:
                defaults[key] = conv(raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {key!r}: {exc}") from None
    sub.set_defaults(**defaults)
    return sub.parse_args(argv)


def _load_input(args, sigma_default=0.0):
    if args.input is not None:
        if not os.path.exists(args.input):
            raise FileNotFoundError(f"input file not found: {args.input}")
        return imageio.read_image(args.input), None
    if args.phantom is None:
        raise UsageError("one of --input or --phantom is required")
    kind, shape = args.phantom
    spec = imageio.PhantomSpec(kind, shape)
    clean = imageio.make_phantom(spec)
    sigma = args.sigma if args.sigma is not None else sigma_default
    return imageio.add_gaussian_noise(clean, sigma, args.seed), spec


def _add_common(p):
    p.add_argument("--config", help="flat 'key = value' file providing defaults for these flags")
    p.add_argument("--input", help="input image (PGM P5, or PNG)")
    p.add_argument("--phantom", type=_phantom_arg,
                   help="synthetic input instead of --input, e.g. rect:64x64, disk:32x32, blob:64x64")
    p.add_argument("--sigma", type=float, help="noise level added to --phantom")
    p.add_argument("--seed", type=int, default=0, help="noise seed for --phantom (default 0)")
    p.add_argument("--scheme", choices=["standard", "staggered"], default="standard")
    p.add_argument("--max-iter", type=int, default=50000)
    p.add_argument("--log-every", type=int, default=10, help="certificate logging stride")
    p.add_argument("--tol", type=float, help="stop once the certificate bound is below this")
    p.add_argument("--trace", help="certificate CSV output")
    p.add_argument("--output", help="output image")
    p.add_argument("--oracle-iters", type=int,
                   help="also compute a reference solution and the true-error column")


def build_parser():
    parser = _Parser(prog="pdtv", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("denoise", help="ROF denoising with a posteriori L2 certificates")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", type=float, default=0.005, help="fidelity weight (default 0.005)")
    p.add_argument("--dt", type=float, help="primal step (default 1/lambda)")
    p.add_argument("--dtau", type=float, help="dual step (default lambda/5)")
    p.set_defaults(func=cmd_denoise)

    p = subs.add_parser("segment", help="relaxed seeded segmentation with energy-gap certificates")
    _add_common(p)
    p.add_argument("--seeds", help="seed image: 255 -> inside, 0 -> outside, other -> free")
    p.add_argument("--beta", type=float, default=1e-2, help="edge weight sharpness (default 0.01)")
    p.add_argument("--eps", type=float, default=1e-2, help="edge weight floor (default 0.01)")
    p.add_argument("--dt", type=float, default=0.2)
    p.add_argument("--dtau", type=float, default=0.2)
    p.add_argument("--threshold", type=_level, default=0.5, help="level s for the mask {u > s}")
    p.add_argument("--clamp", dest="clamp", action="store_true", default=True,
                   help="keep u in [0, 1] (default)")
    p.add_argument("--no-clamp", dest="clamp", action="store_false")
    p.add_argument("--mask", help="binary mask output (0/255 PGM)")
    p.set_defaults(func=cmd_segment)

    p = subs.add_parser("demo1d", help="1D oscillating flow: convergence study and oscillation exhibit")
    p.add_argument("--config")
    p.add_argument("--n", type=int, default=128, help="cells for the exhibit run (default 128)")
    p.add_argument("--dt", type=float, help="time step (default 0.5/n, must not exceed it)")
    p.add_argument("--steps", type=int, help="steps of the exhibit run (default: reach t = 2)")
    p.add_argument("--trajectory", help="trajectory CSV output")
    p.add_argument("--convergence", help="convergence study CSV output")
    p.set_defaults(func=cmd_demo1d)

    p = subs.add_parser("phantom", help="write a synthetic phantom image")
    p.add_argument("--config")
    p.add_argument("--kind", choices=["rect", "rectangle", "disk", "blob"], default="rect")
    p.add_argument("--size", type=_size, default=(64, 64), help="NxM (default 64x64)")
    p.add_argument("--fg", type=float, default=255.0)
    p.add_argument("--bg", type=float, default=0.0)
    p.add_argument("--corners", type=_floats(4), help="rectangle i0,j0,i1,j1")
    p.add_argument("--center", type=_floats(2), help="disk centre ci,cj")
    p.add_argument("--radius", type=float, help="disk radius")
    p.add_argument("--sigma", type=float, default=0.0, help="Gaussian noise level")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="output image (required)")
    p.set_defaults(func=cmd_phantom)
    return parser


def _finish(spec, state, trace, args, image):
    if args.trace:
        certificates.write_trace_csv(trace, args.trace)
    if args.output:
        imageio.write_image(image, args.output)
    status = EX_OK if converged(spec, trace) or spec.max_iter == 0 else EX_BACKSTOP
    last = trace[-1] if trace else None
    if last is not None:
        print(f"iterations {state.iter}; bound {certificates.stop_value(last):.6g}; "
              f"energy {last.energy:.6g}")
    return status


def cmd_denoise(args):
    f, _ = _load_input(args)
    lam = args.lam
    if not lam > 0:
        raise UsageError("--lambda must be positive")
    spec = ProblemSpec(ROF(f, lam), dt=args.dt, dtau=args.dtau, scheme=args.scheme,
                       max_iter=args.max_iter, log_every=args.log_every, tol=args.tol)
    ref = None
    if args.oracle_iters:
        ref, _ = certificates.oracle_rof(f, lam, spec.scheme, args.oracle_iters)
    state, trace = run(spec, reference=ref)
    return _finish(spec, state, trace, args, state.u)


def _phantom_seeds(pspec):
    N, M = pspec.shape
    fi, fj, _ = pspec.lobes[0]
    ci, cj = int(fi * N), int(fj * M)
    h = max(1, min(N, M) // 32)
    pin1 = np.zeros((N, M), dtype=bool)
    pin1[ci - h:ci + h + 1, cj - h:cj + h + 1] = True
    return make_seed_mask((N, M), pin1=pin1, pin0=grid.boundary_ring((N, M)))


def cmd_segment(args):
    image, pspec = _load_input(args)
    if args.seeds is not None:
        if not os.path.exists(args.seeds):
            raise FileNotFoundError(f"seed file not found: {args.seeds}")
        s = imageio.read_image(args.seeds)
        if s.shape != image.shape:
            raise DataError(f"seed image is {s.shape[0]}x{s.shape[1]}, "
                            f"input is {image.shape[0]}x{image.shape[1]}")
        seeds = make_seed_mask(image.shape, pin1=s == 255, pin0=s == 0)
    elif pspec is not None and pspec.kind == "blob":
        seeds = _phantom_seeds(pspec)
    else:
        raise UsageError("--seeds is required unless --phantom blob is used")
    g = imageio.edge_weight(image, args.beta, args.eps)
    zero = np.zeros(image.shape)
    spec = ProblemSpec(Seg(zero, zero, seeds, g), dt=args.dt, dtau=args.dtau, scheme=args.scheme,
                       clamp01=args.clamp, max_iter=args.max_iter, log_every=args.log_every,
                       tol=args.tol)
    ref = certificates.oracle_seg(spec, args.oracle_iters) if args.oracle_iters else None
    state, trace = run(spec, reference=ref)
    if args.mask:
        imageio.write_image(255.0 * threshold(state.u, args.threshold), args.mask)
    return _finish(spec, state, trace, args, 255.0 * state.u)


def cmd_demo1d(args):
    n = args.n
    dt = args.dt if args.dt is not None else pde_sim.CFL / n
    if args.steps is not None and args.steps < 0:
        raise UsageError("--steps must be >= 0")
    try:
        steps = args.steps if args.steps is not None else int(round(2.0 / dt))
        u0, xi0 = pde_sim.analytic_oscillation(0.0, n)
        traj = pde_sim.simulate_1d(n, dt, steps, u0, xi0)
    except pde_sim.ConfigurationError as exc:
        raise UsageError(str(exc)) from None
    ns = (64, 128, 256)
    errs, orders = pde_sim.convergence_study(ns)
    floor = pde_sim.oscillation_floor(traj)
    if args.trajectory:
        pde_sim.write_trajectory_csv(traj, args.trajectory)
    if args.convergence:
        with open(args.convergence, "w") as fh:
            fh.write("n,dt,sup_error,order\n")
            for k, n_k in enumerate(ns):
                order = "" if k == 0 else repr(float(orders[k - 1]))
                fh.write(f"{n_k},{pde_sim.CFL / n_k!r},{float(errs[k])!r},{order}\n")
    ok_order = bool(np.all(orders >= 0.9))
    ok_floor = floor is None or floor >= 0.2
    print("orders " + " ".join(f"{o:.3f}" for o in orders)
          + ("; floor not evaluated" if floor is None else f"; oscillation floor {floor:.3f}"))
    return EX_OK if ok_order and ok_floor else 1


def cmd_phantom(args):
    if not args.output:
        raise UsageError("--output is required")
    corners = None if args.corners is None else tuple(int(v) for v in args.corners)
    spec = imageio.PhantomSpec(args.kind, args.size, args.fg, args.bg, corners=corners,
                               center=args.center, radius=args.radius)
    try:
        img = imageio.make_phantom(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.sigma < 0:
        raise UsageError("--sigma must be nonnegative")
    img = imageio.add_gaussian_noise(img, args.sigma, args.seed)
    imageio.write_image(img, args.output)
    return EX_OK


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    try:
        if getattr(args, "config", None):
            sub = parser._subparsers._group_actions[0].choices[args.command]
            args = _apply_config(sub, sub.parse_args(argv[1:]), argv[1:])
            args.command = argv[0]
        return args.func(args)
    except UsageError as exc:
        print(f"pdtv: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except DataError as exc:
        print(f"pdtv: error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except imageio.ImageFormatError as exc:
        print(f"pdtv: error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except OSError as exc:
        print(f"pdtv: error: {exc}", file=sys.stderr)
        return EX_IOERR


if __name__ == "__main__":
    sys.exit(main())
