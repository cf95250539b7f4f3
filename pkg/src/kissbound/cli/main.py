"""``kissbound`` command: verify-k3, verify-k4, delsarte, extend, search, angle-bound, plot."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ..orthopoly import GegenbauerExpansion, Polynomial, from_gegenbauer
from ..polys import NAMED
from ..polysearch import SearchConfig, SearchInfeasible, search
from .pipelines import angle_bound, delsarte, extension_pipeline, plot_data, verify_k3, verify_k4, write_csv


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _search_config(args) -> SearchConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = SearchConfig.from_json(fh.read())
        return cfg
    missing = [k for k in ("n", "z", "t0", "d") if getattr(args, k) is None]
    if missing:
        raise SystemExit(f"missing --{', --'.join(missing)} (or give --config)")
    return SearchConfig(args.n, args.z, args.t0, args.d, args.N, not getattr(args, "no_straddle", False))


def _polynomial(args) -> Polynomial:
    if args.poly in NAMED:
        return NAMED[args.poly][1]
    with open(args.poly) as fh:
        data = json.load(fh)
    if "gegenbauer" in data:
        return from_gegenbauer(GegenbauerExpansion(args.n, tuple(float(c) for c in data["gegenbauer"])))
    coeffs = data["monomial"]
    if all(isinstance(c, str) for c in coeffs):
        return Polynomial.exact([Fraction(c) for c in coeffs])
    return Polynomial(tuple(float(c) for c in coeffs))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kissbound", description="Kissing-number bounds from extension polynomials.")
    sub = p.add_subparsers(dest="cmd", required=True)

    for name in ("verify-k3", "verify-k4"):
        s = sub.add_parser(name, help=f"run the {name[-2:]} certificate chain")
        s.add_argument("--out", help="write the certificate JSON here")
        if name == "verify-k4":
            s.add_argument("--t0", type=float, default=None, help="use this cap instead of the root of f")

    def lp_flags(s, t0=True):
        s.add_argument("--config", help="JSON file with n, z, t0, d, N")
        s.add_argument("--n", type=int)
        s.add_argument("--z", type=float)
        if t0:
            s.add_argument("--t0", type=float)
            s.add_argument("--no-straddle", action="store_true", help="keep the cell around -t0 out of both constraint families")
        s.add_argument("--d", type=int)
        s.add_argument("--N", type=int, default=2000)
        s.add_argument("--out")

    s = sub.add_parser("delsarte", help="classic LP bound (t0 = 1)")
    lp_flags(s, t0=False)

    s = sub.add_parser("search", help="LP search for an extension polynomial")
    lp_flags(s)

    s = sub.add_parser("extend", help="extension pipeline on a given polynomial")
    s.add_argument("--poly", required=True, help="k3poly, k4poly or a JSON file with 'monomial' or 'gegenbauer'")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--z", type=float, default=0.5)
    s.add_argument("--t0", type=float, default=None)
    s.add_argument("--out")

    s = sub.add_parser("angle-bound", help="upper bound on phi_n(M)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--d", type=int, default=11)
    s.add_argument("--tol", type=float, default=0.01)
    s.add_argument("--out")

    s = sub.add_parser("plot", help="CSV samples of f on [-1, z]")
    s.add_argument("--which", default="k3poly", help="k3poly, k4poly or a JSON polynomial file")
    s.add_argument("--samples", type=int, default=201)
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--z", type=float, default=0.5)
    s.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.cmd
    if cmd in ("verify-k3", "verify-k4", "extend", "delsarte"):
        if cmd == "verify-k3":
            cert = verify_k3()
        elif cmd == "verify-k4":
            cert = verify_k4(t0=args.t0)
        elif cmd == "extend":
            cert = extension_pipeline(_polynomial(args), args.n, args.z, args.t0)
        else:
            if args.config:
                cfg = _search_config(argparse.Namespace(**{**vars(args), "t0": 1.0}))
                cert = delsarte(cfg.n, cfg.z, cfg.d, cfg.N)
            else:
                if args.n is None or args.z is None or args.d is None:
                    raise SystemExit("delsarte needs --n, --z and --d (or --config)")
                cert = delsarte(args.n, args.z, args.d, args.N)
        _emit(cert.to_json(), args.out)
        return 0 if cert.conclusion else 1
    if cmd == "search":
        try:
            res = search(_search_config(args))
        except SearchInfeasible as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return 1
        _emit(res.to_json(), args.out)
        return 0
    if cmd == "angle-bound":
        ab = angle_bound(args.n, args.M, d=args.d, tol=args.tol)
        _emit(json.dumps(ab.as_dict(), indent=2), args.out)
        return 0 if ab.status in ("certified", "trivial") else 1
    if cmd == "plot":
        if args.which == "custom" or args.which not in NAMED:
            f = _polynomial(argparse.Namespace(poly=args.which, n=args.n))
            rows = plot_data("custom", args.samples, (f, args.z))
        else:
            rows = plot_data(args.which, args.samples)
        if args.out:
            with open(args.out, "w", newline="") as fh:
                write_csv(rows, fh)
        else:
            sys.stdout.write(write_csv(rows))
        return 0
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
