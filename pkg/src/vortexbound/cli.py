"""Command-line front end.

Subcommands produce one figure's worth of data each, as deterministic
CSV (12 significant digits, comma-delimited, header row, no
timestamps), so identical configs give byte-identical files.  --plot
additionally renders the matplotlib view of the same rows.

Exit codes: 0 success, 2 validation error, 3 solver/accuracy error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import finitesize, fullnumeric, model, specfun, spectrum, vortex
from .errors import SolverError, ValidationError


def _fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _load_config(path):
    if path.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    with open(path) as fh:
        return json.load(fh)


def _apply_config(args, parser_dests):
    if not args.config:
        return args
    data = _load_config(args.config)
    unknown = set(data) - parser_dests
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    for key, value in data.items():
        setattr(args, key, value)
    return args


def _policies(args):
    series = specfun.SeriesPolicy(rel_tol=args.series_tol) if args.series_tol \
        else specfun.DEFAULT_SERIES
    quad = specfun.QuadraturePolicy(rel_tol=args.quad_tol) if args.quad_tol \
        else specfun.DEFAULT_QUAD
    return series, quad


def _params(args):
    return model.ModelParams(gamma2=args.gamma2, alpha=args.alpha, r_trap=args.radius)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(args):
    header = ["gamma2", "ell", "p", "class", "eps", "q",
              "E_over_n0g12", "E_over_hbar_omega", "physical"]
    if args.sweep:
        gammas = np.linspace(args.gmin, args.gmax, args.gn)
    else:
        gammas = [args.gamma2]

    def one(g2):
        params = model.ModelParams(gamma2=float(g2), alpha=args.alpha, r_trap=args.radius)
        states = spectrum.assemble_spectrum(params, args.lmax, args.pmax, args.method)
        return [(float(g2), s.ell, s.p, s.kind, s.eps, s.q,
                 s.e_over_n0g12, s.e_over_hbar_omega, s.physical) for s in states]

    rows = [row for chunk in _fan_out(one, gammas, args.threads) for row in chunk]
    write_csv(args.out, header, rows)
    if args.plot:
        from . import plotting
        plotting.plot_spectrum_sweep(rows, header, args.plot)
    return 0


def cmd_profile(args):
    ode = vortex.solve_vortex_ode(r_max=max(args.rmax * 2, 40.0))
    var = vortex.variational_profile(args.alpha)
    r = np.linspace(args.rmax / args.n, args.rmax, args.n)
    header = ["r", "phi_variational", "phi_ode"]
    cols = [r, var(r), ode(r)]
    for ell in range(4):
        header += [f"veff_l{ell}_var", f"veff_l{ell}_ode"]
        cols.append(vortex.effective_potential(var, args.gamma2, ell, r))
        cols.append(vortex.effective_potential(ode, args.gamma2, ell, r))
    rows = list(zip(*[np.asarray(c) for c in cols]))
    write_csv(args.out, header, rows)
    if args.plot:
        from . import plotting
        plotting.plot_profile(rows, header, args.plot, args.gamma2)
    return 0


def cmd_compare(args):
    gammas = [float(g) for g in args.gamma2.split(",")]
    header = ["gamma2", "ell", "p", "eps_numeric", "eps_exactmatch", "eps_closedform"]

    def one(g2):
        params = model.ModelParams(gamma2=g2, alpha=args.alpha, r_trap=args.radius)
        out = []
        profile = vortex.variational_profile(args.alpha)
        for ell in range(args.lmax + 1):
            ch = spectrum.make_channel(ell, params)
            if isinstance(ch, spectrum.NoBoundStates):
                continue
            exact = spectrum.find_states_exact(ch, params, params.gamma_alpha / params.r_trap)
            closed = {s.p: s for s in spectrum.assemble_spectrum(
                params, ell, max(len(exact), args.pmax), spectrum.CLOSED_FORM)
                if s.ell == ell}
            problem = fullnumeric.EigenProblem(profile=profile, gamma2=g2, ell=ell,
                                               r_max=args.radius, n_grid=args.ngrid)
            numeric = fullnumeric.radial_eigensolve(problem, len(exact))
            for s in exact:
                eps_num = numeric[s.p] if s.p < len(numeric) else math.nan
                eps_cf = closed[s.p].eps if s.p in closed else math.nan
                out.append((g2, ell, s.p, eps_num, s.eps, eps_cf))
        return out

    rows = [row for chunk in _fan_out(one, gammas, args.threads) for row in chunk]
    write_csv(args.out, header, rows)
    if args.plot:
        from . import plotting
        plotting.plot_compare(rows, header, args.plot)
    return 0


def cmd_onset_table(args):
    r_grid = finitesize.default_r_grid(args.npts)
    fits = [finitesize.fit_onset(ell, p, r_grid, args.alpha)
            for ell in range(args.lmax + 1) for p in range(args.pmax + 1)]
    header = ["ell", "p", "c", "ln_inv_r", "residual"]
    rows = [(f.ell, f.p, f.c, f.ln_inv_r, f.residual) for f in fits]
    write_csv(args.out, header, rows)
    if args.plot:
        from . import plotting
        plotting.plot_onset_fits(fits, r_grid, lambda l, p, r: finitesize.solve_onset(
            l, p, r, args.alpha), args.plot)
    return 0


def cmd_regime_diagram(args):
    cells = finitesize.regime_grid((args.rmin, args.rmax), (args.gmin, args.gmax),
                                   nx=args.nx, ny=args.ny, alpha=args.alpha)
    header = ["r_over_xi", "gamma2", "n_states"]
    rows = [(c.r_over_xi, c.gamma2, c.n_states) for c in cells]
    write_csv(args.out, header, rows)
    if args.plot:
        from . import plotting
        plotting.plot_regime(rows, header, args.plot)
    return 0


def cmd_specfun_check(args):
    _, quad = _policies(args)
    lams = np.linspace(args.lmin, args.lmax, args.n)
    header = ["lambda", "K", "Kprime", "K1", "K1_asym"]
    rows = []
    for lam in lams:
        k = specfun.bessel_k_imag(lam, lam, quad)
        dk = specfun.bessel_k_imag_dx(lam, lam, quad)
        rows.append((lam, k, dk, -dk / k, specfun.k_transition_asymptotic(lam)))
    write_csv(args.out, header, rows)
    if args.plot:
        from . import plotting
        plotting.plot_specfun_check(rows, header, args.plot)
    return 0


def cmd_presets(args):
    payload = {name: dict(values) for name, values in model.PRESETS.items()}
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    return 0


def cmd_scales(args):
    data = _load_config(args.params)
    obj = model.from_config(data)
    if not isinstance(obj, model.PhysicalSystem):
        raise ValidationError("scales requires the dimensionful keys {m1, m2, g11, g12, n0}")
    scales = model.derive_scales(obj, args.alpha)
    payload = model.scales_as_dict(scales)
    text = json.dumps({k: float(f"{v:.12g}") for k, v in payload.items()},
                      indent=2, sort_keys=True) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    print(f"# n0*g12/k_B = {model.thermal_scale_kelvin(obj):.6g} K "
          f"(shallow-scale temperature)", file=sys.stderr)
    ratio = model.decoupling_ratio(obj)
    print(f"# kappa^2/gamma^2 = {ratio:.6g} (impurity decoupling ratio)", file=sys.stderr)
    return 0


def _fan_out(func, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None,
                        help="JSON/TOML file of defaults for the subcommand")
    common.add_argument("--out", default="-",
                        help="output path for the data file ('-' = stdout)")
    common.add_argument("--threads", type=int, default=1, help="fan-out width for sweeps/grids")
    common.add_argument("--series-tol", type=float, default=None,
                        help="override the Kummer-series relative tolerance")
    common.add_argument("--quad-tol", type=float, default=None,
                        help="override the Bessel quadrature relative tolerance")
    common.add_argument("--plot", default=None, help="also render the figure to this path")
    common.add_argument("--alpha", type=float, default=model.DEFAULT_ALPHA,
                        help="variational slope parameter")

    p = argparse.ArgumentParser(prog="vortexbound",
                                description="Impurity bound states in a quantum vortex")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common],
                        help="bound-state table at fixed gamma^2, or a sweep")
    sp.add_argument("--gamma2", type=float, default=6.0)
    sp.add_argument("--lmax", type=int, default=3)
    sp.add_argument("--pmax", type=int, default=8)
    sp.add_argument("--radius", type=float, default=1000.0, help="trap radius R/xi")
    sp.add_argument("--method", choices=[spectrum.EXACT, spectrum.CLOSED_FORM, spectrum.AUTO],
                    default=spectrum.AUTO)
    sp.add_argument("--sweep", action="store_true", help="sweep gamma^2 over [gmin, gmax]")
    sp.add_argument("--gmin", type=float, default=0.2)
    sp.add_argument("--gmax", type=float, default=7.4)
    sp.add_argument("--gn", type=int, default=37)
    sp.set_defaults(func=cmd_spectrum)

    pr = sub.add_parser("profile", parents=[common], help="vortex profiles and effective potentials")
    pr.add_argument("--gamma2", type=float, default=6.0)
    pr.add_argument("--rmax", type=float, default=10.0)
    pr.add_argument("--n", type=int, default=400)
    pr.set_defaults(func=cmd_profile)

    cp = sub.add_parser("compare", parents=[common], help="matching vs eigensolver vs closed forms")
    cp.add_argument("--gamma2", default="2,4,6", help="comma-separated gamma^2 list")
    cp.add_argument("--lmax", type=int, default=2)
    cp.add_argument("--pmax", type=int, default=8)
    cp.add_argument("--radius", type=float, default=1000.0)
    cp.add_argument("--ngrid", type=int, default=400000)
    cp.set_defaults(func=cmd_compare)

    ot = sub.add_parser("onset-table", parents=[common], help="finite-size onset fit coefficients")
    ot.add_argument("--lmax", type=int, default=2)
    ot.add_argument("--pmax", type=int, default=4)
    ot.add_argument("--npts", type=int, default=40)
    ot.set_defaults(func=cmd_onset_table)

    rd = sub.add_parser("regime-diagram", parents=[common], help="bound-state count over (R/xi, gamma^2)")
    rd.add_argument("--rmin", type=float, default=100.0)
    rd.add_argument("--rmax", type=float, default=3000.0)
    rd.add_argument("--gmin", type=float, default=0.05)
    rd.add_argument("--gmax", type=float, default=3.3)
    rd.add_argument("--nx", type=int, default=200)
    rd.add_argument("--ny", type=int, default=200)
    rd.set_defaults(func=cmd_regime_diagram)

    sc = sub.add_parser("specfun-check", parents=[common], help="transition-point values vs asymptotics")
    sc.add_argument("--lmin", type=float, default=1.0)
    sc.add_argument("--lmax", type=float, default=3.3)
    sc.add_argument("--n", type=int, default=60)
    sc.set_defaults(func=cmd_specfun_check)

    ps = sub.add_parser("presets", parents=[common], help="named physical presets (masses)")
    ps.set_defaults(func=cmd_presets)

    sl = sub.add_parser("scales", parents=[common], help="derived scales from a dimensionful parameter file")
    sl.add_argument("params", help="JSON/TOML file with {m1, m2, g11, g12, n0}")
    sl.set_defaults(func=cmd_scales)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        dests = {a.dest for a in parser._actions}
        for sub_action in (a for a in parser._actions
                           if isinstance(a, argparse._SubParsersAction)):
            chosen = sub_action.choices.get(args.command)
            if chosen is not None:
                dests |= {a.dest for a in chosen._actions}
        args = _apply_config(args, dests)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
