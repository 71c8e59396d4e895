"""Command-line interface.

Subcommands reproduce the headline information curves as delimited data
(with companion figures), inspect the optimal input and the conditional
density, and run the validation and Monte Carlo comparison suites.

Numbers are written with 17 significant digits, '.' decimal separator and
'\\n' line endings regardless of locale.  Exit status is 0 only if every
requested computation converged and every validation passed.
"""

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import information, validate
from .channel import ChannelParams, ComplexAmplitude
from .conditional import LEADING, NLO, pdf_xy
from .distributions import (
    BetaInput,
    input_moments,
    optimal_pdf,
    output_pdf_integral,
    solve_optimal,
)
from .errors import DomainError, QuadratureError
from .montecarlo import (
    McConfig,
    chi2_gof,
    conditional_cell_masses,
    empirical_conditional,
    empirical_output,
    propagate_ensemble,
    radial_cell_masses,
    tv_distance,
)

_CONFIG_FIELDS = ("gamma", "length_km", "q_noise", "power_start", "power_stop",
                  "power_points", "inputs", "format", "seed", "out")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def _write_table(path, header, rows, fmt):
    """Write rows as CSV or JSON (columns as arrays)."""
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
        if path is None:
            sys.stdout.write(text)
        else:
            Path(path).write_text(text, newline="")
    else:
        cols = {name: [row[i] for row in rows] for i, name in enumerate(header)}
        text = json.dumps(cols, indent=1)
        if path is None:
            sys.stdout.write(text + "\n")
        else:
            Path(path).write_text(text + "\n", newline="")


def _load_config(path):
    if path is None:
        return {}
    cfg = json.loads(Path(path).read_text())
    unknown = set(cfg) - set(_CONFIG_FIELDS)
    if unknown:
        raise SystemExit(f"unknown config fields: {sorted(unknown)}")
    return cfg


def _add_channel_args(sub):
    sub.add_argument("--config", default=None, help="JSON config file; flags override it")
    sub.add_argument("--gamma", type=float, default=None,
                     help="Kerr coefficient, 1/(mW km) [default 1e-3]")
    sub.add_argument("--length-km", type=float, default=None,
                     help="link length, km [default 1000]")
    sub.add_argument("--q-noise", type=float, default=None,
                     help="noise density, mW/km [default 1.5e-7]")


def _build_params(args, cfg):
    gamma = args.gamma if args.gamma is not None else cfg.get("gamma", 1e-3)
    length = args.length_km if args.length_km is not None else cfg.get("length_km", 1000.0)
    q = args.q_noise if args.q_noise is not None else cfg.get("q_noise", 1.5e-7)
    return ChannelParams(gamma=gamma, length=length, noise_density=q)


def _pick(args_value, cfg, key, default):
    if args_value is not None:
        return args_value
    return cfg.get(key, default)


def _maybe_plot_path(out, plot_flag):
    """Figure path next to the delimited output; None suppresses it."""
    if plot_flag is False:
        return None
    if out is None:
        return None if plot_flag is None else "kerrchan_figure.png"
    return str(Path(out).with_suffix(".png"))


def cmd_mi_sweep(args):
    cfg = _load_config(args.config)
    params = _build_params(args, cfg)
    start = _pick(args.power_start, cfg, "power_start", 1e-3)
    stop = _pick(args.power_stop, cfg, "power_stop", 5e3)
    count = int(_pick(args.power_points, cfg, "power_points", 50))
    inputs = _pick(args.inputs, cfg, "inputs", "opt,beta1,beta2")
    if isinstance(inputs, str):
        inputs = tuple(s.strip() for s in inputs.split(",") if s.strip())
    fmt = _pick(args.format, cfg, "format", "csv")
    out = _pick(args.out, cfg, "out", None)
    if not (0.0 < start < stop):
        raise SystemExit("power grid must satisfy 0 < start < stop")
    powers = np.geomspace(start, stop, count)

    rows = []
    if args.workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_row_job,
                                 [(float(p), params, inputs) for p in powers]))
    else:
        rows = [_sweep_row_job((float(p), params, inputs)) for p in powers]

    header = ["power_mw", "snr", "i_opt", "i_beta2", "i_beta1",
              "i_beta1_asymptote", "shannon", "prior_bound", "status"]
    conv = 1.0 / math.log(2.0) if args.bits else 1.0
    info_cols = {"i_opt", "i_beta2", "i_beta1", "i_beta1_asymptote", "shannon", "prior_bound"}
    table = []
    for r in rows:
        table.append([r[h] * conv if (h in info_cols and r[h] is not None) else r[h]
                      for h in header])
    _write_table(out, header, table, fmt)

    fig_path = _maybe_plot_path(out, args.plot)
    if fig_path is not None:
        from . import plots

        plot_rows = []
        for r in rows:
            pr = dict(r)
            if args.bits:
                for k in info_cols:
                    if pr[k] is not None:
                        pr[k] *= conv
            plot_rows.append(pr)
        plots.render_mi_sweep(plot_rows, fig_path, bits=args.bits)
        print(f"figure written to {fig_path}", file=sys.stderr)

    failed = [r for r in rows if r["status"] != "ok"]
    for r in failed:
        print(f"P={r['power_mw']:g} mW: {r['status']}", file=sys.stderr)
    return 1 if failed else 0


def _sweep_row_job(job):
    power, params, inputs = job
    return information.mi_sweep_row(power, params, inputs)


def cmd_optimal_input(args):
    cfg = _load_config(args.config)
    params = _build_params(args, cfg)
    fmt = _pick(args.format, cfg, "format", "csv")
    out = _pick(args.out, cfg, "out", None)
    try:
        opt = solve_optimal(args.power, params)
        mass, power_chk = input_moments(opt, params)
    except (DomainError, QuadratureError) as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return 1
    record = [
        ("alpha", opt.alpha),
        ("lambda0_per_mw", opt.lambda0),
        ("n0_per_mw", opt.n0),
        ("power_mw", opt.power),
        ("gaussian_limit", int(opt.gaussian_limit)),
        ("mass_integral", mass),
        ("power_integral_mw", power_chk),
    ]
    for name, value in record:
        print(f"{name} {_fmt(value)}")
    ok = abs(mass - 1.0) <= 1e-8 and abs(power_chk - args.power) / args.power <= 1e-8
    print(f"moment-checks {'PASS' if ok else 'FAIL'}")

    rho_max = 4.0 * math.sqrt(args.power) if opt.gaussian_limit else \
        4.0 * math.sqrt(max(args.power, 1.0 / opt.lambda0))
    rho = np.linspace(0.0, rho_max, int(args.samples))
    dens = optimal_pdf(opt, params, rho)
    if out is not None:
        _write_table(out, ["rho_mw_half", "pdf_per_mw"],
                     list(zip(rho.tolist(), dens.tolist())), fmt)
    return 0 if ok else 1


def cmd_pdf_grid(args):
    cfg = _load_config(args.config)
    params = _build_params(args, cfg)
    fmt = _pick(args.format, cfg, "format", "csv")
    out = _pick(args.out, cfg, "out", None)
    x = ComplexAmplitude(args.x_re, args.x_im)
    if x.magnitude == 0.0:
        raise SystemExit("pdf-grid needs |X| > 0")
    rho = x.magnitude
    mu = params.nonlinear_phase(rho * rho)
    half = args.half_width * math.sqrt(params.noise_power)
    axis = np.linspace(-half, half, int(args.points))
    x0g, y0g = np.meshgrid(axis, axis, indexing="ij")
    p_lead = pdf_xy(mu, rho, params.noise_power, x0g, y0g, order=LEADING)
    p_nlo = pdf_xy(mu, rho, params.noise_power, x0g, y0g, order=NLO)
    phase = np.exp(1j * (mu + x.phase))
    yc = (rho + x0g + 1j * y0g) * phase
    header = ["y_re", "y_im", "x0", "y0", "p_leading", "p_nlo"]
    rows = list(zip(yc.real.ravel().tolist(), yc.imag.ravel().tolist(),
                    x0g.ravel().tolist(), y0g.ravel().tolist(),
                    p_lead.ravel().tolist(), p_nlo.ravel().tolist()))
    _write_table(out, header, rows, fmt)
    fig_path = _maybe_plot_path(out, args.plot)
    if fig_path is not None:
        from . import plots

        plots.render_pdf_grid(axis, axis, p_lead, p_nlo, fig_path)
        print(f"figure written to {fig_path}", file=sys.stderr)
    return 0


def cmd_validate(args):
    results = validate.run_suites(tuple(args.suite))
    lines = [r.line() for r in results]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out is not None:
        Path(args.out).write_text(text, newline="")
    return 0 if all(r.passed for r in results) else 1


def _report(name, passed, measured, threshold):
    status = "PASS" if passed else "FAIL"
    print(f"{name} {status} {measured:.6e} {threshold:.6e}")
    return passed


def cmd_mc_check(args):
    cfg_json = _load_config(args.config)
    params = _build_params(args, cfg_json)
    seed = int(_pick(args.seed, cfg_json, "seed", 12345))
    mc = McConfig(n_steps=args.n_steps, n_traj=args.n_traj, seed=seed,
                  bins=(args.bins, args.bins), bin_range=args.bin_range)
    t0 = time.perf_counter()
    ok = True
    case = args.case
    # TV noise floor scales as 1/sqrt(n); thresholds anchored at n = 1e6
    tv_threshold = 0.02 * max(1.0, math.sqrt(1e6 / mc.n_traj))

    if case == "conditional":
        x = ComplexAmplitude(1.0, 0.0)
        emp = empirical_conditional(x, params, mc, workers=args.workers)
        mu = params.nonlinear_phase(x.power)
        masses_lead = conditional_cell_masses(emp, mu, x.magnitude, params, order=LEADING)
        masses_nlo = conditional_cell_masses(emp, mu, x.magnitude, params, order=NLO)
        tv = tv_distance(emp, masses_lead)
        chi2, dof, p = chi2_gof(emp, masses_nlo)
        ok &= _report("tv-vs-leading", tv <= tv_threshold, tv, tv_threshold)
        ok &= _report("chi2-p-vs-nlo", p > 0.01, p, 0.01)
        ok &= _report("coverage", not emp.undercovered, emp.n_out_of_range / emp.n_total, 0.01)
        _maybe_mc_plot(args, emp, masses_lead)
    elif case == "linear-gaussian":
        lin = ChannelParams(gamma=0.0, length=params.length,
                            noise_density=params.noise_density)
        x = ComplexAmplitude(1.0, 0.0)
        emp = empirical_conditional(x, lin, mc, workers=args.workers)
        masses = conditional_cell_masses(emp, 0.0, x.magnitude, lin, order=LEADING)
        tv = tv_distance(emp, masses)
        chi2, dof, p = chi2_gof(emp, masses)
        ok &= _report("tv-vs-exact", tv <= tv_threshold, tv, tv_threshold)
        ok &= _report("chi2-p", p > 0.01, p, 0.01)
        _maybe_mc_plot(args, emp, masses)
    elif case in ("output-beta1", "output-beta2", "output-optimal"):
        power = args.power
        if case == "output-optimal":
            dist = solve_optimal(power, params)
        else:
            dist = BetaInput(beta=1.0 if case.endswith("beta1") else 2.0, power=power)
        emp = empirical_output(dist, params, mc, workers=args.workers)
        (redges,) = emp.edges
        ref = lambda r: np.array([output_pdf_integral(dist, params, float(ri)) for ri in np.atleast_1d(r)])
        masses = radial_cell_masses(emp, ref)
        tv = tv_distance(emp, masses)
        chi2, dof, p = chi2_gof(emp, masses)
        ok &= _report("tv-vs-analytic", tv <= tv_threshold, tv, tv_threshold)
        ok &= _report("chi2-p", p > 0.01, p, 0.01)
        _maybe_mc_plot(args, emp, masses, radial=True)
    elif case == "power-balance":
        x = ComplexAmplitude(1.0, 0.0)
        finals = propagate_ensemble(x, params, mc)
        gain = np.abs(finals) ** 2 - x.power
        se = float(np.std(gain, ddof=1) / math.sqrt(len(gain)))
        dev = abs(float(np.mean(gain)) - params.noise_power)
        ok &= _report("power-balance-3sigma", dev <= 3.0 * se, dev, 3.0 * se)
    else:
        raise SystemExit(f"unknown case {case!r}")
    print(f"elapsed {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    return 0 if ok else 1


def _maybe_mc_plot(args, emp, masses, radial=False):
    if not args.plot:
        return
    from . import plots

    path = args.plot if isinstance(args.plot, str) else "mc_check.png"
    if radial:
        plots.render_mc_radial(emp, masses, path)
    else:
        plots.render_mc_cartesian(emp, masses, path)
    print(f"figure written to {path}", file=sys.stderr)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="kerrchan",
        description="Per-sample information analysis of the zero-dispersion "
                    "Kerr fiber channel at high SNR.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("mi-sweep", help="mutual-information curves over a power grid")
    _add_channel_args(sw)
    sw.add_argument("--power-start", type=float, default=None, help="grid start, mW")
    sw.add_argument("--power-stop", type=float, default=None, help="grid stop, mW")
    sw.add_argument("--power-points", type=int, default=None)
    sw.add_argument("--inputs", default=None, help="comma list from: opt,beta1,beta2")
    sw.add_argument("--format", choices=("csv", "json"), default=None)
    sw.add_argument("--out", default=None, help="output file (stdout if omitted)")
    sw.add_argument("--bits", action="store_true", help="report information in bits")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--plot", action=argparse.BooleanOptionalAction, default=None,
                    help="render a figure next to --out (default: on when --out given)")
    sw.set_defaults(func=cmd_mi_sweep)

    oi = sub.add_parser("optimal-input", help="fit and dump the optimal input density")
    _add_channel_args(oi)
    oi.add_argument("--power", type=float, required=True, help="average power, mW")
    oi.add_argument("--samples", type=int, default=200, help="density table length")
    oi.add_argument("--format", choices=("csv", "json"), default=None)
    oi.add_argument("--out", default=None, help="density table file")
    oi.set_defaults(func=cmd_optimal_input)

    pg = sub.add_parser("pdf-grid", help="conditional density over an output grid")
    _add_channel_args(pg)
    pg.add_argument("--x-re", type=float, default=1.0)
    pg.add_argument("--x-im", type=float, default=0.0)
    pg.add_argument("--half-width", type=float, default=8.0,
                    help="grid half width in units of sqrt(QL)")
    pg.add_argument("--points", type=int, default=41)
    pg.add_argument("--format", choices=("csv", "json"), default=None)
    pg.add_argument("--out", default=None)
    pg.add_argument("--plot", action=argparse.BooleanOptionalAction, default=None)
    pg.set_defaults(func=cmd_pdf_grid)

    va = sub.add_parser("validate", help="run validation suites")
    va.add_argument("--suite", nargs="+", default=["all"],
                    help=f"any of {sorted(validate.SUITES)} or 'all'")
    va.add_argument("--out", default=None)
    va.set_defaults(func=cmd_validate)

    mcp = sub.add_parser("mc-check", help="Monte Carlo comparison cases")
    _add_channel_args(mcp)
    mcp.add_argument("--case", default="conditional",
                     choices=("conditional", "linear-gaussian", "output-beta1",
                              "output-beta2", "output-optimal", "power-balance"))
    mcp.add_argument("--power", type=float, default=1.0, help="input power for output cases, mW")
    mcp.add_argument("--n-traj", type=int, default=100_000)
    mcp.add_argument("--n-steps", type=int, default=1000)
    mcp.add_argument("--seed", type=int, default=None)
    mcp.add_argument("--bins", type=int, default=64)
    mcp.add_argument("--bin-range", type=float, default=8.0)
    mcp.add_argument("--workers", type=int, default=1)
    mcp.add_argument("--plot", nargs="?", const=True, default=False,
                     help="render the comparison figure (optional path)")
    mcp.set_defaults(func=cmd_mc_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
