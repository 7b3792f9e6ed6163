"""Command-line front end.

Subcommands: plates, plates-sweep, sphere-eigs, cylinder-eigs,
cylinder-tmatrix, cp-plate, static-eigs and selfcheck.  Every subcommand
writes one table as CSV or JSON.  Exit status is 0 on success, 2 when a
result is flagged unconverged (or a selfcheck suite fails) and 1 on input
errors.

Options may also come from an INI file given with ``--config``; keys mirror
the long flag names and are read from the ``[DEFAULT]`` section and the
section named after the subcommand.  Flags given on the command line win.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .core import (
    C1, C2, DIMENSIONLESS, NM_EV, Drude, Fixed, MseOrder, PerfectConductor, Plasma,
)
from .cp import Polarizability, TabulatedPolarizability, cp_energy
from .cylinder import CylinderConfig, cyl_eigs, mse_t, t_exact
from .engine import block_eigenvalues
from .plates import PlateConfig, casimir_forces_per_area, mse_energies_per_area
from .quadrature import QuadratureConfig
from .selfcheck import run_suites, suite_names
from .sphere import SphereConfig, pc_sphere_block, sphere_eigs
from .static import ResolutionError, StaticContrast, static_sphere_eigs

EXIT_OK, EXIT_INPUT, EXIT_UNCONVERGED = 0, 1, 2
_LENGTH_FACTORS = {"nm": 1.0, "um": 1e3, "m": 1e9}
_LENGTH_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*(nm|um|m)?\s*$")


class InputError(Exception):
    """Invalid command-line or configuration input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}\n{self.format_usage().strip()}")


# value parsing --------------------------------------------------------------------

def parse_length(text: str, dimensionless: bool = False) -> float:
    """Parse '100nm', '0.3um', '1e-7m' (nanometres) or a bare number.

    Bare numbers are nanometres, or pure numbers in dimensionless mode where
    unit suffixes are rejected.
    """
    m = _LENGTH_RE.match(str(text))
    if not m:
        raise InputError(f"cannot parse length {text!r}")
    try:
        value = float(m.group(1))
    except ValueError:
        raise InputError(f"cannot parse length {text!r}") from None
    if m.group(2):
        if dimensionless:
            raise InputError(f"unit suffix not allowed in dimensionless mode: {text!r}")
        value *= _LENGTH_FACTORS[m.group(2)]
    if not value > 0 or not math.isfinite(value):
        raise InputError(f"lengths must be positive, got {text!r}")
    return value


def _float_list(text) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse number list {text!r}") from None


def _int_list(text) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse integer list {text!r}") from None


def _positive(values, name):
    for v in values:
        if not v > 0:
            raise InputError(f"{name} must be positive, got {v}")
    return values


def _units(args):
    return DIMENSIONLESS if args.units == "dimensionless" else NM_EV


def _lengths(args, text):
    return [parse_length(x, args.units == "dimensionless") for x in str(text).split(",") if x.strip()]


def _temperature(args) -> float:
    t = args.temperature
    if not (t >= 0 and math.isfinite(t)):
        raise InputError("temperature must be non-negative")
    return t


def _material(args, suffix=""):
    kind = getattr(args, f"model{suffix}")
    eps, mu = getattr(args, f"eps{suffix}"), getattr(args, f"mu{suffix}")
    try:
        if kind == "pc":
            return PerfectConductor()
        if kind == "drude":
            return Drude(getattr(args, f"omega_p{suffix}"), getattr(args, f"gamma{suffix}"), mu)
        if kind == "plasma":
            return Plasma(getattr(args, f"omega_p{suffix}"), mu)
        return Fixed(eps, mu)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _material_echo(model) -> dict:
    if isinstance(model, PerfectConductor):
        return {"model": "pc"}
    if isinstance(model, Drude):
        return {"model": "drude", "omega_p": model.omega_p, "gamma": model.gamma, "mu": model.mu}
    if isinstance(model, Plasma):
        return {"model": "plasma", "omega_p": model.omega_p, "mu": model.mu}
    return {"model": "fixed", "eps": model.epsilon, "mu": model.mu}


def _workers(tasks: int) -> int:
    cap = os.environ.get("CASIMIR_SSO_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise InputError("CASIMIR_SSO_THREADS must be an integer") from None
    return max(1, min(n, tasks))


def _parallel_map(fn, items):
    """Map in input order, in worker processes when more than one is allowed."""
    items = list(items)
    workers = _workers(len(items))
    if workers == 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# output ----------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "" if v is None else str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def emit(args, command: str, config: dict, columns: list, rows: list, converged: bool,
         extra: dict | None = None) -> str:
    """Render one result table as CSV or JSON text."""
    if args.format == "json":
        obj = {
            "command": command,
            "version": __version__,
            "units": _units(args).name,
            "config": config,
            "converged": bool(converged),
            "columns": columns,
            "rows": [dict(zip(columns, r)) for r in rows],
        }
        if extra:
            obj.update(extra)
        return json.dumps(_jsonable(obj), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(v) for v in r])
    return buf.getvalue()


# subcommands --------------------------------------------------------------------------

def _quad(args) -> QuadratureConfig:
    if not args.rel_tol > 0:
        raise InputError("rel-tol must be positive")
    return QuadratureConfig(rel_tol=args.rel_tol)


def _order(text) -> MseOrder:
    try:
        return MseOrder.parse(text)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def _inner2(text):
    if text in ("exact", "same"):
        return text
    try:
        v = int(text)
    except ValueError:
        raise InputError("inner2 must be 'exact', 'same' or an integer") from None
    if v < 0:
        raise InputError("inner2 order must be non-negative")
    return v


def _plate_config(args, distance) -> PlateConfig:
    try:
        return PlateConfig(
            _material(args, "1"), _material(args, "2"), distance, _temperature(args),
            units=_units(args), coefficients=C2 if args.coefficients == "C2" else C1,
            inner2=_inner2(args.inner2), quadrature=_quad(args), n_max=args.n_max,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _plate_echo(args, cfg: PlateConfig) -> dict:
    return {
        "body1": _material_echo(cfg.body1), "body2": _material_echo(cfg.body2),
        "distance": cfg.distance, "temperature": cfg.temperature,
        "coefficients": args.coefficients, "inner2": args.inner2, "rel_tol": args.rel_tol,
    }


def _plate_compute(cfg, orders, quantity):
    fn = mse_energies_per_area if quantity == "energy" else casimir_forces_per_area
    return fn(cfg, orders)


def cmd_plates(args):
    distance = parse_length(args.distance, args.units == "dimensionless")
    cfg = _plate_config(args, distance)
    order = _order(args.order)
    res = _plate_compute(cfg, [order], args.quantity)[order]
    kT = cfg.units.thermal_energy(cfg.temperature) if cfg.temperature > 0 else 0.0
    columns = ["n", "kappa_n", "term", "cumulative", "distance", "temperature", "order", "quantity"]
    rows = []
    if res.terms:
        cum = res.cumulative(kT)
        for (n, kappa, v), c in zip(res.terms, cum):
            w = 0.5 if n == 0 else 1.0
            rows.append([n, kappa, kT * w * v, c, distance, cfg.temperature, str(order), args.quantity])
    rows.append(["total", None, res.total, res.total, distance, cfg.temperature, str(order), args.quantity])
    config = dict(_plate_echo(args, cfg), order=str(order), quantity=args.quantity)
    text = emit(args, "plates", config, columns, rows, res.converged,
                {"total": res.total, "tail_estimate": res.tail_estimate})
    return text, res.converged


def _sweep_task(task):
    cfg, orders, quantity = task
    res = _plate_compute(cfg, orders, quantity)
    return [(o, res[o].total, res[o].converged) for o in orders]


def cmd_plates_sweep(args):
    distances = _lengths(args, args.distances)
    orders = [_order(x) for x in str(args.orders).split(",") if x.strip()]
    if not distances or not orders:
        raise InputError("plates-sweep needs at least one distance and one order")
    cfgs = [_plate_config(args, d) for d in distances]
    results = _parallel_map(_sweep_task, [(c, orders, args.quantity) for c in cfgs])
    columns = ["distance", "temperature", "order", "quantity", "value", "converged"]
    rows, ok = [], True
    for cfg, res in zip(cfgs, results):
        for o, v, conv in res:
            rows.append([cfg.distance, cfg.temperature, str(o), args.quantity, v, conv])
            ok = ok and conv
    config = dict(_plate_echo(args, cfgs[0]), distances=distances,
                  orders=[str(o) for o in orders], quantity=args.quantity)
    config.pop("distance")
    return emit(args, "plates-sweep", config, columns, rows, ok), ok


def _eig_rows(prefix, eigs):
    return [prefix + [i, float(v.real), float(v.imag), float(abs(v))] for i, v in enumerate(eigs)]


def _sphere_task(task):
    l, kappaR, cfg = task
    if isinstance(cfg.material, PerfectConductor):
        m0, _ = cfg.responses(kappaR)
        return block_eigenvalues(pc_sphere_block(l, kappaR, m0))
    return sphere_eigs(l, kappaR, cfg)


def cmd_sphere_eigs(args):
    kappas = _positive(_float_list(args.kappaR), "kappaR")
    if args.l_max < 1:
        raise InputError("l-max must be at least 1")
    radius = parse_length(args.radius, args.units == "dimensionless")
    try:
        cfg = SphereConfig(radius, _material(args), units=_units(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    tasks = [(l, x, cfg) for x in kappas for l in range(1, args.l_max + 1)]
    eigs = _parallel_map(_sphere_task, tasks)
    columns = ["l", "kappaR", "index", "re", "im", "abs"]
    rows = []
    for (l, x, _), ev in zip(tasks, eigs):
        rows.extend(_eig_rows([l, x], ev))
    config = {"material": _material_echo(cfg.material), "radius": radius,
              "l_max": args.l_max, "kappaR": kappas}
    return emit(args, "sphere-eigs", config, columns, rows, True), True


def _cylinder_config(args, radius=None):
    radius = radius if radius is not None else parse_length(args.radius, args.units == "dimensionless")
    try:
        return CylinderConfig(radius, _material(args), units=_units(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _cyl_task(task):
    m, x, kz, cfg = task
    return cyl_eigs(m, x, kz, cfg)


def cmd_cylinder_eigs(args):
    ms = _int_list(args.m)
    if any(m < 0 for m in ms):
        raise InputError("m must be non-negative")
    kappas = _positive(_float_list(args.kappaR), "kappaR")
    kzs = _float_list(args.kzR)
    cfg = _cylinder_config(args)
    tasks = [(m, x, kz, cfg) for m in ms for x in kappas for kz in kzs]
    eigs = _parallel_map(_cyl_task, tasks)
    columns = ["m", "kappaR", "kzR", "index", "re", "im", "abs"]
    rows = []
    for (m, x, kz, _), ev in zip(tasks, eigs):
        rows.extend(_eig_rows([m, x, kz], ev))
    config = {"material": _material_echo(cfg.material), "radius": cfg.radius,
              "m": ms, "kappaR": kappas, "kzR": kzs}
    return emit(args, "cylinder-eigs", config, columns, rows, True), True


def cmd_cylinder_tmatrix(args):
    if args.m < 0:
        raise InputError("m must be non-negative")
    if not args.kappaR > 0:
        raise InputError("kappaR must be positive")
    cfg = _cylinder_config(args)
    if args.order == "exact":
        t = t_exact(args.m, args.kappaR, args.kzR, cfg)
    else:
        try:
            p = int(args.order)
        except ValueError:
            raise InputError("order must be 'exact' or a non-negative integer") from None
        if p < 0:
            raise InputError("order must be non-negative")
        t = mse_t(args.m, args.kappaR, args.kzR, cfg, p)
    e, s = t.entries, t.scaled
    columns = ["m", "kappaR", "kzR", "order", "T_EE", "T_EH", "T_HE", "T_HH", "log_scale",
               "scaled_EE", "scaled_EH", "scaled_HE", "scaled_HH"]
    rows = [[args.m, args.kappaR, args.kzR, args.order, e[0, 0], e[0, 1], e[1, 0], e[1, 1],
             t.log_scale, s[0, 0], s[0, 1], s[1, 0], s[1, 1]]]
    config = {"material": _material_echo(cfg.material), "radius": cfg.radius, "m": args.m,
              "kappaR": args.kappaR, "kzR": args.kzR, "order": args.order}
    extra = {"T_EE": e[0, 0], "T_EH": e[0, 1], "T_HE": e[1, 0], "T_HH": e[1, 1]}
    return emit(args, "cylinder-tmatrix", config, columns, rows, True, extra), True


def _read_table(path):
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read polarizability table {path!r}: {exc}") from None
    if data.shape[1] not in (2, 3):
        raise InputError("polarizability table needs columns xi,alpha[,beta]")
    try:
        return TabulatedPolarizability(tuple(data[:, 0]), tuple(data[:, 1]),
                                       tuple(data[:, 2]) if data.shape[1] == 3 else ())
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _cp_task(task):
    particle, z0, material, temperature, order, units, quad, method = task
    return cp_energy(particle, z0, material, temperature, order, units=units,
                     quadrature=quad, method=method)


def cmd_cp_plate(args):
    z0s = _lengths(args, args.z0)
    if args.alpha_table:
        particle = _read_table(args.alpha_table)
        echo = {"table": args.alpha_table}
    else:
        try:
            particle = Polarizability(args.alpha0, args.omega_a, args.beta0, args.omega_b)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        echo = {"alpha0": args.alpha0, "omega_a": args.omega_a, "beta0": args.beta0,
                "omega_b": args.omega_b}
    material = _material(args)
    order = _order(args.order)
    temperature = _temperature(args)
    quad = _quad(args)
    tasks = [(particle, z, material, temperature, order, _units(args), quad, args.method) for z in z0s]
    results = _parallel_map(_cp_task, tasks)
    columns = ["z0", "temperature", "order", "energy", "converged"]
    rows = [[z, temperature, str(order), r.total, r.converged] for z, r in zip(z0s, results)]
    ok = all(r.converged for r in results)
    config = {"particle": echo, "plate": _material_echo(material), "z0": z0s,
              "temperature": temperature, "order": str(order), "method": args.method}
    return emit(args, "cp-plate", config, columns, rows, ok), ok


def cmd_static_eigs(args):
    if args.l_max < 0:
        raise InputError("l-max must be non-negative")
    if args.contrast is not None:
        c = args.contrast
        if not -1 < c < 1:
            raise InputError("contrast must lie in (-1, 1)")
    else:
        if not (args.eps > 0 and args.eps0 > 0):
            raise InputError("permittivities must be positive")
        c = StaticContrast.from_response(args.eps0, args.eps).value
    ev = static_sphere_eigs(args.l_max, c, n_theta=args.n_theta)
    columns = ["l", "lambda", "contrast", "bound_ratio"]
    rows = [[l, v, c, abs(v) / abs(c) if c else 0.0] for l, v in enumerate(ev)]
    config = {"contrast": c, "l_max": args.l_max, "n_theta": args.n_theta}
    return emit(args, "static-eigs", config, columns, rows, True), True


def cmd_selfcheck(args):
    names = [x for x in str(args.suites).split(",") if x.strip()] if args.suites else None
    if names:
        unknown = sorted(set(names) - set(suite_names()))
        if unknown:
            raise InputError(f"unknown suites: {', '.join(unknown)}")
    results = run_suites(names)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}", file=sys.stderr)
    columns = ["suite", "passed", "detail"]
    rows = [[r.name, r.passed, r.detail] for r in results]
    ok = all(r.passed for r in results)
    return emit(args, "selfcheck", {"suites": [r.name for r in results]}, columns, rows, ok), ok


# parser --------------------------------------------------------------------------

def _add_material(p, suffix="", eps=2.0, help_name="body"):
    p.add_argument(f"--model{suffix}", choices=["fixed", "drude", "plasma", "pc"], default="fixed",
                   help=f"{help_name} material model")
    p.add_argument(f"--eps{suffix}", type=float, default=eps, help=f"{help_name} permittivity (fixed model)")
    p.add_argument(f"--mu{suffix}", type=float, default=1.0, help=f"{help_name} permeability")
    p.add_argument(f"--omega-p{suffix}", dest=f"omega_p{suffix}", type=float, default=9.0,
                   help="plasma frequency (photon energy, eV)")
    p.add_argument(f"--gamma{suffix}", type=float, default=0.035, help="Drude damping (eV)")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    common.add_argument("--config", default=None, help="INI file with option defaults")
    common.add_argument("--units", choices=["si", "dimensionless"], default="si",
                        help="si: lengths in nm with optional nm/um/m suffix, T in K; "
                             "dimensionless: hbar c = k_B = 1")

    parser = _Parser(prog="casimir-sso", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def plate_opts(p):
        _add_material(p, "1", help_name="plate 1")
        _add_material(p, "2", help_name="plate 2")
        p.add_argument("--temperature", type=float, default=0.0)
        p.add_argument("--quantity", choices=["energy", "force"], default="energy")
        p.add_argument("--coefficients", choices=["C1", "C2"], default="C1")
        p.add_argument("--inner2", default="exact", help="body-2 inverse: exact, same or an order")
        p.add_argument("--rel-tol", type=float, default=1e-9)
        p.add_argument("--n-max", type=int, default=100000)

    p = sub.add_parser("plates", parents=[common], help="two-plate energy or force")
    plate_opts(p)
    p.add_argument("--distance", required=True)
    p.add_argument("--order", default="exact", help="exact or MSE_k,l (e.g. 12 or MSE_1,2)")
    p.set_defaults(func=cmd_plates)

    p = sub.add_parser("plates-sweep", parents=[common], help="plates over distances and orders")
    plate_opts(p)
    p.add_argument("--distances", required=True, help="comma-separated lengths")
    p.add_argument("--orders", default="exact", help="comma-separated orders")
    p.set_defaults(func=cmd_plates_sweep)

    p = sub.add_parser("sphere-eigs", parents=[common], help="sphere SSO eigenvalues")
    _add_material(p, eps=4.0, help_name="sphere")
    p.add_argument("--l-max", type=int, default=10)
    p.add_argument("--kappaR", default="1")
    p.add_argument("--radius", default="1", help="radius (sets the frequency of dispersive media)")
    p.set_defaults(func=cmd_sphere_eigs)

    p = sub.add_parser("cylinder-eigs", parents=[common], help="cylinder SSO eigenvalues")
    _add_material(p, eps=30.0, help_name="cylinder")
    p.add_argument("--m", default="0,1,2")
    p.add_argument("--kappaR", default="1")
    p.add_argument("--kzR", default="0,1,2")
    p.add_argument("--radius", default="1")
    p.set_defaults(func=cmd_cylinder_eigs)

    p = sub.add_parser("cylinder-tmatrix", parents=[common], help="cylinder T-matrix block")
    _add_material(p, eps=30.0, help_name="cylinder")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kappaR", type=float, required=True)
    p.add_argument("--kzR", type=float, default=0.0)
    p.add_argument("--order", default="exact", help="exact or the MSE order p")
    p.add_argument("--radius", default="1")
    p.set_defaults(func=cmd_cylinder_tmatrix, default_format="json")

    p = sub.add_parser("cp-plate", parents=[common], help="Casimir-Polder energy above a plate")
    _add_material(p, eps=4.0, help_name="plate")
    p.add_argument("--z0", required=True, help="comma-separated heights")
    p.add_argument("--alpha0", type=float, default=1.0, help="static polarizability (length^3)")
    p.add_argument("--omega-a", dest="omega_a", type=float, default=math.inf)
    p.add_argument("--beta0", type=float, default=0.0)
    p.add_argument("--omega-b", dest="omega_b", type=float, default=math.inf)
    p.add_argument("--alpha-table", default=None, help="CSV with columns xi,alpha[,beta]")
    p.add_argument("--temperature", type=float, default=0.0)
    p.add_argument("--order", default="exact")
    p.add_argument("--method", choices=["operator", "fresnel"], default="operator")
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_cp_plate)

    p = sub.add_parser("static-eigs", parents=[common], help="static sphere spectrum")
    p.add_argument("--l-max", type=int, default=8)
    p.add_argument("--eps", type=float, default=3.0)
    p.add_argument("--eps0", type=float, default=1.0)
    p.add_argument("--contrast", type=float, default=None, help="overrides --eps/--eps0")
    p.add_argument("--n-theta", type=int, default=64)
    p.set_defaults(func=cmd_static_eigs)

    p = sub.add_parser("selfcheck", parents=[common], help="run the invariant suites")
    p.add_argument("--suites", default=None, help=f"subset of {','.join(suite_names())}")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def _apply_config_file(parser, argv):
    """Parse argv, taking option defaults from the INI file named by --config."""
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, rest = pre.parse_known_args(argv)
    choices = parser._subparsers._group_actions[0].choices
    command = next((a for a in rest if a in choices), None)
    if known.config and command:
        subparser = choices[command]
        subparser.set_defaults(**_config_defaults(known.config, command, subparser))
    return parser.parse_args(argv)


def _config_defaults(path, command, subparser) -> dict:
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise InputError(f"cannot read config file {path!r}: {exc}") from None
    values = dict(cp.defaults())
    if cp.has_section(command):
        values.update(dict(cp.items(command)))
    known = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in values.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("config", "help"):
            raise InputError(f"unknown config key {key!r} for {command}")
        action = known[dest]
        if action.choices is not None and value not in action.choices:
            raise InputError(f"invalid value {value!r} for config key {key!r}")
        try:
            defaults[dest] = action.type(value) if action.type else value
        except ValueError:
            raise InputError(f"invalid value {value!r} for config key {key!r}") from None
        action.required = False
    return defaults


def run(argv=None, stdout=None) -> int:
    """Execute one command line; returns the exit status."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = _apply_config_file(parser, argv)
        if args.command is None:
            raise InputError(parser.format_usage().strip())
        if args.format is None:
            args.format = getattr(args, "default_format", "csv")
        text, ok = args.func(args)
    except (InputError, ValueError, ResolutionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK if ok else EXIT_UNCONVERGED


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
