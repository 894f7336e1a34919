"""Command-line front end.

``levypacket evolve --config FILE`` (or ``--preset NAME``) writes one CSV per
time slice plus a JSON summary.  ``levypacket check --suite A,B`` runs
registered checks, and ``levypacket list`` shows what is available.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.  A check
that misses its tolerance counts as a numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import fnmatch
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .errors import AliasingError, ConvergenceError, DomainError, LevyPacketError, ParseError
from .evolution import INITIAL_KINDS, InitialState, Scenario, evolve_process, evolve_wavepacket
from .laws import Family
from .presets import PRESETS, parse_noise
from .spectral import GridPair

log = logging.getLogger("levypacket")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
EXIT_FAIL = EXIT_NUMERIC


class ConfigError(Exception):
    pass


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _jsonable(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else ("inf" if obj > 0 else "-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _float(sec, key, default=None):
    if key not in sec:
        if default is None:
            raise ConfigError(f"missing key {key!r} in [{sec.name}]")
        return default
    try:
        return float(sec[key])
    except ValueError:
        raise ConfigError(f"[{sec.name}] {key} is not a number: {sec[key]!r}") from None


def _default_grid(noise, initial: InitialState) -> GridPair:
    heavy = initial.kind in ("cauchy", "student3")
    if not noise.is_compound and noise.law.family in (Family.CAUCHY, Family.STABLE, Family.STUDENT):
        heavy = True
    scale = max(initial.b, noise.scale)
    return GridPair.heavy_tail(scale) if heavy else GridPair.default(scale)


def parse_config(text: str) -> tuple[Scenario, dict]:
    """Scenario and output options from INI-style text.

    Sections ``[scenario]`` (noise, tau, initial, b, nu, k0, times, mode),
    ``[grid]`` (L, N), ``[tolerances]`` (aliasing, truncation, series) and
    ``[output]`` (dir, prefix, xmax, checks).
    """
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if "scenario" not in cp:
        raise ConfigError("missing [scenario] section")
    sc = cp["scenario"]
    tau = _float(sc, "tau", 1.0)
    if "noise" not in sc:
        raise ConfigError("missing key 'noise' in [scenario]")
    try:
        noise = parse_noise(sc["noise"], tau)
    except (ParseError, DomainError) as exc:
        raise ConfigError(f"bad noise: {exc}") from None
    kind = sc.get("initial", "").strip()
    if kind not in INITIAL_KINDS:
        raise ConfigError(f"initial must be one of {', '.join(INITIAL_KINDS)}")
    nu = _float(sc, "nu", math.nan)
    try:
        initial = InitialState(kind, _float(sc, "b", 1.0), None if math.isnan(nu) else nu, _float(sc, "k0", 0.0))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    raw_times = [t.strip() for t in sc.get("times", "").split(",") if t.strip()]
    try:
        times = tuple(float(t) for t in raw_times)
    except ValueError:
        raise ConfigError(f"times must be numbers: {sc.get('times')!r}") from None
    if cp.has_section("grid"):
        g = cp["grid"]
        try:
            grid = GridPair(_float(g, "L"), int(_float(g, "N")))
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    else:
        grid = _default_grid(noise, initial)
    tol = cp["tolerances"] if cp.has_section("tolerances") else {}
    kw = {}
    for key, name in (("aliasing", "aliasing_tol"), ("truncation", "truncation_tol"), ("series", "series_tol")):
        if key in tol:
            kw[name] = _float(tol, key)
    try:
        scenario = Scenario(noise, initial, grid, times, mode=sc.get("mode", "process").strip(), **kw)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    out = cp["output"] if cp.has_section("output") else {}
    options = {
        "dir": out.get("dir", "."),
        "prefix": out.get("prefix", "levypacket"),
        "xmax": float(out.get("xmax", 20.0 * max(initial.b, noise.scale))),
        "checks": [c.strip() for c in out.get("checks", "").split(",") if c.strip()],
    }
    return scenario, options


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

def _write_csv(path: Path, header: str, columns) -> None:
    rows = zip(*columns)
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(float(v)) for v in row) + "\n")


def _describe(fld, name: str) -> dict:
    x = fld.grid.x
    q = np.abs(fld.values) ** 2 if fld.kind == "wave" else fld.values.real
    return {
        "norms": [r.to_dict() for r in analysis.norms(fld)],
        "variances": [analysis.variance_of(fld, i) for i in range(len(fld.times))],
        "modes": [analysis.find_modes(q[i], x, time=t).to_dict() for i, t in enumerate(fld.times)],
        "info": {k: v for k, v in fld.info.items() if isinstance(v, (int, float, str))},
    }


def run_evolve(scenario: Scenario, options: dict) -> dict:
    outdir = Path(options["dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = options["prefix"]
    x = scenario.grid.x
    keep = np.abs(x) <= options["xmax"]
    summary = {
        "noise": str(scenario.noise),
        "initial": {"kind": scenario.initial.kind, "b": scenario.initial.b, "nu": scenario.initial.nu,
                    "k0": scenario.initial.k0},
        "grid": {"L": scenario.grid.L, "N": scenario.grid.N},
        "times": list(scenario.times),
        "files": [],
    }
    if scenario.mode in ("process", "both"):
        rho = evolve_process(scenario)
        for i in range(len(rho.times)):
            path = outdir / f"{prefix}_density_{i:03d}.csv"
            _write_csv(path, "x,value", (x[keep], rho.values[i].real[keep]))
            summary["files"].append(path.name)
        summary["process"] = _describe(rho, "process")
    if scenario.mode in ("schrodinger", "both"):
        psi = evolve_wavepacket(scenario)
        for i in range(len(psi.times)):
            v = psi.values[i][keep]
            path = outdir / f"{prefix}_wave_{i:03d}.csv"
            _write_csv(path, "x,re,im,abs2", (x[keep], v.real, v.imag, np.abs(v) ** 2))
            summary["files"].append(path.name)
        summary["schrodinger"] = _describe(psi, "schrodinger")
    if options.get("checks"):
        summary["checks"] = [r.to_dict() for r in _run_checks(options["checks"])]
    spath = outdir / f"{prefix}_summary.json"
    spath.write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n", encoding="ascii")
    return summary


def cmd_evolve(args) -> int:
    try:
        if args.preset:
            if args.preset not in PRESETS:
                raise ConfigError(f"unknown preset {args.preset!r}")
            text = PRESETS[args.preset].config_text()
        elif args.config:
            text = Path(args.config).read_text()
        else:
            raise ConfigError("evolve needs --config or --preset")
        scenario, options = parse_config(text)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        options["dir"] = args.out
    if args.preset and options["prefix"] == "levypacket":
        options["prefix"] = args.preset
    try:
        summary = run_evolve(scenario, options)
    except (AliasingError, ConvergenceError, LevyPacketError) as exc:
        print(f"numeric failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    log.info("wrote %d frames to %s", len(summary["files"]), options["dir"])
    if any(c["status"] != "pass" for c in summary.get("checks", [])):
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# check / list
# ---------------------------------------------------------------------------

def _expand(names):
    from .checks import CHECKS

    out = []
    for name in names:
        if name == "all":
            out.extend(CHECKS)
            continue
        hits = [c for c in CHECKS if fnmatch.fnmatchcase(c, name)]
        if not hits:
            raise ConfigError(f"unknown check {name!r}")
        out.extend(hits)
    return list(dict.fromkeys(out))


def _run_checks(names):
    from .checks import run_check

    return [run_check(n) for n in _expand(names)]


def cmd_check(args) -> int:
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    try:
        results = _run_checks(names)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AliasingError, ConvergenceError, LevyPacketError) as exc:
        print(f"numeric failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(json.dumps(_jsonable([r.to_dict() for r in results]), indent=2))
    return EXIT_OK if all(r.status == "pass" for r in results) else EXIT_FAIL


def cmd_list(args) -> int:
    from .checks import CHECKS

    print("noise families:")
    for fam in Family:
        print(f"  {fam.value}")
    print("  wiener_poisson")
    print("initial states:")
    for kind in INITIAL_KINDS:
        print(f"  {kind}")
    print("figure presets:")
    for p in PRESETS.values():
        print(f"  {p.name:18s} {p.description}")
    print("checks:")
    for name in CHECKS:
        print(f"  {name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="levypacket", description="Levy process and Levy-Schrodinger wave packets")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    ev = sub.add_parser("evolve", help="evolve a scenario and write frames")
    ev.add_argument("--config")
    ev.add_argument("--preset")
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_evolve)
    ck = sub.add_parser("check", help="run registered checks")
    ck.add_argument("--suite", required=True, help="comma-separated names; glob patterns and 'all' allowed")
    ck.set_defaults(func=cmd_check)
    ls = sub.add_parser("list", help="list families, states, presets and checks")
    ls.set_defaults(func=cmd_list)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
