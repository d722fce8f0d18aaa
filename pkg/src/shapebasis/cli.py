"""Command-line driver.

    shapebasis shape-table --t 0.25 --rho0 9 --K 20
    shapebasis lemma1 --t 0.25 --rho0 9 --trials 1000 --seed 7
    shapebasis blocks --alpha 1 --N 'k^2' --kmax 8 --samples 1000000 --seed 3
    shapebasis witness --source solver --t 0.25 --rho0 9 --K 20

Exit codes: 0 success, 1 failed check, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .basis import corollary_config, geometric_angles, moriyon_witness, shape_from_solver
from .basis import check_angle_condition
from .blocks import build_family, containment_check, half_area_check, quarter_bound_check
from .geometry import Point2, Rectangle, check_rect, convex_hull, hat_rect, rect_polygon
from .errors import ShapeBasisError
from .maximal import sandwich_check
from .orlicz import SimpleFunction, llogl, necessity_ratio
from .sampling import derive_seed
from .shape_law import ShapeLawParams, rho, sigma_lower_bound, sigma_star, solve_sigma

log = logging.getLogger("shapebasis")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SAMPLES = 100_000


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- config


def read_config_file(path: str) -> dict[str, str]:
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def parse_n_rule(rule: str):
    """``'<int>'`` gives a constant count, ``'k^<p>'`` gives ``ceil(k^p)`` with ``N_0 = 1``."""
    rule = str(rule).strip().strip("'\"")
    if re.fullmatch(r"\d+", rule):
        c = int(rule)
        if c < 1:
            raise ConfigError("constant N must be >= 1")
        return lambda k: c
    m = re.fullmatch(r"k\s*\^\s*(\d+(?:\.\d+)?)", rule)
    if m:
        p = float(m.group(1))
        if p <= 0:
            raise ConfigError("power in N rule must be positive")
        return lambda k: 1 if k == 0 else max(1, math.ceil(k**p))
    raise ConfigError(f"unrecognized N rule {rule!r}; use '<integer>' or 'k^<p>'")


def _typed(ns, conf, key, conv, default=None):
    value = getattr(ns, key, None)
    if value is None and key in conf:
        try:
            value = conv(conf[key])
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {conf[key]!r}") from exc
    return default if value is None else value


def _seed(ns, conf) -> int:
    seed = _typed(ns, conf, "seed", int)
    if seed is None:
        env = os.environ.get("SHAPEBASIS_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError as exc:
            raise ConfigError(f"SHAPEBASIS_SEED is not an integer: {env!r}") from exc
    if seed < 0:
        raise ConfigError("seed must be nonnegative")
    return seed


def _params(ns, conf) -> ShapeLawParams:
    t = _typed(ns, conf, "t", float)
    rho0 = _typed(ns, conf, "rho0", float)
    if t is None or rho0 is None:
        raise ConfigError("--t and --rho0 are required")
    try:
        return ShapeLawParams(t, rho0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _angles(ns, conf) -> list[float]:
    K = _typed(ns, conf, "K", int)
    if K is None:
        raise ConfigError("--K is required")
    if K < 0:
        raise ConfigError("K must be >= 0")
    cap = math.pi / 6
    out = []
    for a in geometric_angles(K):
        if a > cap:
            log.warning("angle %.12g exceeds pi/6; clamped to pi/6", a)
            a = cap
        out.append(a)
    return out


# ---------------------------------------------------------------- output


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if value is None or isinstance(value, (int, np.integer)):
        return None if value is None else int(value)
    return float(format(float(value), ".12g"))


def render(columns, rows, fmt: str, meta: dict) -> str:
    if fmt == "json":
        payload = {
            "meta": meta,
            "rows": [{c: _json_value(r[c]) for c in columns} for r in rows],
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def emit(ns, conf, columns, rows, meta):
    fmt = _typed(ns, conf, "format", str, "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    meta = {"version": __version__, **meta}
    text = render(columns, rows, fmt, meta)
    out = _typed(ns, conf, "out", str)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

SHAPE_COLUMNS = ["theta", "sigma", "sigma_star", "residual", "lower_bound", "theta_times_sigma"]


def shape_rows(params: ShapeLawParams, angles):
    rows = []
    for a in angles:
        s = solve_sigma(params, a)
        rows.append(
            {
                "theta": a,
                "sigma": s,
                "sigma_star": sigma_star(params.t, a),
                "residual": abs(rho(params.t, a, s) - params.rho0),
                "lower_bound": sigma_lower_bound(params.t, params.rho0, a),
                "theta_times_sigma": a * s,
            }
        )
    return rows


def cmd_shape_table(ns, conf) -> int:
    params = _params(ns, conf)
    rows = shape_rows(params, _angles(ns, conf))
    ok = all(r["residual"] <= 1e-10 * params.rho0 for r in rows)
    ok &= all(a["sigma"] < b["sigma"] for a, b in zip(rows, rows[1:]))
    emit(ns, conf, SHAPE_COLUMNS, rows, {"command": "shape-table", "t": params.t, "rho0": params.rho0})
    return EXIT_OK if ok else EXIT_FAIL


LEMMA1_COLUMNS = ["trial", "theta", "sigma", "long", "lhs_ok", "rhs_ok"]


def random_sandwich_case(params: ShapeLawParams, rng: np.random.Generator, kind: int):
    """A random solver-shaped rectangle and a disjointly supported simple function near it."""
    theta = math.exp(rng.uniform(math.log(2.0**-12), math.log(math.pi / 6)))
    sigma = solve_sigma(params, theta)
    long = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
    center = Point2(*rng.uniform(-5.0, 5.0, size=2))
    r = Rectangle(center, theta, long, long / sigma)
    if kind == 1:
        f = SimpleFunction.indicator(rect_polygon(check_rect(r, params.t)), rng.uniform(0.1, 10))
    elif kind == 2:
        f = SimpleFunction.indicator(rect_polygon(r), rng.uniform(0.1, 10))
    else:
        hat = hat_rect(r)
        x0, y0, x1, y1 = hat.bounding_box()
        g = 3
        cells = rng.choice(g * g, size=int(rng.integers(1, 5)), replace=False)
        terms = []
        for cell in cells:
            i, j = divmod(int(cell), g)
            cx0 = x0 + (x1 - x0) * i / g
            cy0 = y0 + (y1 - y0) * j / g
            pts = np.column_stack(
                [
                    cx0 + rng.uniform(0, (x1 - x0) / g, 6),
                    cy0 + rng.uniform(0, (y1 - y0) / g, 6),
                ]
            )
            hull = convex_hull(pts)
            if not hull.is_empty:
                terms.append((rng.uniform(0, 10), hull))
        f = SimpleFunction(tuple(terms))
    return r, f


def cmd_lemma1(ns, conf) -> int:
    params = _params(ns, conf)
    trials = _typed(ns, conf, "trials", int, 1000)
    if trials < 1:
        raise ConfigError("--trials must be >= 1")
    seed = _seed(ns, conf)
    rng = np.random.default_rng(seed)
    failures = []
    for i in range(trials):
        r, f = random_sandwich_case(params, rng, i % 3)
        lhs, rhs = sandwich_check(r, params.t, params.rho0, f)
        if not (lhs and rhs):
            failures.append(
                {"trial": i, "theta": r.theta, "sigma": r.shape, "long": r.long, "lhs_ok": lhs, "rhs_ok": rhs}
            )
    emit(
        ns,
        conf,
        LEMMA1_COLUMNS,
        failures,
        {"command": "lemma1", "seed": seed, "trials": trials, "t": params.t, "rho0": params.rho0},
    )
    return EXIT_FAIL if failures else EXIT_OK


BLOCK_COLUMNS = [
    "k",
    "N_k",
    "sigma_k",
    "angle_ok",
    "union_ratio",
    "half_ok",
    "quarter_ok",
    "necessity_ratio",
]


def cmd_blocks(ns, conf) -> int:
    alpha = _typed(ns, conf, "alpha", float, 1.0)
    if not alpha > 0:
        raise ConfigError("alpha must be positive")
    rule = parse_n_rule(_typed(ns, conf, "N", str, "k^2"))
    kmax = _typed(ns, conf, "kmax", int, 8)
    if kmax < 0:
        raise ConfigError("kmax must be >= 0")
    samples = _typed(ns, conf, "samples", int, DEFAULT_SAMPLES)
    geometry_only = bool(getattr(ns, "geometry_only", False)) or str(conf.get("geometry_only", "")).lower() in (
        "1",
        "true",
        "yes",
    )
    if not geometry_only and samples < 10_000:
        raise ConfigError("--samples must be >= 10000")
    workers = _typed(ns, conf, "workers", int, 1)
    if workers < 1:
        raise ConfigError("--workers must be >= 1")
    seed = _seed(ns, conf)
    cfg = corollary_config([rule(k) for k in range(kmax + 1)], kmax)
    phi = llogl(alpha)
    rows = []
    structural_ok = True
    for k in range(kmax + 1):
        row = {
            "k": k,
            "N_k": cfg.counts[k],
            "sigma_k": cfg.sigmas[k],
            "angle_ok": check_angle_condition(cfg, k),
            "union_ratio": None,
            "half_ok": None,
            "quarter_ok": None,
            "necessity_ratio": necessity_ratio(cfg, phi, k),
        }
        if not geometry_only:
            fam = build_family(cfg, k)
            contained = containment_check(fam)
            half_ok, ratio = half_area_check(fam, samples, derive_seed(seed, k, 0), workers)
            quarter_ok = contained and quarter_bound_check(fam, min(samples, 100_000), derive_seed(seed, k, 1))
            row.update(union_ratio=ratio, half_ok=half_ok, quarter_ok=quarter_ok)
            structural_ok &= contained and quarter_ok
        rows.append(row)
    emit(
        ns,
        conf,
        BLOCK_COLUMNS,
        rows,
        {
            "command": "blocks",
            "seed": seed,
            "samples": None if geometry_only else samples,
            "alpha": alpha,
            "kmax": kmax,
        },
    )
    return EXIT_OK if structural_ok else EXIT_FAIL


WITNESS_COLUMNS = ["theta", "sigma", "far_distance"]


def witness_rows(pairs):
    rows = []
    for theta, sigma in pairs:
        _, far = moriyon_witness(theta, sigma)
        rows.append({"theta": theta, "sigma": sigma, "far_distance": far})
    return rows


def cmd_witness(ns, conf) -> int:
    source = _typed(ns, conf, "source", str, "solver")
    if source == "solver":
        params = _params(ns, conf)
        sf = shape_from_solver(_angles(ns, conf), params)
        pairs = sf.items()
    elif source == "blocks":
        rule = parse_n_rule(_typed(ns, conf, "N", str, "k^2"))
        kmax = _typed(ns, conf, "kmax", int, 8)
        if kmax < 0:
            raise ConfigError("kmax must be >= 0")
        cfg = corollary_config([rule(k) for k in range(kmax + 1)], kmax)
        pairs = [(cfg.thetas[k + 1], cfg.sigmas[k]) for k in range(kmax + 1)]
    elif source == "constant":
        sigma = _typed(ns, conf, "sigma", float)
        if sigma is None or sigma < 1:
            raise ConfigError("--sigma >= 1 is required for the constant source")
        pairs = [(a, sigma) for a in _angles(ns, conf)]
    else:
        raise ConfigError(f"unknown witness source {source!r}")
    if not pairs:
        raise ConfigError("empty witness input")
    rows = witness_rows(pairs)
    ok = all(a["sigma"] < b["sigma"] and a["far_distance"] < b["far_distance"] for a, b in zip(rows, rows[1:]))
    emit(ns, conf, WITNESS_COLUMNS, rows, {"command": "witness", "source": source})
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' lines; flags take precedence")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--seed", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    shape = argparse.ArgumentParser(add_help=False)
    shape.add_argument("--t", type=float)
    shape.add_argument("--rho0", type=float)
    shape.add_argument("--K", type=int)

    parser = _Parser(prog="shapebasis", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("shape-table", parents=[common, shape], help="tabulate the solved shape function")
    p.set_defaults(func=cmd_shape_table)

    p = sub.add_parser("lemma1", parents=[common], help="randomized per-rectangle sandwich inequalities")
    p.add_argument("--t", type=float)
    p.add_argument("--rho0", type=float)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_lemma1)

    p = sub.add_parser("blocks", parents=[common], help="block counterexample geometry and necessity ratios")
    p.add_argument("--alpha", type=float)
    p.add_argument("--N", help="count rule: '<integer>' or 'k^<p>'")
    p.add_argument("--kmax", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--geometry-only", action="store_true", default=None)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("witness", parents=[common, shape], help="far-point distances of unit-area witnesses")
    p.add_argument("--source", choices=["solver", "blocks", "constant"])
    p.add_argument("--sigma", type=float)
    p.add_argument("--N")
    p.add_argument("--kmax", type=int)
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if ns.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        conf = read_config_file(ns.config) if ns.config else {}
        return ns.func(ns, conf)
    except (ConfigError, ShapeBasisError, ValueError, OSError) as exc:
        # anything the library rejects is a configuration problem, never a crash code
        print(f"shapebasis: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
