"""
Experiment subcommands. Each takes the layered config and a flag telling it whether to enforce
its acceptance gate, writes CSV or JSON to config.output (stdout when empty) and returns the
process exit code.
"""
import math
from logging import info, warning
from pathlib import Path
from typing import List, Optional

import numpy as np

from bodies import parse_body_spec
from core import AcceptanceError, AngleInterval, ConfigError, ConvexBody, NumericalError
from core.constants import TWO_PI
from discrepancy import d2_montecarlo, d2_parseval, normalize_for_torus
from fourier import (RayAverages, SpectralWeightTable, bound_sample, build_weight_table,
                     dilation_avg_sq, dilation_threshold, load_weight_table,
                     rotation_dilation_avg_sq, rotation_dilation_curve, save_weight_table,
                     spherical_avg_sq, validate_weight_table, weight_at)
from pointsets import (AnisotropicLatticeSpec, Generic, PointSet, RotatedLatticeSpec,
                       anisotropic_lattice, compose_general_N, composition_for_alpha,
                       format_points_csv, rotated_lattice, square_lattice)

from .config import ExperimentConfig
from .fitting import (SlopeFit, check_gate, expected_decay_slope, expected_discrepancy_exponent,
                      fit_schedule, resolve_expected)
from .registry import experiment
from .results import ResultRow, emit, read_csv_columns, rows_to_csv, run_rows, to_json_text


# --- shared helpers
def build_pointset(family: str, n: int, q1: int = 1, q2: int = 2, alpha: float = 2.0,
                   seed: int = 0) -> PointSet:
    """The point set of a family for the size parameter n."""
    if family == "square":
        return square_lattice(max(math.isqrt(n), 1))
    if family == "rotated":
        return rotated_lattice(RotatedLatticeSpec(n, q1, q2))
    if family == "aniso":
        return anisotropic_lattice(AnisotropicLatticeSpec(n, alpha))
    if family == "compose":
        return compose_general_N(n)
    if family == "compose-aniso":
        return composition_for_alpha(n, alpha)
    if family == "random":
        rng = np.random.Generator(np.random.Philox(seed))
        return PointSet(rng.random((n, 2)), Generic(), name=f"random:{n}:{seed}")
    raise ConfigError(f"unknown point family {family!r}")


def check_rotation_sector(body: ConvexBody, interval: AngleInterval, q1: int, q2: int) -> None:
    """arctan(q1/q2) must lie where omega - I stays inside one angular-trace component."""
    omega = math.atan2(q1, q2)
    sectors = body.rotation_sector(interval)
    if not any(s.contains(omega, tol=1e-12) for s in sectors):
        listed = ", ".join(f"[{s.start:.6g}, {s.end:.6g}]" for s in sectors) or "none"
        raise ConfigError(f"rotation angle arctan({q1}/{q2}) = {omega:.6g} is outside the "
                          f"rotation sectors of {body.name} for this interval: {listed}")


def weight_table_for(body: ConvexBody, interval: AngleInterval, rho_max: float,
                     config: ExperimentConfig) -> SpectralWeightTable:
    """Reuse the cached table when it matches and reaches rho_max; otherwise build and spot-check it."""
    path = config.weights_cache
    if path and Path(path).is_file():
        table = load_weight_table(path, body, interval)
        if table.rho_max >= rho_max * (1 - 1e-12):
            info("reusing weight table %s up to rho=%.6g", path, table.rho_max)
            return table
        info("cached weight table reaches rho=%.6g only, rebuilding", table.rho_max)
    table = build_weight_table(body, interval, max(rho_max, 1.0), workers=config.workers)
    if config.spot_checks:
        validate_weight_table(table, body, spot_checks=config.spot_checks, seed=config.seed,
                              rtol=config.check_rtol)
    if path:
        save_weight_table(table, path)
    return table


def _fit_comments(x, y, expected: Optional[float]):
    """(comment lines, upper-half fit or None)."""
    try:
        upper, full = fit_schedule(x, y)
    except NumericalError as e:
        warning("no fit: %s", e)
        return [f"fit unavailable: {e}"], None
    lines = [f"fit_upper {upper.describe()}", f"fit_full {full.describe()}"]
    if expected is not None:
        lines.append(f"expected slope={expected!r}")
    info("fitted slope %.4f +- %.4f (full range %.4f)", upper.slope, upper.stderr, full.slope)
    return lines, upper


def _gate(gate: bool, label: str, fit: Optional[SlopeFit], expected, tolerance) -> None:
    if not gate:
        return
    if fit is None:
        raise AcceptanceError(f"{label}: no fit to check")
    check_gate(label, fit, expected, tolerance)


def _ok(rows: List[ResultRow]) -> List[ResultRow]:
    return [r for r in rows if r.ok and r.value is not None]


# --- body-info
@experiment("body-info", help="JSON report of a body: perimeter, area, diameters, angular "
            "points, angular trace, psi and the portion of perimeter of the interval")
def cmd_body_info(config: ExperimentConfig, gate: bool = False) -> int:
    body = parse_body_spec(config.body)
    interval = config.angle_interval
    data = {"spec": config.body, "name": body.name, "kind": body.kind,
            "fingerprint": body.fingerprint, **body.report(),
            "interval": [interval.start, interval.length],
            "portion_of_perimeter": body.portion_of_perimeter(interval),
            "rotation_sector": [[s.start, s.length] for s in body.rotation_sector(interval)],
            "labels": body.report_labels()}
    emit(to_json_text(data), config.output)
    return 0


# --- points
@experiment("points", help="CSV point set (x, y) of a family: square, rotated, aniso, compose, "
            "compose-aniso or random, sized by --n")
def cmd_points(config: ExperimentConfig, gate: bool = False) -> int:
    points = build_pointset(config.family, config.n, config.q1, config.q2, config.alpha,
                            config.seed)
    info("built %s with N=%d", points.name, len(points))
    emit(format_points_csv(points), config.output)
    return 0


# --- fourier-decay
def _decay_value(body: ConvexBody, quantity: str, interval: AngleInterval, theta: float,
                 rho: float):
    if quantity == "rotation":
        value = rotation_dilation_avg_sq(body, interval, rho)
    elif quantity == "dilation":
        value = dilation_avg_sq(body, theta, rho)
    elif quantity == "spherical":
        value = spherical_avg_sq(body, interval, rho)
    else:
        value = weight_at(body, interval, rho, theta)
    return value, None, {}


def _decay_curve(body: ConvexBody, quantity: str, interval: AngleInterval, theta: float,
                 rhos: np.ndarray, workers: int) -> Optional[np.ndarray]:
    """All rows at once where one pass serves the whole schedule."""
    if quantity == "rotation":
        return rotation_dilation_curve(body, interval, rhos, workers)
    if quantity == "weight":
        return rotation_dilation_curve(body, interval.reflected_from(theta), rhos, workers)
    if quantity == "dilation":
        return RayAverages(body, theta, float(rhos.max())).at(rhos)
    return None


@experiment("fourier-decay", help="CSV of (rho, value) for a rotation, dilation, spherical or "
            "weight average of |FT|^2, with log-log slope fits", columns=("rho", "value"))
def cmd_fourier_decay(config: ExperimentConfig, gate: bool = False) -> int:
    body = parse_body_spec(config.body)
    interval = config.angle_interval
    rhos = config.rho_schedule()
    curve = None
    try:
        curve = _decay_curve(body, config.quantity, interval, config.theta, rhos, config.workers)
    except NumericalError as e:
        warning("one-pass %s curve failed (%s); evaluating row by row", config.quantity, e)
    if curve is not None:
        rows = [ResultRow({"rho": float(r)}, float(v)) for r, v in zip(rhos, curve)]
    else:
        jobs = [({"rho": float(r)}, (body, config.quantity, interval, config.theta, float(r)))
                for r in rhos]
        rows = run_rows(_decay_value, jobs, config.workers)

    ok = _ok(rows)
    expected = resolve_expected(config.expect, config.h,
                                lambda h: expected_decay_slope(config.quantity, h))
    comments, fit = _fit_comments([r.params["rho"] for r in ok], [r.value for r in ok], expected)
    comments = [f"body={config.body} quantity={config.quantity} interval={config.interval} "
                f"theta={config.theta!r}"] + comments
    emit(rows_to_csv(rows, ("rho", "value"), comments, config.timing), config.output)
    _gate(gate, "fourier-decay", fit, expected, config.tolerance)
    return 0


# --- semichord
def _semichord_value(body: ConvexBody, interval: AngleInterval, lam: float, rtol: float):
    return body.semichord_average(interval, lam, rtol), None, {}


@experiment("semichord", help="CSV of (lam, value, target, gap): the squared right semi-chord "
            "average against the portion of perimeter of the interval",
            columns=("lam", "value", "target", "gap"))
def cmd_semichord(config: ExperimentConfig, gate: bool = False) -> int:
    body = parse_body_spec(config.body)
    interval = config.angle_interval
    target = body.portion_of_perimeter(interval)
    jobs = [({"lam": float(lam)}, (body, interval, float(lam), config.rtol))
            for lam in config.lam_schedule()]
    rows = run_rows(_semichord_value, jobs, config.workers)
    for row in _ok(rows):
        row.extra = {"target": target, "gap": abs(row.value - target) / max(target, 1e-300)}
    ok = _ok(rows)
    final_gap = ok[-1].extra["gap"] if ok else math.inf
    info("semi-chord average at lam=%.3g: relative gap %.4g to %.6g",
         ok[-1].params["lam"] if ok else math.nan, final_gap, target)
    comments = [f"body={config.body} interval={config.interval}",
                f"target={target!r} final_gap={final_gap!r}"]
    emit(rows_to_csv(rows, ("lam", "value", "target", "gap"), comments, config.timing),
         config.output)
    if gate and not final_gap <= config.tolerance:
        raise AcceptanceError(f"semichord: final gap {final_gap:.4g} exceeds {config.tolerance}")
    return 0


# --- discrepancy-scan
def _d2_value(points: PointSet, body: ConvexBody, interval: AngleInterval, R: float,
              table: SpectralWeightTable):
    result = d2_parseval(points, body, interval, R, table)
    return result.value, result.tail, {"tail": result.tail, "frequencies": result.frequencies}


@experiment("discrepancy-scan", help="CSV of D2 against N for a point family by the Parseval "
            "sum, with Monte Carlo cross-checks on the two largest N and an exponent fit. The "
            "rotated and compose families need arctan(q1/q2) inside a rotation sector of the "
            "body for the interval (body-info lists them). The default full interval has no "
            "sector on any body; on the square, interval=-pi/8,pi/4 accepts the default "
            "q1=1, q2=2 and 0,pi/4 accepts q1=2, q2=1",
            columns=("n", "N", "R", "value", "tail", "frequencies", "mc_value", "mc_stderr",
                     "mc_agree"))
def cmd_discrepancy_scan(config: ExperimentConfig, gate: bool = False) -> int:
    body = normalize_for_torus(parse_body_spec(config.body))
    interval = config.angle_interval
    if config.family in ("rotated", "compose"):
        check_rotation_sector(body, interval, config.q1, config.q2)
    sizes = config.n_schedule()
    point_sets = [build_pointset(config.family, n, config.q1, config.q2, config.alpha,
                                 config.seed) for n in sizes]
    radii = [config.truncation_radius(len(p)) for p in point_sets]
    table = weight_table_for(body, interval, max(radii), config)

    jobs = [({"n": n, "N": len(p), "R": R}, (p, body, interval, R, table))
            for n, p, R in zip(sizes, point_sets, radii)]
    rows = run_rows(_d2_value, jobs, config.workers)

    if config.samples:
        checked = sorted(range(len(rows)), key=lambda i: rows[i].params["N"])
        for i in [i for i in checked if rows[i].ok][-2:]:
            row = rows[i]
            try:
                mc = d2_montecarlo(point_sets[i], body, interval, config.samples, config.seed,
                                   config.workers)
            except NumericalError as e:
                warning("monte carlo cross-check at N=%d failed: %s", row.params["N"], e)
                continue
            agree = abs(mc.value - row.value) <= 2.0 * (mc.stderr + row.error)
            row.extra.update(mc_value=mc.value, mc_stderr=mc.stderr, mc_agree=agree)
            (info if agree else warning)("N=%d: parseval %.6g, monte carlo %.6g +- %.3g",
                                         row.params["N"], row.value, mc.value, mc.stderr)

    ok = _ok(rows)
    expected = resolve_expected(config.expect, config.h, expected_discrepancy_exponent)
    comments, fit = _fit_comments([r.params["N"] for r in ok], [r.value for r in ok], expected)
    comments = [f"body={config.body} family={config.family} interval={config.interval} "
                f"seed={config.seed}"] + comments
    columns = ("n", "N", "R", "value", "tail", "frequencies", "mc_value", "mc_stderr", "mc_agree")
    emit(rows_to_csv(rows, columns, comments, config.timing), config.output)
    _gate(gate, "discrepancy-scan", fit, expected, config.tolerance)
    return 0


# --- exponent-fit
@experiment("exponent-fit", help="JSON log-log fits of two columns (x_column, y_column) of a "
            "result CSV given by --input")
def cmd_exponent_fit(config: ExperimentConfig, gate: bool = False) -> int:
    if not config.input:
        raise ConfigError("exponent-fit needs --input")
    try:
        xs, ys = read_csv_columns(config.input, config.x_column, config.y_column)
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot read {config.input}: {e}") from e
    upper, full = fit_schedule(xs, ys)
    expected = config.expect
    emit(to_json_text({"input": config.input, "x": config.x_column, "y": config.y_column,
                       "upper": upper, "full": full, "expected": expected}), config.output)
    _gate(gate, "exponent-fit", upper, expected, config.tolerance)
    return 0


# --- bounds
def _bound_value(body: ConvexBody, theta: float, rho: float):
    s = bound_sample(body, theta, rho)
    return s.ft_abs, None, {"body": s.body, "gamma": s.gamma, "diameter_ratio": s.diameter_ratio,
                            "dilation_ratio": s.dilation_ratio, "transform_ok": s.transform_ok,
                            "chord_ok": s.chord_ok, "dilation_ok": s.dilation_ok}


@experiment("bounds", help="CSV of a random (body, theta, rho) sweep over the zoo checking "
            "|FT| <= gamma/rho, gamma >= (S/L)/rho and the dilation bound 2 gamma^2/rho^2",
            columns=("body", "theta", "rho", "value", "gamma", "diameter_ratio",
                     "dilation_ratio", "transform_ok", "chord_ok", "dilation_ok"))
def cmd_bounds(config: ExperimentConfig, gate: bool = False) -> int:
    zoo = [parse_body_spec(spec) for spec in config.zoo.split(";") if spec.strip()]
    if not zoo:
        raise ConfigError("the bounds sweep needs at least one body in zoo")
    rng = np.random.Generator(np.random.Philox(config.seed))
    jobs = []
    for i in range(config.sweep):
        body = zoo[i % len(zoo)]
        L, S = body.diameters()
        lo, hi = 2.0 / S, max(256.0 / S, 4.0 * dilation_threshold(body))
        theta = float(rng.uniform(0.0, TWO_PI))
        rho = float(math.exp(rng.uniform(math.log(lo), math.log(hi))))
        jobs.append(({"theta": theta, "rho": rho}, (body, theta, rho)))
    rows = run_rows(_bound_value, jobs, config.workers)

    ok = _ok(rows)
    failed = len(rows) - len(ok)
    violations = {key: sum(1 for r in ok if not r.extra[key])
                  for key in ("transform_ok", "chord_ok", "dilation_ok")}
    ratios = [r.extra["dilation_ratio"] for r in ok if r.extra["dilation_ratio"] is not None]
    floor = min(ratios) if ratios else math.nan
    info("bounds sweep: %d cases, violations %s, dilation ratio floor %.4g over %d cases",
         len(rows), violations, floor, len(ratios))
    comments = [f"cases={len(rows)} failed={failed} seed={config.seed}",
                "violations " + " ".join(f"{k}={v}" for k, v in violations.items()),
                f"dilation_ratio_floor={floor!r} over {len(ratios)} cases"]
    columns = ("body", "theta", "rho", "value", "gamma", "diameter_ratio", "dilation_ratio",
               "transform_ok", "chord_ok", "dilation_ok")
    emit(rows_to_csv(rows, columns, comments, config.timing), config.output)
    if gate and (any(violations.values()) or failed or not floor > 0.0):
        raise AcceptanceError(f"bounds: violations {violations}, failed rows {failed}, "
                              f"dilation ratio floor {floor}")
    return 0
