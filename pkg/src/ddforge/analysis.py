"""Suppression-order fitting, pulse-count economics and family comparisons.

An order scan evaluates the residual-coupling functionals of one schedule
family on a logarithmic duration grid and fits the log-log slope, which
estimates the suppression order directly.  Grid points (and bath seeds, when
an ensemble is requested) are independent work items; results aggregate in
grid order regardless of completion order.
"""

from __future__ import annotations

import csv
import datetime
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import highprec
from .bath import ModelSpec, alpha, build_model
from .effective import BranchAmbiguityError, error_functionals, sequence_effective
from .sequences import PulseSequence, build_sequence

FUNCTIONALS = ("E_flip", "E_dephase", "E_total")

CSV_COLUMNS = ("family", "param", "t", "alpha_t", "E_flip", "E_dephase", "E_total")


@dataclass(frozen=True)
class OrderFit:
    """Least-squares log-log slope of a residual functional versus duration.

    ``pairwise_orders`` holds the successive-point estimates
    log(E_{i+1}/E_i) / log(t_{i+1}/t_i), which converge to the fitted slope
    as the duration shrinks.  All fit fields are None when the functional is
    identically zero (nothing to suppress).
    """

    slope: float | None
    intercept: float | None
    r_squared: float | None
    pairwise_orders: tuple[float, ...]
    t_grid: tuple[float, ...]

    @property
    def defined(self) -> bool:
        return self.slope is not None


def default_t_grid(model_alpha: float, at_min: float = 1e-3, at_max: float = 1e-2, points: int = 8) -> np.ndarray:
    """Log-spaced durations covering alpha*t in [at_min, at_max]."""
    if not 0 < at_min < at_max:
        raise ValueError("need 0 < at_min < at_max")
    if points < 4:
        raise ValueError("need at least 4 grid points")
    if model_alpha <= 0:
        raise ValueError("model has zero coupling norm; no natural time scale")
    return np.geomspace(at_min / model_alpha, at_max / model_alpha, points)


def fit_order(t_grid, values) -> OrderFit:
    """Fit log E = slope * log t + intercept over the positive entries."""
    t_grid = tuple(float(t) for t in t_grid)
    values = [float(v) for v in values]
    if len(values) != len(t_grid):
        raise ValueError("values and t_grid lengths differ")
    if len(t_grid) < 4:
        raise ValueError("order fits need at least 4 grid points")
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be strictly increasing")
    pairs = [(t, v) for t, v in zip(t_grid, values) if v > 0.0]
    if len(pairs) < 2:
        return OrderFit(None, None, None, (), t_grid)
    log_t = np.log([t for t, _ in pairs])
    log_e = np.log([v for _, v in pairs])
    slope, intercept = np.polyfit(log_t, log_e, 1)
    predicted = slope * log_t + intercept
    ss_res = float(np.sum((log_e - predicted) ** 2))
    ss_tot = float(np.sum((log_e - log_e.mean()) ** 2))
    r_squared = 1.0 if ss_tot < 1e-30 else 1.0 - ss_res / ss_tot
    pairwise = tuple(
        math.log(v2 / v1) / math.log(t2 / t1)
        for (t1, v1), (t2, v2) in zip(pairs, pairs[1:])
    )
    return OrderFit(float(slope), float(intercept), float(r_squared), pairwise, t_grid)


def _family_param_string(family: dict) -> str:
    parts = [f"{k}={v}" for k, v in family.items() if k not in ("name", "axis")]
    return ",".join(parts)


def _sequence_factory(family_spec):
    if callable(family_spec):
        return family_spec
    params = dict(family_spec)
    name = params.pop("name")
    return lambda t: build_sequence(name, t, **params)


def evaluate_point(seq: PulseSequence, ops, precision: str = "double", dps: int = highprec.DEFAULT_DPS) -> dict:
    """All three residual functionals of one schedule under one model."""
    if precision == "double":
        return error_functionals(sequence_effective(seq, ops))
    if precision == "extended":
        return highprec.sequence_error_functionals(seq, ops, dps)
    raise ValueError(f"unknown precision {precision!r}")


def evaluate_scan(
    family_spec,
    model_spec: ModelSpec,
    t_grid,
    *,
    seeds=None,
    precision: str = "double",
    dps: int = highprec.DEFAULT_DPS,
    jobs: int = 1,
) -> list[dict]:
    """Residual functionals across a duration grid, one row per duration.

    With several seeds the functionals are averaged over the bath ensemble.
    Raises BranchAmbiguityError (tagged with the offending duration) when
    eigenphases leave the principal branch; as a guard, alpha * t_max must
    stay below 1.
    """
    factory = _sequence_factory(family_spec)
    seeds = [model_spec.seed] if seeds is None else list(seeds)
    models = []
    for seed in seeds:
        spec = ModelSpec(d=model_spec.d, seed=seed, preset=model_spec.preset, norm_targets=model_spec.norm_targets)
        models.append(build_model(spec))
    model_alpha = alpha(models[0])
    t_grid = [float(t) for t in t_grid]
    if model_alpha * max(t_grid) >= 1.0:
        raise BranchAmbiguityError(
            f"alpha * t_max = {model_alpha * max(t_grid):.3g} >= 1; shrink the duration grid",
            t=max(t_grid),
        )

    tasks = [(i, k) for i in range(len(t_grid)) for k in range(len(models))]

    def run(task):
        i, k = task
        seq = factory(t_grid[i])
        return task, evaluate_point(seq, models[k], precision, dps)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(run, tasks))
    else:
        results = dict(map(run, tasks))

    sample = factory(t_grid[0])
    rows = []
    for i, t in enumerate(t_grid):
        row = {
            "family": sample.family.get("name", sample.label),
            "param": _family_param_string(sample.family),
            "t": t,
            "alpha_t": model_alpha * t,
        }
        for key in FUNCTIONALS:
            row[key] = sum(results[(i, k)][key] for k in range(len(models))) / len(models)
        rows.append(row)
    return rows


def order_scan(
    family_spec,
    model_spec: ModelSpec,
    t_grid,
    functional: str = "E_flip",
    *,
    seeds=None,
    precision: str = "double",
    dps: int = highprec.DEFAULT_DPS,
    jobs: int = 1,
) -> OrderFit:
    """Fit the suppression order of one functional for one schedule family."""
    if functional not in FUNCTIONALS:
        raise ValueError(f"functional must be one of {FUNCTIONALS}")
    rows = evaluate_scan(
        family_spec, model_spec, t_grid, seeds=seeds, precision=precision, dps=dps, jobs=jobs
    )
    return fit_order([r["t"] for r in rows], [r[functional] for r in rows])


# ---------------------------------------------------------------------------
# Pulse-count economics
# ---------------------------------------------------------------------------

def count_compare(m_max: int) -> list[dict]:
    """Pulse counts of the three high-order constructions at matched order.

    For suppression order m+1 the full concatenation needs nominally 4^m
    pulses, the concatenated-Uhrig construction m 2^m + a_m (level m over
    m-pulse blocks), and the polynomial-timed double layer m(m+1)^3 + m.
    """
    from .sequences import cdd_count_estimate, cudd_count, udd2_count

    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    rows = []
    for m in range(1, m_max + 1):
        rows.append(
            {
                "m": m,
                "claimed_order": m + 1,
                "cdd": cdd_count_estimate(m),
                "cudd": cudd_count(m, m),
                "udd2": udd2_count(m),
            }
        )
    return rows


def crossover(n_max: int = 40) -> int:
    """Smallest n with (n+1)^3 <= 2^n; the double layer beats concatenation beyond it."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    for n in range(1, n_max + 1):
        if (n + 1) ** 3 <= 2**n:
            return n
    raise ValueError(f"no crossover up to n_max={n_max}")


# ---------------------------------------------------------------------------
# Diagnostics and serialization
# ---------------------------------------------------------------------------

def dephasing_bound_constant(seq: PulseSequence, ops) -> float:
    """Observed ratio |a_z_eff| / max(|A_z|, t |A_x| |A_y|) (reported, not asserted)."""
    from .bath import spectral_norm
    from .effective import _norm

    eff = sequence_effective(seq, ops)
    bound = max(spectral_norm(ops.az), seq.total_duration * spectral_norm(ops.ax) * spectral_norm(ops.ay))
    if bound == 0.0:
        return math.nan
    return _norm(eff.az) / bound


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_scan_csv(rows: list[dict], stream: io.TextIOBase, meta: bool = True) -> None:
    """Write scan rows as CSV ('.' decimal, 17 significant digits).

    The optional meta line carries a timestamp and is the only
    non-reproducible output; disable it for byte-identical reruns.
    """
    if meta:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        stream.write(f"# generated {stamp}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def write_counts_csv(rows: list[dict], stream: io.TextIOBase, meta: bool = True) -> None:
    if meta:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        stream.write(f"# generated {stamp}\n")
    writer = csv.writer(stream, lineterminator="\n")
    columns = ("m", "claimed_order", "cdd", "cudd", "udd2")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])


def fit_to_dict(fit: OrderFit) -> dict:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r2": fit.r_squared,
        "pairwise": list(fit.pairwise_orders),
    }
