"""Seeded Monte Carlo experiments over the intersection graph model.

Four experiment kinds share one discipline: every trial draws its own seed
from (master_seed, grid_index, trial_index) through a fixed hash, per-trial
results are integers or booleans collected by trial index, and aggregation
is commutative.  Reruns of the same spec therefore produce byte-identical
CSV and JSON outputs no matter how the trials were scheduled.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .analytics import (
    conditional_adjacency_prob,
    degree_pmf,
    q_approx,
    q_exact,
    solve_a,
    threshold_p,
    total_variation,
    zeta_bound,
)
from .model import ModelParams, is_connected, pair_adjacent, project, sample_assignment, vertex_substream

__all__ = [
    "EXPERIMENT_KINDS",
    "ExperimentSpec",
    "EstimateRecord",
    "DegreeDistRecord",
    "DegreeScalingRecord",
    "ExperimentResult",
    "derive_trial_seed",
    "resolve_m",
    "wilson_interval",
    "normal_interval",
    "sample_degree",
    "run_edge_prob",
    "run_connectivity_sweep",
    "run_degree_dist",
    "run_degree_scaling",
    "run_experiment",
    "spec_hash",
    "render_csv",
    "render_summary_json",
    "write_outputs",
]

EXPERIMENT_KINDS = ("edge-prob", "connectivity-sweep", "degree-dist", "degree-scaling")

# 97.5% standard normal quantile, fixed so intervals never depend on library versions
_Z95 = 1.959963984540054

_MASK64 = (1 << 64) - 1


def derive_trial_seed(master_seed: int, grid_index: int, trial_index: int) -> int:
    """Derive the 64-bit seed for one trial.

    blake2b over the little-endian packed (master_seed, grid_index,
    trial_index) triple, truncated to 8 bytes.  The hash is fixed by this
    contract; collisions across distinct triples are as unlikely as 64-bit
    hash collisions get.
    """
    payload = struct.pack(
        "<QQQ", master_seed & _MASK64, grid_index & _MASK64, trial_index & _MASK64
    )
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "little")


def resolve_m(m_rule: tuple, n: int) -> int:
    """Object count for a sweep at size n: equal-n, power-law, or fixed."""
    kind = m_rule[0]
    if kind == "equal-n":
        return n
    if kind == "power":
        return max(1, math.floor(float(n) ** m_rule[1]))
    if kind == "fixed":
        return m_rule[1]
    raise ValueError(f"unknown m rule {m_rule!r}")


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion.

    Always contains the point estimate successes/trials and stays inside
    [0, 1], unlike the normal approximation at the boundaries.
    """
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError(f"need 0 <= successes <= trials, got {successes}/{trials}")
    z2 = _Z95 * _Z95
    phat = successes / trials
    denom = 1.0 + z2 / trials
    center = phat + z2 / (2.0 * trials)
    half = _Z95 * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
    lower = max(0.0, (center - half) / denom)
    upper = min(1.0, (center + half) / denom)
    # at the boundary counts center and half agree exactly in real
    # arithmetic; sqrt rounding may land a few ulp to either side
    if successes == 0:
        lower = 0.0
    if successes == trials:
        upper = 1.0
    return (lower, upper)


def normal_interval(mean: float, std_error: float) -> tuple[float, float]:
    """95% normal interval mean +/- z * std_error, for mean-type estimates."""
    if std_error < 0.0:
        raise ValueError(f"std_error must be >= 0, got {std_error}")
    half = _Z95 * std_error
    return (mean - half, mean + half)


def _proportion_std_error(successes: int, trials: int) -> float:
    phat = successes / trials
    return math.sqrt(phat * (1.0 - phat) / trials)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _as_int(value, name: str, minimum: int | None = None) -> int:
    _require(
        isinstance(value, int) and not isinstance(value, bool),
        f"{name} must be an integer, got {value!r}",
    )
    if minimum is not None:
        _require(value >= minimum, f"{name} must be >= {minimum}, got {value}")
    return value


def _as_real(value, name: str) -> float:
    _require(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        f"{name} must be a real number, got {value!r}",
    )
    value = float(value)
    _require(math.isfinite(value), f"{name} must be finite, got {value}")
    return value


def _parse_m_rule(raw) -> tuple:
    if raw is None:
        return ("equal-n",)
    _require(isinstance(raw, dict), f"m_rule must be an object, got {raw!r}")
    kind = raw.get("kind")
    if kind == "equal-n":
        _require(set(raw) == {"kind"}, f"m_rule equal-n takes no extra keys, got {raw!r}")
        return ("equal-n",)
    if kind == "power":
        _require(set(raw) == {"kind", "beta"}, f"m_rule power needs exactly 'beta', got {raw!r}")
        beta = _as_real(raw["beta"], "m_rule.beta")
        _require(beta > 0.0, f"m_rule.beta must be > 0, got {beta}")
        return ("power", beta)
    if kind == "fixed":
        _require(set(raw) == {"kind", "m"}, f"m_rule fixed needs exactly 'm', got {raw!r}")
        return ("fixed", _as_int(raw["m"], "m_rule.m", minimum=1))
    raise ValueError(f"m_rule.kind must be 'equal-n', 'power', or 'fixed', got {kind!r}")


@dataclass(frozen=True)
class ExperimentSpec:
    """A validated experiment description.

    `points` carries explicit grid points for edge-prob ((m, p) pairs) and
    degree-dist ((n, m, p) triples); sweeps use the n_values x alphas product
    with m chosen by m_rule.  `c` is the rate constant for degree scaling.
    """

    kind: str
    trials: int
    master_seed: int
    points: tuple = ()
    n_values: tuple = ()
    alphas: tuple = ()
    m_rule: tuple = ("equal-n",)
    c: float | None = None

    def __post_init__(self) -> None:
        _require(self.kind in EXPERIMENT_KINDS, f"unknown experiment kind {self.kind!r}")
        _as_int(self.trials, "trials", minimum=1)
        _as_int(self.master_seed, "master_seed")
        if self.kind in ("edge-prob", "degree-dist"):
            _require(len(self.points) > 0, "empty parameter grid")
            width = 2 if self.kind == "edge-prob" else 3
            for point in self.points:
                _require(
                    len(point) == width, f"{self.kind} point must have {width} fields"
                )
                if width == 3:
                    _as_int(point[0], "n", minimum=1)
                _as_int(point[-2], "m", minimum=1)
                p = _as_real(point[-1], "p")
                _require(0.0 <= p <= 1.0, f"p must lie in [0, 1], got {p}")
        else:
            _require(len(self.n_values) > 0 and len(self.alphas) > 0, "empty parameter grid")
            for n in self.n_values:
                _as_int(n, "n", minimum=1)
            for alpha in self.alphas:
                _as_real(alpha, "alpha")
            resolve_m(self.m_rule, 1)
        if self.kind == "degree-scaling":
            _require(self.c is not None, "degree-scaling requires the rate constant c")
            c = _as_real(self.c, "c")
            _require(c > 0.0, f"c must be > 0, got {c}")
            for alpha in self.alphas:
                _require(
                    0.0 < alpha < 1.0,
                    f"degree scaling requires alpha in (0, 1) so that delta = 1 - alpha > 0, "
                    f"got alpha={alpha}",
                )

    @classmethod
    def from_dict(cls, payload: dict, default_seed: int | None = None) -> "ExperimentSpec":
        _require(isinstance(payload, dict), "experiment spec must be a JSON object")
        allowed = {"kind", "trials", "master_seed", "points", "n", "alpha", "m_rule", "c"}
        unknown = set(payload) - allowed
        _require(not unknown, f"unknown spec keys: {sorted(unknown)}")
        kind = payload.get("kind")
        _require(kind in EXPERIMENT_KINDS, f"unknown experiment kind {kind!r}")
        seed = payload.get("master_seed", default_seed)
        _require(seed is not None, "master_seed is required")
        kwargs = {
            "kind": kind,
            "trials": payload.get("trials"),
            "master_seed": seed,
        }
        if kind in ("edge-prob", "degree-dist"):
            raw_points = payload.get("points")
            _require(isinstance(raw_points, list), f"{kind} spec needs a 'points' list")
            points = []
            for entry in raw_points:
                _require(isinstance(entry, dict), f"grid point must be an object, got {entry!r}")
                keys = {"m", "p"} if kind == "edge-prob" else {"n", "m", "p"}
                _require(
                    set(entry) == keys,
                    f"grid point must have exactly keys {sorted(keys)}, got {sorted(entry)}",
                )
                if kind == "edge-prob":
                    points.append((entry["m"], float(entry["p"])))
                else:
                    points.append((entry["n"], entry["m"], float(entry["p"])))
            kwargs["points"] = tuple(points)
        else:
            raw_n = payload.get("n")
            raw_alpha = payload.get("alpha")
            _require(isinstance(raw_n, list), f"{kind} spec needs an 'n' list")
            _require(isinstance(raw_alpha, list), f"{kind} spec needs an 'alpha' list")
            kwargs["n_values"] = tuple(raw_n)
            kwargs["alphas"] = tuple(float(a) for a in raw_alpha)
            kwargs["m_rule"] = _parse_m_rule(payload.get("m_rule"))
        if kind == "degree-scaling":
            _require("c" in payload, "degree-scaling requires the rate constant c")
            kwargs["c"] = float(payload["c"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        out: dict = {
            "kind": self.kind,
            "trials": self.trials,
            "master_seed": self.master_seed,
        }
        if self.kind == "edge-prob":
            out["points"] = [{"m": m, "p": p} for m, p in self.points]
        elif self.kind == "degree-dist":
            out["points"] = [{"n": n, "m": m, "p": p} for n, m, p in self.points]
        else:
            out["n"] = list(self.n_values)
            out["alpha"] = list(self.alphas)
            rule = {"kind": self.m_rule[0]}
            if self.m_rule[0] == "power":
                rule["beta"] = self.m_rule[1]
            elif self.m_rule[0] == "fixed":
                rule["m"] = self.m_rule[1]
            out["m_rule"] = rule
        if self.kind == "degree-scaling":
            out["c"] = self.c
        return out


@dataclass(frozen=True)
class EstimateRecord:
    """One grid point's proportion estimate with its uncertainty."""

    grid_point: tuple[tuple[str, float | int], ...]
    estimate: float
    std_error: float
    ci95: tuple[float, float]
    trials: int
    master_seed: int
    extras: tuple[tuple[str, float | int], ...] = ()


@dataclass(frozen=True)
class DegreeDistRecord:
    """Empirical degree law of vertex 0 against both analytic models."""

    n: int
    m: int
    p: float
    trials: int
    master_seed: int
    empirical_pmf: tuple[float, ...]
    tv_exact_mixture: float
    tv_binomial_approx: float


@dataclass(frozen=True)
class DegreeScalingRecord:
    """Normalized-degree summary at one (n, alpha) grid point.

    ratios are X / n**delta with delta = 1 - alpha; the envelope is the pair
    of roots of a*log(a) - a + 1 = c, and chernoff_lower/chernoff_upper both
    carry the reference decay exp(-c * n**delta).
    """

    n: int
    m: int
    alpha: float
    delta: float
    c: float
    p: float
    trials: int
    master_seed: int
    ratio_mean: float
    ratio_min: float
    ratio_max: float
    ratio_q25: float
    ratio_median: float
    ratio_q75: float
    a_lower: float
    a_upper: float
    exceed_lower_freq: float
    exceed_upper_freq: float
    chernoff_lower: float
    chernoff_upper: float


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    records: tuple


def _map(map_fn, func, seeds):
    runner = map if map_fn is None else map_fn
    return list(runner(func, seeds))


def _trial_seeds(spec: ExperimentSpec, grid_index: int) -> list[int]:
    return [
        derive_trial_seed(spec.master_seed, grid_index, t) for t in range(spec.trials)
    ]


def run_edge_prob(spec: ExperimentSpec, map_fn=None) -> list[EstimateRecord]:
    """Estimate adjacency probability for two vertices at each (m, p) point.

    Each trial draws a fresh two-vertex attachment and tests whether the
    pair shares an object; the record carries q_exact, q_approx and the
    remainder bound for comparison.
    """
    _require(spec.kind == "edge-prob", f"spec kind is {spec.kind!r}, not edge-prob")
    records = []
    for grid_index, (m, p) in enumerate(spec.points):
        params = ModelParams(n=2, m=m, p=p)

        def one_trial(seed: int, params=params) -> bool:
            return pair_adjacent(sample_assignment(params, seed), 0, 1)

        hits = _map(map_fn, one_trial, _trial_seeds(spec, grid_index))
        successes = int(sum(hits))
        estimate = successes / spec.trials
        exact = q_exact(m, p)
        records.append(
            EstimateRecord(
                grid_point=(("m", m), ("p", p)),
                estimate=estimate,
                std_error=_proportion_std_error(successes, spec.trials),
                ci95=wilson_interval(successes, spec.trials),
                trials=spec.trials,
                master_seed=spec.master_seed,
                extras=(
                    ("q_exact", exact),
                    ("q_approx", q_approx(m, p)),
                    ("zeta_bound", zeta_bound(m, p)),
                    ("abs_error", abs(estimate - exact)),
                ),
            )
        )
    return records


def run_connectivity_sweep(spec: ExperimentSpec, map_fn=None) -> list[EstimateRecord]:
    """Estimate the probability of a connected sample along the p(alpha) curve.

    The analytic pairwise adjacency probability and the reference value
    n**(-alpha/2) ride along in the extras so the pairwise story can be read
    off the same report as the connectivity story.
    """
    _require(
        spec.kind == "connectivity-sweep", f"spec kind is {spec.kind!r}, not connectivity-sweep"
    )
    records = []
    grid = [(n, alpha) for n in spec.n_values for alpha in spec.alphas]
    for grid_index, (n, alpha) in enumerate(grid):
        m = resolve_m(spec.m_rule, n)
        p = threshold_p(alpha, m, n)
        params = ModelParams(n=n, m=m, p=p)

        def one_trial(seed: int, params=params) -> bool:
            return is_connected(project(sample_assignment(params, seed)))

        flags = _map(map_fn, one_trial, _trial_seeds(spec, grid_index))
        successes = int(sum(flags))
        records.append(
            EstimateRecord(
                grid_point=(("n", n), ("alpha", alpha)),
                estimate=successes / spec.trials,
                std_error=_proportion_std_error(successes, spec.trials),
                ci95=wilson_interval(successes, spec.trials),
                trials=spec.trials,
                master_seed=spec.master_seed,
                extras=(
                    ("m", m),
                    ("p", p),
                    ("q_exact", q_exact(m, p)),
                    ("pair_bound", float(n) ** (-alpha / 2.0)),
                ),
            )
        )
    return records


def sample_degree(n: int, m: int, p: float, seed: int) -> int:
    """Draw the degree of vertex 0 in one G(n, m, p) sample.

    Vertex 0's object set comes from its usual substream.  Conditioned on
    that set having size s, the other n-1 adjacency indicators are
    independent Bernoulli(1 - (1-p)^s), drawn here from reserved substream
    index n, so a full graph is never materialized.  The output distribution
    is exactly the projected-graph degree law.
    """
    params = ModelParams(n=n, m=m, p=p)
    u0 = vertex_substream(seed, 0).random(params.m)
    size = int(np.count_nonzero(u0 < params.p))
    if params.n == 1 or size == 0:
        return 0
    share = conditional_adjacency_prob(size, params.p)
    u = vertex_substream(seed, params.n).random(params.n - 1)
    return int(np.count_nonzero(u < share))


def run_degree_dist(spec: ExperimentSpec, map_fn=None) -> list[DegreeDistRecord]:
    """Compare the sampled degree law of vertex 0 against both analytic models."""
    _require(spec.kind == "degree-dist", f"spec kind is {spec.kind!r}, not degree-dist")
    records = []
    for grid_index, (n, m, p) in enumerate(spec.points):

        def one_trial(seed: int, n=n, m=m, p=p) -> int:
            return sample_degree(n, m, p, seed)

        degrees = _map(map_fn, one_trial, _trial_seeds(spec, grid_index))
        counts = np.bincount(np.asarray(degrees, dtype=np.int64), minlength=n)
        empirical = counts / spec.trials
        mixture = degree_pmf(n, m, p, "exact-mixture").pmf
        binomial = degree_pmf(n, m, p, "binomial-approx").pmf
        records.append(
            DegreeDistRecord(
                n=n,
                m=m,
                p=p,
                trials=spec.trials,
                master_seed=spec.master_seed,
                empirical_pmf=tuple(float(x) for x in empirical),
                tv_exact_mixture=total_variation(empirical, mixture),
                tv_binomial_approx=total_variation(empirical, binomial),
            )
        )
    return records


def run_degree_scaling(spec: ExperimentSpec, map_fn=None) -> list[DegreeScalingRecord]:
    """Summarize X / n**delta against the envelope roots at each (n, alpha) point.

    A finite-sample proxy: the asymptotic statements speak of limsup and
    liminf along n, while each record reports one n with exceedance
    frequencies and the reference decay exp(-c * n**delta) for context.
    """
    _require(
        spec.kind == "degree-scaling", f"spec kind is {spec.kind!r}, not degree-scaling"
    )
    records = []
    a_lower = solve_a(spec.c, "lower").a
    a_upper = solve_a(spec.c, "upper").a
    grid = [(n, alpha) for n in spec.n_values for alpha in spec.alphas]
    for grid_index, (n, alpha) in enumerate(grid):
        m = resolve_m(spec.m_rule, n)
        p = threshold_p(alpha, m, n)
        delta = 1.0 - alpha
        scale = float(n) ** delta

        def one_trial(seed: int, n=n, m=m, p=p) -> int:
            return sample_degree(n, m, p, seed)

        degrees = np.asarray(_map(map_fn, one_trial, _trial_seeds(spec, grid_index)), dtype=np.int64)
        ratios = np.sort(degrees) / scale
        chernoff = math.exp(-spec.c * scale)
        records.append(
            DegreeScalingRecord(
                n=n,
                m=m,
                alpha=alpha,
                delta=delta,
                c=spec.c,
                p=p,
                trials=spec.trials,
                master_seed=spec.master_seed,
                ratio_mean=float(int(degrees.sum()) / spec.trials / scale),
                ratio_min=float(ratios[0]),
                ratio_max=float(ratios[-1]),
                ratio_q25=float(np.quantile(ratios, 0.25)),
                ratio_median=float(np.quantile(ratios, 0.5)),
                ratio_q75=float(np.quantile(ratios, 0.75)),
                a_lower=a_lower,
                a_upper=a_upper,
                exceed_lower_freq=float(np.count_nonzero(ratios <= a_lower) / spec.trials),
                exceed_upper_freq=float(np.count_nonzero(ratios >= a_upper) / spec.trials),
                chernoff_lower=chernoff,
                chernoff_upper=chernoff,
            )
        )
    return records


_RUNNERS = {
    "edge-prob": run_edge_prob,
    "connectivity-sweep": run_connectivity_sweep,
    "degree-dist": run_degree_dist,
    "degree-scaling": run_degree_scaling,
}


def run_experiment(spec: ExperimentSpec, map_fn=None) -> ExperimentResult:
    """Run whichever experiment the spec describes."""
    records = _RUNNERS[spec.kind](spec, map_fn=map_fn)
    return ExperimentResult(spec=spec, records=tuple(records))


def spec_hash(spec: ExperimentSpec) -> str:
    """sha256 of the canonical JSON encoding of the experiment spec."""
    canonical = json.dumps(spec.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _cell(value) -> str:
    if isinstance(value, bool):
        raise TypeError("boolean has no CSV representation here")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        # shortest round-trip representation
        return repr(value)
    raise TypeError(f"unexpected cell type {type(value)!r}")


_ESTIMATE_COLUMNS = ("estimate", "std_error", "ci_low", "ci_high", "trials", "master_seed")

_SCALING_COLUMNS = (
    "n", "m", "alpha", "delta", "c", "p", "trials",
    "ratio_mean", "ratio_min", "ratio_q25", "ratio_median", "ratio_q75", "ratio_max",
    "a_lower", "a_upper",
    "exceed_lower_freq", "exceed_upper_freq",
    "chernoff_lower", "chernoff_upper",
    "master_seed",
)

_DIST_COLUMNS = ("n", "m", "p", "trials", "tv_exact_mixture", "tv_binomial_approx", "master_seed")


def _estimate_rows(records) -> tuple[list[str], list[list[str]]]:
    first = records[0]
    grid_names = [name for name, _ in first.grid_point]
    extra_names = [name for name, _ in first.extras]
    header = grid_names + list(_ESTIMATE_COLUMNS[:4]) + extra_names + ["trials", "master_seed"]
    rows = []
    for rec in records:
        cells = [value for _, value in rec.grid_point]
        cells += [rec.estimate, rec.std_error, rec.ci95[0], rec.ci95[1]]
        cells += [value for _, value in rec.extras]
        cells += [rec.trials, rec.master_seed]
        rows.append([_cell(v) for v in cells])
    return header, rows


def _scaling_rows(records) -> tuple[list[str], list[list[str]]]:
    rows = []
    for rec in records:
        rows.append([_cell(getattr(rec, name)) for name in _SCALING_COLUMNS])
    return list(_SCALING_COLUMNS), rows


def _dist_rows(records) -> tuple[list[str], list[list[str]]]:
    rows = []
    for rec in records:
        rows.append([_cell(getattr(rec, name)) for name in _DIST_COLUMNS])
    return list(_DIST_COLUMNS), rows


def render_csv(result: ExperimentResult) -> str:
    """Fixed-column CSV with provenance comment lines, stable across reruns."""
    spec = result.spec
    if spec.kind in ("edge-prob", "connectivity-sweep"):
        header, rows = _estimate_rows(result.records)
    elif spec.kind == "degree-dist":
        header, rows = _dist_rows(result.records)
    else:
        header, rows = _scaling_rows(result.records)
    lines = [
        f"# riglab {__version__}",
        f"# kind={spec.kind} master_seed={spec.master_seed} spec_sha256={spec_hash(spec)}",
        ",".join(header),
    ]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _record_dict(record) -> dict:
    if isinstance(record, EstimateRecord):
        out = dict(record.grid_point)
        out.update(
            estimate=record.estimate,
            std_error=record.std_error,
            ci_low=record.ci95[0],
            ci_high=record.ci95[1],
            trials=record.trials,
            master_seed=record.master_seed,
        )
        out.update(dict(record.extras))
        return out
    if isinstance(record, DegreeDistRecord):
        out = {name: getattr(record, name) for name in _DIST_COLUMNS}
        out["empirical_pmf"] = list(record.empirical_pmf)
        return out
    if isinstance(record, DegreeScalingRecord):
        return {name: getattr(record, name) for name in _SCALING_COLUMNS}
    raise TypeError(f"unexpected record type {type(record)!r}")


def render_summary_json(result: ExperimentResult) -> str:
    """JSON summary: tool version, spec echo, spec hash, and all records."""
    payload = {
        "tool": "riglab",
        "version": __version__,
        "kind": result.spec.kind,
        "master_seed": result.spec.master_seed,
        "spec": result.spec.to_dict(),
        "spec_sha256": spec_hash(result.spec),
        "records": [_record_dict(rec) for rec in result.records],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_outputs(result: ExperimentResult, csv_path, json_path) -> None:
    """Write the CSV and JSON reports for one experiment result."""
    with open(csv_path, "w") as fh:
        fh.write(render_csv(result))
    with open(json_path, "w") as fh:
        fh.write(render_summary_json(result))
