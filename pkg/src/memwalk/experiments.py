"""Experiment specs and the four runnable pipelines behind the CLI.

A spec is a plain JSON document; resolution turns it into live objects
(host, partition, coin shift, coin matrix, initial state) and fails fast on
anything malformed, before any output file is created.  All outputs are
deterministic: rerunning the same resolved spec reproduces every byte.

Config schema (simulate):

    {
      "graph": {"family": "line" | "cycle", "window": odd int | null},
      "memory_depth": 1,
      "partition": {"kind": "directional" | "reflect_transmit" | "random"
                            | "random_dicycle", "seed": int | null,
                    "resample": "never" | "per_step"},
      "coin_shift": {"kind": "recycled" | "carried" | "table",
                     "entries": [[vertex, coin_in, coin_out], ...]},
      "coin": {"kind": "hadamard" | "matrix", "rows": [[[re, im], ...], ...]},
      "initial_state": {"preset": "origin-balanced" | "equivalence"}
                       | {"terms": [{"path": [...], "coin": +-1,
                                     "amplitude": [re, im]}, ...]},
      "t_max": int,
      "outputs": ["distribution", "variance", "occrate", "origin-series",
                  "scaling-fit"],
      "seed": int | null
    }

Sweep configs wrap a template: {"template": {...}, "classes": [...],
"seeds": [...]}.  Walk classes pair a partition kind with a coin-shift kind
under the name "<partition>+<coin_shift>".

Random partitions come in two modes.  "never" (default) samples one
partition from the seed and keeps it for the whole run; the walker then sits
in a frozen random environment, which pins it near the origin and makes the
position variance level off instead of growing.  "per_step" draws a fresh
partition before every step, which is the reading that reproduces the
linear variance growth the diffusive walk classes are defined by; the sweep
presets use it for the two random-partition classes driven by the recycled
coin shift.  Carried-coin classes always keep their partition fixed: their
walk census and ballistic behaviour only exist for a frozen partition.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .coin_shift import (
    CoinShift,
    carried_coin_shift,
    enumerate_coin_shifts,
    recycled_coin_shift,
)
from .constants import (
    AMPLITUDE_ATOL,
    BALLISTIC_RATIO_RANGE,
    DIFFUSIVE_RATIO_RANGE,
    EXACT_DISTRIBUTION_ATOL,
    LOCALIZATION_WINDOW,
    ORACLE_DISTRIBUTION_ATOL,
    UNITARY_ATOL,
)
from .engine import (
    WalkState,
    _window_check,
    balanced_origin_terms,
    build_shift_operator,
    coin_step,
    equivalence_initial_terms,
    evolve,
    hadamard_coin,
    recycled_coin_walk,
    reflect_transmit_walk,
    shift_step,
    state_from_terms,
)
from .errors import NumericalCheckError, ValidationError
from .graphs import (
    RegularDigraph,
    iterate_line_digraph,
    make_bidirected_cycle,
    minimal_window,
)
from .partitions import (
    Partition,
    coin_index,
    named_partition,
    random_dicycle_factorization,
    random_partition,
    reflect_transmit_partition,
)

__all__ = [
    "ANNEALED_CLASSES",
    "ExperimentSpec",
    "WALK_CLASSES",
    "enumerate_report",
    "equivalence_report",
    "resolve_spec",
    "run_enumerate",
    "run_equivalence",
    "run_history",
    "run_simulate",
    "run_sweep",
]

ALL_OUTPUTS = ("distribution", "variance", "occrate", "origin-series", "scaling-fit")

#: The six walk classes compared by the statistics sweep.
WALK_CLASSES = (
    "directional+recycled",
    "reflect_transmit+recycled",
    "reflect_transmit+carried",
    "random+recycled",
    "random_dicycle+recycled",
    "random_dicycle+carried",
)

RANDOM_PARTITION_KINDS = ("random", "random_dicycle")

#: Walk classes whose sweeps redraw the partition before every step.
ANNEALED_CLASSES = ("random+recycled", "random_dicycle+recycled")


@dataclass
class ExperimentSpec:
    graph_family: str = "line"
    window: int | None = None
    memory_depth: int = 1
    partition_kind: str = "reflect_transmit"
    partition_seed: int | None = None
    partition_resample: str = "never"
    coin_shift_kind: str = "carried"
    coin_shift_entries: list | None = None
    coin_kind: str = "hadamard"
    coin_rows: list | None = None
    initial_preset: str | None = "origin-balanced"
    initial_terms: list | None = None
    t_max: int = 100
    outputs: tuple[str, ...] = ALL_OUTPUTS
    seed: int | None = None

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ExperimentSpec":
        if not isinstance(doc, dict):
            raise ValidationError("spec must be a JSON object")
        known = {
            "graph",
            "memory_depth",
            "partition",
            "coin_shift",
            "coin",
            "initial_state",
            "t_max",
            "outputs",
            "seed",
        }
        unknown = set(doc) - known
        if unknown:
            raise ValidationError(f"unknown spec fields: {sorted(unknown)}")

        def section(name: str, allowed: set[str]) -> dict:
            sub = doc.get(name, {})
            if not isinstance(sub, dict):
                raise ValidationError(f"spec field {name!r} must be an object")
            bad = set(sub) - allowed
            if bad:
                raise ValidationError(f"unknown {name} fields: {sorted(bad)}")
            return sub

        graph = section("graph", {"family", "window"})
        partition = section("partition", {"kind", "seed", "resample"})
        coin_shift = section("coin_shift", {"kind", "entries"})
        coin = section("coin", {"kind", "rows"})
        initial = section("initial_state", {"preset", "terms"})
        spec = cls(
            graph_family=graph.get("family", "line"),
            window=graph.get("window"),
            memory_depth=doc.get("memory_depth", 1),
            partition_kind=partition.get("kind", "reflect_transmit"),
            partition_seed=partition.get("seed"),
            partition_resample=partition.get("resample", "never"),
            coin_shift_kind=coin_shift.get("kind", "carried"),
            coin_shift_entries=coin_shift.get("entries"),
            coin_kind=coin.get("kind", "hadamard"),
            coin_rows=coin.get("rows"),
            initial_preset=initial.get("preset") if "terms" not in initial else None,
            initial_terms=initial.get("terms"),
            t_max=doc.get("t_max", 100),
            outputs=tuple(doc.get("outputs", ALL_OUTPUTS)),
            seed=doc.get("seed"),
        )
        if spec.initial_preset is None and spec.initial_terms is None:
            spec.initial_preset = "origin-balanced"
        return spec

    def to_json_dict(self) -> dict:
        initial: dict = (
            {"preset": self.initial_preset}
            if self.initial_terms is None
            else {"terms": self.initial_terms}
        )
        return {
            "graph": {"family": self.graph_family, "window": self.window},
            "memory_depth": self.memory_depth,
            "partition": {
                "kind": self.partition_kind,
                "seed": self.partition_seed,
                "resample": self.partition_resample,
            },
            "coin_shift": {
                "kind": self.coin_shift_kind,
                **(
                    {"entries": self.coin_shift_entries}
                    if self.coin_shift_entries is not None
                    else {}
                ),
            },
            "coin": {
                "kind": self.coin_kind,
                **({"rows": self.coin_rows} if self.coin_rows is not None else {}),
            },
            "initial_state": initial,
            "t_max": self.t_max,
            "outputs": list(self.outputs),
            "seed": self.seed,
        }


@dataclass
class ResolvedExperiment:
    spec: ExperimentSpec
    host: RegularDigraph
    partition: Partition
    gc: CoinShift
    coin: np.ndarray
    initial: WalkState
    enforce_window: bool


def _step_seeds(master: int, t_max: int) -> list[int]:
    state = np.random.SeedSequence(master).generate_state(max(t_max, 1), dtype=np.uint64)
    return [int(s) for s in state]


def _sample_partition(kind: str, host: RegularDigraph, seed: int) -> Partition:
    if kind == "random":
        return random_partition(host, seed)
    return random_dicycle_factorization(host, seed)


def _resolve_coin(spec: ExperimentSpec) -> np.ndarray:
    if spec.coin_kind == "hadamard":
        return hadamard_coin()
    if spec.coin_kind == "matrix":
        if not spec.coin_rows:
            raise ValidationError("coin kind 'matrix' needs rows")
        rows = [[complex(re, im) for re, im in row] for row in spec.coin_rows]
        return np.array(rows, dtype=np.complex128)
    raise ValidationError(f"unknown coin kind {spec.coin_kind!r}")


def _resolve_partition(spec: ExperimentSpec, host: RegularDigraph) -> Partition:
    kind = spec.partition_kind
    if kind in ("directional", "reflect_transmit"):
        return named_partition(host, kind)
    seed = spec.partition_seed if spec.partition_seed is not None else spec.seed
    if seed is None:
        raise ValidationError(f"partition kind {kind!r} needs a seed")
    if kind == "random":
        return random_partition(host, seed)
    if kind == "random_dicycle":
        return random_dicycle_factorization(host, seed)
    raise ValidationError(f"unknown partition kind {kind!r}")


def _resolve_coin_shift(spec: ExperimentSpec, p: Partition) -> CoinShift:
    kind = spec.coin_shift_kind
    if kind == "recycled":
        return recycled_coin_shift(p)
    if kind == "carried":
        return carried_coin_shift(p)
    if kind == "table":
        if not spec.coin_shift_entries:
            raise ValidationError("coin shift kind 'table' needs entries")
        m = p.host.degree
        table = np.full((p.host.n_vertices, m), -1, dtype=np.int64)
        for vertex, c_in, c_out in spec.coin_shift_entries:
            table[int(vertex), coin_index(c_in, m)] = coin_index(c_out, m)
        if (table < 0).any():
            raise ValidationError("coin shift table is incomplete")
        return CoinShift(p.host, table, name="table")
    raise ValidationError(f"unknown coin shift kind {kind!r}")


def _resolve_initial(spec: ExperimentSpec, host: RegularDigraph) -> WalkState:
    if spec.initial_terms is not None:
        terms = []
        for item in spec.initial_terms:
            re, im = item["amplitude"]
            terms.append((tuple(item["path"]), item["coin"], complex(re, im)))
        return state_from_terms(host, terms)
    if spec.initial_preset == "origin-balanced":
        return state_from_terms(host, balanced_origin_terms(host))
    if spec.initial_preset == "equivalence":
        return state_from_terms(host, equivalence_initial_terms(host))
    raise ValidationError(f"unknown initial-state preset {spec.initial_preset!r}")


def resolve_spec(spec: ExperimentSpec) -> ResolvedExperiment:
    if spec.t_max < 0:
        raise ValidationError(f"t_max must be >= 0, got {spec.t_max}")
    if spec.memory_depth < 1:
        raise ValidationError(f"memory_depth must be >= 1, got {spec.memory_depth}")
    unknown = set(spec.outputs) - set(ALL_OUTPUTS)
    if unknown:
        raise ValidationError(f"unknown outputs: {sorted(unknown)}")
    if "scaling-fit" in spec.outputs and spec.t_max < 40:
        raise ValidationError("scaling-fit needs t_max >= 40 (series too short)")
    if spec.partition_resample not in ("never", "per_step"):
        raise ValidationError(
            f"partition resample must be 'never' or 'per_step',"
            f" got {spec.partition_resample!r}"
        )
    if (
        spec.partition_resample == "per_step"
        and spec.partition_kind not in RANDOM_PARTITION_KINDS
    ):
        raise ValidationError(
            f"per-step resampling needs a random partition kind,"
            f" got {spec.partition_kind!r}"
        )

    if spec.graph_family == "line":
        window = (
            spec.window
            if spec.window is not None
            else minimal_window(spec.t_max, spec.memory_depth)
        )
        if window % 2 == 0:
            raise ValidationError(f"line windows must be odd, got {window}")
        enforce = True
    elif spec.graph_family == "cycle":
        if spec.window is None:
            raise ValidationError("cycle graphs need an explicit window")
        window = spec.window
        enforce = False
    else:
        raise ValidationError(f"unknown graph family {spec.graph_family!r}")
    spec.window = window

    host = iterate_line_digraph(make_bidirected_cycle(window), spec.memory_depth)
    if spec.partition_resample == "per_step":
        # Resolve (and validate against) the first step's sample.
        partition = _sample_partition(
            spec.partition_kind, host, _step_seeds(_master_seed(spec), spec.t_max)[0]
        )
    else:
        partition = _resolve_partition(spec, host)
    gc = _resolve_coin_shift(spec, partition)
    coin = _resolve_coin(spec)
    initial = _resolve_initial(spec, host)
    return ResolvedExperiment(spec, host, partition, gc, coin, initial, enforce)


def _master_seed(spec: ExperimentSpec) -> int:
    seed = spec.partition_seed if spec.partition_seed is not None else spec.seed
    if seed is None:
        raise ValidationError(
            f"partition kind {spec.partition_kind!r} needs a seed"
        )
    return seed


def _evolve_annealed(resolved: ResolvedExperiment) -> list[WalkState]:
    """Coin-then-shift evolution with a fresh seeded partition every step."""
    spec = resolved.spec
    host = resolved.host
    if resolved.enforce_window:
        _window_check(host, resolved.initial, spec.t_max)
    seeds = _step_seeds(_master_seed(spec), spec.t_max)

    def build_gc(p: Partition) -> CoinShift:
        if spec.coin_shift_kind == "recycled":
            return recycled_coin_shift(p)
        if spec.coin_shift_kind == "carried":
            return carried_coin_shift(p)
        return resolved.gc  # fixed table, revalidated per sample below

    history = [resolved.initial]
    state = resolved.initial
    for t in range(1, spec.t_max + 1):
        p = _sample_partition(spec.partition_kind, host, seeds[t - 1])
        op = build_shift_operator(p, build_gc(p))
        state = shift_step(coin_step(state, resolved.coin), op)
        drift = abs(state.norm_squared() - 1.0)
        if drift > UNITARY_ATOL:
            raise NumericalCheckError(
                f"norm drift {drift:.3e} at t={state.time} exceeds {UNITARY_ATOL}"
            )
        history.append(state)
    return history


def run_history(resolved: ResolvedExperiment) -> list[WalkState]:
    """States for t = 0..t_max under the spec's partition mode."""
    if resolved.spec.partition_resample == "per_step":
        return _evolve_annealed(resolved)
    return evolve(
        resolved.partition,
        resolved.gc,
        resolved.coin,
        resolved.initial,
        resolved.spec.t_max,
        enforce_window=resolved.enforce_window,
    )


# -- output writing ----------------------------------------------------------------


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _write_distribution_csv(path: Path, dists: list[analysis.PositionDistribution]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x", "p"])
        for d in dists:
            for x, p in zip(d.positions, d.probs):
                writer.writerow([d.time, int(x), repr(float(p))])


def _series_summary(
    dists: list[analysis.PositionDistribution], outputs: tuple[str, ...]
) -> dict:
    times = [d.time for d in dists]
    series: dict = {"t": times}
    if "variance" in outputs:
        series["variance"] = [analysis.variance(d) for d in dists]
    if "occrate" in outputs:
        series["occupancy_rate"] = [
            analysis.occupancy_rate(d, 2 * d.time + 1) for d in dists
        ]
    if "origin-series" in outputs:
        series["origin_probability"] = [float(d.prob(0)) for d in dists]
    return series


def _fit_summary(dists: list[analysis.PositionDistribution], t_max: int) -> dict:
    t1 = max(20, t_max // 4)
    times = np.array([d.time for d in dists if t1 <= d.time <= t_max])
    variances = np.array([analysis.variance(d) for d in dists if t1 <= d.time <= t_max])
    fit = analysis.classify_scaling(times, variances)
    return {
        "t_range": [int(times.min()), int(times.max())],
        "k2": fit.k2,
        "k1": fit.k1,
        "k0_sq": fit.k0_sq,
        "residual": fit.residual,
        "verdict": fit.verdict,
    }


def run_simulate(spec: ExperimentSpec, out_dir: str | Path) -> dict:
    """Evolve one spec and write distributions.csv plus summary.json."""
    resolved = resolve_spec(spec)
    history = run_history(resolved)
    dists = analysis.marginal_history(history)

    summary = {"spec": spec.to_json_dict(), "series": _series_summary(dists, spec.outputs)}
    if "scaling-fit" in spec.outputs:
        summary["scaling_fit"] = _fit_summary(dists, spec.t_max)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if "distribution" in spec.outputs:
        _write_distribution_csv(out / "distributions.csv", dists)
    _write_json(out / "summary.json", summary)
    return summary


# -- sweep -------------------------------------------------------------------------


def _class_spec(template: ExperimentSpec, walk_class: str, seed: int) -> ExperimentSpec:
    try:
        partition_kind, shift_kind = walk_class.split("+")
    except ValueError:
        raise ValidationError(f"bad walk class {walk_class!r}") from None
    if walk_class not in WALK_CLASSES:
        raise ValidationError(f"unknown walk class {walk_class!r}")
    doc = template.to_json_dict()
    doc["partition"] = {
        "kind": partition_kind,
        "seed": seed if partition_kind in RANDOM_PARTITION_KINDS else None,
        "resample": "per_step" if walk_class in ANNEALED_CLASSES else "never",
    }
    doc["coin_shift"] = {"kind": shift_kind}
    return ExperimentSpec.from_json_dict(doc)


def _sweep_one(args: tuple[ExperimentSpec, str, int]) -> tuple[str, int, dict]:
    template, walk_class, seed = args
    spec = _class_spec(template, walk_class, seed)
    resolved = resolve_spec(spec)
    history = run_history(resolved)
    dists = analysis.marginal_history(history)
    return (
        walk_class,
        seed,
        {
            "variance": [analysis.variance(d) for d in dists],
            "occupancy_rate": [
                analysis.occupancy_rate(d, 2 * d.time + 1) for d in dists
            ],
            "origin_probability": [float(d.prob(0)) for d in dists],
        },
    )


def _ratio_verdict(ratio: float) -> str:
    lo, hi = BALLISTIC_RATIO_RANGE
    if lo <= ratio <= hi:
        return "ballistic"
    lo, hi = DIFFUSIVE_RATIO_RANGE
    if lo <= ratio <= hi:
        return "diffusive"
    return "indeterminate"


def run_sweep(
    template: ExperimentSpec,
    classes: list[str],
    seeds: list[int],
    out_dir: str | Path,
    workers: int = 1,
) -> dict:
    """Run each walk class across seeds; write per-class and comparison tables."""
    if not classes:
        raise ValidationError("sweep needs at least one walk class")
    if not seeds:
        raise ValidationError("sweep needs at least one seed")
    for walk_class in classes:
        if walk_class not in WALK_CLASSES:
            raise ValidationError(f"unknown walk class {walk_class!r}")
    # Validate the template (and every class variant) before running anything.
    for walk_class in classes:
        resolve_spec(_class_spec(template, walk_class, seeds[0]))

    jobs = [(template, c, s) for c in classes for s in seeds]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]

    by_class: dict[str, dict[int, dict]] = {c: {} for c in classes}
    for walk_class, seed, series in results:
        by_class[walk_class][seed] = series

    t_max = template.t_max
    times = list(range(t_max + 1))
    checkpoints = [t for t in (50, 100, 200) if t <= t_max]
    class_reports = {}
    rows = []
    for walk_class in classes:
        per_seed = by_class[walk_class]
        var = np.mean([per_seed[s]["variance"] for s in seeds], axis=0)
        occ = np.mean([per_seed[s]["occupancy_rate"] for s in seeds], axis=0)
        origin = np.mean([per_seed[s]["origin_probability"] for s in seeds], axis=0)
        ratio = float(var[t_max] / var[t_max // 2]) if var[t_max // 2] > 0 else float("nan")
        t1 = max(20, t_max // 4)
        if t_max >= 2 * t1:
            fit_verdict = analysis.classify_scaling(
                np.arange(t1, t_max + 1), var[t1 : t_max + 1]
            ).verdict
        else:
            fit_verdict = None  # horizon too short for a stable fit
        lo, hi = LOCALIZATION_WINDOW
        origin_late = [
            origin[t] for t in times if lo <= t <= min(hi, t_max) and t % 2 == 0
        ]
        report = {
            "seeds": list(seeds),
            "mean_variance": [float(v) for v in var],
            "mean_occupancy_rate": [float(v) for v in occ],
            "mean_origin_probability": [float(v) for v in origin],
            "variance_ratio": ratio,
            "ratio_verdict": _ratio_verdict(ratio),
            "fit_verdict": fit_verdict,
            "occupancy_at": {str(t): float(occ[t]) for t in checkpoints},
            "origin_late_average": (
                float(np.mean(origin_late)) if origin_late else None
            ),
        }
        class_reports[walk_class] = report
        rows.append(
            [
                walk_class,
                len(seeds),
                repr(ratio),
                report["ratio_verdict"],
                report["fit_verdict"] or "",
            ]
            + [repr(float(occ[t])) for t in checkpoints]
            + [
                repr(report["origin_late_average"])
                if report["origin_late_average"] is not None
                else ""
            ]
        )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(
        out / "sweep_summary.json",
        {"template": template.to_json_dict(), "classes": class_reports},
    )
    with (out / "comparison.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["class", "n_seeds", "variance_ratio", "ratio_verdict", "fit_verdict"]
            + [f"occupancy_t{t}" for t in checkpoints]
            + ["origin_late_average"]
        )
        writer.writerows(rows)
    return {"template": template.to_json_dict(), "classes": class_reports}


# -- equivalence pipeline ------------------------------------------------------------


def equivalence_report(
    t_max: int = 100,
    oracle_t_max: int = 50,
    initial_beta: analysis.BetaField | None = None,
) -> dict:
    """Cross-check the engine against every independent oracle.

    Field pipeline: evolve the reflect/transmit amplitude field, check its
    linear constraints, map it onto the memoryless walk and compare against
    a direct simulation, entrywise and in distribution.  The engine runs the
    same walk; its amplitudes must match the field exactly.  Then the two
    position-and-memory oracles are compared against engine marginals.
    """
    window = minimal_window(t_max, 1)
    beta = initial_beta if initial_beta is not None else analysis.equivalence_initial_beta(window)
    if beta.window != window:
        raise ValidationError(f"initial field window {beta.window} != {window}")

    host = iterate_line_digraph(make_bidirected_cycle(window), 1)
    partition = reflect_transmit_partition(host)
    gc = carried_coin_shift(partition)

    constraint_max = analysis.check_beta_constraint(beta)
    applicable = constraint_max <= UNITARY_ATOL

    # Engine runs the same walk from the same four-amplitude start.
    engine_states = evolve(
        partition,
        gc,
        hadamard_coin(),
        state_from_terms(host, equivalence_initial_terms(host)),
        t_max,
    )

    alpha = analysis.qwom_initial_alpha(window)
    alpha_diff_max = 0.0
    tv_max = 0.0
    engine_field_diff_max = 0.0
    fields = [beta]
    for t in range(t_max + 1):
        if t > 0:
            beta = analysis.beta_recurrence_step(beta)
            alpha = analysis.qwom_step(alpha)
            fields.append(beta)
        constraint_max = max(constraint_max, analysis.check_beta_constraint(beta))
        engine_field_diff_max = max(
            engine_field_diff_max,
            float(
                np.abs(
                    analysis.beta_from_walk_state(engine_states[t]).amps - beta.amps
                ).max()
            ),
        )
        if applicable:
            rebuilt = analysis.alpha_from_beta(beta)
            alpha_diff_max = max(
                alpha_diff_max, float(np.abs(rebuilt.amps - alpha.amps).max())
            )
            tv_max = max(
                tv_max,
                analysis.total_variation(
                    analysis.beta_distribution(beta), analysis.alpha_distribution(alpha)
                ),
            )

    # Position-and-memory oracles against the engine, one memory register.
    oracle_window = minimal_window(oracle_t_max, 2)
    oracle_report = {}
    for depth, name in ((1, "recycled_d1"), (2, "recycled_d2")):
        o_host = iterate_line_digraph(make_bidirected_cycle(oracle_window), depth)
        o_partition = named_partition(o_host, "directional")
        o_gc = recycled_coin_shift(o_partition)
        terms, oracle_terms = _paired_origin_state(depth, seed=20260819 + depth)
        states = evolve(
            o_partition, o_gc, hadamard_coin(), state_from_terms(o_host, terms), oracle_t_max
        )
        oracle = recycled_coin_walk(
            depth, hadamard_coin(), oracle_terms, oracle_t_max, oracle_window
        )
        diff = max(
            analysis.max_distribution_difference(
                analysis.position_marginal(s),
                analysis.PositionDistribution(
                    analysis.position_marginal(s).positions, oracle[t], t
                ),
            )
            for t, s in enumerate(states)
        )
        oracle_report[name] = diff

    rt_host = iterate_line_digraph(make_bidirected_cycle(oracle_window), 1)
    rt_partition = reflect_transmit_partition(rt_host)
    rt_gc = carried_coin_shift(rt_partition)
    terms, rt_terms = _paired_reflect_transmit_state(seed=20260819)
    states = evolve(
        rt_partition, rt_gc, hadamard_coin(), state_from_terms(rt_host, terms), oracle_t_max
    )
    oracle = reflect_transmit_walk(hadamard_coin(), rt_terms, oracle_t_max, oracle_window)
    oracle_report["reflect_transmit_d1"] = max(
        analysis.max_distribution_difference(
            analysis.position_marginal(s),
            analysis.PositionDistribution(
                analysis.position_marginal(s).positions, oracle[t], t
            ),
        )
        for t, s in enumerate(states)
    )

    return {
        "window": window,
        "t_max": t_max,
        "applicable": bool(applicable),
        "constraint_residual_max": constraint_max,
        "engine_field_diff_max": engine_field_diff_max,
        "alpha_reconstruction_diff_max": alpha_diff_max if applicable else None,
        "distribution_tv_max": tv_max if applicable else None,
        "oracle_distribution_diff_max": oracle_report,
        "passed": bool(
            applicable
            and constraint_max < UNITARY_ATOL
            and engine_field_diff_max < UNITARY_ATOL
            and alpha_diff_max < AMPLITUDE_ATOL
            and tv_max < ORACLE_DISTRIBUTION_ATOL
            and all(v < EXACT_DISTRIBUTION_ATOL for v in oracle_report.values())
        ),
    }


def _paired_origin_state(depth: int, seed: int):
    """A seeded random origin state in both engine and recycled-oracle bases."""
    rng = np.random.default_rng(seed)
    combos = [
        tuple(1 if b == 0 else -1 for b in np.unravel_index(i, (2,) * (depth + 1)))
        for i in range(2 ** (depth + 1))
    ]
    amps = rng.normal(size=len(combos)) + 1j * rng.normal(size=len(combos))
    amps /= np.linalg.norm(amps)
    terms = []
    oracle_terms = []
    for regs, amp in zip(combos, amps):
        steps, coin = regs[:depth], regs[depth]
        path = [0]
        for s in steps:
            path.append(path[-1] - s)
        path = tuple(reversed(path))
        terms.append((path, coin, complex(amp)))
        oracle_terms.append((0, regs, complex(amp)))
    return terms, oracle_terms


def _paired_reflect_transmit_state(seed: int):
    rng = np.random.default_rng(seed)
    combos = [(0, -1, 1), (0, -1, -1), (0, 1, 1), (0, 1, -1)]
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    amps /= np.linalg.norm(amps)
    terms = []
    oracle_terms = []
    for (x0, x1, coin), amp in zip(combos, amps):
        terms.append(((x1, x0), coin, complex(amp)))
        oracle_terms.append((x0, x1, coin, complex(amp)))
    return terms, oracle_terms


def run_equivalence(out_dir: str | Path, t_max: int = 100) -> dict:
    report = equivalence_report(t_max=t_max)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "equivalence.json", report)
    if not report["passed"]:
        raise NumericalCheckError("equivalence pipeline failed; see equivalence.json")
    return report


# -- enumeration pipeline --------------------------------------------------------------


def enumerate_report(
    cycle_size: int = 3, seeds: list[int] | None = None, t_max: int = 30
) -> dict:
    """Valid coin-shift counting plus the distinct-dicycle-walk census."""
    seeds = list(seeds) if seeds is not None else []
    host = iterate_line_digraph(make_bidirected_cycle(cycle_size), 1)
    partition = reflect_transmit_partition(host)
    shifts = enumerate_coin_shifts(partition)
    report: dict = {
        "gc_enumeration": {
            "cycle_size": cycle_size,
            "host_vertices": host.n_vertices,
            "count": len(shifts),
            "expected_count": 2**host.n_vertices,
        }
    }
    if seeds:
        walk_host = iterate_line_digraph(
            make_bidirected_cycle(minimal_window(t_max, 1)), 1
        )
        census = analysis.count_distinct_dicycle_carried_walks(walk_host, seeds, t_max)
        report["distinct_walks"] = {
            "seeds": seeds,
            "t_max": t_max,
            "n_classes": census.n_classes,
            "keys_consistent": census.keys_consistent,
            "class_of": {str(s): census.class_of[s] for s in seeds},
            "key_of": {str(s): list(census.key_of[s]) for s in seeds},
        }
    else:
        report["distinct_walks"] = {"seeds": [], "t_max": t_max, "n_classes": 0}
    return report


def run_enumerate(
    out_dir: str | Path,
    cycle_size: int = 3,
    seeds: list[int] | None = None,
    t_max: int = 30,
) -> dict:
    report = enumerate_report(cycle_size=cycle_size, seeds=seeds, t_max=t_max)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "enumerate.json", report)
    return report
