from __future__ import annotations

import numpy as np
import pytest

from memwalk import ValidationError, minimal_window
from memwalk.analysis import BetaField, equivalence_initial_beta
from memwalk.experiments import (
    ANNEALED_CLASSES,
    WALK_CLASSES,
    ExperimentSpec,
    _class_spec,
    equivalence_report,
    enumerate_report,
    resolve_spec,
    run_history,
    run_simulate,
    run_sweep,
)
from memwalk import analysis


def spec_doc(**overrides):
    doc = {
        "graph": {"family": "line"},
        "partition": {"kind": "reflect_transmit"},
        "coin_shift": {"kind": "carried"},
        "coin": {"kind": "hadamard"},
        "initial_state": {"preset": "origin-balanced"},
        "t_max": 30,
        "outputs": ["distribution", "variance"],
        "seed": 7,
    }
    doc.update(overrides)
    return doc


def test_spec_round_trip():
    spec = ExperimentSpec.from_json_dict(spec_doc())
    assert ExperimentSpec.from_json_dict(spec.to_json_dict()) == spec


def test_spec_rejects_unknown_fields():
    with pytest.raises(ValidationError):
        ExperimentSpec.from_json_dict(spec_doc(extra=1))
    with pytest.raises(ValidationError):
        ExperimentSpec.from_json_dict(spec_doc(partition={"kind": "reflect_transmit", "huh": 2}))


def test_resolve_defaults_line_window():
    resolved = resolve_spec(ExperimentSpec.from_json_dict(spec_doc()))
    assert resolved.host.base_n == minimal_window(30, 1)
    assert resolved.host.centered


def test_cycle_family_requires_window():
    with pytest.raises(ValidationError):
        resolve_spec(ExperimentSpec.from_json_dict(spec_doc(graph={"family": "cycle"})))
    resolved = resolve_spec(
        ExperimentSpec.from_json_dict(spec_doc(graph={"family": "cycle", "window": 9}))
    )
    assert resolved.host.base_n == 9


def test_scaling_fit_needs_room():
    doc = spec_doc(outputs=["scaling-fit"], t_max=30)
    with pytest.raises(ValidationError) as err:
        resolve_spec(ExperimentSpec.from_json_dict(doc))
    assert "scaling-fit" in str(err.value)


def test_per_step_resample_needs_random_partition():
    doc = spec_doc(partition={"kind": "directional", "resample": "per_step"})
    with pytest.raises(ValidationError):
        resolve_spec(ExperimentSpec.from_json_dict(doc))
    doc = spec_doc(partition={"kind": "random", "seed": 3, "resample": "sometimes"})
    with pytest.raises(ValidationError):
        resolve_spec(ExperimentSpec.from_json_dict(doc))


def test_random_partition_needs_seed():
    doc = spec_doc(partition={"kind": "random"}, seed=None)
    with pytest.raises(ValidationError):
        resolve_spec(ExperimentSpec.from_json_dict(doc))


def test_run_simulate_outputs_are_deterministic(tmp_path):
    spec = ExperimentSpec.from_json_dict(
        spec_doc(partition={"kind": "random_dicycle", "seed": 11})
    )
    run_simulate(spec, tmp_path / "a")
    run_simulate(spec, tmp_path / "b")
    for name in ("summary.json", "distributions.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_simulate_validates_before_writing(tmp_path):
    spec = ExperimentSpec.from_json_dict(
        spec_doc(partition={"kind": "directional"}, coin_shift={"kind": "carried"})
    )
    out = tmp_path / "never"
    with pytest.raises(Exception):
        run_simulate(spec, out)
    assert not out.exists()


def test_annealed_differs_from_frozen():
    frozen = resolve_spec(
        ExperimentSpec.from_json_dict(
            spec_doc(
                partition={"kind": "random", "seed": 5, "resample": "never"},
                coin_shift={"kind": "recycled"},
            )
        )
    )
    annealed_doc = spec_doc(
        partition={"kind": "random", "seed": 5, "resample": "per_step"},
        coin_shift={"kind": "recycled"},
    )
    annealed = resolve_spec(ExperimentSpec.from_json_dict(annealed_doc))
    again = resolve_spec(ExperimentSpec.from_json_dict(annealed_doc))

    frozen_final = analysis.position_marginal(run_history(frozen)[-1])
    annealed_final = analysis.position_marginal(run_history(annealed)[-1])
    again_final = analysis.position_marginal(run_history(again)[-1])
    assert np.array_equal(annealed_final.probs, again_final.probs)
    assert analysis.max_distribution_difference(frozen_final, annealed_final) > 1e-6


def test_class_spec_presets():
    template = ExperimentSpec.from_json_dict(spec_doc())
    for walk_class in WALK_CLASSES:
        spec = _class_spec(template, walk_class, 3)
        kind, shift = walk_class.split("+")
        assert spec.partition_kind == kind
        assert spec.coin_shift_kind == shift
        expected = "per_step" if walk_class in ANNEALED_CLASSES else "never"
        assert spec.partition_resample == expected
    with pytest.raises(ValidationError):
        _class_spec(template, "directional+carried", 3)


def test_sweep_matches_single_run(tmp_path):
    template = ExperimentSpec.from_json_dict(
        spec_doc(outputs=["variance", "occrate", "origin-series"])
    )
    report = run_sweep(template, ["reflect_transmit+carried"], [0], tmp_path)
    solo = resolve_spec(_class_spec(template, "reflect_transmit+carried", 0))
    dists = analysis.marginal_history(run_history(solo))
    expected = [analysis.variance(d) for d in dists]
    got = report["classes"]["reflect_transmit+carried"]["mean_variance"]
    assert np.allclose(got, expected, atol=1e-14)
    # a 30-step horizon is too short for the quadratic-vs-linear fit
    assert report["classes"]["reflect_transmit+carried"]["fit_verdict"] is None
    assert (tmp_path / "sweep_summary.json").exists()
    assert (tmp_path / "comparison.csv").exists()


def test_sweep_rejects_unknown_class(tmp_path):
    template = ExperimentSpec.from_json_dict(spec_doc())
    with pytest.raises(ValidationError):
        run_sweep(template, ["sideways+recycled"], [0], tmp_path)
    with pytest.raises(ValidationError):
        run_sweep(template, [], [0], tmp_path)


def test_equivalence_report_passes_quickly():
    report = equivalence_report(t_max=40, oracle_t_max=20)
    assert report["passed"]
    assert report["applicable"]
    assert report["constraint_residual_max"] < 1e-12
    assert report["engine_field_diff_max"] < 1e-12
    assert report["alpha_reconstruction_diff_max"] < 1e-10
    assert report["distribution_tv_max"] < 1e-10
    assert all(v < 1e-12 for v in report["oracle_distribution_diff_max"].values())


def test_equivalence_report_flags_bad_start():
    window = minimal_window(40, 1)
    amps = equivalence_initial_beta(window).amps.copy()
    amps[3, 0, 0] = 0.3
    report = equivalence_report(
        t_max=40, oracle_t_max=20, initial_beta=BetaField(amps, 0)
    )
    assert not report["applicable"]
    assert not report["passed"]
    assert report["alpha_reconstruction_diff_max"] is None


def test_matrix_coin_literal():
    h = 0.7071067811865476
    doc = spec_doc(coin={"kind": "matrix", "rows": [[[h, 0], [h, 0]], [[h, 0], [-h, 0]]]})
    resolved = resolve_spec(ExperimentSpec.from_json_dict(doc))
    assert np.allclose(resolved.coin, np.array([[h, h], [h, -h]]))
    with pytest.raises(ValidationError):
        resolve_spec(ExperimentSpec.from_json_dict(spec_doc(coin={"kind": "matrix"})))


def test_explicit_initial_terms():
    doc = spec_doc(
        initial_state={
            "terms": [
                {"path": [-1, 0], "coin": 1, "amplitude": [0.6, 0.0]},
                {"path": [1, 0], "coin": -1, "amplitude": [0.0, 0.8]},
            ]
        }
    )
    resolved = resolve_spec(ExperimentSpec.from_json_dict(doc))
    v = resolved.host.index_of((-1, 0))
    assert resolved.initial.amps[v, 0] == pytest.approx(0.6)
    w = resolved.host.index_of((1, 0))
    assert resolved.initial.amps[w, 1] == pytest.approx(0.8j)


def test_raw_coin_shift_table():
    n = minimal_window(5, 1)
    entries = [[v, c, c] for v in range(2 * n) for c in (1, -1)]
    doc = spec_doc(t_max=5, coin_shift={"kind": "table", "entries": entries})
    resolved = resolve_spec(ExperimentSpec.from_json_dict(doc))
    carried = resolve_spec(ExperimentSpec.from_json_dict(spec_doc(t_max=5)))
    a = analysis.position_marginal(run_history(resolved)[-1])
    b = analysis.position_marginal(run_history(carried)[-1])
    # the identity table on this partition is exactly the carried shift
    assert analysis.max_distribution_difference(a, b) == 0.0
    with pytest.raises(ValidationError):
        resolve_spec(
            ExperimentSpec.from_json_dict(
                spec_doc(t_max=5, coin_shift={"kind": "table", "entries": entries[:-1]})
            )
        )


def test_enumerate_report_counts():
    report = enumerate_report(cycle_size=3)
    assert report["gc_enumeration"]["count"] == 64
    assert report["gc_enumeration"]["count"] == report["gc_enumeration"]["expected_count"]
    assert report["distinct_walks"]["n_classes"] == 0


def test_enumerate_report_census():
    report = enumerate_report(cycle_size=3, seeds=list(range(10)), t_max=20)
    walks = report["distinct_walks"]
    assert 1 <= walks["n_classes"] <= 8
    assert walks["keys_consistent"]
