"""Experiment configs and report shape."""

import pytest

from sfqneuron import ValidationError
from sfqneuron.experiment import build_network, load_experiment, run_experiment

SEPARABLE = {
    "schema": 1,
    "dataset": {"seed": 7, "classes": [[1, 0], [0, 1]], "samples_per_class": 4},
    "network": {"layers": [{"t_max": 4, "weights": [[3, 0], [0, 3]]}]},
    "candidates": [[4], [2]],
}


def test_bundled_experiment_loads():
    config = load_experiment("experiment-separable")
    assert config["candidates"] == [[4], [2]]


def test_missing_sections_rejected(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("schema: 1\ndataset: {}\n")
    with pytest.raises(ValidationError, match="network"):
        load_experiment(path)


def test_layer_without_weights_rejected():
    with pytest.raises(ValidationError, match="weights"):
        build_network({"layers": [{"t_max": 4}]})


def test_report_shape_and_winner():
    report = run_experiment(SEPARABLE)
    assert [c["thresholds"] for c in report["candidates"]] == [[4], [2]]
    assert report["best"] == {
        "thresholds": [2],
        "accuracy": 1.0,
        "improves_on_baseline": True,
    }
    assert report["baseline"]["accuracy"] == 0.5
    assert report["dataset"]["samples"] == 8


def test_single_candidate_report_contains_exactly_it():
    config = dict(SEPARABLE, candidates=[[3]])
    report = run_experiment(config)
    assert [c["thresholds"] for c in report["candidates"]] == [[3]]
    assert report["best"]["thresholds"] == [3]
    # The baseline is still evaluated for the comparison, but separately.
    assert report["baseline"]["thresholds"] == [4]


def test_baseline_not_duplicated_when_listed():
    report = run_experiment(SEPARABLE)
    assert sum(1 for c in report["candidates"] if c["thresholds"] == [4]) == 1
