import json
import math
import warnings

import numpy as np
import pytest

from pypinv import identities as ids
from pypinv._errors import InvalidToleranceError, VacuousSuiteWarning
from pypinv._random import instance_rng, random_matrix
from pypinv.operators import Dense, Diagonal, identity, materialize


def test_registry_contents():
    catalog = ids.registry()
    names = [spec.id for spec in catalog]
    assert len(catalog) >= 25
    assert names == sorted(names)
    assert len(set(names)) == len(names)
    assert all(spec.anchor.strip() for spec in catalog)
    assert ids.identity_by_id("thm-2.12").anchor == r"Then $T = (T^{*})^{\dagger}T^{*}T$"
    for expected in ("thm-3.1", "thm-2.12", "thm-1.4-6", "cor-3.6", "eq-12-13", "thm-3.10"):
        assert expected in names
    assert ids.identity_by_id("thm-3.10").instances == "perturbation"
    assert ids.identity_by_id("lem-3.3").arity == 2
    with pytest.raises(KeyError):
        ids.identity_by_id("thm-9.9")

def test_every_identity_is_exact_on_the_identity_operator():
    eye = identity(4)
    for spec in ids.registry():
        if spec.instances == "single":
            ops = (eye,)
        elif spec.instances == "pair":
            ops = (eye, identity(3))
        else:
            ops = (Dense(np.eye(4)), Dense(0.25 * np.eye(4)))
        assert spec.residual(ops) <= 1e-12, spec.id

def test_identity_on_random_instance():
    a = Dense(random_matrix(instance_rng(6, 4, 2), 6, 4, 2, (0.1, 10.0)))
    assert ids.identity_by_id("thm-2.12").residual((a,)) <= 1e-10
    assert ids.identity_by_id("thm-1.4-9").residual((a,)) <= 1e-10
    assert ids.identity_by_id("thm-2.5-3").residual((a,)) <= 1e-8

def test_residuals_are_scale_damped():
    a = Dense(random_matrix(instance_rng(13), 5, 3, 2, (0.1, 10.0)))
    twice = Dense(2 * materialize(a))
    for spec in ids.registry():
        if spec.instances != "single" or spec.kind != "equality":
            continue
        base = spec.residual((a,))
        assert spec.residual((twice,)) <= 10 * max(base, 1e-13), spec.id

def test_random_operator():
    cfg = ids.InstanceConfig(seed=3)
    assert np.array_equal(materialize(ids.random_operator(cfg, 3, 4, 0)), np.zeros((3, 4)))
    assert np.array_equal(materialize(ids.random_operator(cfg, 5, 3, 2, trial=1)),
                            materialize(ids.random_operator(cfg, 5, 3, 2, trial=1)))
    assert not np.array_equal(materialize(ids.random_operator(cfg, 5, 3, 2, trial=1)),
                                materialize(ids.random_operator(cfg, 5, 3, 2, trial=2)))

    isometric = ids.InstanceConfig(seed=3, sigma_range=(1.0, 1.0))
    a = materialize(ids.random_operator(isometric, 5, 3, 3))
    assert np.allclose(np.linalg.eigvalsh(a.conj().T @ a), 1.0)
    with pytest.raises(ValueError):
        ids.random_operator(cfg, 2, 3, 3)

def test_instance_config_validation():
    with pytest.raises(ValueError):
        ids.InstanceConfig(trials=-1)
    with pytest.raises(ValueError):
        ids.InstanceConfig(seed=-5)
    with pytest.raises(ValueError):
        ids.InstanceConfig(sigma_range=(0.0, 1.0))
    with pytest.raises(ValueError):
        ids.InstanceConfig(sigma_range=(2.0, 1.0))
    with pytest.raises(ValueError):
        ids.InstanceConfig(schedule=())
    with pytest.raises(ValueError):
        ids.InstanceConfig(schedule=((13, 2),))
    assert ids.InstanceConfig(max_dim=16, schedule=((16, 2),)).schedule == ((16, 2),)

def test_default_suite_passes():
    reports = ids.run_suite(ids.InstanceConfig(seed=42, trials=10))
    assert len(reports) >= 25
    assert [r.id for r in reports] == sorted(r.id for r in reports)
    assert ids.suite_passed(reports), [(r.id, r.max_residual) for r in reports if not r.passed]
    for r in reports:
        assert r.trials == 10
        assert r.seed == 42
        assert r.passed == (r.max_residual <= r.tol)
        assert set(r.dims) <= set(ids.DEFAULT_SCHEDULE)

def test_suite_at_full_scale():
    reports = ids.run_suite(ids.InstanceConfig(seed=42, trials=50), tol=1e-9)
    assert ids.suite_passed(reports), [(r.id, r.max_residual) for r in reports if not r.passed]
    assert {d for r in reports for d in r.dims} == set(ids.DEFAULT_SCHEDULE)

def test_stress_profile_keeps_schedule():
    cfg = ids.stress_config(seed=1, trials=2, schedule=((2, 3), (16, 4)))
    assert cfg.schedule == ((2, 3), (16, 4))
    assert cfg.sigma_range == ids.STRESS_SIGMA_RANGE
    assert ids.stress_config().schedule == tuple(ids.DEFAULT_SCHEDULE)

def test_suite_is_deterministic():
    cfg = ids.InstanceConfig(seed=7, trials=3, schedule=((2, 3), (4, 4)))
    first = [r.to_dict() for r in ids.run_suite(cfg)]
    second = [r.to_dict() for r in ids.run_suite(cfg)]
    assert json.dumps(first) == json.dumps(second)

def test_subspace_identities_use_projector_tolerance():
    cfg = ids.InstanceConfig(seed=1, trials=2)
    reports = {r.id: r for r in ids.run_suite(cfg, tol=1e-12)}
    assert reports["thm-1.4-3"].tol == 1e-8
    assert reports["thm-1.4-6"].tol == 1e-12

def test_zero_trials_warns():
    with pytest.warns(VacuousSuiteWarning):
        reports = ids.run_suite(ids.InstanceConfig(trials=0))
    assert reports == []
    assert ids.suite_passed(reports)

def test_invalid_tolerance():
    with pytest.raises(InvalidToleranceError):
        ids.run_suite(ids.InstanceConfig(trials=1), tol=-1.0)

def test_stress_profile_reports_instead_of_crashing():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        reports = ids.run_suite(ids.stress_config(seed=5, trials=3))
    assert len(reports) == len(ids.registry())
    assert all(r.trials == 3 for r in reports)
    assert all(isinstance(r.passed, bool) for r in reports)

def test_report_serialization():
    report = ids.IdentityReport(id="thm-3.1", trials=2, dims=[(2, 2), (3, 5)], max_residual=math.inf, tol=1e-9,
                                passed=False, seed=42)
    record = report.to_dict()
    assert list(record) == ["id", "trials", "dims", "max_residual", "tol", "pass", "seed"]
    assert record["dims"] == [[2, 2], [3, 5]]
    assert record["max_residual"] == "inf"
    assert record["pass"] is False
    json.dumps(record, allow_nan=False)

def test_failed_evaluation_becomes_infinite(caplog):
    def broken(ops, rtol=ids.RANK_RTOL):
        raise ArithmeticError("singular")

    spec = ids.IdentitySpec("broken", "always fails", 1, broken)
    assert ids._evaluate(spec, (identity(2),), 0) == math.inf
    assert "broken" in caplog.text

def test_run_on_operator():
    reports = ids.run_on_operator(Diagonal([0.0, 2.0, 3.0]))
    assert len(reports) == len(ids.registry())
    assert ids.suite_passed(reports)
    assert all(r.seed == 0 for r in reports)

    zero_reports = {r.id: r for r in ids.run_on_operator(np.zeros((2, 2)))}
    assert zero_reports["cor-3.6"].trials == 0
    assert zero_reports["cor-3.6"].passed
    assert zero_reports["thm-1.4-6"].trials == 1
    assert ids.suite_passed(list(zero_reports.values()))
