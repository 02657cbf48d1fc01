"""End-to-end smoke tests for the python module."""

import numpy as np
import pytest

import advens


@pytest.fixture(scope="module")
def split():
    spec = advens.SynthSpec()
    spec.n = 400
    return advens.synth_split(spec, 3)


@pytest.fixture(scope="module")
def pool(split):
    return advens.run_hpo(split, 20, 3)


def test_split_shapes(split):
    assert split.train_x.shape[0] == 240
    assert split.val_x.shape[0] == 80
    assert split.test_x.shape[0] == 80
    assert split.train_x.shape[1] == split.test_x.shape[1]
    # standardized numerics: train mean ~0 on the first numeric column
    groups = np.asarray(split.transform.onehot_groups)
    numeric = groups < 0
    assert abs(split.train_x[:, numeric][:, 0].mean()) < 1e-9


def test_pool_and_victim(pool):
    assert len(pool) == 20
    accs = [t.val_accuracy for t in pool.trials]
    assert pool.victim.val_accuracy == max(accs)
    assert advens.reverse_engineering_bound(accs) == pytest.approx(2 * (1 - min(accs)))


def test_gower_bounds(pool):
    a = pool.trials[0].model
    d = advens.gower_distance(
        advens.HyperParams.from_dict(pool.trials[0].params),
        advens.HyperParams.from_dict(pool.trials[1].params),
    )
    assert 0.0 <= d <= 1.0


def test_defense_and_attack(split, pool):
    crit = advens.SelectionCriteria()
    crit.distance_t = 0.5
    crit.k = 5
    ens = advens.build_defense(pool, crit, advens.DEParams(), split.val_x, split.val_y, 3)
    assert len(ens.member_trials) <= 5
    assert pool.victim.index not in ens.member_trials

    spec = advens.AttackSpec("fgsm")
    adv = advens.craft_attack(
        pool.victim.model, split.test_x, split.test_y, spec,
        split.transform.onehot_groups, 0,
    )
    assert adv.x_adv.shape == split.test_x.shape
    clean = pool.victim.model.accuracy(split.test_x, split.test_y)
    attacked = pool.victim.model.accuracy(adv.x_adv, adv.y)
    assert attacked < clean
    probs = ens.predict_probs(adv.x_adv)
    assert probs.shape == (adv.x_adv.shape[0], 2)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)


def test_selection_error_is_typed(pool):
    crit = advens.SelectionCriteria()
    crit.distance_t = 0.99  # unreachable for this space
    with pytest.raises(advens.ExperimentError):
        advens.select_unexpected(pool, crit)


def test_treatments_roundtrip():
    source = {"id": "pysmoke", "synth": {"n": 300}}
    config = {
        "budget": 20,
        "criteria": {"distance_t": 0.5, "k": 4},
        "attacks": [{"kind": "fgsm"}],
    }
    report = advens.run_treatments(source, config, advens.expand_seeds(5, 2))
    assert report["format"] == "advens.treatments/1"
    assert report["seeds"] == [5, 6]
    assert report["a0"]["median"] is not None
    assert set(report["attacks"].keys()) == {"fgsm"}
    a1 = report["attacks"]["fgsm"]["a1"]["median"]
    assert a1 is not None and a1 < report["a0"]["median"]
