import math
import os
from pathlib import Path

import pytest

import precmon

DATA = Path(os.environ.get("PRECMON_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="module")
def easy3():
    inst = precmon.load_instance(str(DATA / "easy3.json"))
    return inst, precmon.solve_all(inst)


def test_load_and_validate(easy3):
    inst, _ = easy3
    assert len(inst) == 3
    assert inst.plan_value == 20.0
    assert precmon.warnings(inst) == []
    precmon.validate(inst)


def test_decisions(easy3):
    _, bundle = easy3
    assert precmon.npc_monitor(bundle, [0.3, 1.0, 1.0], 1) == [1]
    b = [1.0, 1.0, 0.05]
    assert precmon.npc_action(bundle, b, 3) == precmon.Action.abandon
    assert precmon.vapc_action(bundle, b, 3) == precmon.Action.abandon


def test_oracle_and_evaluation(easy3):
    inst, bundle = easy3
    b = [0.8, 0.9, 1.0]
    opt = precmon.oracle_value(inst, b, 1)
    npc = precmon.evaluate_policy_exact(bundle, b, 1, precmon.Combiner.npc)
    assert npc <= opt + 1e-9
    mean, se = precmon.simulate(bundle, b, precmon.Combiner.npc, 20000, 5)
    assert abs(mean - npc) < 5 * se + 1e-9


def test_envelope():
    lines = [precmon.AlphaVector(12, 12, precmon.Action.abandon, 0, 0),
             precmon.AlphaVector(20, 10, precmon.Action.cont, 1, 0),
             precmon.AlphaVector(19, 9, precmon.Action.cont, 1, 0)]
    pruned = precmon.prune_envelope(lines)
    assert len(pruned) == 2
    assert math.isclose(precmon.evaluate_set(pruned, 0.5)[0], 15.0)


def test_policy_round_trip(easy3):
    _, bundle = easy3
    back = precmon.parse_policy(bundle.to_json())
    for k in range(1, 4):
        for t in range(1, k + 1):
            assert len(back.action_set(k, t)) == len(bundle.action_set(k, t))


def test_errors(easy3):
    _, bundle = easy3
    with pytest.raises(precmon.InputError):
        precmon.parse_instance("{")
    with pytest.raises(precmon.RefusalError):
        inst = precmon.load_instance(str(DATA / "five.json"))
        precmon.oracle_value(inst, inst.priors, 1, 3)
    with pytest.raises(precmon.InputError):
        precmon.run_step(bundle, [1.0, 1.0], 1, precmon.Combiner.npc,
                         lambda k: precmon.Report.holds)


def test_grid():
    assert len(precmon.belief_grid(3, precmon.uniform_levels(11))) == 1331
