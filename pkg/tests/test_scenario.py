import json

import numpy as np
import pytest

from mndp.errors import ParseError
from mndp.scenario import (
    Scenario, dumps_scenario, gen_gaussian_mixture, gen_uniform, load_scenario,
    parse_scenario, save_scenario,
)


def test_uniform_bs_placements():
    assert gen_uniform(200, 16000, "center", 1).bs == (8000, 8000)
    assert gen_uniform(200, 16000, "isolated", 1).bs == (20000, 20000)


def test_uniform_basic():
    s = gen_uniform(1, 1, "center", 3)
    assert s.n == 1
    x, y = s.nodes[0]
    assert 0 <= x <= 1 and 0 <= y <= 1


def test_uniform_mean_converges_to_center():
    s = gen_uniform(100_000, 16000, "center", 9)
    mean = s.node_array.mean(axis=0)
    assert np.all(np.abs(mean - 8000) <= 0.05 * 8000)


def test_bad_bs_mode():
    with pytest.raises(ValueError):
        gen_uniform(10, 100, "nowhere", 0)


def test_mixture_group_sizes_and_bounds():
    s = gen_gaussian_mixture(300, 16000, 3, "center", 4)
    assert s.n == 300
    arr = s.node_array
    assert arr.min() >= 0 and arr.max() <= 16000


def test_mixture_remainder_on_last_group():
    s = gen_gaussian_mixture(10, 1000, 3, "center", 0)
    assert s.n == 10


def test_mixture_groups_are_separate_streams():
    # Group g only depends on (seed, g): the first 100 nodes of a 3-group
    # and of a 2-group draw match when the first group has the same size.
    a = gen_gaussian_mixture(300, 16000, 3, "center", 12)
    b = gen_gaussian_mixture(200, 16000, 2, "center", 12)
    assert a.nodes[:100] == b.nodes[:100]


def test_mixture_single_group_tight_cluster_few_pads():
    from mndp import cdc_solve, dsc_optimize
    s = gen_gaussian_mixture(100, 16000, 1, "center", 2)
    spread = s.node_array.std(axis=0).max()
    assert spread < 16000 / 6
    u = gen_uniform(100, 16000, "center", 2)
    assert dsc_optimize(cdc_solve(s), s).num_pads < dsc_optimize(cdc_solve(u), u).num_pads


@pytest.mark.parametrize("gen", [
    lambda seed: gen_uniform(200, 16000, "center", seed),
    lambda seed: gen_gaussian_mixture(300, 16000, 3, "isolated", seed),
])
def test_deterministic(gen):
    assert dumps_scenario(gen(77)) == dumps_scenario(gen(77))
    assert gen(77) != gen(78)


def test_round_trip(tmp_path):
    for s in (gen_uniform(50, 4000, "center", 1), gen_gaussian_mixture(60, 25000, 3, "isolated", 2)):
        path = tmp_path / "s.json"
        save_scenario(s, path)
        back = load_scenario(path)
        assert back == s
        assert back.node_array.tobytes() == s.node_array.tobytes()


def test_missing_nodes_field():
    with pytest.raises(ParseError, match="nodes"):
        parse_scenario(json.dumps({"region_side": 10, "seed": 0, "bs": [5, 5]}))


def test_empty_nodes():
    with pytest.raises(ParseError, match="empty"):
        parse_scenario(json.dumps({"region_side": 10, "seed": 0, "bs": [5, 5], "nodes": []}))


def test_bad_json_reports_line():
    with pytest.raises(ParseError, match=r":2:"):
        parse_scenario('{"region_side": 10,\n "nodes": [,]}', "f.json")


def test_bad_node_entry_reports_index():
    text = json.dumps({"region_side": 10, "bs": [5, 5], "nodes": [[1, 1], [2]]})
    with pytest.raises(ParseError, match=r"\[1\]"):
        parse_scenario(text)


def test_node_outside_region_rejected():
    text = json.dumps({"region_side": 10, "bs": [5, 5], "nodes": [[11, 1]]})
    with pytest.raises(ParseError):
        parse_scenario(text)


def test_scenario_invariants():
    with pytest.raises(ValueError):
        Scenario(10.0, (), (5, 5))
    with pytest.raises(ValueError):
        Scenario(10.0, ((float("nan"), 1.0),), (5, 5))
