import itertools
import json
import os
import pathlib

import pytest

import geofd

SOURCE = pathlib.Path(os.environ.get("GEOFD_SOURCE_DIR", pathlib.Path(__file__).parents[2]))


def test_pathloss_golden():
    assert geofd.ue_ue_pathloss(0.049, 2000) == pytest.approx(72.27, abs=0.01)
    assert geofd.ue_ue_pathloss(0.05, 2000) == pytest.approx(81.07, abs=0.01)


def test_matching_against_permutations():
    cost = [[4, 1, 3], [2, 0, 5], [3, 2, 2]]
    rows, total = geofd.solve_matching(cost)
    best = min(sum(cost[r][p[r]] for r in range(3)) for p in itertools.permutations(range(3)))
    assert total == best
    assert sorted(rows) == [0, 1, 2]


def test_config_errors():
    with pytest.raises(geofd.ParseError):
        geofd.resolve_config('{"bogus": 1}')
    with pytest.raises(ValueError):
        geofd.resolve_config("{")


def test_default_config_round_trip():
    text = geofd.default_config()
    assert geofd.resolve_config(text) == text


def test_smoke_pipeline():
    config = (SOURCE / "configs" / "smoke.json").read_text()
    out = geofd.run(config, trials=3)
    assert len(out["database"]["pairs"]) > 0
    summary = out["summary"]
    assert summary["format"] == "geofd-summary/1"
    again = geofd.run(config, trials=3, threads=2)
    assert json.dumps(again, sort_keys=True) == json.dumps(out, sort_keys=True)
