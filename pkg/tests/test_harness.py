import json

import pytest

from glpsh.groups import gl
from glpsh.harness import (
    REGISTRY,
    ConfigError,
    Report,
    RunConfig,
    Summary,
    central_character,
    config_dict,
    csv_row,
    parse_phibar_spec,
    run_checks,
    run_instances,
    with_overrides,
)


def test_report_witness_invariant():
    with pytest.raises(ValueError):
        Report("mackey", {}, "fail")
    with pytest.raises(ValueError):
        Report("mackey", {}, "pass", witness={"x": 1})
    with pytest.raises(ValueError):
        Report("mackey", {}, "maybe")
    r = Report("mackey", {"a": 1}, "fail", witness={"w": 2}, seconds=0.12345)
    d = json.loads(r.to_json())
    assert d["witness"] == {"w": 2} and d["seconds"] == 0.123
    assert csv_row(r)[:3] == ["mackey", "fail", "0"]


@pytest.mark.parametrize(
    "kw",
    [
        {"cap_order": 0},
        {"jobs": -1},
        {"format": "xml"},
        {"checks": ("nope",)},
        {"group": "gl:2:6"},
        {"group": "sl:2:2"},
        {"central": "x:y"},
        {"central": "0:1"},
    ],
)
def test_config_errors(kw):
    with pytest.raises(ConfigError):
        RunConfig(**kw).validate()


def test_registry_flags():
    exp = {n for n, c in REGISTRY.items() if c.experimental}
    assert exp == {"coassoc-mstar-plus", "hh-condition", "stabilizer-characters"}


def test_central_spec():
    G = gl(2, 3)
    assert parse_phibar_spec("trivial") is None
    assert central_character(G, None) is None
    chi = central_character(G, "2:1")
    assert chi.N == 2 and chi.subgroup == G.center
    with pytest.raises(ConfigError):
        central_character(G, "2:1,1")
    with pytest.raises(ConfigError):
        central_character(G, "3:1")  # Z(GL(2,3)) has order 2


def test_caps_skip_rather_than_fail():
    cfg = RunConfig(checks=("mackey", "hh-relations"), cap_order=5)
    reps = list(run_checks(cfg))
    assert reps and all(r.status == "skipped" for r in reps)
    s = Summary()
    for r in reps:
        s.add(r)
    assert s.all_skipped and s.exit_code == 0


def test_group_override_and_order():
    cfg = RunConfig(group="gl:2:2", checks=("mackey", "line-orbits"))
    reps = list(run_checks(cfg))
    names = [r.check for r in reps]
    assert names == sorted(names, key=["mackey", "line-orbits"].index)
    assert names.count("mackey") == 7  # one instance per pair, partners inside
    assert all(r.status == "pass" for r in reps)
    assert all(r.instance["group"] == "gl:2:2" for r in reps)


def test_parallel_matches_serial():
    cfg = RunConfig(group="gl:2:2", checks=("adjunction", "hh-relations", "fixed-subspace"))
    serial = [r.to_json() for r in run_checks(cfg)]
    pooled = [r.to_json() for r in run_checks(with_overrides(cfg, jobs=2))]
    assert serial == pooled


def test_summary_exit_codes():
    s = Summary()
    s.add(Report("coassoc-mstar-plus", {}, "fail", True, {"w": 1}))
    s.add(Report("mackey", {}, "pass"))
    assert s.exit_code == 0 and s.experimental_fails == 1
    s.add(Report("mackey", {}, "fail", False, {"w": 1}))
    assert s.exit_code == 1 and s.failed_checks == {"mackey"}


def test_experimental_fail_carries_witness():
    cfg = RunConfig()
    inst = {"q": 2, "a": 3, "parts": [1, 1, 1], "pair": 0}
    from glpsh.rplus import basis

    B = basis(gl(3, 2))
    found = None
    for i, p in enumerate(B):
        if p.H.order == 24 and p.phi.N == 2:
            found = i
    inst["pair"] = found
    (rep,) = run_instances(cfg, "coassoc-mstar-plus", [inst])
    assert rep.status == "fail" and rep.experimental
    assert set(rep.witness) == {"pair", "direct", "via_left", "via_right"}


def test_with_overrides_and_dict():
    cfg = with_overrides(RunConfig(), seed=5, group=None)
    assert cfg.seed == 5 and cfg.group is None
    assert config_dict(cfg)["seed"] == 5
