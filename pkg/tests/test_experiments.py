import math

import pytest

from fdrelay import experiments
from fdrelay.errors import ConfigError
from fdrelay.experiments import (
    FIGURES,
    ResultRow,
    ScenarioConfig,
    config_from_mapping,
    figure,
    figure_config,
    parse_config_text,
    run_scenario,
    write_csv,
)
from fdrelay.params import SystemParams


def by_metric(rows):
    return {(r.sweep, r.metric): r for r in rows}


def test_fig3_long_blocks_overlap_interference_free_rate():
    rows = by_metric(run_scenario(figure_config(3)))
    for slot in (1, 2, 3):
        ref = rows[(2000, f"slot{slot}.no_interference")].value
        for design in ("isr_max", "ird_max"):
            assert abs(rows[(2000, f"slot{slot}.{design}")].value - ref) < 0.05


def test_fig2_short_blocks_favour_isr_max():
    rows = by_metric(run_scenario(figure_config(2)))
    for slot in (1, 2, 3):
        isr = rows[(50, f"slot{slot}.isr_max")].value
        ird = rows[(50, f"slot{slot}.ird_max")].value
        assert ird <= isr <= rows[(50, f"slot{slot}.no_interference")].value


def test_rows_follow_sweep_order():
    cfg = config_from_mapping({"kind": "slow_average", "sweep_kind": "n", "sweep": "40, 10, 20", "M": "2", "trials": "20"})
    sweeps = [r.sweep for r in run_scenario(cfg)]
    assert sweeps == sorted(sweeps, key=[40, 10, 20].index)


def test_empty_sweep_is_rejected():
    with pytest.raises(ConfigError) as info:
        config_from_mapping({"kind": "slow_average", "sweep_kind": "n", "sweep": ""})
    assert info.value.field == "sweep"
    with pytest.raises(ConfigError):
        ScenarioConfig(kind="queue", sweep_kind="Qmax", sweep=(), precoder_mode="IRD_MAX")


@pytest.mark.parametrize(
    "mapping, field",
    [
        ({"kind": "nope", "sweep_kind": "n", "sweep": "10"}, "kind"),
        ({"kind": "slow_average", "sweep_kind": "x", "sweep": "10"}, "sweep_kind"),
        ({"kind": "slow_average", "sweep_kind": "n", "sweep": "10, -1"}, "sweep"),
        ({"kind": "slow_average", "sweep_kind": "n", "sweep": "10.5"}, "sweep"),
        ({"kind": "slow_average", "sweep_kind": "n", "sweep": "10", "trials": "0"}, "trials"),
        ({"kind": "slow_average", "sweep_kind": "n", "sweep": "10", "seed": "-3"}, "seed"),
        ({"kind": "slow_average", "sweep_kind": "n", "sweep": "10", "P_S": "abc"}, "P_S"),
        ({"kind": "slow_average", "sweep_kind": "n", "sweep": "10", "bogus": "1"}, "bogus"),
        ({"kind": "slow_average", "sweep_kind": "n"}, "sweep"),
        ({"kind": "slow_fixture", "sweep_kind": "n", "sweep": "10"}, "fixture"),
        ({"kind": "slow_fixture", "sweep_kind": "n", "sweep": "10", "fixture": "4"}, "fixture"),
        ({"kind": "slow_fixture", "sweep_kind": "n", "sweep": "10", "fixture": "1", "M": "3"}, "M"),
        ({"kind": "queue", "sweep_kind": "Qmax", "sweep": "3", "precoder_mode": "ISR_MAX"}, "precoder_mode"),
        ({"kind": "slow_average", "sweep_kind": "n", "sweep": "10", "variance_convention": "X"}, "variance_convention"),
        ({"kind": "slow_average", "sweep_kind": "n", "sweep": "1", "M": "2"}, "n"),
    ],
)
def test_config_errors_name_the_field(mapping, field):
    with pytest.raises(ConfigError) as info:
        config_from_mapping(mapping)
    assert info.value.field == field
    assert str(info.value).startswith(field)


def test_parse_config_text():
    text = """
    # fig 4 style run
    kind = slow_average
    sweep_kind = M
    sweep = 1, 2, 3   ; antenna counts
    seed = 18446744073709551615
    P_S = 20
    literal_scaling = yes
    """
    cfg = config_from_mapping(parse_config_text(text))
    assert cfg.sweep == (1, 2, 3) and cfg.seed == 2**64 - 1
    assert cfg.params.P_S == 20.0 and cfg.params.literal_scaling
    assert cfg.variance_convention == SystemParams().variance_convention
    with pytest.raises(ConfigError) as info:
        parse_config_text("[other]\nkind = queue\n")
    assert info.value.field == "config"
    with pytest.raises(ConfigError):
        parse_config_text("no equals sign here\n")


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("kind = queue\nsweep_kind = Qmax\nsweep = 1,2\nprecoder_mode = IRD_MAX\ntrials = 1e3\n")
    cfg = experiments.load_config(path)
    assert cfg.trials == 1000 and cfg.sweep == (1, 2)


def test_csv_is_byte_identical_for_fixed_seed(tmp_path):
    mapping = {"kind": "fast_average", "sweep_kind": "M", "sweep": "1,2", "trials": "50", "seed": "9"}
    a = write_csv(run_scenario(config_from_mapping(mapping)), tmp_path / "a.csv")
    b = write_csv(run_scenario(config_from_mapping(mapping)), tmp_path / "b.csv")
    assert a == b
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    c = write_csv(run_scenario(config_from_mapping({**mapping, "seed": "10"})))
    assert c != a


def test_csv_format():
    rows = [ResultRow("s", 3, "m", 0.1, None), ResultRow("s", 0.25, "m", 1 / 3, 0.01)]
    assert write_csv(rows) == "sweep,metric,value,stderr\n3,m,0.1,\n0.25,m,0.3333333333333333,0.01\n"


@pytest.mark.parametrize(
    "mapping",
    [
        {"kind": "slow_average", "sweep_kind": "M", "sweep": "2", "trials": "20", "n": "12"},
        {"kind": "fast_average", "sweep_kind": "M", "sweep": "2", "trials": "20"},
        {"kind": "fast_fixture", "sweep_kind": "sigma2_RR_db", "sweep": "0", "trials": "200", "fixture": "1,2"},
        {"kind": "maxmin_fixture", "sweep_kind": "sigma2_RR_db", "sweep": "0", "trials": "200", "fixture": "3"},
        {"kind": "maxmin_average", "sweep_kind": "M", "sweep": "2", "trials": "20"},
        {"kind": "queue", "sweep_kind": "Qmax", "sweep": "2", "trials": "500", "precoder_mode": "IRD_MAX"},
    ],
)
def test_monte_carlo_metrics_carry_stderr(mapping):
    rows = run_scenario(config_from_mapping(mapping))
    assert rows
    for row in rows:
        deterministic = row.metric.endswith("no_interference") or row.metric.endswith("_rd")
        if deterministic and mapping["kind"].endswith("fixture"):
            assert row.stderr is None
        else:
            assert row.stderr is not None and math.isfinite(row.stderr), row.metric


def test_slow_fixture_rows_are_exact():
    for row in run_scenario(figure_config(2)):
        assert row.stderr is None


def test_fig9_series_ordering():
    rows = by_metric(run_scenario(figure_config(9, {"trials": 20_000})))
    for q in range(1, 11):
        conv = rows[(q, "conventional_fd")].value
        buff = rows[(q, "buffered_fd")].value
        upper = rows[(q, "upper_bound")].value
        assert conv <= buff <= upper


def test_queue_series_suffixes():
    cfg = figure_config(11, {"trials": 500, "sweep": "2"})
    metrics = {r.metric for r in run_scenario(cfg)}
    assert "buffered_fd[R=1.0]" in metrics and "upper_bound_bits[R=6.0]" in metrics
    cfg = figure_config(10, {"trials": 500, "sweep": "2.5"})
    metrics = {r.metric for r in run_scenario(cfg)}
    assert "conventional_fd[sigma2_RR_db=-10.0]" in metrics


def test_unknown_figure_is_rejected():
    for bad in (1, 12, "x"):
        with pytest.raises(ConfigError) as info:
            figure_config(bad)
        assert info.value.field == "figure"
    assert sorted(FIGURES) == list(range(2, 12))


def test_figure_writes_csv(tmp_path):
    path, rows = figure(3, out=tmp_path / "fig3.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "sweep,metric,value,stderr"
    assert len(lines) == len(rows) + 1 == 10


def test_overrides_apply_over_figure_defaults():
    cfg = figure_config(9, {"trials": "1000", "Qmax": "4", "sweep": "1,2"})
    assert cfg.trials == 1000 and cfg.sweep == (1, 2) and cfg.params.M == 1
    assert cfg.name == "fig9"
