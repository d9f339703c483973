"""Test run configuration parsing and validation."""
import pytest

from bubble_casimir.config import (
    ConfigError,
    RunConfig,
    load_config,
    parse_config_file,
    parse_config_text,
)
from bubble_casimir.const import KERNEL_EXACT, KERNEL_FACTORIZED

CONFIG_TEXT = """
# collapse of a hot plasma core
n_gas_in = 71
n_gas_out = 25   # after the collapse
radius_nm = 500

kernel_mode = Exact
l_max = 20
rel_tol = 1e-5
grid_points = 3
"""


def test_parse_text():
    """Test comments and blank lines are skipped and values kept as text."""
    values = parse_config_text(CONFIG_TEXT)
    assert values["n_gas_in"] == "71"
    assert values["n_gas_out"] == "25"
    assert len(values) == 7


def test_hash_inside_a_value():
    """Test # only opens a comment at the start of a line or after whitespace."""
    values = parse_config_text(
        "output_path = runs/#3.csv  # third run\n\t# indented note\nlog_level = debug#x\n"
    )
    assert values == {"output_path": "runs/#3.csv", "log_level": "debug#x"}
    run = RunConfig.from_mapping(parse_config_text("output_path = runs/#3.csv # note\n"))
    assert run.output_path == "runs/#3.csv"


def test_parse_errors():
    """Test malformed lines and repeated keys."""
    with pytest.raises(ConfigError):
        parse_config_text("n_gas_in 71\n")
    with pytest.raises(ConfigError) as excinfo:
        parse_config_text("n_gas_in = 71\nn_gas_in = 72\n")
    assert excinfo.value.key == "n_gas_in"


def test_from_mapping():
    """Test values are coerced and the typed config is assembled."""
    run = RunConfig.from_mapping(parse_config_text(CONFIG_TEXT))
    assert run.medium.n_gas_in == 71.0
    assert run.medium.n_gas_out == 25.0
    assert run.medium.n_liquid == 1.3
    assert run.kernel_mode == KERNEL_EXACT
    assert run.l_max_override == 20
    assert run.quad.rel_tol == 1e-5
    assert run.grid_points == 3
    assert run.log_level is None


def test_defaults():
    """Test an empty config is the default scenario."""
    run = RunConfig.from_mapping({})
    assert run.medium.n_gas_in == 2.0e4
    assert run.medium.n_gas_out == 1.0
    assert run.kernel_mode == KERNEL_FACTORIZED
    assert run.grid_points == 200
    assert run.workers == 1
    assert not run.quad.include_tails
    assert run.cutoff().x_star == pytest.approx(15.0 / 1.3)


@pytest.mark.parametrize(
    ("values", "key"),
    [
        ({"n_gas_inn": "3"}, "n_gas_inn"),
        ({"n_gas_in": "-3"}, "n_gas_in"),
        ({"n_gas_in": "lots"}, "n_gas_in"),
        ({"kernel_mode": "approximate"}, "kernel_mode"),
        ({"grid_points": "1"}, "grid_points"),
        ({"l_max": "0"}, "l_max"),
        ({"rel_tol": "0"}, "rel_tol"),
        ({"log_level": "loud"}, "log_level"),
    ],
)
def test_invalid_values(values, key):
    """Test unknown keys and out-of-range values are errors naming the key."""
    with pytest.raises(ConfigError) as excinfo:
        RunConfig.from_mapping(values)
    assert excinfo.value.key == key


def test_tails_need_a_bound():
    """Test include_tails without tail_upper_bound."""
    with pytest.raises(ConfigError):
        RunConfig.from_mapping({"include_tails": "true"})
    run = RunConfig.from_mapping({"include_tails": "yes", "tail_upper_bound": "30"})
    assert run.quad.include_tails
    assert run.quad.tail_upper_bound == 30.0


def test_x_range():
    """Test the configured range and empty ranges."""
    run = RunConfig.from_mapping({"x_min": "1", "x_max": "4"})
    assert run.x_range((0.0, 14.0)) == (1.0, 4.0)
    assert RunConfig.from_mapping({"x_max": "4"}).x_range((0.0, 14.0)) == (0.0, 4.0)
    with pytest.raises(ConfigError):
        RunConfig.from_mapping({"x_min": "4", "x_max": "4"})
    with pytest.raises(ConfigError):
        RunConfig.from_mapping({"x_min": "20"}).x_range((0.0, 14.0))


def test_cutoff_overrides():
    """Test x_star and y_star overrides."""
    run = RunConfig.from_mapping({"x_star": "9", "y_star": "7.5"})
    cut = run.cutoff()
    assert (cut.x_star, cut.y_star) == (9.0, 7.5)


def test_load_config(tmp_path):
    """Test a file with overrides layered on top."""
    path = tmp_path / "run.conf"
    path.write_text(CONFIG_TEXT, encoding="utf-8")
    assert parse_config_file(path)["l_max"] == "20"
    run = load_config(path, {"kernel_mode": "factorized", "workers": None})
    assert run.kernel_mode == KERNEL_FACTORIZED
    assert run.workers == 1
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.conf")
