import pytest

from ehrlimit.utils.config import BUDGET_ENV_VAR, load_config
from ehrlimit.utils.errors import ParameterError


def test_defaults():
    config = load_config(environ={})
    assert config['enumeration']['budget'] == 2 ** 22
    assert config['limits']['window'] == 3
    assert config['oracle'] == {'max_dim': 7, 'max_t': 6}
    assert config['logging']['format'] == '%(asctime)s - %(levelname)s - %(message)s'


def test_user_file_is_merged(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("limits:\n  window: 5\n")
    config = load_config(str(path), environ={})
    assert config['limits'] == {'window': 5, 'd_max': 40}
    assert config['enumeration']['chunk_size'] == 65536


def test_environment_budget():
    assert load_config(environ={BUDGET_ENV_VAR: "1000"})['enumeration']['budget'] == 1000
    with pytest.raises(ParameterError):
        load_config(environ={BUDGET_ENV_VAR: "lots"})
    with pytest.raises(ParameterError):
        load_config(environ={BUDGET_ENV_VAR: "0"})


def test_missing_or_invalid_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "absent.yaml"), environ={})
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ParameterError):
        load_config(str(path), environ={})
