import json

import pytest

from occult_lattice import config
from occult_lattice.config import Config, get_config, load_config
from occult_lattice.enumeration import default_box


def test_defaults():
    assert load_config() == Config()
    assert Config().search_box == 6


def test_override_file(tmp_path, monkeypatch):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"search_box": 3, "brute_force_max_p": 7}))
    monkeypatch.setenv(config.ENV_VAR, str(p))
    cfg = get_config()
    assert cfg.search_box == 3 and cfg.brute_force_max_p == 7 and cfg.disc_form_bound == 10_000
    assert default_box().bound == 3
    monkeypatch.delenv(config.ENV_VAR)
    assert get_config() == Config()


def test_unknown_key(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"box": 3}))
    with pytest.raises(ValueError):
        load_config(p)
