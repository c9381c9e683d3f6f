"""运行时配置、并行执行与序列化"""

import numpy as np
import pytest

from rffkim.core.config import GuardLimits, get_config, reset_config, update_config
from rffkim.core.exceptions import GuardException, TooLargeError
from rffkim.utils import canonical_json, content_hash, load_from_file, parse_fraction, parse_int_list, save_to_file
from rffkim.utils.executor import parallel_map
from rffkim.utils.logging import get_logger, setup_logger


class TestRuntimeConfig:
    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("RFFKIM_THREADS", "3")
        monkeypatch.setenv("RFFKIM_MAX_SWEEPS", "100")
        reset_config()
        config = get_config()
        assert config.threads == 3
        assert config.guards.max_total_sweeps == 100

    def test_update(self):
        assert update_config(threads=2).threads == 2
        assert get_config().threads == 2

    def test_guards(self):
        guards = GuardLimits(max_total_sweeps=10, max_box_side=4)
        guards.check_sweeps(10)
        with pytest.raises(GuardException) as info:
            guards.check_sweeps(11)
        assert info.value.exit_code == 3
        with pytest.raises(GuardException):
            guards.check_box(5)
        with pytest.raises(TooLargeError):
            guards.check_width("spin", 25)
        with pytest.raises(ValueError):
            GuardLimits(max_spin_bits=0)


class TestExecutor:
    @pytest.mark.parametrize("workers", [1, 4])
    def test_order(self, workers):
        assert parallel_map(lambda x: x * x, range(20), max_workers=workers) == [x * x for x in range(20)]


class TestSerialization:
    def test_canonical(self):
        assert canonical_json({"b": 1, "a": np.int64(2), "c": np.array([1.5])}) == '{"a":2,"b":1,"c":[1.5]}'
        assert content_hash({"a": 1, "b": 2}) == content_hash({"b": 2, "a": 1})

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "x.json"
        save_to_file({"flag": np.bool_(True), "n": np.float64(0.25)}, path)
        assert load_from_file(path) == {"flag": True, "n": 0.25}

    def test_parsers(self):
        assert parse_int_list("8, 16,32") == [8, 16, 32]
        assert parse_int_list("") == []
        assert parse_fraction("15/16") == parse_fraction("0.9375")


class TestLogging:
    def test_setup_is_idempotent(self):
        logger = setup_logger("rffkim", "DEBUG")
        setup_logger("rffkim", "warning")
        assert len(logger.handlers) == 1
        assert logger.level == 30
        assert setup_logger("rffkim", "nonsense").level == 20

    def test_namespace(self):
        assert get_logger("mcmc").name == "rffkim.mcmc"
        assert get_logger("rffkim.harness.cli").name == "rffkim.harness.cli"
        assert get_logger().name == "rffkim"
