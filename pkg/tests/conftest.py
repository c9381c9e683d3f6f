"""测试公共夹具"""

import pytest

from rffkim.core.config import reset_config
from rffkim.core.constants import T_C
from rffkim.disorder import sample_field
from rffkim.lattice import build_box, build_rectangle


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """每个测试使用环境变量重新构建的全局配置"""
    monkeypatch.delenv("RFFKIM_THREADS", raising=False)
    monkeypatch.delenv("RFFKIM_MAX_SWEEPS", raising=False)
    reset_config()
    yield
    reset_config()


@pytest.fixture
def box1():
    return build_box(1)


@pytest.fixture
def square2():
    """2×2 的四个顶点"""
    return build_rectangle(2, 2)


@pytest.fixture
def crit_T():
    return T_C


@pytest.fixture
def field_on():
    """按图与种子生成外场的工厂"""

    def make(graph, seed, epsilon):
        return sample_field(graph, seed, epsilon)

    return make


@pytest.fixture(autouse=True)
def fresh_logger():
    """测试结束后还原 rffkim 记录器：移除 stderr 处理器（pytest 捕获的流会在测试之间关闭），
    恢复 propagate（pytest 会给不传播的记录器额外挂上捕获处理器）"""
    import logging

    yield
    logger = logging.getLogger("rffkim")
    for handler in list(logger.handlers):
        if handler.get_name() == "rffkim-stderr":
            logger.removeHandler(handler)
    logger.propagate = True
