"""日志工具

rffkim 的日志统一挂在 "rffkim" 记录器下，只写 stderr；stdout 留给命令行的 JSON 结果。
"""

import logging
import sys
from typing import Optional

ROOT_LOGGER = "rffkim"
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
NOISY_LOGGERS = ("matplotlib", "PIL")

_HANDLER_NAME = "rffkim-stderr"


def setup_logger(
    name: str = ROOT_LOGGER,
    level: str = "INFO",
    format_string: Optional[str] = None,
) -> logging.Logger:
    """
    设置日志记录器

    重复调用只更新级别与输出流，不会叠加处理器（CLI 在同一进程中可被多次调用）。

    Args:
        name: 日志记录器名称
        level: 日志级别，无法识别时退回 INFO
        format_string: 日志格式

    Returns:
        配置好的日志记录器
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, str(level).upper(), logging.INFO))

    handler = next((h for h in logger.handlers if h.get_name() == _HANDLER_NAME), None)
    if handler is None:
        handler = logging.StreamHandler(sys.stderr)
        handler.set_name(_HANDLER_NAME)
        logger.addHandler(handler)
    else:
        handler.setStream(sys.stderr)
    handler.setFormatter(logging.Formatter(format_string or DEFAULT_FORMAT))
    logger.propagate = False

    return logger


def get_logger(name: str = ROOT_LOGGER) -> logging.Logger:
    """获取 rffkim 命名空间下的日志记录器"""
    if name != ROOT_LOGGER and not name.startswith(ROOT_LOGGER + "."):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


def quiet_third_party(level: int = logging.WARNING) -> None:
    """压低作图等第三方库的日志"""
    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(level)
