"""命令行入口：rffkim <子命令> [参数]"""

import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from ..core.config import get_config, update_config
from ..core.exceptions import ConfigException, RffkimException
from ..utils.logging import get_logger, setup_logger
from ..utils.serialization import serialize_object
from ..version import __version__
from .commands import CommandParameter, CommandRegistry, build_registry

logger = get_logger(__name__)

ARG_TYPES = {"integer": int, "number": float, "string": str}


def _add_parameter(parser: argparse.ArgumentParser, param: CommandParameter) -> None:
    flag = "--" + param.name.replace("_", "-")
    if param.type == "boolean":
        parser.add_argument(flag, dest=param.name, action="store_true", help=param.description)
        return
    kwargs = {
        "dest": param.name,
        "type": ARG_TYPES.get(param.type, str),
        "default": param.default,
        "required": param.required,
        "help": param.description,
    }
    if param.choices:
        kwargs["choices"] = param.choices
    parser.add_argument(flag, **kwargs)


def build_parser(registry: CommandRegistry) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rffkim", description="二维随机场 Ising / FK-Ising 工具")
    parser.add_argument("--version", action="version", version=f"rffkim {__version__}")
    parser.add_argument("--log-level", default=None, help="日志级别（默认 RFFKIM_LOG_LEVEL）")
    parser.add_argument("--threads", type=int, default=None, help="并行线程数（默认 RFFKIM_THREADS）")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in registry.list_commands():
        command = registry.get(name)
        sub = subparsers.add_parser(name, help=command.description, description=command.description)
        for param in command.get_parameters():
            _add_parameter(sub, param)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    解析参数并执行子命令

    Returns:
        退出码：0 成功，2 配置错误，3 资源守卫，1 其他错误
    """
    registry = build_registry()
    parser = build_parser(registry)
    args = parser.parse_args(argv)
    setup_logger("rffkim", args.log_level or get_config().log_level)

    parameters = {
        k: v for k, v in vars(args).items() if k not in ("command", "log_level", "threads")
    }
    try:
        if args.threads is not None:
            update_config(threads=max(1, args.threads))
        result = registry.execute(args.command, parameters)
    except ValidationError as e:
        logger.error("❌ 配置错误: %s", e)
        return ConfigException.exit_code
    except RffkimException as e:
        logger.error("❌ %s", e)
        return getattr(e, "exit_code", 1)
    sys.stdout.write(serialize_object(result))
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
