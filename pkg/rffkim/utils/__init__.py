"""通用工具"""

from .logging import setup_logger, get_logger
from .serialization import canonical_json, content_hash, save_to_file, load_from_file
from .helpers import ensure_dir, parse_int_list, parse_fraction

__all__ = [
    "setup_logger",
    "get_logger",
    "canonical_json",
    "content_hash",
    "save_to_file",
    "load_from_file",
    "ensure_dir",
    "parse_int_list",
    "parse_fraction",
]
