"""并行执行器：线程池 + 按提交顺序返回结果"""

import concurrent.futures
import logging
from typing import Callable, Iterable, List, Optional, TypeVar

from ..core.config import get_config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class ParallelExecutor:
    """
    有序并行映射

    结果顺序与输入顺序一致，下游的归约因此与线程数无关。

    Args:
        max_workers: 线程数上限，默认取 RFFKIM_THREADS
    """

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max(1, max_workers or get_config().threads)
        self.executor = (
            concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers)
            if self.max_workers > 1
            else None
        )

    def map(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        items = list(items)
        if self.executor is None or len(items) <= 1:
            return [func(item) for item in items]
        logger.debug("🚀 并行执行 %d 个任务（%d 线程）", len(items), self.max_workers)
        futures = [self.executor.submit(func, item) for item in items]
        return [future.result() for future in futures]

    def close(self):
        """关闭执行器"""
        if self.executor is not None:
            self.executor.shutdown(wait=True)
            self.executor = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()


def parallel_map(func: Callable[[T], R], items: Iterable[T], max_workers: Optional[int] = None) -> List[R]:
    """便捷函数：有序并行映射"""
    with ParallelExecutor(max_workers) as executor:
        return executor.map(func, items)
