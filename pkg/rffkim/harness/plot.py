"""扫描结果的 SVG 图：tv_mean ± tv_se 对 N，每个 ε 方案一条曲线"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from ..core.exceptions import SchemaError  # noqa: E402

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("N", "alpha", "tv_mean", "tv_se")

# 固定 id 盐与省略日期，使相同数据得到逐字节相同的 SVG
SVG_RC = {
    "svg.hashsalt": "rffkim",
    "svg.fonttype": "none",
    "axes.unicode_minus": False,
}


def schedule_label(alpha: float) -> str:
    """α 的图例名，例如 α=15/16"""
    frac = Fraction(float(alpha)).limit_denominator(64)
    return f"α={frac}"


def check_columns(frame: pd.DataFrame, required: Sequence[str] = REQUIRED_COLUMNS) -> None:
    for column in required:
        if column not in frame.columns:
            raise SchemaError(f"CSV 缺少列: {column}")


def emit_plot(csv_path: Union[str, Path], out_path: Union[str, Path], title: Optional[str] = None) -> Path:
    """
    由扫描 CSV 生成 SVG

    Args:
        csv_path: 扫描 CSV
        out_path: 输出 SVG 路径
        title: 图标题

    Returns:
        SVG 路径

    Raises:
        SchemaError: 缺少必需列
    """
    frame = pd.read_csv(csv_path)
    check_columns(frame)
    out_path = Path(out_path)
    with plt.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(6, 4))
        for alpha, group in frame.sort_values(["alpha", "N"]).groupby("alpha", sort=True):
            ax.errorbar(
                group["N"],
                group["tv_mean"],
                yerr=group["tv_se"],
                marker="o",
                capsize=3,
                label=schedule_label(alpha),
            )
        ax.set_xlabel("N")
        ax.set_ylabel("TV")
        ax.set_ylim(-0.05, 1.05)
        if title:
            ax.set_title(title)
        if len(frame):
            ax.legend()
        fig.tight_layout()
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    logger.info("📈 图已保存: %s", out_path)
    return out_path
