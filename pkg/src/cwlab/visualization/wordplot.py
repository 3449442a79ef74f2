"""
词的组合性质可视化。
"""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path

import matplotlib.pyplot as plt

from cwlab.errors import InvalidWordError
from cwlab.words import WordSpec, factor_complexity, format_word, gap_report


def plot_gap_profile(
    w: WordSpec,
    beta: str | Iterable[int],
    horizon: int = 500,
    bound: int | None = None,
    title: str = "β-间隙权重",
    save_path: str | Path | None = None,
    show: bool = True,
) -> plt.Figure:
    """
    绘制 β 相邻两次出现之间的间隙因子权重。

    Args:
        w: 词
        beta: 因子 β
        horizon: 检查的前缀长度
        bound: 已知上界（可选，画成虚线）
        title: 图表标题
        save_path: 保存路径（可选）
        show: 是否显示图表

    Returns:
        matplotlib Figure 对象

    Raises:
        InvalidWordError: β 在视界内出现不足两次
    """
    report = gap_report(w, beta, horizon)
    weights = report.gap_weights()
    if not weights:
        raise InvalidWordError(
            f"{format_word(report.factor)} 在前 {horizon} 个字母中出现不足两次"
        )

    fig, ax = plt.subplots(figsize=(12, 5))
    starts = list(report.occurrences[:-1])
    ax.bar(starts, weights, width=1.0, color="#45B7D1", alpha=0.8, label="间隙权重")
    ax.axhline(
        y=report.max_gap_weight,
        color="#4ECDC4",
        linestyle=":",
        linewidth=1.5,
        label=f"最大值: {report.max_gap_weight}",
    )
    if bound is not None:
        ax.axhline(
            y=bound, color="#FF6B6B", linestyle="--", linewidth=2, label=f"上界: {bound}"
        )

    ax.set_xlabel("出现位置", fontsize=12)
    ax.set_ylabel("权重", fontsize=12)
    heading = f"{title} (β={format_word(report.factor)})"
    ax.set_title(heading, fontsize=16, fontweight="bold")
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3, linestyle="--")

    plt.tight_layout()

    if save_path:
        fig.savefig(save_path, dpi=150, bbox_inches="tight")

    if show:
        plt.show()

    return fig


def plot_factor_complexity(
    w: WordSpec,
    max_len: int = 12,
    horizon: int = 2000,
    title: str = "因子复杂度",
    save_path: str | Path | None = None,
    show: bool = True,
) -> plt.Figure:
    """
    绘制 p(n)（n = 1..max_len），并以 n+1 作为 Sturmian 参考线。

    示例：
        >>> from cwlab.words import SturmianWord
        >>> fig = plot_factor_complexity(SturmianWord.golden(), show=False)
    """
    if max_len < 1:
        raise InvalidWordError(f"max_len 必须 ≥ 1，得到 {max_len}")
    lengths = list(range(1, max_len + 1))
    values = [factor_complexity(w, n, horizon) for n in lengths]

    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(lengths, values, marker="o", color="#45B7D1", linewidth=1.5, label="p(n)")
    ax.plot(
        lengths,
        [n + 1 for n in lengths],
        color="gray",
        linestyle=":",
        linewidth=1,
        label="n + 1",
    )

    ax.set_xlabel("因子长度 n", fontsize=12)
    ax.set_ylabel("不同因子数", fontsize=12)
    ax.set_title(f"{title}: {w.describe()}", fontsize=16, fontweight="bold")
    ax.legend(loc="upper left")
    ax.grid(True, alpha=0.3, linestyle="--")

    plt.tight_layout()

    if save_path:
        fig.savefig(save_path, dpi=150, bbox_inches="tight")

    if show:
        plt.show()

    return fig
