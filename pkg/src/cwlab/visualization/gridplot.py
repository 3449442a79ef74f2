"""
网格图可视化。

按顶点坐标绘制网格图：第 r 行画在 y = -r，第 c 列画在 x = c，
行号从上往下递增，第 1 行在最上方。
"""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path
from typing import TYPE_CHECKING

import matplotlib.pyplot as plt

from cwlab.errors import GraphError

if TYPE_CHECKING:
    from cwlab.gridgraphs import Graph


def plot_grid_graph(
    g: Graph,
    highlight: Iterable[int] | None = None,
    title: str = "网格图",
    save_path: str | Path | None = None,
    show: bool = True,
) -> plt.Figure:
    """
    在网格坐标上绘制图。

    Args:
        g: 带坐标的图
        highlight: 需要突出显示的顶点（例如 X/Y 划分中的 X）
        title: 图表标题
        save_path: 保存路径（可选）
        show: 是否显示图表

    Returns:
        matplotlib Figure 对象

    Raises:
        GraphError: 如果有顶点没有坐标

    示例：
        >>> from cwlab.gridgraphs import build_H
        >>> from cwlab.words import PeriodicWord
        >>> fig = plot_grid_graph(build_H(PeriodicWord("23"), 1, 1, 3, 4), show=False)
    """
    missing = [v for v in g.vertices if g.coord(v) is None]
    if missing:
        raise GraphError(f"顶点 {missing[:5]} 没有网格坐标，无法绘制")
    marked = set(highlight or ())

    def position(v: int) -> tuple[int, int]:
        row, col = g.coords[v]
        return col, -row

    cols = g.columns()
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(cols)), 5))

    for u, v in g.edges:
        (x1, y1), (x2, y2) = position(u), position(v)
        ax.plot([x1, x2], [y1, y2], color="#9E9E9E", linewidth=0.8, zorder=1)

    plain = [position(v) for v in g.vertices if v not in marked]
    special = [position(v) for v in g.vertices if v in marked]
    if plain:
        ax.scatter(*zip(*plain), s=80, color="#45B7D1", zorder=2, label="顶点")
    if special:
        ax.scatter(*zip(*special), s=80, color="#FF6B6B", zorder=3, label="突出顶点")

    if len(g) <= 60:
        for v in g.vertices:
            x, y = position(v)
            ax.annotate(
                str(v), (x, y), xytext=(4, 4), textcoords="offset points", fontsize=7
            )

    ax.set_xlabel("列", fontsize=12)
    ax.set_ylabel("行", fontsize=12)
    ax.set_xticks(list(cols))
    rows = sorted({r for r, _ in g.coords.values()})
    ax.set_yticks([-r for r in rows], [str(r) for r in rows])
    ax.set_title(title, fontsize=16, fontweight="bold")
    if special:
        ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3, linestyle="--")

    plt.tight_layout()

    if save_path:
        fig.savefig(save_path, dpi=150, bbox_inches="tight")

    if show:
        plt.show()

    return fig
