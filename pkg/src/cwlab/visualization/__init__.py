"""
可视化模块。

提供网格图与词的组合性质的图形化展示功能。
"""

from cwlab.visualization.gridplot import plot_grid_graph
from cwlab.visualization.wordplot import plot_factor_complexity, plot_gap_profile

__all__ = [
    "plot_grid_graph",
    "plot_gap_profile",
    "plot_factor_complexity",
]
