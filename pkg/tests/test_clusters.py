"""
clusters 模块的单元测试。

测试连接与模块、簇图、Menger 分隔、边界吸收和条带流水线。
"""

import numpy as np
import pytest

from cwlab.cliquewidth import evaluate
from cwlab.clusters import (
    XYPartition,
    absorb_boundary_vertices,
    almost_periodic_bound,
    bar_partition,
    build_cluster_graph,
    column_modules,
    extract_link,
    max_disjoint_paths,
    recurrent_bound,
    standard_form,
    x_interval_counts,
    xy_graph_partition,
)
from cwlab.errors import ClusterError, ForbiddenPatternError
from cwlab.experiments import random_window
from cwlab.gridgraphs import Graph, build_H
from cwlab.words import PeriodicWord

TWO = PeriodicWord("2")


@pytest.fixture
def p4_grid() -> Graph:
    """H^2(2,2)：a1=0, a2=1, b1=2, b2=3。"""
    return build_H(TWO, 1, 1, 2, 2)


@pytest.fixture
def gapped() -> Graph:
    """第 1 列占第 1、3 行，第 2 列占第 2 行；只有 a1-b2 一条边。"""
    return Graph.from_edges([0, 1, 2], [(0, 2)], {0: (1, 1), 1: (3, 1), 2: (2, 2)})


class TestLinks:
    """测试连接、标准形与模块。"""

    def test_infer_letter(self, p4_grid: Graph):
        link = extract_link(p4_grid, 1)
        assert link.letter == 2
        assert link.left == (0, 1)
        assert link.right == (2, 3)

    def test_letter_mismatch(self, p4_grid: Graph):
        with pytest.raises(ClusterError):
            extract_link(p4_grid, 1, PeriodicWord("3"))

    def test_standard_form(self):
        g = build_H(TWO, 3, 1, 2, 2)
        link = standard_form(extract_link(g, 1, TWO))
        assert link.graph.coord(0) == (1, 1)
        assert link.graph.coord(3) == (2, 2)
        assert link.graph.adjacency == g.adjacency

    def test_modules(self, p4_grid: Graph):
        assert column_modules(p4_grid, 1, "right") == (frozenset({0}), frozenset({1}))
        assert column_modules(p4_grid, 2, "left") == (frozenset({2}), frozenset({3}))

    def test_module_without_neighbour_column(self, p4_grid: Graph):
        """相邻列不存在时整列是一个模块。"""
        assert column_modules(p4_grid, 1, "left") == (frozenset({0, 1}),)

    def test_bad_side(self, p4_grid: Graph):
        with pytest.raises(ClusterError):
            column_modules(p4_grid, 1, "up")


class TestClusterGraph:
    """测试簇图的构造。"""

    def test_p4(self, p4_grid: Graph):
        b = build_cluster_graph(p4_grid, TWO)
        assert b.column_sizes() == (2, 2, 2)
        assert b.clusters[2].members == frozenset({0, 2})
        assert b.clusters[2].kind == "paired"
        assert [(e.tail, e.head, e.vertex) for e in b.type_a] == [
            (0, 2, 0),
            (1, 3, 1),
            (2, 4, 2),
            (3, 5, 3),
        ]
        assert b.type_b == ((2, 3),)
        assert b.letters == (2,)

    def test_letter_three_points_up(self):
        b = build_cluster_graph(build_H(PeriodicWord("3"), 1, 1, 2, 2))
        assert b.type_b == ((3, 2),)

    def test_every_vertex_has_type_a_edge(self):
        g = build_H(PeriodicWord("23"), 1, 1, 3, 4)
        b = build_cluster_graph(g, PeriodicWord("23"), strict=False)
        assert sorted(e.vertex for e in b.type_a) == list(g.vertices)
        assert b.edge_of(5).vertex == 5

    def test_strict_rejects_boundary_modules(self, gapped: Graph):
        """两个右边界模块说明输入不是素图。"""
        with pytest.raises(ClusterError):
            build_cluster_graph(gapped, TWO)

    def test_non_strict(self, gapped: Graph):
        b = build_cluster_graph(gapped, TWO, strict=False)
        assert b.column_sizes() == (2, 3, 1)
        kinds = [b.clusters[c].kind for c in b.columns[1]]
        assert kinds == ["right-boundary", "left-boundary", "right-boundary"]
        assert b.type_b == ((2, 3), (3, 4))

    def test_empty(self):
        with pytest.raises(ClusterError):
            build_cluster_graph(Graph.empty())

    def test_gap_in_columns(self):
        g = Graph.from_edges([0, 1], [], {0: (1, 1), 1: (1, 3)})
        with pytest.raises(ClusterError):
            build_cluster_graph(g)

    def test_to_dict(self, p4_grid: Graph):
        data = build_cluster_graph(p4_grid, TWO).to_dict()
        assert data["letters"] == [2]
        assert data["columns"] == [[0, 1], [2, 3], [4, 5]]
        assert data["type_b"] == [[2, 3]]

    def test_to_networkx(self, p4_grid: Graph):
        d = build_cluster_graph(p4_grid, TWO).to_networkx()
        assert d.number_of_nodes() == 6
        assert d.number_of_edges() == 5

    def test_column_range(self):
        """cols 只取闭区间内的列。"""
        g = build_H(TWO, 1, 1, 2, 4)
        b = build_cluster_graph(g, TWO, cols=(2, 3))
        assert b.first_col == 2
        assert b.column_sizes() == (2, 2, 2)
        assert sorted(e.vertex for e in b.type_a) == [2, 3, 4, 5]

    @pytest.mark.parametrize("cols", [(3, 2), (7, 9)])
    def test_bad_column_range(self, cols):
        with pytest.raises(ClusterError):
            build_cluster_graph(build_H(TWO, 1, 1, 2, 4), TWO, cols=cols)


class TestClusterInvariants:
    """每个顶点恰好属于两个簇，A 型边与顶点一一对应。"""

    @pytest.mark.parametrize(
        "period,removed",
        [("2", []), ("3", [4]), ("23", [0, 7]), ("023", [5]), ("32", [1, 2, 6])],
    )
    def test_memberships(self, period: str, removed: list[int]):
        w = PeriodicWord(period)
        g = build_H(w, 1, 1, 3, 3).without(removed)
        b = build_cluster_graph(g, w, strict=False)
        for v in g.vertices:
            owners = [c for c in b.clusters.values() if v in c.members]
            assert len(owners) == 2, v
        assert len(b.type_a) == len(g)

    def test_gapped_memberships(self, gapped: Graph):
        b = build_cluster_graph(gapped, TWO, strict=False)
        for v in gapped.vertices:
            assert sum(v in c.members for c in b.clusters.values()) == 2
        assert len(b.type_a) == 3


class TestSeparator:
    """测试最大不交路与 X/Y 划分。"""

    def test_full_grid(self, p4_grid: Graph):
        """满网格有 k 条不交路。"""
        sp = max_disjoint_paths(build_cluster_graph(p4_grid, TWO))
        assert sp.s == 2
        assert sp.paths == ((0, 2, 4), (1, 3, 5))
        assert len(sp.separator) == 2
        assert all(c in path for c, path in zip(sp.separator, sp.paths))

    def test_missing_vertex(self, p4_grid: Graph):
        """去掉一个顶点后只剩一条路。"""
        g = p4_grid.without([3])
        b = build_cluster_graph(g, TWO, strict=False)
        sp = max_disjoint_paths(b)
        assert sp.s == 1
        assert sp.paths == ((0, 2, 4),)
        xy = xy_graph_partition(sp, b, g)
        assert xy.x | xy.y == frozenset(g.vertices)
        assert not xy.x & xy.y

    def test_no_arc_from_x_to_y(self):
        g = build_H(PeriodicWord("23"), 1, 1, 3, 3).without([4])
        b = build_cluster_graph(g, PeriodicWord("23"), strict=False)
        sp = max_disjoint_paths(b)
        for tail, head in b.arcs():
            assert not (tail in sp.x_nodes and head in sp.y_nodes)

    def test_partition_mismatch(self, p4_grid: Graph):
        b = build_cluster_graph(p4_grid, TWO)
        sp = max_disjoint_paths(b)
        other = build_cluster_graph(build_H(TWO, 1, 1, 3, 2), TWO)
        with pytest.raises(ClusterError):
            xy_graph_partition(sp, other, p4_grid)

    def test_interval_counts(self):
        g = build_H(TWO, 1, 1, 3, 1)
        xy = XYPartition(frozenset({0, 2}), frozenset({1}), 2, 1)
        assert x_interval_counts(xy, g) == {1: 2}

    def test_missing_corner_partition(self, p4_grid: Graph):
        """H^2(2,2) 去掉右下角：分隔集是左上角的外侧簇。"""
        g = p4_grid.without([3])
        b = build_cluster_graph(g, TWO, strict=False)
        sp = max_disjoint_paths(b)
        assert sp.separator == (0,)
        assert sp.x_nodes == frozenset({1, 3})
        assert sp.y_nodes == frozenset({2, 4})
        xy = xy_graph_partition(sp, b, g)
        assert xy.x == frozenset({1})
        assert xy.y == frozenset({0, 2})
        assert x_interval_counts(xy, g) == {1: 1, 2: 0}

    @pytest.mark.parametrize("period", ["2", "3", "023"])
    def test_full_grid_has_empty_x(self, period: str):
        w = PeriodicWord(period)
        g = build_H(w, 1, 1, 3, 3)
        b = build_cluster_graph(g, w, strict=False)
        sp = max_disjoint_paths(b)
        assert sp.s == 3
        xy = xy_graph_partition(sp, b, g)
        assert not xy.x
        assert all(count == 0 for count in x_interval_counts(xy, g).values())

    @pytest.mark.parametrize("period", ["2", "3", "23", "023"])
    def test_random_windows(self, period: str):
        """随机删点窗口：s ≤ k-1，X/Y 划分顶点，X 到 Y 没有有向边。"""
        w = PeriodicWord(period)
        rng = np.random.default_rng(11)
        for k in (2, 3, 4):
            for _ in range(10):
                g = random_window(build_H(w, 1, 2, k, k), rng)
                b = build_cluster_graph(g, w, strict=False)
                sp = max_disjoint_paths(b)
                assert sp.s <= k - 1
                for tail, head in b.arcs():
                    assert not (tail in sp.x_nodes and head in sp.y_nodes)
                xy = xy_graph_partition(sp, b, g)
                assert xy.x | xy.y == frozenset(g.vertices)
                assert not xy.x & xy.y
                cap = 4 * k * k - 3 * k
                assert xy.mu_x <= cap and xy.mu_y <= cap


class TestAbsorb:
    """测试边界吸收。"""

    def test_absorb_pairs_everything(self, gapped: Graph):
        absorbed = absorb_boundary_vertices(gapped, TWO)
        assert absorbed.added == frozenset({3, 4})
        assert absorbed.project(absorbed.graph.vertices) == frozenset({0, 1, 2})
        b = build_cluster_graph(absorbed.graph, TWO)
        assert {b.clusters[c].kind for c in b.columns[1]} == {"paired"}

    def test_letter_zero_untouched(self):
        g = build_H(PeriodicWord("0"), 1, 1, 2, 3)
        absorbed = absorb_boundary_vertices(g, PeriodicWord("0"))
        assert absorbed.added == frozenset()
        assert absorbed.graph == g


class TestBarPartition:
    """测试条带流水线。"""

    def test_bounds(self):
        assert almost_periodic_bound(2, 1) == 540
        assert recurrent_bound(2, 1) == 660

    def test_forbidden(self):
        with pytest.raises(ForbiddenPatternError):
            bar_partition(build_H(TWO, 1, 1, 3, 4), TWO, 1, 2, 2)

    @pytest.mark.parametrize(
        "mode,bound", [("almost-periodic", 540), ("recurrent", 660)]
    )
    def test_expression_is_exact(self, mode: str, bound: int):
        """组合表达式求值恰好是输入图。"""
        g = build_H(TWO, 1, 1, 3, 4)
        result = bar_partition(g, TWO, 1, 2, 2, mode=mode, check_forbidden=False)
        assert result.expression is not None
        assert evaluate(result.expression).graph.adjacency == g.adjacency
        assert frozenset().union(*result.parts) == frozenset(g.vertices)
        assert sum(len(p) for p in result.parts) == len(g)
        assert result.bound == bound
        assert result.gap == 1
        assert len(result.bars) == 2
        assert result.within_bound

    def test_absorb_keeps_partition(self):
        g = build_H(PeriodicWord("23"), 1, 1, 3, 4).without([0, 7])
        result = bar_partition(
            g, PeriodicWord("23"), 1, 2, 2, absorb=True, check_forbidden=False
        )
        assert frozenset().union(*result.parts) == frozenset(g.vertices)

    def test_empty_graph(self):
        result = bar_partition(Graph.empty(), TWO, 1, 2, 2)
        assert result.expression is None
        assert result.labels == 0
        assert result.bound == 540

    def test_beta_missing(self):
        w = PeriodicWord("2220")
        with pytest.raises(ClusterError) as excinfo:
            bar_partition(build_H(w, 1, 1, 2, 2), w, 4, 2, 2)
        assert not isinstance(excinfo.value, ForbiddenPatternError)

    @pytest.mark.parametrize(
        "kwargs", [{"mode": "periodic"}, {"k": 1}, {"window_len": 1}]
    )
    def test_bad_arguments(self, kwargs):
        args = {"beta_start": 1, "k": 2, "window_len": 2, **kwargs}
        with pytest.raises(ClusterError):
            bar_partition(build_H(TWO, 1, 1, 2, 2), TWO, **args)

    def test_to_dict(self):
        g = build_H(TWO, 1, 1, 2, 2)
        data = bar_partition(g, TWO, 1, 2, 2, check_forbidden=False).to_dict()
        assert data["mode"] == "almost-periodic"
        assert data["k"] == 2
        assert len(data["bars"]) == 1
