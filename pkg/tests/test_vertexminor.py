"""
vertexminor 模块的单元测试。

测试局部补、枢轴、割秩、秩宽度以及网格约化轨迹。
"""

import networkx as nx
import pytest

from cwlab.errors import GraphError, ReductionError, SizeCapError, UnknownVertexError
from cwlab.gridgraphs import Graph, build_H, graph_from_networkx, is_isomorphic
from cwlab.vertexminor import (
    ONE_RESULTS,
    ONE_RULES,
    STEP_KINDS,
    ZERO_RULES,
    ReductionStep,
    ReductionTrace,
    bipartite_pivot,
    compact_grid,
    cut_rank,
    decomposition_leaves,
    decomposition_width,
    exact_rankwidth,
    gf2_rank,
    grid_word,
    local_complement,
    pivot,
    reduce_to_23,
    remove_one,
    remove_zero,
    replay,
)
from cwlab.words import ExplicitWord, PeriodicWord


@pytest.fixture
def p4() -> Graph:
    return Graph.from_edges(range(4), [(0, 1), (1, 2), (2, 3)])


class TestLocalOperations:
    """测试局部补与枢轴。"""

    def test_local_complement_p3(self):
        """P3 在中心处局部补得到三角形。"""
        p3 = Graph.from_edges([0, 1, 2], [(0, 1), (1, 2)])
        assert local_complement(p3, 1).edges == ((0, 1), (0, 2), (1, 2))

    def test_local_complement_involution(self, p4: Graph):
        assert local_complement(local_complement(p4, 1), 1) == p4

    def test_local_complement_keeps_coords(self):
        g = build_H(PeriodicWord("2"), 1, 1, 2, 2)
        assert local_complement(g, 0).coords == g.coords

    def test_local_complement_unknown(self, p4: Graph):
        with pytest.raises(UnknownVertexError):
            local_complement(p4, 7)

    def test_pivot_p4(self, p4: Graph):
        """P4 在中间边上枢轴得到 C4。"""
        assert pivot(p4, 1, 2).edges == ((0, 2), (0, 3), (1, 2), (1, 3))

    def test_pivot_matches_bipartite_formula(self):
        g = build_H(PeriodicWord("21"), 1, 1, 3, 3)
        for u, v in g.edges:
            assert pivot(g, u, v).adjacency == bipartite_pivot(g, u, v).adjacency
            assert pivot(g, u, v).adjacency == pivot(g, v, u).adjacency

    def test_pivot_needs_edge(self, p4: Graph):
        with pytest.raises(GraphError):
            pivot(p4, 0, 2)


class TestRank:
    """测试 GF(2) 秩、割秩与秩宽度。"""

    def test_gf2_rank(self):
        assert gf2_rank([[1, 1], [1, 1]]) == 1
        assert gf2_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
        assert gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
        assert gf2_rank([]) == 0

    def test_cut_rank(self, p4: Graph):
        assert cut_rank(p4, {0, 1}) == 1
        assert cut_rank(p4, {0, 2}) == 2
        assert cut_rank(p4, set()) == 0
        assert cut_rank(p4, {0, 1, 2, 3}) == 0

    def test_cut_rank_unknown(self, p4: Graph):
        with pytest.raises(UnknownVertexError):
            cut_rank(p4, {9})

    @pytest.mark.parametrize(
        "nx_graph,width",
        [
            (nx.empty_graph(1), 0),
            (nx.empty_graph(3), 0),
            (nx.path_graph(5), 1),
            (nx.complete_graph(5), 1),
            (nx.cycle_graph(5), 2),
        ],
    )
    def test_exact_rankwidth(self, nx_graph, width: int):
        g = graph_from_networkx(nx_graph)
        result = exact_rankwidth(g)
        assert result.width == width
        if len(g) > 1:
            assert decomposition_leaves(result.decomposition) == frozenset(g.vertices)
            assert decomposition_width(g, result.decomposition) == width

    def test_rankwidth_cap(self):
        with pytest.raises(SizeCapError):
            exact_rankwidth(graph_from_networkx(nx.path_graph(9)))

    def test_vertex_minor_monotone(self):
        """局部补保持秩宽度。"""
        g = graph_from_networkx(nx.cycle_graph(6))
        assert exact_rankwidth(local_complement(g, 0)).width == exact_rankwidth(g).width


class TestTrace:
    """测试约化步骤与重放。"""

    def test_step_validation(self):
        with pytest.raises(ReductionError):
            ReductionStep("contract", (1,))
        with pytest.raises(ReductionError):
            ReductionStep("pivot", (1,))

    def test_replay(self, p4: Graph):
        steps = [
            ReductionStep("local-complement", (1,)),
            ReductionStep("delete", (1,)),
        ]
        assert replay(p4, steps).edges == ((0, 2), (2, 3))

    def test_compact_grid(self):
        g = build_H(PeriodicWord("00"), 1, 1, 3, 3)
        h = compact_grid(g.without(g.column(2) + (g.vertex_at(1, 1),)))
        assert h.columns() == (1, 2)
        assert h.coord(g.vertex_at(2, 1)) == (1, 1)
        assert h.coord(g.vertex_at(1, 3)) == (1, 2)

    def test_grid_word(self):
        g = build_H(ExplicitWord("0123"), 1, 1, 3, 5)
        assert grid_word(g) == (0, 1, 2, 3)

    def test_grid_word_rejects_long_edge(self):
        g = build_H(PeriodicWord("0"), 1, 1, 2, 3)
        bad = Graph.from_edges(g.vertices, g.edges + ((0, 4),), g.coords)
        with pytest.raises(ReductionError):
            grid_word(bad)


class TestRemoveZero:
    """测试 0 的消去。"""

    def test_double_zero(self):
        """00 → 0：中间列被消去，其余是匹配。"""
        g = build_H(ExplicitWord("00"), 1, 1, 2, 3)
        trace = remove_zero(g, 2, "00")
        assert trace.verify()
        assert trace.final.edges == ((0, 4), (1, 5))
        assert grid_word(trace.final) == (0,)

    @pytest.mark.parametrize("rule,m,rows", [("02", 8, 4), ("20", 8, 4), ("01", 6, 6)])
    def test_rules(self, rule: str, m: int, rows: int):
        g = build_H(ExplicitWord(rule), 1, 1, m, 3)
        trace = remove_zero(g, 2, rule)
        kept = rule.replace("0", "")
        assert trace.verify()
        assert len(trace.final.column(1)) == rows
        assert grid_word(trace.final) == (int(kept),)
        target = build_H(ExplicitWord(kept), 1, 1, rows, 2)
        assert is_isomorphic(trace.final, target)

    def test_odd_rows(self):
        """01 在奇数行时先删去最后一行。"""
        g = build_H(ExplicitWord("01"), 1, 1, 5, 3)
        trace = remove_zero(g, 2, "01")
        assert len(trace.final.column(1)) == 4
        assert grid_word(trace.final) == (1,)
        assert trace.steps[-1].kind == "delete"

    def test_wrong_letters(self):
        g = build_H(ExplicitWord("02"), 1, 1, 4, 3)
        with pytest.raises(ReductionError) as excinfo:
            remove_zero(g, 2, "00")
        assert excinfo.value.rule == "remove_zero[00]"

    def test_unknown_rule(self):
        g = build_H(ExplicitWord("22"), 1, 1, 4, 3)
        with pytest.raises(ReductionError):
            remove_zero(g, 2, "22")

    def test_too_few_rows(self):
        g = build_H(ExplicitWord("00"), 1, 1, 1, 3)
        with pytest.raises(ReductionError):
            remove_zero(g, 2, "00")


class TestRemoveOne:
    """测试 1 的消去。"""

    def test_212(self):
        """212 → 22，8 行剩下 3 行。"""
        g = build_H(ExplicitWord("212"), 1, 1, 8, 4)
        trace = remove_one(g, 1, "212")
        assert trace.verify()
        assert trace.steps[0].kind == "pivot"
        assert grid_word(trace.final) == (2, 2)
        assert len(trace.final.column(1)) == 3

    def test_too_few_rows(self):
        g = build_H(ExplicitWord("212"), 1, 1, 3, 4)
        with pytest.raises(ReductionError):
            remove_one(g, 1, "212")

    def test_wrong_letters(self):
        g = build_H(ExplicitWord("222"), 1, 1, 8, 4)
        with pytest.raises(ReductionError):
            remove_one(g, 1, "212")


class TestRulesAcrossRows:
    """每条 0 / 1 消去规则在 8..16 行（两种奇偶）上的结果。"""

    @staticmethod
    def assert_vertex_minor(trace: ReductionTrace, m: int, expected: str) -> None:
        assert trace.verify()
        assert all(step.kind in STEP_KINDS for step in trace.steps)
        assert set(trace.final.vertices) <= set(trace.initial.vertices)
        assert grid_word(trace.final) == tuple(int(ch) for ch in expected)
        rows = len(trace.final.column(trace.final.columns()[0]))
        assert rows >= m / 2 - 2
        target = build_H(ExplicitWord(expected), 1, 1, rows, len(expected) + 1)
        assert is_isomorphic(trace.final, target)

    @pytest.mark.parametrize("m", range(8, 17))
    @pytest.mark.parametrize("rule", ZERO_RULES)
    def test_zero_rule(self, rule: str, m: int):
        g = build_H(ExplicitWord(rule), 1, 1, m, 3)
        trace = remove_zero(g, 2, rule)
        self.assert_vertex_minor(trace, m, rule.replace("0", "", 1) or "0")

    @pytest.mark.parametrize("m", range(8, 17))
    @pytest.mark.parametrize("rule", ONE_RULES)
    def test_one_rule(self, rule: str, m: int):
        g = build_H(ExplicitWord(rule), 1, 1, m, 4)
        trace = remove_one(g, 1, rule)
        assert trace.steps[0].kind == "pivot"
        self.assert_vertex_minor(trace, m, ONE_RESULTS[rule])


class TestReduceTo23:
    """测试整词约化。"""

    def test_leading_zero(self):
        reduction = reduce_to_23(ExplicitWord("023"), 1, 3)
        assert reduction.gamma == (2, 3)
        assert reduction.q == 2
        assert reduction.rows == 12
        assert reduction.final_rows == 6
        assert reduction.rules == ("02",)
        assert reduction.trace.verify()

    def test_already_23(self):
        """没有 0 和 1 时不做任何操作。"""
        reduction = reduce_to_23(PeriodicWord("23"), 1, 2)
        assert reduction.gamma == (2, 3)
        assert len(reduction.trace) == 0

    def test_no_23_letters(self):
        with pytest.raises(ReductionError):
            reduce_to_23(ExplicitWord("011"), 1, 3)

    def test_bad_length(self):
        with pytest.raises(ReductionError):
            reduce_to_23(PeriodicWord("2"), 1, 0)

    def test_to_dict(self):
        data = reduce_to_23(ExplicitWord("023"), 1, 3).to_dict()
        assert data["source"] == "023"
        assert data["gamma"] == "23"
        assert len(data["trace"]["steps"]) > 0

    def test_final_rows_below_q(self, monkeypatch: pytest.MonkeyPatch):
        """最终行数少于 q 时报错而不是静默返回。"""
        monkeypatch.setattr(
            "cwlab.vertexminor._TraceBuilder.uniform_rows", lambda self, rule: 1
        )
        with pytest.raises(ReductionError) as excinfo:
            reduce_to_23(PeriodicWord("23"), 1, 2)
        assert excinfo.value.rule == "reduce_to_23"
