"""
cliquewidth 模块的单元测试。

测试表达式求值、S-表达式、精确团宽度与构造性上界。
"""

import itertools

import networkx as nx
import pytest

from cwlab.cliquewidth import (
    Create,
    DisjointUnion,
    Join,
    Relabel,
    brute_force_cliquewidth,
    compose_partition_expression,
    evaluate,
    exact_cliquewidth,
    grid_expression,
    label_count,
    parse_sexp,
    path_forest_expression,
    row_partition,
    row_partition_expression,
    to_sexp,
)
from cwlab.errors import (
    ExpressionError,
    PartitionBoundError,
    SizeCapError,
)
from cwlab.gridgraphs import (
    Graph,
    build_H,
    build_W,
    graph_from_networkx,
    induced_subgraph,
    is_isomorphic,
)
from cwlab.words import ExplicitWord, PeriodicWord


@pytest.fixture
def edge_expr():
    """一条边的 2-表达式。"""
    return Join(1, 2, DisjointUnion(Create(1, "a"), Create(2, "b")))


def path(n: int) -> Graph:
    return Graph.from_edges(range(n), [(v, v + 1) for v in range(n - 1)])


class TestExpressions:
    """测试表达式的构造与求值。"""

    def test_evaluate_edge(self, edge_expr):
        lg = evaluate(edge_expr)
        assert lg.graph.edges == ((0, 1),)
        assert lg.tags == {0: "a", 1: "b"}
        assert lg.labels == {0: 1, 1: 2}
        assert label_count(edge_expr) == 2

    def test_integer_tags_are_ids(self):
        """标记全为整数时直接作为顶点 id。"""
        e = Join(1, 2, DisjointUnion(Create(1, 7), Create(2, 3)))
        lg = evaluate(e)
        assert lg.graph.vertices == (3, 7)
        assert lg.graph.has_edge(3, 7)

    def test_relabel_before_join(self):
        """重标号后原标签为空，Join 不加边。"""
        e = Join(1, 2, Relabel(1, 2, DisjointUnion(Create(1, 0), Create(2, 1))))
        lg = evaluate(e)
        assert lg.graph.edges == ()
        assert set(lg.labels.values()) == {2}

    def test_duplicate_tag(self):
        with pytest.raises(ExpressionError):
            evaluate(DisjointUnion(Create(1, "a"), Create(2, "a")))

    def test_join_same_label(self):
        with pytest.raises(ExpressionError):
            Join(1, 1, Create(1, 0))

    def test_non_positive_label(self):
        with pytest.raises(ExpressionError):
            Create(0, "a")

    def test_deep_expression(self):
        """长链表达式不触发递归深度限制。"""
        e = path_forest_expression(path(3000))
        assert len(evaluate(e).graph.edges) == 2999


class TestSexp:
    """测试 S-表达式的打印与解析。"""

    def test_print(self, edge_expr):
        assert to_sexp(edge_expr) == "(join 1 2 (union (create 1 a) (create 2 b)))"

    def test_parse(self, edge_expr):
        assert parse_sexp(to_sexp(edge_expr)) == edge_expr

    def test_quoted_tag(self):
        """含空格的标记需要加引号。"""
        e = Create(1, "v 1")
        assert to_sexp(e) == '(create 1 "v 1")'
        assert parse_sexp(to_sexp(e)) == e

    @pytest.mark.parametrize(
        "text",
        ["", "(create 1)", "(frob 1 2)", "(create 1 a))", "(union (create 1 a)", "x"],
    )
    def test_malformed(self, text: str):
        with pytest.raises(ExpressionError):
            parse_sexp(text)


class TestExactCliqueWidth:
    """测试小图上的精确团宽度。"""

    @pytest.mark.parametrize(
        "nx_graph,width",
        [
            (nx.empty_graph(3), 1),
            (nx.complete_graph(2), 2),
            (nx.complete_graph(4), 2),
            (nx.complete_bipartite_graph(2, 3), 2),
            (nx.cycle_graph(4), 2),
            (nx.path_graph(4), 3),
            (nx.cycle_graph(5), 3),
            (nx.path_graph(6), 3),
            (nx.grid_2d_graph(3, 3), 4),
        ],
    )
    def test_known_widths(self, nx_graph, width: int):
        g = graph_from_networkx(nx_graph)
        result = exact_cliquewidth(g)
        assert result.width == width
        assert result.witness is not None
        assert label_count(result.witness) == width
        assert evaluate(result.witness).graph.adjacency == g.adjacency

    def test_exceeded(self):
        """k_max 不够时返回 None 而不是报错。"""
        result = exact_cliquewidth(path(4), k_max=2)
        assert result.exceeded
        assert result.witness is None

    def test_empty_graph(self):
        assert exact_cliquewidth(Graph.empty()).width == 0

    def test_cap(self):
        with pytest.raises(SizeCapError) as excinfo:
            exact_cliquewidth(path(11))
        assert excinfo.value.cap == 10

    def test_grid_slice(self):
        """H^2(2,2) 是 P4。"""
        g = build_H(PeriodicWord("2"), 1, 1, 2, 2)
        assert exact_cliquewidth(g).width == 3


def has_induced_p4(nx_graph: nx.Graph) -> bool:
    p4 = nx.path_graph(4)
    return any(
        nx.is_isomorphic(nx_graph.subgraph(quad), p4)
        for quad in itertools.combinations(nx_graph.nodes(), 4)
    )


class TestBruteForce:
    """测试不依赖剪枝的穷举团宽度。"""

    @pytest.mark.parametrize(
        "nx_graph,width",
        [
            (nx.empty_graph(3), 1),
            (nx.complete_graph(2), 2),
            (nx.cycle_graph(4), 2),
            (nx.path_graph(4), 3),
            (nx.cycle_graph(5), 3),
        ],
    )
    def test_known_widths(self, nx_graph, width: int):
        assert brute_force_cliquewidth(graph_from_networkx(nx_graph)) == width

    def test_empty_graph(self):
        assert brute_force_cliquewidth(Graph.empty()) == 0

    def test_exceeded(self):
        assert brute_force_cliquewidth(path(4), k_max=2) is None

    def test_cap(self):
        with pytest.raises(SizeCapError) as excinfo:
            brute_force_cliquewidth(path(7))
        assert excinfo.value.cap == 6

    def test_agrees_with_exact(self):
        """4 个顶点以内的全部图上两种求法一致。"""
        for nx_graph in nx.graph_atlas_g()[1:19]:
            g = graph_from_networkx(nx_graph)
            assert brute_force_cliquewidth(g) == exact_cliquewidth(g).width


class TestCographs:
    """团宽度 ≤ 2 当且仅当图中没有诱导 P4。"""

    def test_atlas(self):
        for nx_graph in nx.graph_atlas_g()[1:53]:
            g = graph_from_networkx(nx_graph)
            at_most_two = exact_cliquewidth(g, k_max=2).width is not None
            assert at_most_two == (not has_induced_p4(nx_graph))


class TestHereditary:
    """诱导子图的团宽度不超过原图。"""

    @pytest.mark.parametrize("nx_graph", [nx.cycle_graph(6), nx.path_graph(6)])
    def test_all_induced_subgraphs(self, nx_graph):
        g = graph_from_networkx(nx_graph)
        width = exact_cliquewidth(g).width
        assert width is not None
        for size in range(1, len(g)):
            for keep in itertools.combinations(g.vertices, size):
                sub_width = exact_cliquewidth(induced_subgraph(g, keep)).width
                assert sub_width is not None and sub_width <= width


class TestWGraphWidth:
    """W_n 的团宽度至少为 ⌈n/2⌉。"""

    @pytest.mark.parametrize("period", ["2", "3", "23"])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_lower_bound(self, period: str, n: int):
        width = exact_cliquewidth(build_W(PeriodicWord(period), n)).width
        assert width is not None
        assert width >= (n + 1) // 2


class TestConstructions:
    """测试构造性上界。"""

    def test_path_forest(self):
        g = build_H(PeriodicWord("0"), 1, 1, 3, 4)
        e = path_forest_expression(g)
        assert label_count(e) <= 3
        assert evaluate(e).graph.adjacency == g.adjacency

    def test_path_forest_rejects_claw(self):
        claw = Graph.from_edges(range(4), [(0, 1), (0, 2), (0, 3)])
        with pytest.raises(ExpressionError):
            path_forest_expression(claw)

    def test_path_forest_rejects_cycle(self):
        with pytest.raises(ExpressionError):
            path_forest_expression(graph_from_networkx(nx.cycle_graph(5)))

    @pytest.mark.parametrize("period", ["23", "2", "13", "0102"])
    def test_grid_expression_bound(self, period: str):
        """标签数不超过 6t+3，且求值得到原图。"""
        w = PeriodicWord(period)
        e = grid_expression(w, 1, 1, 4, 4)
        t = sum(1 for letter in w.factor(1, 3) if letter != 0)
        assert label_count(e) <= 6 * t + 3
        assert evaluate(e).graph.adjacency == build_H(w, 1, 1, 4, 4).adjacency

    def test_grid_expression_offset_window(self):
        w = ExplicitWord("0312")
        e = grid_expression(w, 2, 2, 3, 3)
        assert is_isomorphic(evaluate(e).graph, build_H(w, 2, 2, 3, 3))

    def test_grid_expression_all_zero(self):
        with pytest.raises(ExpressionError):
            grid_expression(PeriodicWord("0"), 1, 1, 3, 3)

    def test_row_partition(self):
        g = build_H(PeriodicWord("2"), 1, 1, 3, 3)
        plan = row_partition(g)
        assert len(plan.parts) == 3
        assert plan.parts[0] == frozenset(g.vertex_at(1, c) for c in (1, 2, 3))
        e = row_partition_expression(g)
        assert evaluate(e).graph.adjacency == g.adjacency

    def test_row_partition_needs_coords(self):
        with pytest.raises(ExpressionError):
            row_partition(path(3))


class TestComposePartition:
    """测试按有序划分组合表达式。"""

    def test_singletons(self):
        """P4 按单点划分时 l = 2 足够。"""
        g = path(4)
        parts = [{v} for v in range(4)]
        e = compose_partition_expression(g, parts, [Create(1, v) for v in range(4)], 2)
        assert evaluate(e).graph.adjacency == g.adjacency
        assert label_count(e) <= 4

    def test_bound_violation(self):
        """前缀 {0,1} 的 μ 为 2，超过 l=1。"""
        g = path(4)
        parts = [{v} for v in range(4)]
        with pytest.raises(PartitionBoundError) as excinfo:
            compose_partition_expression(g, parts, [Create(1, v) for v in range(4)], 1)
        assert excinfo.value.index == 2

    def test_wrong_part_expression(self):
        g = path(4)
        parts = [{0, 1}, {2, 3}]
        right = path_forest_expression(Graph.from_edges([2, 3], [(2, 3)]))
        exprs = [DisjointUnion(Create(1, 0), Create(1, 1)), right]
        with pytest.raises(ExpressionError):
            compose_partition_expression(g, parts, exprs, 2)

    def test_overlapping_parts(self):
        g = path(3)
        with pytest.raises(ExpressionError):
            compose_partition_expression(
                g, [{0, 1}, {1, 2}], [Create(1, 0), Create(1, 1)], 2
            )

    def test_incomplete_cover(self):
        g = path(3)
        with pytest.raises(ExpressionError):
            compose_partition_expression(g, [{0}], [Create(1, 0)], 2)
