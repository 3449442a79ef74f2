"""
gridgraphs 模块的单元测试。

测试 Graph、网格构造、对角见证图、诱导嵌入与素性。
"""

import networkx as nx
import pytest

from cwlab.errors import GraphError, SizeCapError, UnknownVertexError
from cwlab.gridgraphs import (
    Embedding,
    Graph,
    build_H,
    build_W,
    connected_components,
    embed_W,
    find_induced_embedding,
    forbidden_window,
    graph_from_networkx,
    induced_subgraph,
    is_connected,
    is_isomorphic,
    is_prime,
    link_adjacent,
    mu,
    similarity_partition,
    verify_embedding,
    w_vertex_id,
)
from cwlab.words import ExplicitWord, PeriodicWord, SturmianWord


@pytest.fixture
def p4() -> Graph:
    """路径 0-1-2-3。"""
    return Graph.from_edges(range(4), [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def claw() -> Graph:
    """K_{1,3}，中心为 0。"""
    return Graph.from_edges(range(4), [(0, 1), (0, 2), (0, 3)])


class TestGraph:
    """测试 Graph 的构造与校验。"""

    def test_from_edges(self, p4: Graph):
        assert p4.vertices == (0, 1, 2, 3)
        assert p4.edges == ((0, 1), (1, 2), (2, 3))
        assert p4.degree(1) == 2
        assert p4.has_edge(2, 1)
        assert len(p4) == 4

    def test_self_loop(self):
        with pytest.raises(GraphError):
            Graph.from_edges([0], [(0, 0)])

    def test_unknown_vertex(self):
        with pytest.raises(UnknownVertexError):
            Graph.from_edges([0], [(0, 1)])

    def test_asymmetric(self):
        """邻接必须对称。"""
        with pytest.raises(GraphError):
            Graph({0: frozenset({1}), 1: frozenset()})

    def test_shared_coordinate(self):
        with pytest.raises(GraphError):
            Graph.from_edges([0, 1], [], {0: (1, 1), 1: (1, 1)})

    def test_without(self):
        """删除顶点时坐标一并删除。"""
        g = build_H(PeriodicWord("0"), 1, 1, 2, 2)
        h = g.without([0])
        assert 0 not in h
        assert 0 not in h.coords
        assert h.has_coords

    def test_without_unknown(self, p4: Graph):
        with pytest.raises(UnknownVertexError):
            p4.without([9])

    def test_networkx_conversion(self, p4: Graph):
        nx_graph = p4.to_networkx()
        assert nx_graph.number_of_edges() == 3
        assert is_isomorphic(graph_from_networkx(nx.path_graph(4)), p4)

    def test_to_dict(self):
        g = Graph.from_edges([0, 1], [(0, 1)], {0: (1, 1)})
        assert g.to_dict() == {
            "vertices": [{"id": 0, "row": 1, "col": 1}, {"id": 1}],
            "edges": [[0, 1]],
        }


class TestBuildH:
    """测试网格切片 H。"""

    def test_link_rules(self):
        assert link_adjacent(0, 2, 2) and not link_adjacent(0, 2, 3)
        assert link_adjacent(1, 2, 3) and not link_adjacent(1, 2, 2)
        assert link_adjacent(2, 2, 5) and not link_adjacent(3, 2, 5)
        assert link_adjacent(3, 5, 2)

    def test_matching_grid(self):
        """字母 0 的网格是 m 条路径。"""
        g = build_H(PeriodicWord("0"), 1, 1, 6, 6)
        assert len(g.edges) == 30
        assert len(connected_components(g)) == 6

    def test_letter_two_is_p4(self):
        """H^2(2,2) 是 P4。"""
        g = build_H(PeriodicWord("2"), 1, 1, 2, 2)
        assert set(g.edges) == {(0, 2), (0, 3), (1, 3)}

    def test_global_coordinates(self):
        """顶点 id 从 0 开始，坐标使用全局行列号。"""
        g = build_H(PeriodicWord("23"), 2, 3, 2, 2)
        assert g.coord(0) == (2, 3)
        assert g.coord(3) == (3, 4)
        assert g.column(4) == (2, 3)

    def test_window_letters(self):
        """列 j 与 j+1 之间使用 α_j。"""
        w = ExplicitWord("0123")
        g = build_H(w, 1, 2, 2, 2)
        assert set(g.edges) == {(0, 3), (1, 2)}

    @pytest.mark.parametrize("args", [(0, 1, 2, 2), (1, 1, 0, 2), (1, 0, 2, 2)])
    def test_invalid_window(self, args):
        with pytest.raises(GraphError):
            build_H(PeriodicWord("2"), *args)


class TestBuildW:
    """测试对角见证图 W 及其嵌入。"""

    def test_w2_is_c4(self):
        g = build_W(PeriodicWord("23"), 2)
        assert len(g) == 4
        assert len(g.edges) == 4
        assert all(g.degree(v) == 2 for v in g.vertices)
        assert not g.has_edge(w_vertex_id(2, 1, 2), w_vertex_id(2, 2, 1))

    def test_bad_letters(self):
        with pytest.raises(GraphError):
            build_W(PeriodicWord("20"), 2)

    @pytest.mark.parametrize("period,n", [("23", 2), ("22", 2), ("23", 3), ("3", 3)])
    def test_formula_embedding(self, period: str, n: int):
        """坐标公式给出诱导嵌入。"""
        w = PeriodicWord(period)
        emb = embed_W(w, n)
        host = build_H(w, 1, 1, 2 * n - 1, 2 * n - 1)
        assert verify_embedding(build_W(w, n), host, emb)

    def test_first_vertex(self):
        """u_{1,1} 映射到 v_{n,1}。"""
        w = PeriodicWord("23")
        emb = embed_W(w, 3)
        host = build_H(w, 1, 1, 5, 5)
        assert host.coord(emb.mapping[w_vertex_id(3, 1, 1)]) == (3, 1)


class TestEmbedding:
    """测试同构与诱导嵌入。"""

    def test_isomorphic(self, p4: Graph):
        assert is_isomorphic(build_H(PeriodicWord("2"), 1, 1, 2, 2), p4)
        assert not is_isomorphic(build_H(PeriodicWord("1"), 1, 1, 2, 2), p4)

    def test_find_embedding(self):
        pattern = build_H(PeriodicWord("2"), 1, 1, 2, 2)
        host = build_H(PeriodicWord("2"), 1, 1, 3, 3)
        emb = find_induced_embedding(pattern, host)
        assert emb is not None
        assert len(emb) == 4
        assert verify_embedding(pattern, host, emb)

    def test_no_embedding(self):
        """有圈的 F_11 不能嵌入由路径组成的图。"""
        host = build_H(PeriodicWord("0"), 1, 1, 3, 6)
        assert find_induced_embedding(forbidden_window("11"), host) is None

    def test_verify_rejects_non_induced(self, p4: Graph):
        """缺边的映射不是诱导嵌入。"""
        triangle = Graph.from_edges(range(3), [(0, 1), (1, 2), (0, 2)])
        assert not verify_embedding(triangle, p4, Embedding({0: 0, 1: 1, 2: 2}))

    def test_forbidden_window_shape(self):
        f = forbidden_window("01")
        assert len(f) == 9
        assert f.columns() == (1, 2, 3)

    def test_sturmian_factor_embeds(self):
        """β 是因子时 F_β 可以嵌入。"""
        golden = SturmianWord.golden()
        host = build_H(golden, 1, 1, 3, 6)
        assert find_induced_embedding(forbidden_window("10"), host) is not None


class TestSimilarity:
    """测试 U-相似划分与 μ。"""

    def test_module_has_mu_one(self, claw: Graph):
        assert mu(claw, {1, 2, 3}) == 1

    def test_classes(self, p4: Graph):
        sim = similarity_partition(p4, {0, 1})
        assert sim.mu == 2
        assert sim.classes == (frozenset({0}), frozenset({1}))
        assert sim.class_of(1) == 1

    def test_class_of_unknown(self, p4: Graph):
        with pytest.raises(UnknownVertexError):
            similarity_partition(p4, {0}).class_of(3)

    def test_induced_subgraph(self):
        g = build_H(PeriodicWord("2"), 1, 1, 2, 2)
        sub = induced_subgraph(g, [0, 3])
        assert sub.edges == ((0, 3),)
        assert sub.coord(3) == (2, 2)


class TestPrime:
    """测试素性检测。"""

    def test_p4_prime(self, p4: Graph):
        assert is_prime(p4).prime

    def test_claw_not_prime(self, claw: Graph):
        result = is_prime(claw)
        assert not result
        assert result.witness == frozenset({1, 2})

    def test_small_graphs_prime(self):
        assert is_prime(Graph.from_edges([0, 1], []))

    def test_cap(self):
        g = build_H(PeriodicWord("2"), 1, 1, 3, 7)
        with pytest.raises(SizeCapError) as excinfo:
            is_prime(g)
        assert excinfo.value.cap == 20
        assert excinfo.value.size == 21

    def test_connectivity(self, p4: Graph):
        assert is_connected(p4)
        assert not is_connected(Graph.from_edges(range(3), [(0, 1)]))

    def test_components_sorted_by_smallest_vertex(self):
        g = Graph.from_edges(range(6), [(4, 5), (0, 2)])
        assert connected_components(g) == [
            frozenset({0, 2}),
            frozenset({1}),
            frozenset({3}),
            frozenset({4, 5}),
        ]
        assert is_connected(Graph.empty())


def coord_edges(g: Graph) -> set[frozenset[tuple[int, int]]]:
    """以坐标表示的边集。"""
    return {frozenset((g.coord(u), g.coord(v))) for u, v in g.edges}


class TestWindowRestriction:
    """大窗口限制到子窗口后与直接构造的子窗口一致。"""

    @pytest.mark.parametrize("period", ["0123", "23", "1", "302"])
    def test_column_prefix(self, period: str):
        """前若干列的顶点 id 与坐标都不变。"""
        w = PeriodicWord(period)
        big = build_H(w, 2, 3, 4, 6)
        for n in range(1, 7):
            keep = [v for v in big.vertices if big.col_of(v) < 3 + n]
            assert induced_subgraph(big, keep) == build_H(w, 2, 3, 4, n)

    @pytest.mark.parametrize("period", ["0123", "23", "1"])
    def test_inner_windows(self, period: str):
        w = PeriodicWord(period)
        big = build_H(w, 1, 1, 5, 6)
        for i, j, m, n in [(2, 2, 3, 3), (1, 3, 5, 4), (3, 1, 2, 6), (5, 6, 1, 1)]:
            keep = [
                v
                for v in big.vertices
                if i <= big.row_of(v) < i + m and j <= big.col_of(v) < j + n
            ]
            sub = induced_subgraph(big, keep)
            small = build_H(w, i, j, m, n)
            assert set(sub.coords.values()) == set(small.coords.values())
            assert coord_edges(sub) == coord_edges(small)


class TestWGraphLinks:
    """W 的边与嵌入后宿主网格中的链接规则一致。"""

    @pytest.mark.parametrize("period", ["2", "3", "23", "32"])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_edges_follow_links(self, period: str, n: int):
        w = PeriodicWord(period)
        pattern = build_W(w, n)
        host = build_H(w, 1, 1, 2 * n - 1, 2 * n - 1)
        emb = embed_W(w, n)
        for u in pattern.vertices:
            for v in pattern.vertices:
                (ru, cu), (rv, cv) = (host.coord(emb.mapping[x]) for x in (u, v))
                if cv == cu + 1:
                    expected = link_adjacent(w.letter_at(cu), ru, rv)
                else:
                    expected = cu == cv + 1 and link_adjacent(w.letter_at(cv), rv, ru)
                assert pattern.has_edge(u, v) == expected, (u, v)


class TestEmbeddingImage:
    """嵌入的像诱导出与模式同构的子图。"""

    @pytest.mark.parametrize("beta", ["1", "10", "011", "0110"])
    def test_forbidden_window_image(self, beta: str):
        host = build_H(PeriodicWord("0110"), 1, 1, 4, 8)
        pattern = forbidden_window(beta)
        emb = find_induced_embedding(pattern, host)
        assert emb is not None
        assert is_isomorphic(induced_subgraph(host, emb.image()), pattern)

    @pytest.mark.parametrize("period,n", [("23", 3), ("2", 2), ("3", 3)])
    def test_w_image(self, period: str, n: int):
        w = PeriodicWord(period)
        host = build_H(w, 1, 1, 2 * n - 1, 2 * n - 1)
        image = induced_subgraph(host, embed_W(w, n).image())
        assert is_isomorphic(image, build_W(w, n))
