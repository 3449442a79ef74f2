"""
由词构造的有限图，以及通用的小图服务。

无限网格 P^α 的顶点为 v_{i,j}（第 i 行、第 j 列，行从上往下数），
相邻两列 C_j、C_{j+1} 之间的边由字母 α_j 决定：
- 0: i = k（匹配）
- 1: i ≠ k（匹配的补）
- 2: i ≤ k
- 3: i ≥ k

本模块提供：
- Graph: 不可变的简单无向图，可带网格坐标 (row, col)
- build_H / build_W / embed_W: 网格切片、对角见证图及其嵌入
- induced_subgraph / is_isomorphic / find_induced_embedding
- similarity_partition / is_prime: U-相似类与素性

同构与诱导子图匹配交给 networkx 的 VF2 实现，而不是手写回溯。
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
from networkx.algorithms import isomorphism

from cwlab.errors import GraphError, SizeCapError, UnknownVertexError
from cwlab.words import ExplicitWord, WordSpec, format_word, parse_word

logger = logging.getLogger(__name__)

Coord = tuple[int, int]

# is_prime 的默认规模上限
PRIME_CAP = 20


@dataclass(frozen=True)
class Graph:
    """
    有限简单无向图，顶点为稠密整数 id。

    Attributes:
        adjacency: 顶点 id → 邻居集合（必须对称、无自环）
        coords: 顶点 id → (row, col)，只为带网格嵌入的顶点记录

    坐标只是元数据：同构与宽度计算从不读取它们。
    """

    adjacency: Mapping[int, frozenset[int]]
    coords: Mapping[int, Coord] = field(default_factory=dict)

    def __post_init__(self) -> None:
        adj = {
            int(v): frozenset(int(u) for u in ns) for v, ns in self.adjacency.items()
        }
        for v, ns in adj.items():
            if v in ns:
                raise GraphError(f"顶点 {v} 有自环")
            for u in ns:
                if u not in adj:
                    raise UnknownVertexError(f"边 {v}-{u} 引用了不存在的顶点 {u}")
                if v not in adj[u]:
                    raise GraphError(f"邻接不对称: {v}→{u} 存在但 {u}→{v} 不存在")
        coords = {int(v): (int(rc[0]), int(rc[1])) for v, rc in self.coords.items()}
        unknown = set(coords) - set(adj)
        if unknown:
            raise UnknownVertexError(f"坐标引用了不存在的顶点 {sorted(unknown)}")
        if len(set(coords.values())) != len(coords):
            raise GraphError("两个顶点共用同一个网格坐标")
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "coords", coords)

    def __hash__(self) -> int:
        return hash((frozenset(self.edges), frozenset(self.adjacency)))

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int]],
        coords: Mapping[int, Coord] | None = None,
    ) -> Graph:
        """
        由顶点表和边表构造图。

        Raises:
            GraphError: 自环
            UnknownVertexError: 边引用了不在顶点表中的 id
        """
        adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for u, v in edges:
            if u not in adj or v not in adj:
                raise UnknownVertexError(f"边 {u}-{v} 引用了不存在的顶点")
            if u == v:
                raise GraphError(f"顶点 {u} 有自环")
            adj[u].add(v)
            adj[v].add(u)
        return cls({v: frozenset(ns) for v, ns in adj.items()}, dict(coords or {}))

    @classmethod
    def empty(cls) -> Graph:
        return cls({}, {})

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.adjacency))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """所有边 (u, v)，u < v，按字典序排列。"""
        return tuple(
            sorted((v, u) for v, ns in self.adjacency.items() for u in ns if v < u)
        )

    def __len__(self) -> int:
        return len(self.adjacency)

    def __contains__(self, v: object) -> bool:
        return v in self.adjacency

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self.adjacency[v]
        except KeyError:
            raise UnknownVertexError(f"顶点 {v} 不在图中") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors(u)

    def coord(self, v: int) -> Coord | None:
        self.neighbors(v)
        return self.coords.get(v)

    @property
    def has_coords(self) -> bool:
        """是否每个顶点都有网格坐标。"""
        return len(self.coords) == len(self.adjacency)

    def vertex_at(self, row: int, col: int) -> int | None:
        for v, rc in self.coords.items():
            if rc == (row, col):
                return v
        return None

    def columns(self) -> tuple[int, ...]:
        """被占用的列号（升序）。"""
        return tuple(sorted({c for _, c in self.coords.values()}))

    def column(self, col: int) -> tuple[int, ...]:
        """第 col 列的顶点，按行号从上到下。"""
        members = [(r, v) for v, (r, c) in self.coords.items() if c == col]
        return tuple(v for _, v in sorted(members))

    def row_of(self, v: int) -> int:
        rc = self.coord(v)
        if rc is None:
            raise GraphError(f"顶点 {v} 没有网格坐标")
        return rc[0]

    def col_of(self, v: int) -> int:
        rc = self.coord(v)
        if rc is None:
            raise GraphError(f"顶点 {v} 没有网格坐标")
        return rc[1]

    def without(self, ids: Iterable[int]) -> Graph:
        """删除一组顶点（坐标一并删除）。"""
        removed = set(ids)
        for v in removed:
            self.neighbors(v)
        return Graph(
            {v: ns - removed for v, ns in self.adjacency.items() if v not in removed},
            {v: rc for v, rc in self.coords.items() if v not in removed},
        )

    def with_coords(self, coords: Mapping[int, Coord]) -> Graph:
        return Graph(self.adjacency, coords)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for v in self.vertices:
            rc = self.coords.get(v)
            if rc is None:
                g.add_node(v)
            else:
                g.add_node(v, row=rc[0], col=rc[1])
        g.add_edges_from(self.edges)
        return g

    def to_dict(self) -> dict[str, Any]:
        """按 Graph JSON 模式导出（顶点按 id 排序）。"""
        vertices: list[dict[str, int]] = []
        for v in self.vertices:
            entry = {"id": v}
            rc = self.coords.get(v)
            if rc is not None:
                entry["row"], entry["col"] = rc
            vertices.append(entry)
        return {"vertices": vertices, "edges": [list(e) for e in self.edges]}


def graph_from_networkx(nx_graph: nx.Graph) -> Graph:
    """把 networkx 图转换为 Graph，顶点按遍历顺序重新编号为 0..n-1。"""
    index = {node: i for i, node in enumerate(nx_graph.nodes())}
    return Graph.from_edges(
        index.values(), ((index[u], index[v]) for u, v in nx_graph.edges())
    )


# =============================================================================
# 由词构造
# =============================================================================


def link_adjacent(letter: int, i: int, k: int) -> bool:
    """
    α-链接中 v_{i,j} 与 v_{k,j+1} 是否相邻。

    示例:
        >>> link_adjacent(2, 2, 5), link_adjacent(3, 2, 5)
        (True, False)
    """
    if letter == 0:
        return i == k
    if letter == 1:
        return i != k
    if letter == 2:
        return i <= k
    if letter == 3:
        return i >= k
    raise GraphError(f"非法字母 {letter}")


def build_H(w: WordSpec, i: int, j: int, m: int, n: int) -> Graph:
    """
    H^α_{i,j}(m, n)：P^α 中行 i..i+m-1、列 j..j+n-1 的诱导子图。

    顶点 id = (c-j)·m + (r-i)，坐标使用全局行号与列号。

    Args:
        w: 定义网格的词
        i, j: 左上角的行号和列号（≥ 1）
        m, n: 行数和列数（≥ 1）

    示例:
        >>> len(build_H(PeriodicWord("0"), 1, 1, 6, 6).edges)
        30
    """
    if m < 1 or n < 1:
        raise GraphError(f"窗口尺寸必须为正，得到 {m}×{n}")
    if i < 1 or j < 1:
        raise GraphError(f"窗口起点必须 ≥ 1，得到 ({i}, {j})")
    letters = w.factor(j, n - 1)

    def vid(r: int, c: int) -> int:
        return (c - j) * m + (r - i)

    coords = {vid(r, c): (r, c) for c in range(j, j + n) for r in range(i, i + m)}
    edges = []
    for offset, letter in enumerate(letters):
        c = j + offset
        for r in range(i, i + m):
            for k in range(i, i + m):
                if link_adjacent(letter, r, k):
                    edges.append((vid(r, c), vid(k, c + 1)))
    return Graph.from_edges(coords, edges, coords)


def w_vertex_id(n: int, x: int, y: int) -> int:
    """W^α_n 中 u_{x,y} 的顶点 id。"""
    return (x - 1) * n + (y - 1)


def build_W(w: WordSpec, n: int) -> Graph:
    """
    对角见证图 W^α_n。

    n×n 个顶点 u_{x,y}，第 m 条对角线 D_m = {u_{x,y} : x+y-1 = m}。
    u_{i,j} ∈ D_m 与 u_{k,l} ∈ D_{m+1} 相邻当且仅当
    (α_m = 2 且 k ≥ i) 或 (α_m = 3 且 l ≥ j)。

    Raises:
        GraphError: 如果 α_1..α_{2n-2} 中有不属于 {2,3} 的字母
    """
    if n < 1:
        raise GraphError(f"n 必须 ≥ 1，得到 {n}")
    letters = w.factor(1, 2 * n - 2)
    bad = [letter for letter in letters if letter not in (2, 3)]
    if bad:
        raise GraphError(
            f"W 图要求前 {2 * n - 2} 个字母属于 {{2,3}}，"
            f"得到 {format_word(letters)}"
        )
    cells = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
    edges = []
    for x, y in cells:
        m = x + y - 1
        if m > 2 * n - 2:
            continue
        letter = letters[m - 1]
        for x2, y2 in cells:
            if x2 + y2 - 1 != m + 1:
                continue
            if (letter == 2 and x2 >= x) or (letter == 3 and y2 >= y):
                edges.append((w_vertex_id(n, x, y), w_vertex_id(n, x2, y2)))
    return Graph.from_edges((w_vertex_id(n, x, y) for x, y in cells), edges)


@dataclass(frozen=True)
class Embedding:
    """诱导子图嵌入：模式顶点 id → 宿主顶点 id 的单射。"""

    mapping: Mapping[int, int]

    def image(self) -> frozenset[int]:
        return frozenset(self.mapping.values())

    def __len__(self) -> int:
        return len(self.mapping)


def embed_W(w: WordSpec, n: int) -> Embedding:
    """
    把 build_W(w, n) 嵌入 build_H(w, 1, 1, 2n-1, 2n-1)。

    u_{x,y} ↦ v_{i,j}，其中 j = x+y-1，
    i = n + x - 1 - #{m ≤ x+y-2 : α_m = 3}；特别地 u_{1,1} ↦ v_{n,1}。
    返回的映射指向宿主图的顶点 id。
    """
    build_W(w, n)
    size = 2 * n - 1
    letters = w.factor(1, 2 * n - 2)
    mapping = {}
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            col = x + y - 1
            threes = sum(1 for letter in letters[: x + y - 2] if letter == 3)
            row = n + x - 1 - threes
            mapping[w_vertex_id(n, x, y)] = (col - 1) * size + (row - 1)
    return Embedding(mapping)


def forbidden_window(beta: str | Iterable[int], rows: int = 3) -> Graph:
    """F_β = build_H(β, 1, 1, rows, |β|+1)，β 视为显式前缀。"""
    word = parse_word(beta)
    return build_H(ExplicitWord(word), 1, 1, rows, len(word) + 1)


# =============================================================================
# 通用图服务
# =============================================================================


def induced_subgraph(g: Graph, ids: Iterable[int]) -> Graph:
    """
    g[ids]，坐标保留。

    Raises:
        UnknownVertexError: 如果 ids 含有 g 之外的顶点
    """
    keep = set(ids)
    unknown = keep - set(g.adjacency)
    if unknown:
        raise UnknownVertexError(f"顶点 {sorted(unknown)} 不在图中")
    return Graph(
        {v: g.adjacency[v] & keep for v in keep},
        {v: rc for v, rc in g.coords.items() if v in keep},
    )


def is_isomorphic(g: Graph, h: Graph) -> bool:
    """两图是否同构（忽略坐标）。"""
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return False
    return bool(nx.is_isomorphic(g.to_networkx(), h.to_networkx()))


def find_induced_embedding(pattern: Graph, host: Graph) -> Embedding | None:
    """
    在 host 中寻找与 pattern 同构的诱导子图。

    使用 networkx 的 GraphMatcher（VF2），它的
    subgraph_isomorphisms_iter 正好枚举诱导子图同构；
    节点按 id 顺序加入，因此结果是确定的。

    Returns:
        找到时返回 pattern → host 的 Embedding，否则 None
    """
    if len(pattern) > len(host):
        return None
    if len(pattern) == 0:
        return Embedding({})
    matcher = isomorphism.GraphMatcher(host.to_networkx(), pattern.to_networkx())
    found = next(matcher.subgraph_isomorphisms_iter(), None)
    if found is None:
        return None
    return Embedding({p: h for h, p in sorted(found.items())})


def verify_embedding(pattern: Graph, host: Graph, embedding: Embedding) -> bool:
    """逐边双向检查诱导子图条件。"""
    mapping = embedding.mapping
    if set(mapping) != set(pattern.adjacency):
        return False
    if len(set(mapping.values())) != len(mapping):
        return False
    if not set(mapping.values()) <= set(host.adjacency):
        return False
    verts = pattern.vertices
    for a_idx, a in enumerate(verts):
        for b in verts[a_idx + 1 :]:
            if pattern.has_edge(a, b) != host.has_edge(mapping[a], mapping[b]):
                return False
    return True


@dataclass(frozen=True)
class SimilarityPartition:
    """U 按 “U 之外的邻居相同” 划分出的相似类。"""

    subset: frozenset[int]
    classes: tuple[frozenset[int], ...]

    @property
    def mu(self) -> int:
        """μ(U)：相似类个数。"""
        return len(self.classes)

    def class_of(self, v: int) -> int:
        """v 所在相似类的下标（从 0 开始）。"""
        for index, cls in enumerate(self.classes):
            if v in cls:
                return index
        raise UnknownVertexError(f"顶点 {v} 不在 U 中")


def similarity_partition(g: Graph, subset: Iterable[int]) -> SimilarityPartition:
    """
    U-相似划分：u, v ∈ U 同类当且仅当 N(u)∖U = N(v)∖U。

    类按最小顶点 id 排序。μ = 1 当且仅当 U 是模。
    """
    members = frozenset(subset)
    unknown = members - set(g.adjacency)
    if unknown:
        raise UnknownVertexError(f"顶点 {sorted(unknown)} 不在图中")
    groups: dict[frozenset[int], set[int]] = {}
    for v in sorted(members):
        groups.setdefault(g.adjacency[v] - members, set()).add(v)
    classes = sorted((frozenset(c) for c in groups.values()), key=min)
    return SimilarityPartition(members, tuple(classes))


def mu(g: Graph, subset: Iterable[int]) -> int:
    return similarity_partition(g, subset).mu


def is_connected(g: Graph) -> bool:
    if len(g) == 0:
        return True
    return bool(nx.is_connected(g.to_networkx()))


def connected_components(g: Graph) -> list[frozenset[int]]:
    """连通分支，按最小顶点 id 排序。"""
    parts = nx.connected_components(g.to_networkx())
    return sorted((frozenset(c) for c in parts), key=min)


@dataclass(frozen=True)
class PrimeResult:
    """素性检测结果；不是素图时 witness 为一个非平凡模。"""

    prime: bool
    witness: frozenset[int] | None = None

    def __bool__(self) -> bool:
        return self.prime


def _module_closure(g: Graph, a: int, b: int) -> frozenset[int]:
    """包含 {a, b} 的最小模。"""
    module = {a, b}
    queue = [b]
    while queue:
        y = queue.pop()
        for z in g.vertices:
            if z in module:
                continue
            if (z in g.adjacency[y]) != (z in g.adjacency[a]):
                module.add(z)
                queue.append(z)
    return frozenset(module)


def is_prime(g: Graph, cap: int | None = PRIME_CAP) -> PrimeResult:
    """
    图是否为素图（所有模都平凡）。

    对每一对顶点求包含它们的最小模：外部顶点一旦区分模内两点就被吸收，
    直到稳定。任一闭包不等于全图即为非平凡模。见证取最小的那个
    （先比大小，再比排序后的 id 序列）。≤ 2 个顶点的图视为素图。

    Args:
        g: 待检测的图
        cap: 顶点数上限；None 表示不限制

    Raises:
        SizeCapError: 顶点数超过 cap
    """
    if cap is not None and len(g) > cap:
        raise SizeCapError("gridgraphs.is_prime", len(g), cap)
    verts = g.vertices
    if len(verts) <= 2:
        return PrimeResult(True)
    best: frozenset[int] | None = None
    for index, a in enumerate(verts):
        for b in verts[index + 1 :]:
            closure = _module_closure(g, a, b)
            if len(closure) == len(verts):
                continue
            if best is None or (len(closure), sorted(closure)) < (
                len(best),
                sorted(best),
            ):
                best = closure
    if best is None:
        return PrimeResult(True)
    logger.debug("非平凡模: %s", sorted(best))
    return PrimeResult(False, best)
