"""
簇图、Menger 分隔与条带划分。

对嵌入在 P^α 中的图 G：
- 每条 α_j-连接 G_j（C_j ∪ C_{j+1} 的诱导子图）里，C_j 的右模块与
  C_{j+1} 的左模块按行重叠配对成簇，未配对的边界模块拆成单点簇
- 簇图 B(G) 的每一列对应一条连接，两端再各加一列外侧单点簇
- A 型边：两个相邻列的簇共享 G 的一个顶点时，从左指向右，并标记该顶点
- B 型边：同一列相邻两簇之间，α_j = 2 向下，α_j = 3 向上

在 B* 上求最大不交有向路（单位点容量最大流），得到分隔集 S 以及
X/Y 划分；A 型边的 X/Y 划分再投影为 G* 顶点的划分。

bar_partition 把整张图切成条带，在每个条带里找到 β 的一个出现并做上述划分，
得到 U_i = Y_{i-1} ∪ X_i，然后用 compose_partition_expression 组合出表达式。
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from cwlab.cliquewidth import (
    Expression,
    compose_partition_expression,
    label_count,
    partition_mu_profile,
    row_partition_expression,
)
from cwlab.errors import ClusterError, ForbiddenPatternError
from cwlab.gridgraphs import (
    Graph,
    build_H,
    find_induced_embedding,
    induced_subgraph,
    link_adjacent,
    similarity_partition,
)
from cwlab.words import LETTERS, WordSpec, format_word, weight

logger = logging.getLogger(__name__)

CLUSTER_KINDS = ("paired", "left-boundary", "right-boundary", "outer")
BAR_MODES = ("almost-periodic", "recurrent")


# =============================================================================
# 连接与模块
# =============================================================================


@dataclass(frozen=True)
class Link:
    """
    α_j-连接：G 在 C_j ∪ C_{j+1} 上的诱导子图。

    Attributes:
        col: 左列的列号 j
        letter: α_j
        left: C_j 中的顶点（从上到下）
        right: C_{j+1} 中的顶点（从上到下）
        graph: 诱导子图（带坐标）
    """

    col: int
    letter: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    graph: Graph

    def rows(self, ids: Iterable[int]) -> frozenset[int]:
        return frozenset(self.graph.row_of(v) for v in ids)


def _require_coords(g: Graph) -> None:
    if not g.has_coords:
        raise ClusterError("簇分析需要每个顶点都有网格坐标")


def infer_letter(g: Graph, col: int) -> int | None:
    """与 C_col、C_col+1 之间的边（按全局行号）一致的最小字母；都不一致时为 None。"""
    left, right = g.column(col), g.column(col + 1)
    for letter in LETTERS:
        if all(
            g.has_edge(u, v) == link_adjacent(letter, g.row_of(u), g.row_of(v))
            for u in left
            for v in right
        ):
            return letter
    return None


def extract_link(g: Graph, col: int, w: WordSpec | None = None) -> Link:
    """
    取出 C_col 与 C_col+1 之间的连接。

    给定 w 时字母取 α_col 并校验边；否则从边推断。

    Raises:
        ClusterError: 边与任何字母都不一致
    """
    _require_coords(g)
    left, right = g.column(col), g.column(col + 1)
    sub = induced_subgraph(g, left + right)
    if w is not None:
        letter = w.letter_at(col)
        if any(
            sub.has_edge(u, v) != link_adjacent(letter, sub.row_of(u), sub.row_of(v))
            for u in left
            for v in right
        ):
            raise ClusterError(f"第 {col} 列的连接与字母 {letter} 不一致")
    else:
        found = infer_letter(sub, col)
        if found is None:
            raise ClusterError(f"第 {col} 列的连接不符合任何字母")
        letter = found
    return Link(col, letter, left, right, sub)


def standard_form(link: Link) -> Link:
    """
    标准形：保持上下次序，把用到的行压缩为 1..m。

    模块不变（只改坐标）。
    """
    used = sorted(link.rows(link.left + link.right))
    rank = {r: i + 1 for i, r in enumerate(used)}
    coords = {v: (rank[r], c) for v, (r, c) in link.graph.coords.items()}
    graph = link.graph.with_coords(coords)
    return Link(link.col, link.letter, link.left, link.right, graph)


def column_modules(g: Graph, col: int, side: str) -> tuple[frozenset[int], ...]:
    """
    C_col 的左模块（side="left"，由 C_{col-1} 区分）或右模块（side="right"）。

    按最上面的顶点排序。相邻列不存在时整列是一个模块。
    """
    _require_coords(g)
    if side not in ("left", "right"):
        raise ClusterError(f"side 必须是 left 或 right，得到 {side!r}")
    members = g.column(col)
    other = frozenset(g.column(col - 1 if side == "left" else col + 1))
    groups: dict[frozenset[int], list[int]] = {}
    for v in members:
        groups.setdefault(g.adjacency[v] & other, []).append(v)
    modules = [frozenset(vs) for vs in groups.values()]
    return tuple(sorted(modules, key=lambda m: min(g.row_of(v) for v in m)))


# =============================================================================
# 簇图
# =============================================================================


@dataclass(frozen=True)
class Cluster:
    """
    簇图的一个顶点。

    Attributes:
        id: 簇编号
        column: 所在簇列（1 为左外侧列）
        members: G 的顶点
        kind: paired / left-boundary / right-boundary / outer
    """

    id: int
    column: int
    members: frozenset[int]
    kind: str


@dataclass(frozen=True)
class TypeAEdge:
    """从左列簇指向右列簇、携带共享顶点 vertex 的 A 型边。"""

    tail: int
    head: int
    vertex: int


@dataclass(frozen=True)
class ClusterGraph:
    """
    簇图 B(G)。

    Attributes:
        columns: 每个簇列的簇编号（从上到下），共 n+1 列
        clusters: 簇编号 → Cluster
        type_a: A 型边（每个 G 顶点恰好一条）
        type_b: B 型边 (tail, head)
        letters: 每个连接列的字母（对应簇列 2..n）
        first_col: G 最左列的列号
    """

    columns: tuple[tuple[int, ...], ...]
    clusters: Mapping[int, Cluster]
    type_a: tuple[TypeAEdge, ...]
    type_b: tuple[tuple[int, int], ...]
    letters: tuple[int, ...]
    first_col: int

    def column_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.columns)

    def arcs(self) -> list[tuple[int, int]]:
        """全部有向边（A 型边按端点去重）。"""
        seen = {(e.tail, e.head) for e in self.type_a} | set(self.type_b)
        return sorted(seen)

    def edge_of(self, v: int) -> TypeAEdge:
        for edge in self.type_a:
            if edge.vertex == v:
                return edge
        raise ClusterError(f"顶点 {v} 没有对应的 A 型边")

    def to_networkx(self) -> nx.DiGraph:
        d = nx.DiGraph()
        for cid, cluster in self.clusters.items():
            d.add_node(cid, column=cluster.column, kind=cluster.kind)
        for edge in self.type_a:
            d.add_edge(edge.tail, edge.head, kind="A")
        for tail, head in self.type_b:
            d.add_edge(tail, head, kind="B")
        return d

    def to_dict(self) -> dict[str, Any]:
        return {
            "first_col": self.first_col,
            "letters": list(self.letters),
            "columns": [list(c) for c in self.columns],
            "clusters": [
                {
                    "id": c.id,
                    "column": c.column,
                    "kind": c.kind,
                    "members": sorted(c.members),
                }
                for c in sorted(self.clusters.values(), key=lambda c: c.id)
            ],
            "type_a": [[e.tail, e.head, e.vertex] for e in self.type_a],
            "type_b": [list(e) for e in self.type_b],
        }


def _pair_link(link: Link, strict: bool) -> list[tuple[frozenset[int], str]]:
    """连接内的簇：(成员, 类型)。"""
    right_modules = column_modules(link.graph, link.col, "right")
    left_modules = column_modules(link.graph, link.col + 1, "left")
    clusters: list[tuple[frozenset[int], str]] = []
    used_left: set[int] = set()
    unmatched_right: list[frozenset[int]] = []
    for rm in right_modules:
        overlapping = [
            index
            for index, lm in enumerate(left_modules)
            if link.rows(rm) & link.rows(lm)
        ]
        free = [index for index in overlapping if index not in used_left]
        if strict:
            if len(overlapping) > 1:
                raise ClusterError(
                    f"第 {link.col} 列的右模块与多个左模块重叠（输入不是素图）"
                )
            shared = (
                link.rows(rm) & link.rows(left_modules[overlapping[0]])
                if overlapping
                else frozenset()
            )
            if len(shared) > 1:
                raise ClusterError(
                    f"第 {link.col} 列的模块在多于一行上重叠（输入不是素图）"
                )
        if not free:
            unmatched_right.append(rm)
            continue
        used_left.add(free[0])
        clusters.append((rm | left_modules[free[0]], "paired"))
    if strict and len(unmatched_right) > 1:
        raise ClusterError(f"第 {link.col} 列有多个右边界模块（输入不是素图）")
    for rm in unmatched_right:
        clusters.extend((frozenset({v}), "right-boundary") for v in rm)
    unmatched_left = [lm for i, lm in enumerate(left_modules) if i not in used_left]
    if strict and len(unmatched_left) > 1:
        raise ClusterError(f"第 {link.col + 1} 列有多个左边界模块（输入不是素图）")
    for lm in unmatched_left:
        clusters.extend((frozenset({v}), "left-boundary") for v in lm)
    return clusters


def link_clusters(
    link: Link, strict: bool = True
) -> tuple[tuple[frozenset[int], str], ...]:
    """连接的簇，按最上面的行（再按列）排序。"""
    found = _pair_link(link, strict)
    graph = link.graph

    def key(item: tuple[frozenset[int], str]) -> tuple[int, int]:
        members = item[0]
        rows = min(graph.row_of(v) for v in members)
        return (rows, min(graph.col_of(v) for v in members))

    return tuple(sorted(found, key=key))


def build_cluster_graph(
    g: Graph,
    w: WordSpec | None = None,
    strict: bool = True,
    cols: tuple[int, int] | None = None,
) -> ClusterGraph:
    """
    构造簇图 B(G)。

    Args:
        g: 带坐标、占据连续列的图
        w: 定义网格的词；为 None 时从边推断每条连接的字母
        strict: 为 True 时，任何非素图的迹象（两个簇共享多个顶点、模块多行重叠、
            多个边界模块）都抛出 ClusterError；为 False 时继续构造并记录警告
        cols: 闭区间 (first, last)；给定时只用这些列上的诱导子图

    Raises:
        ClusterError: 图为空、列不连续、列区间无效，或 strict 下输入不是素图
    """
    _require_coords(g)
    if cols is not None:
        first, last = cols
        if first > last:
            raise ClusterError(f"列区间无效: {cols}")
        g = induced_subgraph(
            g, (v for v, (_, c) in g.coords.items() if first <= c <= last)
        )
    occupied = g.columns()
    if not occupied:
        raise ClusterError("空图没有簇图")
    if occupied != tuple(range(occupied[0], occupied[-1] + 1)):
        raise ClusterError(f"图占据的列不连续: {list(occupied)}")

    clusters: dict[int, Cluster] = {}
    columns: list[tuple[int, ...]] = []
    left_of: dict[int, int] = {}
    right_of: dict[int, int] = {}

    def add(members: frozenset[int], kind: str, column: int) -> int:
        cid = len(clusters)
        clusters[cid] = Cluster(cid, column, members, kind)
        return cid

    outer_left = tuple(
        add(frozenset({v}), "outer", 1) for v in g.column(occupied[0])
    )
    for cid in outer_left:
        (v,) = clusters[cid].members
        left_of[v] = cid
    columns.append(outer_left)

    letters = []
    for offset, col in enumerate(occupied[:-1]):
        link = extract_link(g, col, w)
        letters.append(link.letter)
        ids = []
        for members, kind in link_clusters(link, strict):
            cid = add(members, kind, offset + 2)
            ids.append(cid)
            for v in members:
                if g.col_of(v) == col:
                    right_of[v] = cid
                else:
                    left_of[v] = cid
        columns.append(tuple(ids))

    outer_right = tuple(
        add(frozenset({v}), "outer", len(occupied) + 1)
        for v in g.column(occupied[-1])
    )
    for cid in outer_right:
        (v,) = clusters[cid].members
        right_of[v] = cid
    columns.append(outer_right)

    type_a = tuple(
        TypeAEdge(left_of[v], right_of[v], v)
        for v in sorted(g.adjacency, key=lambda v: (g.col_of(v), g.row_of(v)))
    )
    shared: dict[tuple[int, int], int] = {}
    for edge in type_a:
        shared[(edge.tail, edge.head)] = shared.get((edge.tail, edge.head), 0) + 1
    multiple = [pair for pair, count in shared.items() if count > 1]
    if multiple:
        if strict:
            raise ClusterError(f"簇 {multiple[0]} 共享多个顶点（输入不是素图）")
        logger.warning("有 %d 对簇共享多个顶点，输入不是素图", len(multiple))

    type_b = []
    for letter, ids in zip(letters, columns[1:-1]):
        for upper, lower in zip(ids, ids[1:]):
            if letter == 2:
                type_b.append((upper, lower))
            elif letter == 3:
                type_b.append((lower, upper))

    logger.debug("簇图列大小: %s", [len(c) for c in columns])
    return ClusterGraph(
        tuple(columns),
        clusters,
        type_a,
        tuple(type_b),
        tuple(letters),
        occupied[0],
    )


# =============================================================================
# Menger 分隔
# =============================================================================


@dataclass(frozen=True)
class SeparatorPartition:
    """
    B_1 → B_{k+1} 的最大不交有向路、分隔集与 X/Y 划分。

    Attributes:
        paths: 不交路（簇编号序列），按起点从上到下
        separator: 每条路上恰好一个簇
        x_nodes / y_nodes: B∖S 的划分，X 到 Y 没有有向边
        x_edges / y_edges: A 型边的划分
    """

    paths: tuple[tuple[int, ...], ...]
    separator: tuple[int, ...]
    x_nodes: frozenset[int]
    y_nodes: frozenset[int]
    x_edges: tuple[TypeAEdge, ...]
    y_edges: tuple[TypeAEdge, ...]

    @property
    def s(self) -> int:
        return len(self.paths)

    def to_dict(self) -> dict[str, Any]:
        return {
            "s": self.s,
            "paths": [list(p) for p in self.paths],
            "separator": list(self.separator),
            "x_nodes": sorted(self.x_nodes),
            "y_nodes": sorted(self.y_nodes),
            "x_vertices": sorted(e.vertex for e in self.x_edges),
            "y_vertices": sorted(e.vertex for e in self.y_edges),
        }


def max_disjoint_paths(b: ClusterGraph) -> SeparatorPartition:
    """
    最大不交有向路与 Menger 分隔。

    每个簇拆成 in/out 两个节点，in → out 容量 1，其余边容量无限，
    用 Edmonds–Karp 求最大流；最小割上的 in → out 边即分隔集 S。
    X 为从 B_1 出发避开 S 可达的簇，Y 为避开 S 能到达 B_{k+1} 的簇，
    两者都不含的簇归入 X。A 型边的尾在 S 中时取头的一侧，头尾都在 S 中时归 X。

    Raises:
        ClusterError: 划分违反 “X 到 Y 没有有向边”（内部错误）
    """
    first, last = b.columns[0], b.columns[-1]
    arcs = b.arcs()
    net = nx.DiGraph()
    for cid in sorted(b.clusters):
        net.add_edge(("in", cid), ("out", cid), capacity=1)
    for tail, head in arcs:
        net.add_edge(("out", tail), ("in", head))
    for cid in first:
        net.add_edge("source", ("in", cid))
    for cid in last:
        net.add_edge(("out", cid), "sink")

    value, flow = nx.maximum_flow(net, "source", "sink", flow_func=edmonds_karp)
    _, (reachable, _) = nx.minimum_cut(net, "source", "sink", flow_func=edmonds_karp)

    last_set = set(last)
    paths = []
    for cid in first:
        if flow["source"][("in", cid)] < 1:
            continue
        path = [cid]
        node = cid
        while node not in last_set or flow[("out", node)].get("sink", 0) < 1:
            nxt = next(
                target[1]
                for target, amount in sorted(flow[("out", node)].items(), key=str)
                if target != "sink" and amount >= 1
            )
            flow[("out", node)][("in", nxt)] -= 1
            path.append(nxt)
            node = nxt
        paths.append(tuple(path))
    if len(paths) != value:
        raise ClusterError(f"路分解得到 {len(paths)} 条路，流值为 {value}")

    cut = {
        cid
        for cid in b.clusters
        if ("in", cid) in reachable and ("out", cid) not in reachable
    }
    separator = tuple(next(c for c in path if c in cut) for path in paths)
    blocked = frozenset(separator)

    residual = net.copy()
    residual.remove_edges_from((("in", cid), ("out", cid)) for cid in blocked)
    x_nodes = {
        node[1]
        for node in nx.descendants(residual, "source")
        if isinstance(node, tuple) and node[0] == "out"
    }
    y_nodes = {
        node[1]
        for node in nx.ancestors(residual, "sink")
        if isinstance(node, tuple) and node[0] == "in"
    }
    if x_nodes & y_nodes:
        raise ClusterError("分隔集没有切断 B_1 与最后一列")
    leftovers = set(b.clusters) - x_nodes - y_nodes - blocked
    x_nodes |= leftovers
    for tail, head in arcs:
        if tail in x_nodes and head in y_nodes:
            raise ClusterError(f"有向边 {tail}→{head} 从 X 指向 Y")

    x_edges, y_edges = [], []
    for edge in b.type_a:
        if edge.tail not in blocked:
            side_x = edge.tail in x_nodes
        elif edge.head not in blocked:
            side_x = edge.head in x_nodes
        else:
            side_x = True
        (x_edges if side_x else y_edges).append(edge)

    logger.debug("不交路 %d 条, 分隔集 %s", len(paths), list(separator))
    return SeparatorPartition(
        tuple(paths),
        separator,
        frozenset(x_nodes),
        frozenset(y_nodes),
        tuple(x_edges),
        tuple(y_edges),
    )


@dataclass(frozen=True)
class XYPartition:
    """G* 顶点的 X/Y 划分及两侧的 μ。"""

    x: frozenset[int]
    y: frozenset[int]
    mu_x: int
    mu_y: int


def xy_graph_partition(
    sp: SeparatorPartition, b: ClusterGraph, g: Graph
) -> XYPartition:
    """
    把 A 型边的划分投影到 G* 的顶点上。

    Raises:
        ClusterError: 某个顶点没有 A 型边，或 A 型边不属于 b
    """
    edges = set(b.type_a)
    if not set(sp.x_edges) | set(sp.y_edges) <= edges:
        raise ClusterError("分隔划分与簇图不匹配")
    x = frozenset(e.vertex for e in sp.x_edges)
    y = frozenset(e.vertex for e in sp.y_edges)
    untagged = set(g.adjacency) - x - y
    if untagged:
        raise ClusterError(f"顶点 {sorted(untagged)} 没有对应的 A 型边")
    mu_x = similarity_partition(g, x).mu if x else 0
    mu_y = similarity_partition(g, y).mu if y else 0
    return XYPartition(x, y, mu_x, mu_y)


def x_interval_counts(partition: XYPartition, g: Graph) -> dict[int, int]:
    """
    每一列中 X 占据的极大行区间个数（按该列顶点的上下次序计）。
    """
    counts = {}
    for col in g.columns():
        flags = [v in partition.x for v in g.column(col)]
        counts[col] = sum(
            1 for i, flag in enumerate(flags) if flag and (i == 0 or not flags[i - 1])
        )
    return counts


# =============================================================================
# 边界吸收
# =============================================================================


@dataclass(frozen=True)
class AbsorbedGraph:
    """吸收边界顶点后的图；added 是新加入的顶点。"""

    graph: Graph
    added: frozenset[int]

    def project(self, vertices: Iterable[int]) -> frozenset[int]:
        """去掉新加入的顶点。"""
        return frozenset(vertices) - self.added


def _grid_vertex_edges(
    g: Graph, w: WordSpec, row: int, col: int
) -> list[int]:
    nbrs = []
    if col > 1:
        letter = w.letter_at(col - 1)
        nbrs += [
            u for u in g.column(col - 1) if link_adjacent(letter, g.row_of(u), row)
        ]
    letter = w.letter_at(col)
    nbrs += [u for u in g.column(col + 1) if link_adjacent(letter, row, g.row_of(u))]
    return nbrs


def _boundary_count(g: Graph, col: int, w: WordSpec) -> int:
    link = extract_link(g, col, w)
    return sum(1 for _, kind in _pair_link(link, strict=False) if kind != "paired")


def absorb_boundary_vertices(
    g: Graph, w: WordSpec, per_column: int = 2
) -> AbsorbedGraph:
    """
    在 {2,3} 连接的对面一列补顶点，把边界顶点变成配对簇。

    对每条 α_j ∈ {2,3} 的连接（从左到右），对每个边界顶点尝试在对面列的
    邻近空行加一个 P^α 顶点（先试边界顶点所在行，再试上下相邻行），
    只有当该连接的边界顶点数减少时才保留。每列最多加 per_column 个顶点。
    """
    _require_coords(g)
    current = g
    added: set[int] = set()
    per_col: dict[int, int] = {}
    next_id = max(g.adjacency, default=-1) + 1
    for col in g.columns()[:-1]:
        if w.letter_at(col) not in (2, 3):
            continue
        progress = True
        while progress:
            progress = False
            link = extract_link(current, col, w)
            boundary = [
                (members, kind)
                for members, kind in _pair_link(link, strict=False)
                if kind != "paired"
            ]
            before = len(boundary)
            for members, kind in boundary:
                (v,) = members
                target = col + 1 if kind == "right-boundary" else col
                if per_col.get(target, 0) >= per_column:
                    continue
                row = current.row_of(v)
                taken = {current.row_of(u) for u in current.column(target)}
                for candidate in (row, row - 1, row + 1):
                    if candidate < 1 or candidate in taken:
                        continue
                    nbrs = _grid_vertex_edges(current, w, candidate, target)
                    trial = Graph.from_edges(
                        list(current.adjacency) + [next_id],
                        list(current.edges) + [(next_id, u) for u in nbrs],
                        {**current.coords, next_id: (candidate, target)},
                    )
                    if _boundary_count(trial, col, w) < before:
                        current = trial
                        added.add(next_id)
                        per_col[target] = per_col.get(target, 0) + 1
                        next_id += 1
                        progress = True
                        break
                if progress:
                    break
    if added:
        logger.debug("吸收边界顶点: 新增 %d 个顶点", len(added))
    return AbsorbedGraph(current, frozenset(added))


# =============================================================================
# 条带划分
# =============================================================================


@dataclass(frozen=True)
class BarReport:
    """
    一个条带（或 β 出现窗口）的分析结果。

    degenerate 为 True 表示 G* 为空或中间有空列，此时在空列处直接切开。
    """

    index: int
    columns: tuple[int, int]
    beta_at: int | None
    s: int
    mu_x: int
    mu_y: int
    degenerate: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "columns": list(self.columns),
            "beta_at": self.beta_at,
            "s": self.s,
            "mu_x": self.mu_x,
            "mu_y": self.mu_y,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class BarPartition:
    """
    条带流水线的结果。

    Attributes:
        parts: 有序划分 U_1..U_n（空部分已去掉）
        expression: 组合后的表达式；图为空时为 None
        labels: 表达式的标签数
        l: 组合时使用的 l（实测的最大 μ）
        k: 禁止窗口的大小
        mode: almost-periodic 或 recurrent
        gap: L(β)（almost-periodic）或观测到的最大间隔权重 W（recurrent）
        bound: 对应的理论上界
        bars: 每个条带的报告
    """

    parts: tuple[frozenset[int], ...]
    expression: Expression | None
    labels: int
    l: int  # noqa: E741
    k: int
    mode: str
    gap: int
    bound: int
    bars: tuple[BarReport, ...] = field(default=())

    @property
    def within_bound(self) -> bool:
        return self.labels <= self.bound

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "k": self.k,
            "gap": self.gap,
            "bound": self.bound,
            "labels": self.labels,
            "l": self.l,
            "within_bound": self.within_bound,
            "parts": [sorted(p) for p in self.parts],
            "bars": [bar.to_dict() for bar in self.bars],
        }


def almost_periodic_bound(k: int, window: int) -> int:
    """(12L+15)(8k²−6k)。"""
    return (12 * window + 15) * (8 * k * k - 6 * k)


def recurrent_bound(k: int, gap_weight: int) -> int:
    """(6(2k+W)+3)(8k²−6k)。"""
    return (6 * (2 * k + gap_weight) + 3) * (8 * k * k - 6 * k)


def _find_beta(w: WordSpec, beta: tuple[int, ...], lo: int, hi: int) -> int | None:
    """最小的 y ∈ [lo, hi] 使 α_y.. = β。"""
    for y in range(max(lo, 1), hi + 1):
        if w.factor(y, len(beta)) == beta:
            return y
    return None


def _split_window(
    g: Graph,
    w: WordSpec,
    y: int,
    k: int,
    index: int,
    absorb: bool,
    span: tuple[int, int],
) -> tuple[frozenset[int], frozenset[int], BarReport]:
    """G* = g 在 C_y..C_{y+k-1} 上的部分，返回 (X*, Y*, 报告)。"""
    window = [v for v in g.adjacency if y <= g.col_of(v) <= y + k - 1]
    star = induced_subgraph(g, window)
    used = set(star.columns())
    inner = [
        c
        for c in range(y, y + k)
        if used and c not in used and min(used) < c < max(used)
    ]
    if not window or inner:
        cut = inner[0] if window else y
        x = frozenset(v for v in window if g.col_of(v) < cut)
        logger.warning("条带 %d 退化: 在第 %d 列切开", index, cut)
        report = BarReport(index, span, y, 0, 0, 0, degenerate=True)
        return x, frozenset(window) - x, report

    target = star
    absorbed: AbsorbedGraph | None = None
    if absorb:
        absorbed = absorb_boundary_vertices(star, w)
        target = absorbed.graph
    b = build_cluster_graph(target, w, strict=False)
    sp = max_disjoint_paths(b)
    xy = xy_graph_partition(sp, b, target)
    x, y_side = xy.x, xy.y
    if absorbed is not None:
        x, y_side = absorbed.project(x), absorbed.project(y_side)
    mu_x = similarity_partition(star, x).mu if x else 0
    mu_y = similarity_partition(star, y_side).mu if y_side else 0
    if sp.s >= k:
        logger.warning("条带 %d 有 %d 条不交路（≥ k=%d）", index, sp.s, k)
    return x, y_side, BarReport(index, span, y, sp.s, mu_x, mu_y)


def bar_partition(
    g: Graph,
    w: WordSpec,
    beta_start: int,
    k: int,
    window_len: int,
    mode: str = "almost-periodic",
    absorb: bool = False,
    check_forbidden: bool = True,
) -> BarPartition:
    """
    条带流水线：划分、逐部分表达式、组合表达式与上界报告。

    almost-periodic: 把 G 的列按 window_len 列一组切成条带 V_i，
    在每个条带的字母中找 β 的最左出现，G* 取该出现的 k 列；
    X_i = 条带中 G* 左侧的列 ∪ X*，Y_i = G* 右侧的列 ∪ Y*，
    U_1 = X_1，U_i = Y_{i-1} ∪ X_i，最后一部分为 Y_n。
    上界 (12L+15)(8k²−6k)，L = window_len − 1。

    recurrent: 用 β 的相继不交出现（最左贪心）代替条带，两次出现之间的列
    并入后一部分；W 为相邻两次出现之间因子的最大权重，
    上界 (6(2k+W)+3)(8k²−6k)。此模式下 window_len 不参与切分。

    各部分的表达式由逐行构造给出，组合时 l 取实测的最大 μ。

    Args:
        g: 带坐标的图
        w: 定义网格的词
        beta_start: β = α_{beta_start}..α_{beta_start+k-2}
        k: 禁止窗口 H^α_{1,beta_start}(k,k) 的大小（≥ 2）
        window_len: 条带宽度 L(β)+1
        mode: "almost-periodic" 或 "recurrent"
        absorb: 是否先吸收 {2,3} 连接中的边界顶点
        check_forbidden: 是否检查 g 不含禁止窗口

    Raises:
        ForbiddenPatternError: g 含有禁止窗口
        ClusterError: 参数无效，或某个完整条带里找不到 β
    """
    if mode not in BAR_MODES:
        raise ClusterError(f"未知的条带模式 {mode!r}，可选: {', '.join(BAR_MODES)}")
    if k < 2:
        raise ClusterError(f"k 必须 ≥ 2，得到 {k}")
    if window_len < k:
        raise ClusterError(f"window_len 必须 ≥ k={k}，得到 {window_len}")
    _require_coords(g)
    beta = w.factor(beta_start, k - 1)
    if check_forbidden and len(g) >= k * k:
        host = build_H(w, 1, beta_start, k, k)
        if find_induced_embedding(host, g) is not None:
            raise ForbiddenPatternError(
                f"图包含禁止窗口 H_(1,{beta_start})({k},{k})（β={format_word(beta)}）"
            )

    if len(g) == 0:
        bound = (
            almost_periodic_bound(k, window_len - 1)
            if mode == "almost-periodic"
            else recurrent_bound(k, 0)
        )
        return BarPartition((), None, 0, 0, k, mode, 0, bound)

    cols = g.columns()
    a, last = cols[0], cols[-1]
    pieces: list[tuple[frozenset[int], frozenset[int]]] = []
    bars: list[BarReport] = []

    def members(lo: int, hi: int) -> frozenset[int]:
        return frozenset(v for v in g.adjacency if lo <= g.col_of(v) <= hi)

    if mode == "almost-periodic":
        gap = window_len - 1
        start, index = a, 1
        while start <= last:
            end = start + window_len - 1
            y = _find_beta(w, beta, start, end - k + 1)
            if y is None:
                raise ClusterError(
                    f"第 {index} 个条带（列 {start}..{end}）中找不到 β={format_word(beta)}"
                )
            x_star, y_star, report = _split_window(
                g, w, y, k, index, absorb, (start, end)
            )
            pieces.append(
                (members(start, y - 1) | x_star, y_star | members(y + k, end))
            )
            bars.append(report)
            start, index = end + 1, index + 1
        bound = almost_periodic_bound(k, gap)
    else:
        occurrences = []
        y = _find_beta(w, beta, a, last)
        while y is not None:
            occurrences.append(y)
            y = _find_beta(w, beta, y + k, last)
        gap = 0
        for left, right in zip(occurrences, occurrences[1:]):
            between = w.factor(left + k - 1, right - left - k + 1)
            gap = max(gap, weight(between))
        if not occurrences:
            logger.warning("β=%s 在列 %d..%d 中没有出现", format_word(beta), a, last)
        previous_end = a - 1
        for index, y in enumerate(occurrences, 1):
            x_star, y_star, report = _split_window(
                g, w, y, k, index, absorb, (previous_end + 1, y + k - 1)
            )
            pieces.append((members(previous_end + 1, y - 1) | x_star, y_star))
            bars.append(report)
            previous_end = y + k - 1
        tail = members(previous_end + 1, last)
        if pieces:
            pieces[-1] = (pieces[-1][0], pieces[-1][1] | tail)
        else:
            pieces.append((tail, frozenset()))
        bound = recurrent_bound(k, gap)

    parts_list = [pieces[0][0]]
    for (_, y_prev), (x_next, _) in zip(pieces, pieces[1:]):
        parts_list.append(y_prev | x_next)
    parts_list.append(pieces[-1][1])
    parts = tuple(p for p in parts_list if p)

    expressions = [row_partition_expression(induced_subgraph(g, p)) for p in parts]
    profile = partition_mu_profile(g, parts)
    l_value = max(max(pair) for pair in profile)
    expression = compose_partition_expression(g, parts, expressions, l_value)
    labels = label_count(expression)
    result = BarPartition(
        parts, expression, labels, l_value, k, mode, gap, bound, tuple(bars)
    )
    if not result.within_bound:
        logger.warning("标签数 %d 超过理论上界 %d", labels, bound)
    logger.debug(
        "条带划分: %d 个部分, l=%d, 标签数 %d, 上界 %d",
        len(parts),
        l_value,
        labels,
        bound,
    )
    return result
