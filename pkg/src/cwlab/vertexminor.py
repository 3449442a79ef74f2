"""
顶点子式：局部补、枢轴、割秩与网格约化。

局部补（local complementation）在 v 处把 N(v) 诱导的子图取补；
枢轴（pivot）vw 依次在 v、w、v 处做局部补。H 是 G 的顶点子式，
当且仅当 H 可由 G 经局部补与删点得到。秩宽度在顶点子式下单调不增。

网格约化把 H^α 窗口中的字母 0 与 1 逐个消去，每一步都记录为
ReductionStep，整条轨迹可以从初始图重放：

- remove_zero: 对中间列的每个顶点做局部补，删除该列，必要时删去奇数行
- remove_one:  在窗口内选一条边做枢轴，删去边界行，再消去产生的 0
- reduce_to_23: 先消 0 再消 1，得到只含 {2,3} 的词 γ

所有约化都在坐标紧致化（compact_grid）后的网格上进行：
每列的行按从上到下的次序重新编号为 1..m。
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Union

import numpy as np

from cwlab.errors import GraphError, ReductionError, SizeCapError, UnknownVertexError
from cwlab.gridgraphs import Coord, Graph, build_H, link_adjacent
from cwlab.words import LETTERS, FiniteWord, WordSpec, format_word, parse_word

logger = logging.getLogger(__name__)

# exact_rankwidth 的默认规模上限
RANKWIDTH_CAP = 8

ZERO_RULES = ("00", "01", "10", "02", "20", "03", "30")
ONE_RULES = ("211", "311", "112", "113", "212", "313", "213", "312")


# =============================================================================
# 局部补与枢轴
# =============================================================================


def _mutable(g: Graph) -> dict[int, set[int]]:
    return {v: set(ns) for v, ns in g.adjacency.items()}


def _freeze(adj: Mapping[int, set[int]], coords: Mapping[int, Coord]) -> Graph:
    return Graph(
        {v: frozenset(ns) for v, ns in adj.items()},
        {v: rc for v, rc in coords.items() if v in adj},
    )


def _lc_inplace(adj: dict[int, set[int]], v: int) -> None:
    if v not in adj:
        raise UnknownVertexError(f"顶点 {v} 不在图中")
    nbrs = sorted(adj[v])
    for index, a in enumerate(nbrs):
        for b in nbrs[index + 1 :]:
            if b in adj[a]:
                adj[a].discard(b)
                adj[b].discard(a)
            else:
                adj[a].add(b)
                adj[b].add(a)


def local_complement(g: Graph, v: int) -> Graph:
    """
    在 v 处做局部补：N(v) 内的边取补，其余不变。

    示例:
        >>> p3 = Graph.from_edges([0, 1, 2], [(0, 1), (1, 2)])
        >>> local_complement(p3, 1).edges
        ((0, 1), (0, 2), (1, 2))
    """
    adj = _mutable(g)
    _lc_inplace(adj, v)
    return _freeze(adj, g.coords)


def _check_edge(g: Graph, v: int, w: int) -> None:
    if v not in g or w not in g:
        raise UnknownVertexError(f"顶点 {v} 或 {w} 不在图中")
    if not g.has_edge(v, w):
        raise GraphError(f"枢轴要求 {v}{w} 是一条边")


def pivot(g: Graph, v: int, w: int) -> Graph:
    """
    在边 vw 上做枢轴：依次在 v、w、v 处局部补。

    Raises:
        GraphError: vw 不是边
    """
    _check_edge(g, v, w)
    adj = _mutable(g)
    for x in (v, w, v):
        _lc_inplace(adj, x)
    return _freeze(adj, g.coords)


def bipartite_pivot(g: Graph, v: int, w: int) -> Graph:
    """
    二部图上的枢轴：对 N(v)∖{w} 与 N(w)∖{v} 之间的边取补，再交换 v 与 w 的邻域。

    在二部图上它与 pivot 给出同一个图。
    """
    _check_edge(g, v, w)
    adj = _mutable(g)
    side_v = g.adjacency[v] - {w}
    side_w = g.adjacency[w] - {v}
    for a in side_v:
        for b in side_w:
            if a == b:
                continue
            if b in adj[a]:
                adj[a].discard(b)
                adj[b].discard(a)
            else:
                adj[a].add(b)
                adj[b].add(a)
    for x in side_v:
        adj[x].discard(v)
        adj[x].add(w)
    for x in side_w:
        adj[x].discard(w)
        adj[x].add(v)
    adj[v] = set(side_w) | {w}
    adj[w] = set(side_v) | {v}
    return _freeze(adj, g.coords)


# =============================================================================
# 割秩与秩宽度
# =============================================================================


def gf2_rank(matrix: Any) -> int:
    """二元域上的矩阵秩（高斯消元）。"""
    m = np.array(matrix, dtype=np.uint8) % 2
    if m.ndim != 2 or m.size == 0:
        return 0
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        candidates = np.nonzero(m[rank:, c])[0]
        if candidates.size == 0:
            continue
        top = rank + int(candidates[0])
        if top != rank:
            m[[rank, top]] = m[[top, rank]]
        mask = m[:, c].astype(bool)
        mask[rank] = False
        m[mask] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def cut_rank(g: Graph, subset: Iterable[int]) -> int:
    """A × (V∖A) 邻接矩阵在 GF(2) 上的秩。"""
    side = sorted(set(subset))
    unknown = set(side) - set(g.adjacency)
    if unknown:
        raise UnknownVertexError(f"顶点 {sorted(unknown)} 不在图中")
    other = [v for v in g.vertices if v not in set(side)]
    if not side or not other:
        return 0
    matrix = np.zeros((len(side), len(other)), dtype=np.uint8)
    col = {v: i for i, v in enumerate(other)}
    for i, v in enumerate(side):
        for u in g.adjacency[v]:
            if u in col:
                matrix[i, col[u]] = 1
    return gf2_rank(matrix)


Decomposition = Union[int, tuple["Decomposition", "Decomposition"]]


@dataclass(frozen=True)
class RankWidthResult:
    """
    精确秩宽度及其见证分解。

    decomposition 是嵌套二元组：根对应三次树的一条边，两侧各是一棵
    有根二叉树，叶子为顶点 id。|V| ≤ 1 时为该顶点或 None。
    """

    width: int
    decomposition: Decomposition | None


def decomposition_leaves(tree: Decomposition) -> frozenset[int]:
    if isinstance(tree, int):
        return frozenset({tree})
    return decomposition_leaves(tree[0]) | decomposition_leaves(tree[1])


def decomposition_width(g: Graph, tree: Decomposition) -> int:
    """分解中所有边的割秩最大值。"""
    if isinstance(tree, int):
        return 0
    width = 0
    stack: list[Decomposition] = [tree[0], tree[1]]
    while stack:
        node = stack.pop()
        width = max(width, cut_rank(g, decomposition_leaves(node)))
        if not isinstance(node, int):
            stack.extend(node)
    return width


def exact_rankwidth(g: Graph, cap: int | None = RANKWIDTH_CAP) -> RankWidthResult:
    """
    精确秩宽度。

    子集动态规划：f(S) 为 S 上有根二叉树内部各边割秩的最小最大值，
    f(S) = min over S = A ⊔ B of max(f(A), f(B), ρ(A), ρ(B))；
    整体取根边 (A, V∖A) 上的 max(ρ(A), f(A), f(V∖A)) 的最小值。
    与枚举全部三次树等价，但只需 3^n 量级的运算。

    |V| ≤ 1 时宽度按约定为 0。

    Raises:
        SizeCapError: 顶点数超过 cap
    """
    n = len(g)
    if cap is not None and n > cap:
        raise SizeCapError("vertexminor.exact_rankwidth", n, cap)
    verts = g.vertices
    if n == 0:
        return RankWidthResult(0, None)
    if n == 1:
        return RankWidthResult(0, verts[0])

    def members(mask: int) -> list[int]:
        return [verts[b] for b in range(n) if mask >> b & 1]

    @lru_cache(maxsize=None)
    def rho(mask: int) -> int:
        return cut_rank(g, members(mask))

    best: dict[int, tuple[int, int]] = {}

    def f(mask: int) -> int:
        if mask & (mask - 1) == 0:
            return 0
        if mask in best:
            return best[mask][0]
        low = mask & -mask
        value, choice = n + 1, 0
        sub = (mask - 1) & mask
        while sub:
            if sub & low:
                rest = mask ^ sub
                cand = max(rho(sub), rho(rest), f(sub), f(rest))
                if cand < value:
                    value, choice = cand, sub
            sub = (sub - 1) & mask
        best[mask] = (value, choice)
        return value

    def tree(mask: int) -> Decomposition:
        if mask & (mask - 1) == 0:
            return verts[mask.bit_length() - 1]
        f(mask)
        left = best[mask][1]
        return (tree(left), tree(mask ^ left))

    full = (1 << n) - 1
    width, root = n + 1, 1
    sub = (full - 1) & full
    while sub:
        if sub & 1:
            cand = max(rho(sub), f(sub), f(full ^ sub))
            if cand < width:
                width, root = cand, sub
        sub = (sub - 1) & full
    logger.debug("秩宽度 %d（%d 个顶点）", width, n)
    return RankWidthResult(width, (tree(root), tree(full ^ root)))


# =============================================================================
# 约化轨迹
# =============================================================================

STEP_KINDS = ("local-complement", "pivot", "delete")


@dataclass(frozen=True)
class ReductionStep:
    """
    一步顶点子式操作。

    Attributes:
        kind: "local-complement"（1 个顶点）、"pivot"（2 个顶点）或 "delete"
        vertices: 操作涉及的顶点
        note: 来源说明，例如 "remove_zero[02]"
    """

    kind: str
    vertices: tuple[int, ...]
    note: str = ""

    def __post_init__(self) -> None:
        if self.kind not in STEP_KINDS:
            raise ReductionError(f"未知的步骤类型 {self.kind!r}")
        arity = {"local-complement": 1, "pivot": 2}.get(self.kind)
        if arity is not None and len(self.vertices) != arity:
            raise ReductionError(f"{self.kind} 需要 {arity} 个顶点")

    def apply(self, g: Graph) -> Graph:
        if self.kind == "local-complement":
            return local_complement(g, self.vertices[0])
        if self.kind == "pivot":
            return pivot(g, *self.vertices)
        return g.without(self.vertices)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "vertices": list(self.vertices), "note": self.note}


def replay(initial: Graph, steps: Iterable[ReductionStep]) -> Graph:
    """从 initial 依次应用 steps。"""
    g = initial
    for step in steps:
        g = step.apply(g)
    return g


@dataclass(frozen=True)
class ReductionTrace:
    """
    约化轨迹。final 的坐标经过紧致化，重放只比较邻接结构。
    """

    initial: Graph
    steps: tuple[ReductionStep, ...]
    final: Graph

    def verify(self) -> bool:
        return replay(self.initial, self.steps).adjacency == self.final.adjacency

    def __len__(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict[str, Any]:
        return {
            "initial": self.initial.to_dict(),
            "steps": [step.to_dict() for step in self.steps],
            "final": self.final.to_dict(),
        }


def compact_grid(g: Graph) -> Graph:
    """
    把坐标紧致化：每列的行按次序编号为 1..m_c，列号从最小列开始连续编号。
    """
    if not g.has_coords:
        raise GraphError("紧致化需要每个顶点都有网格坐标")
    cols = g.columns()
    if not cols:
        return g
    coords = {}
    for offset, col in enumerate(cols):
        for rank, v in enumerate(g.column(col), 1):
            coords[v] = (rank, cols[0] + offset)
    return g.with_coords(coords)


def infer_link_letter(g: Graph, col: int) -> int | None:
    """
    紧致网格中第 col 列与第 col+1 列之间的字母；两列行数不同或不符合任何字母时为 None。
    """
    left, right = g.column(col), g.column(col + 1)
    if not left or len(left) != len(right):
        return None
    for letter in LETTERS:
        if all(
            g.has_edge(u, v) == link_adjacent(letter, r, k)
            for r, u in enumerate(left, 1)
            for k, v in enumerate(right, 1)
        ):
            return letter
    return None


def grid_word(g: Graph) -> FiniteWord:
    """
    紧致网格的字母序列；同时检查不相邻列之间没有边。

    Raises:
        ReductionError: 不是某个词的网格
    """
    cols = g.columns()
    letters = []
    for col in cols[:-1]:
        letter = infer_link_letter(g, col)
        if letter is None:
            raise ReductionError(f"第 {col} 与 {col + 1} 列之间不是网格连接")
        letters.append(letter)
    for u, v in g.edges:
        if abs(g.col_of(u) - g.col_of(v)) != 1:
            raise ReductionError(f"边 {u}-{v} 跨越了不相邻的列")
    return tuple(letters)


class _TraceBuilder:
    """可变的约化状态：邻接表、坐标以及已记录的步骤。"""

    def __init__(self, g: Graph) -> None:
        self.initial = g
        self.adj = _mutable(g)
        self.coords: dict[int, Coord] = dict(g.coords)
        self.steps: list[ReductionStep] = []
        self.compact()

    def compact(self) -> None:
        cols = sorted({c for _, c in self.coords.values()})
        by_col: dict[int, list[tuple[int, int]]] = {}
        for v, (r, c) in self.coords.items():
            by_col.setdefault(c, []).append((r, v))
        coords = {}
        for offset, col in enumerate(cols):
            for rank, (_, v) in enumerate(sorted(by_col[col]), 1):
                coords[v] = (rank, cols[0] + offset)
        self.coords = coords
        self.index = {rc: v for v, rc in coords.items()}

    @property
    def columns(self) -> list[int]:
        return sorted({c for _, c in self.coords.values()})

    def rows(self, col: int) -> int:
        return sum(1 for _, c in self.coords.values() if c == col)

    def uniform_rows(self, rule: str) -> int:
        counts = {self.rows(c) for c in self.columns}
        if len(counts) != 1:
            raise ReductionError(f"各列行数不一致: {sorted(counts)}", rule)
        return counts.pop()

    def at(self, row: int, col: int) -> int:
        return self.index[(row, col)]

    def letter(self, col: int) -> int | None:
        return infer_link_letter(self.graph(), col)

    def lc(self, v: int, note: str) -> None:
        _lc_inplace(self.adj, v)
        self.steps.append(ReductionStep("local-complement", (v,), note))

    def pivot(self, v: int, w: int, note: str) -> None:
        if w not in self.adj[v]:
            raise ReductionError(f"枢轴要求 {v}{w} 是一条边", note)
        for x in (v, w, v):
            _lc_inplace(self.adj, x)
        self.steps.append(ReductionStep("pivot", (v, w), note))

    def delete(self, ids: Iterable[int], note: str) -> None:
        removed = sorted(set(ids))
        if not removed:
            return
        for v in removed:
            for u in self.adj.pop(v):
                if u in self.adj:
                    self.adj[u].discard(v)
            self.coords.pop(v, None)
        self.steps.append(ReductionStep("delete", tuple(removed), note))
        self.compact()

    def graph(self) -> Graph:
        return _freeze(self.adj, self.coords)

    def trace(self) -> ReductionTrace:
        return ReductionTrace(self.initial, tuple(self.steps), self.graph())


def _check_rule_letters(
    b: _TraceBuilder, first_col: int, rule: str, family: str
) -> None:
    expected = parse_word(rule)
    for offset, letter in enumerate(expected):
        col = first_col + offset
        if col + 1 not in b.columns or col not in b.columns:
            raise ReductionError(f"窗口缺少第 {col}–{col + 1} 列", f"{family}[{rule}]")
        actual = b.letter(col)
        if actual != letter:
            raise ReductionError(
                f"第 {col}–{col + 1} 列之间的字母是 {actual}，规则要求 {letter}",
                f"{family}[{rule}]",
            )


def _remove_zero(b: _TraceBuilder, col: int, rule: str) -> None:
    note = f"remove_zero[{rule}]"
    if rule not in ZERO_RULES:
        raise ReductionError(f"未知的 0 消去规则 {rule!r}", note)
    _check_rule_letters(b, col - 1, rule, "remove_zero")
    m = b.uniform_rows(note)
    if m < 2:
        raise ReductionError(f"行数 {m} 太少，至少需要 2 行", note)

    middle = [b.at(r, col) for r in range(1, m + 1)]
    if rule in ("01", "10") and m % 2 == 1:
        # 奇数行：只补到第 m-1 行，再删去最后一行
        for v in middle[:-1]:
            b.lc(v, note)
        b.delete((b.at(m, c) for c in b.columns), note)
        middle = middle[:-1]
        m -= 1
    else:
        for v in middle:
            b.lc(v, note)
    b.delete(middle, note)

    if rule in ("02", "30"):
        odd = [r for r in range(1, m + 1) if r % 2 == 1]
    elif rule in ("20", "03"):
        odd = [r for r in range(1, m + 1) if (m - r + 1) % 2 == 1]
    else:
        odd = []
    if odd:
        b.delete((b.at(r, c) for c in b.columns for r in odd), note)
    logger.debug("%s: 第 %d 列, %d 行 → %d 行", note, col, m, m - len(odd))


_ONE_PIVOTS: dict[str, tuple[str, int, str, int]] = {
    "211": ("top", 1, "bottom", 2),
    "311": ("bottom", 1, "top", 2),
    "112": ("bottom", 2, "top", 1),
    "113": ("top", 2, "bottom", 1),
    "212": ("top", 1, "bottom", 2),
    "313": ("bottom", 1, "top", 2),
    "213": ("top", 1, "bottom", 2),
    "312": ("bottom", 1, "top", 2),
}

# 枢轴并删行之后窗口内剩下的 0 依次用哪条规则消去（中间列相对 k 的偏移）
_ONE_FOLLOWUPS: dict[str, tuple[tuple[str, int], ...]] = {
    "211": (("00", 2), ("20", 1)),
    "311": (("00", 2), ("30", 1)),
    "112": (("00", 1), ("02", 1)),
    "113": (("00", 1), ("03", 1)),
    "212": (("20", 1),),
    "313": (("30", 1),),
    "213": (("20", 1),),
    "312": (("30", 1),),
}

ONE_RESULTS = {
    "211": "2",
    "311": "3",
    "112": "2",
    "113": "3",
    "212": "22",
    "313": "33",
    "213": "22",
    "312": "33",
}


def _remove_one(b: _TraceBuilder, k: int, rule: str) -> None:
    note = f"remove_one[{rule}]"
    if rule not in ONE_RULES:
        raise ReductionError(f"未知的 1 消去规则 {rule!r}", note)
    _check_rule_letters(b, k, rule, "remove_one")
    m = b.uniform_rows(note)
    if m < 4:
        raise ReductionError(f"行数 {m} 太少，至少需要 4 行", note)

    side_x, off_x, side_y, off_y = _ONE_PIVOTS[rule]
    x = b.at(1 if side_x == "top" else m, k + off_x)
    y = b.at(1 if side_y == "top" else m, k + off_y)
    b.pivot(x, y, note)

    cols = b.columns
    if rule == "213":
        doomed = [b.at(1, c) for c in cols]
        doomed += [b.at(m, c) for c in cols if c <= k + 2]
        doomed += [b.at(2, c) for c in cols if c >= k + 3]
    elif rule == "312":
        doomed = [b.at(m, c) for c in cols]
        doomed += [b.at(1, c) for c in cols if c <= k + 2]
        doomed += [b.at(m - 1, c) for c in cols if c >= k + 3]
    else:
        doomed = [b.at(r, c) for c in cols for r in (1, m)]
    b.delete(doomed, note)

    for zero_rule, offset in _ONE_FOLLOWUPS[rule]:
        _remove_zero(b, k + offset, zero_rule)


def remove_zero(g: Graph, col: int, rule: str) -> ReductionTrace:
    """
    消去以第 col 列为中间列的因子中的 0。

    规则：
    - 00:       对中间列每个顶点局部补，删去中间列（00 → 0）
    - 01 / 10:  同上；行数为奇数时只补前 m-1 行并删去最后一行（→ 1）
    - 02 / 30:  局部补并删列后，删去从上往下数的奇数行（→ 2 / 3）
    - 20 / 03:  同上，但删去从下往上数的奇数行（→ 2 / 3）

    Raises:
        ReductionError: 规则与网格中的字母不符，或行数不足
    """
    b = _TraceBuilder(g)
    _remove_zero(b, col, rule)
    return b.trace()


def remove_one(g: Graph, k: int, rule: str) -> ReductionTrace:
    """
    消去窗口 C_k..C_{k+3} 的因子中的 1。

    在窗口内的一条边上做枢轴，把两个 1 变成 0（或把 1 变成 0 并把 3/2 翻转），
    删去边界行使网格结构保持，然后用 remove_zero 消去新出现的 0。
    结果：211 → 2，311 → 3，112 → 2，113 → 3，212/213 → 22，313/312 → 33。

    Raises:
        ReductionError: 规则与网格中的字母不符，或行数少于 4
    """
    b = _TraceBuilder(g)
    _remove_one(b, k, rule)
    return b.trace()


# =============================================================================
# 整词约化
# =============================================================================


@dataclass(frozen=True)
class WordReduction:
    """
    reduce_to_23 的结果。

    Attributes:
        trace: 完整的约化轨迹
        source: 被约化的因子 α_j..α_{j+p-1}
        gamma: 约化得到的 {2,3}-词
        q: 因子中 {2,3} 字母的个数
        rows: 初始行数 (q+4)·2^{p-q}
        final_rows: 最终每列的行数
        rules: 依次使用的规则
    """

    trace: ReductionTrace
    source: FiniteWord
    gamma: FiniteWord
    q: int
    rows: int
    final_rows: int
    rules: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": format_word(self.source),
            "gamma": format_word(self.gamma),
            "q": self.q,
            "rows": self.rows,
            "final_rows": self.final_rows,
            "rules": list(self.rules),
            "trace": self.trace.to_dict(),
        }


def _delete_boundary_column(b: _TraceBuilder, col: int) -> None:
    note = f"delete-column[{col}]"
    b.delete((v for v, (_, c) in b.coords.items() if c == col), note)


def reduce_to_23(w: WordSpec, j: int, p: int) -> WordReduction:
    """
    把因子 α_j..α_{j+p-1} 的网格约化为只含 {2,3} 的网格。

    从 build_H(w, 1, j, (q+4)·2^{p-q}, p+1) 出发：
    1. 反复处理最左边的 0，与右邻字母（没有时与左邻）组成 0 消去规则
    2. 反复处理最左边的一段 1：
       - 左边有字母且段长 ≥ 2: a11 → a
       - 段从左端开始且长度 ≥ 2: 在段尾用 11b → b
       - 夹在两个字母之间的单个 1: a1b
       - 位于端点的单个 1: 直接删去端点列
    每一步后每列行数都不少于上一步的一半减 2。

    Raises:
        ReductionError: 因子中没有 {2,3} 字母（q = 0）、行数簿记失败，
            或最终行数少于 q
    """
    if p < 1:
        raise ReductionError(f"p 必须 ≥ 1，得到 {p}", "reduce_to_23")
    source = w.factor(j, p)
    q = sum(1 for letter in source if letter in (2, 3))
    if q == 0:
        raise ReductionError(
            f"因子 {format_word(source)} 不含字母 2 或 3，无法约化", "reduce_to_23"
        )
    rows = (q + 4) * 2 ** (p - q)
    b = _TraceBuilder(build_H(w, 1, j, rows, p + 1))
    letters = list(source)
    rules: list[str] = []

    def step(apply: Any, *args: Any) -> None:
        before = b.uniform_rows("reduce_to_23")
        apply(b, *args)
        after = b.uniform_rows("reduce_to_23")
        if after < before / 2 - 2:
            raise ReductionError(f"行数从 {before} 降到 {after}", "reduce_to_23")

    while 0 in letters:
        idx = letters.index(0)
        first = b.columns[0]
        if idx + 1 < len(letters):
            rule = format_word((0, letters[idx + 1]))
            step(_remove_zero, first + idx + 1, rule)
            kept = 0 if letters[idx + 1] == 0 else letters[idx + 1]
            letters[idx : idx + 2] = [kept]
        else:
            rule = format_word((letters[idx - 1], 0))
            step(_remove_zero, first + idx, rule)
            letters[idx - 1 : idx + 1] = [letters[idx - 1]]
        rules.append(rule)

    while 1 in letters:
        start = letters.index(1)
        end = start
        while end + 1 < len(letters) and letters[end + 1] == 1:
            end += 1
        run = end - start + 1
        first = b.columns[0]
        if start > 0 and run >= 2:
            rule = format_word(letters[start - 1 : start + 2])
            step(_remove_one, first + start - 1, rule)
            letters[start - 1 : start + 2] = list(parse_word(ONE_RESULTS[rule]))
        elif start == 0 and run >= 2:
            rule = format_word(letters[end - 1 : end + 2])
            step(_remove_one, first + end - 1, rule)
            letters[end - 1 : end + 2] = list(parse_word(ONE_RESULTS[rule]))
        elif 0 < start and end + 1 < len(letters):
            rule = format_word(letters[start - 1 : start + 2])
            step(_remove_one, first + start - 1, rule)
            letters[start - 1 : start + 2] = list(parse_word(ONE_RESULTS[rule]))
        elif start == 0:
            rule = "delete-left"
            step(_delete_boundary_column, first)
            letters.pop(0)
        else:
            rule = "delete-right"
            step(_delete_boundary_column, b.columns[-1])
            letters.pop()
        rules.append(rule)

    final = b.graph()
    gamma = tuple(letters)
    if grid_word(final) != gamma:
        raise ReductionError(
            f"约化后的网格字母 {format_word(grid_word(final))} 与记录的 "
            f"{format_word(gamma)} 不一致",
            "reduce_to_23",
        )
    final_rows = b.uniform_rows("reduce_to_23")
    if final_rows < q:
        raise ReductionError(
            f"约化后只剩 {final_rows} 行，少于 q={q}", "reduce_to_23"
        )
    logger.debug(
        "reduce_to_23: %s → %s, 行 %d → %d, 规则 %s",
        format_word(source),
        format_word(gamma),
        rows,
        final_rows,
        rules,
    )
    return WordReduction(b.trace(), source, gamma, q, rows, final_rows, tuple(rules))
