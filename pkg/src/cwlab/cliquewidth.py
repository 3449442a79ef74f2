"""
团宽度表达式：构造、求值、标签计数与小图上的精确求解。

表达式由四种操作组成：
- Create(i, v):     创建标签为 i 的顶点 v
- DisjointUnion:    不交并
- Join(i, j):       在所有 i 标签与 j 标签顶点之间连边（i ≠ j）
- Relabel(i → j):   把 i 标签改为 j

用到 k 个不同标签的表达式称为 k-表达式，图的团宽度是所需的最少标签数。

本模块提供：
- evaluate / label_count / to_sexp / parse_sexp
- exact_cliquewidth: 小图（默认 ≤ 10 个顶点）上的精确动态规划
- compose_partition_expression: 按有序划分拼接各部分的表达式（k·l 上界）
- path_forest_expression / row_partition / grid_expression: 网格切片的构造
"""

from __future__ import annotations

import itertools
import json
import logging
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Union

from cwlab.errors import ExpressionError, PartitionBoundError, SizeCapError
from cwlab.gridgraphs import (
    Graph,
    build_H,
    connected_components,
    induced_subgraph,
    similarity_partition,
)
from cwlab.words import WordSpec, format_word, weight

logger = logging.getLogger(__name__)

Tag = Union[int, str]

# exact_cliquewidth 的默认参数
DEFAULT_KMAX = 6
DEFAULT_CAP = 10


def _check_label(label: int) -> None:
    if isinstance(label, bool) or not isinstance(label, int) or label < 1:
        raise ExpressionError(f"标签必须是正整数，得到 {label!r}")


@dataclass(frozen=True)
class Create:
    """创建一个标签为 label、标记为 tag 的顶点。"""

    label: int
    tag: Tag

    def __post_init__(self) -> None:
        _check_label(self.label)


@dataclass(frozen=True)
class DisjointUnion:
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Join:
    """在标签 i 与标签 j 的所有顶点之间连边。"""

    i: int
    j: int
    child: Expression

    def __post_init__(self) -> None:
        _check_label(self.i)
        _check_label(self.j)
        if self.i == self.j:
            raise ExpressionError(f"Join 的两个标签必须不同，得到 {self.i}")


@dataclass(frozen=True)
class Relabel:
    source: int
    target: int
    child: Expression

    def __post_init__(self) -> None:
        _check_label(self.source)
        _check_label(self.target)


Expression = Union[Create, DisjointUnion, Join, Relabel]


def _children(e: Expression) -> tuple[Expression, ...]:
    if isinstance(e, Create):
        return ()
    if isinstance(e, DisjointUnion):
        return (e.left, e.right)
    return (e.child,)


def iter_postorder(e: Expression) -> Iterator[Expression]:
    """后序遍历（显式栈，不受递归深度限制）。"""
    stack: list[tuple[Expression, bool]] = [(e, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for child in reversed(_children(node)):
            stack.append((child, False))


def labels_of(e: Expression) -> frozenset[int]:
    """表达式中出现过的全部标签。"""
    labels: set[int] = set()
    for node in iter_postorder(e):
        if isinstance(node, Create):
            labels.add(node.label)
        elif isinstance(node, Join):
            labels.update((node.i, node.j))
        elif isinstance(node, Relabel):
            labels.update((node.source, node.target))
    return frozenset(labels)


def label_count(e: Expression) -> int:
    """
    表达式用到的不同标签数。

    示例:
        >>> label_count(Join(1, 2, DisjointUnion(Create(1, "a"), Create(2, "b"))))
        2
    """
    return len(labels_of(e))


# =============================================================================
# 求值
# =============================================================================


@dataclass(frozen=True)
class LabeledGraph:
    """
    带标签的图。

    Attributes:
        graph: 求值得到的图
        labels: 顶点 id → 当前标签
        tags: 顶点 id → 表达式中的标记；标记全为整数时 id 就是标记本身
    """

    graph: Graph
    labels: dict[int, int]
    tags: dict[int, Tag]


class _Partial:
    """求值过程中一棵子树的可变结果。"""

    def __init__(self) -> None:
        self.by_label: dict[int, set[Tag]] = {}
        self.edges: list[tuple[Tag, Tag]] = []
        self.size = 0

    def absorb(self, other: _Partial) -> None:
        for label, members in other.by_label.items():
            self.by_label.setdefault(label, set()).update(members)
        self.edges.extend(other.edges)
        self.size += other.size


def evaluate(e: Expression) -> LabeledGraph:
    """
    自底向上求值表达式。

    Raises:
        ExpressionError: 标记重复
    """
    order: list[Tag] = []
    seen: set[Tag] = set()
    results: dict[int, _Partial] = {}
    for node in iter_postorder(e):
        if isinstance(node, Create):
            key = (type(node.tag).__name__, node.tag)
            if node.tag in seen or key in seen:
                raise ExpressionError(f"顶点标记 {node.tag!r} 重复")
            seen.add(node.tag)
            order.append(node.tag)
            part = _Partial()
            part.by_label[node.label] = {node.tag}
            part.size = 1
        elif isinstance(node, DisjointUnion):
            left = results.pop(id(node.left))
            right = results.pop(id(node.right))
            if left.size < right.size:
                left, right = right, left
            left.absorb(right)
            part = left
        elif isinstance(node, Join):
            part = results.pop(id(node.child))
            side_i = part.by_label.get(node.i, set())
            side_j = part.by_label.get(node.j, set())
            part.edges.extend((a, b) for a in side_i for b in side_j)
        else:
            part = results.pop(id(node.child))
            moved = part.by_label.pop(node.source, None)
            if moved:
                part.by_label.setdefault(node.target, set()).update(moved)
        results[id(node)] = part
    final = results[id(e)]

    if all(isinstance(t, int) and not isinstance(t, bool) for t in order):
        ids: dict[Tag, int] = {t: int(t) for t in order}
    else:
        ids = {t: index for index, t in enumerate(order)}
    labels = {
        ids[t]: label for label, members in final.by_label.items() for t in members
    }
    edges = {tuple(sorted((ids[a], ids[b]))) for a, b in final.edges}
    graph = Graph.from_edges(ids.values(), ((u, v) for u, v in edges))
    return LabeledGraph(graph, labels, {v: t for t, v in ids.items()})


# =============================================================================
# S-表达式
# =============================================================================

_BARE_TAG = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")
_TOKEN = re.compile(r'\(|\)|"(?:[^"\\]|\\.)*"|[^\s()]+')


def _format_tag(tag: Tag) -> str:
    if isinstance(tag, int):
        return str(tag)
    if _BARE_TAG.match(tag):
        return tag
    return json.dumps(tag, ensure_ascii=False)


def to_sexp(e: Expression) -> str:
    """
    打印为 S-表达式，例如 ``(join 1 2 (union (create 1 a) (create 2 b)))``。
    """
    text: dict[int, str] = {}
    for node in iter_postorder(e):
        if isinstance(node, Create):
            out = f"(create {node.label} {_format_tag(node.tag)})"
        elif isinstance(node, DisjointUnion):
            out = f"(union {text.pop(id(node.left))} {text.pop(id(node.right))})"
        elif isinstance(node, Join):
            out = f"(join {node.i} {node.j} {text.pop(id(node.child))})"
        else:
            out = f"(relabel {node.source} {node.target} {text.pop(id(node.child))})"
        text[id(node)] = out
    return text[id(e)]


def _parse_tag(token: str) -> Tag:
    if token.startswith('"'):
        value = json.loads(token)
        if not isinstance(value, str):
            raise ExpressionError(f"无法解析顶点标记 {token}")
        return value
    if re.fullmatch(r"-?\d+", token):
        return int(token)
    return token


def _parse_label(token: str) -> int:
    if not re.fullmatch(r"\d+", token):
        raise ExpressionError(f"期望标签（正整数），得到 {token!r}")
    return int(token)


def parse_sexp(text: str) -> Expression:
    """
    解析 to_sexp 的输出。

    Raises:
        ExpressionError: 括号不匹配、未知操作或参数个数错误
    """
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ExpressionError("空的 S-表达式")
    stack: list[list[object]] = []
    root: Expression | None = None
    for token in tokens:
        if root is not None:
            raise ExpressionError(f"表达式结束后还有多余内容: {token!r}")
        if token == "(":
            stack.append([])
            continue
        if token == ")":
            if not stack:
                raise ExpressionError("多余的右括号")
            node = _build_node(stack.pop())
            if stack:
                stack[-1].append(node)
            else:
                root = node
            continue
        if not stack:
            raise ExpressionError(f"表达式必须以括号开始，得到 {token!r}")
        stack[-1].append(token)
    if stack or root is None:
        raise ExpressionError("括号不匹配")
    return root


def _build_node(items: list[object]) -> Expression:
    if not items or not isinstance(items[0], str):
        raise ExpressionError("每个括号必须以操作名开始")
    op, args = items[0], items[1:]
    arity = {"create": 2, "union": 2, "join": 3, "relabel": 3}
    if op not in arity:
        raise ExpressionError(f"未知操作 {op!r}")
    if len(args) != arity[op]:
        raise ExpressionError(f"{op} 需要 {arity[op]} 个参数，得到 {len(args)}")
    if op == "create":
        label, tag = args
        if not isinstance(label, str) or not isinstance(tag, str):
            raise ExpressionError("create 的参数必须是原子")
        return Create(_parse_label(label), _parse_tag(tag))
    if op == "union":
        left, right = args
        if isinstance(left, str) or isinstance(right, str):
            raise ExpressionError("union 的参数必须是子表达式")
        return DisjointUnion(left, right)  # type: ignore[arg-type]
    first, second, child = args
    if not isinstance(first, str) or not isinstance(second, str):
        raise ExpressionError(f"{op} 的前两个参数必须是标签")
    if isinstance(child, str):
        raise ExpressionError(f"{op} 的最后一个参数必须是子表达式")
    if op == "join":
        return Join(
            _parse_label(first), _parse_label(second), child  # type: ignore[arg-type]
        )
    return Relabel(
        _parse_label(first), _parse_label(second), child  # type: ignore[arg-type]
    )


# =============================================================================
# 精确团宽度
# =============================================================================


@dataclass(frozen=True)
class CliqueWidthResult:
    """
    精确求解的结果。

    width 为 None 表示团宽度大于 k_max（这是正常结果，不是错误）。
    """

    width: int | None
    witness: Expression | None
    k_max: int

    @property
    def exceeded(self) -> bool:
        return self.width is None


_CREATE = "create"


@dataclass(frozen=True)
class _UnionStep:
    left: int
    left_parts: tuple[int, ...]
    right: int
    right_parts: tuple[int, ...]
    matching: tuple[tuple[int, int], ...]
    refined: tuple[int, ...]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in _set_partitions(rest):
        for index in range(len(smaller)):
            yield smaller[:index] + [[first] + smaller[index]] + smaller[index + 1 :]
        yield [[first]] + smaller


def _matchings(
    pairs: Sequence[tuple[int, int]], minimum: int
) -> Iterator[tuple[tuple[int, int], ...]]:
    """eligible 对中所有大小 ≥ minimum 的匹配。"""

    def extend(
        start: int, used_a: frozenset[int], used_b: frozenset[int], chosen: tuple
    ) -> Iterator[tuple[tuple[int, int], ...]]:
        if len(chosen) >= minimum:
            yield chosen
        for index in range(start, len(pairs)):
            a, b = pairs[index]
            if a in used_a or b in used_b:
                continue
            yield from extend(index + 1, used_a | {a}, used_b | {b}, chosen + ((a, b),))

    yield from extend(0, frozenset(), frozenset(), ())


class _ExactSolver:
    """
    连通图上的 k-表达式存在性判定。

    状态为 (S, P)：S 是已构造的顶点子集，P 是 S 的标签类划分，
    要求同一类的顶点在 V∖S 中的邻居完全相同（否则以后无法区分它们）。
    转移：两个不交状态做并（允许同签名且互不相邻的类共用标签），
    立即补上所有跨两侧的边（每条跨边要求对应两类之间完全相连），
    然后合并任意同签名的类（重标号）。
    """

    def __init__(self, g: Graph, k: int) -> None:
        self.verts = g.vertices
        self.n = len(self.verts)
        self.k = k
        index = {v: i for i, v in enumerate(self.verts)}
        self.nb = [0] * self.n
        for v in self.verts:
            for u in g.adjacency[v]:
                self.nb[index[v]] |= 1 << index[u]
        self.full = (1 << self.n) - 1
        self.states: dict[int, dict[tuple[int, ...], object]] = {}

    def _sig(self, cls: int, outside: int) -> int:
        low = (cls & -cls).bit_length() - 1
        return self.nb[low] & outside

    def _common(self, cls: int) -> int:
        common = self.full
        for b in _bits(cls):
            common &= self.nb[b]
        return common

    def _any(self, cls: int) -> int:
        acc = 0
        for b in _bits(cls):
            acc |= self.nb[b]
        return acc

    def _joins_valid(self, refined: Sequence[int], s1: int, s2: int) -> bool:
        for x_idx, x in enumerate(refined):
            common_x = self._common(x)
            for y in refined[x_idx + 1 :]:
                cross = (self._any(x & s1) & y & s2) or (self._any(x & s2) & y & s1)
                if cross and (common_x & y) != y:
                    return False
        return True

    def _coarsenings(
        self, refined: Sequence[int], outside: int
    ) -> Iterator[tuple[int, ...]]:
        groups: dict[int, list[int]] = {}
        for cls in refined:
            groups.setdefault(self._sig(cls, outside), []).append(cls)
        options = []
        for members in groups.values():
            merged = []
            for split in _set_partitions(members):
                merged.append([sum(block) for block in split])
            options.append(merged)
        for combo in itertools.product(*options):
            yield tuple(sorted(cls for block in combo for cls in block))

    def _min_classes(self, s: int) -> int:
        outside = self.full & ~s
        return len({self.nb[b] & outside for b in _bits(s)})

    def solve(self) -> Expression | None:
        for b in range(self.n):
            self.states[1 << b] = {(1 << b,): _CREATE}
        if self.n == 1:
            return self._build(1, (1,), {1: 1})
        for size in range(2, self.n + 1):
            for combo in itertools.combinations(range(self.n), size):
                s = sum(1 << b for b in combo)
                if self._min_classes(s) > self.k:
                    continue
                found = self._expand(s)
                if found is not None:
                    return found
            logger.debug(
                "k=%d: 规模 %d 的可行子集 %d 个",
                self.k,
                size,
                sum(1 for m in self.states if bin(m).count("1") == size),
            )
        return None

    def _expand(self, s: int) -> Expression | None:
        low = s & -s
        outside = self.full & ~s
        table: dict[tuple[int, ...], object] = {}
        sub = (s - 1) & s
        while sub:
            if sub & low and sub in self.states and (s ^ sub) in self.states:
                s1, s2 = sub, s ^ sub
                for p1 in self.states[s1]:
                    for p2 in self.states[s2]:
                        self._combine(s, outside, s1, p1, s2, p2, table)
                        if s == self.full and table:
                            parts = next(iter(table))
                            self.states[s] = table
                            return self._build(
                                s, parts, {c: i + 1 for i, c in enumerate(parts)}
                            )
            sub = (sub - 1) & s
        if table:
            self.states[s] = table
        return None

    def _combine(
        self,
        s: int,
        outside: int,
        s1: int,
        p1: tuple[int, ...],
        s2: int,
        p2: tuple[int, ...],
        table: dict[tuple[int, ...], object],
    ) -> None:
        minimum = len(p1) + len(p2) - self.k
        if minimum > min(len(p1), len(p2)):
            return
        eligible = [
            (a, b)
            for a in p1
            for b in p2
            if self._sig(a, outside) == self._sig(b, outside) and not (self._any(a) & b)
        ]
        for matching in _matchings(eligible, max(minimum, 0)):
            matched_a = {a for a, _ in matching}
            matched_b = {b for _, b in matching}
            refined = [a | b for a, b in matching]
            refined += [a for a in p1 if a not in matched_a]
            refined += [b for b in p2 if b not in matched_b]
            refined.sort()
            if not self._joins_valid(refined, s1, s2):
                continue
            step = _UnionStep(s1, p1, s2, p2, tuple(matching), tuple(refined))
            if s == self.full:
                table.setdefault(tuple(refined), step)
                return
            for parts in self._coarsenings(refined, outside):
                table.setdefault(parts, step)

    def _build(
        self, s: int, parts: tuple[int, ...], labelmap: dict[int, int]
    ) -> Expression:
        step = self.states[s][parts]
        if not isinstance(step, _UnionStep):
            vertex = self.verts[(s & -s).bit_length() - 1]
            return Create(labelmap[parts[0]], vertex)
        used = set(labelmap.values())
        free = [label for label in range(1, self.k + 1) if label not in used]
        own: dict[int, int] = {}
        extra: list[tuple[int, int]] = []
        for cls in parts:
            subs = sorted(r for r in step.refined if r & cls == r)
            own[subs[0]] = labelmap[cls]
            for r in subs[1:]:
                own[r] = free.pop(0)
                extra.append((own[r], labelmap[cls]))
        left_map = {r & step.left: own[r] for r in step.refined if r & step.left}
        right_map = {r & step.right: own[r] for r in step.refined if r & step.right}
        expr: Expression = DisjointUnion(
            self._build(step.left, step.left_parts, left_map),
            self._build(step.right, step.right_parts, right_map),
        )
        refined = step.refined
        for x_idx, x in enumerate(refined):
            for y in refined[x_idx + 1 :]:
                cross = (self._any(x & step.left) & y & step.right) or (
                    self._any(x & step.right) & y & step.left
                )
                if cross:
                    expr = Join(own[x], own[y], expr)
        for source, target in extra:
            expr = Relabel(source, target, expr)
        return expr


def _final_labels(e: Expression) -> frozenset[int]:
    return frozenset(evaluate(e).labels.values())


def exact_cliquewidth(
    g: Graph, k_max: int = DEFAULT_KMAX, cap: int | None = DEFAULT_CAP
) -> CliqueWidthResult:
    """
    精确团宽度（以及一个见证表达式）。

    对每个连通分支从下界开始逐个尝试 k = 1, 2, …, k_max，
    用 _ExactSolver 的子集动态规划判定 k-表达式是否存在。
    各分支的见证先把顶层标签全部改为 1，再做并，因此标签数为各分支的最大值。

    Args:
        g: 待求解的图
        k_max: 最多尝试的标签数
        cap: 顶点数上限；None 表示不限制

    Returns:
        CliqueWidthResult；超过 k_max 时 width 与 witness 为 None

    Raises:
        SizeCapError: 顶点数超过 cap
    """
    if cap is not None and len(g) > cap:
        raise SizeCapError("cliquewidth.exact_cliquewidth", len(g), cap)
    if len(g) == 0:
        return CliqueWidthResult(0, None, k_max)

    width = 0
    pieces: list[Expression] = []
    for comp in connected_components(g):
        sub = induced_subgraph(g, comp)
        lower = 2 if sub.edges else 1
        found: Expression | None = None
        for k in range(lower, k_max + 1):
            found = _ExactSolver(sub, k).solve()
            if found is not None:
                width = max(width, k)
                break
        if found is None:
            logger.debug("分支 %s 的团宽度大于 %d", sorted(comp), k_max)
            return CliqueWidthResult(None, None, k_max)
        for label in sorted(_final_labels(found) - {1}):
            found = Relabel(label, 1, found)
        pieces.append(found)

    witness = pieces[0]
    for piece in pieces[1:]:
        witness = DisjointUnion(witness, piece)
    return CliqueWidthResult(width, witness, k_max)


# 穷举搜索只用于交叉校验，规模很小
BRUTE_FORCE_CAP = 6

# (顶点 → 标签 的规范形, 已有的边)
_LabeledState = tuple[tuple[tuple[int, int], ...], frozenset[tuple[int, int]]]


def _canonical_state(
    labels: dict[int, int], edges: Iterable[tuple[int, int]]
) -> _LabeledState:
    rename: dict[int, int] = {}
    ordered = tuple(
        (v, rename.setdefault(labels[v], len(rename) + 1)) for v in sorted(labels)
    )
    return ordered, frozenset(edges)


def _relabel_join_closure(
    seeds: Iterable[_LabeledState], allowed: frozenset[tuple[int, int]]
) -> set[_LabeledState]:
    found = set(seeds)
    todo = list(found)
    while todo:
        pairs, edges = todo.pop()
        labels = dict(pairs)
        used = sorted(set(labels.values()))
        successors = [
            ({v: b if lab == a else lab for v, lab in labels.items()}, edges)
            for a, b in itertools.permutations(used, 2)
        ]
        for a, b in itertools.combinations(used, 2):
            added = {
                (min(u, v), max(u, v))
                for u, la in labels.items()
                if la == a
                for v, lb in labels.items()
                if lb == b
            }
            # 边只增不减：超出目标图的状态不可能再回到目标
            if added <= allowed:
                successors.append((labels, edges | added))
        for new_labels, new_edges in successors:
            state = _canonical_state(new_labels, new_edges)
            if state not in found:
                found.add(state)
                todo.append(state)
    return found


def _has_k_expression(g: Graph, k: int) -> bool:
    target = frozenset(g.edges)
    verts = g.vertices
    states: dict[frozenset[int], set[_LabeledState]] = {}
    for size in range(1, len(verts) + 1):
        for subset in itertools.combinations(verts, size):
            key = frozenset(subset)
            allowed = frozenset(e for e in target if e[0] in key and e[1] in key)
            seeds: set[_LabeledState] = set()
            if size == 1:
                seeds.add(_canonical_state({subset[0]: 1}, ()))
            first, rest = subset[0], subset[1:]
            for r in range(len(rest)):
                for extra in itertools.combinations(rest, r):
                    left = frozenset((first, *extra))
                    for s1 in states[left]:
                        for s2 in states[key - left]:
                            labels2 = sorted({lab for _, lab in s2[0]})
                            for image in itertools.permutations(
                                range(1, k + 1), len(labels2)
                            ):
                                rename = dict(zip(labels2, image))
                                merged = dict(s1[0])
                                merged.update((v, rename[lab]) for v, lab in s2[0])
                                seeds.add(_canonical_state(merged, s1[1] | s2[1]))
            states[key] = _relabel_join_closure(seeds, allowed)
    return any(edges == target for _, edges in states[frozenset(verts)])


def brute_force_cliquewidth(
    g: Graph, k_max: int = 4, cap: int = BRUTE_FORCE_CAP
) -> int | None:
    """
    逐个枚举 k-表达式能产生的全部带标签图，求最小的 k。

    与 exact_cliquewidth 互相独立：不用“同标签顶点在 S 外邻域相同”的剪枝，
    只丢弃已经出现目标图之外的边的状态。超过 k_max 时返回 None。

    Raises:
        SizeCapError: 顶点数超过 cap
    """
    if len(g) > cap:
        raise SizeCapError("cliquewidth.brute_force_cliquewidth", len(g), cap)
    if len(g) == 0:
        return 0
    for k in range(1, k_max + 1):
        if _has_k_expression(g, k):
            return k
    return None


# =============================================================================
# 构造性上界
# =============================================================================


def path_forest_expression(g: Graph) -> Expression:
    """
    路的不交并的 3-表达式。

    沿每条路依次加入顶点：当前端点标签 1，新顶点标签 2，连边后
    把 1 改为 3、2 改为 1；路结束时把端点也改为 3。

    Raises:
        ExpressionError: 图为空，或不是路的不交并
    """
    if len(g) == 0:
        raise ExpressionError("空图没有表达式")
    pieces: list[Expression] = []
    for comp in connected_components(g):
        degrees = {v: len(g.adjacency[v]) for v in comp}
        edge_count = sum(degrees.values()) // 2
        if max(degrees.values()) > 2 or edge_count != len(comp) - 1:
            raise ExpressionError(f"分支 {sorted(comp)} 不是路")
        start = min(v for v in comp if degrees[v] <= 1)
        order = [start]
        previous = None
        while len(order) < len(comp):
            nxt = min(u for u in g.adjacency[order[-1]] if u != previous)
            previous = order[-1]
            order.append(nxt)
        expr: Expression = Create(1, order[0])
        for v in order[1:]:
            expr = Join(1, 2, DisjointUnion(expr, Create(2, v)))
            expr = Relabel(2, 1, Relabel(1, 3, expr))
        pieces.append(Relabel(1, 3, expr))
    result = pieces[0]
    for piece in pieces[1:]:
        result = DisjointUnion(result, piece)
    return result


@dataclass(frozen=True)
class PartitionPlan:
    """有序划分、各部分的表达式，以及满足 μ 条件的最小 l。"""

    parts: tuple[frozenset[int], ...]
    expressions: tuple[Expression, ...]
    l: int


def partition_mu_profile(
    g: Graph, parts: Sequence[Iterable[int]]
) -> list[tuple[int, int]]:
    """每个部分的 (μ(U_i), μ(U_1 ∪ … ∪ U_i))。"""
    profile = []
    prefix: frozenset[int] = frozenset()
    for part in parts:
        members = frozenset(part)
        prefix |= members
        profile.append(
            (similarity_partition(g, members).mu, similarity_partition(g, prefix).mu)
        )
    return profile


def row_partition(g: Graph) -> PartitionPlan:
    """
    按行划分带坐标的图，每行用 path_forest_expression 构造。

    每一行是网格诱导子图中的一组路（同行的边只连相邻列）。
    """
    if not g.has_coords:
        raise ExpressionError("按行划分需要每个顶点都有网格坐标")
    rows: dict[int, set[int]] = {}
    for v, (r, _) in g.coords.items():
        rows.setdefault(r, set()).add(v)
    parts = tuple(frozenset(rows[r]) for r in sorted(rows))
    expressions = tuple(path_forest_expression(induced_subgraph(g, p)) for p in parts)
    profile = partition_mu_profile(g, parts)
    l_value = max((max(pair) for pair in profile), default=1)
    return PartitionPlan(parts, expressions, l_value)


def row_partition_expression(g: Graph) -> Expression:
    """按行划分并用实测的 l 组合出整图的表达式。"""
    plan = row_partition(g)
    return compose_partition_expression(g, plan.parts, plan.expressions, plan.l)


def grid_expression(w: WordSpec, i: int, j: int, m: int, n: int) -> Expression:
    """
    H^α_{i,j}(m, n) 的逐行构造，标签数 ≤ 6t+3。

    t 为因子 α_j..α_{j+n-2} 的权重。每一行及每个行前缀的 μ 都不超过 2t+1，
    每行的路表达式用 3 个标签，于是组合后的标签数 ≤ 3(2t+1)。

    Raises:
        ExpressionError: t = 0（全 0 因子）；此时请直接使用 path_forest_expression
    """
    letters = w.factor(j, n - 1)
    t = weight(letters)
    if t == 0:
        raise ExpressionError(
            f"因子 {format_word(letters) or 'ε'} 全为 0：图是路的不交并，"
            "请使用 path_forest_expression 的 3-标签构造"
        )
    g = build_H(w, i, j, m, n)
    plan = row_partition(g)
    return compose_partition_expression(g, plan.parts, plan.expressions, 2 * t + 1)


def _refine(
    e: Expression, norm: dict[int, int], cls_index: dict[int, int], l_value: int
) -> Expression:
    """
    把部分表达式的标签 a 细化为 (a, c)，c 为顶点所在的相似类。

    细化标签编码为 (a-1)·l + c。Join 与 Relabel 对每个出现的类分别展开。
    """

    def code(a: int, c: int) -> int:
        return (norm[a] - 1) * l_value + c

    built: dict[int, tuple[Expression, frozenset[tuple[int, int]]]] = {}
    for node in iter_postorder(e):
        if isinstance(node, Create):
            if not isinstance(node.tag, int) or node.tag not in cls_index:
                raise ExpressionError(f"顶点标记 {node.tag!r} 不属于该部分")
            c = cls_index[node.tag]
            result: tuple[Expression, frozenset[tuple[int, int]]] = (
                Create(code(node.label, c), node.tag),
                frozenset({(node.label, c)}),
            )
        elif isinstance(node, DisjointUnion):
            left, lp = built.pop(id(node.left))
            right, rp = built.pop(id(node.right))
            result = (DisjointUnion(left, right), lp | rp)
        elif isinstance(node, Join):
            child, present = built.pop(id(node.child))
            expr = child
            for a, c1 in sorted(present):
                if a != node.i:
                    continue
                for b, c2 in sorted(present):
                    if b == node.j:
                        expr = Join(code(a, c1), code(b, c2), expr)
            result = (expr, present)
        else:
            child, present = built.pop(id(node.child))
            expr = child
            moved = set()
            for a, c in sorted(present):
                if a == node.source and node.source != node.target:
                    expr = Relabel(code(a, c), code(node.target, c), expr)
                    moved.add((a, c))
            present = (present - moved) | {(node.target, c) for _, c in moved}
            result = (expr, frozenset(present))
        built[id(node)] = result
    return built[id(e)][0]


def compose_partition_expression(
    g: Graph,
    parts: Sequence[Iterable[int]],
    part_expressions: Sequence[Expression],
    l: int,  # noqa: E741
) -> Expression:
    """
    按有序划分 U_1, …, U_n 组合出整图的表达式。

    前提：第 i 个表达式求值恰为 g[U_i]（标记即顶点 id），且对所有 i
    μ(U_i) ≤ l、μ(U_1 ∪ … ∪ U_i) ≤ l。

    构造：
    1. 把部分的标签按 U_i 的相似类细化，再把每个类收拢到一个标签
    2. 与前缀做不交并，冲突的标签先移到空闲标签
    3. 对每一对（前缀类, 部分类）若有边则 Join
    4. 重标号为新前缀 U_1 ∪ … ∪ U_i 的相似类

    所用标签不超过 max(k, 2)·l，k 为各部分表达式的最大标签数。

    Raises:
        PartitionBoundError: μ 超过 l（带出错部分的编号）
        ExpressionError: 划分不合法或部分表达式与 g[U_i] 不符
    """
    blocks = [frozenset(p) for p in parts]
    if not blocks:
        raise ExpressionError("划分不能为空")
    if len(blocks) != len(part_expressions):
        raise ExpressionError(
            f"部分数 {len(blocks)} 与表达式数 {len(part_expressions)} 不一致"
        )
    if l < 1:
        raise ExpressionError(f"l 必须 ≥ 1，得到 {l}")
    covered: set[int] = set()
    for index, block in enumerate(blocks, 1):
        if not block:
            raise ExpressionError(f"第 {index} 部分为空")
        if block & covered:
            raise ExpressionError(f"第 {index} 部分与前面的部分相交")
        covered |= block
    if covered != set(g.adjacency):
        raise ExpressionError("划分没有恰好覆盖图的全部顶点")
    for index, (mu_part, mu_prefix) in enumerate(partition_mu_profile(g, blocks), 1):
        if mu_part > l or mu_prefix > l:
            raise PartitionBoundError(
                index,
                f"第 {index} 部分: μ(U)={mu_part}, μ(前缀)={mu_prefix}，超过 l={l}",
            )

    k = max(label_count(e) for e in part_expressions)
    budget = max(k, 2) * l
    result: Expression | None = None
    prefix_labels: dict[frozenset[int], int] = {}
    prefix: frozenset[int] = frozenset()

    for index, (block, part_expr) in enumerate(zip(blocks, part_expressions), 1):
        lg = evaluate(part_expr)
        expected = induced_subgraph(g, block)
        same_tags = set(lg.tags.values()) == set(block)
        if not same_tags or lg.graph.adjacency != expected.adjacency:
            raise ExpressionError(f"第 {index} 部分的表达式求值结果不是 g[U_{index}]")
        sim = similarity_partition(g, block)
        cls_index = {v: c + 1 for c, cls in enumerate(sim.classes) for v in cls}
        norm = {label: i + 1 for i, label in enumerate(sorted(labels_of(part_expr)))}
        expr = _refine(part_expr, norm, cls_index, l)

        def code(a: int, c: int) -> int:
            return (norm[a] - 1) * l + c

        targets = {
            c + 1: code(lg.labels[min(cls)], c + 1) for c, cls in enumerate(sim.classes)
        }
        present = {code(lg.labels[v], cls_index[v]) for v in block}
        for label in sorted(present):
            target = targets[(label - 1) % l + 1]
            if label != target:
                expr = Relabel(label, target, expr)

        if result is None:
            result = expr
            prefix = block
            prefix_labels = {sim.classes[c - 1]: lab for c, lab in targets.items()}
            continue

        used_prefix = set(prefix_labels.values())
        free = sorted(set(range(1, budget + 1)) - used_prefix - set(targets.values()))
        part_labels = {}
        for c, lab in sorted(targets.items()):
            if lab in used_prefix:
                new = free.pop(0)
                expr = Relabel(lab, new, expr)
                lab = new
            part_labels[c] = lab

        combined: Expression = DisjointUnion(result, expr)
        for pcls, plab in sorted(prefix_labels.items(), key=lambda kv: kv[1]):
            for c, clab in sorted(part_labels.items()):
                if g.has_edge(min(pcls), min(sim.classes[c - 1])):
                    combined = Join(plab, clab, combined)

        prefix = prefix | block
        new_sim = similarity_partition(g, prefix)
        groups: dict[int, list[int]] = {}
        for pcls, plab in prefix_labels.items():
            groups.setdefault(new_sim.class_of(min(pcls)), []).append(plab)
        for c, clab in part_labels.items():
            target = new_sim.class_of(min(sim.classes[c - 1]))
            groups.setdefault(target, []).append(clab)
        prefix_labels = {}
        for new_index, labs in sorted(groups.items()):
            rep = min(labs)
            for other in sorted(labs):
                if other != rep:
                    combined = Relabel(other, rep, combined)
            prefix_labels[new_sim.classes[new_index]] = rep
        result = combined

    assert result is not None
    if evaluate(result).graph.adjacency != g.adjacency:
        raise ExpressionError("组合后的表达式与输入图不一致")
    logger.debug(
        "组合 %d 个部分: l=%d, k=%d, 标签数 %d", len(blocks), l, k, label_count(result)
    )
    return result
