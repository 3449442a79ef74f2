"""
可复现的实验预设。

每个预设在给定配置与随机种子下完全确定，输出一个 JSON 报告
（嵌入完整的已解析配置），并给出是否全部断言通过。

配置解析顺序：配置文件 > 命令行参数 > 默认值。

预设：
- grid-expression-sweep:      逐行构造的标签数 ≤ 6t+3，且求值与网格同构
- oracle-consistency:         已知宽度、余图判据、穷举交叉验证、见证与遗传单调性
- sandwich-inequality:        rwd ≤ cwd ≤ 2^(rwd+1) − 1（小图全集）
- vertex-minor-monotonicity:  随机顶点子式轨迹下秩宽度不增，枢轴两种定义一致
- reduction-correctness:      0/1 消去规则与 reduce_to_23 的结果同构于目标网格
- menger-pipeline:            k = 1..4 满网格 s = k，随机删点窗口 s ≤ k−1 与 X/Y 不变量
- bound-pipeline:             条带流水线的表达式正确且不超过理论上界
- word-suite:                 Sturmian 复杂度、ψ 的权重与间隙上界、补词的无界趋势
- embedding-oracle:           W 图嵌入公式，多个二元宿主词上的 F_β 嵌入判据
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np

from cwlab.cliquewidth import (
    brute_force_cliquewidth,
    evaluate,
    exact_cliquewidth,
    grid_expression,
    label_count,
)
from cwlab.clusters import (
    bar_partition,
    build_cluster_graph,
    max_disjoint_paths,
    xy_graph_partition,
)
from cwlab.errors import ConfigError, CwlabError, ForbiddenPatternError, GraphError
from cwlab.gridgraphs import (
    Graph,
    build_H,
    build_W,
    embed_W,
    find_induced_embedding,
    forbidden_window,
    graph_from_networkx,
    induced_subgraph,
    is_isomorphic,
    verify_embedding,
)
from cwlab.io import write_json
from cwlab.vertexminor import (
    ONE_RESULTS,
    ONE_RULES,
    ZERO_RULES,
    ReductionStep,
    ReductionTrace,
    bipartite_pivot,
    exact_rankwidth,
    grid_word,
    pivot,
    reduce_to_23,
    remove_one,
    remove_zero,
    replay,
)
from cwlab.words import (
    BOUND_VIOLATED,
    UNBOUNDED_TREND,
    ExplicitWord,
    PeriodicWord,
    SturmianWord,
    SubstitutionWord,
    WordSpec,
    complement_word,
    factor_complexity,
    format_word,
    gamma_membership_probe,
    parse_word,
    recurrence_window_estimate,
    reverse_word,
    substitution_iterate,
    weight,
    word_from_dict,
)

logger = logging.getLogger(__name__)

DEFAULTS: dict[str, Any] = {
    "preset": None,
    "word": None,
    "seed": 0,
    "horizon": 2000,
    "max_vertices": 8,
    "samples": 200,
    "k": 2,
    "rows": 5,
    "kmax": 6,
    "out_dir": "reports",
}

# 精确求解器能接受的最大规模
ORACLE_VERTEX_CAP = 10


@dataclass(frozen=True)
class ExperimentConfig:
    """
    已解析的实验配置。

    Attributes:
        preset: 预设名
        word: 词描述（JSON 对象）；None 表示使用预设自带的词
        seed: 随机种子
        horizon: 词的诊断视界
        max_vertices: 随机图与全集枚举的最大顶点数
        samples: 随机样本数
        k: 禁止窗口大小
        rows: 网格窗口的行数上限
        kmax: 精确团宽度尝试的最大标签数
        out_dir: 报告目录
    """

    preset: str
    word: Mapping[str, Any] | None = None
    seed: int = 0
    horizon: int = 2000
    max_vertices: int = 8
    samples: int = 200
    k: int = 2
    rows: int = 5
    kmax: int = 6
    out_dir: str = "reports"

    def __post_init__(self) -> None:
        if self.preset not in PRESETS:
            raise ConfigError(
                f"未知的预设 {self.preset!r}，可选: {', '.join(sorted(PRESETS))}"
            )
        limits = {
            "max_vertices": (1, ORACLE_VERTEX_CAP),
            "samples": (1, None),
            "k": (2, None),
            "rows": (1, None),
            "kmax": (1, None),
            "horizon": (16, None),
        }
        for name, (low, high) in limits.items():
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{name} 必须是整数，得到 {value!r}")
            if value < low or (high is not None and value > high):
                bound = f"[{low}, {high}]" if high is not None else f"≥ {low}"
                raise ConfigError(f"{name} 必须在 {bound} 范围内，得到 {value}")
        if self.word is not None:
            try:
                word_from_dict(self.word)
            except CwlabError as e:
                raise ConfigError(f"词描述无效: {e}") from None

    def word_spec(self, default: WordSpec) -> WordSpec:
        return word_from_dict(self.word) if self.word is not None else default

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["word"] = dict(self.word) if self.word is not None else None
        return data


def resolve_config(
    flags: Mapping[str, Any] | None = None,
    file_values: Mapping[str, Any] | None = None,
    defaults: Mapping[str, Any] | None = None,
) -> ExperimentConfig:
    """
    合并配置：文件 > 命令行参数 > 默认值；参数中的 None 表示未给出。

    Raises:
        ConfigError: 未知的键、缺少预设或取值无效
    """
    merged = dict(DEFAULTS if defaults is None else defaults)
    for source in (flags or {}, file_values or {}):
        unknown = sorted(set(source) - set(DEFAULTS))
        if unknown:
            raise ConfigError(f"未知的配置项: {', '.join(unknown)}")
        merged.update({k: v for k, v in source.items() if v is not None})
    if not merged.get("preset"):
        raise ConfigError("配置中缺少 preset")
    return ExperimentConfig(**merged)


@dataclass
class ExperimentReport:
    """
    实验报告。

    Attributes:
        preset: 预设名
        config: 已解析的配置
        checks: 断言总数
        failures: 失败断言的描述
        details: 预设特有的统计数据
    """

    preset: str
    config: dict[str, Any]
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> bool:
        self.checks += 1
        if not ok:
            self.failures.append(message)
            logger.warning("断言失败: %s", message)
        return ok

    def summary(self) -> str:
        status = "通过" if self.passed else "失败"
        return (
            f"{self.preset}: {status}（{self.checks} 项断言，"
            f"{len(self.failures)} 项失败）"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "preset": self.preset,
            "passed": self.passed,
            "checks": self.checks,
            "failures": list(self.failures),
            "details": self.details,
            "config": self.config,
        }


# =============================================================================
# 辅助函数
# =============================================================================


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    """G(n, p) 随机图。"""
    edges = [
        (u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p
    ]
    return Graph.from_edges(range(n), edges)


def random_bipartite(rng: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    """前一半与后一半之间随机连边的二部图。"""
    half = n // 2
    edges = [(u, v) for u in range(half) for v in range(half, n) if rng.random() < p]
    return Graph.from_edges(range(n), edges)


def shuffled(g: Graph, rng: np.random.Generator) -> Graph:
    """随机重新编号的同构副本（不带坐标）。"""
    perm = [int(x) for x in rng.permutation(len(g))]
    index = {v: perm[i] for i, v in enumerate(g.vertices)}
    return Graph.from_edges(index.values(), ((index[u], index[v]) for u, v in g.edges))


def random_subset(g: Graph, rng: np.random.Generator, keep: float) -> Graph:
    chosen = [v for v in g.vertices if rng.random() < keep]
    return induced_subgraph(g, chosen)


def random_window(full: Graph, rng: np.random.Generator) -> Graph:
    """
    在满网格窗口的若干列中各删去一部分行。

    至少有一列被改动，每列至少留下一个顶点，因此列仍然连续。

    Raises:
        GraphError: 窗口只有一行，无法删去真子集
    """
    cols = full.columns()
    if min(len(full.column(c)) for c in cols) < 2:
        raise GraphError("随机窗口要求每列至少两个顶点")
    chosen = [c for c in cols if rng.random() < 0.5]
    if not chosen:
        chosen = [cols[int(rng.integers(len(cols)))]]
    victims = []
    for c in chosen:
        column = full.column(c)
        size = int(rng.integers(1, len(column)))
        picks = rng.choice(len(column), size=size, replace=False)
        victims.extend(column[int(i)] for i in picks)
    return full.without(victims)


def _cw_width(g: Graph, kmax: int) -> int | None:
    return exact_cliquewidth(g, k_max=kmax, cap=ORACLE_VERTEX_CAP).width


def _is_cograph(nx_graph: nx.Graph) -> bool:
    """余图：至少两个顶点时，图或其补图不连通，且各分支仍是余图。"""
    if nx_graph.number_of_nodes() <= 1:
        return True
    if nx.is_connected(nx_graph):
        nx_graph = nx.complement(nx_graph)
        if nx.is_connected(nx_graph):
            return False
    return all(
        _is_cograph(nx_graph.subgraph(part).copy())
        for part in nx.connected_components(nx_graph)
    )


# 已知团宽度的小图
KNOWN_WIDTHS: dict[str, tuple[nx.Graph, int]] = {
    "3 个孤立点": (nx.empty_graph(3), 1),
    "K2": (nx.complete_graph(2), 2),
    "K4": (nx.complete_graph(4), 2),
    "K_{2,3}": (nx.complete_bipartite_graph(2, 3), 2),
    "C4": (nx.cycle_graph(4), 2),
    "P4": (nx.path_graph(4), 3),
    "C5": (nx.cycle_graph(5), 3),
    "3×3 网格": (nx.grid_2d_graph(3, 3), 4),
}


# =============================================================================
# 预设
# =============================================================================


def _grid_expression_sweep(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    worst = 0
    cases = 0
    for length in range(1, 5):
        for letters in itertools.product((0, 2, 3), repeat=length):
            t = sum(1 for letter in letters if letter)
            if t == 0:
                continue
            word = ExplicitWord(letters)
            for m in range(1, cfg.rows + 1):
                expr = grid_expression(word, 1, 1, m, length + 1)
                labels = label_count(expr)
                worst = max(worst, labels - (6 * t + 3))
                name = f"{format_word(letters)}, m={m}"
                report.check(labels <= 6 * t + 3, f"{name}: 标签数 {labels} > {6 * t + 3}")
                host = build_H(word, 1, 1, m, length + 1)
                report.check(
                    evaluate(expr).graph.adjacency == host.adjacency,
                    f"{name}: 表达式求值与网格不一致",
                )
                cases += 1
    report.details.update({"cases": cases, "max_slack_excess": worst})


def _oracle_consistency(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    for name, (nx_graph, expected) in KNOWN_WIDTHS.items():
        width = _cw_width(graph_from_networkx(nx_graph), max(cfg.kmax, expected))
        report.check(width == expected, f"{name}: 团宽度 {width} ≠ {expected}")
    for name in ("P4", "C5"):
        nx_graph, expected = KNOWN_WIDTHS[name]
        found = brute_force_cliquewidth(graph_from_networkx(nx_graph))
        report.check(found == expected, f"{name}: 穷举得到 {found} ≠ {expected}")

    cographs = 0
    for nx_graph in nx.graph_atlas_g():
        n = nx_graph.number_of_nodes()
        if n == 0 or n > min(cfg.max_vertices, 6):
            continue
        g = graph_from_networkx(nx_graph)
        at_most_two = exact_cliquewidth(g, k_max=2, cap=ORACLE_VERTEX_CAP).width
        is_cograph = _is_cograph(nx_graph)
        cographs += is_cograph
        report.check(
            (at_most_two is not None) == is_cograph,
            f"atlas n={n} m={nx_graph.number_of_edges()}: 余图 {is_cograph}，"
            f"团宽度 ≤ 2 {at_most_two is not None}",
        )

    rng = np.random.default_rng(cfg.seed)
    widths: dict[int, int] = {}
    brute_checked = 0
    for sample in range(cfg.samples):
        n = int(rng.integers(1, cfg.max_vertices + 1))
        g = random_graph(rng, n)
        result = exact_cliquewidth(g, k_max=cfg.kmax, cap=ORACLE_VERTEX_CAP)
        if result.width is None:
            report.details.setdefault("exceeded", 0)
            report.details["exceeded"] += 1
            continue
        widths[result.width] = widths.get(result.width, 0) + 1
        # 穷举只在 5 个顶点以内可行
        if n <= 5 and brute_checked < 20:
            found = brute_force_cliquewidth(g)
            report.check(
                found == result.width, f"样本 {sample}: 穷举 {found} ≠ {result.width}"
            )
            brute_checked += 1
        if result.witness is not None:
            lg = evaluate(result.witness)
            report.check(
                lg.graph.adjacency == g.adjacency, f"样本 {sample}: 见证求值不等于原图"
            )
            report.check(
                label_count(result.witness) == result.width,
                f"样本 {sample}: 见证标签数与宽度不一致",
            )
        copy = shuffled(g, rng)
        report.check(
            _cw_width(copy, cfg.kmax) == result.width, f"样本 {sample}: 同构副本宽度不同"
        )
        sub = random_subset(g, rng, 0.6)
        if len(sub):
            sub_width = _cw_width(sub, cfg.kmax)
            report.check(
                sub_width is not None and sub_width <= result.width,
                f"样本 {sample}: 诱导子图宽度 {sub_width} > {result.width}",
            )

    word = cfg.word_spec(PeriodicWord("23"))
    for m in range(1, cfg.rows + 1):
        for n in range(2, cfg.rows + 1):
            if m * n > cfg.max_vertices or word.factor(1, n - 1).count(0) == n - 1:
                continue
            expr = grid_expression(word, 1, 1, m, n)
            width = _cw_width(build_H(word, 1, 1, m, n), cfg.kmax)
            report.check(
                width is None or width <= label_count(expr),
                f"H({m},{n}): 精确宽度 {width} > 构造的 {label_count(expr)}",
            )
    report.details.update(
        {
            "width_histogram": {str(k): v for k, v in sorted(widths.items())},
            "brute_force_checked": brute_checked,
            "cographs": cographs,
        }
    )


def _sandwich_inequality(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    limit = min(cfg.max_vertices, 7)
    counted = 0
    for nx_graph in nx.graph_atlas_g():
        n = nx_graph.number_of_nodes()
        if n == 0 or n > limit:
            continue
        g = graph_from_networkx(nx_graph)
        rw = exact_rankwidth(g).width
        cw = _cw_width(g, cfg.kmax)
        name = f"atlas n={n} m={nx_graph.number_of_edges()} #{counted}"
        if cw is None:
            report.check(False, f"{name}: 团宽度超过 kmax={cfg.kmax}")
            continue
        report.check(rw <= cw, f"{name}: rwd={rw} > cwd={cw}")
        report.check(cw <= 2 ** (rw + 1) - 1, f"{name}: cwd={cw} > 2^(rwd+1)-1")
        counted += 1
    report.details["graphs"] = counted


def _random_trace(g: Graph, rng: np.random.Generator) -> list[ReductionStep]:
    steps = []
    current = g
    for _ in range(int(rng.integers(1, 4))):
        choice = int(rng.integers(0, 3))
        verts = current.vertices
        if choice == 0:
            v = verts[int(rng.integers(len(verts)))]
            step = ReductionStep("local-complement", (v,))
        elif choice == 1 and current.edges:
            u, v = current.edges[int(rng.integers(len(current.edges)))]
            step = ReductionStep("pivot", (u, v))
        elif len(verts) > 1:
            step = ReductionStep("delete", (verts[int(rng.integers(len(verts)))],))
        else:
            continue
        steps.append(step)
        current = step.apply(current)
    return steps


def _vertex_minor_monotonicity(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    rng = np.random.default_rng(cfg.seed)
    limit = min(cfg.max_vertices, 8)
    for sample in range(cfg.samples):
        n = int(rng.integers(2, limit + 1)) if limit >= 2 else 1
        g = random_graph(rng, n)
        steps = _random_trace(g, rng)
        final = replay(g, steps)
        before = exact_rankwidth(g).width
        after = exact_rankwidth(final).width
        report.check(after <= before, f"样本 {sample}: rwd 从 {before} 升到 {after}")

        b = random_bipartite(rng, n)
        for u, v in b.edges[:3]:
            report.check(
                pivot(b, u, v).adjacency == bipartite_pivot(b, u, v).adjacency,
                f"样本 {sample}: 二部枢轴 {u}{v} 两种定义不一致",
            )
            report.check(
                pivot(b, u, v).adjacency == pivot(b, v, u).adjacency,
                f"样本 {sample}: 枢轴 {u}{v} 不对称",
            )
    report.details["samples"] = cfg.samples


# 0 / 1 消去规则在这些行数上逐一检查（两种奇偶）
REDUCTION_ROWS = range(8, 17)


def _check_reduced(
    report: ExperimentReport, name: str, trace: ReductionTrace, expected: str, m: int
) -> int:
    final = trace.final
    cols = final.columns()
    rows = len(final.column(cols[0])) if cols else 0
    target = build_H(ExplicitWord(expected), 1, 1, rows, len(expected) + 1)
    report.check(trace.verify(), f"{name}: 轨迹重放不一致")
    report.check(
        set(final.vertices) <= set(trace.initial.vertices),
        f"{name}: 结果含有初始图之外的顶点",
    )
    report.check(
        grid_word(final) == parse_word(expected), f"{name}: 字母不是 {expected}"
    )
    report.check(rows >= m / 2 - 2, f"{name}: 只剩 {rows} 行")
    report.check(is_isomorphic(final, target), f"{name}: 结果不同构于 H^{expected}")
    return rows


def _reduction_correctness(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    rows_seen: dict[str, int] = {}
    for rule in ZERO_RULES:
        for m in REDUCTION_ROWS:
            trace = remove_zero(build_H(ExplicitWord(rule), 1, 1, m, 3), 2, rule)
            kept = rule.replace("0", "", 1) or "0"
            name = f"remove_zero[{rule}] m={m}"
            rows_seen[f"{rule}/{m}"] = _check_reduced(report, name, trace, kept, m)

    for rule in ONE_RULES:
        for m in REDUCTION_ROWS:
            trace = remove_one(build_H(ExplicitWord(rule), 1, 1, m, 4), 1, rule)
            name = f"remove_one[{rule}] m={m}"
            rows_seen[f"{rule}/{m}"] = _check_reduced(
                report, name, trace, ONE_RESULTS[rule], m
            )

    words = [ExplicitWord("023"), ExplicitWord("2113"), ExplicitWord("0123")]
    if cfg.word is not None:
        words.append(cfg.word_spec(PeriodicWord("2")))
    results = {}
    for word in words:
        p = word.length if isinstance(word, ExplicitWord) else cfg.k + 1
        source = word.factor(1, p)
        if not any(letter in (2, 3) for letter in source):
            continue
        reduction = reduce_to_23(word, 1, p)
        name = f"reduce_to_23({format_word(source)})"
        report.check(reduction.trace.verify(), f"{name}: 轨迹重放不一致")
        report.check(
            all(letter in (2, 3) for letter in reduction.gamma), f"{name}: γ 含有 0 或 1"
        )
        report.check(reduction.final_rows >= reduction.q, f"{name}: 行数少于 q")
        results[format_word(source)] = format_word(reduction.gamma)
    report.details.update({"rule_rows": rows_seen, "gamma": results})


# 每个 (词, k) 抽取的随机窗口数上限
MENGER_WINDOWS = 50


def _menger_pipeline(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    rng = np.random.default_rng(cfg.seed)
    words = [PeriodicWord("2"), PeriodicWord("3"), PeriodicWord("023")]
    if cfg.word is not None:
        words = [cfg.word_spec(PeriodicWord("2"))]
    path_counts: dict[str, list[int]] = {}
    for word in words:
        for k in range(1, 5):
            cap = 4 * k * k - 3 * k
            full = build_H(word, 1, 1, k, k)
            sp = max_disjoint_paths(build_cluster_graph(full, word, strict=False))
            report.check(sp.s == k, f"{word.describe()} 满网格 k={k}: s={sp.s}")
            if k == 1:
                continue
            counts = []
            for sample in range(min(cfg.samples, MENGER_WINDOWS)):
                j = int(rng.integers(1, 7))
                window = random_window(build_H(word, 1, j, k, k), rng)
                b = build_cluster_graph(window, word, strict=False)
                sp = max_disjoint_paths(b)
                xy = xy_graph_partition(sp, b, window)
                counts.append(sp.s)
                name = f"{word.describe()} k={k} 窗口 {sample}"
                report.check(sp.s <= k - 1, f"{name}: s={sp.s} > k-1")
                report.check(
                    xy.mu_x <= cap and xy.mu_y <= cap, f"{name}: μ 超过 {cap}"
                )
                report.check(
                    xy.x | xy.y == frozenset(window.adjacency), f"{name}: X ∪ Y ≠ V"
                )
                report.check(not xy.x & xy.y, f"{name}: X 与 Y 相交")
                report.check(
                    not any(
                        tail in sp.x_nodes and head in sp.y_nodes
                        for tail, head in b.arcs()
                    ),
                    f"{name}: 有从 X 指向 Y 的有向边",
                )
            path_counts[f"{word.describe()}/k={k}"] = counts
    report.details["paths"] = path_counts


def _bound_pipeline(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    rng = np.random.default_rng(cfg.seed)
    k = cfg.k
    word = cfg.word_spec(PeriodicWord("2"))
    beta = word.factor(1, k - 1)
    estimate = recurrence_window_estimate(word, beta, cfg.horizon)
    if not report.check(estimate is not None, f"β={format_word(beta)} 在视界内不常返"):
        return
    assert estimate is not None
    window_len = max(estimate + 1, k)
    host = build_H(word, 1, 1, cfg.rows, 2 * window_len)
    ran, skipped = 0, 0
    for sample in range(cfg.samples):
        g = random_subset(host, rng, 0.35)
        if len(g) == 0:
            continue
        try:
            result = bar_partition(g, word, 1, k, window_len)
        except ForbiddenPatternError:
            skipped += 1
            continue
        ran += 1
        assert result.expression is not None
        report.check(
            evaluate(result.expression).graph.adjacency == g.adjacency,
            f"样本 {sample}: 组合表达式求值不等于原图",
        )
        report.check(
            result.within_bound, f"样本 {sample}: 标签数 {result.labels} > {result.bound}"
        )
        if len(g) <= cfg.max_vertices:
            width = _cw_width(g, cfg.kmax)
            report.check(
                width is None or width <= result.labels,
                f"样本 {sample}: 精确宽度 {width} > {result.labels}",
            )
    report.check(ran > 0, "没有任何样本避开禁止窗口")
    report.details.update(
        {"window_len": window_len, "ran": ran, "skipped_forbidden": skipped}
    )


# 黄金 Sturmian 词复杂度检查的长度与视界
COMPLEXITY_LENGTHS = range(1, 13)
COMPLEXITY_HORIZON = 5000
# ψ 的间隙上界检查的视界
GAP_HORIZON = 10_000


def _word_suite(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    golden = SturmianWord.golden()
    horizon = max(cfg.horizon, COMPLEXITY_HORIZON)
    complexities = [factor_complexity(golden, n, horizon) for n in COMPLEXITY_LENGTHS]
    for n, value in zip(COMPLEXITY_LENGTHS, complexities):
        report.check(value == n + 1, f"黄金 Sturmian 词 p({n})={value} ≠ {n + 1}")
    report.check(
        recurrence_window_estimate(golden, "0", cfg.horizon) == 3,
        "黄金 Sturmian 词中 0 的常返窗口不是 3",
    )

    psi = SubstitutionWord.psi()
    for n in COMPLEXITY_LENGTHS:
        image = substitution_iterate(psi.rules, 1, n)
        report.check(weight(image) == 2**n, f"ψ^{n}(1) 的权重 {weight(image)} ≠ 2^{n}")
        report.check(image[-n:] == (0,) * n, f"ψ^{n}(1) 不以 0^{n} 结尾")
    verdicts = gamma_membership_probe(psi, 3, max(cfg.horizon, GAP_HORIZON))
    violated = [format_word(v.factor) for v in verdicts if v.verdict == BOUND_VIOLATED]
    report.check(not violated, f"ψ 的间隙权重超过 2^(k+1): {violated}")

    comp = complement_word(psi, 500)
    flagged = [
        format_word(v.factor)
        for v in gamma_membership_probe(comp, 1, 500)
        if v.verdict == UNBOUNDED_TREND
    ]
    report.check("0" in flagged, "ψ 的补词中 0 的间隙权重没有呈现增长趋势")

    periodic = cfg.word_spec(PeriodicWord("0123"))
    bad = [
        format_word(v.factor)
        for v in gamma_membership_probe(periodic, 3, cfg.horizon)
        if v.verdict in (BOUND_VIOLATED, UNBOUNDED_TREND)
    ]
    report.check(not bad, f"{periodic.describe()} 的因子被判为不在 Γ 中: {bad}")
    report.details.update(
        {"golden_complexity": complexities, "complement_flagged": flagged}
    )


# F_β 检查用的二元宿主词
BINARY_HOSTS: dict[str, WordSpec] = {
    "golden": SturmianWord.golden(),
    "sturmian[0;2,2,…]": SturmianWord.from_continued_fraction([0] + [2] * 20),
    "periodic(01)": PeriodicWord("01"),
    "periodic(011)": PeriodicWord("011"),
    "periodic(0010)": PeriodicWord("0010"),
}
FORBIDDEN_HOST_COLS = 14


def _embedding_oracle(cfg: ExperimentConfig, report: ExperimentReport) -> None:
    words = [PeriodicWord("2"), PeriodicWord("3"), PeriodicWord("23")]
    if cfg.word is not None:
        words.append(cfg.word_spec(PeriodicWord("23")))
    for word in words:
        for n in range(1, 5):
            if any(letter not in (2, 3) for letter in word.factor(1, 2 * n - 2)):
                continue
            pattern = build_W(word, n)
            host = build_H(word, 1, 1, 2 * n - 1, 2 * n - 1)
            report.check(
                verify_embedding(pattern, host, embed_W(word, n)),
                f"{word.describe()} W_{n}: 坐标公式不是诱导嵌入",
            )
    try:
        build_W(PeriodicWord("012"), 2)
    except GraphError:
        rejected = True
    else:
        rejected = False
    report.check(rejected, "W 图接受了含 0、1 的词 012")

    outcomes: dict[str, dict[str, bool]] = {}
    for host_name, word in BINARY_HOSTS.items():
        text = format_word(word.factor(1, FORBIDDEN_HOST_COLS - 1))
        host = build_H(word, 1, 1, 3, FORBIDDEN_HOST_COLS)
        found_by_beta = {}
        for length in range(1, 5):
            for beta in itertools.product((0, 1), repeat=length):
                if 1 not in beta:
                    continue
                name = format_word(beta)
                expected = name in text or format_word(reverse_word(beta)) in text
                found = find_induced_embedding(forbidden_window(beta), host) is not None
                found_by_beta[name] = found
                report.check(
                    found == expected,
                    f"{host_name} F_{name}: 嵌入 {found}，期望 {expected}",
                )
        outcomes[host_name] = found_by_beta
    report.details.update({"f_beta": outcomes["golden"], "f_beta_hosts": outcomes})


PRESETS: dict[str, Callable[[ExperimentConfig, ExperimentReport], None]] = {
    "grid-expression-sweep": _grid_expression_sweep,
    "oracle-consistency": _oracle_consistency,
    "sandwich-inequality": _sandwich_inequality,
    "vertex-minor-monotonicity": _vertex_minor_monotonicity,
    "reduction-correctness": _reduction_correctness,
    "menger-pipeline": _menger_pipeline,
    "bound-pipeline": _bound_pipeline,
    "word-suite": _word_suite,
    "embedding-oracle": _embedding_oracle,
}


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentReport:
    """
    运行一个预设。

    Args:
        cfg: 已解析的配置
        write: 是否把报告写入 ``out_dir/<preset>.json``

    Returns:
        ExperimentReport；passed 为 False 表示有断言失败
    """
    logger.info("运行预设 %s（seed=%d）", cfg.preset, cfg.seed)
    report = ExperimentReport(cfg.preset, cfg.to_dict())
    PRESETS[cfg.preset](cfg, report)
    if write:
        path = write_json(report.to_dict(), Path(cfg.out_dir) / f"{cfg.preset}.json")
        report.details.setdefault("report_path", str(path))
    logger.info(report.summary())
    return report
