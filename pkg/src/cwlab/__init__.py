"""
cwlab - 由词定义的二部图类的团宽度实验台。

每个无限词 α（字母取自 {0,1,2,3}）定义一个网格状二部图类：
相邻两列之间的连边方式由对应的字母决定。本库构造这些网格图，
并在桌面规模上检验与它们的团宽度有关的各种构造。

快速开始：
    >>> from cwlab import PeriodicWord, build_H, exact_cliquewidth
    >>> from cwlab import grid_expression, label_count
    >>> w = PeriodicWord("23")
    >>> g = build_H(w, 1, 1, 3, 3)
    >>> exact_cliquewidth(g).width <= label_count(grid_expression(w, 1, 1, 3, 3))
    True

主要功能：
    - 周期词、Sturmian 词、替换词与显式词；间隙因子与 Γ 探测
    - 网格图 H、对角见证图 W、诱导嵌入与素性测试
    - 团宽度表达式的构造、求值与小图上的精确求解
    - 局部补、枢轴、秩宽度与 0/1 消去约化
    - 簇图、Menger 分隔与条带流水线
"""

from cwlab.cliquewidth import (
    CliqueWidthResult,
    Create,
    DisjointUnion,
    Expression,
    Join,
    LabeledGraph,
    Relabel,
    brute_force_cliquewidth,
    compose_partition_expression,
    evaluate,
    exact_cliquewidth,
    grid_expression,
    label_count,
    parse_sexp,
    path_forest_expression,
    row_partition_expression,
    to_sexp,
)
from cwlab.clusters import (
    BarPartition,
    ClusterGraph,
    SeparatorPartition,
    XYPartition,
    absorb_boundary_vertices,
    bar_partition,
    build_cluster_graph,
    column_modules,
    max_disjoint_paths,
    standard_form,
    x_interval_counts,
    xy_graph_partition,
)
from cwlab.errors import (
    ClusterError,
    ConfigError,
    CwlabError,
    ExpressionError,
    ForbiddenPatternError,
    GammaProbeError,
    GraphError,
    InvalidWordError,
    NonProlongableError,
    PartitionBoundError,
    ReductionError,
    SizeCapError,
    UnknownVertexError,
    UnsupportedFormatError,
    WordIndexError,
)
from cwlab.experiments import ExperimentConfig, ExperimentReport, run_experiment
from cwlab.gridgraphs import (
    Embedding,
    Graph,
    build_H,
    build_W,
    embed_W,
    find_induced_embedding,
    forbidden_window,
    induced_subgraph,
    is_isomorphic,
    is_prime,
    mu,
    similarity_partition,
)
from cwlab.io import export, read_graph, render
from cwlab.vertexminor import (
    ReductionStep,
    ReductionTrace,
    WordReduction,
    cut_rank,
    exact_rankwidth,
    local_complement,
    pivot,
    reduce_to_23,
    remove_one,
    remove_zero,
)
from cwlab.words import (
    ExplicitWord,
    PeriodicWord,
    SturmianWord,
    SubstitutionWord,
    WordSpec,
    complement_word,
    delta_substitution,
    factor,
    factor_complexity,
    gamma_membership_probe,
    gap_report,
    letter_at,
    recurrence_window_estimate,
)

__version__ = "0.1.0"

__all__ = [
    # 版本
    "__version__",
    # 词
    "WordSpec",
    "PeriodicWord",
    "SturmianWord",
    "SubstitutionWord",
    "ExplicitWord",
    "delta_substitution",
    "complement_word",
    "letter_at",
    "factor",
    "factor_complexity",
    "gap_report",
    "gamma_membership_probe",
    "recurrence_window_estimate",
    # 图
    "Graph",
    "Embedding",
    "build_H",
    "build_W",
    "embed_W",
    "forbidden_window",
    "induced_subgraph",
    "is_isomorphic",
    "find_induced_embedding",
    "similarity_partition",
    "mu",
    "is_prime",
    # 团宽度
    "Expression",
    "Create",
    "DisjointUnion",
    "Join",
    "Relabel",
    "LabeledGraph",
    "CliqueWidthResult",
    "evaluate",
    "label_count",
    "to_sexp",
    "parse_sexp",
    "exact_cliquewidth",
    "brute_force_cliquewidth",
    "path_forest_expression",
    "row_partition_expression",
    "grid_expression",
    "compose_partition_expression",
    # 顶点子式
    "local_complement",
    "pivot",
    "cut_rank",
    "exact_rankwidth",
    "ReductionStep",
    "ReductionTrace",
    "WordReduction",
    "remove_zero",
    "remove_one",
    "reduce_to_23",
    # 簇图
    "ClusterGraph",
    "SeparatorPartition",
    "XYPartition",
    "BarPartition",
    "column_modules",
    "standard_form",
    "build_cluster_graph",
    "max_disjoint_paths",
    "xy_graph_partition",
    "x_interval_counts",
    "absorb_boundary_vertices",
    "bar_partition",
    # 实验与导出
    "ExperimentConfig",
    "ExperimentReport",
    "run_experiment",
    "export",
    "render",
    "read_graph",
    # 异常
    "CwlabError",
    "InvalidWordError",
    "WordIndexError",
    "NonProlongableError",
    "GammaProbeError",
    "GraphError",
    "UnknownVertexError",
    "SizeCapError",
    "ExpressionError",
    "PartitionBoundError",
    "ReductionError",
    "ClusterError",
    "ForbiddenPatternError",
    "ConfigError",
    "UnsupportedFormatError",
]
