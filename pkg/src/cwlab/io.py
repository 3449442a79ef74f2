"""
读写与导出。

支持的格式：
- JSON: 词、图、约化轨迹、簇图与实验报告（键排序、缩进 2、末尾换行）
- DOT: 网格图（pos 属性取自坐标）与簇图（每个簇列同 rank，B 型边为虚线）
- S-表达式: 团宽度表达式

同样的输入总是写出逐字节相同的文件。

Graph JSON 示例：
    {"vertices": [{"id": 0, "row": 1, "col": 1}, {"id": 1}], "edges": [[0, 1]]}
"""

from __future__ import annotations

import json
import threading
from collections.abc import Callable, Mapping
from pathlib import Path
from typing import Any

from cwlab.cliquewidth import (
    Create,
    DisjointUnion,
    Expression,
    Join,
    Relabel,
    parse_sexp,
    to_sexp,
)
from cwlab.clusters import BarPartition, ClusterGraph, SeparatorPartition
from cwlab.errors import ConfigError, GraphError, UnsupportedFormatError
from cwlab.gridgraphs import Graph
from cwlab.vertexminor import ReductionTrace, WordReduction
from cwlab.words import (
    ExplicitWord,
    PeriodicWord,
    SturmianWord,
    SubstitutionWord,
    WordSpec,
    delta_substitution,
    word_from_dict,
)

FORMATS = ("json", "dot", "sexp")

_WRITE_LOCK = threading.Lock()


def _write_text(path: Path, text: str) -> Path:
    """写入文本；并发运行的实验共用一把写锁。"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with _WRITE_LOCK:
        path.write_text(text, encoding="utf-8")
    return path


def to_json_text(data: Any) -> str:
    """稳定的 JSON 文本。"""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(data: Any, file_path: str | Path) -> Path:
    """写入 JSON，必要时创建父目录。"""
    return _write_text(Path(file_path), to_json_text(data))


def read_json(file_path: str | Path) -> Any:
    """
    读取 JSON 文件。

    Raises:
        FileNotFoundError: 文件不存在
        ConfigError: 内容不是合法 JSON
    """
    path = Path(file_path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} 不是合法的 JSON: {e}") from None


def read_word_spec(file_path: str | Path) -> WordSpec:
    """从 JSON 文件读取词描述。"""
    data = read_json(file_path)
    if not isinstance(data, Mapping):
        raise ConfigError(f"{file_path} 应该包含一个 JSON 对象")
    return word_from_dict(data)


_SHORTHANDS: dict[str, Callable[[str], WordSpec]] = {
    "psi": lambda arg: SubstitutionWord.psi(),
    "golden": lambda arg: SturmianWord.golden(),
    "periodic": PeriodicWord,
    "explicit": ExplicitWord,
    "delta": delta_substitution,
}


def load_word_spec(text: str) -> WordSpec:
    """
    解析命令行里的词描述。

    依次尝试：
    - 已存在的 JSON 文件路径
    - 以 ``{`` 开头的内联 JSON
    - 简写 ``psi``、``golden``、``periodic:23``、``explicit:0123``、``delta:110``

    Raises:
        ConfigError: 无法识别的描述
        InvalidWordError: 描述可以识别但词本身无效
    """
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        return read_word_spec(path)
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"内联词描述不是合法的 JSON: {e}") from None
        if not isinstance(data, Mapping):
            raise ConfigError("内联词描述应该是一个 JSON 对象")
        return word_from_dict(data)
    name, _, arg = text.partition(":")
    factory = _SHORTHANDS.get(name.strip().lower())
    if factory is None:
        raise ConfigError(
            f"无法识别的词描述 {text!r}；可用 JSON 文件、内联 JSON 或简写 "
            f"{', '.join(sorted(_SHORTHANDS))}"
        )
    return factory(arg.strip())


def graph_from_dict(data: Mapping[str, Any]) -> Graph:
    """
    按 Graph JSON 模式解析图。

    Raises:
        GraphError: 缺少字段、坐标不完整或边无效
    """
    try:
        vertices = data["vertices"]
        edges = data["edges"]
    except (KeyError, TypeError):
        raise GraphError("图 JSON 需要 vertices 和 edges 两个字段") from None
    ids = []
    coords = {}
    for entry in vertices:
        if not isinstance(entry, Mapping) or "id" not in entry:
            raise GraphError(f"顶点条目无效: {entry!r}")
        vid = int(entry["id"])
        ids.append(vid)
        has_row, has_col = "row" in entry, "col" in entry
        if has_row != has_col:
            raise GraphError(f"顶点 {vid} 的坐标不完整")
        if has_row:
            coords[vid] = (int(entry["row"]), int(entry["col"]))
    pairs = []
    for edge in edges:
        if len(edge) != 2:
            raise GraphError(f"边必须有两个端点: {edge!r}")
        pairs.append((int(edge[0]), int(edge[1])))
    return Graph.from_edges(ids, pairs, coords)


def read_graph(file_path: str | Path) -> Graph:
    data = read_json(file_path)
    if not isinstance(data, Mapping):
        raise GraphError(f"{file_path} 应该包含一个 JSON 对象")
    return graph_from_dict(data)


def graph_to_dot(g: Graph, name: str = "G") -> str:
    """
    无向图的 DOT 文本；有坐标的顶点带 ``pos="col,-row!"``，便于 neato 按网格排布。
    """
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in g.vertices:
        rc = g.coords.get(v)
        if rc is None:
            lines.append(f"  {v};")
        else:
            row, col = rc
            label = f"{v}\\n({row},{col})"
            lines.append(f'  {v} [label="{label}", pos="{col},{-row}!"];')
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cluster_graph_to_dot(
    b: ClusterGraph, separator: SeparatorPartition | None = None, name: str = "B"
) -> str:
    """
    簇图的 DOT 文本：每个簇列一个 ``rank=same`` 子图，A 型边实线并标注顶点，
    B 型边虚线。给定分隔划分时，分隔集中的簇画成方框。
    """
    marked = set(separator.separator) if separator else set()
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for index, column in enumerate(b.columns, 1):
        lines.append(f"  subgraph col{index} {{")
        lines.append("    rank=same;")
        for cid in column:
            cluster = b.clusters[cid]
            members = ",".join(str(v) for v in sorted(cluster.members))
            shape = ", shape=box" if cid in marked else ""
            lines.append(f'    u{cid} [label="{members}"{shape}];')
        lines.append("  }")
    for edge in b.type_a:
        lines.append(f'  u{edge.tail} -> u{edge.head} [label="{edge.vertex}"];')
    for tail, head in b.type_b:
        lines.append(f"  u{tail} -> u{head} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_EXPRESSION_TYPES = (Create, DisjointUnion, Join, Relabel)
_JSON_ONLY = (
    ReductionTrace,
    WordReduction,
    WordSpec,
    SeparatorPartition,
    BarPartition,
)


def render(artifact: Any, fmt: str) -> str:
    """
    把对象按格式转换为文本。

    Raises:
        UnsupportedFormatError: 该对象不支持该格式
    """
    if fmt not in FORMATS:
        raise UnsupportedFormatError(f"未知格式 {fmt!r}，可选: {', '.join(FORMATS)}")
    if isinstance(artifact, _EXPRESSION_TYPES):
        if fmt == "sexp":
            return to_sexp(artifact) + "\n"
        if fmt == "json":
            return to_json_text({"sexp": to_sexp(artifact)})
    elif isinstance(artifact, Graph):
        if fmt == "json":
            return to_json_text(artifact.to_dict())
        if fmt == "dot":
            return graph_to_dot(artifact)
    elif isinstance(artifact, ClusterGraph):
        if fmt == "json":
            return to_json_text(artifact.to_dict())
        if fmt == "dot":
            return cluster_graph_to_dot(artifact)
    elif isinstance(artifact, _JSON_ONLY):
        if fmt == "json":
            return to_json_text(artifact.to_dict())
    elif isinstance(artifact, Mapping):
        if fmt == "json":
            return to_json_text(artifact)
    raise UnsupportedFormatError(f"{type(artifact).__name__} 不支持导出为 {fmt}")


def export(artifact: Any, fmt: str, file_path: str | Path) -> Path:
    """
    导出到文件（必要时创建父目录）。

    示例:
        >>> export(Graph.from_edges([0, 1], [(0, 1)]), "json", "k2.json")
    """
    return _write_text(Path(file_path), render(artifact, fmt))


def read_expression(file_path: str | Path) -> Expression:
    """读取 S-表达式文件。"""
    return parse_sexp(Path(file_path).read_text(encoding="utf-8"))
