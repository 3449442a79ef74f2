"""
命令行接口。

子命令树与库模块一一对应：

    cwlab word     letters | factor | complexity | gaps | gamma-probe
    cwlab graph    build-h | build-w | embed-w | iso | embed | prime
    cwlab cwd      exact | construct | evaluate
    cwlab rwd      GRAPH
    cwlab reduce   zero | one | to23
    cwlab cluster  build | paths | partition | pipeline
    cwlab experiment run | list
    cwlab export   SOURCE

退出码：0 通过，1 断言失败（实验失败、不同构、找不到嵌入），2 用法或配置错误。
"""

from __future__ import annotations

import functools
import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, TypeVar

import click

from cwlab.cliquewidth import (
    evaluate,
    exact_cliquewidth,
    grid_expression,
    label_count,
    to_sexp,
)
from cwlab.clusters import (
    BAR_MODES,
    bar_partition,
    build_cluster_graph,
    max_disjoint_paths,
    x_interval_counts,
    xy_graph_partition,
)
from cwlab.errors import ConfigError, CwlabError
from cwlab.experiments import PRESETS, resolve_config, run_experiment
from cwlab.gridgraphs import (
    Graph,
    build_H,
    build_W,
    embed_W,
    find_induced_embedding,
    is_isomorphic,
    is_prime,
    verify_embedding,
)
from cwlab.io import (
    FORMATS,
    export,
    load_word_spec,
    read_expression,
    read_graph,
    read_json,
    render,
)
from cwlab.vertexminor import exact_rankwidth, reduce_to_23, remove_one, remove_zero
from cwlab.words import (
    ExplicitWord,
    WordSpec,
    factor_complexity,
    format_word,
    gamma_membership_probe,
    gap_report,
    recurrence_window_estimate,
)

F = TypeVar("F", bound=Callable[..., Any])

OUTPUT_FORMATS = ("text", *FORMATS)
_SUFFIX_FORMATS = {".json": "json", ".dot": "dot", ".gv": "dot", ".sexp": "sexp"}


def _fail_on_error(func: F) -> F:
    """把库错误转换为红色提示和退出码 2。"""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (CwlabError, FileNotFoundError) as e:
            click.echo(click.style(f"错误: {e}", fg="red"), err=True)
            raise SystemExit(2) from None

    return wrapper  # type: ignore[return-value]


def _word(ctx: click.Context, spec: str | None) -> WordSpec:
    text = spec or ctx.obj.get("spec")
    if not text:
        raise ConfigError("需要 --spec 指定一个词（文件、内联 JSON 或简写如 periodic:23）")
    return load_word_spec(text)


def _pair(text: str, name: str) -> tuple[int, int]:
    try:
        first, second = (int(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"{name} 应该形如 j,p，得到 {text!r}") from None
    return first, second


def _file_format(ctx: click.Context, path: Path) -> str:
    fmt = ctx.obj.get("format", "text")
    if fmt != "text":
        return str(fmt)
    return _SUFFIX_FORMATS.get(path.suffix.lower(), "json")


def _emit(
    ctx: click.Context, artifact: Any, summary: str, out: Path | None = None
) -> None:
    """按全局 --format 输出对象；给了 --out 时写入文件。"""
    if out is not None:
        path = export(artifact, _file_format(ctx, out), out)
        click.echo(summary)
        click.echo(f"已写入 {path}")
        return
    fmt = ctx.obj.get("format", "text")
    if fmt == "text":
        click.echo(summary)
    else:
        click.echo(render(artifact, fmt), nl=False)


spec_option = click.option(
    "--spec", default=None, help="词描述：JSON 文件、内联 JSON 或简写（psi、golden、periodic:23）"
)
out_option = click.option(
    "-o", "--out", type=click.Path(path_type=Path), default=None, help="输出文件"
)
graph_argument = click.argument(
    "graph_file", type=click.Path(exists=True, path_type=Path)
)


@click.group()
@click.version_option(version="0.1.0", prog_name="cwlab")
@click.option("-v", "--verbose", is_flag=True, help="输出调试日志")
@click.option("--spec", default=None, help="默认的词描述，子命令可覆盖")
@click.option("--out-dir", default=None, help="实验报告目录")
@click.option("--seed", type=int, default=None, help="随机种子")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(OUTPUT_FORMATS),
    default="text",
    show_default=True,
    help="输出格式",
)
@click.pass_context
def cli(
    ctx: click.Context,
    verbose: bool,
    spec: str | None,
    out_dir: str | None,
    seed: int | None,
    fmt: str,
) -> None:
    """cwlab - 由词定义的二部图类的团宽度实验台

    构造网格图、团宽度表达式与顶点子式约化，并运行可复现的实验。

    示例：

        cwlab word letters --spec psi --count 30

        cwlab graph build-h --spec periodic:23 --rows 3 --cols 4 -o h.json

        cwlab cwd exact h.json --witness h.sexp

        cwlab experiment run --preset sandwich-inequality --seed 1
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj.update(spec=spec, out_dir=out_dir, seed=seed, format=fmt)


# =============================================================================
# word
# =============================================================================


@cli.group()
def word() -> None:
    """无限词：字母、因子、复杂度、间隙与 Γ 探测。"""


@word.command()
@spec_option
@click.option("-n", "--count", type=int, default=40, show_default=True, help="字母个数")
@click.pass_context
@_fail_on_error
def letters(ctx: click.Context, spec: str | None, count: int) -> None:
    """输出词的前缀。"""
    w = _word(ctx, spec)
    prefix = format_word(w.prefix(count))
    _emit(ctx, {"word": w.to_dict(), "prefix": prefix}, f"{w.describe()}\n{prefix}")


@word.command()
@spec_option
@click.argument("j", type=int)
@click.argument("length", type=int)
@click.pass_context
@_fail_on_error
def factor(ctx: click.Context, spec: str | None, j: int, length: int) -> None:
    """输出因子 α_J … α_{J+LENGTH-1}。"""
    w = _word(ctx, spec)
    text = format_word(w.factor(j, length))
    _emit(ctx, {"j": j, "length": length, "factor": text}, text)


@word.command()
@spec_option
@click.option("--max-len", type=int, default=10, show_default=True, help="最大因子长度")
@click.option("--horizon", type=int, default=2000, show_default=True, help="检查的前缀长度")
@click.option("--plot", type=click.Path(path_type=Path), default=None, help="保存复杂度图")
@click.pass_context
@_fail_on_error
def complexity(
    ctx: click.Context, spec: str | None, max_len: int, horizon: int, plot: Path | None
) -> None:
    """因子复杂度 p(n)，n = 1..MAX_LEN。"""
    w = _word(ctx, spec)
    values = {n: factor_complexity(w, n, horizon) for n in range(1, max_len + 1)}
    summary = "\n".join(f"p({n}) = {value}" for n, value in values.items())
    _emit(ctx, {"horizon": horizon, "complexity": values}, summary)
    if plot is not None:
        from cwlab.visualization import plot_factor_complexity

        plot_factor_complexity(w, max_len, horizon, save_path=plot, show=False)
        click.echo(f"图已保存到 {plot}")


@word.command()
@spec_option
@click.argument("beta")
@click.option("--horizon", type=int, default=2000, show_default=True, help="检查的前缀长度")
@click.option("--plot", type=click.Path(path_type=Path), default=None, help="保存间隙权重图")
@click.pass_context
@_fail_on_error
def gaps(
    ctx: click.Context, spec: str | None, beta: str, horizon: int, plot: Path | None
) -> None:
    """β 的出现、β-间隙因子的最大权重与常返窗口估计 L(β)。"""
    w = _word(ctx, spec)
    report = gap_report(w, beta, horizon)
    window = recurrence_window_estimate(w, beta, horizon)
    data = {
        "beta": format_word(report.factor),
        "occurrences": len(report.occurrences),
        "max_gap_weight": report.max_gap_weight,
        "distinct_gaps": sorted({format_word(g) for g in report.gap_factors}),
        "recurrence_window": window,
    }
    summary = (
        f"β = {data['beta']}: 出现 {data['occurrences']} 次，"
        f"最大间隙权重 {report.max_gap_weight}，L(β) ≈ {window if window else '未知'}"
    )
    _emit(ctx, data, summary)
    if plot is not None:
        from cwlab.visualization import plot_gap_profile

        plot_gap_profile(w, beta, horizon, save_path=plot, show=False)
        click.echo(f"图已保存到 {plot}")


@word.command("gamma-probe")
@spec_option
@click.option("--max-len", type=int, default=3, show_default=True, help="最大因子长度")
@click.option("--horizon", type=int, default=2000, show_default=True, help="检查的前缀长度")
@click.pass_context
@_fail_on_error
def gamma_probe(
    ctx: click.Context, spec: str | None, max_len: int, horizon: int
) -> None:
    """有限视界上的 Γ 成员探测（证据，不是判定）。"""
    w = _word(ctx, spec)
    verdicts = gamma_membership_probe(w, max_len, horizon)
    rows = [
        {
            "factor": format_word(v.factor),
            "occurrences": v.occurrences,
            "max_gap_weight": v.max_gap_weight,
            "bound": v.bound,
            "trend": list(v.trend),
            "verdict": v.verdict,
        }
        for v in verdicts
    ]
    lines = [
        f"{r['factor']:>{max_len}}  {r['verdict']:<26} 最大权重 {r['max_gap_weight']}"
        + (f" / 上界 {r['bound']}" if r["bound"] is not None else "")
        for r in rows
    ]
    data = {"word": w.to_dict(), "horizon": horizon, "verdicts": rows}
    _emit(ctx, data, "\n".join(lines))


# =============================================================================
# graph
# =============================================================================


@cli.group()
def graph() -> None:
    """网格图 H、对角见证图 W、同构、嵌入与素性。"""


def _graph_summary(g: Graph) -> str:
    return f"{len(g)} 个顶点，{len(g.edges)} 条边"


@graph.command("build-h")
@spec_option
@click.option("--row", "i", type=int, default=1, show_default=True, help="起始行 i")
@click.option("--col", "j", type=int, default=1, show_default=True, help="起始列 j")
@click.option("--rows", "m", type=int, required=True, help="行数 m")
@click.option("--cols", "n", type=int, required=True, help="列数 n")
@click.option("--plot", type=click.Path(path_type=Path), default=None, help="保存网格图")
@out_option
@click.pass_context
@_fail_on_error
def build_h(
    ctx: click.Context,
    spec: str | None,
    i: int,
    j: int,
    m: int,
    n: int,
    plot: Path | None,
    out: Path | None,
) -> None:
    """构造网格图 H^α_{i,j}(m, n)。"""
    w = _word(ctx, spec)
    g = build_H(w, i, j, m, n)
    letters = format_word(w.factor(j, n - 1))
    _emit(ctx, g, f"H({m},{n}) 字母 {letters or '-'}: {_graph_summary(g)}", out)
    if plot is not None:
        from cwlab.visualization import plot_grid_graph

        plot_grid_graph(g, title=f"H({m},{n})", save_path=plot, show=False)
        click.echo(f"图已保存到 {plot}")


@graph.command("build-w")
@spec_option
@click.option("-n", "n", type=int, required=True, help="W_n 的阶")
@out_option
@click.pass_context
@_fail_on_error
def build_w(ctx: click.Context, spec: str | None, n: int, out: Path | None) -> None:
    """构造对角见证图 W^α_n（前 2n-2 个字母须属于 {2,3}）。"""
    g = build_W(_word(ctx, spec), n)
    _emit(ctx, g, f"W_{n}: {_graph_summary(g)}", out)


@graph.command("embed-w")
@spec_option
@click.option("-n", "n", type=int, required=True, help="W_n 的阶")
@click.pass_context
@_fail_on_error
def embed_w(ctx: click.Context, spec: str | None, n: int) -> None:
    """用坐标公式把 W^α_n 嵌入 H^α(2n-1, 2n-1) 并验证。"""
    w = _word(ctx, spec)
    emb = embed_W(w, n)
    host = build_H(w, 1, 1, 2 * n - 1, 2 * n - 1)
    ok = verify_embedding(build_W(w, n), host, emb)
    mapping = {str(k): v for k, v in sorted(emb.mapping.items())}
    _emit(ctx, {"n": n, "mapping": mapping, "verified": ok}, f"W_{n} 嵌入验证: {ok}")
    if not ok:
        raise SystemExit(1)


@graph.command()
@click.argument("first", type=click.Path(exists=True, path_type=Path))
@click.argument("second", type=click.Path(exists=True, path_type=Path))
@click.pass_context
@_fail_on_error
def iso(ctx: click.Context, first: Path, second: Path) -> None:
    """判断两个图是否同构；不同构时退出码为 1。"""
    same = is_isomorphic(read_graph(first), read_graph(second))
    _emit(ctx, {"isomorphic": same}, "同构" if same else "不同构")
    if not same:
        raise SystemExit(1)


@graph.command()
@click.argument("pattern", type=click.Path(exists=True, path_type=Path))
@click.argument("host", type=click.Path(exists=True, path_type=Path))
@click.pass_context
@_fail_on_error
def embed(ctx: click.Context, pattern: Path, host: Path) -> None:
    """寻找 PATTERN 到 HOST 的诱导子图嵌入；找不到时退出码为 1。"""
    emb = find_induced_embedding(read_graph(pattern), read_graph(host))
    if emb is None:
        _emit(ctx, {"embedding": None}, "没有诱导嵌入")
        raise SystemExit(1)
    mapping = {str(k): v for k, v in sorted(emb.mapping.items())}
    summary = ", ".join(f"{k}→{v}" for k, v in mapping.items())
    _emit(ctx, {"embedding": mapping}, summary)


@graph.command()
@graph_argument
@click.option("--cap", type=int, default=20, show_default=True, help="顶点数上限")
@click.pass_context
@_fail_on_error
def prime(ctx: click.Context, graph_file: Path, cap: int) -> None:
    """判断图是否为素图；否则给出一个非平凡模。"""
    result = is_prime(read_graph(graph_file), cap=cap)
    witness = sorted(result.witness) if result.witness is not None else None
    summary = "素图" if result.prime else f"不是素图，非平凡模 {witness}"
    _emit(ctx, {"prime": result.prime, "module": witness}, summary)


# =============================================================================
# cwd / rwd
# =============================================================================


@cli.group()
def cwd() -> None:
    """团宽度：精确求解、构造与表达式求值。"""


@cwd.command()
@graph_argument
@click.option("--kmax", type=int, default=6, show_default=True, help="最多尝试的标签数")
@click.option(
    "--witness", type=click.Path(path_type=Path), default=None, help="见证表达式输出"
)
@click.pass_context
@_fail_on_error
def exact(
    ctx: click.Context, graph_file: Path, kmax: int, witness: Path | None
) -> None:
    """精确团宽度（子集动态规划，最多 10 个顶点）。"""
    result = exact_cliquewidth(read_graph(graph_file), k_max=kmax)
    if result.width is None:
        summary = f"团宽度 > {kmax}"
    else:
        summary = f"团宽度 = {result.width}"
    data = {
        "width": result.width,
        "k_max": kmax,
        "witness": to_sexp(result.witness) if result.witness is not None else None,
    }
    _emit(ctx, data, summary)
    if witness is not None and result.witness is not None:
        export(result.witness, "sexp", witness)
        click.echo(f"见证已写入 {witness}")


@cwd.command()
@spec_option
@click.option("--row", "i", type=int, default=1, show_default=True, help="起始行 i")
@click.option("--col", "j", type=int, default=1, show_default=True, help="起始列 j")
@click.option("--rows", "m", type=int, required=True, help="行数 m")
@click.option("--cols", "n", type=int, required=True, help="列数 n")
@click.option("--witness", type=click.Path(path_type=Path), default=None, help="表达式输出")
@click.pass_context
@_fail_on_error
def construct(
    ctx: click.Context,
    spec: str | None,
    i: int,
    j: int,
    m: int,
    n: int,
    witness: Path | None,
) -> None:
    """为 H^α_{i,j}(m, n) 构造不超过 6t+3 个标签的表达式。"""
    w = _word(ctx, spec)
    expr = grid_expression(w, i, j, m, n)
    t = sum(1 for letter in w.factor(j, n - 1) if letter)
    labels = label_count(expr)
    summary = f"标签数 {labels}（上界 6t+3 = {6 * t + 3}，t = {t}）"
    _emit(ctx, expr, summary)
    if witness is not None:
        export(expr, "sexp", witness)
        click.echo(f"表达式已写入 {witness}")


@cwd.command("evaluate")
@click.argument("expression_file", type=click.Path(exists=True, path_type=Path))
@out_option
@click.pass_context
@_fail_on_error
def evaluate_command(
    ctx: click.Context, expression_file: Path, out: Path | None
) -> None:
    """对 S-表达式求值，得到它定义的图。"""
    expr = read_expression(expression_file)
    g = evaluate(expr).graph
    _emit(ctx, g, f"{label_count(expr)} 个标签，{_graph_summary(g)}", out)


@cli.command()
@graph_argument
@click.option("--cap", type=int, default=8, show_default=True, help="顶点数上限")
@click.pass_context
@_fail_on_error
def rwd(ctx: click.Context, graph_file: Path, cap: int) -> None:
    """精确秩宽度与一个最优分解。"""
    result = exact_rankwidth(read_graph(graph_file), cap=cap)
    data = {"width": result.width, "decomposition": result.decomposition}
    _emit(ctx, data, f"秩宽度 = {result.width}")


# =============================================================================
# reduce
# =============================================================================


@cli.group()
def reduce() -> None:
    """顶点子式约化：0 消去、1 消去与整段约化到 {2,3}。"""


def _rule_window(
    ctx: click.Context,
    spec: str | None,
    rule: str | None,
    window: str | None,
    size: int,
) -> tuple[WordSpec, int, str]:
    if rule is not None:
        return ExplicitWord(rule), 1, rule
    if window is None:
        raise ConfigError("需要 --rule 或 --window j,p")
    w = _word(ctx, spec)
    j, p = _pair(window, "--window")
    if p != size:
        raise ConfigError(f"该规则作用于长度为 {size} 的因子，得到 p = {p}")
    return w, j, format_word(w.factor(j, size))


def _emit_trace(
    ctx: click.Context, artifact: Any, summary: str, trace: Path | None
) -> None:
    _emit(ctx, artifact, summary)
    if trace is not None:
        export(artifact, "json", trace)
        click.echo(f"轨迹已写入 {trace}")


trace_option = click.option(
    "--trace", type=click.Path(path_type=Path), default=None, help="约化轨迹输出（JSON）"
)


@reduce.command()
@spec_option
@click.option("--rule", default=None, help="直接指定规则，如 02")
@click.option("--window", default=None, help="因子位置 j,2")
@click.option("--rows", "m", type=int, default=8, show_default=True, help="行数")
@trace_option
@click.pass_context
@_fail_on_error
def zero(
    ctx: click.Context,
    spec: str | None,
    rule: str | None,
    window: str | None,
    m: int,
    trace: Path | None,
) -> None:
    """在三列窗口上应用 0 消去规则。"""
    w, j, rule = _rule_window(ctx, spec, rule, window, 2)
    result = remove_zero(build_H(w, 1, j, m, 3), j + 1, rule)
    summary = f"规则 {rule}: {len(result)} 步，{_graph_summary(result.final)}"
    _emit_trace(ctx, result, summary, trace)


@reduce.command()
@spec_option
@click.option("--rule", default=None, help="直接指定规则，如 213")
@click.option("--window", default=None, help="因子位置 j,3")
@click.option("--rows", "m", type=int, default=12, show_default=True, help="行数")
@trace_option
@click.pass_context
@_fail_on_error
def one(
    ctx: click.Context,
    spec: str | None,
    rule: str | None,
    window: str | None,
    m: int,
    trace: Path | None,
) -> None:
    """在四列窗口上应用 1 消去规则。"""
    w, j, rule = _rule_window(ctx, spec, rule, window, 3)
    result = remove_one(build_H(w, 1, j, m, 4), j, rule)
    summary = f"规则 {rule}: {len(result)} 步，{_graph_summary(result.final)}"
    _emit_trace(ctx, result, summary, trace)


@reduce.command()
@spec_option
@click.option("--window", required=True, help="因子位置 j,p")
@trace_option
@click.pass_context
@_fail_on_error
def to23(ctx: click.Context, spec: str | None, window: str, trace: Path | None) -> None:
    """把因子的网格约化为只含字母 {2,3} 的网格。"""
    w = _word(ctx, spec)
    j, p = _pair(window, "--window")
    result = reduce_to_23(w, j, p)
    summary = (
        f"{format_word(result.source)} → {format_word(result.gamma)}，"
        f"行 {result.rows} → {result.final_rows}（q = {result.q}），"
        f"规则 {', '.join(result.rules) or '无'}"
    )
    _emit_trace(ctx, result, summary, trace)


# =============================================================================
# cluster
# =============================================================================


@cli.group()
def cluster() -> None:
    """簇图、不相交路径、X/Y 划分与条带流水线。"""


def _cluster_input(
    ctx: click.Context,
    graph_file: Path,
    spec: str | None,
    strict: bool,
    cols: str | None = None,
) -> tuple[Graph, Any]:
    g = read_graph(graph_file)
    w = _word(ctx, spec) if (spec or ctx.obj.get("spec")) else None
    window = _pair(cols, "--cols") if cols else None
    return g, build_cluster_graph(g, w, strict=strict, cols=window)


strict_option = click.option(
    "--strict/--non-strict", default=True, show_default=True, help="非素输入时是否报错"
)


@cluster.command()
@graph_argument
@spec_option
@strict_option
@click.option("--cols", default=None, help="只用闭区间内的列，形如 FIRST,LAST")
@out_option
@click.pass_context
@_fail_on_error
def build(
    ctx: click.Context,
    graph_file: Path,
    spec: str | None,
    strict: bool,
    cols: str | None,
    out: Path | None,
) -> None:
    """构造簇图 B*。"""
    _, b = _cluster_input(ctx, graph_file, spec, strict, cols)
    sizes = " ".join(str(size) for size in b.column_sizes())
    _emit(ctx, b, f"{len(b.clusters)} 个簇，各列大小 {sizes}", out)


@cluster.command()
@graph_argument
@spec_option
@strict_option
@click.pass_context
@_fail_on_error
def paths(ctx: click.Context, graph_file: Path, spec: str | None, strict: bool) -> None:
    """最大不相交有向路径数 s 与最小分隔集。"""
    _, b = _cluster_input(ctx, graph_file, spec, strict)
    sp = max_disjoint_paths(b)
    _emit(ctx, sp, f"s = {sp.s}，分隔集 {list(sp.separator)}")


@cluster.command()
@graph_argument
@spec_option
@strict_option
@click.option("--plot", type=click.Path(path_type=Path), default=None, help="保存 X/Y 图")
@click.pass_context
@_fail_on_error
def partition(
    ctx: click.Context,
    graph_file: Path,
    spec: str | None,
    strict: bool,
    plot: Path | None,
) -> None:
    """由分隔集导出的 X/Y 划分及其 μ 值。"""
    g, b = _cluster_input(ctx, graph_file, spec, strict)
    sp = max_disjoint_paths(b)
    xy = xy_graph_partition(sp, b, g)
    intervals = x_interval_counts(xy, g)
    data = {
        "s": sp.s,
        "x": sorted(xy.x),
        "y": sorted(xy.y),
        "mu_x": xy.mu_x,
        "mu_y": xy.mu_y,
        "x_intervals": {str(col): count for col, count in sorted(intervals.items())},
    }
    summary = (
        f"s = {sp.s}，|X| = {len(xy.x)}，|Y| = {len(xy.y)}，"
        f"μ(X) = {xy.mu_x}，μ(Y) = {xy.mu_y}"
    )
    _emit(ctx, data, summary)
    if plot is not None:
        from cwlab.visualization import plot_grid_graph

        plot_grid_graph(g, highlight=xy.x, title="X/Y 划分", save_path=plot, show=False)
        click.echo(f"图已保存到 {plot}")


@cluster.command()
@graph_argument
@spec_option
@click.option("--beta-start", type=int, default=1, show_default=True, help="β 在词中的起点")
@click.option("-k", "k", type=int, default=2, show_default=True, help="禁止窗口大小")
@click.option("--window-len", type=int, default=None, help="条带宽度；默认 L(β)+1")
@click.option(
    "--mode", type=click.Choice(BAR_MODES), default=BAR_MODES[0], show_default=True
)
@click.option("--absorb", is_flag=True, help="先吸收边界顶点")
@click.option(
    "--horizon", type=int, default=2000, show_default=True, help="估计 L(β) 的视界"
)
@click.option(
    "--witness", type=click.Path(path_type=Path), default=None, help="组合表达式输出"
)
@click.pass_context
@_fail_on_error
def pipeline(
    ctx: click.Context,
    graph_file: Path,
    spec: str | None,
    beta_start: int,
    k: int,
    window_len: int | None,
    mode: str,
    absorb: bool,
    horizon: int,
    witness: Path | None,
) -> None:
    """条带划分、逐部分表达式与组合后的团宽度上界。"""
    g = read_graph(graph_file)
    w = _word(ctx, spec)
    if window_len is None:
        beta = w.factor(beta_start, k - 1)
        estimate = recurrence_window_estimate(w, beta, horizon)
        if estimate is None:
            raise ConfigError(f"β = {format_word(beta)} 在视界内不常返，请给出 --window-len")
        window_len = max(estimate + 1, k)
    result = bar_partition(g, w, beta_start, k, window_len, mode=mode, absorb=absorb)
    summary = (
        f"{len(result.parts)} 个部分，l = {result.l}，标签数 {result.labels}，"
        f"上界 {result.bound}（{'满足' if result.within_bound else '超出'}）"
    )
    _emit(ctx, result, summary)
    if witness is not None and result.expression is not None:
        export(result.expression, "sexp", witness)
        click.echo(f"表达式已写入 {witness}")


# =============================================================================
# experiment / export
# =============================================================================


@cli.group()
def experiment() -> None:
    """可复现的实验预设。"""


@experiment.command("list")
def list_presets() -> None:
    """列出所有预设。"""
    for name in PRESETS:
        click.echo(name)


@experiment.command("run")
@click.option("--preset", "presets", multiple=True, help="预设名，可重复；all 表示全部")
@click.option("--config", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--samples", type=int, default=None, help="随机样本数")
@click.option("--max-vertices", type=int, default=None, help="最大顶点数")
@click.option("-k", "k", type=int, default=None, help="禁止窗口大小")
@click.option("--rows", type=int, default=None, help="网格行数上限")
@click.option("--kmax", type=int, default=None, help="精确团宽度的最大标签数")
@click.option("--horizon", type=int, default=None, help="词的诊断视界")
@click.option("--jobs", type=int, default=1, show_default=True, help="并发运行的预设数")
@click.pass_context
@_fail_on_error
def run(
    ctx: click.Context,
    presets: tuple[str, ...],
    config: Path | None,
    samples: int | None,
    max_vertices: int | None,
    k: int | None,
    rows: int | None,
    kmax: int | None,
    horizon: int | None,
    jobs: int,
) -> None:
    """运行预设并写出 JSON 报告；有断言失败时退出码为 1。

    配置优先级：--config 文件 > 命令行参数 > 默认值。
    """
    file_values = read_json(config) if config is not None else None
    if file_values is not None and not isinstance(file_values, dict):
        raise ConfigError(f"{config} 应该包含一个 JSON 对象")
    spec = ctx.obj.get("spec")
    flags: dict[str, Any] = {
        "seed": ctx.obj.get("seed"),
        "out_dir": ctx.obj.get("out_dir"),
        "word": load_word_spec(spec).to_dict() if spec else None,
        "samples": samples,
        "max_vertices": max_vertices,
        "k": k,
        "rows": rows,
        "kmax": kmax,
        "horizon": horizon,
    }
    names: list[str | None] = list(presets) or [None]
    if "all" in names:
        names = list(PRESETS)
    configs = [resolve_config({**flags, "preset": name}, file_values) for name in names]

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        reports = list(pool.map(run_experiment, configs))

    for report in reports:
        color = "green" if report.passed else "red"
        click.echo(click.style(report.summary(), fg=color))
        for failure in report.failures[:10]:
            click.echo(f"  - {failure}")
        path = Path(report.config["out_dir"]) / f"{report.preset}.json"
        click.echo(f"  报告: {path}")
    if not all(report.passed for report in reports):
        raise SystemExit(1)


@cli.command("export")
@click.argument("source", type=click.Path(exists=True, path_type=Path))
@click.option(
    "--as",
    "kind",
    type=click.Choice(["graph", "expression", "word", "cluster-graph"]),
    default=None,
    help="输入的类型；默认按内容推断",
)
@click.option("--to", "fmt", type=click.Choice(FORMATS), default=None, help="目标格式")
@click.option(
    "-o", "--out", type=click.Path(path_type=Path), required=True, help="输出文件"
)
@click.pass_context
@_fail_on_error
def export_command(
    ctx: click.Context, source: Path, kind: str | None, fmt: str | None, out: Path
) -> None:
    """把词、图、表达式或簇图导出为 json / dot / sexp。"""
    if kind is None:
        if source.suffix == ".sexp":
            kind = "expression"
        else:
            data = read_json(source)
            kind = "word" if isinstance(data, dict) and "variant" in data else "graph"
    artifact: Any
    if kind == "expression":
        artifact = read_expression(source)
    elif kind == "word":
        artifact = load_word_spec(str(source))
    elif kind == "graph":
        artifact = read_graph(source)
    else:
        artifact = build_cluster_graph(read_graph(source), strict=False)
    path = export(artifact, fmt or _file_format(ctx, out), out)
    click.echo(f"已写入 {path}")


def main() -> None:
    """程序入口点。"""
    cli()


if __name__ == "__main__":
    main()
