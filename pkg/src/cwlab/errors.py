"""
cwlab 的异常层次。

所有异常都继承自 CwlabError，而 CwlabError 继承自 ValueError，
因此调用方既可以精确捕获某一类错误，也可以统一 ``except ValueError``。

层次结构：
    CwlabError
    ├── InvalidWordError
    │   ├── WordIndexError
    │   ├── NonProlongableError
    │   └── GammaProbeError
    ├── GraphError
    │   └── UnknownVertexError
    ├── SizeCapError
    ├── ExpressionError
    │   └── PartitionBoundError
    ├── ReductionError
    ├── ClusterError
    │   └── ForbiddenPatternError
    ├── ConfigError
    └── UnsupportedFormatError
"""

from __future__ import annotations


class CwlabError(ValueError):
    """cwlab 所有异常的基类。"""

    pass


class InvalidWordError(CwlabError):
    """词描述无效：非法字母、空周期、错误的斜率等。"""

    pass


class WordIndexError(InvalidWordError):
    """下标小于 1，或超出显式前缀的长度。"""

    pass


class NonProlongableError(InvalidWordError):
    """替换规则不能在种子字母上延拓为不动点。"""

    pass


class GammaProbeError(InvalidWordError):
    """Γ 探测窗口全为 0，按定义被排除。"""

    pass


class GraphError(CwlabError):
    """图结构无效：自环、不对称邻接、坐标冲突等。"""

    pass


class UnknownVertexError(GraphError):
    """引用了图中不存在的顶点。"""

    pass


class SizeCapError(CwlabError):
    """
    精确求解器的输入超过了规模上限。

    Attributes:
        module: 触发上限的模块名
        size: 实际顶点数
        cap: 配置的上限
    """

    def __init__(self, module: str, size: int, cap: int) -> None:
        self.module = module
        self.size = size
        self.cap = cap
        super().__init__(f"[{module}] 图有 {size} 个顶点，超过上限 {cap}")


class ExpressionError(CwlabError):
    """团宽度表达式无效，或与期望的图不一致。"""

    pass


class PartitionBoundError(ExpressionError):
    """
    划分组合时 μ 超过了给定的 l。

    Attributes:
        index: 出错的部分编号（从 1 开始）
    """

    def __init__(self, index: int, message: str) -> None:
        self.index = index
        super().__init__(message)


class ReductionError(CwlabError):
    """
    约化规则的前提不成立（因子不匹配、行数不足等）。

    Attributes:
        rule: 出错的规则名，未知时为空字符串
    """

    def __init__(self, message: str, rule: str = "") -> None:
        self.rule = rule
        super().__init__(message)


class ClusterError(CwlabError):
    """簇图无法良好定义（通常意味着输入不是素图）。"""

    pass


class ForbiddenPatternError(ClusterError):
    """输入图包含被禁止的网格窗口。"""

    pass


class ConfigError(CwlabError):
    """实验配置或命令行参数无效。"""

    pass


class UnsupportedFormatError(CwlabError):
    """导出格式不支持该类对象。"""

    pass
