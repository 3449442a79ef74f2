"""
字母表 {0,1,2,3} 上有限描述的无限词。

每个 WordSpec 描述一个无限词 α = α_1 α_2 α_3 …（下标从 1 开始），
四种变体：
- PeriodicWord: 周期词，α_j = period[(j-1) mod p]
- SturmianWord: 旋转序列，用精确有理数（连分数渐近分数）计算
- SubstitutionWord: 可延拓替换的不动点，例如 ψ: 1→1010, 0→0
- ExplicitWord: 显式前缀，越界访问报错

在这些词之上提供因子、权重、间隙因子、复杂度和 Γ 探测等有限视界诊断。

设计理念：
- 所有值在构造后不可变，可以在线程间共享
- 替换词的前缀缓存由锁保护，结果与调用交错无关
- 斜率和截距使用 Fraction，letter_at 的结果逐位可复现
"""

from __future__ import annotations

import json
import logging
import threading
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from cwlab.errors import (
    GammaProbeError,
    InvalidWordError,
    NonProlongableError,
    WordIndexError,
)

logger = logging.getLogger(__name__)

# 字母表
LETTERS = frozenset({0, 1, 2, 3})

Letter = int
FiniteWord = tuple[int, ...]

# Γ 探测的结论
CONSISTENT = "consistent-with-gamma"
UNBOUNDED_TREND = "unbounded-trend"
BOUND_VIOLATED = "bound-violated"
TOO_FEW_OCCURRENCES = "insufficient-occurrences"


def check_letters(letters: Iterable[int]) -> FiniteWord:
    """
    校验并返回有限词。

    Raises:
        InvalidWordError: 如果某个字母不在 {0,1,2,3} 中
    """
    word = tuple(letters)
    for letter in word:
        if isinstance(letter, bool) or letter not in LETTERS:
            raise InvalidWordError(f"非法字母: {letter!r}。有效字母: 0, 1, 2, 3")
    return word


def parse_word(text: str | Iterable[int]) -> FiniteWord:
    """
    把 "0102" 这样的字符串（或整数序列）解析为有限词。

    示例:
        >>> parse_word("1010")
        (1, 0, 1, 0)
    """
    if isinstance(text, str):
        stripped = text.strip()
        if any(ch not in "0123" for ch in stripped):
            raise InvalidWordError(f"词 {text!r} 只能包含字符 0-3")
        return tuple(int(ch) for ch in stripped)
    return check_letters(text)


def format_word(word: Iterable[int]) -> str:
    """把有限词格式化为数字串。"""
    return "".join(str(letter) for letter in word)


def weight(word: Iterable[int]) -> int:
    """
    词的权重：非 0 字母的个数。

    示例:
        >>> weight((1, 0, 1, 0, 0))
        2
    """
    return sum(1 for letter in word if letter != 0)


def reverse_word(word: Sequence[int]) -> FiniteWord:
    """反转有限词。"""
    return tuple(reversed(word))


def longest_zero_run(word: Iterable[int]) -> int:
    """词中最长连续 0 段的长度。"""
    best = run = 0
    for letter in word:
        run = run + 1 if letter == 0 else 0
        best = max(best, run)
    return best


# =============================================================================
# 词的描述
# =============================================================================


class WordSpec(ABC):
    """
    有限描述的无限词的抽象基类。

    子类只需实现 variant、_letter 和 to_dict；
    factor、prefix 等通用操作在基类中完成。
    """

    @property
    @abstractmethod
    def variant(self) -> str:
        """变体名：periodic / sturmian / substitution / explicit。"""
        ...

    @abstractmethod
    def _letter(self, j: int) -> int:
        """第 j 个字母（j ≥ 1 已由调用方保证）。"""
        ...

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        """JSON 可序列化的描述。"""
        ...

    def letter_at(self, j: int) -> int:
        """
        第 j 个字母 α_j（下标从 1 开始）。

        Raises:
            WordIndexError: 如果 j < 1，或超出显式前缀
        """
        if j < 1:
            raise WordIndexError(f"下标必须 ≥ 1，得到 {j}")
        return self._letter(j)

    def factor(self, j: int, length: int) -> FiniteWord:
        """字母 α_j … α_{j+length-1}。"""
        if length < 0:
            raise InvalidWordError(f"因子长度不能为负: {length}")
        if length == 0:
            return ()
        if j < 1:
            raise WordIndexError(f"下标必须 ≥ 1，得到 {j}")
        return self._factor(j, length)

    def _factor(self, j: int, length: int) -> FiniteWord:
        return tuple(self._letter(i) for i in range(j, j + length))

    def prefix(self, n: int) -> FiniteWord:
        """长度为 n 的前缀。"""
        return self.factor(1, n)

    def window_string(self, horizon: int) -> str:
        """前 horizon 个字母组成的数字串，便于做子串扫描。"""
        return format_word(self.prefix(horizon))

    def describe(self) -> str:
        """一行人类可读的描述。"""
        return f"{self.variant}: {format_word(self.prefix(16))}…"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WordSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(json.dumps(self.to_dict(), sort_keys=True))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_dict()!r})"


class PeriodicWord(WordSpec):
    """
    周期词 period period period …

    示例:
        >>> PeriodicWord("23").letter_at(5)
        2
    """

    def __init__(self, period: str | Iterable[int]) -> None:
        letters = parse_word(period)
        if not letters:
            raise InvalidWordError("周期不能为空")
        self._period = letters

    @property
    def variant(self) -> str:
        return "periodic"

    @property
    def period(self) -> FiniteWord:
        return self._period

    def _letter(self, j: int) -> int:
        return self._period[(j - 1) % len(self._period)]

    def _factor(self, j: int, length: int) -> FiniteWord:
        p = len(self._period)
        start = (j - 1) % p
        repeats = (start + length) // p + 1
        return (self._period * repeats)[start : start + length]

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "period": list(self._period)}


class SturmianWord(WordSpec):
    """
    旋转序列（Sturmian 词的有理逼近）。

    第 j 位取 ⌊(j+1)·s + ρ⌋ − ⌊j·s + ρ⌋，再经 letters 映射到字母表。
    斜率 s 取连分数的渐近分数：只要视界远小于分母，
    前缀就与无理斜率的 Sturmian 词一致，复杂度为 n+1。
    斜率与截距用 Fraction 精确计算，letter_at 在任何平台上逐位相同。
    """

    def __init__(
        self,
        slope: Fraction | int | str,
        intercept: Fraction | int | str = 0,
        letters: Sequence[int] = (0, 1),
    ) -> None:
        s = Fraction(slope)
        rho = Fraction(intercept)
        if not 0 < s < 1:
            raise InvalidWordError(f"斜率必须在 (0, 1) 内，得到 {s}")
        if not 0 <= rho < 1:
            raise InvalidWordError(f"截距必须在 [0, 1) 内，得到 {rho}")
        mapped = check_letters(letters)
        if len(mapped) != 2 or mapped[0] == mapped[1]:
            raise InvalidWordError("letters 必须是两个不同的字母")
        self._slope = s
        self._intercept = rho
        self._letters = mapped

    @classmethod
    def from_continued_fraction(
        cls,
        partial_quotients: Sequence[int],
        intercept: Fraction | int | str = 0,
        letters: Sequence[int] = (0, 1),
    ) -> SturmianWord:
        """
        由部分商 [a0; a1, a2, …] 的渐近分数构造。

        示例:
            >>> SturmianWord.from_continued_fraction([0, 2, 1]).slope
            Fraction(1, 3)
        """
        if not partial_quotients:
            raise InvalidWordError("部分商序列不能为空")
        if any(a < 1 for a in partial_quotients[1:]):
            raise InvalidWordError("除 a0 外部分商必须为正整数")
        value = Fraction(partial_quotients[-1])
        for a in reversed(partial_quotients[:-1]):
            value = a + 1 / value
        return cls(value, intercept, letters)

    @classmethod
    def golden(
        cls, depth: int = 30, letters: Sequence[int] = (0, 1)
    ) -> SturmianWord:
        """
        黄金分割词：斜率 [0; 1, 1, …] ≈ 0.618。

        1 的密度约 0.618，因此 0 互不相邻，1 的连续段长度为 1 或 2。
        depth=30 时分母约 1.3×10^6，对常用视界等同于无理斜率。
        """
        return cls.from_continued_fraction([0] + [1] * depth, 0, letters)

    @property
    def variant(self) -> str:
        return "sturmian"

    @property
    def slope(self) -> Fraction:
        return self._slope

    @property
    def intercept(self) -> Fraction:
        return self._intercept

    def _bit(self, j: int) -> int:
        p, q = self._slope.numerator, self._slope.denominator
        a, b = self._intercept.numerator, self._intercept.denominator
        den = q * b

        def floor_at(n: int) -> int:
            return (n * p * b + a * q) // den

        return floor_at(j + 1) - floor_at(j)

    def _letter(self, j: int) -> int:
        return self._letters[self._bit(j)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "slope": [self._slope.numerator, self._slope.denominator],
            "intercept": [self._intercept.numerator, self._intercept.denominator],
            "letters": list(self._letters),
        }


class SubstitutionWord(WordSpec):
    """
    可延拓替换 σ 在种子字母上的不动点。

    可延拓：σ(seed) 以 seed 开头且长度 ≥ 2，于是
    σ^n(seed) 是 σ^{n+1}(seed) 的前缀，极限即为不动点。

    示例:
        >>> psi = SubstitutionWord.psi()
        >>> psi.prefix(10)
        (1, 0, 1, 0, 0, 1, 0, 1, 0, 0)
    """

    def __init__(self, rules: Mapping[int, Iterable[int]], seed: int) -> None:
        normalized: dict[int, FiniteWord] = {}
        for letter, image in rules.items():
            key = check_letters([int(letter)])[0]
            word = check_letters(image)
            if not word:
                raise InvalidWordError(f"字母 {key} 的像不能为空")
            normalized[key] = word
        if seed not in normalized:
            raise NonProlongableError(f"种子字母 {seed} 没有替换规则")
        image = normalized[seed]
        if image[0] != seed or len(image) < 2:
            raise NonProlongableError(
                f"σ({seed}) = {format_word(image)} 不以 {seed} 开头或长度不足 2，"
                "无法延拓为不动点"
            )
        self._check_reachable(normalized, seed)
        self._rules = normalized
        self._seed = seed
        self._cache: FiniteWord = (seed,)
        self._lock = threading.Lock()

    @staticmethod
    def _check_reachable(rules: Mapping[int, FiniteWord], seed: int) -> None:
        seen = {seed}
        frontier = [seed]
        while frontier:
            letter = frontier.pop()
            if letter not in rules:
                raise InvalidWordError(f"从种子可达的字母 {letter} 没有替换规则")
            for nxt in rules[letter]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)

    @classmethod
    def psi(cls) -> SubstitutionWord:
        """ψ：σ(1) = 1010，σ(0) = 0，种子 1。"""
        return cls({0: (0,), 1: (1, 0, 1, 0)}, 1)

    @classmethod
    def delta(cls, delta: str | Iterable[int]) -> SubstitutionWord:
        """
        δ 替换：0 → 0，1 → δ，种子 1。

        δ 必须是以 1 开头、以 0 结尾、权重至少为 2 的二元词；
        ψ 对应 δ = 1010。
        """
        word = parse_word(delta)
        if any(letter not in (0, 1) for letter in word):
            raise InvalidWordError("δ 必须是二元词")
        if not word or word[0] != 1 or word[-1] != 0 or weight(word) < 2:
            raise InvalidWordError(
                f"δ = {format_word(word)} 必须以 1 开头、以 0 结尾且权重 ≥ 2"
            )
        return cls({0: (0,), 1: word}, 1)

    @property
    def variant(self) -> str:
        return "substitution"

    @property
    def rules(self) -> dict[int, FiniteWord]:
        return dict(self._rules)

    @property
    def seed(self) -> int:
        return self._seed

    def _ensure(self, n: int) -> FiniteWord:
        with self._lock:
            current = self._cache
            while len(current) < n:
                current = _apply_rules(self._rules, current)
            self._cache = current
            return current

    def _letter(self, j: int) -> int:
        return self._ensure(j)[j - 1]

    def _factor(self, j: int, length: int) -> FiniteWord:
        return self._ensure(j + length - 1)[j - 1 : j - 1 + length]

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "rules": {str(k): list(v) for k, v in sorted(self._rules.items())},
            "seed": self._seed,
        }


class ExplicitWord(WordSpec):
    """只知道有限前缀的词；越过前缀访问会报错。"""

    def __init__(self, prefix: str | Iterable[int]) -> None:
        self._prefix = parse_word(prefix)

    @property
    def variant(self) -> str:
        return "explicit"

    @property
    def length(self) -> int:
        return len(self._prefix)

    def _letter(self, j: int) -> int:
        if j > len(self._prefix):
            raise WordIndexError(
                f"下标 {j} 超出显式前缀长度 {len(self._prefix)}"
            )
        return self._prefix[j - 1]

    def _factor(self, j: int, length: int) -> FiniteWord:
        end = j + length - 1
        if end > len(self._prefix):
            raise WordIndexError(
                f"因子 [{j}, {end}] 超出显式前缀长度 {len(self._prefix)}"
            )
        return self._prefix[j - 1 : end]

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "prefix": format_word(self._prefix)}


def _apply_rules(rules: Mapping[int, FiniteWord], word: Iterable[int]) -> FiniteWord:
    out: list[int] = []
    for letter in word:
        out.extend(rules[letter])
    return tuple(out)


def delta_substitution(delta: str | Iterable[int]) -> SubstitutionWord:
    """δ 替换 0 → 0, 1 → δ 的不动点，见 SubstitutionWord.delta。"""
    return SubstitutionWord.delta(delta)


def substitution_iterate(
    rules: Mapping[int, Iterable[int]], seed: int, n: int
) -> FiniteWord:
    """
    σ^n(seed)，不要求可延拓。

    示例:
        >>> substitution_iterate({0: [0], 1: [1, 0, 1, 0]}, 1, 2)
        (1, 0, 1, 0, 0, 1, 0, 1, 0, 0)
    """
    if n < 0:
        raise InvalidWordError(f"迭代次数不能为负: {n}")
    normalized = {int(k): check_letters(v) for k, v in rules.items()}
    word: FiniteWord = check_letters([seed])
    for _ in range(n):
        missing = set(word) - set(normalized)
        if missing:
            raise InvalidWordError(f"字母 {sorted(missing)} 没有替换规则")
        word = _apply_rules(normalized, word)
    return word


def complement_word(w: WordSpec, length: int) -> ExplicitWord:
    """
    交换 0 和 1 后的前 length 个字母（2、3 保持不变）。

    ψ 的补词是 Γ 之外的典型例子：它的 0 之间夹着越来越长的 1 段。
    """
    swap = {0: 1, 1: 0, 2: 2, 3: 3}
    return ExplicitWord([swap[letter] for letter in w.prefix(length)])


def word_from_dict(data: Mapping[str, Any]) -> WordSpec:
    """
    从 JSON 描述构造 WordSpec。

    模式:
        {"variant": "periodic", "period": [0, 1]} 或 "01"
        {"variant": "sturmian", "slope": [p, q], "intercept": [a, b],
         "letters": [0, 1]}  也可用 "continued_fraction": [0, 1, 1, …]
        {"variant": "substitution", "rules": {"0": [0], "1": [1, 0, 1, 0]},
         "seed": 1}
        {"variant": "explicit", "prefix": "0102"}

    Raises:
        InvalidWordError: 变体未知或字段缺失
    """
    variant = data.get("variant")
    try:
        if variant == "periodic":
            return PeriodicWord(_word_field(data["period"]))
        if variant == "sturmian":
            letters = tuple(data.get("letters", (0, 1)))
            intercept = _fraction_field(data.get("intercept", 0))
            if "continued_fraction" in data:
                return SturmianWord.from_continued_fraction(
                    [int(a) for a in data["continued_fraction"]], intercept, letters
                )
            if data.get("slope") == "golden":
                return SturmianWord.golden(letters=letters)
            return SturmianWord(_fraction_field(data["slope"]), intercept, letters)
        if variant == "substitution":
            rules = {int(k): _word_field(v) for k, v in data["rules"].items()}
            return SubstitutionWord(rules, int(data["seed"]))
        if variant == "explicit":
            return ExplicitWord(_word_field(data["prefix"]))
    except KeyError as e:
        raise InvalidWordError(f"{variant} 词缺少字段 {e}") from None
    raise InvalidWordError(
        f"未知的词变体 {variant!r}。可选: periodic, sturmian, substitution, explicit"
    )


def _word_field(value: Any) -> FiniteWord:
    if isinstance(value, str):
        return parse_word(value)
    return check_letters(int(x) for x in value)


def _fraction_field(value: Any) -> Fraction:
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or int(value[1]) == 0:
            raise InvalidWordError(f"分数必须写成 [分子, 分母]，得到 {value!r}")
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(value)


# =============================================================================
# 访问与统计
# =============================================================================


def letter_at(w: WordSpec, j: int) -> int:
    """α_j，见 WordSpec.letter_at。"""
    return w.letter_at(j)


def factor(w: WordSpec, j: int, length: int) -> FiniteWord:
    """
    因子 α_j … α_{j+length-1}。

    示例:
        >>> format_word(factor(PeriodicWord("010"), 2, 4))
        '1001'
    """
    return w.factor(j, length)


def factor_complexity(w: WordSpec, n: int, horizon: int) -> int:
    """
    前 horizon 个字母中长度为 n 的不同因子个数。

    这是真实复杂度 p(n) 的下界；Sturmian 词在足够大的视界上给出 n+1。

    Raises:
        InvalidWordError: 如果 n < 0 或 horizon < n
    """
    if n < 0 or horizon < n:
        raise InvalidWordError(f"需要 0 ≤ n ≤ horizon，得到 n={n}, horizon={horizon}")
    text = w.window_string(horizon)
    return len({text[i : i + n] for i in range(horizon - n + 1)})


def _occurrences(text: str, pattern: str) -> list[int]:
    """pattern 在 text 中的全部（可重叠）出现位置，1 起始。"""
    positions = []
    start = text.find(pattern)
    while start != -1:
        positions.append(start + 1)
        start = text.find(pattern, start + 1)
    return positions


@dataclass(frozen=True)
class GapReport:
    """
    β 在前缀中的出现位置与 β-间隙因子。

    gap_factors[i] 是第 i 次与第 i+1 次出现之间的字母；
    两次出现重叠时间隙为空词。
    """

    factor: FiniteWord
    occurrences: tuple[int, ...]
    gap_factors: tuple[FiniteWord, ...]
    max_gap_weight: int
    horizon: int

    @property
    def found(self) -> bool:
        """β 是否在视界内出现过。"""
        return bool(self.occurrences)

    def gap_weights(self) -> tuple[int, ...]:
        return tuple(weight(gap) for gap in self.gap_factors)

    def reconstruct(self) -> FiniteWord:
        """
        按位置把 β 的各次出现与间隙因子合并回原窗口。

        结果是从第一次出现的起点到最后一次出现的终点的因子；
        重叠的出现共享字母。
        """
        if not self.occurrences:
            return ()
        size = len(self.factor)
        first = self.occurrences[0]
        out = [0] * (self.occurrences[-1] + size - first)
        for pos in self.occurrences:
            out[pos - first : pos - first + size] = self.factor
        for pos, gap in zip(self.occurrences, self.gap_factors):
            start = pos + size - first
            out[start : start + len(gap)] = gap
        return tuple(out)


def gap_report(w: WordSpec, beta: str | Iterable[int], horizon: int) -> GapReport:
    """
    扫描前 horizon 个字母，收集 β 的出现与 β-间隙因子。

    只统计起点 ≤ horizon−|β|+1 的出现。β 从未出现时返回 found=False 的空报告。

    示例:
        >>> rep = gap_report(PeriodicWord("01"), "0", 50)
        >>> set(rep.gap_factors), rep.max_gap_weight
        ({(1,)}, 1)
    """
    b = parse_word(beta)
    if not b:
        raise InvalidWordError("β 不能为空")
    text = w.window_string(horizon)
    occ = _occurrences(text, format_word(b))
    gaps = []
    for left, right in zip(occ, occ[1:]):
        start = left + len(b)
        gaps.append(tuple(int(ch) for ch in text[start - 1 : right - 1]))
    max_weight = max((weight(g) for g in gaps), default=0)
    if not occ:
        logger.debug("因子 %s 在视界 %d 内未出现", format_word(b), horizon)
    return GapReport(
        factor=b,
        occurrences=tuple(occ),
        gap_factors=tuple(gaps),
        max_gap_weight=max_weight,
        horizon=horizon,
    )


def _max_gap_weight_upto(text: str, occ: Sequence[int], size: int, limit: int) -> int:
    """只考虑起点 ≤ limit−size+1 的出现时的最大间隙权重。"""
    kept = [o for o in occ if o <= limit - size + 1]
    best = 0
    for left, right in zip(kept, kept[1:]):
        gap = text[left + size - 1 : right - 1]
        best = max(best, len(gap) - gap.count("0"))
    return best


def default_gap_bound(w: WordSpec) -> Callable[[FiniteWord], int] | None:
    """
    已证明的间隙权重上界（没有时返回 None）。

    - δ 替换（0→0, 1→δ, 种子 1）：weight(δ)^(k+1)，k 为 β 中最长的 0 段；
      ψ 即 2^(k+1)
    - 周期词：weight(period)
    """
    if isinstance(w, SubstitutionWord):
        rules = w.rules
        if w.seed == 1 and rules.get(0) == (0,) and set(rules) == {0, 1}:
            base = weight(rules[1])
            return lambda beta: base ** (longest_zero_run(beta) + 1)
    if isinstance(w, PeriodicWord):
        period_weight = weight(w.period)
        return lambda beta: period_weight
    return None


@dataclass(frozen=True)
class GammaVerdict:
    """单个因子的 Γ 探测结果。trend 依次对应视界 H/8, H/4, H/2, H。"""

    factor: FiniteWord
    occurrences: int
    max_gap_weight: int
    bound: int | None
    trend: tuple[int, ...]
    verdict: str


def gamma_membership_probe(
    w: WordSpec,
    max_factor_len: int,
    horizon: int,
    bound: Callable[[FiniteWord], int] | None = None,
) -> tuple[GammaVerdict, ...]:
    """
    有限视界上的 Γ 成员探测（证据，不是判定）。

    对视界内出现的每个长度 ≤ max_factor_len 的因子 β 计算最大间隙权重：
    - 有上界函数（默认取 default_gap_bound）时，超过上界判为 bound-violated
    - 没有上界时，若 H/8 < H/4 < H/2 < H 四个视界上的最大值严格递增，
      判为 unbounded-trend（启发式）
    - 其余判为 consistent-with-gamma

    Raises:
        GammaProbeError: 如果窗口全为 0
    """
    if max_factor_len < 1:
        raise InvalidWordError(f"max_factor_len 必须 ≥ 1，得到 {max_factor_len}")
    text = w.window_string(horizon)
    if set(text) <= {"0"}:
        raise GammaProbeError("窗口全为 0：按 Γ 的定义被排除")
    bound_fn = bound if bound is not None else default_gap_bound(w)
    checkpoints = [max(horizon // 8, 1), max(horizon // 4, 1), max(horizon // 2, 1)]
    checkpoints.append(horizon)

    verdicts = []
    for size in range(1, max_factor_len + 1):
        factors = sorted({text[i : i + size] for i in range(horizon - size + 1)})
        for pattern in factors:
            beta = parse_word(pattern)
            occ = _occurrences(text, pattern)
            trend = tuple(
                _max_gap_weight_upto(text, occ, size, limit) for limit in checkpoints
            )
            max_weight = trend[-1]
            limit_value = bound_fn(beta) if bound_fn is not None else None
            if len(occ) < 2:
                verdict = TOO_FEW_OCCURRENCES
            elif limit_value is not None and max_weight > limit_value:
                verdict = BOUND_VIOLATED
            elif limit_value is None and all(
                a < b for a, b in zip(trend, trend[1:])
            ):
                verdict = UNBOUNDED_TREND
            else:
                verdict = CONSISTENT
            if verdict in (BOUND_VIOLATED, UNBOUNDED_TREND):
                logger.warning(
                    "因子 %s: %s (trend=%s)", pattern, verdict, list(trend)
                )
            verdicts.append(
                GammaVerdict(
                    factor=beta,
                    occurrences=len(occ),
                    max_gap_weight=max_weight,
                    bound=limit_value,
                    trend=trend,
                    verdict=verdict,
                )
            )
    return tuple(verdicts)


def recurrence_window_estimate(
    w: WordSpec, beta: str | Iterable[int], horizon: int
) -> int | None:
    """
    最小的 ℓ，使前缀中每个长度为 ℓ 的窗口都包含 β。

    这是 L(β) 在被检查前缀上的估计。β 未出现或没有 ℓ ≤ horizon 满足条件时
    返回 None（视界内不可判定为常返）。

    示例:
        >>> recurrence_window_estimate(PeriodicWord("01"), "01", 100)
        3
    """
    report = gap_report(w, beta, horizon)
    if not report.found:
        return None
    size = len(report.factor)
    occ = report.occurrences
    needed = [occ[0] + size - 1, horizon - occ[-1] + 1]
    needed.extend(right - left + size - 1 for left, right in zip(occ, occ[1:]))
    estimate = max(needed)
    return estimate if estimate <= horizon else None
