"""
words 模块的单元测试。

测试词的描述、因子、复杂度、间隙因子与 Γ 探测。
"""

from fractions import Fraction

import pytest

from cwlab.errors import (
    GammaProbeError,
    InvalidWordError,
    NonProlongableError,
    WordIndexError,
)
from cwlab.words import (
    BOUND_VIOLATED,
    CONSISTENT,
    TOO_FEW_OCCURRENCES,
    UNBOUNDED_TREND,
    ExplicitWord,
    PeriodicWord,
    SturmianWord,
    SubstitutionWord,
    complement_word,
    default_gap_bound,
    delta_substitution,
    factor,
    factor_complexity,
    format_word,
    gamma_membership_probe,
    gap_report,
    letter_at,
    longest_zero_run,
    parse_word,
    recurrence_window_estimate,
    reverse_word,
    substitution_iterate,
    weight,
    word_from_dict,
)


class TestFiniteWords:
    """测试有限词的辅助函数。"""

    def test_parse_word(self):
        """数字串应该解析为整数元组。"""
        assert parse_word("1010") == (1, 0, 1, 0)
        assert parse_word([2, 3]) == (2, 3)

    def test_parse_invalid_letter(self):
        """字母表之外的字符应该报错。"""
        with pytest.raises(InvalidWordError):
            parse_word("0142")
        with pytest.raises(InvalidWordError):
            parse_word([0, 5])

    def test_weight_and_zero_run(self):
        """权重只数非 0 字母。"""
        assert weight((1, 0, 1, 0, 0)) == 2
        assert weight((2, 3, 0)) == 2
        assert longest_zero_run((1, 0, 0, 1, 0)) == 2
        assert longest_zero_run((1, 1)) == 0

    def test_reverse(self):
        assert reverse_word((0, 1, 2)) == (2, 1, 0)


class TestPeriodicWord:
    """测试周期词。"""

    def test_letters(self):
        """字母按周期重复。"""
        w = PeriodicWord("23")
        assert w.letter_at(1) == 2
        assert w.letter_at(5) == 2
        assert w.letter_at(6) == 3

    def test_factor_across_periods(self):
        """因子可以跨越多个周期。"""
        assert format_word(factor(PeriodicWord("010"), 2, 4)) == "1001"
        assert PeriodicWord("23").factor(2, 3) == (3, 2, 3)

    def test_empty_period_rejected(self):
        with pytest.raises(InvalidWordError):
            PeriodicWord("")

    def test_index_must_be_positive(self):
        """下标从 1 开始。"""
        with pytest.raises(WordIndexError):
            letter_at(PeriodicWord("0"), 0)

    def test_zero_length_factor(self):
        assert PeriodicWord("01").factor(3, 0) == ()


class TestSturmianWord:
    """测试 Sturmian 旋转序列。"""

    def test_golden_prefix(self):
        """黄金分割词按 floor 公式展开。"""
        assert SturmianWord.golden().prefix(10) == parse_word("1011010110")

    def test_golden_complexity(self):
        """Sturmian 词的复杂度是 n+1。"""
        golden = SturmianWord.golden()
        for n in range(1, 13):
            assert factor_complexity(golden, n, 5000) == n + 1

    def test_continued_fraction(self):
        """渐近分数按部分商计算。"""
        assert SturmianWord.from_continued_fraction([0, 2, 1]).slope == Fraction(1, 3)

    def test_custom_letters(self):
        """letters 把 0/1 映射到其他字母。"""
        w = SturmianWord.golden(letters=(2, 3))
        assert set(w.prefix(20)) == {2, 3}

    def test_invalid_slope(self):
        with pytest.raises(InvalidWordError):
            SturmianWord(Fraction(3, 2))

    def test_invalid_letters(self):
        """两个字母必须不同。"""
        with pytest.raises(InvalidWordError):
            SturmianWord(Fraction(1, 3), letters=(1, 1))


class TestSubstitutionWord:
    """测试替换词与 δ 替换。"""

    def test_psi_prefix(self):
        """ψ 以 1010 0 1010 0 开头。"""
        assert SubstitutionWord.psi().prefix(10) == parse_word("1010010100")

    def test_psi_long_prefix_is_fixed_point(self):
        """前缀在替换下保持不变。"""
        psi = SubstitutionWord.psi()
        assert psi.prefix(50) == substitution_iterate(psi.rules, 1, 5)[:50]

    def test_iterate(self):
        rules = {0: [0], 1: [1, 0, 1, 0]}
        assert substitution_iterate(rules, 1, 0) == (1,)
        assert substitution_iterate(rules, 1, 2) == parse_word("1010010100")

    @pytest.mark.parametrize("n", range(13))
    def test_psi_iterate_weight_and_suffix(self, n: int):
        """ψ^n(1) 的权重是 2^n，且以 0^n 结尾。"""
        image = substitution_iterate(SubstitutionWord.psi().rules, 1, n)
        assert weight(image) == 2**n
        assert image[len(image) - n :] == (0,) * n

    def test_iterate_negative(self):
        with pytest.raises(InvalidWordError):
            substitution_iterate({1: [1, 0], 0: [0]}, 1, -1)

    def test_not_prolongable(self):
        """σ(seed) 不以 seed 开头时无法延拓。"""
        with pytest.raises(NonProlongableError):
            SubstitutionWord({0: (1,), 1: (0, 1)}, 1)

    def test_delta_substitution(self):
        """δ = 1010 就是 ψ。"""
        psi = SubstitutionWord.psi()
        assert delta_substitution("1010").prefix(30) == psi.prefix(30)
        assert delta_substitution("110").prefix(7) == parse_word("1101100")

    @pytest.mark.parametrize("delta", ["10", "0110", "111", "1021"])
    def test_invalid_delta(self, delta: str):
        """δ 需要以 1 开头、以 0 结尾、权重 ≥ 2 且为二元词。"""
        with pytest.raises(InvalidWordError):
            delta_substitution(delta)

    def test_complement(self):
        """补词交换 0 与 1。"""
        comp = complement_word(SubstitutionWord.psi(), 10)
        assert isinstance(comp, ExplicitWord)
        assert comp.prefix(10) == parse_word("0101101011")


class TestExplicitWord:
    """测试显式前缀。"""

    def test_beyond_prefix(self):
        """越过前缀访问应该报错。"""
        w = ExplicitWord("012")
        assert w.letter_at(3) == 2
        with pytest.raises(WordIndexError):
            w.letter_at(4)
        with pytest.raises(WordIndexError):
            w.factor(2, 3)


class TestWordFromDict:
    """测试 JSON 描述。"""

    def test_periodic(self):
        w = word_from_dict({"variant": "periodic", "period": "23"})
        assert w == PeriodicWord("23")

    def test_sturmian_golden(self):
        w = word_from_dict({"variant": "sturmian", "slope": "golden"})
        assert w.prefix(10) == SturmianWord.golden().prefix(10)

    def test_substitution(self):
        data = {"variant": "substitution", "rules": {"0": [0], "1": "1010"}, "seed": 1}
        assert word_from_dict(data).prefix(10) == SubstitutionWord.psi().prefix(10)

    def test_unknown_variant(self):
        with pytest.raises(InvalidWordError):
            word_from_dict({"variant": "random"})

    def test_missing_field(self):
        with pytest.raises(InvalidWordError) as excinfo:
            word_from_dict({"variant": "periodic"})
        assert "period" in str(excinfo.value)


class TestGaps:
    """测试 β-间隙因子。"""

    def test_periodic_gaps(self):
        rep = gap_report(PeriodicWord("01"), "0", 50)
        assert set(rep.gap_factors) == {(1,)}
        assert rep.max_gap_weight == 1
        assert rep.found

    def test_missing_factor(self):
        rep = gap_report(PeriodicWord("01"), "2", 50)
        assert not rep.found
        assert rep.reconstruct() == ()

    def test_reconstruct(self):
        """不重叠的出现与间隙拼回原来的窗口。"""
        w = SubstitutionWord.psi()
        rep = gap_report(w, "101", 40)
        first, last = rep.occurrences[0], rep.occurrences[-1]
        assert rep.reconstruct() == w.factor(first, last - first + 3)

    def test_reconstruct_overlapping(self):
        """相互重叠的出现按位置合并，共享的字母只出现一次。"""
        w = PeriodicWord("01")
        rep = gap_report(w, "010", 20)
        assert rep.occurrences[:3] == (1, 3, 5)
        assert all(gap == () for gap in rep.gap_factors)
        first, last = rep.occurrences[0], rep.occurrences[-1]
        assert rep.reconstruct() == w.factor(first, last - first + 3)

    def test_empty_beta(self):
        with pytest.raises(InvalidWordError):
            gap_report(PeriodicWord("01"), "", 10)

    def test_recurrence_window(self):
        """L(β)：每个长度为 L 的窗口都包含 β。"""
        assert recurrence_window_estimate(PeriodicWord("01"), "01", 100) == 3
        assert recurrence_window_estimate(SturmianWord.golden(), "0", 2000) == 3

    def test_recurrence_window_missing(self):
        assert recurrence_window_estimate(PeriodicWord("01"), "11", 100) is None


class TestGammaProbe:
    """测试有限视界上的 Γ 探测。"""

    def test_psi_within_bound(self):
        """ψ 的间隙权重不超过 2^(k+1)。"""
        verdicts = gamma_membership_probe(SubstitutionWord.psi(), 3, 2000)
        assert verdicts
        assert all(v.verdict != BOUND_VIOLATED for v in verdicts)
        zero_zero = next(v for v in verdicts if v.factor == (0, 0))
        assert zero_zero.bound == 8

    def test_psi_within_bound_long_horizon(self):
        verdicts = gamma_membership_probe(SubstitutionWord.psi(), 3, 10_000)
        assert all(v.verdict != BOUND_VIOLATED for v in verdicts)

    def test_complement_flagged(self):
        """ψ 的补词中 0 的间隙权重持续增长。"""
        comp = complement_word(SubstitutionWord.psi(), 500)
        verdicts = gamma_membership_probe(comp, 1, 500)
        zero = next(v for v in verdicts if v.factor == (0,))
        assert zero.verdict == UNBOUNDED_TREND
        assert list(zero.trend) == sorted(set(zero.trend))

    def test_periodic_consistent(self):
        verdicts = gamma_membership_probe(PeriodicWord("0123"), 2, 400)
        assert {v.verdict for v in verdicts} == {CONSISTENT}

    def test_single_occurrence(self):
        """只出现一次的因子无法判断。"""
        verdicts = gamma_membership_probe(ExplicitWord("2" + "0" * 30), 1, 31)
        two = next(v for v in verdicts if v.factor == (2,))
        assert two.verdict == TOO_FEW_OCCURRENCES

    def test_all_zero_window(self):
        with pytest.raises(GammaProbeError):
            gamma_membership_probe(PeriodicWord("0"), 2, 100)

    def test_default_bounds(self):
        """已知上界：δ 替换与周期词。"""
        psi_bound = default_gap_bound(SubstitutionWord.psi())
        assert psi_bound is not None
        assert psi_bound((1,)) == 2
        assert psi_bound((0, 0)) == 8
        periodic_bound = default_gap_bound(PeriodicWord("0123"))
        assert periodic_bound is not None and periodic_bound((0,)) == 3
        assert default_gap_bound(SturmianWord.golden()) is None
