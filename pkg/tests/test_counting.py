"""Counting triples: hand-derived cases and the sandwich property."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from courantlab.counting import (
    NumericSpectrum,
    count_exact,
    count_numeric,
    merge_disjoint,
)
from courantlab.errors import (
    InsufficientCutoffError,
    InsufficientSpectrumError,
    InvalidMergeError,
    MixedConventionError,
)
from courantlab.exact_spectra import RectSpec, Scale, enumerate_spectrum

RECT = enumerate_spectrum(RectSpec(F(1, 4), F(1)), 12)
SQUARE = enumerate_spectrum(RectSpec(F(1), F(1)), 12)


class TestCountExact:
    def test_rect_at_5(self):
        t = count_exact(RECT, 5)
        assert (t.n_lower, t.n_mid, t.n_upper, t.is_eigenvalue) == (4, 5, 6, True)

    def test_rect_at_10(self):
        t = count_exact(RECT, 10)
        assert (t.n_lower, t.n_mid, t.n_upper, t.is_eigenvalue) == (10, 11, 12, True)

    def test_square_off_spectrum(self):
        t = count_exact(SQUARE, 3)
        assert (t.n_lower, t.n_mid, t.n_upper, t.is_eigenvalue) == (1, 1, 1, False)

    def test_query_past_cutoff_raises(self):
        with pytest.raises(InsufficientCutoffError):
            count_exact(SQUARE, 13)

    @settings(max_examples=80, deadline=None)
    @given(q=st.fractions(min_value=F(0), max_value=F(12), max_denominator=8))
    def test_sandwich_and_off_spectrum_equality(self, q):
        t = count_exact(RECT, q)
        assert t.n_lower <= t.n_mid <= t.n_upper
        if not t.is_eigenvalue:
            assert t.n_lower == t.n_mid == t.n_upper
        else:
            assert t.n_mid == t.n_lower + 1
            assert t.multiplicity >= 1

    def test_upper_count_right_continuous_monotone(self):
        qs = sorted(F(i, 4) for i in range(0, 49))
        uppers = [count_exact(RECT, q).n_upper for q in qs]
        assert uppers == sorted(uppers)


class TestCountNumeric:
    def test_clustered_pair_counts_as_double(self):
        sp = NumericSpectrum((2.0000001, 4.9999998, 5.0000003, 8.0), cluster_tol=1e-5)
        t = count_numeric(sp, 5.0)
        assert (t.n_lower, t.n_mid, t.n_upper, t.is_eigenvalue) == (1, 2, 3, True)

    def test_off_spectrum(self):
        sp = NumericSpectrum((2.0, 5.0, 5.0, 8.0), cluster_tol=1e-12)
        t = count_numeric(sp, 3.0)
        assert (t.n_lower, t.n_mid, t.n_upper, t.is_eigenvalue) == (1, 1, 1, False)

    def test_empty_spectrum_raises(self):
        with pytest.raises(InsufficientSpectrumError):
            count_numeric(NumericSpectrum(()), 1.0)

    def test_query_near_top_raises(self):
        sp = NumericSpectrum((2.0, 5.0, 8.0), cluster_tol=1e-6)
        with pytest.raises(InsufficientSpectrumError):
            count_numeric(sp, 8.0)

    def test_matches_exact_counts_on_float_image(self):
        floats = NumericSpectrum(tuple(float(v) for v in RECT.values_with_multiplicity()),
                                 cluster_tol=1e-12)
        for q in (F(5, 4), F(2), F(3), F(5), F(8), F(10), F(21, 2)):
            te = count_exact(RECT, q)
            tn = count_numeric(floats, float(q))
            assert (te.n_lower, te.n_mid, te.n_upper, te.is_eigenvalue) == \
                   (tn.n_lower, tn.n_mid, tn.n_upper, tn.is_eigenvalue)


class TestMerge:
    def test_two_squares(self):
        merged = merge_disjoint([SQUARE, SQUARE])
        vals = [float(v) for v in merged.values_with_multiplicity()]
        assert vals == [2, 2, 5, 5, 5, 5, 8, 8, 10, 10, 10, 10]

    def test_single_input_identity(self):
        merged = merge_disjoint([SQUARE])
        assert merged.entries == SQUARE.entries

    def test_disconnected_union_ground_state_degenerates(self):
        merged = merge_disjoint([SQUARE, SQUARE])
        t = count_exact(merged, 2)
        assert t.n_upper == 2   # lambda_1 = lambda_2 for the disjoint union

    def test_mixed_scale_rejected(self):
        other = enumerate_spectrum(RectSpec(F(1), F(1), Scale.PI_SQUARED), 12)
        with pytest.raises(MixedConventionError):
            merge_disjoint([SQUARE, other])

    def test_mixed_kind_rejected(self):
        with pytest.raises(MixedConventionError):
            merge_disjoint([SQUARE, NumericSpectrum((1.0, 2.0, 9.0))])

    def test_mismatched_cutoffs_rejected(self):
        shorter = enumerate_spectrum(RectSpec(F(1), F(1)), 10)
        with pytest.raises(InvalidMergeError):
            merge_disjoint([SQUARE, shorter])

    def test_numeric_merge_sorts(self):
        a = NumericSpectrum((1.0, 3.0, 9.0))
        b = NumericSpectrum((2.0, 3.5, 9.5))
        merged = merge_disjoint([a, b])
        assert merged.values == (1.0, 2.0, 3.0, 3.5, 9.0, 9.5)
