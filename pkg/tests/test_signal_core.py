import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cslm.signal_core import (QAM16_TABLE, CcdfCurve, PaprValue, ccdf_accumulate, map_16qam, papr,
                              papr_db)
from cslm.transform import ifft

S10 = np.sqrt(10)


def test_qam_corner_labels():
    assert map_16qam([0, 0, 0, 0])[0] == pytest.approx((-3 - 3j) / S10, abs=1e-15)
    assert map_16qam([1, 0, 1, 0])[0] == pytest.approx((3 + 3j) / S10, abs=1e-15)


def test_qam_table_unit_energy_and_distinct():
    assert np.mean(np.abs(QAM16_TABLE) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert len(set(np.round(QAM16_TABLE * S10).tolist())) == 16
    bits = np.array(list(itertools.product([0, 1], repeat=4))).ravel()
    syms = map_16qam(bits)
    assert np.mean(np.abs(syms) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_qam_gray_adjacency():
    # neighbours on either axis differ in exactly one bit of the label
    pos = {label: (round(QAM16_TABLE[label].real * S10), round(QAM16_TABLE[label].imag * S10))
           for label in range(16)}
    by_pos = {v: k for k, v in pos.items()}
    for (re, im), label in by_pos.items():
        for dre, dim in ((2, 0), (0, 2)):
            other = by_pos.get((re + dre, im + dim))
            if other is not None:
                assert bin(label ^ other).count("1") == 1


@pytest.mark.parametrize("bits", [[0, 1, 1], [0] * 12])
def test_qam_bad_lengths(bits):
    # 3 bits: not a multiple of 4; 12 bits: 3 symbols, not a power of two
    with pytest.raises(ValueError):
        map_16qam(bits)


def test_papr_examples():
    p = papr([4, 0, 0, 0])
    assert p.linear_ratio == 4.0
    assert p.db == pytest.approx(6.0206, abs=1e-4)
    assert papr([2 - 1j] * 4).db == pytest.approx(0.0, abs=1e-12)
    x, _ = ifft(np.ones(8))
    assert papr(x).db == pytest.approx(10 * np.log10(8), abs=1e-12)
    assert papr(x).db == pytest.approx(9.0309, abs=1e-4)


def test_papr_zero_sequence_rejected():
    with pytest.raises(ValueError):
        papr(np.zeros(8))


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(st.lists(st.tuples(finite, finite), min_size=4, max_size=64),
       st.tuples(finite, finite).filter(lambda t: abs(complex(*t)) > 1e-3))
def test_papr_scale_invariant_and_nonnegative(samples, alpha):
    x = np.array([complex(a, b) for a, b in samples])
    if np.max(np.abs(x)) < 1e-6:
        return
    a = complex(*alpha)
    p1, p2 = papr(x), papr(a * x)
    assert p1.db >= -1e-12
    assert p2.linear_ratio == pytest.approx(p1.linear_ratio, rel=1e-12)


def test_papr_zero_db_iff_constant_envelope():
    x = np.exp(1j * np.linspace(0, 5, 16))
    assert papr(x).db == pytest.approx(0.0, abs=1e-12)
    x[3] *= 1.01
    assert papr(x).db > 0


def test_ccdf_accumulate_examples():
    c = CcdfCurve(np.array([6.0, 8.0, 10.0]))
    ccdf_accumulate(c, 9.0)
    assert c.exceed_counts.tolist() == [1, 1, 0] and c.trials == 1
    ccdf_accumulate(c, PaprValue(10 ** 0.3))  # 3 dB
    assert c.exceed_counts.tolist() == [1, 1, 0] and c.trials == 2


def test_ccdf_threshold_is_strict():
    c = CcdfCurve(np.array([6.0, 8.0])).accumulate([8.0])
    assert c.exceed_counts.tolist() == [1, 0]


@given(st.lists(st.floats(0, 15), max_size=50), st.lists(st.floats(0, 15), max_size=50))
def test_ccdf_merge_equals_union(a, b):
    grid = np.arange(40, 131) / 10
    merged = CcdfCurve(grid).accumulate(a).merge(CcdfCurve(grid).accumulate(b))
    union = CcdfCurve(grid).accumulate(a + b)
    assert merged == union
    assert np.all(np.diff(union.exceedance) <= 0)
    assert np.all(union.exceed_counts <= union.trials)


def test_ccdf_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        CcdfCurve(np.array([5.0, 4.0]))


def test_papr_db_batched_matches_single(rng):
    x = rng.normal(size=(5, 32)) + 1j * rng.normal(size=(5, 32))
    assert np.allclose(papr_db(x), [papr(row).db for row in x], rtol=0, atol=1e-12)
