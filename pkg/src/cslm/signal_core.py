"""Baseband sequence helpers: 16-QAM mapping, PAPR measurement and CCDF counting."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Gray code on one axis: 2-bit label -> amplitude level
_GRAY_LEVELS = {0b00: -3.0, 0b01: -1.0, 0b11: 1.0, 0b10: 3.0}
_QAM16_SCALE = 1.0 / np.sqrt(10.0)


def _build_qam16() -> np.ndarray:
    table = np.empty(16, dtype=np.complex128)
    for label in range(16):
        i_bits = label >> 2  # b3 b2
        q_bits = label & 0b11  # b1 b0
        table[label] = complex(_GRAY_LEVELS[i_bits], _GRAY_LEVELS[q_bits]) * _QAM16_SCALE
    table.flags.writeable = False
    return table


#: 16-entry lookup, indexed by the integer value of the 4-bit label b3b2b1b0.
QAM16_TABLE = _build_qam16()

DEFAULT_THRESHOLDS_DB = np.arange(40, 131) / 10.0


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def as_symbol_sequence(X, min_length: int = 4) -> np.ndarray:
    """Validate a frequency-domain symbol array (last axis = subcarriers)."""
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim == 0:
        raise ValueError("symbol sequence must be at least 1-D")
    N = X.shape[-1]
    if not is_power_of_two(N) or N < min_length:
        raise ValueError(f"sequence length {N} is not a power of two >= {min_length}")
    if not np.all(np.isfinite(X)):
        raise ValueError("symbol sequence contains NaN or Inf")
    return X


def map_16qam(bits) -> np.ndarray:
    """Map bits (last axis, multiple of 4) to unit-energy Gray-coded 16-QAM symbols.

    Each group of four bits is read most significant first as b3 b2 b1 b0;
    b3 b2 select the in-phase level and b1 b0 the quadrature level.
    """
    bits = np.asarray(bits)
    if bits.ndim == 0 or bits.shape[-1] % 4 != 0:
        raise ValueError("bit count must be a multiple of 4")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    n_sym = bits.shape[-1] // 4
    if not is_power_of_two(n_sym):
        raise ValueError(f"{n_sym} symbols is not a power of two")
    groups = bits.reshape(bits.shape[:-1] + (n_sym, 4)).astype(np.intp)
    labels = (groups[..., 0] << 3) | (groups[..., 1] << 2) | (groups[..., 2] << 1) | groups[..., 3]
    return QAM16_TABLE[labels]


@dataclass(frozen=True)
class PaprValue:
    linear_ratio: float

    @property
    def db(self) -> float:
        return 10.0 * np.log10(self.linear_ratio)


def papr_linear(x) -> np.ndarray:
    """Peak over sample-mean power along the last axis; batch axes are kept."""
    power = np.abs(np.asarray(x)) ** 2
    mean = power.mean(axis=-1)
    if np.any(mean == 0):
        raise ValueError("PAPR undefined for an all-zero sequence")
    return power.max(axis=-1) / mean


def papr_db(x) -> np.ndarray:
    return 10.0 * np.log10(papr_linear(x))


def papr(x) -> PaprValue:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1:
        raise ValueError("papr expects a single 1-D sequence; use papr_db for batches")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal contains NaN or Inf")
    return PaprValue(float(papr_linear(x)))


@dataclass
class CcdfCurve:
    """Exceedance counts of PAPR over an ascending dB grid."""

    thresholds_db: np.ndarray = field(default_factory=lambda: DEFAULT_THRESHOLDS_DB.copy())
    exceed_counts: np.ndarray | None = None
    trials: int = 0

    def __post_init__(self):
        self.thresholds_db = np.asarray(self.thresholds_db, dtype=np.float64)
        if self.thresholds_db.ndim != 1 or np.any(np.diff(self.thresholds_db) <= 0):
            raise ValueError("thresholds must be a strictly ascending 1-D grid")
        if self.exceed_counts is None:
            self.exceed_counts = np.zeros(self.thresholds_db.size, dtype=np.int64)
        else:
            self.exceed_counts = np.asarray(self.exceed_counts, dtype=np.int64)

    def accumulate(self, papr_values_db) -> CcdfCurve:
        """Count each value against every threshold it strictly exceeds."""
        vals = np.atleast_1d(np.asarray(papr_values_db, dtype=np.float64))
        # counts[t] = #{v > thr[t]}; searchsorted on sorted values avoids an N x T matrix
        srt = np.sort(vals)
        self.exceed_counts += vals.size - np.searchsorted(srt, self.thresholds_db, side="right")
        self.trials += vals.size
        return self

    def merge(self, other: CcdfCurve) -> CcdfCurve:
        if not np.array_equal(self.thresholds_db, other.thresholds_db):
            raise ValueError("cannot merge curves over different threshold grids")
        return CcdfCurve(self.thresholds_db.copy(), self.exceed_counts + other.exceed_counts,
                         self.trials + other.trials)

    @property
    def exceedance(self) -> np.ndarray:
        if self.trials == 0:
            return np.zeros_like(self.thresholds_db)
        return self.exceed_counts / self.trials

    def __eq__(self, other):
        if not isinstance(other, CcdfCurve):
            return NotImplemented
        return (self.trials == other.trials
                and np.array_equal(self.thresholds_db, other.thresholds_db)
                and np.array_equal(self.exceed_counts, other.exceed_counts))


def ccdf_accumulate(curve: CcdfCurve, p: PaprValue | float) -> CcdfCurve:
    db = p.db if isinstance(p, PaprValue) else float(p)
    return curve.accumulate([db])
