"""Baseline selected mapping: U phase-rotated copies, U full IFFTs, keep the lowest PAPR."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal_core import PaprValue, as_symbol_sequence, papr_linear
from .transform import OpCount, TwiddleTable, ifft

QPSK_PHASES = np.array([1, -1, 1j, -1j], dtype=np.complex128)


@dataclass
class SlmResult:
    selected_index: int
    selected_signal: np.ndarray
    papr_all: list[PaprValue]
    op_count: OpCount
    alternatives: np.ndarray  # (U, N) time-domain candidates, row u = x^u

    @property
    def selected_papr(self) -> PaprValue:
        return self.papr_all[self.selected_index]


def gen_random_phase_vectors(U: int, N: int, seed=None) -> np.ndarray:
    """Row 0 is all ones; rows 1..U-1 are i.i.d. uniform over {1, -1, j, -j}."""
    if U < 1:
        raise ValueError("U must be >= 1")
    rng = np.random.default_rng(seed)
    pvs = np.ones((U, N), dtype=np.complex128)
    if U > 1:
        pvs[1:] = QPSK_PHASES[rng.integers(0, 4, size=(U - 1, N))]
    return pvs


def check_phase_vectors(pvs, N: int) -> np.ndarray:
    pvs = np.atleast_2d(np.asarray(pvs, dtype=np.complex128))
    if pvs.shape[-1] != N:
        raise ValueError(f"phase vectors have length {pvs.shape[-1]}, expected {N}")
    if not np.allclose(np.abs(pvs), 1.0, rtol=0, atol=1e-12):
        raise ValueError("phase rotation vector elements must have unit magnitude")
    if not np.allclose(pvs[0], 1.0, rtol=0, atol=1e-12):
        raise ValueError("phase vector 0 must be the all-one vector")
    return pvs


def select_min_papr(alternatives: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index of the lowest-PAPR candidate along axis -2 (ties -> lowest index)."""
    ratios = papr_linear(alternatives)
    return np.argmin(ratios, axis=-1), ratios


def run_conventional_slm(X, pvs, table: TwiddleTable | None = None) -> SlmResult:
    X = as_symbol_sequence(X)
    if X.ndim != 1:
        raise ValueError("run_conventional_slm takes one symbol sequence")
    pvs = check_phase_vectors(pvs, X.size)
    # the element-wise rotation is not counted: only IFFT work enters the model
    alternatives, ops = ifft(X[None, :] * pvs, table=table)
    best, ratios = select_min_papr(alternatives)
    best = int(best)
    return SlmResult(best, alternatives[best], [PaprValue(float(r)) for r in ratios], ops, alternatives)
