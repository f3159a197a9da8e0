"""Radix-2 IFFT that can be paused after any stage.

The transform computes ``x(n) = sum_k X(k) W^{-kn}`` with ``W = exp(-2j*pi/N)``
and no 1/N factor. Stage s (1-based) merges pairs of rows so that, after s
stages, the state holds ``N / 2**s`` rows; row ``m`` is the ``2**s``-point IFFT
of the decimated input ``X[m::N / 2**s]``. Stopping after ``n - i`` stages
therefore exposes the ``M = 2**i`` subblocks of length ``L = N / M`` in
natural time order, and the remaining ``i`` stages combine them.

All functions accept leading batch axes. Returned :class:`OpCount` values are
totals for the call, i.e. per-sequence counts times the batch size.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .signal_core import as_symbol_sequence, is_power_of_two


@dataclass(frozen=True)
class OpCount:
    cmul: int = 0
    cadd: int = 0

    def __add__(self, other: OpCount) -> OpCount:
        return OpCount(self.cmul + other.cmul, self.cadd + other.cadd)

    def __mul__(self, k: int) -> OpCount:
        return OpCount(self.cmul * k, self.cadd * k)

    __rmul__ = __mul__


class TwiddleTable:
    """Immutable table of ``W^{-k} = exp(+2j*pi*k/N)`` for k = 0..N-1.

    ``sign=-1`` builds the conjugate table; it exists only as a fault
    injection hook for negative-control checks.
    """

    def __init__(self, n_fft: int, sign: int = 1):
        if not is_power_of_two(n_fft):
            raise ValueError(f"N={n_fft} is not a power of two")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.n_fft = n_fft
        self.sign = sign
        k = np.arange(n_fft)
        roots = np.exp(sign * 2j * np.pi * k / n_fft)
        roots[0] = 1.0
        roots.flags.writeable = False
        self.roots = roots

    def power(self, exponent) -> np.ndarray:
        """``W^{-e}`` for integer exponents, reduced mod N before lookup."""
        return self.roots[np.mod(exponent, self.n_fft)]

    def __repr__(self):
        return f"TwiddleTable(n_fft={self.n_fft}, sign={self.sign})"


@lru_cache(maxsize=None)
def twiddles(n_fft: int) -> TwiddleTable:
    return TwiddleTable(n_fft)


@dataclass(frozen=True)
class StageTapConfig:
    """Split point of an N-point IFFT with ``i`` stages left to run."""

    n_fft: int
    i: int

    def __post_init__(self):
        if not is_power_of_two(self.n_fft) or self.n_fft < 4:
            raise ValueError(f"N={self.n_fft} must be a power of two >= 4")
        if not 1 <= self.i <= self.n - 1:
            raise ValueError(f"i={self.i} outside [1, {self.n - 1}] for N={self.n_fft}")

    @property
    def n(self) -> int:
        return self.n_fft.bit_length() - 1

    @property
    def M(self) -> int:
        return 1 << self.i

    @property
    def L(self) -> int:
        return self.n_fft >> self.i


@dataclass(frozen=True)
class SubblockSet:
    """Intermediate IFFT state: ``subblocks[..., m, :]`` is subblock m (length L)."""

    subblocks: np.ndarray
    tap: StageTapConfig


def _batch_size(shape) -> int:
    return int(np.prod(shape[:-2], dtype=np.int64)) if len(shape) > 2 else 1


def _run_stages(state: np.ndarray, n_stages: int, table: TwiddleTable) -> tuple[np.ndarray, OpCount]:
    N = table.n_fft
    rows, length = state.shape[-2:]
    if rows >> n_stages < 1:
        raise ValueError("more stages requested than remain")
    batch = _batch_size(state.shape)
    for _ in range(n_stages):
        half = rows // 2
        w = table.roots[(N // (2 * length)) * np.arange(length)]
        even = state[..., :half, :]
        odd = state[..., half:, :] * w
        state = np.concatenate((even + odd, even - odd), axis=-1)
        rows, length = half, 2 * length
    # every stage: N/2 butterflies, each one multiply and two additions
    return state, OpCount(cmul=batch * n_stages * N // 2, cadd=batch * n_stages * N)


def ifft(X, normalize: bool = False, table: TwiddleTable | None = None) -> tuple[np.ndarray, OpCount]:
    X = as_symbol_sequence(X, min_length=2)
    N = X.shape[-1]
    table = table or twiddles(N)
    state, ops = _run_stages(X[..., :, None], N.bit_length() - 1, table)
    x = state[..., 0, :]
    if normalize:
        x = x / N
    return x, ops


def ifft_to_stage(X, tap: StageTapConfig, table: TwiddleTable | None = None) -> tuple[SubblockSet, OpCount]:
    X = as_symbol_sequence(X)
    if X.shape[-1] != tap.n_fft:
        raise ValueError(f"length {X.shape[-1]} does not match tap N={tap.n_fft}")
    table = table or twiddles(tap.n_fft)
    state, ops = _run_stages(X[..., :, None], tap.n - tap.i, table)
    return SubblockSet(state, tap), ops


def _check_shifts(shifts, tap: StageTapConfig) -> np.ndarray:
    shifts = np.asarray(shifts)
    if shifts.shape != (tap.M,):
        raise ValueError(f"expected {tap.M} shift values, got shape {shifts.shape}")
    if not np.issubdtype(shifts.dtype, np.integer):
        raise ValueError("shift values must be integers")
    if np.any(shifts < 0) or np.any(shifts >= tap.L):
        raise ValueError(f"shift values must lie in [0, {tap.L - 1}]")
    return shifts.astype(np.intp)


def rotate_subblocks(sb: SubblockSet, shifts) -> np.ndarray:
    """Cyclically shift subblock m so that position t reads ``(t + a_m) mod L``."""
    shifts = _check_shifts(shifts, sb.tap)
    if not shifts.any():
        return sb.subblocks
    idx = (np.arange(sb.tap.L)[None, :] + shifts[:, None]) % sb.tap.L
    return np.take_along_axis(sb.subblocks, np.broadcast_to(idx, sb.subblocks.shape), axis=-1)


def combine_with_shifts(sb: SubblockSet, shifts, table: TwiddleTable | None = None) -> tuple[np.ndarray, OpCount]:
    """Rotate every subblock, then run the last ``i`` radix-2 stages."""
    table = table or twiddles(sb.tap.n_fft)
    state, ops = _run_stages(rotate_subblocks(sb, shifts), sb.tap.i, table)
    return state[..., 0, :], ops


def direct_combine(sb: SubblockSet, shifts) -> np.ndarray:
    """Reference ``x(n) = sum_m x'_m((n + a_m) mod L) W^{-mn}`` by direct summation."""
    tap = sb.tap
    shifts = _check_shifts(shifts, tap)
    n = np.arange(tap.n_fft)
    m = np.arange(tap.M)
    pos = (n[None, :] + shifts[:, None]) % tap.L  # (M, N)
    picked = sb.subblocks[..., m[:, None], pos]  # (..., M, N)
    weights = twiddles(tap.n_fft).power(m[:, None] * n[None, :])
    return (picked * weights).sum(axis=-2)


def naive_idft(X) -> np.ndarray:
    """O(N^2) evaluation of the unnormalized inverse DFT, used as a test oracle."""
    X = np.asarray(X, dtype=np.complex128)
    N = X.shape[-1]
    k = np.arange(N)
    basis = np.exp(2j * np.pi * np.outer(k, k) / N)
    return X @ basis
