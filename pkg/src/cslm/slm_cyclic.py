"""Low-complexity SLM: one shared partial IFFT, cyclic subblock shifts, U short combines."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .signal_core import PaprValue, as_symbol_sequence
from .slm_conventional import SlmResult, select_min_papr
from .transform import (OpCount, StageTapConfig, SubblockSet, TwiddleTable, combine_with_shifts,
                        ifft_to_stage, twiddles)


@dataclass(frozen=True)
class ShiftTable:
    """U x M integer shifts; row j holds a_0^j .. a_{M-1}^j."""

    shifts: np.ndarray
    tap: StageTapConfig
    method: str = "random"

    def __post_init__(self):
        s = np.asarray(self.shifts)
        if s.ndim != 2 or s.shape[1] != self.tap.M or s.shape[0] < 1:
            raise ValueError(f"shift table must be U x {self.tap.M}, got shape {s.shape}")
        if not np.issubdtype(s.dtype, np.integer):
            raise ValueError("shift values must be integers")
        if np.any(s < 0) or np.any(s >= self.tap.L):
            raise ValueError(f"shift values must lie in [0, {self.tap.L - 1}]")
        if np.any(s[0] != 0):
            raise ValueError("row 0 must be all zeros (original sequence)")
        s = s.astype(np.int64)
        s.flags.writeable = False
        object.__setattr__(self, "shifts", s)

    @property
    def U(self) -> int:
        return self.shifts.shape[0]

    def to_text(self) -> str:
        return "".join(" ".join(str(int(a)) for a in row) + "\n" for row in self.shifts)

    @classmethod
    def from_text(cls, text: str, tap: StageTapConfig, method: str = "file") -> ShiftTable:
        rows = [line.split() for line in text.splitlines()]
        rows = [r for r in rows if r and not r[0].startswith("#")]
        try:
            data = np.array([[int(v) for v in r] for r in rows], dtype=np.int64)
        except ValueError as exc:  # ragged rows or non-integers
            raise ValueError(f"malformed shift table: {exc}") from None
        return cls(data.reshape(len(rows), -1), tap, method)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path, tap: StageTapConfig) -> ShiftTable:
        return cls.from_text(Path(path).read_text(), tap)


@dataclass
class GoodnessReport:
    violations: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return not self.violations


def gen_random_shifts(U: int, tap: StageTapConfig, seed=None) -> ShiftTable:
    if U < 1:
        raise ValueError("U must be >= 1")
    rng = np.random.default_rng(seed)
    shifts = np.zeros((U, tap.M), dtype=np.int64)
    shifts[1:] = rng.integers(0, tap.L, size=(U - 1, tap.M))
    return ShiftTable(shifts, tap, "random")


def gen_mj_shifts(U: int, tap: StageTapConfig) -> ShiftTable:
    """Deterministic a_m^j = m*j, reduced mod L so entries stay in range."""
    if U < 1:
        raise ValueError("U must be >= 1")
    j = np.arange(U, dtype=np.int64)[:, None]
    m = np.arange(tap.M, dtype=np.int64)[None, :]
    return ShiftTable((m * j) % tap.L, tap, "mj")


def mj_condition_bound_holds(U: int, tap: StageTapConfig) -> bool:
    """Sufficient condition under which the mj table is guaranteed good."""
    return (tap.M - 1) * (U - 1) < tap.L


def check_good_condition(table: ShiftTable) -> GoodnessReport:
    """List every (j, v, m1, m2) with j < v, m1 < m2 whose shift differences coincide mod L."""
    s, L = table.shifts, table.tap.L
    if table.U < 2:
        return GoodnessReport()
    jv = np.array(list(combinations(range(table.U), 2)))
    mm = np.array(list(combinations(range(table.tap.M), 2)))
    d = (s[jv[:, 1]] - s[jv[:, 0]]) % L  # (pairs, M)
    hit = d[:, mm[:, 0]] == d[:, mm[:, 1]]  # (pairs, m-pairs)
    p_idx, q_idx = np.nonzero(hit)
    return GoodnessReport([(int(jv[p, 0]), int(jv[p, 1]), int(mm[q, 0]), int(mm[q, 1]))
                           for p, q in zip(p_idx, q_idx)])


def equivalent_phase_vector(tap: StageTapConfig, shifts_row) -> np.ndarray:
    """Frequency-domain vector whose product with X reproduces the shifted alternative.

    Element k is ``W^{-(k - k mod M) a_{k mod M}}``; exponents are reduced mod N
    before the table lookup so every element is an exact table root.
    """
    row = np.asarray(shifts_row, dtype=np.int64)
    if row.shape != (tap.M,):
        raise ValueError(f"expected {tap.M} shift values")
    if np.any(row < 0) or np.any(row >= tap.L):
        raise ValueError(f"shift values must lie in [0, {tap.L - 1}]")
    k = np.arange(tap.n_fft, dtype=np.int64)
    m = k % tap.M
    return twiddles(tap.n_fft).power((k - m) * row[m])


def cyclic_alternatives(sb: SubblockSet, table: ShiftTable,
                        twiddle_table: TwiddleTable | None = None) -> tuple[np.ndarray, OpCount]:
    """All U alternatives from one subblock set; output axis -2 indexes the alternative."""
    outs, ops = [], OpCount()
    for row in table.shifts:
        x, c = combine_with_shifts(sb, row, twiddle_table)
        outs.append(x)
        ops = ops + c
    return np.stack(outs, axis=-2), ops


def run_cyclic_slm(X, table: ShiftTable, twiddle_table: TwiddleTable | None = None) -> SlmResult:
    X = as_symbol_sequence(X)
    if X.ndim != 1 or X.size != table.tap.n_fft:
        raise ValueError(f"expected one sequence of length {table.tap.n_fft}")
    sb, ops = ifft_to_stage(X, table.tap, twiddle_table)
    alternatives, combine_ops = cyclic_alternatives(sb, table, twiddle_table)
    best, ratios = select_min_papr(alternatives)
    best = int(best)
    # row 0 reuses the plain IFFT path, so its combine is part of the single full IFFT
    return SlmResult(best, alternatives[best], [PaprValue(float(r)) for r in ratios],
                     ops + combine_ops, alternatives)
