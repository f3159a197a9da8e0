"""Shift-design theory and closed-form complexity models."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .transform import StageTapConfig, twiddles

SCHEMES = ("conventional", "proposed")
TABLE_N = (64, 256, 1024)
TABLE_U = (4, 8, 16)
TABLE_I = (1, 2, 3, 4)

# rho values below this (normalized scale) count as exact cancellation
RHO_ZERO = 1e-20


@dataclass(frozen=True)
class RhoProfile:
    values: np.ndarray

    @property
    def max_value(self) -> float:
        return float(self.values.max())

    @property
    def argmax(self) -> np.ndarray:
        return np.flatnonzero(np.isclose(self.values, self.values.max(), rtol=0, atol=1e-12))


def rho_profile(Pj, Pv) -> RhoProfile:
    """``|sum_k Pj(k) conj(Pv(k)) W^{k tau}|^2 / N^2`` for every tau in [0, N-1].

    Evaluated as a direct sum with integer exponents ``k*tau mod N`` so the
    root-of-unity weights are exact table entries.
    """
    Pj = np.asarray(Pj, dtype=np.complex128)
    Pv = np.asarray(Pv, dtype=np.complex128)
    if Pj.shape != Pv.shape or Pj.ndim != 1:
        raise ValueError("phase vectors must be 1-D and of equal length")
    N = Pj.size
    k = np.arange(N)
    # W^{k tau} = W^{-(-k tau)}
    weights = twiddles(N).power(-np.outer(k, k))
    s = weights @ (Pj * np.conj(Pv))
    return RhoProfile(np.abs(s) ** 2 / N**2)


def predicted_nonzero_taus(tap: StageTapConfig, row_j, row_v) -> list[np.ndarray]:
    """For each subblock m, the M lags where its term A_m does not cancel.

    ``tau = c*L - d`` with ``d = a_m^v - a_m^j`` and ``c`` in 1..M (d >= 0) or
    0..M-1 (d < 0); taken mod N so the d = 0, c = M case lands on tau = 0.
    """
    row_j = np.asarray(row_j, dtype=np.int64)
    row_v = np.asarray(row_v, dtype=np.int64)
    M, L, N = tap.M, tap.L, tap.n_fft
    out = []
    for d in row_v - row_j:
        c = np.arange(1, M + 1) if d >= 0 else np.arange(0, M)
        out.append(np.sort((c * L - d) % N))
    return out


def correlation_bound(tap: StageTapConfig) -> float:
    """Peak rho attained by any pair of rows satisfying the good-shift condition."""
    return tap.L**2 / tap.n_fft**2


def _check_params(n: int, i: int, U: int) -> None:
    if n < 2 or not 1 <= i <= n - 1:
        raise ValueError(f"need 1 <= i <= n-1, got n={n}, i={i}")
    if U < 1:
        raise ValueError("U must be >= 1")


def ccrr(n: int, i: int, U: int) -> float:
    """Complexity reduction ratio in percent, rounded half-up to one decimal."""
    _check_params(n, i, U)
    num = 1000 * (n - i) * (U - 1)  # ratio scaled by 10 * 100
    den = n * U
    return ((2 * num + den) // (2 * den)) / 10


@dataclass(frozen=True)
class ComplexityModel:
    scheme: str
    n: int
    i: int
    U: int
    cmul_total: int
    cadd_total: int


def complexity_model(scheme: str, n: int, i: int, U: int) -> ComplexityModel:
    _check_params(n, i, U)
    N = 1 << n
    if scheme == "conventional":
        cmul = U * (N // 2) * n
        cadd = U * N * n
    elif scheme == "proposed":
        # (U-1)(i/n)(N/2)log2N is always an integer: (i/n)*log2N = i
        cmul = (N // 2) * n + (U - 1) * (N // 2) * i
        cadd = N * n + (U - 1) * N * i
    else:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    return ComplexityModel(scheme, n, i, U, cmul, cadd)


def ccrr_table() -> dict[tuple[int, int, int], float]:
    """CCRR keyed by (N, U, i) over the standard 3 x 3 x 4 grid."""
    return {(N, U, i): ccrr(N.bit_length() - 1, i, U)
            for N in TABLE_N for U in TABLE_U for i in TABLE_I}


def format_ccrr_text(table: dict | None = None) -> str:
    table = table or ccrr_table()
    lines = ["N      " + "".join(f"{N:^24d}" for N in TABLE_N),
             "U      " + "".join(f"{U:>8d}" for _ in TABLE_N for U in TABLE_U)]
    for i in TABLE_I:
        cells = "".join(f"{table[(N, U, i)]:>8.1f}" for N in TABLE_N for U in TABLE_U)
        lines.append(f"i={i}    {cells}")
    return "\n".join(lines) + "\n"


def format_ccrr_csv(table: dict | None = None) -> str:
    """Long form, one row per entry: ``n,i,u,ccrr`` with n = log2 N."""
    table = table or ccrr_table()
    rows = ["n,i,u,ccrr"]
    for (N, U, i), v in sorted(table.items()):
        rows.append(f"{N.bit_length() - 1},{i},{U},{v:.1f}")
    return "\n".join(rows) + "\n"
