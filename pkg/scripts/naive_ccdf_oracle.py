"""Independent conventional-SLM Monte Carlo using numpy's FFT.

Shares no code with the package: its own constellation, RNG stream and
transform. Prints the PAPR exceeded with probability 1e-1 and 1e-2, which
tests/test_mc_sim.py freezes as a sanity anchor for the harness.

    python scripts/naive_ccdf_oracle.py --n 64 --u 4 --trials 100000
"""
import argparse

import numpy as np


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--u", type=int, default=4)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=12345)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    levels = np.array([-3, -1, 1, 3]) / np.sqrt(10)
    N, U = args.n, args.u
    P = np.ones((U, N), complex)
    P[1:] = np.array([1, -1, 1j, -1j])[rng.integers(0, 4, (U - 1, N))]
    best = []
    for start in range(0, args.trials, 5000):
        b = min(5000, args.trials - start)
        X = levels[rng.integers(0, 4, (b, N))] + 1j * levels[rng.integers(0, 4, (b, N))]
        p = np.abs(np.fft.ifft(X[:, None, :] * P, axis=-1)) ** 2
        best.append(10 * np.log10((p.max(-1) / p.mean(-1)).min(-1)))
    best = np.concatenate(best)
    for level in (1e-1, 1e-2):
        print(f"CCDF {level:g}: {np.quantile(best, 1 - level):.4f} dB")


if __name__ == "__main__":
    main()
