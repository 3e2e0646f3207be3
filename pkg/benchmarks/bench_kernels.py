"""Benchmark the numba kernels against the pure-numpy fallbacks.

Run: python benchmarks/bench_kernels.py
The package itself dispatches per the QETSIM_NUMBA env flag; this script
always times both implementations side by side, plus one end-to-end
shot-sampling run for scale.
"""

from __future__ import annotations

import time

import numpy as np

from qetsim import _kernels


def time_fn(fn, *args, warmup=3, runs=20):
    for _ in range(warmup):
        fn(*args)
    samples = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - t0)
    return np.mean(samples) * 1e6, np.std(samples) * 1e6  # microseconds


def random_state(n, rng):
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return amps / np.linalg.norm(amps)


def bench_kernels():
    rng = np.random.default_rng(0)
    print(f"package backend: {_kernels.backend_name()}")
    if not _kernels.HAS_NUMBA:
        print("numba not importable; nothing to compare")
        return
    print(f"{'kernel':<12} {'qubits':>6} {'numpy (us)':>16} {'numba (us)':>16} {'speedup':>8}")
    for n in (8, 11, 14):
        amps = random_state(n, rng)
        x = int(rng.integers(0, 2**n))
        z = int(rng.integers(0, 2**n))
        phase = 1j ** bin(x & z).count("1")
        idx = np.arange(2**n, dtype=np.int64)

        cases = [
            ("apply_word",
             (_kernels.apply_word_numpy, _kernels.apply_word_numba),
             (amps, x, z, phase)),
            ("expect_word",
             (_kernels.expect_word_numpy, _kernels.expect_word_numba),
             (amps, x, z, phase)),
            ("pauli_eigs",
             (_kernels.pauli_eigs_numpy, _kernels.pauli_eigs_numba),
             (idx, z)),
        ]
        for name, (np_fn, nb_fn), args in cases:
            np_mean, np_std = time_fn(np_fn, *args)
            nb_mean, nb_std = time_fn(nb_fn, *args)
            speedup = np_mean / nb_mean if nb_mean > 0 else float("inf")
            print(f"{name:<12} {n:>6} {np_mean:>10.1f} +- {np_std:<4.1f} "
                  f"{nb_mean:>10.1f} +- {nb_std:<4.1f} {speedup:>7.2f}x")


def bench_sampling():
    from qetsim.model import StarModelParams, star_model
    from qetsim.sampler import ShotPlan, sample_protocol

    bundle, ground = star_model(StarModelParams(9.0, 2.0, 10))
    plan = ShotPlan(basis_run="Z", shots=1_000_000, master_seed=1)
    t0 = time.perf_counter()
    sample_protocol(bundle, ground, (1, 2), plan)
    dt = time.perf_counter() - t0
    print(f"\nend-to-end: {plan.shots} shots on the 10-qubit star in {dt:.2f}s "
          f"({plan.shots / dt / 1e6:.1f}M shots/s)")


if __name__ == "__main__":
    bench_kernels()
    bench_sampling()
