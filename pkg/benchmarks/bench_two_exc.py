"""Benchmark the two-excitation RHS kernel: compiled backend vs NumPy fallback.

Times a single RHS evaluation (averaged over repeats) and a full eta_2
integration at a mid-size mode count, and checks that both backends agree.

Run:  python3 benchmarks/bench_two_exc.py
"""

import time

import numpy as np

import cavitymem as cm
from cavitymem._kernels import BACKEND, make_two_exc_rhs, make_two_exc_rhs_numpy


def time_rhs(rhs, y, omega, repeats=200):
    rhs(y, omega)  # warm-up
    t0 = time.perf_counter()
    for _ in range(repeats):
        rhs(y, omega)
    return (time.perf_counter() - t0) / repeats


def main():
    p = cm.reference_params()
    T_c = 0.5
    T = cm.sech_T_for_coherence_time(T_c)
    ctrl = cm.optimal_control_sech(p, T)
    grid = cm.default_grid(T_c)
    env = cm.sech_envelope(1.0, T)

    print(f"default backend: {BACKEND}")
    print()
    print(f"{'N':>5} {'dim':>8} {'numpy (us)':>12} {'compiled (us)':>14} {'speedup':>8}")
    for N in (77, 155, 311):
        modes = cm.default_mode_grid(p, T_c, N=N)
        dim = 3 + 3 * N + N * (N + 1) // 2
        rng = np.random.default_rng(0)
        y = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        args = (N, modes.detunings, modes.lam, p.g, p.Delta, p.delta,
                p.gamma, p.kappa_loss)
        t_np = time_rhs(make_two_exc_rhs_numpy(*args), y, 8.0)
        row = f"{N:>5} {dim:>8} {t_np * 1e6:>12.1f}"
        if BACKEND == "cython":
            t_cy = time_rhs(make_two_exc_rhs(*args), y, 8.0)
            row += f" {t_cy * 1e6:>14.1f} {t_np / t_cy:>8.2f}x"
        else:
            row += f" {'n/a':>14} {'':>8}"
        print(row)

    print()
    N = 155
    modes = cm.default_mode_grid(p, T_c, N=N)
    alphas = cm.mode_amplitudes(env, modes, grid.t1, grid.t2)
    results = {}
    for backend in (["numpy", "cython"] if BACKEND == "cython" else ["numpy"]):
        t0 = time.perf_counter()
        res = cm.integrate_two_excitation(p, modes, alphas, ctrl, grid,
                                          backend=backend)
        dt = time.perf_counter() - t0
        results[backend] = res.eta_2
        print(f"full eta_2 integration, N={N}, backend={backend}: "
              f"eta_2={res.eta_2:.9f} in {dt:.2f}s")
    if len(results) == 2:
        diff = abs(results["numpy"] - results["cython"])
        print(f"backend agreement: |delta eta_2| = {diff:.3e}")
        assert diff < 1e-10, "backends disagree"


if __name__ == "__main__":
    main()
