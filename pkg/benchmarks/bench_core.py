"""Time the compiled core against the numpy fallback.

    python3 benchmarks/bench_core.py --n 1000 --realizations 20

Both backends must produce identical edges and statistics; the script checks
that before reporting times.
"""

import argparse
import statistics
import time

import numpy as np

import addgraph as ag
from addgraph import _backend
from addgraph.rng import realization_seed, stream_keys


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--gamma", type=float, default=2.5)
    parser.add_argument("--kmin", type=int, default=4)
    parser.add_argument("--kmax", type=int, default=100)
    parser.add_argument("--realizations", type=int, default=20, help="ensemble size")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)

    seq = ag.sample_power_law(args.n, ag.PowerLawParams(args.gamma, args.kmin, args.kmax), args.seed)
    kernel = ag.kernel_for_sequence("additive", seq, "clamp")
    kind, a, b = kernel.core_params
    key_a, key_b = stream_keys(realization_seed(args.seed, 0))
    degrees = seq.degrees.astype(np.float64)

    names = _backend.available()
    print(f"n={seq.n} z={seq.avg_degree:.3f} backends={names} active={ag.BACKEND}")

    drawn = {name: _backend.get(name).draw_edges(degrees, kind, a, b, key_a, key_b) for name in names}
    ref_u, ref_v = drawn[names[0]]
    for name, (u, v) in drawn.items():
        assert np.array_equal(u, ref_u) and np.array_equal(v, ref_v), f"{name} edges differ"
    stats = {name: _backend.get(name).vertex_stats(seq.n, ref_u, ref_v) for name in names}
    for name, st in stats.items():
        for x, y in zip(st, stats[names[0]]):
            assert np.array_equal(x, y), f"{name} vertex stats differ"
    print(f"outputs identical across backends ({ref_u.size} edges)")

    print(f"{'task':<28}{'backend':<10}{'best s':>10}{'median s':>10}")
    results = {}
    for name in names:
        impl = _backend.get(name)
        tasks = [
            ("draw_edges", lambda: impl.draw_edges(degrees, kind, a, b, key_a, key_b), args.repeat),
            ("vertex_stats", lambda: impl.vertex_stats(seq.n, ref_u, ref_v), args.repeat),
            (f"ensemble x{args.realizations}",
             lambda: ag.run_ensemble(seq, kernel, args.realizations, args.seed, backend=name), 1),
        ]
        for task, fn, repeat in tasks:
            best, med = best_of(fn, repeat)
            results[task, name] = best
            print(f"{task:<28}{name:<10}{best:>10.4f}{med:>10.4f}")
    if len(names) > 1:
        fast, slow = names
        for task in dict.fromkeys(t for t, _ in results):
            print(f"speedup {task}: {results[task, slow] / results[task, fast]:.1f}x")


if __name__ == "__main__":
    main()
