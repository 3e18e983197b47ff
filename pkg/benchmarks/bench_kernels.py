"""Compare the compiled table kernels with the pure-Python fallback.

Runs both saturation kernels on every (U, H) pair of the group corpus, plus
subgroup closure on all pairs of cyclic subgroups, and prints timings.

    python3 benchmarks/bench_kernels.py [--repeat N] [--max-order N]
"""
import argparse
import itertools
import time

from chablab.chabfin import SubgroupLattice
from chablab.chabfin.corpus import corpus
from chablab.kernels import _fallback

try:
    from chablab.kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def workload(max_order: int):
    jobs = []
    for G in corpus(max_order):
        subs = SubgroupLattice(G).subgroups
        A = G.whole.mask()
        masks = [H.mask() for H in subs]
        cyc = [H.mask() for H in G.cyclic_subgroups()]
        jobs.append((G, A, masks, cyc))
    return jobs


def run(impl, jobs):
    out = []
    for G, A, masks, cyc in jobs:
        for u, h in itertools.product(masks, repeat=2):
            out.append(bytes(impl.saturation_formula(G.table, G.inv, G.n, A, u, h)))
            out.append(bytes(impl.saturation_orbit(G.table, G.inv, G.n, A, u, h)))
        for a, b in itertools.product(cyc, repeat=2):
            seed = bytes(x | y for x, y in zip(a, b))
            out.append(bytes(impl.closure(G.table, G.n, seed)))
    return out


def best_of(impl, jobs, repeat: int) -> tuple[float, list]:
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = run(impl, jobs)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-order", type=int, default=24)
    args = ap.parse_args()
    jobs = workload(args.max_order)
    pairs = sum(len(m) ** 2 for _, _, m, _ in jobs)
    print(f"{len(jobs)} groups, {pairs} (U, H) pairs")
    t_py, r_py = best_of(_fallback, jobs, args.repeat)
    print(f"python  {t_py:8.3f}s")
    if _ckernels is None:
        print("cython  (extension not built)")
        return
    t_c, r_c = best_of(_ckernels, jobs, args.repeat)
    print(f"cython  {t_c:8.3f}s  speedup x{t_py / t_c:.1f}")
    print("results agree" if r_py == r_c else "RESULTS DIFFER")


if __name__ == "__main__":
    main()
