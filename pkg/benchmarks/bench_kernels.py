"""Compare the compiled and pure-Python echelon kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--nmax 6]

Workloads: building the multilinear T-ideal components of V3~ (the dominant
cost in practice), the rank of the theta evaluation matrix, and a small dense
random matrix whose entries outgrow int64 (the compiled kernel then hands
over to Python integers, so both columns should be close).
"""

import argparse
import random
import statistics
import time

from lbz.kernels import COMPILED_AVAILABLE, Echelon
from lbz.variety import IdealTower, builtin_variety, multilinear_generators


def bench_tideal(backend: str, n: int) -> float:
    tower = IdealTower(multilinear_generators(builtin_variety("V3tilde")), backend)
    start = time.perf_counter()
    tower.level(n)
    return time.perf_counter() - start


def evaluation_rows(n: int):
    from lbz.heisenberg import evaluate, theorem2_assignment
    from lbz.linalg import integer_row
    from lbz.v3basis import enumerate_theta

    thetas = enumerate_theta(n)
    width = 3 + 2 * n + 1
    assignments = [theorem2_assignment(t, n, n) for t in thetas]
    rows = []
    for t in thetas:
        term = t.to_term()
        row = {}
        for col, a in enumerate(assignments):
            for k, c in enumerate(evaluate(term, a).coordinates(width - 3)):
                if c:
                    row[col * width + k] = c
        rows.append(integer_row(row))
    return width * len(thetas), rows


def bench_rows(backend: str, ncols: int, rows) -> float:
    start = time.perf_counter()
    ech = Echelon(ncols, backend)
    for r in rows:
        ech.add(r)
    return time.perf_counter() - start


def bench_random(backend: str, ncols: int, nrows: int, density: float, seed: int) -> float:
    rng = random.Random(seed)
    rows = [{k: rng.randint(-3, 3) or 1 for k in range(ncols) if rng.random() < density} for _ in range(nrows)]
    start = time.perf_counter()
    ech = Echelon(ncols, backend)
    for r in rows:
        ech.add(r)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--nmax", type=int, default=6)
    args = parser.parse_args()
    backends = ["python"] + (["compiled"] if COMPILED_AVAILABLE else [])
    if not COMPILED_AVAILABLE:
        print("compiled kernel not built; timing the Python kernel only")

    cases = [(f"T-ideal V3~ n={n}", lambda b, n=n: bench_tideal(b, n)) for n in range(4, args.nmax + 1)]
    ncols, rows = evaluation_rows(6)
    cases += [
        ("theta evaluation n=6", lambda b: bench_rows(b, ncols, rows)),
        ("random 120x120 overflow", lambda b: bench_random(b, 120, 120, 0.3, 1)),
    ]
    print(f"{'workload':26s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in cases:
        times = [statistics.median(fn(b) for _ in range(args.repeat)) for b in backends]
        line = f"{name:26s}" + "".join(f"{t:11.3f}s" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
