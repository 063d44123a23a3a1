"""Compare the compiled and pure-Python kernels.

Each backend runs in its own interpreter (selected through MMS_KERNEL) so
that caches and the one-time multiply binding never leak between them.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, sys, time
from mms.canon import normal_form
from mms.fixtures import laderman, strassen
from mms.kernels import get_kernel
from mms.matrix import space
from mms.symmetry import apply, random_element, triple_from

repeat = int(sys.argv[1])


def best(fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


out = {}
sp = space(3, 2)
kern = get_kernel(3, 2)
out["backend"] = type(kern).__module__
rng = random.Random(0)
gl = sp.gl()
trip = [triple_from(sp, rng.choice(gl), rng.choice(gl), rng.choice(gl)) for _ in range(20000)]
packed = kern.pack(trip)
rows = [tuple(rng.randrange(sp.count) for _ in range(3)) for _ in range(20)]
out["orbit_min 20 rows x 20k triples"] = best(lambda: [kern.orbit_min(r, packed) for r in rows])
out["fixing 20 rows x 20k triples"] = best(lambda: [kern.fixing(r, packed) for r in rows])
pairs = [(rng.randrange(sp.count), rng.randrange(sp.count)) for _ in range(50000)]
out["mul 50k (3x3, GF(2))"] = best(lambda: [kern.mul(a, b) for a, b in pairs])
lad = [apply(random_element(3, 23, 2, k), laderman(2)) for k in range(5)]
out["normal_form Laderman x5"] = best(lambda: [normal_form(s) for s in lad])
st = [apply(random_element(2, 7, 3, k), strassen(3)) for k in range(20)]
out["normal_form Strassen GF(3) x20"] = best(lambda: [normal_form(s) for s in st])
print(json.dumps(out))
"""


def run(backend: str, repeat: int) -> dict:
    env = dict(os.environ, MMS_KERNEL=backend)
    res = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(repeat)], env=env, capture_output=True, text=True
    )
    if res.returncode != 0:
        raise SystemExit(f"{backend} run failed:\n{res.stderr}")
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    py = run("python", args.repeat)
    try:
        cy = run("cython", args.repeat)
    except SystemExit as e:
        print(f"compiled kernel unavailable: {e}")
        cy = None
    keys = [k for k in py if k != "backend"]
    width = max(map(len, keys))
    print(f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for k in keys:
        c = f"{cy[k]:10.4f}" if cy else f"{'-':>10}"
        sp = f"{py[k] / cy[k]:7.1f}x" if cy else f"{'-':>8}"
        print(f"{k:<{width}}  {py[k]:10.4f}  {c}  {sp}")


if __name__ == "__main__":
    main()
