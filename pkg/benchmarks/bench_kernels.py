"""Time the exact depth-one solver with the compiled kernels and with the
pure-Python fallback (SHALLOWMINOR_NO_JIT=1), each in a fresh interpreter.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

CASES = {
    "petersen stm-half": "from shallowminor.graph import petersen_graph as G; g = G(); mode = 'stm-half'; flt = None",
    "random n=14 sd1": "from shallowminor.generators import random_graph; import random; g = random_graph(random.Random(1), 14, 0.35); mode = 'sd1'; flt = None",
    "parity r=1, m=4 stm-half (mindeg 3)": (
        "from shallowminor.reductions import Positive1in3Formula, build_parity_reduction, ensure_min_frequency;"
        "from shallowminor.solvers import min_degree_filter;"
        "g = build_parity_reduction(ensure_min_frequency(Positive1in3Formula(4, [(1,2,3),(1,2,4),(1,3,4),(2,3,4)])), 1).graph;"
        "mode = 'stm-half'; flt = min_degree_filter(g, 3)"
    ),
}

RUNNER = """
import json, time
{setup}
from shallowminor.solvers import densest_depth1_exact
densest_depth1_exact(g, mode, flt)  # warm-up, includes compilation
times = []
for _ in range({repeat}):
    t = time.perf_counter()
    s, _ = densest_depth1_exact(g, mode, flt)
    times.append(time.perf_counter() - t)
print(json.dumps([min(times), str(s.density)]))
"""


def run(setup: str, repeat: int, no_jit: bool):
    env = dict(os.environ, SHALLOWMINOR_NO_JIT="1" if no_jit else "")
    out = subprocess.run(
        [sys.executable, "-c", RUNNER.format(setup=setup, repeat=repeat)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':40s} {'numba':>10s} {'python':>10s} {'speedup':>8s}  density")
    for name, setup in CASES.items():
        t_jit, d_jit = run(setup, args.repeat, False)
        t_py, d_py = run(setup, 1, True)
        assert d_jit == d_py, (name, d_jit, d_py)
        print(f"{name:40s} {t_jit:10.4f} {t_py:10.4f} {t_py / t_jit:7.1f}x  {d_jit}")


if __name__ == "__main__":
    main()
