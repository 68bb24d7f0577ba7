"""Compare the compiled sparse-monomial kernel against the pure-Python one.

Each workload runs in a fresh subprocess so the backend choice (driven by
the EFGL_PURE_PYTHON environment variable) is fixed at import time, the
way real sessions see it.

    python3 benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "kernel-mul-300x300": r"""
import json, random, time
from efgl._kernel import mul_dicts, BACKEND
rng = random.Random(1)
a = {(rng.randrange(40), rng.randrange(40)): rng.randrange(-99, 100)
     for _ in range(300)}
b = {(rng.randrange(40), rng.randrange(40)): rng.randrange(-99, 100)
     for _ in range(300)}
t0 = time.perf_counter()
for _ in range(40):
    mul_dicts(a, b, (60, 60), 90, None)
print(json.dumps({"backend": BACKEND, "secs": time.perf_counter() - t0}))
""",
    "chord-law-axioms-cap18": r"""
import json, time
from efgl._kernel import BACKEND
from efgl.fgl import weierstrass_fgl
t0 = time.perf_counter()
checks = weierstrass_fgl(cap=18).check_axioms()
assert all(ok for _, ok, _ in checks)
print(json.dumps({"backend": BACKEND, "secs": time.perf_counter() - t0}))
""",
    "deformation-suite-cap10": r"""
import json, time
from efgl._kernel import BACKEND
from efgl.equivariant import z2_deformation_checks
t0 = time.perf_counter()
checks = z2_deformation_checks(10)
assert all(ok for _, ok, _ in checks)
print(json.dumps({"backend": BACKEND, "secs": time.perf_counter() - t0}))
""",
}


def run_once(code, pure):
    env = dict(os.environ)
    if pure:
        env["EFGL_PURE_PYTHON"] = "1"
    else:
        env.pop("EFGL_PURE_PYTHON", None)
    p = subprocess.run([sys.executable, "-c", code], env=env,
                       capture_output=True, text=True, check=True)
    return json.loads(p.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="take the best of N runs per cell")
    args = ap.parse_args()

    rows = []
    for name, code in WORKLOADS.items():
        cell = {}
        for pure in (False, True):
            best = None
            tag = None
            for _ in range(args.repeat):
                out = run_once(code, pure)
                tag = out["backend"]
                best = out["secs"] if best is None else min(best, out["secs"])
            cell[tag] = best
        rows.append((name, cell))

    width = max(len(n) for n, _ in rows)
    print("%-*s  %10s  %10s  %8s" % (width, "workload", "compiled",
                                     "python", "speedup"))
    for name, cell in rows:
        tags = sorted(cell)
        if len(cell) == 1:
            only = tags[0]
            print("%-*s  only the %r backend is importable (%.3fs)"
                  % (width, name, only, cell[only]))
            continue
        compiled = min(cell[t] for t in tags if t != "python")
        python = cell["python"]
        print("%-*s  %9.3fs  %9.3fs  %7.2fx"
              % (width, name, compiled, python, python / compiled))


if __name__ == "__main__":
    main()
