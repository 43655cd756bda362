"""Compare the compiled and pure-Python integer kernels.

    python benchmarks/bench_kernels.py [--types A4 D4 E6] [--repeat 3]

Two measurements per type: the raw kernels on the matrices that absolute-order
tests actually see, and end-to-end lattice + shelling + phi. The end-to-end
number runs each backend in a fresh interpreter because the backend is chosen
at import time.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

from coxcluster import _pykernels, context
from coxcluster.ncp_lattice import enumerate_ncp

try:
    from coxcluster import _kernels
except ImportError:
    _kernels = None

PIPELINE = """
import time
from coxcluster import context, kernels
from coxcluster.cluster_complex import phi_preimage, shelling_order
from coxcluster.ncp_lattice import enumerate_ncp
t0 = time.perf_counter()
ctx = context({name!r})
lat = enumerate_ncp(ctx)
rec = shelling_order(ctx)
for r in rec.records:
    phi_preimage(ctx, r.phi_image)
print(kernels.BACKEND, time.perf_counter() - t0)
"""


def kernel_workload(name):
    ctx = context(name)
    lat = enumerate_ncp(ctx)
    g = ctx.gamma.mat
    mats = [w.mat for w in lat.elements]
    refl = [ctx.refl_at(i).mat for i in ctx.positive_indices()]
    return ctx.n, g, mats, refl


def time_kernels(mod, n, g, mats, refl, repeat):
    def work():
        for a in mats:
            mod.rank_diff(a, g, n)
            for r in refl[:8]:
                mod.matmul(a, r, n)
    return min(timeit.repeat(work, number=1, repeat=repeat))


def time_pipeline(name, pure):
    env = dict(os.environ)
    if pure:
        env["COXCLUSTER_PURE_PYTHON"] = "1"
    else:
        env.pop("COXCLUSTER_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", PIPELINE.format(name=name)],
                         env=env, capture_output=True, text=True, check=True)
    backend, secs = out.stdout.split()
    return backend, float(secs)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--types", nargs="+", default=["A4", "D4", "F4", "E6"])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if _kernels is None:
        print("compiled kernels are not built; only the Python backend is available")
    print(f"{'type':<5} {'kernel py (ms)':>15} {'kernel cy (ms)':>15} {'x':>6}"
          f" {'pipeline py (s)':>16} {'pipeline cy (s)':>16} {'x':>6}")
    for name in args.types:
        n, g, mats, refl = kernel_workload(name)
        kp = time_kernels(_pykernels, n, g, mats, refl, args.repeat) * 1e3
        kc = time_kernels(_kernels, n, g, mats, refl, args.repeat) * 1e3 if _kernels else float("nan")
        _, pp = time_pipeline(name, pure=True)
        backend, pc = time_pipeline(name, pure=False)
        if backend != "cython":
            pc = float("nan")
        print(f"{name:<5} {kp:15.1f} {kc:15.1f} {kp / kc:6.1f} {pp:16.2f} {pc:16.2f} {pp / pc:6.1f}")


if __name__ == "__main__":
    main()
