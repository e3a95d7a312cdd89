"""Compiled vs numpy segment-product kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Times a full 600 x 400 twist-plot row sweep and a batch of single-energy
calls (the scalar path used by verification) on both backends.
"""

import argparse
import math
import timeit
from fractions import Fraction

import numpy as np

from cantorscatter import _pykernels, build_stage, validate_params

try:
    from cantorscatter import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = {"python": _pykernels, "cython": _ckernels}


def cases():
    phi = np.linspace(0.02, math.sqrt(9 * math.pi**2 - 0.25), 600)
    for N, S in ((6, 1), (5, 2), (6, 3)):
        p = validate_params(N, Fraction(1, 7), Fraction(1, 50), S)
        stack = build_stage(p)
        a = float(p.finest_well)
        yield f"N={N} S={S} ({len(stack)} segs)", stack, phi / a, np.hypot(phi, 0.5) / a


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    available = {k: v for k, v in BACKENDS.items() if v is not None}
    print(f"{'case':32} {'calls':8} " + " ".join(f"{k:>12}" for k in available) + "   speedup")
    for label, stack, k0, k1 in cases():
        w, m = stack.widths, stack.well_mask
        row = {k: min(timeit.repeat(lambda mod=mod: mod.cell_products(w, m, k0, k1), number=400 // 40,
                                    repeat=args.repeat)) * 40
               for k, mod in available.items()}
        single = {k: min(timeit.repeat(lambda mod=mod: [mod.cell_products(w, m, k0[i:i + 1], k1[i:i + 1])
                                                        for i in range(200)], number=1, repeat=args.repeat))
                  for k, mod in available.items()}
        for path, t in (("600x400", row), ("200x1", single)):
            speed = f"{t['python'] / t['cython']:8.1f}x" if "cython" in t else ""
            print(f"{label:32} {path:8} " + " ".join(f"{t[k] * 1e3:10.2f}ms" for k in available) + speed)


if __name__ == "__main__":
    main()
