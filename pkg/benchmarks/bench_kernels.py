"""Compare the compiled and pure-Python kernel backends.

Run from the repository root after an editable install::

    python3 benchmarks/bench_kernels.py --n 32 --count 5

Each kernel is timed on inputs taken from sampled surfaces, and both
backends must return the same values.  The last rows time whole
pipelines (census, greedy decomposition) with the backend swapped in.
"""

from __future__ import annotations

import argparse
import contextlib
import time

from pantslab import _pykernels, kernels
from pantslab.curves import _Pool, blow_up
from pantslab.sampler import SampleSpec, sample_surface

NAMES = ("vertex_labels", "component_labels", "min_word", "cut_topology", "bfs01",
         "tree_cycles", "cycle_darts", "forest_cycles", "edge_hash", "dual_path", "as_array")


@contextlib.contextmanager
def use_backend(mod):
    saved = {n: getattr(kernels, n) for n in NAMES}
    for n in NAMES:
        setattr(kernels, n, getattr(mod, n))
    try:
        yield
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _plain(x):
    """Backend results as nested lists, for comparison."""
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    if hasattr(x, "tolist"):
        return x.tolist()
    return x


def kernel_cases(surfaces):
    cases = []
    pairings = [s.pairing for s in surfaces]
    cases.append(("vertex_labels", lambda k: [k.vertex_labels(p) for p in pairings]))
    cases.append(("component_labels", lambda k: [k.component_labels(p) for p in pairings]))
    tris = [list(range(s.n_triangles)) for s in surfaces]
    cases.append(("min_word", lambda k: [k.min_word(p, t) for p, t in zip(pairings, tris)]))
    polys = [blow_up(s, 2, depth=2).poly for s in surfaces]

    def forest(k):
        out = []
        for pol in polys:
            pool = _Pool(pol)
            arr = k.as_array
            args = (arr(list(pool.head)), arr(list(pool.tail)), arr(list(pool.weight)),
                    arr(list(pool.alpha)), arr([1] * pol.n_darts), arr(list(pool.allowed)))
            _, recs = k.forest_cycles(*args, True, -1)
            out.append(sorted(recs))
        return out

    cases.append(("forest_cycles", forest))
    cases.append(("cut_topology",
                  lambda k: [k.cut_topology(pol.alpha, pol.phi, [0] * pol.n_darts) for pol in polys]))
    return cases


def pipeline_cases(n, surfaces):
    from pantslab.canonical import census
    from pantslab.pants import greedy_decomposition

    return [
        ("census n=4", lambda k: len(census(4))),
        (f"greedy n={n}", lambda k: [greedy_decomposition(s).total_length for s in surfaces]),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=32, help="triangles per sampled surface")
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--no-pipeline", action="store_true")
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        raise SystemExit("the compiled extension is not built; run pip install -e . first")
    samples = sample_surface(SampleSpec(args.n, args.count, args.seed, "genus:2-100"))
    surfaces = [x.surface for x in samples]
    cases = kernel_cases(surfaces)
    if not args.no_pipeline:
        cases += pipeline_cases(args.n, surfaces)
    print(f"{'case':<20}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, fn in cases:
        with use_backend(_pykernels):
            tp, rp = timed(lambda: fn(_pykernels), args.repeat)
        with use_backend(kernels.compiled):
            tc, rc = timed(lambda: fn(kernels.compiled), args.repeat)
        if _plain(rp) != _plain(rc):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<20}{tp:>12.4f}{tc:>12.4f}{tp / max(tc, 1e-9):>9.1f}x")


if __name__ == "__main__":
    main()
