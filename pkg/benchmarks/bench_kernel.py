"""Compare the compiled and pure-Python candidate filters.

Filters every program of size <= 2 from the two-variable max grammar
against a store of random points, then times a full enumeration run.
"""

import argparse
import random
import time

from sygus_forge import kernel, terms as T
from sygus_forge.cegis import synthesize_cegis
from sygus_forge.enumerator import enumerate_layer
from sygus_forge.grammar import example_grammar
from sygus_forge.problem import Conjecture
from sygus_forge.terms import Sort


def max_property():
    x, y = T.Var("x"), T.Var("y")
    call = T.Call("f", (x, y), Sort.INT)
    return T.conj([T.geq(call, x), T.geq(call, y), T.or_(T.eq(call, x), T.eq(call, y))])


def filter_pass(backends, n_points, repeat, seed):
    g = example_grammar()
    rng = random.Random(seed)
    points = kernel.PointMatrix(("x", "y"))
    for _ in range(n_points):
        points.append({"x": rng.randint(-1000, 1000), "y": rng.randint(-1000, 1000)})
    prop = kernel.compile_term(max_property(), {"x": 0, "y": 1}, "f")
    codes = [kernel.compile_program(p, g, {"x": 0, "y": 1}) for k in range(3) for p in enumerate_layer(g, "S", k)]
    results = {}
    for b in backends:
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            out = [kernel.first_failure(prop, c, points, b) for c in codes]
            best = min(best, time.perf_counter() - t0)
        results[b] = (best, out)
    return len(codes), results


def end_to_end(backends, repeat):
    params = (("x", Sort.INT), ("y", Sort.INT))
    c = Conjecture("f", params, Sort.INT, params, max_property(), example_grammar())
    times = {}
    for b in backends:
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            synthesize_cegis(c, backend=b)
            best = min(best, time.perf_counter() - t0)
        times[b] = best
    return times


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if kernel.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the Python filter only")
    n, res = filter_pass(backends, args.points, args.repeat, args.seed)
    print(f"filter: {n} programs x {args.points} points (best of {args.repeat})")
    for b, (secs, _) in res.items():
        print(f"  {b:<7} {secs * 1000:9.1f} ms")
    if len(res) == 2:
        assert res["python"][1] == res["cython"][1], "backends disagree"
        print(f"  speedup {res['python'][0] / res['cython'][0]:.1f}x")
    e2e = end_to_end(backends, args.repeat)
    print("max synthesis, enumeration mode:")
    for b, secs in e2e.items():
        print(f"  {b:<7} {secs * 1000:9.1f} ms")


if __name__ == "__main__":
    main()
