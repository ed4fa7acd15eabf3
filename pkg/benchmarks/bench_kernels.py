"""Time the compiled kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--pairs 2000] [--repeat 3]

Prints one row per kernel with the best-of-N wall time for each backend
and the speed-up. Also checks that both backends return identical values.
"""

import argparse
import random
import timeit

import numpy as np

from lexrerank import align, kernels
from lexrerank.corpus import ParallelCorpus


def synthetic_estep_input(pairs, max_len, rng):
    src_len = np.array([rng.randint(1, max_len) for _ in range(pairs)], dtype=np.intc)
    tgt_len = np.array([rng.randint(1, max_len) for _ in range(pairs)], dtype=np.intc)
    size = int(np.sum((src_len + 1) * tgt_len))
    link_prob = np.array([rng.uniform(1e-4, 1.0) for _ in range(size)])
    return src_len, tgt_len, link_prob


def synthetic_corpus(pairs, max_len, rng):
    def sent(prefix):
        return tuple(f"{prefix}{rng.randrange(500)}" for _ in range(rng.randint(1, max_len)))
    return ParallelCorpus(tuple((sent("f"), sent("e")) for _ in range(pairs)))


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--pairs", type=int, default=2000, help="sentence pairs in the E-step input")
    ap.add_argument("--max-len", type=int, default=30, help="maximum sentence length")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    try:
        kernels.get_backend("cython")
    except ImportError:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1

    rng = random.Random(args.seed)
    src_len, tgt_len, link_prob = synthetic_estep_input(args.pairs, args.max_len, rng)
    seqs = [[rng.randrange(20) for _ in range(rng.randint(5, 60))] for _ in range(400)]
    corpus = synthetic_corpus(args.pairs // 4, args.max_len, rng)
    cfg = align.TrainConfig(iterations=3)

    def run_estep(backend):
        return lambda: kernels.estep(src_len, tgt_len, link_prob, 0.08, 4.0, True, backend)

    def run_levenshtein(backend):
        return lambda: [kernels.levenshtein(a, b, backend) for a, b in zip(seqs, seqs[1:])]

    def run_train(backend):
        def go():
            saved = kernels._impl
            kernels._impl = kernels.get_backend(backend)
            try:
                return align.train(corpus, cfg)
            finally:
                kernels._impl = saved
        return go

    for name, make in (("estep", run_estep), ("levenshtein", run_levenshtein)):
        a, b = make("cython")(), make("python")()
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if name == "estep" else a == b
        if not same:
            raise SystemExit(f"{name}: backends disagree")
    if align.train(corpus, cfg) != run_train("python")():
        raise SystemExit("train: backends disagree")

    print(f"{'kernel':<12} {'cython s':>10} {'python s':>10} {'speed-up':>9}")
    for name, make in (("estep", run_estep), ("levenshtein", run_levenshtein),
                       ("train x3", run_train)):
        fast = best(make("cython"), args.repeat)
        slow = best(make("python"), args.repeat)
        print(f"{name:<12} {fast:>10.4f} {slow:>10.4f} {slow / fast:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
