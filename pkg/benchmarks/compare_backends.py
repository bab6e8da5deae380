"""Compare the compiled kernel backend against the pure-NumPy fallback.

Runs the same attribution jobs under both backends, checks that the results
agree, and prints median/MAD latencies plus the speedup. Work counters are
identical by construction, so wall time is the only axis compared.

Usage: python3 benchmarks/compare_backends.py [--m 512] [--repeats 15]
"""

import argparse
import sys

import numpy as np

from igsched import (
    LogisticScalar,
    MLP2,
    PathSpec,
    SchedulerConfig,
    SharpSigmoid1D,
    TargetSpec,
    Tensor,
    benchmark,
)
from igsched import kernels


def _jobs(m: int):
    rng = np.random.default_rng(11)
    scalar_path = PathSpec(
        input=Tensor(np.ones(1)), baseline=Tensor(np.zeros(1)), target=TargetSpec(1)
    )
    image = Tensor(rng.random((32, 32)))
    image_path = PathSpec(
        input=image, baseline=Tensor(np.zeros((32, 32))), target=TargetSpec(1)
    )
    mlp = MLP2(
        rng.normal(scale=0.5, size=(64, 48)),
        rng.normal(scale=0.1, size=64),
        rng.normal(scale=0.5, size=(10, 64)),
        rng.normal(scale=0.1, size=10),
    )
    mlp_path = PathSpec(
        input=Tensor(rng.random(48)), baseline=Tensor(np.zeros(48)), target=TargetSpec(3)
    )
    return [
        ("sharp-sigmoid 1d", SharpSigmoid1D(), scalar_path, SchedulerConfig(kind="nonuniform", n_int=8)),
        ("logistic 32x32", LogisticScalar(rng.normal(size=1024), input_shape=(32, 32)), image_path, SchedulerConfig(kind="uniform")),
        ("mlp 48-64-10", mlp, mlp_path, SchedulerConfig(kind="uniform")),
    ]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m", type=int, default=512, help="steps per job")
    parser.add_argument("--repeats", type=int, default=15)
    parser.add_argument("--warmup", type=int, default=3)
    args = parser.parse_args(argv)

    if not kernels.COMPILED_AVAILABLE:
        print("compiled backend is not built; nothing to compare", file=sys.stderr)
        return 1

    header = f"{'job':<18} {'backend':<9} {'median_s':>12} {'mad_s':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, model, path, sched in _jobs(args.m):
        medians = {}
        results = {}
        for backend in ("python", "compiled"):
            kernels.use(backend)
            rep = benchmark(model, path, sched, args.m,
                            warmup=args.warmup, repeats=args.repeats)
            medians[backend] = rep.median
            results[backend] = sched.run(model, path, args.m).phi.data
            print(f"{name:<18} {backend:<9} {rep.median:>12.6f} {rep.mad:>12.6f} "
                  f"{'':>8}")
        np.testing.assert_allclose(
            results["python"], results["compiled"], rtol=1e-12, atol=1e-14,
            err_msg=f"backends disagree on {name}",
        )
        speedup = medians["python"] / medians["compiled"]
        print(f"{name:<18} {'':<9} {'':>12} {'':>12} {speedup:>7.2f}x")
    kernels.use("auto")
    return 0


if __name__ == "__main__":
    sys.exit(main())
