"""Time the pure-Python kernels against the compiled ones.

Runs each kernel on the same inputs under both backends and prints a small
table with the per-call medians and the speedup. An optional end-to-end row
times a whole alternating-sum verification in a subprocess per backend, since
backend choice is fixed at import time.
"""

from __future__ import annotations

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from weightlab._kernels import pure
from weightlab.dsl import parse_group_spec

try:
    from weightlab._kernels import core
except ImportError:
    core = None


def _timed(fn, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def _kernel_cases(spec: str):
    group = parse_group_spec(spec)
    gens = np.array([p.images for p in group.generators], dtype=np.int32)
    elems = group._elems
    table = group.table
    orders = group.orders
    n = elems.shape[0]
    sub_seed = np.array([1, n // 2], dtype=np.int32)
    yield "perm_closure", lambda k: k.perm_closure(gens, 0)
    yield "mult_table", lambda k: k.mult_table(elems)
    yield "element_orders", lambda k: k.element_orders(table)
    yield "subgroup_closure", lambda k: k.subgroup_closure(table, sub_seed)
    yield "conj_classes", lambda k: k.conj_classes(table, group.inv)
    yield "class_matrix", lambda k: k.class_matrix(
        table, group.classes.class_of, 1 % group.classes.num_classes
    )
    yield "centralizer_idx", lambda k: k.centralizer_idx(table, 1 % n)
    yield "normalizer_idx", lambda k: k.normalizer_idx(
        table, group.inv, sub_seed.astype(np.int64)
    )


def _end_to_end(spec: str, p: int, pure_only: bool) -> float:
    script = (
        "import time; t0 = time.perf_counter()\n"
        "from weightlab.blocks import p_blocks\n"
        "from weightlab.chains import awc_sum\n"
        "from weightlab.dsl import parse_group_spec\n"
        "from weightlab.session import Session\n"
        f"s = Session(); g = s.intern(parse_group_spec({spec!r}))\n"
        f"part = p_blocks(g, {p}, session=s)\n"
        f"assert all(awc_sum(g, {p}, b, session=s).passed for b in part.blocks)\n"
        "print(time.perf_counter() - t0)\n"
    )
    env = dict(os.environ)
    if pure_only:
        env["WEIGHTLAB_PURE"] = "1"
    else:
        env.pop("WEIGHTLAB_PURE", None)
    out = subprocess.run(
        [sys.executable, "-c", script], env=env, capture_output=True, text=True,
        check=True,
    )
    return float(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--group", default="S(6)", help="group spec for the kernel rows")
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats per row")
    parser.add_argument("--end-to-end", action="store_true",
                        help="also time a full verification per backend (subprocesses)")
    parser.add_argument("--e2e-group", default="S(5)")
    parser.add_argument("--e2e-prime", type=int, default=2)
    args = parser.parse_args()

    if core is None:
        print("compiled backend not importable; nothing to compare", file=sys.stderr)
        return 1

    print(f"kernel timings on {args.group} (median of {args.repeat} runs)")
    print(f"{'kernel':<18} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for name, call in _kernel_cases(args.group):
        t_pure = _timed(lambda: call(pure), args.repeat)
        t_core = _timed(lambda: call(core), args.repeat)
        ratio = t_pure / t_core if t_core > 0 else float("inf")
        print(f"{name:<18} {t_pure * 1e3:>10.2f}ms {t_core * 1e3:>10.2f}ms {ratio:>8.1f}x")

    if args.end_to_end:
        t_pure = _end_to_end(args.e2e_group, args.e2e_prime, pure_only=True)
        t_core = _end_to_end(args.e2e_group, args.e2e_prime, pure_only=False)
        print(f"\nfull sweep on {args.e2e_group}, p={args.e2e_prime} "
              f"(one subprocess each, includes import time)")
        print(f"{'verify':<18} {t_pure * 1e3:>10.2f}ms {t_core * 1e3:>10.2f}ms "
              f"{t_pure / t_core:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
