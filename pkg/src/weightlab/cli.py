"""Command-line interface.

Exit codes: 0 all checks passed, 1 a verification failed, 2 malformed input
or a size cap was hit, 3 the chain budget was exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import k0
from ._kernels import BACKEND
from .blocks import p_blocks
from .chains import DEFAULT_CHAIN_BUDGET, awc_sum, chain_orbits
from .dsl import parse_group_spec
from .errors import (
    BudgetExceeded,
    CapExceeded,
    DslSyntaxError,
    UnsupportedPointStructure,
)
from .pairs import enumerate_ddelta_pairs
from .session import RunConfig, Session

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

DEFAULT_MAX_L = 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _session(args) -> Session:
    config = RunConfig.from_env()
    if getattr(args, "cache", None):
        config.cache_dir = args.cache
    return Session(config)


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in human:
            print(line)


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify_awc(args) -> int:
    session = _session(args)
    group = session.intern(parse_group_spec(args.group))
    if not _is_prime(args.prime):
        print(f"error: {args.prime} is not a prime", file=sys.stderr)
        return EXIT_USAGE
    partition = p_blocks(group, args.prime, session=session)
    reports = [
        awc_sum(group, args.prime, b, budget=args.budget, session=session,
                group_spec=args.group)
        for b in partition.blocks
    ]
    ok = all(r.passed for r in reports)
    human = [f"group {args.group}  order {group.order}  p={args.prime}  backend={BACKEND}"]
    for r in reports:
        human.append(
            f"  block {r.block_index}: defect {r.defect}, sum {r.alternating_sum}, "
            f"expected {r.expected} -> {r.verdict}"
        )
    human.append("verdict: " + ("pass" if ok else "FAIL"))
    _emit(args, {
        "command": "verify-awc",
        "group": args.group,
        "order": group.order,
        "p": args.prime,
        "backend": BACKEND,
        "blocks": [r.to_json() for r in reports],
        "verdict": "pass" if ok else "FAIL",
    }, human)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_functorial(args) -> int:
    session = _session(args)
    group = session.intern(parse_group_spec(args.group))
    if not _is_prime(args.prime):
        print(f"error: {args.prime} is not a prime", file=sys.stderr)
        return EXIT_USAGE
    p = args.prime
    partition = p_blocks(group, p, session=session)
    pairs = enumerate_ddelta_pairs(p, max_order=args.max_l, within=group, session=session)

    block_payloads = []
    human = [
        f"group {args.group}  order {group.order}  p={p}  max-L {args.max_l}  "
        f"pairs {len(pairs)}  backend={BACKEND}"
    ]
    all_ok = True
    for block in partition.blocks:
        awc = awc_sum(group, p, block, budget=args.budget, session=session)
        res = k0.sigma_element(group, p, block, pairs, budget=args.budget, session=session)
        w_checks = []
        w_ok = True
        for pair in pairs:
            if pair.L.order == 1 or pair.key in res.unsupported:
                continue
            data = k0._aut_data(pair, session)
            reps = [int(r) for r in data.aut_pair.as_group().classes.rep_indices]
            for cls_idx, phi in enumerate(reps):
                value = k0.w_fixed_points(group, p, block, pair, phi,
                                          budget=args.budget, session=session)
                w_checks.append({
                    "pair": list(pair.key),
                    "phi_class": cls_idx,
                    "value": value,
                })
                if value != 0:
                    w_ok = False
        coords_ok = all(
            res.element[lab] == 0
            for lab in res.labels
            if lab.l_order > 1 and lab.pair_key not in res.unsupported
        )
        anchor_ok = res.element[
            next(lab for lab in res.labels if lab.l_order == 1 and lab.v_index == 0)
        ] == awc.alternating_sum == awc.expected
        ok = coords_ok and anchor_ok and w_ok
        all_ok = all_ok and ok
        block_payloads.append({
            "group": args.group,
            "p": p,
            "block": block.index,
            "defect": block.defect,
            "awc": awc.alternating_sum,
            "expected": awc.expected,
            "labels": [lab.to_json() for lab in res.labels],
            "coordinates": [res.element[lab] for lab in res.labels],
            "unsupported": [list(k) for k in res.unsupported],
            "w_checks": w_checks,
            "verdict": "pass" if ok else "FAIL",
        })
        skipped = f", unsupported pairs {len(res.unsupported)}" if res.unsupported else ""
        human.append(
            f"  block {block.index}: defect {block.defect}, awc {awc.alternating_sum} "
            f"(expected {awc.expected}), {len(res.labels)} labels, "
            f"{len(w_checks)} w-checks{skipped} -> {'pass' if ok else 'FAIL'}"
        )
    human.append("verdict: " + ("pass" if all_ok else "FAIL"))
    _emit(args, {
        "command": "functorial",
        "group": args.group,
        "order": group.order,
        "p": p,
        "max_L": args.max_l,
        "backend": BACKEND,
        "blocks": block_payloads,
        "verdict": "pass" if all_ok else "FAIL",
    }, human)
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_blocks(args) -> int:
    session = _session(args)
    group = session.intern(parse_group_spec(args.group))
    if not _is_prime(args.prime):
        print(f"error: {args.prime} is not a prime", file=sys.stderr)
        return EXIT_USAGE
    partition = p_blocks(group, args.prime, session=session)
    human = [f"group {args.group}  order {group.order}  p={args.prime}  "
             f"blocks {len(partition.blocks)}"]
    for b in partition.blocks:
        human.append(
            f"  {b.block_id()}: irr {list(b.irr_indices)}, defect {b.defect}, "
            f"l={b.num_simples}{', principal' if b.is_principal else ''}"
        )
    _emit(args, {
        "command": "blocks",
        "group": args.group,
        "p": args.prime,
        "partition": partition.to_json(),
    }, human)
    return EXIT_OK


def cmd_chartable(args) -> int:
    session = _session(args)
    group = session.intern(parse_group_spec(args.group))
    table = session.char_table(group)
    human = [f"group {args.group}  order {group.order}  classes {table.num_irr}"]
    degrees = [int(table.value(i, 0).as_rational()) for i in range(table.num_irr)]
    human.append("  degrees: " + " ".join(map(str, degrees)))
    sizes = [int(s) for s in table.classes.sizes]
    orders = [table.classes.rep_order(j) for j in range(table.num_irr)]
    human.append("  class sizes:  " + " ".join(map(str, sizes)))
    human.append("  class orders: " + " ".join(map(str, orders)))
    if not args.json:
        for i in range(table.num_irr):
            row = "  ".join(str(table.value(i, j)) for j in range(table.num_irr))
            human.append(f"  chi_{i}: {row}")
    _emit(args, {
        "command": "chartable",
        "group": args.group,
        "order": group.order,
        "table": table.to_json(),
    }, human)
    return EXIT_OK


def cmd_chains(args) -> int:
    session = _session(args)
    group = session.intern(parse_group_spec(args.group))
    if not _is_prime(args.prime):
        print(f"error: {args.prime} is not a prime", file=sys.stderr)
        return EXIT_USAGE
    orbits = chain_orbits(group, args.prime, args.budget, session)
    total = sum(o.orbit_size for o in orbits)
    by_len: dict[int, list] = {}
    for o in orbits:
        by_len.setdefault(o.chain.length, []).append(o)
    human = [f"group {args.group}  order {group.order}  p={args.prime}: "
             f"{len(orbits)} orbits, {total} chains"]
    for length in sorted(by_len):
        row = by_len[length]
        human.append(
            f"  length {length}: {len(row)} orbits, {sum(o.orbit_size for o in row)} chains"
        )
    _emit(args, {
        "command": "chains",
        "group": args.group,
        "p": args.prime,
        "orbits": [
            {
                "shape": list(o.chain.shape()),
                "length": o.chain.length,
                "orbit_size": o.orbit_size,
                "stabilizer_order": o.stabilizer.order,
            }
            for o in orbits
        ],
        "total_chains": total,
    }, human)
    return EXIT_OK


def cmd_dpairs(args) -> int:
    session = _session(args)
    if not _is_prime(args.prime):
        print(f"error: {args.prime} is not a prime", file=sys.stderr)
        return EXIT_USAGE
    within = session.intern(parse_group_spec(args.within)) if args.within else None
    pairs = enumerate_ddelta_pairs(args.prime, max_order=args.max_l,
                                   within=within, session=session)
    human = [f"p={args.prime}  max-L {args.max_l}"
             + (f"  within {args.within}" if args.within else "")
             + f": {len(pairs)} pair classes"]
    rows = []
    for pr in pairs:
        data = k0._aut_data(pr, session)
        rows.append({
            **pr.to_json(),
            "semidirect_order": pr.semidirect.order,
            "aut_order": data.aut_pair.order,
            "out_order": data.out_order,
            "num_labels": data.out_table.num_irr,
        })
        human.append(
            f"  |L|={pr.L.order} u^{pr.u_order}: |L:u|={pr.semidirect.order}, "
            f"|Aut|={data.aut_pair.order}, |Out|={data.out_order}, "
            f"labels {data.out_table.num_irr}"
        )
    _emit(args, {
        "command": "dpairs",
        "p": args.prime,
        "max_L": args.max_l,
        "within": args.within,
        "pairs": rows,
    }, human)
    return EXIT_OK


def _corpus_primes(group, spec_field: str) -> list[int]:
    if spec_field.strip() == "auto":
        n = group.order
        out = []
        d = 2
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            out.append(n)
        return out
    primes = [int(tok) for tok in spec_field.replace(",", " ").split()]
    for p in primes:
        if not _is_prime(p):
            raise DslSyntaxError(f"{p} is not a prime")
    return primes


def cmd_corpus(args) -> int:
    try:
        with open(args.file) as fh:
            lines = fh.readlines()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    results = []
    saw_fail = saw_budget = saw_usage = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ";" in line:
            spec, prime_field = (part.strip() for part in line.split(";", 1))
        else:
            spec, prime_field = line, "auto"
        session = _session(args)
        entry = {"line": lineno, "group": spec, "primes": [], "status": "pass"}
        try:
            group = session.intern(parse_group_spec(spec))
            primes = _corpus_primes(group, prime_field)
            entry["order"] = group.order
            entry["primes"] = primes
            for p in primes:
                partition = p_blocks(group, p, session=session)
                for b in partition.blocks:
                    rep = awc_sum(group, p, b, budget=args.budget, session=session,
                                  group_spec=spec)
                    if not rep.passed:
                        entry["status"] = "FAIL"
                        entry.setdefault("failures", []).append(rep.to_json())
                        saw_fail = True
        except (DslSyntaxError, CapExceeded) as exc:
            entry["status"] = "error"
            entry["error"] = str(exc)
            saw_usage = True
        except BudgetExceeded as exc:
            entry["status"] = "budget"
            entry["error"] = str(exc)
            saw_budget = True
        results.append(entry)
        if not args.json:
            extra = f" ({entry.get('error', '')})" if entry["status"] in ("error", "budget") else ""
            print(f"[{entry['status']:>6}] {spec} ; "
                  f"{' '.join(map(str, entry['primes'])) or '-'}{extra}")

    verdict = "FAIL" if saw_fail else ("budget" if saw_budget else
                                       ("error" if saw_usage else "pass"))
    if args.json:
        print(json.dumps({
            "command": "corpus",
            "file": args.file,
            "entries": results,
            "verdict": verdict,
        }, indent=2, sort_keys=True))
    else:
        print(f"verdict: {verdict}")
    if saw_fail:
        return EXIT_FAIL
    if saw_budget:
        return EXIT_BUDGET
    if saw_usage:
        return EXIT_USAGE
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weightlab",
        description="Exact blockwise alternating weight sums and their "
                    "Grothendieck-group refinements for small finite groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, prime=True, budget=True):
        if prime:
            p.add_argument("-p", "--prime", type=int, required=True,
                           help="the prime for blocks and chains")
        if budget:
            p.add_argument("--budget", type=int, default=DEFAULT_CHAIN_BUDGET,
                           help="cap on the raw number of chains visited")
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--cache", default=None,
                       help="cache directory (overrides WEIGHTLAB_CACHE)")

    p_awc = sub.add_parser("verify-awc", help="alternating weight sums per block")
    p_awc.add_argument("group", help="group description, e.g. 'S(4)' or 'C(2) x D(8)'")
    add_common(p_awc)
    p_awc.set_defaults(func=cmd_verify_awc)

    p_fun = sub.add_parser("functorial", help="Grothendieck-group coordinates per block")
    p_fun.add_argument("group")
    p_fun.add_argument("--max-L", dest="max_l", type=int, default=DEFAULT_MAX_L,
                       help="largest |L| to include")
    add_common(p_fun)
    p_fun.set_defaults(func=cmd_functorial)

    p_blk = sub.add_parser("blocks", help="block partition of a group algebra")
    p_blk.add_argument("group")
    add_common(p_blk, budget=False)
    p_blk.set_defaults(func=cmd_blocks)

    p_cht = sub.add_parser("chartable", help="exact character table")
    p_cht.add_argument("group")
    add_common(p_cht, prime=False, budget=False)
    p_cht.set_defaults(func=cmd_chartable)

    p_chn = sub.add_parser("chains", help="orbit census of subgroup chains")
    p_chn.add_argument("group")
    add_common(p_chn)
    p_chn.set_defaults(func=cmd_chains)

    p_dpr = sub.add_parser("dpairs", help="enumerate pair classes (L, u)")
    p_dpr.add_argument("--max-L", dest="max_l", type=int, default=4)
    p_dpr.add_argument("--within", default=None,
                       help="restrict L to subgroups of this group")
    add_common(p_dpr, budget=False)
    p_dpr.set_defaults(func=cmd_dpairs)

    p_cor = sub.add_parser("corpus", help="run verify-awc over a corpus file")
    p_cor.add_argument("file", help="lines of '<group> ; <primes|auto>'")
    add_common(p_cor, prime=False)
    p_cor.set_defaults(func=cmd_corpus)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DslSyntaxError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnsupportedPointStructure as exc:
        print(f"unsupported point structure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
