"""Command-line front end.

Exit codes: 0 when every invariant held, 2 when a theory check failed
(``TheoryFalsified`` or a lemma violation), 1 on usage errors.  The worker
thread count comes from the ``DUALFSIG_THREADS`` environment variable; output
never depends on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from .agl_group import bar_h1, is_pseudo_reflection, symmetric_group
from .criteria import CSV_FIELDS, DEFAULT_SUITE_CAPS, classify, run_surjlab_suite
from .gfp_linalg import PrimeField, is_prime
from .kg_modules import (
    Representation,
    TheoryFalsified,
    cover_map_surjective,
    decompose_degree,
    fl_report,
    h1_lhs,
    h1_table,
)

THREADS_ENV = "DUALFSIG_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be >= 1")
    return n


@contextmanager
def executor():
    n = thread_count()
    if n == 1:
        yield None
        return
    with ThreadPoolExecutor(max_workers=n) as ex:
        yield ex


def _odd_prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if p == 2 or not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not an odd prime")
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"{n} must be >= 1")
    return n


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"{n} must be >= 0")
    return n


def _int_list(kind):
    def parse(text: str) -> list[int]:
        return [kind(x) for x in text.replace(",", " ").split()]

    return parse


# ---------------------------------------------------------------------------
# rendering


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def render_rows(rows: list[dict], fields: list[str], fmt: str) -> str:
    if fmt == "json":
        return dump_json(rows if len(rows) != 1 else rows[0])
    cells = [[_cell(r.get(f)) for f in fields] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        w.writerows(cells)
        return buf.getvalue()
    widths = [max(len(f), *(len(c[i]) for c in cells)) for i, f in enumerate(fields)]
    lines = ["  ".join(f.ljust(w) for f, w in zip(fields, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> str:
    with executor() as ex:
        row = classify(args.p, args.r, args.max_degree, ex)
    return render_rows([row.to_dict()], CSV_FIELDS, args.format)


def cmd_grid(args) -> str:
    pairs = [(p, r) for p in args.p_list for r in args.r_list]
    with executor() as ex:
        if ex is None:
            rows = [classify(p, r, args.max_degree) for p, r in pairs]
        else:
            rows = list(ex.map(lambda pr: classify(pr[0], pr[1], args.max_degree), pairs))
    return render_rows([r.to_dict() for r in rows], CSV_FIELDS, args.format)


def decomposition_record(p: int, r: int, d: int) -> dict:
    rep = decompose_degree(p, r, d)
    return {
        "p": p,
        "r": r,
        "d": d,
        "dimBd": rep.dim_bd,
        "trivial": rep.trivial,
        "proj": {str(j): m for j, m in sorted(rep.proj.items())},
        "h1_radPnu": h1_table(p, r, d, "radPnu"),
        "coverSurjective": cover_map_surjective(p, r, d),
    }


DECOMP_FIELDS = ["p", "r", "d", "dimBd", "trivial", "proj", "h1_radPnu", "coverSurjective"]


def cmd_decompose(args) -> str:
    return render_rows([decomposition_record(args.p, args.r, args.degree)], DECOMP_FIELDS, args.format)


def cmd_cohomology(args) -> str:
    degrees = range(args.max_degree + 1)
    with executor() as ex:
        fn = lambda d: {"p": args.p, "r": args.r, "module": args.module, "d": d,
                        "h1": h1_table(args.p, args.r, d, args.module)}
        rows = [fn(d) for d in degrees] if ex is None else list(ex.map(fn, degrees))
    if args.format == "json":
        return dump_json(rows)
    return render_rows(rows, ["p", "r", "module", "d", "h1"], args.format)


def cmd_fl(args) -> str:
    v = fl_report(args.p, args.r)
    out = v.to_dict()
    out["p"], out["r"] = args.p, args.r
    out["sum"] = str(sum(v.coeffs.values()))
    return dump_json(out)


def _parse_caps(items: list[str] | None) -> dict | None:
    if items is None:
        return None
    caps = {}
    for item in items:
        for part in item.split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise UsageError(f"cap {part!r} is not of the form key=value")
            key, val = part.split("=", 1)
            key = key.strip()
            if key not in DEFAULT_SUITE_CAPS:
                raise UsageError(f"unknown cap {key!r}; known: {sorted(DEFAULT_SUITE_CAPS)}")
            try:
                caps[key] = int(val)
            except ValueError:
                raise UsageError(f"cap {key} needs an integer value")
    return caps


def cmd_surjlab(args):
    caps = _parse_caps(args.caps)
    with executor() as ex:
        report = run_surjlab_suite(args.seed, caps, ex)
    return dump_json(report), (2 if report["violations"] else 0)


def permutation_rep(G, p: int) -> Representation:
    n = len(G.labels[0])
    mats = []
    for s in G.gens:
        perm = G.labels[s]
        m = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            m[perm[x], x] = 1
        mats.append(m)
    return Representation(G, mats, PrimeField(p), name="perm")


def example_p2_record() -> dict:
    F = PrimeField(2)
    out = {"p": 2, "groups": []}
    for n in (2, 3):
        G = symmetric_group(n)
        k = Representation(G, [F.identity(1)] * len(G.gens), F, name="k")
        V = permutation_rep(G, 2)
        pseudo = any(is_pseudo_reflection(g, V) for g in G.elements if g != G.identity)
        out["groups"].append(
            {
                "group": f"S_{n}",
                "order": G.order,
                "h1_k": bar_h1(G, k),
                "permutation_rep_has_pseudo_reflection": pseudo,
            }
        )
    return out


def cmd_example_p2(args) -> str:
    return dump_json(example_p2_record())


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dualfsig", description="Dual F-signature positivity workbench.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify the invariant ring for one (p, r)")
    c.add_argument("--p", type=_odd_prime, required=True)
    c.add_argument("--r", type=_positive, required=True)
    c.add_argument("--max-degree", type=_nonneg, default=None)
    c.add_argument("--format", choices=["json", "csv", "table"], default="json")
    c.set_defaults(func=cmd_classify)

    g = sub.add_parser("grid", help="classification table over several (p, r)")
    g.add_argument("--p-list", type=_int_list(_odd_prime), required=True)
    g.add_argument("--r-list", type=_int_list(_positive), required=True)
    g.add_argument("--max-degree", type=_nonneg, default=None)
    g.add_argument("--format", choices=["json", "csv", "table"], default="csv")
    g.set_defaults(func=cmd_grid)

    d = sub.add_parser("decompose", help="summands of B_d")
    d.add_argument("--p", type=_odd_prime, required=True)
    d.add_argument("--r", type=_positive, required=True)
    d.add_argument("--degree", type=_nonneg, required=True)
    d.add_argument("--format", choices=["json", "csv", "table"], default="json")
    d.set_defaults(func=cmd_decompose)

    h = sub.add_parser("cohomology", help="dim H^1(G, B_d (x) W) per degree")
    h.add_argument("--p", type=_odd_prime, required=True)
    h.add_argument("--r", type=_positive, required=True)
    h.add_argument("--module", choices=["radPnu", "B", "k"], default="radPnu")
    h.add_argument("--max-degree", type=_nonneg, required=True)
    h.add_argument("--format", choices=["json", "csv", "table"], default="table")
    h.set_defaults(func=cmd_cohomology)

    f = sub.add_parser("fl", help="Frobenius limit of the canonical module")
    f.add_argument("--p", type=_odd_prime, required=True)
    f.add_argument("--r", type=_positive, default=1)
    f.set_defaults(func=cmd_fl)

    s = sub.add_parser("surjlab", help="run the surjective-number lemma suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--caps", nargs="*", default=None, metavar="KEY=VALUE",
                   help=f"override suite caps; keys: {', '.join(sorted(DEFAULT_SUITE_CAPS))}; "
                        "an empty list runs nothing")
    s.set_defaults(func=cmd_surjlab)

    e = sub.add_parser("example-p2", help="H^1(S_n, k) over F_2 for n = 2, 3")
    e.set_defaults(func=cmd_example_p2)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except TheoryFalsified as exc:
        where = f" (degree {exc.degree})" if exc.degree is not None else ""
        print(f"theory falsified{where}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    text, code = result if isinstance(result, tuple) else (result, 0)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
