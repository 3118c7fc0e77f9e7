"""``arraybound`` command line: thin wrappers that print table, JSON or CSV reports.

Exit codes: 0 success, 2 usage or validation error, 3 budget exceeded,
4 diagnostic-negative finding.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import arrays, basis, decomposition, ma, scheme
from .errors import ArrayboundError, ParseError, ResourceLimit, ValidationError
from .formula import free_vars, parse_formula, to_text
from .qftypes import enumerate_types, isolating_formula, qf_type
from .structure import GENERATORS, generate, halfgraph_b, parse_structure, reduct, serialize_structure

SCHEMA = "arraybound/1"
MAX_VARS = 16
BANNER = "finite-proxy, non-conclusive"


class UsageError(Exception):
    pass


class Outcome:
    def __init__(self, payload, table, rows=None, code=0):
        self.payload, self.table, self.rows, self.code = payload, table, rows, code


# -- argument helpers ----------------------------------------------------------

def _ints(text, what="element list"):
    if text is None or text.strip() == "":
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad {what}: {text!r}") from None


def _vars(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not (tok.startswith("z") and tok[1:].isdigit() and int(tok[1:]) >= 1):
            raise UsageError(f"bad variable {tok!r}; expected z1, z2, ...")
        out.append(int(tok[1:]) - 1)
    return tuple(out)


def _gen_spec(spec):
    parts = spec.split(":")
    if len(parts) not in (2, 4) or parts[0] not in GENERATORS:
        raise UsageError(f"bad --gen {spec!r}; expected NAME:SIZE[:density:seed] with NAME in {sorted(GENERATORS)}")
    try:
        size = int(parts[1])
        density, seed = (float(parts[2]), int(parts[3])) if len(parts) == 4 else (0.5, 0)
    except ValueError:
        raise UsageError(f"bad --gen {spec!r}") from None
    return parts[0], size, density, seed


def load_structure(args):
    if args.gen and args.file:
        raise UsageError("give either --gen or --file, not both")
    if args.gen:
        name, size, density, seed = _gen_spec(args.gen)
        return generate(name, size, density, seed)
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            return parse_structure(fh.read())
    raise UsageError("a structure is required: --gen NAME:SIZE or --file PATH")


def _source(args):
    return {"gen": args.gen} if args.gen else {"file": args.file}


# -- commands ------------------------------------------------------------------

def cmd_types(args):
    s = load_structure(args)
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    types = enumerate_types(s, args.k, _ints(args.D), allow_long=True)
    items = [{"type": fp.token(), "formula": to_text(isolating_formula(fp)), "realizations": len(r),
              "first": list(r[0])} for fp, r in types.items()]
    table = [f"{len(items)} types of {args.k}-tuples over D={list(_ints(args.D))}"]
    table += [f"  {it['realizations']:>6}  {it['type']}" for it in items]
    rows = [["type", "realizations"]] + [[it["type"], it["realizations"]] for it in items]
    return Outcome({"k": args.k, "D": list(_ints(args.D)), "count": len(items), "types": items}, table, rows)


def _sampler(args, s):
    chosen = [x for x in (args.exhaustive_D, args.random_D, args.chain) if x is not None]
    if len(chosen) != 1:
        raise UsageError("choose exactly one of --exhaustive-D, --random-D, --chain")
    if args.exhaustive_D is not None:
        return arrays.Exhaustive(args.exhaustive_D)
    if args.random_D is not None:
        count, _, size = args.random_D.partition(":")
        try:
            return arrays.SeededRandom(int(count), int(size or 3), args.seed)
        except ValueError:
            raise UsageError(f"bad --random-D {args.random_D!r}; expected COUNT[:MAXSIZE]") from None
    if args.chain.startswith("b:"):
        if not args.gen or not args.gen.startswith("halfgraph:"):
            raise UsageError("--chain b:N needs a halfgraph generator")
        k = _gen_spec(args.gen)[1]
        n = int(args.chain[2:])
        return arrays.Chain(tuple(tuple(halfgraph_b(k, j) for j in range(i)) for i in range(1, n + 1)))
    return arrays.Chain(tuple(_ints(part) for part in args.chain.split(";")))


def cmd_uba(args):
    s = load_structure(args)
    ks = _ints(args.k, "length list") or (1,)
    sampler = _sampler(args, s)
    targets = [(name, reduct(s, [name])) for name in s.signature.relation_names] if args.local else [(None, s)]
    reports, table, rows = [], [], [["relation", "k", "m", "D", "count"]]
    for name, sub in targets:
        prof = arrays.uba_scan(sub, args.m, ks, sampler)
        d = prof.as_dict()
        if name is not None:
            d["relation"] = name
        reports.append(d)
        label = f"[{name}] " if name else ""
        for k, v in sorted(prof.verdicts.items()):
            table.append(f"{label}k={k} m={args.m}: {v.kind} (max count {v.max_count})")
            if v.witness:
                table.append("  witness: " + " < ".join(f"{list(dd)}:{c}" for dd, c in v.witness))
        rows += [[name or "", k, args.m, " ".join(map(str, dd)), c] for dd, k, c in prof.rows]
    table.append(f"note: {BANNER}")
    payload = {"sampler": sampler.describe(), "reports": reports}
    return Outcome(payload, table, rows)


def cmd_ma(args):
    if args.formula is None:
        raise UsageError("--formula is required")
    if args.sizes:
        if not args.gen:
            raise UsageError("--sizes needs --gen to name the family")
        name = _gen_spec(args.gen)[0]
        scan = ma.family_scan(name, _ints(args.sizes, "size list"), args.formula,
                              _vars(args.x) if args.x else None)
        table = [f"n={n}: k={k}" for n, k in zip(scan.sizes, scan.ks)] + [f"flag: {scan.flag}", f"note: {BANNER}"]
        rows = [["size", "k"]] + [[n, k] for n, k in zip(scan.sizes, scan.ks)]
        return Outcome(scan.as_dict(), table, rows)
    s = load_structure(args)
    phi = parse_formula(args.formula, s.signature, MAX_VARS)
    xbar = _vars(args.x) if args.x else tuple(sorted(free_vars(phi)))
    rep = ma.ma_bound(s, phi, xbar)
    table = [f"{to_text(phi)}: k={rep.k}" + (" (vacuous)" if rep.vacuous else "")]
    table += [f"  fix {','.join(f'z{xbar[p] + 1}' for p in part)}: {fib}" for part, fib in rep.per_partition.items()]
    rows = [["fixed", "max_fiber"]] + [[" ".join(f"z{xbar[p] + 1}" for p in part), fib]
                                       for part, fib in rep.per_partition.items()]
    return Outcome(rep.as_dict(), table, rows)


def cmd_decompose(args):
    s = load_structure(args)
    tup, base = _ints(args.tuple), _ints(args.D)
    dec = decomposition.max_ma_decomposition(s, tup, base, args.kappa)
    payload = {"tuple": list(tup), "decomposition": dec.as_dict()}
    table = [f"{list(tup)} over {list(base)}: {dec}"]
    table += [f"  {[f'z{i + 1}' for i in p.positions]} k={p.bound} {p.fingerprint.token()}" for p in dec.pieces]
    code = 0 if dec.ok else 4
    if args.against:
        det = decomposition.check_determination(s, tup, _ints(args.against), base, args.kappa, args.tau)
        payload["determination"] = det.as_dict()
        table.append(f"determination vs {list(_ints(args.against))}: {det.verdict} ({det.reason})")
        if det.verdict == "inconsistent":
            code = 4
    table.append(f"note: {BANNER}")
    return Outcome(payload, table, None, code)


def cmd_scheme(args):
    s = load_structure(args)
    if args.formula is None or args.theta is None or args.y is None:
        raise UsageError("scheme needs --formula, --theta and --y")
    phi = parse_formula(args.formula, s.signature, MAX_VARS)
    theta = parse_formula(args.theta, s.signature, MAX_VARS)
    xbar = _vars(args.x) if args.x else tuple(sorted(free_vars(phi)))
    ybar = _vars(args.y)
    params = scheme.make_scheme(s, phi, xbar, theta, ybar)
    formula = scheme.build_scheme(params)
    agree, total = scheme.scheme_agreement(s, params)
    payload = {"isolator": to_text(phi), "theta": to_text(theta), "m": params.m,
               "array": [list(t) for t in params.array.realizations], "scheme": to_text(formula),
               "agreement": {"agree": agree, "total": total}}
    table = [f"m = {params.m}", f"array: {[list(t) for t in params.array.realizations]}",
             f"scheme: {to_text(formula)}", f"agreement with the array test: {agree}/{total}"]
    return Outcome(payload, table, None, 0 if agree == total else 4)


def cmd_freeproduct(args):
    s = load_structure(args)
    if args.p is None or args.q is None:
        raise UsageError("freeproduct needs --p and --q realizations")
    base = _ints(args.D)
    p, q = qf_type(s, _ints(args.p), base), qf_type(s, _ints(args.q), base)
    rep = scheme.free_product(s, p, q, args.tau)
    table = [f"p = {p.token()}", f"q = {q.token()}", f"p x q = {rep.fingerprint.token()}",
             f"cross-check: {'pass' if rep.cross_check else 'fail'} (witness {rep.witness[0]} + {rep.witness[1]})"]
    payload = {"p": p.token(), "q": q.token(), "product": rep.as_dict()}
    return Outcome(payload, table, None, 0 if rep.cross_check else 4)


def _basis_formulas(args, s):
    out = []
    for text in (args.B or "").split(";"):
        if text.strip():
            f = parse_formula(text, s.signature, MAX_VARS)
            out.append((f, tuple(sorted(free_vars(f)))))
    return out


def cmd_basis(args):
    s = load_structure(args)
    fam = basis.build_basis(s, _basis_formulas(args, s), args.k, _ints(args.D), args.kappa, args.tau)
    table = [f"|B_k| = {fam.size}"]
    for a in fam.assignments:
        body = to_text(a.formula) if a.covered else a.reason
        table.append(f"  {a.type_token}: {body}")
    rows = [["type", "covered", "formula"]] + [[a.type_token, a.covered, to_text(a.formula) if a.covered else ""]
                                               for a in fam.assignments]
    return Outcome(fam.as_dict(), table, rows, 4 if fam.uncovered else 0)


def cmd_gen(args):
    s = load_structure(args)
    text = serialize_structure(s)
    return Outcome({"structure": text}, text.rstrip("\n").splitlines())


COMMANDS = {"types": cmd_types, "uba": cmd_uba, "ma": cmd_ma, "decompose": cmd_decompose, "scheme": cmd_scheme,
            "freeproduct": cmd_freeproduct, "basis": cmd_basis, "gen": cmd_gen}


# -- parser and main -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="arraybound", description="Array and mutual-algebraicity diagnostics for finite structures.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--gen", help="NAME:SIZE[:density:seed]")
        p.add_argument("--file", help="structure file")
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--m", type=int, default=2)
        p.add_argument("--tau", type=int, default=ma.DEFAULT_TAU)
        p.add_argument("--kappa", type=int, default=ma.DEFAULT_KAPPA)
        p.add_argument("--D", default="", help="comma-separated base elements")
        if name == "uba":
            p.add_argument("--k", default="1", help="comma-separated tuple lengths")
            p.add_argument("--exhaustive-D", dest="exhaustive_D", type=int)
            p.add_argument("--random-D", dest="random_D", help="COUNT[:MAXSIZE]")
            p.add_argument("--chain", help="sets separated by ';', or b:N for a halfgraph")
            p.add_argument("--local", action="store_true")
        elif name in ("types", "basis"):
            p.add_argument("--k", type=int, default=1 if name == "types" else 2)
        if name == "basis":
            p.add_argument("--B", help="basis formulas separated by ';'")
        if name in ("ma", "scheme"):
            p.add_argument("--formula")
            p.add_argument("--x", help="variables, e.g. z1,z2")
        if name == "ma":
            p.add_argument("--sizes", help="family sizes, e.g. 5,10,20")
        if name == "scheme":
            p.add_argument("--theta")
            p.add_argument("--y")
        if name == "decompose":
            p.add_argument("--tuple", required=True)
            p.add_argument("--against", help="second tuple for the determination diagnostic")
        if name == "freeproduct":
            p.add_argument("--p")
            p.add_argument("--q")
    return parser


def render(args, out: Outcome) -> str:
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": args.command, "source": _source(args),
               "params": {"m": args.m, "tau": args.tau, "kappa": args.kappa, "seed": args.seed}}
        doc.update(out.payload)
        return json.dumps(doc, indent=2) + "\n"
    if args.format == "csv":
        if out.rows is None:
            raise UsageError(f"{args.command} has no CSV form")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(out.rows)
        return buf.getvalue()
    return "\n".join(out.table) + "\n"


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        out = COMMANDS[args.command](args)
        sys.stdout.write(render(args, out))
        return out.code
    except (UsageError, ValidationError, ParseError) as exc:
        print(f"arraybound: error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimit as exc:
        print(f"arraybound: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except ArrayboundError as exc:
        print(f"arraybound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"arraybound: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
