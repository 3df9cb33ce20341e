"""Command-line entry point: ``bilpair <subcommand> ...``.

Exit codes: 0 success, 1 verification hard failure, 2 usage or input
error, 3 search budget exceeded (rerun with --force).
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import catalog as cat
from .classify import orbit_partition, report_tsv, write_report
from .cohom import BilinearForm, build_extension, coboundary_space, cohomology
from .equiv import BudgetExceeded, are_equivalent_bruteforce, automorphism_group
from .exactlin import Field, FieldError
from .pair import ParseError, load, radical, serialize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class CliConfig:
    """Parsed command line; ``field`` is None unless overridden."""

    def __init__(self, subcommand, inputs=(), field=None, force=False, out=None, seed=0, extra=None):
        self.subcommand = subcommand
        self.inputs = list(inputs)
        self.field = field
        self.force = force
        self.out = out
        self.seed = seed
        self.extra = extra or {}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prime(text):
    try:
        return Field(int(text))
    except (ValueError, FieldError) as exc:
        raise argparse.ArgumentTypeError(f"--field must be a prime, got {text!r}") from exc


def build_parser():
    ap = _Parser(prog="bilpair", description="Exact computations with bilinear pairs.")
    sub = ap.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def with_file(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file")
        sp.add_argument("--field", type=_prime, help="read the pair over F_p instead")
        return sp

    with_file("radical", "radical dimension and basis")
    with_file("h2", "coboundaries, dim H^2 and class representatives")
    sp = with_file("aut", "automorphism group")
    sp.add_argument("--force", action="store_true")

    sp = sub.add_parser("equiv", help="equivalence witness or 'inequivalent'")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--field", type=_prime)
    sp.add_argument("--force", action="store_true")

    sp = with_file("extend", "build the extension by a cocycle")
    sp.add_argument("--theta", required=True, help='forms in D11..Dnn separated by ";"')
    sp.add_argument("--out")

    sp = with_file("classify", "orbits of Aut on T_s")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--force", action="store_true")

    sp = sub.add_parser("verify-tables", help="check the shipped catalog")
    sp.add_argument("--table", choices=cat.TABLES)
    sp.add_argument("--field", type=_prime, default=Field(7))
    sp.add_argument("--samples", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--force", action="store_true")
    return ap


def parse_args(argv):
    ns = build_parser().parse_args(argv)
    sc = ns.subcommand
    inputs = [ns.a, ns.b] if sc == "equiv" else ([ns.file] if hasattr(ns, "file") else [])
    extra = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "file", "a", "b", "field", "force", "out", "seed")}
    if sc == "verify-tables" and ns.samples < 1:
        raise UsageError("--samples must be positive")
    return CliConfig(sc, inputs, ns.field, getattr(ns, "force", False), getattr(ns, "out", None),
                     getattr(ns, "seed", 0), extra)


# -- helpers ---------------------------------------------------------------------


def _load(path, field):
    try:
        p = load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if field is None or field == p.field:
        return p
    if p.field.is_prime_field:
        raise UsageError(f"{path} is over F_{p.field.modulus}; only rational pairs can be reduced mod p")
    from .pair import BilinearPair

    try:
        return BilinearPair(p.dim, field, p.c)
    except ZeroDivisionError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _matrix_text(m):
    F = m.field
    return "\n".join(" ".join(F.format(x) for x in row) for row in m.rows)


def _vec_text(v, F):
    terms = []
    for k, x in enumerate(v):
        if x:
            terms.append(("" if x == 1 else F.format(x) + "*") + f"e{k + 1}")
    return " + ".join(terms) or "0"


def _threads():
    raw = os.environ.get("BILPAIR_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise UsageError(f"BILPAIR_THREADS must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise UsageError("BILPAIR_THREADS must be at least 1")
        return n
    return os.cpu_count() or 1


def _pmap(fn, jobs):
    jobs = list(jobs)
    workers = min(_threads(), len(jobs))
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps input order, so output does not depend on scheduling
        return list(pool.map(fn, jobs))


# -- subcommands -----------------------------------------------------------------


def cmd_radical(cfg, out):
    p = _load(cfg.inputs[0], cfg.field)
    rad = radical(p)
    basis = ", ".join(_vec_text(v, p.field) for v in rad.basis) or "-"
    print(f"dim {rad.dim}; basis {basis}", file=out)
    return EXIT_OK


def cmd_h2(cfg, out):
    p = _load(cfg.inputs[0], cfg.field)
    n = p.dim
    cob = coboundary_space(p)
    space = cohomology(p)
    print(f"coboundary_dim {cob.dim}", file=out)
    for row in cob.basis:
        print(f"coboundary {BilinearForm.from_vector(row, n, p.field)!r}", file=out)
    print(f"h2_dim {space.h2_dim}", file=out)
    for r in space.representatives:
        print(f"representative {r!r}", file=out)
    return EXIT_OK


def cmd_equiv(cfg, out):
    a = _load(cfg.inputs[0], cfg.field)
    b = _load(cfg.inputs[1], cfg.field)
    if a.field != b.field:
        raise UsageError("the two pairs are over different fields")
    w = are_equivalent_bruteforce(a, b, force=cfg.force)
    if w is None:
        print("inequivalent", file=out)
    else:
        print("equivalent; witness (column k is the image of e_k):", file=out)
        print(_matrix_text(w.phi), file=out)
    return EXIT_OK


def cmd_aut(cfg, out):
    p = _load(cfg.inputs[0], cfg.field)
    group = automorphism_group(p, force=cfg.force)
    print(f"order {group.order}", file=out)
    for k, g in enumerate(group):
        print(f"# {k}", file=out)
        print(_matrix_text(g), file=out)
    return EXIT_OK


def cmd_extend(cfg, out):
    p = _load(cfg.inputs[0], cfg.field)
    try:
        theta = cat.parse_forms(cfg.extra["theta"], p.field, p.dim)
    except (cat.CatalogError, ZeroDivisionError) as exc:
        raise UsageError(f"--theta: {exc}") from exc
    text = serialize(build_extension(p, theta))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_classify(cfg, out):
    p = _load(cfg.inputs[0], cfg.field)
    s = cfg.extra["s"]
    h = cohomology(p).h2_dim
    if not 1 <= s <= h:
        raise UsageError(f"--s must lie in 1..{h} for this base")
    report = orbit_partition(p, s, force=cfg.force)
    name = os.path.splitext(os.path.basename(cfg.inputs[0]))[0]
    if cfg.out:
        write_report(report, cfg.out, name)
    out.write(report_tsv(report, name))
    return EXIT_OK


# verify-tables workers run in child processes, so they take plain tuples


def _entry_job(job):
    id, p, samples, seed, force = job
    r = cat.verify_entry(id, Field(p), samples=samples, seed=seed, force=force)
    rows = []
    if r.skipped:
        rows.append(("entry", id, "-", "-", "skip", r.skipped))
    for s in r.results:
        vals = ",".join(f"{k}={v}" for k, v in sorted(s.values.items())) or "-"
        detail = ";".join(f"{k}={'ok' if v else 'fail'}" for k, v in s.checks.items())
        rows.append(("entry", id, "-", vals, "pass" if s.passed else "FAIL", detail))
    return rows, r.hard_failure


def _base_job(job):
    id, p, samples, seed, force = job
    F = Field(p)
    rows = []
    bad = False
    entry = cat.get_entry(id)
    for values in cat.sample_assignments(entry, F, samples, seed):
        vals = ",".join(f"{k}={F(v)}" for k, v in sorted(values.items())) or "-"
        order, pred = cat.expected_automorphisms(id, values, F)
        group = automorphism_group(cat.instantiate(id, values, F), force=force)
        ok = group.order == order and (pred is None or all(pred(g.rows) for g in group))
        bad |= not ok
        rows.append(("aut", id, "-", vals, "pass" if ok else "FAIL", f"order={group.order};expected={order}"))
    fx = cat.verify_fixture(id, F, samples=samples, seed=seed, force=force)
    for r in fx.results:
        f = r.fixture
        vals = ",".join(f"{k}={v}" for k, v in sorted(r.values.items())) or "-"
        rows.append(("fixture", id, f"{f.kind}:{f.case}", vals, "pass" if r.ok else "FAIL", " | ".join(r.notes)))
        bad |= not r.ok
    return rows, bad


def _pair_vals(va, vb):
    fa = ",".join(f"{k}={v}" for k, v in sorted(va.items())) or "-"
    fb = ",".join(f"{k}={v}" for k, v in sorted(vb.items())) or "-"
    return f"{fa}|{fb}"


def cmd_verify_tables(cfg, out):
    F = cfg.field
    samples, seed = cfg.extra["samples"], cfg.seed
    catalog = cat.load_catalog()
    tables = [cfg.extra["table"]] if cfg.extra["table"] else list(cat.TABLES)
    entries = [e for t in tables if t != "4" for e in catalog.table(t)]
    if "4" in tables:
        bases = [e.id for e in catalog.table("4")]
    else:
        bases = sorted({e.base_ref for e in entries}, key=lambda b: [x.id for x in catalog.table("4")].index(b))

    def job(id):
        return (id, F.modulus, samples, seed, cfg.force)

    results = _pmap(_entry_job, [job(e.id) for e in entries])
    results += _pmap(_base_job, [job(b) for b in bases])
    hard = any(bad for _, bad in results)
    rows = [r for rs, _ in results for r in rs]

    over_budget = False
    for t in tables:
        audit = cat.distinctness_audit(t, F, samples_per_family=1, seed=seed, force=cfg.force)
        for (ia, va), (ib, vb), w in audit.collisions:
            kind = "within" if ia == ib else "cross"
            phi = ";".join(",".join(str(x) for x in r) for r in w.phi.rows)
            rows.append(("audit", f"{ia}~{ib}", kind, _pair_vals(va, vb), "note", f"equivalent over F_{F.modulus} via {phi}"))
        for (ia, va), (ib, vb) in audit.skipped:
            over_budget = True
            rows.append(("audit", f"{ia}~{ib}", "-", _pair_vals(va, vb), "skip", "outside the search budget"))

    print("section\tid\tcase\tvalues\tstatus\tdetail", file=out)
    for r in rows:
        print("\t".join(r), file=out)
    n_fail = sum(r[4] == "FAIL" for r in rows)
    print(f"verify-tables: {len(rows)} rows, {n_fail} failures over F_{F.modulus}", file=sys.stderr)
    if hard:
        return EXIT_FAIL
    if over_budget:
        print("some audit comparisons exceeded the budget; rerun with --force", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


COMMANDS = {
    "radical": cmd_radical,
    "h2": cmd_h2,
    "equiv": cmd_equiv,
    "aut": cmd_aut,
    "extend": cmd_extend,
    "classify": cmd_classify,
    "verify-tables": cmd_verify_tables,
}


def run(argv, out=None):
    out = out or sys.stdout
    try:
        cfg = parse_args(argv)
        return COMMANDS[cfg.subcommand](cfg, out)
    except UsageError as exc:
        print(f"bilpair: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"bilpair: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
