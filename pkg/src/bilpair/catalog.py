"""Catalog of the two- to six-dimensional families and a verification harness.

Entries live in ``data/*.bpt`` files.  A ``.bpt`` file is a sequence of
blocks opened by ``id <name>`` (or ``fixture <base> <kind>``) and closed
by ``end``.  Inside a block:

    table 1                      table tag (1, 2, 3, 4 or main)
    label (A3)_3,1               display name
    base A1(alpha)               quotient pair and its arguments
    param alpha                  declared parameter, in order
    constraint α ≠ 0             verbatim annotation, never enforced
    require alpha != 0           predicate enforced on instantiation
    let D = alpha + beta         named helper expression
    dim 3
    e1*e2 = (1-alpha)*e1 + e3    product with symbolic coefficients

Expressions use + - * / with integer literals, parameter names and the
basis symbols e1..en (products) or D11..Dnn (fixture forms).  They are
evaluated exactly in the target field by walking the Python AST; nothing
is passed to eval.
"""

import ast
import functools
import random
import re
from importlib import resources

from .cohom import BilinearForm, coboundary, cohomology
from .equiv import (
    BudgetExceeded,
    are_equivalent_bruteforce,
    invariant_fingerprint,
)
from .exactlin import Field, Matrix, Subspace
from .pair import (
    BilinearPair,
    NothingToDecompose,
    decompose,
    is_witness,
    quotient_by_radical,
    radical,
    strip_radical_components,
)


class CatalogError(ValueError):
    pass


class UnknownEntry(CatalogError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class ConstraintViolation(CatalogError):
    pass


class CharacteristicExcluded(CatalogError):
    pass


GREEK = {"α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta", "λ": "lam", "μ": "mu"}
TABLES = ("1", "2", "3", "4", "main")


# -- expressions -------------------------------------------------------------------

_BASIS_RE = re.compile(r"^e(\d+)$")
_FORM_RE = re.compile(r"^D(\d)(\d)$")


class _Vec(dict):
    """Sparse linear combination of basis symbols."""


def _parse_expr(text):
    try:
        return ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise CatalogError(f"cannot parse expression {text!r}") from exc


def _names(node):
    return {n.id for n in ast.walk(node) if isinstance(n, ast.Name)}


def _literal_denominators(node):
    out = set()
    for n in ast.walk(node):
        if isinstance(n, ast.BinOp) and isinstance(n.op, ast.Div):
            r = n.right
            if isinstance(r, ast.Constant) and isinstance(r.value, int):
                out.add(abs(r.value))
    return out


def _prime_factors(k):
    out = set()
    d = 2
    while d * d <= k:
        while k % d == 0:
            out.add(d)
            k //= d
        d += 1
    if k > 1:
        out.add(k)
    return out


def _scale(F, c, v):
    return _Vec({k: F.mul(c, x) for k, x in v.items()})


def _combine(F, a, b, sign):
    out = _Vec(a)
    for k, x in b.items():
        out[k] = F.add(out.get(k, F.zero), x if sign > 0 else F.neg(x))
    return out


def evaluate(node, field, env):
    """Evaluate a parsed expression to a field element or a _Vec."""
    F = field
    if isinstance(node, str):
        node = _parse_expr(node)
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, int) or isinstance(node.value, bool):
            raise CatalogError(f"unsupported literal {node.value!r}")
        return F(node.value)
    if isinstance(node, ast.Name):
        name = node.id
        if name in env:
            return env[name]
        m = _BASIS_RE.match(name)
        if m:
            return _Vec({int(m.group(1)): F.one})
        m = _FORM_RE.match(name)
        if m:
            return _Vec({(int(m.group(1)), int(m.group(2))): F.one})
        raise CatalogError(f"unknown symbol {name!r}")
    if isinstance(node, ast.UnaryOp):
        v = evaluate(node.operand, F, env)
        if isinstance(node.op, ast.UAdd):
            return v
        if isinstance(node.op, ast.USub):
            return _scale(F, F.neg(F.one), v) if isinstance(v, _Vec) else F.neg(v)
        raise CatalogError("unsupported unary operator")
    if isinstance(node, ast.BinOp):
        a = evaluate(node.left, F, env)
        b = evaluate(node.right, F, env)
        va, vb = isinstance(a, _Vec), isinstance(b, _Vec)
        if isinstance(node.op, (ast.Add, ast.Sub)):
            sign = 1 if isinstance(node.op, ast.Add) else -1
            if va and vb:
                return _combine(F, a, b, sign)
            if not va and not vb:
                return F.add(a, b) if sign > 0 else F.sub(a, b)
            raise CatalogError("cannot add a scalar to a basis combination")
        if isinstance(node.op, ast.Mult):
            if va and vb:
                raise CatalogError("product of two basis combinations")
            if va:
                return _scale(F, b, a)
            if vb:
                return _scale(F, a, b)
            return F.mul(a, b)
        if isinstance(node.op, ast.Div):
            if vb:
                raise CatalogError("division by a basis combination")
            if not b:
                raise ZeroDivisionError("division by zero in catalog expression")
            inv = F.inv(b)
            return _scale(F, inv, a) if va else F.mul(a, inv)
        raise CatalogError("unsupported operator")
    raise CatalogError(f"unsupported expression node {type(node).__name__}")


def holds(node, field, env):
    """Truth value of a predicate built from ==, !=, and, or, not."""
    if isinstance(node, str):
        node = _parse_expr(node)
    if isinstance(node, ast.BoolOp):
        vals = (holds(v, field, env) for v in node.values)
        return all(vals) if isinstance(node.op, ast.And) else any(vals)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
        return not holds(node.operand, field, env)
    if isinstance(node, ast.Compare):
        left = evaluate(node.left, field, env)
        for op, comp in zip(node.ops, node.comparators):
            right = evaluate(comp, field, env)
            if isinstance(op, ast.Eq):
                ok = left == right
            elif isinstance(op, ast.NotEq):
                ok = left != right
            else:
                raise CatalogError("only == and != are allowed in predicates")
            if not ok:
                return False
            left = right
        return True
    raise CatalogError("predicate must be a comparison")


# -- entries -----------------------------------------------------------------------


class Param:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


class CatalogEntry:
    def __init__(self, id):
        self.id = id
        self.table = None
        self.label = id
        self.dim = None
        self.params = []
        self.constraints = []
        self.requires = []
        self.lets = []
        self.products = {}
        self.base_ref = None
        self.base_args = []
        self.char_exclusions = ()

    @property
    def param_names(self):
        return [p.name for p in self.params]

    def __repr__(self):
        return f"CatalogEntry({self.id}, table={self.table}, dim={self.dim})"


class Fixture:
    def __init__(self, entry_id, kind):
        self.entry_id = entry_id
        self.kind = kind
        self.case = entry_id
        self.fixed = {}
        self.when = []
        self.forms = []
        self.orbits = []
        self.s = None

    def __repr__(self):
        return f"Fixture({self.entry_id}, {self.kind}, {self.case})"


_PRODUCT_RE = re.compile(r"^e(\d+)\s*\*\s*e(\d+)\s*=\s*(.+)$")
_BASE_RE = re.compile(r"^([A-Za-z0-9_]+)\s*(?:\((.*)\))?$")


def _split_args(text):
    return [a.strip() for a in text.split(",") if a.strip()]


def parse_bpt(text):
    """Parse a .bpt document into entries and fixtures."""
    entries, fixtures = [], []
    cur = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if cur is None:
                if word == "id":
                    cur = CatalogEntry(rest)
                elif word == "fixture":
                    parts = rest.split()
                    if len(parts) != 2:
                        raise CatalogError("fixture needs an entry id and a kind")
                    cur = Fixture(*parts)
                else:
                    raise CatalogError(f"expected 'id' or 'fixture', got {word!r}")
                continue
            if word == "end":
                (entries if isinstance(cur, CatalogEntry) else fixtures).append(cur)
                cur = None
            elif isinstance(cur, CatalogEntry):
                _entry_line(cur, word, rest, line)
            else:
                _fixture_line(cur, word, rest)
        except CatalogError as exc:
            raise CatalogError(f"line {no}: {exc}") from None
    if cur is not None:
        raise CatalogError("unterminated block at end of file")
    for e in entries:
        _finish_entry(e)
    return entries, fixtures


def _entry_line(e, word, rest, line):
    m = _PRODUCT_RE.match(line)
    if m:
        key = (int(m.group(1)), int(m.group(2)))
        if key in e.products:
            raise CatalogError(f"duplicate product e{key[0]}*e{key[1]}")
        e.products[key] = _parse_expr(m.group(3))
    elif word == "table":
        if rest not in TABLES:
            raise CatalogError(f"unknown table {rest!r}")
        e.table = rest
    elif word == "label":
        e.label = rest
    elif word == "dim":
        e.dim = int(rest)
    elif word == "param":
        e.params.append(Param(rest))
    elif word == "constraint":
        e.constraints.append(rest)
    elif word == "require":
        e.requires.append(_parse_expr(rest))
    elif word == "let":
        name, _, expr = rest.partition("=")
        e.lets.append((name.strip(), _parse_expr(expr)))
    elif word == "base":
        m = _BASE_RE.match(rest)
        if not m:
            raise CatalogError(f"bad base reference {rest!r}")
        e.base_ref = m.group(1)
        e.base_args = [_parse_expr(a) for a in _split_args(m.group(2) or "")]
    else:
        raise CatalogError(f"unknown directive {word!r}")


def _fixture_line(fx, word, rest):
    if word == "case":
        fx.case = rest
    elif word == "fix":
        name, _, expr = rest.partition("=")
        fx.fixed[name.strip()] = _parse_expr(expr)
    elif word == "when":
        fx.when.append(_parse_expr(rest))
    elif word == "form":
        fx.forms.append(_parse_expr(rest))
    elif word == "s":
        fx.s = int(rest)
    elif word == "orbit":
        fx.orbits.append([_parse_expr(part) for part in rest.split(";")])
    else:
        raise CatalogError(f"unknown fixture directive {word!r}")


def _finish_entry(e):
    if e.dim is None or e.table is None:
        raise CatalogError(f"{e.id}: missing dim or table")
    known = set(e.param_names) | {name for name, _ in e.lets}
    nodes = list(e.products.values()) + e.requires + e.base_args + [x for _, x in e.lets]
    for node in nodes:
        for name in _names(node):
            m = _BASIS_RE.match(name)
            if m:
                if not 1 <= int(m.group(1)) <= e.dim:
                    raise CatalogError(f"{e.id}: basis symbol {name} out of range")
            elif name not in known:
                raise CatalogError(f"{e.id}: unknown symbol {name!r}")
    for i, j in e.products:
        if not (1 <= i <= e.dim and 1 <= j <= e.dim):
            raise CatalogError(f"{e.id}: product e{i}*e{j} out of range")
    dens = set()
    for node in nodes:
        dens |= _literal_denominators(node)
    e.char_exclusions = tuple(sorted({q for d in dens for q in _prime_factors(d)}))


class Catalog:
    def __init__(self, entries, fixtures):
        self.entries = {}
        for e in entries:
            if e.id in self.entries:
                raise CatalogError(f"duplicate entry id {e.id}")
            self.entries[e.id] = e
        self.fixtures = list(fixtures)
        for e in self.entries.values():
            if e.base_ref is not None:
                base = self.entries.get(e.base_ref)
                if base is None or base.table != "4":
                    raise CatalogError(f"{e.id}: base {e.base_ref} is not a two-dimensional entry")
                if len(e.base_args) != len(base.params):
                    raise CatalogError(f"{e.id}: base {e.base_ref} takes {len(base.params)} arguments")
                # the base's own literal denominators apply too
                e.char_exclusions = tuple(sorted(set(e.char_exclusions) | set(base.char_exclusions)))
            elif e.table != "4":
                raise CatalogError(f"{e.id}: entries outside Table 4 need a base")
        for fx in self.fixtures:
            if fx.entry_id not in self.entries:
                raise CatalogError(f"fixture for unknown entry {fx.entry_id}")

    def __getitem__(self, id):
        try:
            return self.entries[id]
        except KeyError:
            raise UnknownEntry(f"unknown catalog id {id!r}") from None

    def __contains__(self, id):
        return id in self.entries

    def table(self, tag):
        tag = str(tag)
        return [e for e in self.entries.values() if e.table == tag]

    def fixtures_for(self, entry_id, kind=None):
        return [f for f in self.fixtures if f.entry_id == entry_id and (kind is None or f.kind == kind)]


DATA_FILES = ("table4.bpt", "table1.bpt", "table2.bpt", "table3.bpt", "fixtures.bpt")


@functools.lru_cache(maxsize=None)
def load_catalog():
    entries, fixtures = [], []
    root = resources.files("bilpair") / "data"
    for name in DATA_FILES:
        e, f = parse_bpt((root / name).read_text(encoding="utf-8"))
        entries += e
        fixtures += f
    return Catalog(entries, fixtures)


def get_entry(id):
    return load_catalog()[id]


# -- instantiation -----------------------------------------------------------------


def _normalize(assignments):
    out = {}
    for k, v in (assignments or {}).items():
        out[GREEK.get(k, k)] = v
    return out


def _env(entry, field, values):
    env = {name: field(values[name]) for name in entry.param_names}
    for name, node in entry.lets:
        env[name] = evaluate(node, field, env)
    return env


def _satisfied(entry, field, env):
    try:
        return all(holds(r, field, env) for r in entry.requires)
    except ZeroDivisionError:
        return False


def base_values(entry, field, values):
    """Parameter values of the base pair induced by an entry assignment."""
    if entry.base_ref is None:
        return None
    base = get_entry(entry.base_ref)
    env = _env(entry, field, values)
    return {p: evaluate(a, field, env) for p, a in zip(base.param_names, entry.base_args)}


def check_assignment(entry, field, values):
    """Raise unless the assignment is admissible for the entry and its base."""
    if field.characteristic() in entry.char_exclusions:
        raise CharacteristicExcluded(
            f"{entry.id} is undefined in characteristic {field.characteristic()}"
        )
    missing = [n for n in entry.param_names if n not in values]
    if missing:
        raise ConstraintViolation(f"{entry.id}: missing parameter(s) {', '.join(missing)}")
    extra = [n for n in values if n not in entry.param_names]
    if extra:
        raise ConstraintViolation(f"{entry.id}: unknown parameter(s) {', '.join(extra)}")
    if not _satisfied(entry, field, _env(entry, field, values)):
        raise ConstraintViolation(f"{entry.id}: assignment {values} violates a constraint")
    if entry.base_ref is not None:
        base = get_entry(entry.base_ref)
        try:
            bv = base_values(entry, field, values)
        except ZeroDivisionError:
            raise ConstraintViolation(f"{entry.id}: base arguments undefined") from None
        if not _satisfied(base, field, _env(base, field, bv)):
            raise ConstraintViolation(f"{entry.id}: base {base.id}{tuple(bv.values())} violates its constraints")


def _build(entry, field, values):
    env = _env(entry, field, values)
    F = field
    n = entry.dim
    table = [[[F.zero] * n for _ in range(n)] for _ in range(n)]
    for (i, j), node in entry.products.items():
        v = evaluate(node, F, env)
        if not isinstance(v, _Vec):
            if v:
                raise CatalogError(f"{entry.id}: product e{i}*e{j} is a nonzero scalar")
            continue
        for k, x in v.items():
            if not isinstance(k, int):
                raise CatalogError(f"{entry.id}: form symbol in a product")
            table[i - 1][j - 1][k - 1] = x
    return BilinearPair._raw(n, F, tuple(tuple(tuple(v) for v in row) for row in table))


def instantiate(id, assignments=None, field=None):
    """Exact structure constants of a catalog entry."""
    entry = get_entry(id) if isinstance(id, str) else id
    field = field or Field.rationals()
    values = _normalize(assignments)
    check_assignment(entry, field, values)
    return _build(entry, field, values)


def instantiate_base(entry, field, values):
    base = get_entry(entry.base_ref)
    return instantiate(base, base_values(entry, field, values), field)


def _admissible(entry, field, values):
    try:
        check_assignment(entry, field, values)
    except ConstraintViolation:
        return False
    return True


def sample_assignments(entry, field, samples=3, seed=0, fixed=None, when=(), names=None):
    """Deterministic parameter samples.

    The sweep point j sets the i-th free parameter to (j + i) mod p;
    admissible points are taken in order and a generator seeded by
    (seed, entry id) supplies further random points if needed.
    """
    entry = get_entry(entry) if isinstance(entry, str) else entry
    if field.characteristic() in entry.char_exclusions:
        return []
    fixed = dict(fixed or {})
    names = [n for n in (names or entry.param_names) if n not in fixed]
    p = field.modulus
    out = []

    def ok(values):
        if not _admissible(entry, field, values):
            return False
        if when:
            env = _env(entry, field, values)
            try:
                return all(holds(w, field, env) for w in when)
            except ZeroDivisionError:
                return False
        return True

    def consider(values):
        if values not in out and ok(values):
            out.append(values)

    if not names:
        consider(dict(fixed))
        return out[:1]
    for j in range(p):
        if len(out) >= samples:
            return out
        values = dict(fixed)
        values.update({n: (j + i) % p for i, n in enumerate(names)})
        consider(values)
    rng = random.Random(f"{seed}:{entry.id}")
    tries = 0
    while len(out) < samples and tries < 400:
        tries += 1
        values = dict(fixed)
        values.update({n: rng.randrange(p) for n in names})
        consider(values)
    return out


# -- verification ------------------------------------------------------------------


class SampleResult:
    __slots__ = ("values", "checks", "notes")

    def __init__(self, values, checks, notes=()):
        self.values = values
        self.checks = checks
        self.notes = list(notes)

    @property
    def passed(self):
        return all(self.checks.values())

    def __repr__(self):
        return f"SampleResult({self.values}, {self.checks})"


class EntryReport:
    def __init__(self, entry_id, field, results, skipped=None):
        self.entry_id = entry_id
        self.field = field
        self.results = results
        self.skipped = skipped

    @property
    def passed(self):
        return self.skipped is None and bool(self.results) and all(r.passed for r in self.results)

    @property
    def hard_failure(self):
        return any(not r.passed for r in self.results)

    def tsv_rows(self):
        if self.skipped:
            return [f"{self.entry_id}\t-\tskipped\t{self.skipped}"]
        rows = []
        for r in self.results:
            vals = ",".join(f"{k}={self.field.format(v)}" for k, v in sorted(r.values.items())) or "-"
            status = "pass" if r.passed else "FAIL"
            detail = ";".join(f"{k}={'ok' if v else 'fail'}" for k, v in r.checks.items())
            rows.append(f"{self.entry_id}\t{vals}\t{status}\t{detail}")
        return rows

    def __repr__(self):
        return f"EntryReport({self.entry_id}, passed={self.passed}, samples={len(self.results)})"


def _format_values(field, values):
    return {k: field(v) for k, v in values.items()}


def verify_entry(id, field, samples=3, seed=0, force=False):
    """Radical dimension, base recovery, decomposition round trip, component check."""
    entry = get_entry(id) if isinstance(id, str) else id
    if entry.table == "4":
        raise CatalogError("verify_entry applies to extension entries, not bases")
    if field.characteristic() in entry.char_exclusions:
        return EntryReport(entry.id, field, [], skipped=f"characteristic {field.characteristic()} excluded")
    assigns = sample_assignments(entry, field, samples, seed)
    if not assigns:
        return EntryReport(entry.id, field, [], skipped="no admissible parameter values")
    results = []
    for values in assigns:
        checks = {}
        notes = []
        p = _build(entry, field, values)
        rad = radical(p)
        checks["radical_dim"] = rad.dim == entry.dim - 2
        try:
            q = quotient_by_radical(p)
            base = instantiate_base(entry, field, values)
            w = are_equivalent_bruteforce(q, base, force=force) if q.dim == base.dim else None
            checks["base_recovery"] = w is not None
        except BudgetExceeded as exc:
            checks["base_recovery"] = False
            notes.append(str(exc))
        try:
            dec = decompose(p)
            from .cohom import build_extension

            ext = build_extension(dec.base, dec.theta)
            checks["round_trip"] = is_witness(p, ext, dec.projection)
        except NothingToDecompose:
            checks["round_trip"] = False
        checks["component_free"] = strip_radical_components(p)[1] == 0
        results.append(SampleResult(_format_values(field, values), checks, notes))
    return EntryReport(entry.id, field, results)


class FixtureResult:
    __slots__ = ("fixture", "values", "ok", "notes")

    def __init__(self, fixture, values, ok, notes=()):
        self.fixture = fixture
        self.values = values
        self.ok = ok
        self.notes = list(notes)

    def __repr__(self):
        return f"FixtureResult({self.fixture.case}, {self.fixture.kind}, {self.values}, ok={self.ok})"


class FixtureReport:
    def __init__(self, field, results):
        self.field = field
        self.results = results

    @property
    def passed(self):
        return bool(self.results) and all(r.ok for r in self.results)

    @property
    def notes(self):
        return [n for r in self.results for n in r.notes]

    def tsv_rows(self):
        rows = []
        for r in self.results:
            fx = r.fixture
            vals = ",".join(f"{k}={self.field.format(v)}" for k, v in sorted(r.values.items())) or "-"
            note = " | ".join(r.notes)
            rows.append(f"{fx.entry_id}\t{fx.kind}\t{fx.case}\t{vals}\t{'pass' if r.ok else 'FAIL'}\t{note}")
        return rows

    def __repr__(self):
        return f"FixtureReport(passed={self.passed}, checks={len(self.results)})"


def _forms(nodes, field, env, n):
    out = []
    for node in nodes:
        v = evaluate(node, field, env)
        rows = [[field.zero] * n for _ in range(n)]
        if isinstance(v, _Vec):
            for key, x in v.items():
                if not isinstance(key, tuple):
                    raise CatalogError("basis vector symbol inside a form")
                i, j = key
                if not (1 <= i <= n and 1 <= j <= n):
                    raise CatalogError(f"D{i}{j} is out of range for dimension {n}")
                rows[i - 1][j - 1] = x
        elif v:
            raise CatalogError("a form cannot be a nonzero scalar")
        out.append(BilinearForm(rows, field))
    return out


def parse_forms(text, field, n, env=None):
    """Forms written with D11..Dnn, separated by ';', e.g. "D11 + 2*D22; D12"."""
    parts = [t for t in text.split(";") if t.strip()]
    if not parts:
        raise CatalogError("no forms given")
    return _forms([_parse_expr(t) for t in parts], field, env or {}, n)


def _fixture_assignments(fx, field, samples, seed):
    entry = get_entry(fx.entry_id)
    fixed = {}
    for name, node in fx.fixed.items():
        try:
            fixed[name] = evaluate(node, field, {})
        except ZeroDivisionError:
            return []
    return sample_assignments(entry, field, samples, seed, fixed=fixed, when=fx.when)


def _check_coboundary(fx, base, forms):
    F = base.field
    n = base.dim
    notes = []
    ok = len(forms) == n
    for k, f in enumerate(forms[:n]):
        h = [F.one if t == k else F.zero for t in range(n)]
        if coboundary(base, h) != f:
            ok = False
            notes.append(f"delta e_{k + 1}^* is {coboundary(base, h)!r}, expected {f!r}")
    space = cohomology(base)
    if Subspace([f.vector() for f in forms], n * n, F) != space.coboundary:
        ok = False
        notes.append("span differs from the coboundary space")
    return ok, notes


def _check_h2(fx, base, forms):
    F = base.field
    n = base.dim
    space = cohomology(base)
    notes = []
    ok = space.h2_dim == len(forms)
    if not ok:
        notes.append(f"h2_dim is {space.h2_dim}, fixture lists {len(forms)} classes")
    total = Subspace(list(space.coboundary.basis) + [f.vector() for f in forms], n * n, F)
    if total.dim != n * n:
        ok = False
        notes.append("listed classes do not complement the coboundaries")
    return ok, notes


def _check_orbits(fx, base, env, force):
    from .classify import orbit_partition

    F = base.field
    n = base.dim
    space = cohomology(base)
    report = orbit_partition(base, fx.s, space=space, force=force)
    member = {}
    for k, o in enumerate(report.orbits):
        for sub in o.members:
            member[sub] = k
    ok = True
    notes = []
    hit = set()
    for fam_no, fam in enumerate(fx.orbits, 1):
        uses_lam = any("lam" in _names(node) for node in fam)
        lams = range(F.modulus) if uses_lam else [0]
        fam_hits = set()
        for lam in lams:
            local = dict(env)
            local["lam"] = F(lam)
            forms = _forms(fam, F, local, n)
            sub = Subspace([space.coords(f) for f in forms], space.h2_dim, F)
            if sub.dim != fx.s or sub not in member:
                ok = False
                notes.append(f"family {fam_no} element {forms} is not in T_{fx.s}")
                continue
            fam_hits.add(member[sub])
        if len(fam_hits) > 1:
            notes.append(f"family {fam_no} splits into {len(fam_hits)} orbits over F_{F.modulus}")
        hit |= fam_hits
    missing = len(report.orbits) - len(hit)
    if missing:
        notes.append(f"{missing} of {len(report.orbits)} orbits over F_{F.modulus} are not met by the listed families")
    if len(fx.orbits) > len(hit):
        notes.append("some listed families share an orbit over this field")
    return ok, notes


def verify_fixture(target, field, samples=3, seed=0, kind=None, force=False):
    """Compare stated coboundaries, H^2 bases and orbit lists with computation.

    Orbit fixtures fail only when a listed family element lies outside
    T_s; coverage and splitting differences over F_p are returned as notes.
    """
    cat = load_catalog()
    if isinstance(target, Fixture):
        fixtures = [target]
    else:
        cat[target]
        fixtures = cat.fixtures_for(target, kind)
    results = []
    for fx in fixtures:
        entry = cat[fx.entry_id]
        if field.characteristic() in entry.char_exclusions:
            continue
        assigns = _fixture_assignments(fx, field, samples, seed)
        if not assigns:
            results.append(FixtureResult(fx, {}, True, [f"no admissible parameters over F_{field.modulus}"]))
            continue
        for values in assigns:
            base = _build(entry, field, values)
            env = _env(entry, field, values)
            try:
                if fx.kind == "coboundary":
                    ok, notes = _check_coboundary(fx, base, _forms(fx.forms, field, env, base.dim))
                elif fx.kind == "h2":
                    ok, notes = _check_h2(fx, base, _forms(fx.forms, field, env, base.dim))
                elif fx.kind == "orbits":
                    try:
                        ok, notes = _check_orbits(fx, base, env, force)
                    except BudgetExceeded as exc:
                        ok, notes = True, [f"skipped: {exc}"]
                else:
                    raise CatalogError(f"unknown fixture kind {fx.kind!r}")
            except ZeroDivisionError:
                ok, notes = False, ["fixture expression undefined at this assignment"]
            results.append(FixtureResult(fx, _format_values(field, values), ok, notes))
    return FixtureReport(field, results)


# -- distinctness ------------------------------------------------------------------


class AuditReport:
    def __init__(self, table, field, instances, collisions, skipped=()):
        self.table = table
        self.field = field
        self.instances = instances
        self.collisions = collisions
        # instance pairs whose comparison was outside the search budget
        self.skipped = list(skipped)

    @property
    def cross_family(self):
        return [c for c in self.collisions if c[0][0] != c[1][0]]

    @property
    def within_family(self):
        return [c for c in self.collisions if c[0][0] == c[1][0]]

    def tsv_rows(self):
        rows = []
        F = self.field
        for (ia, va), (ib, vb), w in self.collisions:
            fa = ",".join(f"{k}={F.format(v)}" for k, v in sorted(va.items())) or "-"
            fb = ",".join(f"{k}={F.format(v)}" for k, v in sorted(vb.items())) or "-"
            kind = "within" if ia == ib else "cross"
            rows.append(f"{ia}\t{fa}\t{ib}\t{fb}\t{kind}\t{w.phi.rows}")
        return rows

    def __repr__(self):
        return (
            f"AuditReport(table={self.table}, instances={len(self.instances)}, "
            f"cross={len(self.cross_family)}, within={len(self.within_family)})"
        )


def distinctness_audit(table, field, samples_per_family=1, seed=0, force=False, ids=None):
    """All-pairs brute-force equivalence among instantiated entries.

    Collisions over F_p are reported, never treated as errors: several
    families are only distinct over algebraically closed fields.
    """
    cat = load_catalog()
    entries = [cat[i] for i in ids] if ids else cat.table(table)
    instances = []
    for e in entries:
        for values in sample_assignments(e, field, samples_per_family, seed):
            instances.append((e.id, _format_values(field, values), _build(e, field, values)))
    buckets = {}
    for k, (_, _, p) in enumerate(instances):
        buckets.setdefault((p.dim, invariant_fingerprint(p)), []).append(k)
    collisions = []
    skipped = []
    for members in buckets.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                ia, va, pa = instances[members[a]]
                ib, vb, pb = instances[members[b]]
                try:
                    w = are_equivalent_bruteforce(pa, pb, force=force)
                except BudgetExceeded:
                    skipped.append(((ia, va), (ib, vb)))
                    continue
                if w is not None:
                    collisions.append(((ia, va), (ib, vb), w))
    collisions.sort(key=lambda c: (c[0][0], c[1][0]))
    skipped.sort(key=lambda c: (c[0][0], c[1][0]))
    return AuditReport(table, field, [(i, v) for i, v, _ in instances], collisions, skipped)


# -- automorphism data for the two-dimensional bases ---------------------------------


def _swap(F):
    return Matrix(((0, 1), (1, 0)), F)


def expected_automorphisms(id, values, field):
    """(order, predicate) from the stated equivalence groups.

    The predicate takes matrix rows (``phi.rows``) and may be None.
    """
    F = field
    p = F.modulus
    v = {k: F(x) for k, x in _normalize(values).items()}
    neg1 = F(-1)

    def finite(*mats):
        keys = {Matrix(m, F).rows for m in mats}
        return len(keys), (lambda m: tuple(map(tuple, m)) in keys)

    ident = ((1, 0), (0, 1))
    if id in ("A1", "A2"):
        return p, lambda m: m[0][0] == 1 and m[0][1] == 0 and m[1][1] == 1
    if id == "A3":
        return p * (p - 1), lambda m: m[0][1] == 0 and m[0][0] != 0 and m[1][1] == F.mul(m[0][0], m[0][0])
    if id == "A4":
        return finite(ident, ((-1, 0), (0, 1))) if v["alpha"] == 0 else finite(ident)
    if id in ("B1", "D3", "E2", "E4"):
        return finite(ident)
    if id == "B2":
        return p - 1, lambda m: m[0][1] == 0 and m[1][0] == 0 and m[1][1] == 1
    if id == "B3":
        return p * (p - 1), lambda m: m[0][0] == 1 and m[0][1] == 0
    if id == "C":
        return finite(ident, ((-1, 0), (0, 1))) if v["beta"] == 0 else finite(ident)
    if id == "D1":
        special = v["beta"] == F.sub(F.mul(F(2), v["alpha"]), F.one)
        return finite(ident, ((1, 1), (0, -1))) if special else finite(ident)
    if id == "D2":
        return p - 1, lambda m: m[0][0] == 1 and m[0][1] == 0 and m[1][0] == 0
    if id == "E1":
        a, b, c, d = v["alpha"], v["beta"], v["gamma"], v["delta"]
        if (a, c) == (d, b):
            if (a, c) == (neg1, neg1):
                return 6, None
            return finite(ident, ((0, 1), (1, 0)))
        return finite(ident)
    if id == "E3":
        if v["gamma"] == neg1 and v["alpha"] == v["beta"]:
            return finite(ident, ((0, 1), (1, 0)))
        return finite(ident)
    if id == "E5":
        return p * (p - 1), lambda m: m[1][0] == F.sub(F.one, m[0][0]) and m[1][1] == F.sub(F.one, m[0][1])
    if id == "N2":
        from .exactlin import gl_order

        return gl_order(2, p), lambda m: True
    raise UnknownEntry(f"no automorphism data for {id!r}")
