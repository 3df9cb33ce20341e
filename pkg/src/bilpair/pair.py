"""Bilinear pairs given by structure constants.

``c[i][j]`` is the product vector e_i * e_j (0-based indices inside
the code, 1-based in the text format).
"""

import re

from .exactlin import (
    Field,
    FieldError,
    Matrix,
    Subspace,
    kernel,
    matrix_inverse,
    vec_add,
    vec_scale,
)


class ParseError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class NothingToDecompose(ValueError):
    pass


class BilinearPair:
    __slots__ = ("dim", "field", "c")

    def __init__(self, dim, field, c=None):
        zero = (field.zero,) * dim
        if c is None:
            table = tuple(tuple(zero for _ in range(dim)) for _ in range(dim))
        else:
            table = tuple(
                tuple(tuple(field(x) for x in c[i][j]) for j in range(dim)) for i in range(dim)
            )
            for row in table:
                for v in row:
                    if len(v) != dim:
                        raise ValueError("product vector has wrong length")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "c", table)

    @classmethod
    def _raw(cls, dim, field, table):
        p = object.__new__(cls)
        object.__setattr__(p, "dim", dim)
        object.__setattr__(p, "field", field)
        object.__setattr__(p, "c", table)
        return p

    @classmethod
    def from_products(cls, dim, field, products):
        """Build from {(i, j): {k: coeff}} with 1-based indices."""
        F = field
        table = [[[F.zero] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), terms in products.items():
            for k, x in terms.items():
                table[i - 1][j - 1][k - 1] = F(x)
        return cls._raw(dim, F, tuple(tuple(tuple(v) for v in row) for row in table))

    def __setattr__(self, name, value):
        raise AttributeError("BilinearPair is immutable")

    def __reduce__(self):
        return (BilinearPair._raw, (self.dim, self.field, self.c))

    def __eq__(self, other):
        return (
            isinstance(other, BilinearPair)
            and self.dim == other.dim
            and self.field == other.field
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.dim, self.c))

    def __repr__(self):
        prods = "; ".join(serialize(self).splitlines()[2:])
        return f"BilinearPair(dim={self.dim}, {self.field!r}, {prods or 'zero'})"

    def coeff(self, i, j, k):
        return self.c[i][j][k]

    def product(self, x, y):
        """f(x, y) for coordinate vectors x, y."""
        F = self.field
        n = self.dim
        out = [F.zero] * n
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            ci = self.c[i]
            for j in range(n):
                yj = y[j]
                if not yj:
                    continue
                s = xi * yj
                for k, ck in enumerate(ci[j]):
                    if ck:
                        out[k] += s * ck
        if F.modulus:
            return tuple(v % F.modulus for v in out)
        return tuple(out)

    def is_zero(self):
        return not any(any(v) for row in self.c for v in row)


# -- text format ------------------------------------------------------------

_FIELD_RE = re.compile(r"^field\s+(?:p\s*=\s*(\d+)|(rational))$")
_DIM_RE = re.compile(r"^dim\s+(\d+)$")
_LHS_RE = re.compile(r"^e(\d+)\s*\*\s*e(\d+)$")
_TERM_RE = re.compile(r"^([+-]?\d+(?:/\d+)?)\s*\*\s*e(\d+)$")


def _strip(line):
    return line.split("#", 1)[0].strip()


def _parse_header(lines):
    """Consume the field/dim header; return (field, dim, remaining (lineno, text))."""
    content = [(no, _strip(t)) for no, t in enumerate(lines, 1)]
    content = [(no, t) for no, t in content if t]
    if len(content) < 2:
        raise ParseError("expected 'field' and 'dim' header lines")
    (no, t) = content[0]
    m = _FIELD_RE.match(t)
    if not m:
        raise ParseError(f"expected 'field p=<prime>' or 'field rational', got {t!r}", no)
    try:
        field = Field(int(m.group(1))) if m.group(1) else Field(None)
    except FieldError as e:
        raise ParseError(str(e), no) from None
    (no, t) = content[1]
    m = _DIM_RE.match(t)
    if not m:
        raise ParseError(f"expected 'dim <n>', got {t!r}", no)
    return field, int(m.group(1)), content[2:]


def _parse_lhs(lhs, dim, no):
    m = _LHS_RE.match(lhs.strip())
    if not m:
        raise ParseError(f"bad product {lhs.strip()!r}", no)
    i, j = int(m.group(1)), int(m.group(2))
    for x in (i, j):
        if not 1 <= x <= dim:
            raise ParseError(f"index e{x} out of range for dim {dim}", no)
    return i, j


def parse(text):
    """Parse the ``.bp`` text format into a BilinearPair."""
    field, dim, rest = _parse_header(text.splitlines())
    products = {}
    for no, t in rest:
        if "=" not in t:
            raise ParseError(f"expected 'e<i>*e<j> = ...', got {t!r}", no)
        lhs, rhs = t.split("=", 1)
        key = _parse_lhs(lhs, dim, no)
        if key in products:
            raise ParseError(f"duplicate product e{key[0]}*e{key[1]}", no)
        terms = {}
        rhs = rhs.strip()
        if rhs != "0":
            for term in rhs.split("+"):
                m = _TERM_RE.match(term.strip())
                if not m:
                    raise ParseError(f"bad term {term.strip()!r}", no)
                k = int(m.group(2))
                if not 1 <= k <= dim:
                    raise ParseError(f"index e{k} out of range for dim {dim}", no)
                try:
                    x = field(m.group(1))
                except ZeroDivisionError:
                    raise ParseError(f"coefficient {m.group(1)} undefined in {field!r}", no) from None
                terms[k] = field.add(terms.get(k, field.zero), x)
        products[key] = terms
    return BilinearPair.from_products(dim, field, products)


def serialize(p):
    F = p.field
    head = "field rational" if F.modulus is None else f"field p={F.modulus}"
    lines = [head, f"dim {p.dim}"]
    for i in range(p.dim):
        for j in range(p.dim):
            v = p.c[i][j]
            terms = [f"{F.format(x)}*e{k + 1}" for k, x in enumerate(v) if x]
            if terms:
                lines.append(f"e{i + 1}*e{j + 1} = " + " + ".join(terms))
    return "\n".join(lines) + "\n"


def load(path):
    with open(path) as fh:
        return parse(fh.read())


def dump(p, path):
    with open(path, "w") as fh:
        fh.write(serialize(p))


# -- intrinsic operations ---------------------------------------------------


def multiplication_rows(p):
    """Stacked matrix whose kernel is the radical (2n^2 rows, n columns)."""
    n = p.dim
    rows = []
    for i in range(n):
        for k in range(n):
            rows.append(tuple(p.c[i][j][k] for j in range(n)))  # e_i * v
            rows.append(tuple(p.c[j][i][k] for j in range(n)))  # v * e_i
    return Matrix._raw(tuple(rows), p.field, n)


def radical(p):
    if p.dim == 0:
        return Subspace.zero(0, p.field)
    return kernel(multiplication_rows(p))


def product_space(p):
    n = p.dim
    return Subspace([p.c[i][j] for i in range(n) for j in range(n)], n, p.field)


def left_operator(p, v):
    """Matrix of y -> v*y."""
    n = p.dim
    cols = [p.product(v, e) for e in _basis(n, p.field)]
    return Matrix.from_columns(cols, p.field, n)


def right_operator(p, v):
    n = p.dim
    cols = [p.product(e, v) for e in _basis(n, p.field)]
    return Matrix.from_columns(cols, p.field, n)


def _basis(n, F):
    return [tuple(F.one if k == i else F.zero for k in range(n)) for i in range(n)]


def transform(p, phi, phi_inv):
    """Structure constants of x*y := phi(f(phi_inv x, phi_inv y))."""
    F = p.field
    n = p.dim
    cols = phi_inv.columns()  # images phi^{-1}(e_i)
    table = tuple(
        tuple(phi @ p.product(cols[i], cols[j]) for j in range(n)) for i in range(n)
    )
    return BilinearPair._raw(n, F, table)


def apply_change_of_basis(p, phi):
    if phi.shape != (p.dim, p.dim):
        raise ValueError("change of basis has the wrong size")
    return transform(p, phi, matrix_inverse(phi))


def is_witness(a, b, phi):
    """True iff phi(a(x, y)) = b(phi x, phi y) on the basis."""
    n = a.dim
    cols = phi.columns()
    for i in range(n):
        for j in range(n):
            if phi @ a.c[i][j] != b.product(cols[i], cols[j]):
                return False
    return True


def opposite(p):
    n = p.dim
    return BilinearPair._raw(n, p.field, tuple(tuple(p.c[j][i] for j in range(n)) for i in range(n)))


def add_radical_components(p, t):
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return p
    F = p.field
    n = p.dim + t
    pad = (F.zero,) * t
    zero = (F.zero,) * n
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(p.c[i][j] + pad if i < p.dim and j < p.dim else zero)
        table.append(tuple(row))
    return BilinearPair._raw(n, F, tuple(table))


def direct_sum_zero(p, t):
    return add_radical_components(p, t)


def _quotient_with_reps(p, rad, reps):
    """Quotient product on the classes of the given representatives."""
    F = p.field
    keep = rad.complement_pivots()
    m = len(reps)
    table = []
    for a in range(m):
        row = []
        for b in range(m):
            v = rad.reduce(p.product(reps[a], reps[b]))
            row.append(tuple(v[q] for q in keep))
        table.append(tuple(row))
    return BilinearPair._raw(m, F, tuple(table))


def quotient_by_radical(p, check=__debug__):
    """The pair induced on V/rad(p), coordinates at the non-pivot positions."""
    rad = radical(p)
    F = p.field
    keep = rad.complement_pivots()
    basis = _basis(p.dim, F)
    reps = [basis[q] for q in keep]
    out = _quotient_with_reps(p, rad, reps)
    if check and rad.dim:
        # shift every representative by a radical vector; classes must not move
        shift = rad.basis[-1]
        alt = [vec_add(r, vec_scale(F.one, shift, F), F) for r in reps]
        if _quotient_with_reps(p, rad, alt) != out:
            raise AssertionError("quotient depends on coset representatives")
    return out


class Decomposition:
    """f ~ g_theta with g on a complement U of the radical and theta in rad."""

    __slots__ = ("base", "theta", "complement_basis", "radical_basis", "projection")

    def __init__(self, base, theta, complement_basis, radical_basis, projection):
        self.base = base
        self.theta = theta
        self.complement_basis = complement_basis
        self.radical_basis = radical_basis
        # coordinates (u, w) of v in the basis complement + radical
        self.projection = projection

    def __repr__(self):
        return f"Decomposition(base={self.base!r}, theta={self.theta!r})"


def decompose(p):
    from .cohom import BilinearForm, Cocycle

    rad = radical(p)
    if rad.dim == 0:
        raise NothingToDecompose("pair has zero radical")
    F = p.field
    n = p.dim
    keep = rad.complement_pivots()
    basis = _basis(n, F)
    comp = [basis[q] for q in keep]
    # new basis: comp then radical rows; the projection is its inverse
    new_basis = Matrix.from_columns(comp + list(rad.basis), F, n)
    proj = matrix_inverse(new_basis)
    nb = len(comp)
    m = rad.dim
    base_table = []
    theta = [[[F.zero] * nb for _ in range(nb)] for _ in range(m)]
    for a in range(nb):
        row = []
        for b in range(nb):
            coords = proj @ p.product(comp[a], comp[b])
            row.append(coords[:nb])
            for t in range(m):
                theta[t][a][b] = coords[nb + t]
        base_table.append(tuple(row))
    base = BilinearPair._raw(nb, F, tuple(base_table))
    cocycle = Cocycle([BilinearForm(th, F) for th in theta], nb, F)
    comp_m = Matrix._raw(tuple(comp), F, n)
    return Decomposition(base, cocycle, comp_m, rad.matrix(), proj)


def strip_radical_components(p, with_witness=False):
    """Split off radical components: returns (core, t) or (core, t, phi).

    phi is a change of basis with apply_change_of_basis(p, phi) ==
    add_radical_components(core, t).
    """
    from .cohom import strip_components

    core, t, phi = strip_components(p)
    if with_witness:
        return core, t, phi
    return core, t
