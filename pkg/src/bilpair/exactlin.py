"""Exact scalars and linear algebra over F_p and the rationals.

Vectors are tuples of field elements.  Elements of F_p are ints in
0..p-1, rationals are ``fractions.Fraction``.  Everything here is
immutable so values can be shared freely between workers.
"""

import itertools
from fractions import Fraction

MAX_MODULUS = 1 << 15


class FieldError(ValueError):
    pass


class EnumerationUnsupported(TypeError):
    """Raised when an exhaustive enumeration is requested over the rationals."""


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """Descriptor for F_p (``Field(p)``) or the rationals (``Field(None)``)."""

    __slots__ = ("modulus",)

    def __init__(self, modulus=None):
        if modulus is not None:
            modulus = int(modulus)
            if not is_prime(modulus):
                raise FieldError(f"modulus {modulus} is not prime")
            if modulus >= MAX_MODULUS:
                raise FieldError(f"modulus {modulus} too large (limit {MAX_MODULUS})")
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def prime(cls, p):
        return cls(p)

    @classmethod
    def rationals(cls):
        return cls(None)

    @property
    def kind(self):
        return "rationals" if self.modulus is None else "prime-field"

    @property
    def is_prime_field(self):
        return self.modulus is not None

    def characteristic(self):
        return 0 if self.modulus is None else self.modulus

    def __eq__(self, other):
        return isinstance(other, Field) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Field", self.modulus))

    def __repr__(self):
        return "Field(rational)" if self.modulus is None else f"Field(p={self.modulus})"

    def __reduce__(self):
        return (Field, (self.modulus,))

    # -- scalars -----------------------------------------------------------

    def __call__(self, x):
        """Coerce an int, Fraction or 'a/b' string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        p = self.modulus
        if p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    @property
    def zero(self):
        return 0 if self.modulus is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.modulus is not None else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.modulus if self.modulus else a + b

    def sub(self, a, b):
        return (a - b) % self.modulus if self.modulus else a - b

    def mul(self, a, b):
        return (a * b) % self.modulus if self.modulus else a * b

    def neg(self, a):
        return (-a) % self.modulus if self.modulus else -a

    def inv(self, a):
        return inverse(a, self)

    def div(self, a, b):
        return self.mul(a, inverse(b, self))

    def elements(self):
        if self.modulus is None:
            raise EnumerationUnsupported("cannot enumerate the rationals")
        return range(self.modulus)

    def format(self, a):
        if self.modulus is not None:
            return str(a)
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def inverse(a, field):
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    if field.modulus is None:
        return 1 / Fraction(a)
    return pow(a, -1, field.modulus)


# -- matrices ---------------------------------------------------------------


class Matrix:
    """Immutable dense matrix; ``rows`` is a tuple of row tuples."""

    __slots__ = ("field", "rows", "ncols")

    def __init__(self, rows, field, ncols=None):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def _raw(cls, rows, field, ncols):
        # trusted constructor: entries are already canonical
        m = object.__new__(cls)
        object.__setattr__(m, "field", field)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "ncols", ncols)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix._raw, (self.rows, self.field, self.ncols))

    @classmethod
    def identity(cls, n, field):
        one, zero = field.one, field.zero
        return cls._raw(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), field, n
        )

    @classmethod
    def zeros(cls, r, c, field):
        return cls._raw(tuple((field.zero,) * c for _ in range(r)), field, c)

    @classmethod
    def from_columns(cls, cols, field, nrows=None):
        cols = [tuple(c) for c in cols]
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), field, len(cols))

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (len(self.rows), self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.rows)
        return f"Matrix([{body}])"

    def transpose(self):
        cols = tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols))
        return Matrix._raw(cols, self.field, len(self.rows))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows))
            rows = tuple(tuple(dot(r, c, self.field) for c in cols) for r in self.rows)
            return Matrix._raw(rows, self.field, other.ncols)
        return mat_vec(self, other)

    def inverse(self):
        return matrix_inverse(self)

    def is_invertible(self):
        return self.nrows == self.ncols and rank(self) == self.nrows

    def tolist(self):
        return [list(r) for r in self.rows]


def dot(u, v, field):
    s = sum(a * b for a, b in zip(u, v))
    return s % field.modulus if field.modulus else s


def mat_vec(m, v):
    return tuple(dot(r, v, m.field) for r in m.rows)


def vec_add(u, v, field):
    p = field.modulus
    if p:
        return tuple((a + b) % p for a, b in zip(u, v))
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(c, v, field):
    p = field.modulus
    if p:
        return tuple(c * a % p for a in v)
    return tuple(c * a for a in v)


def _rref_rows(rows, ncols, field):
    """Row-reduce a list of row lists in place; return pivot columns."""
    p = field.modulus
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        k = r
        while k < nrows and rows[k][c] == 0:
            k += 1
        if k == nrows:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        piv = rows[r]
        iv = inverse(piv[c], field)
        if p:
            piv = [x * iv % p for x in piv]
        else:
            piv = [x * iv for x in piv]
        rows[r] = piv
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    if p:
                        rows[i] = [(a - f * b) % p for a, b in zip(row, piv)]
                    else:
                        rows[i] = [a - f * b for a, b in zip(row, piv)]
        pivots.append(c)
        r += 1
    return pivots


def rref(m):
    """Reduced row echelon form: returns (matrix, rank, pivot columns)."""
    rows = [list(r) for r in m.rows]
    pivots = _rref_rows(rows, m.ncols, m.field)
    out = Matrix._raw(tuple(tuple(r) for r in rows), m.field, m.ncols)
    return out, len(pivots), pivots


def rank(m):
    return rref(m)[1]


def matrix_inverse(m):
    n = m.nrows
    if n != m.ncols:
        raise ValueError("non-square matrix")
    F = m.field
    aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(m.rows)]
    pivots = _rref_rows(aug, n, F)
    if len(pivots) != n:
        raise ZeroDivisionError("singular matrix")
    return Matrix._raw(tuple(tuple(r[n:]) for r in aug), F, n)


def solve(m, b):
    """One solution x of m x = b, or None if the system is inconsistent."""
    F = m.field
    n = m.ncols
    aug = [list(r) + [x] for r, x in zip(m.rows, b)]
    pivots = _rref_rows(aug, n + 1, F)
    if pivots and pivots[-1] == n:
        return None
    x = [F.zero] * n
    for row, c in zip(aug, pivots):
        x[c] = row[n]
    return tuple(x)


# -- subspaces ----------------------------------------------------------------


class Subspace:
    """Subspace of F^n held by its canonical RREF basis.

    Equality is identity of the canonical bases, so subspaces hash and
    compare in constant time relative to their size.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, vectors, ambient_dim, field):
        rows = [list(field(x) for x in v) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        pivots = _rref_rows(rows, ambient_dim, field)
        basis = tuple(tuple(r) for r in rows[: len(pivots)])
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", tuple(pivots))

    @classmethod
    def _canonical(cls, basis, pivots, ambient_dim, field):
        s = object.__new__(cls)
        object.__setattr__(s, "field", field)
        object.__setattr__(s, "ambient_dim", ambient_dim)
        object.__setattr__(s, "basis", basis)
        object.__setattr__(s, "pivots", pivots)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    def __reduce__(self):
        return (Subspace._canonical, (self.basis, self.pivots, self.ambient_dim, self.field))

    @classmethod
    def zero(cls, n, field):
        return cls._canonical(tuple(), tuple(), n, field)

    @classmethod
    def full(cls, n, field):
        return cls._canonical(Matrix.identity(n, field).rows, tuple(range(n)), n, field)

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def matrix(self):
        return Matrix._raw(self.basis, self.field, self.ambient_dim)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.field == other.field
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __lt__(self, other):
        return (self.dim, self.basis) < (other.dim, other.basis)

    def __repr__(self):
        F = self.field
        body = "; ".join(" ".join(F.format(x) for x in r) for r in self.basis)
        return f"Subspace(n={self.ambient_dim}, [{body}])"

    def reduce(self, v):
        """Return v with the pivot coordinates cleared by basis rows."""
        F = self.field
        v = list(v)
        p = F.modulus
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                if p:
                    v = [(a - f * b) % p for a, b in zip(v, row)]
                else:
                    v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def coordinates(self, v):
        """Coefficients of v in the canonical basis (v must lie in the subspace)."""
        if v not in self:
            raise ValueError("vector not in subspace")
        return tuple(v[c] for c in self.pivots)

    def __contains__(self, v):
        return not any(self.reduce(v))

    def contains(self, other):
        return all(r in self for r in other.basis)

    def complement_pivots(self):
        return tuple(c for c in range(self.ambient_dim) if c not in set(self.pivots))


def kernel(m):
    """Null space {v : m v = 0} as a canonical Subspace."""
    F = m.field
    n = m.ncols
    red, r, pivots = rref(m)
    free = [c for c in range(n) if c not in set(pivots)]
    vecs = []
    for f in free:
        v = [F.zero] * n
        v[f] = F.one
        for row, c in zip(red.rows, pivots):
            v[c] = F.neg(row[f])
        vecs.append(v)
    return Subspace(vecs, n, F)


def _check_same(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    if a.field != b.field:
        raise ValueError("field mismatch")


def subspace_sum(a, b):
    _check_same(a, b)
    return Subspace(a.basis + b.basis, a.ambient_dim, a.field)


def annihilator(s):
    """Vectors orthogonal to s under the standard pairing."""
    if s.dim == 0:
        return Subspace.full(s.ambient_dim, s.field)
    return kernel(s.matrix())


def subspace_intersect(a, b):
    _check_same(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, a.field)
    # U ∩ W = ann(ann U + ann W); the standard pairing is nondegenerate
    return annihilator(subspace_sum(annihilator(a), annihilator(b)))


def span(vectors, n, field):
    return Subspace(list(vectors), n, field)


# -- enumeration ----------------------------------------------------------------


def _require_prime(field):
    if not field.is_prime_field:
        raise EnumerationUnsupported("exhaustive enumeration needs a prime field")
    return field.modulus


def all_vectors(n, field):
    """Every vector of F_p^n in lexicographic order."""
    p = _require_prime(field)
    return itertools.product(range(p), repeat=n)


def gaussian_binomial(n, s, q):
    if s < 0 or s > n:
        return 0
    num = den = 1
    for i in range(s):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def gl_order(n, q):
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def enumerate_grassmannian(ambient_dim, s, field):
    """Each s-dim subspace of F_p^n once, as canonical RREF.

    Order: pivot sets lexicographically, then the free entries counted in
    base p (last free entry fastest).
    """
    p = _require_prime(field)
    if not 0 <= s <= ambient_dim:
        raise ValueError("s out of range")
    n = ambient_dim
    for pivots in itertools.combinations(range(n), s):
        pset = set(pivots)
        slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pset]
        for vals in itertools.product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(s)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), x in zip(slots, vals):
                rows[r][c] = x
            yield Subspace._canonical(tuple(tuple(r) for r in rows), pivots, n, field)


def enumerate_gl(n, field):
    """Each invertible n x n matrix once, rows chosen lexicographically."""
    p = _require_prime(field)
    vecs = list(itertools.product(range(p), repeat=n))

    def extend(rows, sub):
        if len(rows) == n:
            yield Matrix._raw(tuple(rows), field, n)
            return
        for v in vecs:
            if v not in sub:
                yield from extend(rows + [v], Subspace(rows + [v], n, field))

    yield from extend([], Subspace.zero(n, field))
