"""Cocycles, coboundaries, H^2 and radical extensions."""

from .exactlin import Matrix, Subspace, kernel, solve, subspace_intersect
from .pair import BilinearPair, decompose, is_witness, radical


class RadicalOverlap(ValueError):
    """rad(g) ∩ rad(theta) is nonzero."""


class RadicalComponentPresent(ValueError):
    """The extension splits off a radical component."""


class BilinearForm:
    """Scalar bilinear form; coords[i][j] is its value on (e_i, e_j)."""

    __slots__ = ("coords", "field", "base_dim")

    def __init__(self, coords, field):
        coords = tuple(tuple(field(x) for x in row) for row in coords)
        n = len(coords)
        for row in coords:
            if len(row) != n:
                raise ValueError("form coordinates must be square")
        self.coords = coords
        self.field = field
        self.base_dim = n

    @classmethod
    def zero(cls, n, field):
        return cls([[0] * n for _ in range(n)], field)

    @classmethod
    def delta(cls, i, j, n, field):
        """Elementary form Delta_ij (1-based indices)."""
        rows = [[0] * n for _ in range(n)]
        rows[i - 1][j - 1] = 1
        return cls(rows, field)

    @classmethod
    def from_vector(cls, v, n, field):
        return cls([v[i * n:(i + 1) * n] for i in range(n)], field)

    def vector(self):
        return tuple(x for row in self.coords for x in row)

    def value(self, x, y):
        F = self.field
        s = sum(x[i] * y[j] * self.coords[i][j] for i in range(self.base_dim) for j in range(self.base_dim))
        return s % F.modulus if F.modulus else s

    def __add__(self, other):
        F = self.field
        return BilinearForm.from_vector([F.add(a, b) for a, b in zip(self.vector(), other.vector())], self.base_dim, F)

    def __sub__(self, other):
        F = self.field
        return BilinearForm.from_vector([F.sub(a, b) for a, b in zip(self.vector(), other.vector())], self.base_dim, F)

    def scale(self, c):
        F = self.field
        return BilinearForm.from_vector([F.mul(F(c), a) for a in self.vector()], self.base_dim, F)

    def is_zero(self):
        return not any(self.vector())

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.coords == other.coords and self.field == other.field

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        terms = []
        n = self.base_dim
        for i in range(n):
            for j in range(n):
                x = self.coords[i][j]
                if x:
                    c = "" if x == 1 else self.field.format(x) + "*"
                    terms.append(f"{c}D{i + 1}{j + 1}")
        return "+".join(terms) if terms else "0"


class Cocycle:
    """W-valued form on the base: m scalar components."""

    __slots__ = ("components", "base_dim", "field")

    def __init__(self, components, base_dim=None, field=None):
        comps = tuple(components)
        if base_dim is None:
            base_dim = comps[0].base_dim
        if field is None:
            field = comps[0].field
        for f in comps:
            if f.base_dim != base_dim:
                raise ValueError("cocycle components disagree on base dimension")
        self.components = comps
        self.base_dim = base_dim
        self.field = field

    @property
    def m(self):
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, Cocycle) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "Cocycle(" + ", ".join(map(repr, self.components)) + ")"


def as_cocycle(theta, base_dim=None, field=None):
    if isinstance(theta, Cocycle):
        return theta
    if isinstance(theta, BilinearForm):
        return Cocycle([theta])
    return Cocycle(list(theta), base_dim, field)


# -- coboundaries and H^2 -------------------------------------------------------


def coboundary(p, h):
    """delta h: (x, y) -> h(p(x, y))."""
    if len(h) != p.dim:
        raise ValueError("functional has the wrong length")
    F = p.field
    n = p.dim
    h = [F(x) for x in h]
    rows = [[sum(h[k] * p.c[i][j][k] for k in range(n)) for j in range(n)] for i in range(n)]
    return BilinearForm(rows, F)


def coboundary_matrix(p):
    """n^2 x n matrix whose column k is delta e_k^* as a vector."""
    n = p.dim
    rows = tuple(tuple(p.c[i][j][k] for k in range(n)) for i in range(n) for j in range(n))
    return Matrix._raw(rows, p.field, n)


def coboundary_space(p):
    n = p.dim
    F = p.field
    basis = [coboundary(p, [F.one if k == t else F.zero for k in range(n)]).vector() for t in range(n)]
    return Subspace(basis, n * n, F)


class CohomologySpace:
    """H^2 of a pair: forms modulo coboundaries, with canonical cosets."""

    def __init__(self, base):
        self.base = base
        self.field = base.field
        n = base.dim
        self.coboundary = coboundary_space(base)
        self.h2_dim = n * n - self.coboundary.dim
        # the complement is spanned by the Delta_ij at non-pivot positions
        self.free = self.coboundary.complement_pivots()
        self.representatives = [
            BilinearForm.delta(q // n + 1, q % n + 1, n, self.field) for q in self.free
        ]

    @property
    def base_dim(self):
        return self.base.dim

    def reduce_vector(self, v):
        return self.coboundary.reduce(v)

    def coords(self, f):
        """Coordinates of [f] in the basis of representatives."""
        v = self.coboundary.reduce(f.vector())
        return tuple(v[q] for q in self.free)

    def lift(self, coords):
        F = self.field
        n = self.base.dim
        v = [F.zero] * (n * n)
        for q, x in zip(self.free, coords):
            v[q] = F(x)
        return BilinearForm.from_vector(v, n, F)

    def reduce(self, f):
        return reduce(self, f)

    def __repr__(self):
        return f"CohomologySpace(h2_dim={self.h2_dim}, reps={self.representatives})"


class H2Class:
    __slots__ = ("space", "rep")

    def __init__(self, space, rep):
        self.space = space
        self.rep = rep

    @property
    def coords(self):
        return tuple(self.rep.vector()[q] for q in self.space.free)

    def is_zero(self):
        return self.rep.is_zero()

    def __eq__(self, other):
        return isinstance(other, H2Class) and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return f"[{self.rep!r}]"


def cohomology(p):
    return CohomologySpace(p)


def reduce(space, f):
    if f.base_dim != space.base.dim:
        raise ValueError("form and cohomology space disagree on dimension")
    v = space.coboundary.reduce(f.vector())
    return H2Class(space, BilinearForm.from_vector(v, f.base_dim, f.field))


# -- extensions ---------------------------------------------------------------


def build_extension(base, theta):
    theta = as_cocycle(theta, base.dim, base.field)
    if theta.base_dim != base.dim:
        raise ValueError(f"cocycle is defined on dimension {theta.base_dim}, base has {base.dim}")
    F = base.field
    nb = base.dim
    m = theta.m
    n = nb + m
    zero = (F.zero,) * n
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < nb and j < nb:
                row.append(base.c[i][j] + tuple(th.coords[i][j] for th in theta))
            else:
                row.append(zero)
        table.append(tuple(row))
    return BilinearPair._raw(n, F, tuple(table))


def form_radical(theta, n, field):
    """rad(theta): v with theta_i(e_j, v) = theta_i(v, e_j) = 0 for all i, j."""
    theta = as_cocycle(theta, n, field)
    rows = []
    for th in theta:
        for j in range(n):
            rows.append(th.coords[j])
            rows.append(tuple(th.coords[l][j] for l in range(n)))
    if n == 0:
        return Subspace.zero(0, field)
    if not rows:
        return Subspace.full(n, field)
    return kernel(Matrix._raw(tuple(rows), field, n))


def radical_overlap(base, theta):
    return subspace_intersect(radical(base), form_radical(theta, base.dim, base.field))


def radical_of_extension(base, theta, check=True):
    theta = as_cocycle(theta, base.dim, base.field)
    F = base.field
    nb, m = base.dim, theta.m
    inter = radical_overlap(base, theta)
    vecs = [v + (F.zero,) * m for v in inter.basis]
    for t in range(m):
        vecs.append(tuple(F.one if k == nb + t else F.zero for k in range(nb + m)))
    out = Subspace(vecs, nb + m, F)
    if check:
        direct = radical(build_extension(base, theta))
        if direct != out:
            raise AssertionError("radical of extension disagrees with direct computation")
    return out


def class_matrix(space, theta):
    return [space.coords(th) for th in theta]


def _check_overlap(base, theta):
    if radical_overlap(base, theta).dim:
        raise RadicalOverlap("rad(base) ∩ rad(theta) is nonzero")


def has_radical_component(base, theta, space=None):
    theta = as_cocycle(theta, base.dim, base.field)
    _check_overlap(base, theta)
    space = space or cohomology(base)
    rows = class_matrix(space, theta)
    sub = Subspace(rows, space.h2_dim, base.field)
    return sub.dim < theta.m


def act(phi, f):
    """(phi . f)(x, y) = f(phi x, phi y); a right action."""
    F = f.field
    n = f.base_dim
    if phi.shape != (n, n):
        raise ValueError("matrix and form disagree on dimension")
    P = phi.rows
    C = f.coords
    p = F.modulus
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = 0
            for a in range(n):
                pa = P[a][i]
                if not pa:
                    continue
                Ca = C[a]
                for b in range(n):
                    if Ca[b]:
                        s += pa * P[b][j] * Ca[b]
            row.append(s % p if p else s)
        out.append(tuple(row))
    g = object.__new__(BilinearForm)
    g.coords = tuple(out)
    g.field = F
    g.base_dim = n
    return g


def class_span(space, theta):
    return Subspace(class_matrix(space, theta), space.h2_dim, space.field)


def extensions_equivalent(base, theta, mu, aut, space=None):
    """Lemma-level test: some phi in aut carries span[theta] onto span[mu]."""
    theta = as_cocycle(theta, base.dim, base.field)
    mu = as_cocycle(mu, base.dim, base.field)
    space = space or cohomology(base)
    for c in (theta, mu):
        _check_overlap(base, c)
        if has_radical_component(base, c, space):
            raise RadicalComponentPresent("extension has a radical component")
    if theta.m != mu.m:
        return False
    target = class_span(space, mu)
    elements = aut.elements if hasattr(aut, "elements") else aut
    for phi in elements:
        if class_span(space, [act(phi, th) for th in theta]) == target:
            return True
    return False


# -- splitting off radical components ---------------------------------------------


def _embed(block, n, field):
    """Pad a square block with the identity up to size n."""
    k = block.nrows
    rows = [tuple(r) + tuple(field.zero for _ in range(n - k)) for r in block.rows]
    for i in range(k, n):
        rows.append(tuple(field.one if j == i else field.zero for j in range(n)))
    return Matrix._raw(tuple(rows), field, n)


def strip_components(p):
    """Return (core, t, phi) with phi p = core (+) k^t and core component-free."""
    F = p.field
    n = p.dim
    if radical(p).dim == 0:
        return p, 0, Matrix.identity(n, F)
    dec = decompose(p)
    base = dec.base
    theta = list(dec.theta)
    P = dec.projection
    nb = base.dim
    space = cohomology(base)
    cob = coboundary_matrix(base)
    dropped = 0
    while theta:
        m = len(theta)
        rows = class_matrix(space, theta)
        # a with sum a_i [theta_i] = 0
        mt = Matrix._raw(tuple(tuple(r[q] for r in rows) for q in range(space.h2_dim)), F, m)
        deps = kernel(mt)
        if deps.dim == 0:
            break
        a = deps.basis[0]
        i0 = deps.pivots[0]  # a[i0] == 1
        size = nb + m
        # recombine W so that component i0 becomes sum a_i theta_i
        M = [[F.one if r == c else F.zero for c in range(size)] for r in range(size)]
        for i in range(m):
            M[nb + i0][nb + i] = a[i]
        combo = theta[0].scale(a[0])
        for i in range(1, m):
            combo = combo + theta[i].scale(a[i])
        h = solve(cob, combo.vector())
        assert h is not None, "dependent classes must give a coboundary"
        # (u, w) -> (u, w - h(u) e_i0) removes the coboundary
        S = [[F.one if r == c else F.zero for c in range(size)] for r in range(size)]
        for k in range(nb):
            S[nb + i0][k] = F.neg(h[k])
        order = list(range(nb)) + [nb + i for i in range(m) if i != i0] + [nb + i0]
        Q = [[F.one if c == order[r] else F.zero for c in range(size)] for r in range(size)]
        T = Matrix._raw(tuple(map(tuple, Q)), F, size) @ Matrix._raw(tuple(map(tuple, S)), F, size) \
            @ Matrix._raw(tuple(map(tuple, M)), F, size)
        P = _embed(T, n, F) @ P
        theta = [theta[i] for i in range(m) if i != i0]
        dropped += 1
    core = build_extension(base, Cocycle(theta, nb, F))
    t = n - core.dim
    assert t == dropped
    if __debug__:
        from .pair import add_radical_components

        assert is_witness(p, add_radical_components(core, t), P), "component stripping lost equivalence"
    return core, t, P
