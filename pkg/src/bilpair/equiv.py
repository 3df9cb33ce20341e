"""Exhaustive equivalence and automorphism search over F_p.

The default search extends a partial linear map one basis vector at a
time and closes it under products (phi(x*y) must equal phi(x)*phi(y)),
so a branch dies as soon as any product disagrees.  Candidate images
are restricted to vectors with the same invariant signature.  Every
branch of every choice is explored, so the search is exhaustive; the
plain GL sweep is kept as an independent cross-check.
"""

from collections import Counter
from functools import lru_cache

from .exactlin import (
    EnumerationUnsupported,
    Matrix,
    Subspace,
    all_vectors,
    enumerate_gl,
    rank,
    subspace_intersect,
    subspace_sum,
)
from .pair import is_witness, left_operator, product_space, radical, right_operator


class BudgetExceeded(RuntimeError):
    pass


class FieldMismatch(ValueError):
    pass


FINGERPRINT_VECTOR_LIMIT = 4096


def within_budget(n, p):
    return (n <= 5 and p <= 3) or (n <= 3 and p <= 7)


def check_budget(n, field, force=False):
    if not field.is_prime_field:
        raise EnumerationUnsupported("equivalence search needs a prime field")
    if not force and not within_budget(n, field.modulus):
        raise BudgetExceeded(
            f"dim {n} over F_{field.modulus} is outside the search budget "
            "(n <= 5 with p <= 3, or n <= 3 with p <= 7); pass force=True to override"
        )


class EquivalenceWitness:
    __slots__ = ("phi",)

    def __init__(self, phi):
        self.phi = phi

    def __repr__(self):
        return f"EquivalenceWitness({self.phi!r})"


class AutomorphismGroup:
    def __init__(self, base, elements):
        self.base = base
        self.elements = list(elements)

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def check_group(self):
        n = self.base.dim
        F = self.base.field
        keys = set(self.elements)
        if Matrix.identity(n, F) not in keys:
            return False
        for g in self.elements:
            if g.inverse() not in keys:
                return False
        for g in self.elements:
            for h in self.elements:
                if g @ h not in keys:
                    return False
        return True


# -- invariants -----------------------------------------------------------------


def _mul_spaces(p, s, t):
    """span of s*t over basis vectors."""
    n = p.dim
    vecs = [p.product(x, y) for x in s.basis for y in t.basis]
    return Subspace(vecs, n, p.field)


def annihilators(p):
    """(left, right) annihilators: {v : v*V = 0}, {v : V*v = 0}."""
    from .exactlin import kernel

    n = p.dim
    F = p.field
    if n == 0:
        return Subspace.zero(0, F), Subspace.zero(0, F)
    left = [tuple(p.c[j][i][k] for j in range(n)) for i in range(n) for k in range(n)]
    right = [tuple(p.c[i][j][k] for j in range(n)) for i in range(n) for k in range(n)]
    return kernel(Matrix._raw(tuple(left), F, n)), kernel(Matrix._raw(tuple(right), F, n))


@lru_cache(maxsize=512)
def invariant_subspaces(p):
    """Canonically defined subspaces, in a fixed order."""
    n = p.dim
    full = Subspace.full(n, p.field)
    rad = radical(p)
    sq = product_space(p)
    lann, rann = annihilators(p)
    cube = subspace_sum(_mul_spaces(p, full, sq), _mul_spaces(p, sq, full))
    return (rad, sq, lann, rann, subspace_intersect(rad, sq), cube, subspace_sum(rad, sq))


def _generated_dim(p, v):
    """Dimension of the subalgebra generated by v."""
    F = p.field
    sub = Subspace([v], p.dim, F)
    frontier = list(sub.basis)
    while frontier:
        new = []
        for x in frontier:
            for y in sub.basis:
                for z in (p.product(x, y), p.product(y, x)):
                    if z not in sub:
                        sub = Subspace(sub.basis + (z,), p.dim, F)
                        new.append(z)
        frontier = new
    return sub.dim


def _vector_signature(p, subs, v):
    """Invariants of v that any equivalence must carry to phi(v)."""
    F = p.field
    n = p.dim
    L = left_operator(p, v)
    R = right_operator(p, v)
    img_l = Subspace(L.columns(), n, F)
    img_r = Subspace(R.columns(), n, F)
    both = Matrix._raw(L.rows + R.rows, F, n)
    sq = p.product(v, v)
    return (
        tuple(v in s for s in subs),
        tuple(sq in s for s in subs),
        img_l.dim,
        img_r.dim,
        rank(both),
        subspace_sum(img_l, img_r).dim,
        tuple(subspace_intersect(img_l, s).dim for s in subs[:2]),
        tuple(subspace_intersect(img_r, s).dim for s in subs[:2]),
        Subspace([v, sq], n, F).dim,
        _generated_dim(p, v),
    )


@lru_cache(maxsize=256)
def signature_classes(p):
    """Map signature -> list of vectors (lexicographic) for a prime-field pair."""
    subs = invariant_subspaces(p)
    F = p.field
    classes = {}
    # every signature entry is unchanged by v -> c*v, so compute one per line
    by_line = {}
    for v in all_vectors(p.dim, F):
        lead = next((x for x in v if x), None)
        key = v if lead is None else tuple(F.div(x, lead) for x in v)
        sig = by_line.get(key)
        if sig is None:
            sig = by_line[key] = _vector_signature(p, subs, key)
        classes.setdefault(sig, []).append(v)
    return classes


def invariant_fingerprint(p):
    subs = invariant_subspaces(p)
    rad, sq, lann, rann, radsq, cube, radplus = subs
    fp = [p.dim, rad.dim, sq.dim, lann.dim, rann.dim, radsq.dim, cube.dim, radplus.dim]
    # rank profile of the left/right multiplication operators over all
    # vectors (with the other per-vector invariants) when enumerable
    F = p.field
    if F.is_prime_field and F.modulus ** p.dim <= FINGERPRINT_VECTOR_LIMIT:
        hist = Counter()
        for sig, vecs in signature_classes(p).items():
            hist[sig] = len(vecs)
        fp.append(tuple(sorted(hist.items())))
    return tuple(fp)


# -- search ---------------------------------------------------------------------


class _PartialMap:
    """Linear map on span(src) given by src[i] -> img[i].

    Rows are kept reduced as [s | t] with s in RREF, which lets us test
    membership and evaluate the map in one pass.
    """

    __slots__ = ("p", "n", "rows", "pivots", "img_rows", "img_pivots", "pairs")

    def __init__(self, p, n):
        self.p = p
        self.n = n
        self.rows = []
        self.pivots = []
        self.img_rows = []
        self.img_pivots = []
        self.pairs = []

    def copy(self):
        c = _PartialMap(self.p, self.n)
        c.rows = list(self.rows)
        c.pivots = list(self.pivots)
        c.img_rows = list(self.img_rows)
        c.img_pivots = list(self.img_pivots)
        c.pairs = list(self.pairs)
        return c

    def _reduce(self, z):
        """Return (residual, phi of the removed part)."""
        p, n = self.p, self.n
        z = list(z)
        acc = [0] * n
        for (s, t), c in zip(self.rows, self.pivots):
            f = z[c]
            if f:
                z = [(a - f * b) % p for a, b in zip(z, s)]
                acc = [(a + f * b) % p for a, b in zip(acc, t)]
        return z, acc

    def image_of(self, z):
        res, acc = self._reduce(z)
        if any(res):
            return None
        return tuple(acc)

    def _img_reduce(self, w):
        p = self.p
        w = list(w)
        for r, c in zip(self.img_rows, self.img_pivots):
            f = w[c]
            if f:
                w = [(a - f * b) % p for a, b in zip(w, r)]
        return w

    def img_contains(self, w):
        return not any(self._img_reduce(w))

    def add(self, x, y):
        p = self.p
        wr = self._img_reduce(y)
        if not any(wr):
            return False
        res, acc = self._reduce(x)
        # image of the residual is y minus the image of the removed part
        t = [(a - b) % p for a, b in zip(y, acc)]
        c = next(i for i, v in enumerate(res) if v)
        iv = pow(res[c], -1, p)
        s = [v * iv % p for v in res]
        t = [v * iv % p for v in t]
        new_rows = []
        for (s2, t2), c2 in zip(self.rows, self.pivots):
            f = s2[c]
            if f:
                s2 = [(a - f * b) % p for a, b in zip(s2, s)]
                t2 = [(a - f * b) % p for a, b in zip(t2, t)]
            new_rows.append((s2, t2))
        new_rows.append((s, t))
        order = sorted(range(len(new_rows)), key=lambda i: (self.pivots + [c])[i])
        allp = self.pivots + [c]
        self.rows = [new_rows[i] for i in order]
        self.pivots = [allp[i] for i in order]
        # image echelon (plain row echelon suffices for membership)
        cw = next(i for i, v in enumerate(wr) if v)
        iv = pow(wr[cw], -1, p)
        wr = [v * iv % p for v in wr]
        img_rows = []
        for r, c2 in zip(self.img_rows, self.img_pivots):
            f = r[cw]
            if f:
                r = [(a - f * b) % p for a, b in zip(r, wr)]
            img_rows.append(r)
        img_rows.append(wr)
        self.img_rows = img_rows
        self.img_pivots = self.img_pivots + [cw]
        self.pairs.append((tuple(x), tuple(y)))
        return True

    @property
    def dim(self):
        return len(self.pairs)

    def matrix(self, field):
        """Matrix of the map once the domain is everything."""
        cols = [self.image_of(tuple(1 if k == j else 0 for k in range(self.n))) for j in range(self.n)]
        return Matrix.from_columns(cols, field, self.n)


def _overlap(pm, sub, field):
    dom = Subspace([r[0] for r in pm.rows], pm.n, field)
    return subspace_intersect(dom, sub).dim


class _Searcher:
    def __init__(self, a, b, sig_a, sig_b, classes_b):
        self.sq_a = product_space(a)
        self.a = a
        self.b = b
        self.n = a.dim
        self.p = a.field.modulus
        self.sig_a = sig_a
        self.sig_b = sig_b
        self.classes_b = classes_b

    def close(self, pm, start):
        """Propagate products from pair index `start` on; False on conflict."""
        a, b = self.a, self.b
        i = start
        while i < len(pm.pairs):
            x, y = pm.pairs[i]
            for j in range(i + 1):
                x2, y2 = pm.pairs[j]
                for z, w in ((a.product(x, x2), b.product(y, y2)), (a.product(x2, x), b.product(y2, y))):
                    img = pm.image_of(z)
                    if img is not None:
                        if img != w:
                            return False
                    else:
                        if self.sig_a(z) != self.sig_b(w):
                            return False
                        if not pm.add(z, w):
                            return False
            i += 1
        return True

    def branch_vector(self, pm):
        """Next basis vector to map: generators (outside domain + V*V) first,
        then the one whose candidate class is smallest."""
        sq = self.sq_a
        best = None
        for t in range(self.n):
            e = tuple(1 if k == t else 0 for k in range(self.n))
            if pm.image_of(e) is not None:
                continue
            outside = Subspace([r[0] for r in pm.rows] + list(sq.basis) + [e], self.n, self.a.field).dim \
                > len(pm.rows) + sq.dim - _overlap(pm, sq, self.a.field)
            key = (not outside, len(self.classes_b.get(self.sig_a(e), ())))
            if best is None or key < best[0]:
                best = (key, e)
        return best[1] if best else None

    def run(self, pm, start, collect):
        if not self.close(pm, start):
            return
        if pm.dim == self.n:
            collect.append(pm.matrix(self.a.field))
            return
        x = self.branch_vector(pm)
        for y in self.classes_b.get(self.sig_a(x), ()):
            if pm.img_contains(y):
                continue
            child = pm.copy()
            if not child.add(x, y):
                continue
            self.run(child, child.dim - 1, collect)
            if collect and self.first_only:
                return


def _search(a, b, first_only):
    subs_a = invariant_subspaces(a)
    subs_b = invariant_subspaces(b)
    if [s.dim for s in subs_a] != [s.dim for s in subs_b]:
        return []
    cache_a, cache_b = {}, {}

    def sig_a(v):
        v = tuple(v)
        if v not in cache_a:
            cache_a[v] = _vector_signature(a, subs_a, v)
        return cache_a[v]

    def sig_b(v):
        v = tuple(v)
        if v not in cache_b:
            cache_b[v] = _vector_signature(b, subs_b, v)
        return cache_b[v]

    classes_b = signature_classes(b)
    s = _Searcher(a, b, sig_a, sig_b, classes_b)
    s.first_only = first_only
    out = []
    if a.dim == 0:
        return [Matrix._raw(tuple(), a.field, 0)]
    s.run(_PartialMap(a.field.modulus, a.dim), 0, out)
    return out


def _check_pair(a, b):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")


def are_equivalent_bruteforce(a, b, force=False, method="search"):
    """Witness phi with apply_change_of_basis(a, phi) == b, or None."""
    _check_pair(a, b)
    if a.dim != b.dim:
        return None
    check_budget(a.dim, a.field, force)
    if invariant_fingerprint(a) != invariant_fingerprint(b):
        return None
    if method == "sweep":
        for phi in enumerate_gl(a.dim, a.field):
            if is_witness(a, b, phi):
                return EquivalenceWitness(phi)
        return None
    found = _search(a, b, first_only=True)
    if not found:
        return None
    phi = found[0]
    if not is_witness(a, b, phi):
        raise AssertionError("search produced an invalid witness")
    return EquivalenceWitness(phi)


def equivalent(a, b, force=False):
    return are_equivalent_bruteforce(a, b, force=force) is not None


def automorphism_group(p, force=False, method="search"):
    """All invertible phi with phi(x*y) = phi(x)*phi(y).

    ``method="search"`` uses the pruned exhaustive search; ``"sweep"``
    filters every element of GL(n, p), the reference definition.
    """
    check_budget(p.dim, p.field, force)
    if method == "sweep":
        elems = [phi for phi in enumerate_gl(p.dim, p.field) if is_witness(p, p, phi)]
    else:
        elems = sorted(_search(p, p, first_only=False), key=lambda m: m.rows)
    return AutomorphismGroup(p, elems)
