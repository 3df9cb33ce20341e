"""Classification of radical extensions by orbits on T_s.

For a base pair g with cohomology H^2, T_s is the set of s-dimensional
subspaces of H^2 whose lifted representatives theta_1..theta_s satisfy
rad(theta_1) ∩ ... ∩ rad(theta_s) ∩ rad(g) = 0.  Orbits of the
automorphism group of g on T_s correspond to the equivalence classes of
extensions with an s-dimensional radical and no radical component.
"""

from collections import deque

from .cohom import (
    Cocycle,
    act,
    build_extension,
    coboundary,
    cohomology,
    radical_overlap,
)
from .equiv import (
    BudgetExceeded,
    are_equivalent_bruteforce,
    automorphism_group,
    invariant_fingerprint,
)
from .exactlin import Subspace, enumerate_grassmannian, gaussian_binomial
from .pair import add_radical_components, radical, serialize, strip_radical_components

# subspaces of H^2 visited by one orbit_partition call
TS_LIMIT = 200_000
# |T_s| times |Aut| images computed by one orbit_partition call
ACTION_LIMIT = 250_000


class TsElement:
    __slots__ = ("s", "subspace", "certificate")

    def __init__(self, s, subspace, certificate):
        self.s = s
        self.subspace = subspace
        self.certificate = certificate

    def cocycle(self):
        return Cocycle(self.certificate)

    def __eq__(self, other):
        return isinstance(other, TsElement) and self.subspace == other.subspace

    def __hash__(self):
        return hash(self.subspace)

    def __repr__(self):
        return f"TsElement(s={self.s}, {self.certificate!r})"


class Orbit:
    __slots__ = ("representative", "size", "members")

    def __init__(self, representative, size, members=()):
        self.representative = representative
        self.size = size
        self.members = tuple(members)

    def __repr__(self):
        return f"Orbit(size={self.size}, rep={self.representative!r})"


class OrbitReport:
    def __init__(self, base, s, orbits, total):
        self.base = base
        self.s = s
        self.orbits = orbits
        self.total = total

    def __len__(self):
        return len(self.orbits)

    def __repr__(self):
        return f"OrbitReport(s={self.s}, orbits={len(self.orbits)}, total={self.total})"


def _lift(space, subspace):
    return [space.lift(row) for row in subspace.basis]


def passes_filter(base, forms):
    """T_s membership test on representatives: no common radical vector with g."""
    return radical_overlap(base, Cocycle(forms, base.dim, base.field)).dim == 0


def _shifted(base, forms):
    """Same classes with a coboundary added to each representative."""
    F = base.field
    out = []
    for t, f in enumerate(forms):
        h = [F(t + k + 1) for k in range(base.dim)]
        out.append(f + coboundary(base, h))
    return out


def enumerate_ts(base, s, space=None, check=__debug__):
    """Yield every element of T_s(base), in Grassmannian enumeration order."""
    space = space or cohomology(base)
    if not 1 <= s <= space.h2_dim:
        raise ValueError(f"s must lie in 1..{space.h2_dim}, got {s}")
    rad_g = radical(base).dim
    for sub in enumerate_grassmannian(space.h2_dim, s, base.field):
        forms = _lift(space, sub)
        ok = rad_g == 0 or passes_filter(base, forms)
        if check and rad_g:
            # coboundaries vanish on rad(g), so the filter cannot depend on the lift
            if passes_filter(base, _shifted(base, forms)) != ok:
                raise AssertionError("T_s filter depends on the coset representative")
        if ok:
            yield TsElement(s, sub, forms)


def class_action_matrices(space, aut):
    """For each phi, the matrix of [f] -> [f o (phi x phi)] on H^2 coordinates."""
    mats = []
    for phi in aut:
        mats.append(tuple(space.coords(act(phi, r)) for r in space.representatives))
    return mats


def _image(sub, mat, field):
    p = field.modulus
    h = len(mat)
    rows = []
    for row in sub.basis:
        out = [0] * h
        for k, c in enumerate(row):
            if c:
                mk = mat[k]
                for j in range(h):
                    out[j] += c * mk[j]
        rows.append(tuple(x % p for x in out))
    return Subspace(rows, h, field)


def orbit_partition(base, s, aut=None, space=None, force=False):
    """Orbits of the automorphism group on T_s, closed by breadth-first search."""
    space = space or cohomology(base)
    F = base.field
    if not 1 <= s <= space.h2_dim:
        raise ValueError(f"s must lie in 1..{space.h2_dim}, got {s}")
    if not force and gaussian_binomial(space.h2_dim, s, F.modulus) > TS_LIMIT:
        raise BudgetExceeded("T_s is too large to enumerate; pass force=True to override")
    if aut is None:
        aut = automorphism_group(base, force=force)
    if not force and gaussian_binomial(space.h2_dim, s, F.modulus) * len(aut) > ACTION_LIMIT:
        raise BudgetExceeded("orbit closure is too large; pass force=True to override")
    elements = {e.subspace: e for e in enumerate_ts(base, s, space)}
    mats = class_action_matrices(space, aut)
    seen = set()
    orbits = []
    for start in elements:
        if start in seen:
            continue
        seen.add(start)
        members = [start]
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for mat in mats:
                img = _image(cur, mat, F)
                if img not in elements:
                    raise AssertionError("automorphism maps a T_s element outside T_s")
                if img not in seen:
                    seen.add(img)
                    members.append(img)
                    queue.append(img)
        rep = min(members)
        orbits.append(Orbit(elements[rep], len(members), sorted(members)))
    orbits.sort(key=lambda o: o.representative.subspace)
    return OrbitReport(base, s, orbits, len(elements))


def representatives(base, s, aut=None, space=None, force=False):
    """One extension per orbit on T_s."""
    if s < 1:
        raise ValueError("s must be at least 1")
    report = orbit_partition(base, s, aut=aut, space=space, force=force)
    return [build_extension(base, o.representative.cocycle()) for o in report.orbits]


# -- reports ---------------------------------------------------------------------


def _rref_text(sub, field):
    return ";".join(",".join(field.format(x) for x in row) for row in sub.basis)


def report_tsv(report, name="base"):
    F = report.base.field
    lines = ["base\ts\torbit_index\torbit_size\trepresentative_subspace_rref"]
    for k, o in enumerate(report.orbits):
        lines.append(f"{name}\t{report.s}\t{k}\t{o.size}\t{_rref_text(o.representative.subspace, F)}")
    return "\n".join(lines) + "\n"


def write_report(report, outdir, name="base"):
    """Write the TSV plus one .bp file per representative."""
    import os

    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, f"{name}_s{report.s}.tsv"), "w") as fh:
        fh.write(report_tsv(report, name))
    paths = []
    for k, o in enumerate(report.orbits):
        path = os.path.join(outdir, f"{name}_s{report.s}_{k}.bp")
        with open(path, "w") as fh:
            fh.write(serialize(build_extension(report.base, o.representative.cocycle())))
        paths.append(path)
    return paths


# -- codimension two -------------------------------------------------------------


class ClassEntry:
    """pair = core (+) k^components, with core free of radical components."""

    __slots__ = ("pair", "core", "base_index", "s_core", "components")

    def __init__(self, core, base_index, s_core, components):
        self.core = core
        self.pair = add_radical_components(core, components)
        self.base_index = base_index
        self.s_core = s_core
        self.components = components

    @property
    def has_component(self):
        return self.components > 0

    def __repr__(self):
        return f"ClassEntry(base={self.base_index}, s={self.s_core}, components={self.components})"


class CodimTwoReport:
    def __init__(self, n, entries, orbit_counts, diagnostic=None):
        self.n = n
        self.entries = entries
        self.orbit_counts = orbit_counts
        self.diagnostic = diagnostic

    @property
    def component_free(self):
        return [e for e in self.entries if not e.has_component]

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"CodimTwoReport(n={self.n}, classes={len(self.entries)}, component_free={len(self.component_free)})"


def _dedupe(entries, force):
    # X (+) k^a and Y (+) k^b with component-free X, Y are equivalent
    # exactly when a = b and X ~ Y, so only the cores are compared
    kept = []
    buckets = {}
    for e in entries:
        key = (e.components, invariant_fingerprint(e.core))
        bucket = buckets.setdefault(key, [])
        if any(are_equivalent_bruteforce(k.core, e.core, force=force) for k in bucket):
            continue
        bucket.append(e)
        kept.append(e)
    return kept


def classify_codim2(bases, n, field=None, force=False):
    """n-dim pairs with an (n-2)-dim radical built from the given 2-dim bases.

    Complete only relative to the supplied base list.  Each output
    records how many radical components it splits into.
    """
    bases = list(bases)
    for b in bases:
        if b.dim != 2:
            raise ValueError("every base must be two-dimensional")
        if field is not None and b.field != field:
            raise ValueError("base field does not match")
    s = n - 2
    if s < 1:
        raise ValueError("n must be at least 3")
    if s > 4:
        return CodimTwoReport(
            n, [], {},
            diagnostic=(
                f"no component-free pair exists for n={n}: H^2 of a 2-dim base has "
                f"dimension at most 4, so every such pair has at least {n - 6} radical components"
            ),
        )
    raw = []
    counts = {}
    for idx, b in enumerate(bases):
        space = cohomology(b)
        aut = automorphism_group(b, force=force)
        zero_rad = radical(b).dim == 0
        for s_core in range(0, s + 1):
            if s_core == 0:
                if zero_rad:
                    raw.append(ClassEntry(b, idx, 0, s))
                continue
            if s_core > space.h2_dim:
                break
            reps = representatives(b, s_core, aut=aut, space=space, force=force)
            counts[(idx, s_core)] = len(reps)
            for r in reps:
                raw.append(ClassEntry(r, idx, s_core, s - s_core))
    if __debug__:
        for e in raw:
            if radical(e.pair).dim != s:
                raise AssertionError("tower element has the wrong radical dimension")
            if e.s_core and strip_radical_components(e.core)[1] != 0:
                raise AssertionError("orbit representative splits off a component")
    return CodimTwoReport(n, _dedupe(raw, force), counts)
