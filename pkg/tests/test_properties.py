"""Structural properties checked on random small pairs."""

from hypothesis import given, strategies as st

from bilpair.classify import enumerate_ts, orbit_partition
from bilpair.cohom import BilinearForm, Cocycle, build_extension, coboundary, cohomology
from bilpair.equiv import are_equivalent_bruteforce, automorphism_group
from bilpair.exactlin import Field, Matrix, Subspace, enumerate_grassmannian
from bilpair.pair import apply_change_of_basis, is_witness, opposite, radical

import oracles
from test_pair import invertibles, pairs


def transpose(f):
    n = f.base_dim
    return BilinearForm([[f.coords[j][i] for j in range(n)] for i in range(n)], f.field)


@st.composite
def forms(draw, n, p):
    vals = draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    return BilinearForm.from_vector(vals, n, Field(p))


@given(pairs(n=2, p=3), st.data())
def test_coboundary_shift_is_an_equivalence(g, data):
    theta = data.draw(forms(2, 3))
    h = data.draw(st.lists(st.integers(0, 2), min_size=2, max_size=2))
    a = build_extension(g, Cocycle([theta]))
    b = build_extension(g, Cocycle([theta + coboundary(g, h)]))
    # (u, w) -> (u, w + h(u)) carries one onto the other
    F = g.field
    phi = Matrix([[1, 0, 0], [0, 1, 0], [h[0], h[1], 1]], F)
    assert is_witness(a, b, phi)
    assert are_equivalent_bruteforce(a, b) is not None


@given(pairs(n=2, p=3), st.data())
def test_opposite_extension_commutes(g, data):
    theta = [data.draw(forms(2, 3)) for _ in range(data.draw(st.integers(1, 2)))]
    ext = build_extension(g, Cocycle(theta))
    assert opposite(ext) == build_extension(opposite(g), Cocycle([transpose(f) for f in theta]))


@given(pairs(n=2, p=2), st.integers(1, 2))
def test_opposite_has_same_orbit_count(g, s):
    h = cohomology(g).h2_dim
    if s > h:
        return
    a = orbit_partition(g, s)
    b = orbit_partition(opposite(g), s)
    assert len(a) == len(b)
    assert sorted(o.size for o in a.orbits) == sorted(o.size for o in b.orbits)


@given(pairs(n=2, p=3), st.integers(1, 2), st.data())
def test_orbit_count_invariant_under_change_of_basis(g, s, data):
    if s > cohomology(g).h2_dim:
        return
    phi = data.draw(invertibles(2, 3))
    a = orbit_partition(g, s)
    b = orbit_partition(apply_change_of_basis(g, phi), s)
    assert len(a) == len(b) and a.total == b.total
    assert sorted(o.size for o in a.orbits) == sorted(o.size for o in b.orbits)


@given(pairs(n=2, p=3), st.integers(1, 3))
def test_partition_sizes(g, s):
    space = cohomology(g)
    if s > space.h2_dim:
        return
    aut = automorphism_group(g)
    rep = orbit_partition(g, s, aut=aut, space=space)
    members = [m for o in rep.orbits for m in o.members]
    assert len(members) == len(set(members)) == rep.total == sum(o.size for o in rep.orbits)
    assert all(aut.order % o.size == 0 for o in rep.orbits)
    # T_s against a direct filter on the Grassmannian
    rad = radical(g)
    direct = 0
    for sub in enumerate_grassmannian(space.h2_dim, s, g.field):
        ext = build_extension(g, Cocycle([space.lift(r) for r in sub.basis]))
        direct += radical(ext).dim == s or rad.dim == 0
    assert direct == rep.total


@given(pairs(n=2, p=2), st.integers(1, 2))
def test_ts_elements_have_exact_radical(g, s):
    if s > cohomology(g).h2_dim:
        return
    for e in enumerate_ts(g, s):
        assert radical(build_extension(g, e.cocycle())).dim == s


@given(pairs(n=2, p=2), st.data())
def test_component_detection_matches_definition(g, data):
    theta = Cocycle([data.draw(forms(2, 2)) for _ in range(data.draw(st.integers(1, 2)))])
    from bilpair.cohom import has_radical_component, radical_overlap

    if radical_overlap(g, theta).dim:
        return
    ext = build_extension(g, theta)
    assert has_radical_component(g, theta) == oracles.naive_has_component(ext.c, 2)


def test_subspace_helper_sanity():
    F = Field(2)
    assert Subspace([(1, 1)], 2, F).dim == 1
