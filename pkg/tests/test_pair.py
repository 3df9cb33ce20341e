import pytest
from hypothesis import given, strategies as st

from bilpair.exactlin import Field, Matrix, enumerate_gl
from bilpair.pair import (
    BilinearPair,
    NothingToDecompose,
    ParseError,
    add_radical_components,
    apply_change_of_basis,
    decompose,
    is_witness,
    opposite,
    parse,
    quotient_by_radical,
    radical,
    serialize,
    strip_radical_components,
)
from bilpair.cohom import build_extension

import oracles

A3_EXT = """field p=7
dim 3
e1*e1 = 1*e2
e2*e2 = 1*e3
"""


def test_radical_of_a3_extension():
    p = parse(A3_EXT)
    rad = radical(p)
    assert rad.dim == 1
    assert rad.basis == ((0, 0, 1),)


def test_parse_rejects_bad_input():
    with pytest.raises(ParseError):
        parse("field p=4\ndim 2\n")
    with pytest.raises(ParseError):
        parse("field p=5\ndim 2\ne1*e3 = e1\n")
    with pytest.raises(ParseError):
        parse("field p=5\ndim 2\ne1*e1 = e1\ne1*e1 = e2\n")


def test_parse_rational_coefficients():
    p = parse("field rational\ndim 2\ne1*e2 = 1/2*e1 + -3*e2\n")
    assert serialize(p) == "field rational\ndim 2\ne1*e2 = 1/2*e1 + -3*e2\n"


def test_pairs_are_immutable():
    p = parse(A3_EXT)
    with pytest.raises(AttributeError):
        p.dim = 4


def test_quotient_recovers_base():
    p = parse(A3_EXT)
    q = quotient_by_radical(p)
    assert q.dim == 2
    assert q.c[0][0] == (0, 1)


def test_decompose_zero_radical_refuses():
    F = Field(3)
    p = BilinearPair.from_products(1, F, {(1, 1): {1: 1}})
    with pytest.raises(NothingToDecompose):
        decompose(p)


def test_add_and_strip_components():
    p = parse(A3_EXT)
    big = add_radical_components(p, 2)
    assert radical(big).dim == 3
    core, t, phi = strip_radical_components(big, with_witness=True)
    assert t == 2 and core.dim == 3
    assert apply_change_of_basis(big, phi) == add_radical_components(core, t)


@st.composite
def pairs(draw, n=None, p=None):
    p = p or draw(st.sampled_from([2, 3, 5]))
    n = n or draw(st.integers(1, 3))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=n ** 3, max_size=n ** 3))
    c = [[tuple(vals[(i * n + j) * n:(i * n + j + 1) * n]) for j in range(n)] for i in range(n)]
    return BilinearPair(n, Field(p), c)


@st.composite
def invertibles(draw, n, p):
    """L @ U @ P with unit lower L, invertible upper U and a permutation P."""
    F = Field(p)
    elems = st.integers(0, p - 1)
    L = [[1 if i == j else (draw(elems) if j < i else 0) for j in range(n)] for i in range(n)]
    U = [[draw(st.integers(1, p - 1)) if i == j else (draw(elems) if j > i else 0) for j in range(n)] for i in range(n)]
    perm = draw(st.permutations(range(n)))
    P = [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]
    return Matrix(L, F) @ Matrix(U, F) @ Matrix(P, F)


@given(pairs())
def test_serialize_roundtrip(p):
    assert parse(serialize(p)) == p


@given(pairs(), st.data())
def test_change_of_basis_gives_witness(p, data):
    phi = data.draw(invertibles(p.dim, p.field.modulus))
    q = apply_change_of_basis(p, phi)
    assert is_witness(p, q, phi)
    assert oracles.witness(p.c, q.c, phi.rows, p.field.modulus)


@given(pairs(), st.data())
def test_change_of_basis_composes(p, data):
    a = data.draw(invertibles(p.dim, p.field.modulus))
    b = data.draw(invertibles(p.dim, p.field.modulus))
    assert apply_change_of_basis(apply_change_of_basis(p, a), b) == apply_change_of_basis(p, b @ a)


@given(pairs())
def test_radical_matches_definition(p):
    rad = radical(p)
    naive = oracles.naive_radical(p.c, p.field.modulus)
    assert len(naive) == p.field.modulus ** rad.dim
    assert all(v in rad for v in naive)


@given(pairs())
def test_opposite_is_involution(p):
    assert opposite(opposite(p)) == p
    assert radical(opposite(p)) == radical(p)


@given(pairs(n=3, p=2))
def test_decompose_round_trip(p):
    if radical(p).dim == 0:
        return
    dec = decompose(p)
    ext = build_extension(dec.base, dec.theta)
    assert is_witness(p, ext, dec.projection)


@given(pairs(p=2))
def test_strip_components_matches_naive_search(p):
    core, t = strip_radical_components(p)
    assert (t > 0) == oracles.naive_has_component(p.c, 2)
    assert not oracles.naive_has_component(core.c, 2)


def test_gl_sweep_finds_identity_witness():
    p = parse(A3_EXT.replace("p=7", "p=2"))
    assert any(is_witness(p, p, g) for g in enumerate_gl(3, p.field))


@given(pairs(n=3, p=2), st.data())
def test_decomposition_base_independent_of_complement(p, data):
    # two complement choices of the radical give equivalent bases
    if radical(p).dim == 0:
        return
    from bilpair.equiv import are_equivalent_bruteforce

    phi = data.draw(invertibles(3, 2))
    a = decompose(p).base
    b = decompose(apply_change_of_basis(p, phi)).base
    assert are_equivalent_bruteforce(a, b) is not None
