"""Small builders shared by the test modules."""

import itertools
import random

from bilpair.catalog import instantiate, load_catalog, sample_assignments
from bilpair.cohom import BilinearForm, Cocycle
from bilpair.exactlin import Field


def base(id, field, values=None):
    return instantiate(id, values or {}, field)


def base_instances(field, samples=3, seed=0):
    """(id, values, pair) for every two-dimensional base family."""
    out = []
    for e in load_catalog().table("4"):
        if field.characteristic() in e.char_exclusions:
            continue
        for v in sample_assignments(e, field, samples, seed):
            out.append((e.id, v, instantiate(e.id, v, field)))
    return out


def all_forms(n, field):
    p = field.modulus
    for flat in itertools.product(range(p), repeat=n * n):
        yield BilinearForm.from_vector(flat, n, field)


def random_form(n, field, rng):
    return BilinearForm.from_vector([rng.randrange(field.modulus) for _ in range(n * n)], n, field)


def random_cocycle(n, m, field, rng):
    return Cocycle([random_form(n, field, rng) for _ in range(m)], n, field)


def rng(tag):
    return random.Random(f"bilpair-tests:{tag}")


F2, F3, F5, F7 = Field(2), Field(3), Field(5), Field(7)
