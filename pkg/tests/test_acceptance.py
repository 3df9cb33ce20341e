"""Acceptance suite: ten criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (the lines are printed in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
Runtime limits are part of each criterion and are asserted.
"""

import functools
import itertools
import os
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from bilpair.catalog import (  # noqa: E402
    expected_automorphisms,
    instantiate,
    load_catalog,
    sample_assignments,
    verify_entry,
    verify_fixture,
)
from bilpair.classify import classify_codim2, enumerate_ts, orbit_partition  # noqa: E402
from bilpair.cohom import (  # noqa: E402
    Cocycle,
    build_extension,
    coboundary,
    cohomology,
    extensions_equivalent,
    has_radical_component,
    radical_overlap,
)
from bilpair.equiv import are_equivalent_bruteforce, automorphism_group, invariant_fingerprint  # noqa: E402
from bilpair.pair import product_space, radical, strip_radical_components  # noqa: E402

import oracles  # noqa: E402
from helpers import F2, F3, F5, F7, all_forms, base, base_instances, random_form, rng  # noqa: E402

RESULTS = {}


def criterion(number, title, limit):
    """Record PASS/FAIL with elapsed time; failing the time limit fails the criterion."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                detail = fn(*args, **kwargs) or ""
                elapsed = time.perf_counter() - t0
                assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
            except BaseException as exc:
                elapsed = time.perf_counter() - t0
                RESULTS[number] = f"ACC {number:>2} FAIL  {title} ({elapsed:.1f}s): {exc}"
                raise
            RESULTS[number] = f"ACC {number:>2} PASS  {title} ({elapsed:.1f}s) {detail}".rstrip()

        return run

    return wrap


def _valid(g, theta):
    return radical_overlap(g, theta).dim == 0


@criterion(1, "coboundary and H^2 displays over F_7", 5)
def test_acc01_fixtures():
    cat = load_catalog()
    checked = 0
    for e in cat.table("4"):
        for kind in ("coboundary", "h2"):
            rep = verify_fixture(e.id, F7, samples=3, kind=kind)
            bad = [r for r in rep.results if not r.ok]
            assert rep.results and not bad, f"{e.id} {kind}: {bad}"
            checked += len(rep.results)
    return f"{checked} checks, 17 families"


@criterion(2, "h2_dim = 4 - dim g(U,U)", 30)
def test_acc02_dimension_formula():
    count = 0
    for F in (F2, F3, F5, F7):
        for id, v, g in base_instances(F, samples=3):
            assert cohomology(g).h2_dim == 4 - product_space(g).dim, (id, v, F)
            count += 1
    return f"{count} instantiations"


@criterion(3, "Aut orders over F_5 by GL(2,5) sweep", 30)
def test_acc03_automorphism_orders():
    count = 0
    for id, v, g in base_instances(F5, samples=3):
        t0 = time.perf_counter()
        group = automorphism_group(g, method="sweep")
        assert time.perf_counter() - t0 < 1, f"{id} took over 1s"
        want = oracles.FROZEN_AUT_ORDERS_F5.get(id)
        order, pred = expected_automorphisms(id, v, F5)
        if want is not None:
            assert group.order == want, (id, v, group.order, want)
        assert group.order == order, (id, v, group.order, order)
        if pred is not None:
            assert all(pred(m.rows) for m in group), (id, v)
        count += 1
    return f"{count} instantiations"


@criterion(4, "coboundary shifts give equivalent extensions over F_2", 30)
def test_acc04_coboundary_invariance():
    count = 0
    for id in ("A3", "N2", "B3"):
        g = base(id, F2)
        for h in itertools.product(range(2), repeat=2):
            dh = coboundary(g, h)
            for theta in all_forms(2, F2):
                a = build_extension(g, Cocycle([theta]))
                b = build_extension(g, Cocycle([theta + dh]))
                assert are_equivalent_bruteforce(a, b) is not None, (id, h, theta)
                count += 1
    return f"{count} (h, theta) pairs"


@criterion(5, "has_radical_component vs complement search over F_2", 120)
def test_acc05_component_criterion():
    count = skipped = 0
    for id in ("A3", "N2"):
        g = base(id, F2)
        space = cohomology(g)
        forms = list(all_forms(2, F2))
        for m in (1, 2):
            for tup in itertools.product(forms, repeat=m):
                theta = Cocycle(list(tup))
                if not _valid(g, theta):
                    skipped += 1
                    continue
                ext = build_extension(g, theta)
                assert has_radical_component(g, theta, space) == oracles.naive_has_component(ext.c, 2), (id, theta)
                count += 1
    return f"{count} cocycles ({skipped} outside the rad(g) precondition)"


def _equiv_case(g, aut, space, theta, mu):
    fast = extensions_equivalent(g, theta, mu, aut, space)
    slow = are_equivalent_bruteforce(build_extension(g, theta), build_extension(g, mu)) is not None
    assert fast == slow, (theta, mu, fast, slow)


@criterion(6, "extensions_equivalent vs brute force", 300)
def test_acc06_span_criterion():
    count = 0
    for id in ("A3", "N2"):
        g = base(id, F2)
        aut, space = automorphism_group(g), cohomology(g)
        valid = [
            Cocycle([f]) for f in all_forms(2, F2)
            if _valid(g, Cocycle([f])) and not has_radical_component(g, Cocycle([f]), space)
        ]
        for theta in valid:
            for mu in valid:
                _equiv_case(g, aut, space, theta, mu)
                count += 1
    r = rng("acc6")
    for k in range(500):
        g = base(("A3", "N2")[k % 2], F3)
        aut, space = _aut_space(g)
        pair = []
        while len(pair) < 2:
            theta = Cocycle([random_form(2, F3, r)])
            if _valid(g, theta) and not has_radical_component(g, theta, space):
                pair.append(theta)
        _equiv_case(g, aut, space, *pair)
        count += 1
    return f"{count} pairs"


@functools.lru_cache(maxsize=None)
def _aut_space(g):
    return automorphism_group(g), cohomology(g)


def _class_count(pairs):
    reps = {}
    for p in pairs:
        bucket = reps.setdefault(invariant_fingerprint(p), [])
        if not any(are_equivalent_bruteforce(q, p) is not None for q in bucket):
            bucket.append(p)
    return sum(len(b) for b in reps.values())


@criterion(7, "orbit counts equal brute-force class counts over F_3", 600)
def test_acc07_orbit_correspondence():
    out = []
    r = rng("acc7")
    for id in ("A3", "N2", "B3", "A2"):
        g = base(id, F3)
        space = cohomology(g)
        for s in (1, 2):
            if s > space.h2_dim:
                continue
            orbits = len(orbit_partition(g, s, space=space))
            built = [build_extension(g, e.cocycle()) for e in enumerate_ts(g, s, space)]
            # raw cocycles (not reduced to class representatives) as well
            for _ in range(100):
                theta = Cocycle([random_form(2, F3, r) for _ in range(s)])
                built.append(build_extension(g, theta))
            clean = [p for p in built if radical(p).dim == s and strip_radical_components(p)[1] == 0]
            classes = _class_count(clean)
            assert orbits == classes, (id, s, orbits, classes)
            out.append(f"{id}/s{s}={orbits}")
    return " ".join(out)


@criterion(8, "m = 5 cocycles always split off a radical component", 120)
def test_acc08_five_forms_have_components():
    r = rng("acc8")
    count = 0
    for id, v, g in base_instances(F3, samples=1):
        space = cohomology(g)
        done = 0
        while done < 200:
            theta = Cocycle([random_form(2, F3, r) for _ in range(5)])
            if not _valid(g, theta):
                continue
            assert has_radical_component(g, theta, space), (id, v, theta)
            done += 1
        count += done
    return f"{count} cocycles"


@criterion(9, "all 134 families pass verify_entry over F_7", 600)
def test_acc09_table_audit():
    cat = load_catalog()
    ids = [e.id for t in ("1", "2", "3", "main") for e in cat.table(t)]
    assert len(ids) == 134
    samples = 0
    for id in ids:
        rep = verify_entry(id, F7, samples=3)
        assert rep.passed, rep.tsv_rows()
        for s in rep.results:
            assert s.checks["radical_dim"] and s.checks["base_recovery"], (id, s)
        samples += len(rep.results)
    return f"134 families, {samples} samples"


@criterion(10, "codim-2 classification of N2 in dim 6 gives A_134", 120)
def test_acc10_a134_endpoint():
    g = base("N2", F2)
    rep = classify_codim2([g], 6, F2, force=True)
    free = rep.component_free
    assert len(free) == 1, rep
    target = instantiate("A_134", {}, F2)
    assert are_equivalent_bruteforce(free[0].pair, target, force=True) is not None
    return f"{len(rep)} classes, 1 component-free"


def summary_lines():
    return [RESULTS[k] for k in sorted(RESULTS)]


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_acc")]
    failed = 0
    for t in tests:
        try:
            t()
        except BaseException:
            failed += 1
    for line in summary_lines():
        print(line)
    sys.exit(1 if failed else 0)
