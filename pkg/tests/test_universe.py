"""Universe construction, structure enumeration, and coloring search."""

import itertools
import random

import pytest

from rainbowcc import universe as U
from rainbowcc.errors import (
    DomainTooLarge,
    EmptyFamily,
    InfeasibleUnderCap,
    KindMismatch,
)

fs = frozenset


def cycle4():
    return U.build_universe([1, 2, 3, 4],
                            [fs({1, 2}), fs({2, 3}), fs({3, 4}), fs({4, 1})],
                            U.SET_UNION)


def brute_three_aps(domain):
    """Independent double-loop oracle."""
    out = set()
    for x in domain:
        for y in domain:
            if y > x and (x + y) % 2 == 0 and (x + y) // 2 in domain:
                out.add((x, (x + y) // 2, y))
    return out


def brute_min_colors(domain, sigma):
    """Try k = 1, 2, ... by full assignment enumeration (tiny domains only)."""
    elems = sorted(domain, key=U.sort_key)
    instances = U._instances(set(domain), sigma)
    for k in range(1, len(elems) + 1):
        for assign in itertools.product(range(k), repeat=len(elems)):
            coloring = dict(zip(elems, assign))
            if all(len({coloring[e] for e in inst}) == len(inst)
                   for inst in instances):
                return k
    return len(elems)


def test_build_universe_cycle():
    u = cycle4()
    assert u.K == 4 and u.F == 4
    assert len(u.pair_index) == 16
    expected_triples = {fs({1, 2, 3}), fs({1, 2, 4}), fs({1, 3, 4}), fs({2, 3, 4})}
    assert expected_triples <= u.elements
    assert all(e in u.elements for e in u.pair_index.values())
    assert u.combined(1, fs({2, 3})) == fs({1, 2, 3})


def test_build_universe_sums():
    u = U.build_universe([1], [1], U.INTEGER_SUM)
    assert u.elements == fs({2})
    u = U.build_universe(list(range(1, 5)), list(range(1, 5)), U.INTEGER_SUM)
    assert u.elements == fs(range(2, 9))
    assert len(u.elements) == 7


def test_build_universe_guards():
    with pytest.raises(EmptyFamily):
        U.build_universe([], [1], U.INTEGER_SUM)
    with pytest.raises(EmptyFamily):
        U.build_universe([1, 1], [1], U.INTEGER_SUM)
    with pytest.raises(KindMismatch):
        U.build_universe([fs({1})], [fs({2})], U.INTEGER_SUM)
    with pytest.raises(KindMismatch):
        U.build_universe([1], [2], "CONCAT")


def test_enumerate_three_aps():
    u = U.build_universe(list(range(1, 5)), list(range(1, 5)), U.INTEGER_SUM)
    got = U.enumerate_sigma(u, {2, 4, 6, 8}, U.SigmaStructure.three_ap())
    assert set(got) == {(2, 4, 6), (4, 6, 8)}
    assert U.enumerate_sigma(u, {1}, U.SigmaStructure.three_ap()) == []


def test_three_ap_counts_match_double_loop():
    u = U.build_universe([1], [1], U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    for n in range(1, 51):
        domain = set(range(1, n + 1))
        got = set(U.enumerate_sigma(u, domain, sigma))
        assert got == brute_three_aps(domain)
        assert len(got) == ((n - 1) ** 2) // 4


def test_subset_rainbow_instances():
    u = cycle4()
    triples = {fs({1, 2, 3}), fs({1, 2, 4}), fs({1, 3, 4}), fs({2, 3, 4})}
    sigma = U.SigmaStructure.subset_rainbow(1)
    got = U.enumerate_sigma(u, triples, sigma)
    pairs = [inst for inst in got if len(inst) == 2]
    trips = [inst for inst in got if len(inst) == 3]
    # every pair of 3-sets overlaps, and each is inside the union of any others
    assert len(pairs) == 6
    assert len(trips) == 4
    flagged = {frozenset(p) for p in pairs}
    assert all(frozenset((a, b)) in flagged for a, b in itertools.combinations(triples, 2))


def test_kind_mismatch_between_structure_and_elements():
    u = cycle4()
    with pytest.raises(KindMismatch):
        U.enumerate_sigma(u, u.elements, U.SigmaStructure.three_ap())
    su = U.build_universe([1], [1], U.INTEGER_SUM)
    with pytest.raises(KindMismatch):
        U.enumerate_sigma(su, su.elements, U.SigmaStructure.subset_rainbow(1))


def test_validate_rainbow_pass_and_fail():
    sigma = U.SigmaStructure.three_ap()
    distinct = U.Coloring(fs({2, 3, 4, 6, 7, 8}),
                          {e: i for i, e in enumerate((2, 3, 4, 6, 7, 8))})
    assert U.validate_rainbow(distinct, sigma).passed

    mono = U.Coloring(fs({2, 4, 6}), {2: 0, 4: 0, 6: 0})
    report = U.validate_rainbow(mono, sigma)
    assert not report.passed
    assert report.instance == (2, 4, 6)


def test_strict_three_ap_catches_midpoint_repeat():
    # ends distinct but midpoint repeated: strict validation must fail,
    # the endpoint relaxation must pass
    chi = U.Coloring(fs({2, 3, 4, 6, 7, 8}),
                     {2: 0, 8: 0, 3: 1, 7: 1, 4: 2, 6: 2})
    strict = U.validate_rainbow(chi, U.SigmaStructure.three_ap())
    assert not strict.passed
    assert strict.instance in ((2, 4, 6), (4, 6, 8))
    relaxed = U.validate_rainbow(chi, U.ap_endpoint_sigma(chi.domain))
    assert relaxed.passed


def test_ap_endpoint_sigma_fails_on_equal_ends():
    mono = U.Coloring(fs({2, 4, 6}), {2: 0, 4: 1, 6: 0})
    report = U.validate_rainbow(mono, U.ap_endpoint_sigma(mono.domain))
    assert not report.passed and report.instance == (2, 6)


def test_greedy_color_basics():
    su = U.build_universe(list(range(1, 5)), list(range(1, 5)), U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    coloring = U.greedy_color(su, set(range(2, 9)), sigma)
    assert U.validate_rainbow(coloring, sigma).passed
    assert coloring.num_colors <= 7

    empty = U.greedy_color(su, set(), sigma)
    assert empty.num_colors == 0

    u = cycle4()
    triples = {e for e in u.elements if len(e) == 3}
    forced = U.greedy_color(u, triples, U.SigmaStructure.subset_rainbow(1))
    assert forced.num_colors == 4


def test_greedy_respects_explicit_order():
    su = U.build_universe(list(range(1, 5)), list(range(1, 5)), U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    domain = set(range(2, 9))
    c1 = U.greedy_color(su, domain, sigma, order=sorted(domain))
    c2 = U.greedy_color(su, domain, sigma, order=sorted(domain, reverse=True))
    assert U.validate_rainbow(c1, sigma).passed
    assert U.validate_rainbow(c2, sigma).passed
    with pytest.raises(KindMismatch):
        U.greedy_color(su, domain, sigma, order=[2, 3])


def test_exact_min_colors_examples():
    su = U.build_universe(list(range(1, 5)), list(range(1, 5)), U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    coloring, count = U.exact_min_colors(su, {2, 4, 6}, sigma)
    assert count == 3 and coloring.num_colors == 3

    coloring, count = U.exact_min_colors(su, {2, 3}, sigma)
    assert count == 1

    with pytest.raises(DomainTooLarge):
        U.exact_min_colors(su, set(range(1, 26)), sigma)
    with pytest.raises(InfeasibleUnderCap):
        U.exact_min_colors(su, {2, 4, 6}, sigma, cap=2)


def test_exact_matches_brute_force_on_tiny_domains():
    su = U.build_universe(list(range(1, 7)), list(range(1, 7)), U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    rng = random.Random(11)
    for _ in range(25):
        domain = {e for e in range(2, 11) if rng.random() < 0.6}
        if not domain:
            continue
        _, count = U.exact_min_colors(su, domain, sigma)
        assert count == brute_min_colors(domain, sigma)


def test_exact_matches_brute_force_on_all_small_subsets_of_2_to_8():
    su = U.build_universe(list(range(1, 5)), list(range(1, 5)), U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    ground = list(range(2, 9))
    for r in range(0, 6):
        for subset in itertools.combinations(ground, r):
            domain = set(subset)
            _, count = U.exact_min_colors(su, domain, sigma)
            assert count == brute_min_colors(domain, sigma)


def test_exact_search_is_deterministic():
    su = U.build_universe(list(range(1, 9)), list(range(1, 9)), U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    domain = set(range(2, 17)) - {5, 9}
    first, n1 = U.exact_min_colors(su, domain, sigma)
    second, n2 = U.exact_min_colors(su, domain, sigma)
    assert n1 == n2 and first.mapping == second.mapping


def test_exact_never_beats_validator_and_greedy_bounds():
    su = U.build_universe(list(range(1, 13)), list(range(1, 13)), U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    rng = random.Random(5)
    for _ in range(40):
        domain = {e for e in range(2, 21) if rng.random() < 0.7}
        greedy = U.greedy_color(su, domain, sigma)
        coloring, count = U.exact_min_colors(su, domain, sigma)
        assert U.validate_rainbow(coloring, sigma).passed
        assert count <= greedy.num_colors
        assert coloring.num_colors == count


def test_greedy_fuzz_always_validates():
    su = U.build_universe(list(range(1, 21)), list(range(1, 21)), U.INTEGER_SUM)
    sigma = U.SigmaStructure.three_ap()
    rng = random.Random(23)
    for _ in range(60):
        domain = {e for e in range(2, 41) if rng.random() < 0.5}
        coloring = U.greedy_color(su, domain, sigma)
        assert U.validate_rainbow(coloring, sigma).passed


def test_greedy_fuzz_subsets():
    rng = random.Random(29)
    ground = list(range(1, 8))
    sigma = U.SigmaStructure.subset_rainbow(1)
    u = U.build_universe([1, 2], [fs({3, 4}), fs({5, 6})], U.SET_UNION)
    for _ in range(30):
        fam = {fs(rng.sample(ground, rng.randrange(2, 5))) for _ in range(8)}
        coloring = U.greedy_color(u, fam, sigma)
        assert U.validate_rainbow(coloring, sigma).passed


def test_subset_pair_condition_is_symmetric():
    sigma = U.SigmaStructure.subset_rainbow(2)
    u = cycle4()
    fam = [fs({1, 2, 3}), fs({2, 3, 4}), fs({5, 6, 7})]
    insts = {frozenset(i) for i in U.enumerate_sigma(u, fam, sigma)
             if len(i) == 2}
    assert frozenset((fam[0], fam[1])) in insts
    assert frozenset((fam[0], fam[2])) not in insts


def test_custom_sigma_arity_guard():
    with pytest.raises(KindMismatch):
        U.SigmaStructure.custom(lambda *t: True, 5)


def test_coloring_from_labels_dense_ids():
    c = U.coloring_from_labels({10: "b", 20: "a", 30: "b"})
    assert c.num_colors == 2
    assert c.mapping[20] == 0 and c.mapping[10] == 1  # sorted label order
    assert c.label_of(0) == "a"


def test_universe_doc_roundtrip_int_and_set():
    u = cycle4()
    triples = sorted((e for e in u.elements if len(e) == 3), key=U.sort_key)
    coloring = U.Coloring(fs(triples), {e: i for i, e in enumerate(triples)})
    doc = U.universe_to_doc(u, coloring)
    u2, c2 = U.universe_from_doc(doc)
    assert u2.a_family == u.a_family
    assert u2.b_family == u.b_family
    assert c2.mapping == coloring.mapping


def test_universe_doc_roundtrip_pairs():
    a_family = [(1, 0), (1, 1), (2, 0), (2, 1)]
    b_family = [fs({(1, 0), (2, 0)}), fs({(1, 1), (2, 1)})]
    u = U.build_universe(a_family, b_family, U.SET_UNION)
    colored = {e for e in u.elements if len(e) == 3}
    coloring = U.Coloring(fs(colored),
                          {e: i for i, e in enumerate(sorted(colored, key=U.sort_key))})
    doc = U.universe_to_doc(u, coloring)
    u2, c2 = U.universe_from_doc(doc)
    assert u2.a_family == u.a_family
    assert u2.b_family == u.b_family
    assert c2.mapping == coloring.mapping
