"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines. All
comparisons are exact (integers, fractions, or byte equality); the only
floating-point output is the reported empirical exponent table.
"""

import itertools
import math
import random
import time
from fractions import Fraction

from helpers import random_pda
from rainbowcc import gf, mapreduce as mr, rainbow3ap as r3, schemes, simulator
from rainbowcc.universe import SigmaStructure, exact_min_colors, greedy_color

fs = frozenset

TABLE_CHI = {2: "a", 8: "a", 3: "b", 7: "b", 4: "c", 6: "c"}


def _report(number, description, started, limit):
    elapsed = time.monotonic() - started
    verdict = "PASS" if elapsed < limit else "FAIL (over time budget)"
    print(f"criterion {number}: {verdict} ({description}) [{elapsed:.2f}s"
          f" of {limit:g}s budget]")
    assert elapsed < limit


def test_criterion_1_cycle4_broadcast_and_exhaustive_decode():
    started = time.monotonic()
    scheme = schemes.scheme_cyclic(4)
    assert scheme.m == 3

    def pair_set(cls):
        return {(a, fs(b)) for a, b in cls}

    rows = []
    for i in range(scheme.P.rows):
        members = set()
        for cid in range(scheme.P.cols):
            if scheme.P[i][cid]:
                members |= pair_set(scheme.color_classes[cid])
        rows.append(members)
    assert rows == [
        {(1, fs({2, 3})), (3, fs({1, 2})), (2, fs({3, 4})), (4, fs({2, 3}))},
        {(2, fs({1, 4})), (4, fs({1, 2})), (2, fs({3, 4})), (4, fs({2, 3}))},
        {(1, fs({3, 4})), (3, fs({1, 4})), (2, fs({3, 4})), (4, fs({2, 3}))},
    ]

    report = simulator.sweep(scheme, 4, policy=simulator.EXHAUSTIVE)
    assert len(report.outcomes) == 4 ** 4
    assert report.all_pass
    assert report.realized_rate == Fraction(3, 4)
    _report(1, "cycle-4 scheme: m=3, exact broadcast rows, 256 demands decode",
            started, 1.0)


def test_criterion_2_pair_grid_scheme():
    started = time.monotonic()
    raps = r3.build_rainbow_ap(4, strategy=r3.EXPLICIT, explicit=TABLE_CHI)
    assert sorted(raps.members) == [2, 3, 4, 6, 7, 8]
    psi = r3.build_psi(raps)
    chi = raps.chi.mapping
    expected = {
        (1, 1): (0, chi[2]), (1, 2): (-1, chi[3]), (1, 3): (-2, chi[4]),
        (1, 4): None,
        (2, 1): (1, chi[3]), (2, 2): (0, chi[4]), (2, 3): None,
        (2, 4): (-2, chi[6]),
        (3, 1): (2, chi[4]), (3, 2): None, (3, 3): (0, chi[6]),
        (3, 4): (-1, chi[7]),
        (4, 1): None, (4, 2): (2, chi[6]), (4, 3): (1, chi[7]),
        (4, 4): (0, chi[8]),
    }
    for x in range(1, 5):
        for y in range(1, 5):
            assert psi.cell(x, y) == expected[(x, y)]
    assert psi.num_colors == 6

    scheme = r3.build_rainbow_scheme(raps)
    assert (scheme.params.K, scheme.params.F) == (4, 4)
    assert scheme.params.cache_fraction == Fraction(1, 4)
    assert scheme.params.num_colors == 6

    report = simulator.sweep(scheme, 2, policy=simulator.EXHAUSTIVE)
    assert len(report.outcomes) == 16 and report.all_pass
    _report(2, "4x4 pair grid: cells exact, 6 classes, (4,4,1/4), decode",
            started, 1.0)


def test_criterion_3_linear_block_example():
    started = time.monotonic()
    scheme = schemes.scheme_linear_block([[1, 0, 1], [0, 1, 1]], 2)
    p = scheme.params
    assert (p.K, p.F) == (6, 4)
    assert p.cache_fraction == Fraction(1, 2)
    assert p.num_colors == 4
    assert Fraction(p.num_colors, p.F) == 1 and p.rate == 1

    def elem(added, codeword):
        return fs({added} | set(codeword))

    b1 = [(1, 0), (2, 0), (3, 0)]
    b2 = [(1, 0), (2, 1), (3, 1)]
    b3 = [(1, 1), (2, 0), (3, 1)]
    b4 = [(1, 1), (2, 1), (3, 0)]
    expected = {
        fs({elem((1, 1), b1), elem((2, 0), b4), elem((3, 0), b3)}),
        fs({elem((2, 1), b1), elem((1, 0), b4), elem((3, 0), b2)}),
        fs({elem((3, 1), b1), elem((1, 0), b3), elem((2, 0), b2)}),
        fs({elem((3, 1), b4), elem((1, 1), b2), elem((2, 1), b3)}),
    }
    got = {fs(e for e, c in scheme.coloring.mapping.items() if c == cid)
           for cid in range(p.num_colors)}
    assert got == expected

    report = simulator.sweep(scheme, 2, policy=simulator.EXHAUSTIVE)
    assert report.all_pass
    _report(3, "(3,2) code scheme: the four classes exact, (6,4,1/2,1), decode",
            started, 1.0)


def test_criterion_4_subset_scheme_closed_form_and_m_aware_delivery():
    started = time.monotonic()
    for K, t in [(4, 2), (5, 2), (6, 3)]:
        scheme = schemes.scheme_man(K, t)
        naive = Fraction(scheme.params.num_colors, scheme.params.F)
        assert naive == Fraction(K, 1) * (1 - Fraction(t, K)) / (t + 1)
        max_m = max(scheme.m_table.values())
        if max_m <= scheme.params.num_colors - 1:
            assert scheme.params.rate == \
                Fraction(scheme.params.num_colors - 1, scheme.params.F)
        else:
            assert scheme.m == max_m

    # a witness where the binary floor actually bites: the 6-cycle
    witness = schemes.scheme_cyclic(6)
    assert max(witness.m_table.values()) == 3 <= witness.params.num_colors - 1
    assert witness.m == witness.params.num_colors - 1
    lib = simulator.make_library(6, 6, packet_size=8).rows()
    sent = schemes.deliver(witness, tuple(range(6)), lib)
    assert len(sent) == witness.params.num_colors - 1
    _report(4, "subset schemes match K(1-t/K)/(t+1); binary floor delivery",
            started, 5.0)


def test_criterion_5_four_node_shuffle_example():
    started = time.monotonic()
    universe, coloring = schemes.cyclic_universe(4)
    scheme = schemes.scheme_cyclic(4)
    inst = mr.build_instance(universe, coloring)
    plan = mr.synthesize_shuffle(inst, scheme)

    assert plan.m_prime == 4
    assert len(plan.messages) == 4
    assert all(len(msg.payload) == inst.value_bytes for msg in plan.messages)
    assert plan.L == Fraction(1, 4)
    assert plan.L == mr.cdc_bound(inst.r, inst.K)
    assert inst.r == 2

    b_idx = {fs(b): i for i, b in enumerate(universe.b_family)}

    def iv(user_label, packet):
        return inst.iv(user_label - 1, b_idx[fs(packet)])

    def x(p1, p2):
        return gf.kernels.xor_bytes(p1, p2)

    got = {universe.a_family[m.sender]: m.payload for m in plan.messages}
    assert got == {
        1: x(iv(2, {4, 1}), iv(4, {1, 2})),
        2: x(iv(1, {2, 3}), iv(3, {1, 2})),
        3: x(iv(2, {3, 4}), iv(4, {2, 3})),
        4: x(iv(1, {3, 4}), iv(3, {4, 1})),
    }

    assert mr.run_reduce(inst, plan).passed
    _report(5, "4-node shuffle: 4 unit messages, exact senders, L=1/4=bound",
            started, 1.0)


def test_criterion_6_cyclic_family_loads():
    started = time.monotonic()
    for n in range(5, 11):
        universe, coloring = schemes.cyclic_universe(n)
        scheme = schemes.scheme_cyclic(n)
        inst = mr.build_instance(universe, coloring)
        plan = mr.synthesize_shuffle(inst, scheme)
        assert inst.r == n - 2
        assert plan.m_prime == n - 1
        assert plan.L == Fraction(n - 1, n * n)
        assert mr.run_reduce(inst, plan).passed
        g = plan.g
        assert g is not None and g >= 2
        assert plan.m_prime < Fraction(g, g - 1) * scheme.params.num_colors
    _report(6, "cycles n=5..10: r=n-2, m'=n-1, L=(n-1)/n^2, beats multicast",
            started, 5.0)


def _catalog_schemes():
    yield schemes.scheme_cyclic(4)
    yield schemes.scheme_cyclic(6)
    yield schemes.scheme_cyclic(6, field=gf.GF256)
    yield schemes.scheme_man(4, 2)
    yield schemes.scheme_man(5, 2)
    yield schemes.scheme_man(6, 3)
    yield schemes.scheme_union_subsets(4, 1, 2)
    yield schemes.scheme_union_subsets(5, 1, 2)
    yield schemes.scheme_linear_block([[1, 0, 1], [0, 1, 1]], 2)
    yield r3.build_rainbow_scheme(
        r3.build_rainbow_ap(4, strategy=r3.EXPLICIT, explicit=TABLE_CHI))
    yield r3.build_rainbow_scheme(r3.build_rainbow_ap(6, color_budget=4))


def test_criterion_7_property_suite():
    started = time.monotonic()

    # (a) random PDAs accepted by the validator convert to schemes whose
    # classes satisfy both strong-edge conditions
    rng = random.Random(2024)
    for _ in range(200):
        K = rng.randrange(2, 7)
        F = rng.randrange(2, 7)
        Z = rng.randrange(1, F)
        pda = random_pda(rng, K, F, Z)
        schemes.validate_pda(pda)
        s = schemes.pda_to_scheme(pda)
        for cls in s.color_classes:
            users = [a for a, _ in cls]
            packets = [b for _, b in cls]
            assert len(set(users)) == len(users)       # not adjacent on users
            assert len(set(packets)) == len(packets)   # not adjacent on packets
            for (a1, b1), (a2, b2) in itertools.combinations(cls, 2):
                assert s.universe.pair_index[(a1, b2)] not in s.coloring.domain
                assert s.universe.pair_index[(a2, b1)] not in s.coloring.domain

    # (b) the class condition a_i + b_j colored iff i = j, on every scheme
    for s in _catalog_schemes():
        for cls in s.color_classes:
            for i, (a1, b1) in enumerate(cls):
                for j, (a2, b2) in enumerate(cls):
                    inside = s.universe.pair_index[(a1, b2)] in s.coloring.domain
                    assert inside == (i == j)

    # (c) exact minimum never exceeds greedy on random 3-AP domains
    from rainbowcc.universe import INTEGER_SUM, build_universe
    su = build_universe(list(range(1, 11)), list(range(1, 11)), INTEGER_SUM)
    sigma = SigmaStructure.three_ap()
    rng = random.Random(7)
    for _ in range(500):
        two_m = rng.randrange(4, 21)
        domain = {e for e in range(2, two_m + 1) if rng.random() < 0.7}
        greedy = greedy_color(su, domain, sigma)
        _, minimum = exact_min_colors(su, domain, sigma)
        assert minimum <= greedy.num_colors

    # (d) every generated MDS matrix passes exhaustive minor verification
    for field in (gf.GF2, gf.GF256):
        for n in range(1, 7):
            for m in range(1, n + 1):
                if field == gf.GF2 and m not in (1, n - 1, n):
                    continue
                assert gf.verify_mds(gf.mds_matrix(m, n, field))
    for n in range(2, 8):
        assert gf.verify_mds(gf.banded_mds(n))

    # (e) measured loads never beat the converse bounds; every scheme also
    # survives an exhaustive bytewise decode over a 2-file library
    for s in _catalog_schemes():
        full = simulator.sweep(s, 2, policy=simulator.EXHAUSTIVE,
                               packet_size=16)
        assert full.all_pass
        N = s.params.K
        report = simulator.sweep(s, N, policy=simulator.WORST_CASE_DISTINCT,
                                 packet_size=16)
        assert report.all_pass
        M = s.params.cache_fraction * N
        assert report.realized_rate >= schemes.cutset_bound(s.params.K, N, M)
        inst = mr.build_instance(s.universe, s.coloring)
        if inst.r > 0:
            plan = mr.synthesize_shuffle(inst, s)
            assert plan.L >= mr.cdc_bound(inst.r, inst.K)
            assert mr.run_reduce(inst, plan).passed
    _report(7, "property suite: PDA fuzz, class condition, exact<=greedy, "
               "MDS minors, bounds", started, 120.0)


def test_criterion_8_empirical_exponent_report():
    started = time.monotonic()
    print("\n  asymptotic guarantees are out of reach at this scale; "
          "reporting achieved exponents instead:")
    print("  2m   |A|  missing  colors  alpha_emp  beta_emp")
    for m in (4, 8, 16, 32):
        raps = r3.build_rainbow_ap(m)
        n = raps.n
        missing = n - len(raps.members)
        assert raps.chi.num_colors >= 1
        assert 0.0 <= raps.alpha_emp <= 1.0
        assert raps.beta_emp <= 1.0
        assert math.isclose(raps.beta_emp,
                            math.log(raps.chi.num_colors) / math.log(n))
        print(f"  {n:3d}  {len(raps.members):3d}  {missing:7d}  "
              f"{raps.chi.num_colors:6d}  {raps.alpha_emp:9.4f}  "
              f"{raps.beta_emp:8.4f}")
    _report(8, "empirical alpha/beta reported for 2m <= 64", started, 60.0)
