"""Coded MapReduce: file assignment from a coloring, shuffle synthesis,
exchange simulation, and load accounting.

The map phase stores file b on node a exactly when their combined element
is uncolored, so the underlying caching scheme's per-color XOR values can
drive the shuffle. The synthesized plan decomposes the MDS-combined rows
into pieces that single nodes can send, trying the scheme's own matrix, a
band over a chained class order, and the identity; when all of them lose
to the classic per-group multicast exchange, the plan falls back to that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import gf
from .errors import (
    DivisibilityError,
    InfeasiblePiece,
    KindMismatch,
    NonuniformCache,
    RangeError,
)
from .kernels import gf256_axpy, xor_into

DEFAULT_VALUE_BYTES = 64

_CHAIN_GUARD = 24


@dataclass
class MapReduceInstance:
    """Map-phase state: assignments, reduce targets, and intermediate values."""

    universe: object
    coloring: object
    Q: int
    value_bytes: int
    seed: int
    assignment: dict      # node index -> frozenset of file indices stored
    reduce_map: dict      # node index -> tuple of function ids

    def __post_init__(self):
        self._iv_cache = {}

    @property
    def K(self):
        return self.universe.K

    @property
    def N(self):
        return self.universe.F

    @property
    def r(self):
        return Fraction(sum(len(s) for s in self.assignment.values()), self.N)

    def iv(self, q, file_idx):
        """Intermediate value of function q on file file_idx (synthetic)."""
        key = (q, file_idx)
        v = self._iv_cache.get(key)
        if v is None:
            v = gf.deterministic_bytes(self.seed, ("iv", q, file_idx),
                                       self.value_bytes)
            self._iv_cache[key] = v
        return v


def build_instance(universe, coloring, Q=None, value_bytes=DEFAULT_VALUE_BYTES,
                   seed=0):
    """Assign files by uncolored pairs and functions round-robin."""
    K = universe.K
    if Q is None:
        Q = K
    if Q % K:
        raise DivisibilityError(f"node count {K} must divide function count {Q}")
    colored = coloring.domain
    assignment = {}
    for i, a in enumerate(universe.a_family):
        assignment[i] = frozenset(
            j for j, b in enumerate(universe.b_family)
            if universe.pair_index[(a, b)] not in colored)
    if len({len(s) for s in assignment.values()}) > 1:
        raise NonuniformCache("nodes would store different file counts")
    reduce_map = {i: tuple(range(i, Q, K)) for i in range(K)}
    return MapReduceInstance(universe, coloring, Q, value_bytes, seed,
                             assignment, reduce_map)


@dataclass(frozen=True)
class ShuffleMessage:
    sender: int
    payload: bytes
    round: int
    kind: str                 # "piece" or "segment"
    row: Optional[int] = None
    color: Optional[int] = None
    segment: Optional[int] = None
    terms: tuple = ()


@dataclass
class ShufflePlan:
    strategy: str             # "decomposition" or "multicast"
    scheme: object
    P: object
    pieces: tuple             # (row, ((color, a_idx, b_idx, coef), ...), sender)
    messages: list
    m_prime: int
    L: Fraction
    rounds: int
    g: Optional[int] = None

    def to_doc(self, instance=None):
        doc = {
            "strategy": self.strategy,
            "m_prime": self.m_prime,
            "L": float(self.L),
            "L_exact": str(self.L),
            "rounds": self.rounds,
            "messages": [
                {"sender": msg.sender, "round": msg.round, "kind": msg.kind,
                 "terms": list(msg.terms)}
                for msg in self.messages],
        }
        if instance is not None:
            doc["r"] = float(instance.r)
            doc["r_exact"] = str(instance.r)
        return doc


def _class_terms(scheme):
    """Per color: [(a index, b index), ...] in canonical order."""
    out = []
    for cls in scheme.color_classes:
        out.append([(scheme.a_index[a], scheme.b_index[b]) for a, b in cls])
    return out


def _chain_matrix(scheme, terms, assignment):
    """Band matrix over a chained class order, or None.

    Usable only when every class has a single holder and consecutive
    classes in some order share one; the chain is found by backtracking DFS
    in the compatibility graph (budgeted, since the plan is optional).
    """
    nc = len(terms)
    if nc < 2 or nc > _CHAIN_GUARD:
        return None
    for cls in terms:
        if not any(all(b in assignment[k] for _, b in cls)
                   for k in range(scheme.params.K)):
            return None
    compat = {c: set() for c in range(nc)}
    for c1, c2 in itertools.combinations(range(nc), 2):
        files = {b for _, b in terms[c1]} | {b for _, b in terms[c2]}
        if any(all(b in assignment[k] for b in files)
               for k in range(scheme.params.K)):
            compat[c1].add(c2)
            compat[c2].add(c1)

    path = []
    seen = set()
    budget = [50000]

    def dfs(c):
        if budget[0] <= 0:
            return False
        budget[0] -= 1
        path.append(c)
        seen.add(c)
        if len(path) == nc:
            return True
        for nxt in sorted(compat[c] - seen):
            if dfs(nxt):
                return True
        path.pop()
        seen.remove(c)
        return False

    if not any(dfs(start) for start in range(nc)):
        return None
    entries = [[0] * nc for _ in range(nc - 1)]
    for i in range(nc - 1):
        entries[i][path[i]] = 1
        entries[i][path[i + 1]] = 1
    return gf.Matrix(nc - 1, nc, tuple(tuple(r) for r in entries), scheme.field)


def _decompose(P, terms, assignment, K):
    """Greedy largest-holder-first split of each row into single-node pieces."""
    pieces = []
    for i in range(P.rows):
        remaining = []
        for cid in range(P.cols):
            coef = P[i][cid]
            if coef:
                remaining.extend((cid, a, b, coef) for a, b in terms[cid])
        while remaining:
            best_node, best_cover = -1, []
            for k in range(K):
                cover = [t for t in remaining if t[2] in assignment[k]]
                if len(cover) > len(best_cover):
                    best_node, best_cover = k, cover
            if not best_cover:
                raise InfeasiblePiece(
                    f"row {i}: no node stores any of {sorted(set(t[2] for t in remaining))}")
            files = {t[2] for t in best_cover}
            sender = min(k for k in range(K)
                         if all(b in assignment[k] for b in files))
            pieces.append((i, tuple(best_cover), sender))
            covered = set(best_cover)
            remaining = [t for t in remaining if t not in covered]
    return pieces


def synthesize_shuffle(instance, scheme):
    """Build the cheapest shuffle plan for a scheme over the same universe."""
    u1, u2 = instance.universe, scheme.universe
    if (u1.a_family, u1.b_family, u1.op) != (u2.a_family, u2.b_family, u2.op):
        raise KindMismatch("instance and scheme use different universes")
    K = instance.K
    nc = scheme.params.num_colors
    terms = _class_terms(scheme)
    rounds = instance.Q // K

    if nc == 0:
        return ShufflePlan("decomposition", scheme, scheme.P, (), [], 0,
                           Fraction(0), rounds)

    candidates = [scheme.P]
    chained = _chain_matrix(scheme, terms, instance.assignment)
    if chained is not None:
        candidates.append(chained)
    candidates.append(gf.identity(nc, scheme.field))

    best = None
    for P in candidates:
        try:
            pieces = _decompose(P, terms, instance.assignment, K)
        except InfeasiblePiece:
            if P is candidates[-1]:
                raise
            continue
        if best is None or len(pieces) < len(best[1]):
            best = (P, pieces)
    P, pieces = best
    m_prime = len(pieces)

    sizes = {len(cls) for cls in terms}
    g = sizes.pop() if len(sizes) == 1 else None
    if g is not None and g >= 2 and m_prime >= Fraction(g, g - 1) * nc:
        return _multicast_plan(instance, scheme, terms, g, rounds)

    T = instance.value_bytes
    messages = []
    for rnd in range(rounds):
        demand = [instance.reduce_map[k][rnd] for k in range(K)]
        for row, piece, sender in pieces:
            acc = bytearray(T)
            descr = []
            for cid, a_idx, b_idx, coef in piece:
                v = instance.iv(demand[a_idx], b_idx)
                if coef == 1:
                    xor_into(acc, v)
                else:
                    gf256_axpy(acc, v, coef)
                descr.append(f"v[{demand[a_idx]},{b_idx}]"
                             + (f"*{coef}" if coef != 1 else ""))
                assert b_idx in instance.assignment[sender]
            messages.append(ShuffleMessage(sender, bytes(acc), rnd, "piece",
                                           row=row, terms=tuple(descr)))
    total_bytes = sum(len(m.payload) for m in messages)
    L = Fraction(total_bytes, instance.Q * instance.N * T)
    return ShufflePlan("decomposition", scheme, P, tuple(pieces), messages,
                       m_prime, L, rounds, g=g)


def _segment_ranks(g, i):
    """Positions j != i in class order; index = which segment j carries."""
    return [j for j in range(g) if j != i]


def _multicast_plan(instance, scheme, terms, g, rounds):
    """Classic per-group exchange: each needed value split into g-1 segments."""
    T = instance.value_bytes
    seg = -(-T // (g - 1))  # ceil
    K = instance.K
    messages = []
    for rnd in range(rounds):
        demand = [instance.reduce_map[k][rnd] for k in range(K)]
        for cid, cls in enumerate(terms):
            values = [instance.iv(demand[a_idx], b_idx) for a_idx, b_idx in cls]
            padded = [v + bytes(seg * (g - 1) - len(v)) for v in values]
            chunks = [[p[r * seg:(r + 1) * seg] for r in range(g - 1)]
                      for p in padded]
            for j in range(g):
                sender = cls[j][0]
                acc = bytearray(seg)
                descr = []
                for i in range(g):
                    if i == j:
                        continue
                    rank = _segment_ranks(g, i).index(j)
                    xor_into(acc, chunks[i][rank])
                    descr.append(f"seg{rank}(v[{demand[cls[i][0]]},{cls[i][1]}])")
                    assert cls[i][1] in instance.assignment[sender]
                messages.append(ShuffleMessage(sender, bytes(acc), rnd,
                                               "segment", color=cid, segment=j,
                                               terms=tuple(descr)))
    total_bytes = sum(len(m.payload) for m in messages)
    L = Fraction(total_bytes, instance.Q * instance.N * T)
    return ShufflePlan("multicast", scheme, None, (), messages,
                       g * len(terms), L, rounds, g=g)


@dataclass
class ReduceReport:
    passed: bool
    failures: list
    r: Fraction
    L: Fraction
    m_prime: int


def run_reduce(instance, plan):
    """Simulate reception and verify every node completes its functions."""
    scheme = plan.scheme
    K = instance.K
    T = instance.value_bytes
    terms = _class_terms(scheme)
    failures = []
    for rnd in range(max(plan.rounds, 1)):
        demand = [instance.reduce_map[k][rnd] for k in range(K)]
        if plan.strategy == "decomposition" and plan.P is not None and terms:
            rows = [bytearray(T) for _ in range(plan.P.rows)]
            for msg in plan.messages:
                if msg.round == rnd and msg.kind == "piece":
                    xor_into(rows[msg.row], msg.payload)
            for k in range(K):
                failures.extend(
                    _reduce_node_rows(instance, scheme, terms, plan.P, rows,
                                      demand, k, rnd))
        elif plan.strategy == "multicast":
            by_slot = {(msg.color, msg.segment): msg for msg in plan.messages
                       if msg.round == rnd}
            for k in range(K):
                failures.extend(
                    _reduce_node_multicast(instance, scheme, terms, by_slot,
                                           demand, k, rnd))
        else:
            for k in range(K):
                for b in range(instance.N):
                    if b not in instance.assignment[k]:
                        failures.append((rnd, k, b, "no plan covers this value"))
    passed = not failures
    return ReduceReport(passed, failures, instance.r, plan.L, plan.m_prime)


def _reduce_node_rows(instance, scheme, terms, P, rows, demand, k, rnd):
    failures = []
    held = instance.assignment[k]
    known = {}
    for cid, cls in enumerate(terms):
        if all(b in held for _, b in cls):
            acc = bytearray(instance.value_bytes)
            for a_idx, b_idx in cls:
                xor_into(acc, instance.iv(demand[a_idx], b_idx))
            known[cid] = bytes(acc)
    residual = [bytearray(r) for r in rows]
    for i in range(P.rows):
        for cid, value in known.items():
            coef = P[i][cid]
            if coef == 1:
                xor_into(residual[i], value)
            elif coef:
                gf256_axpy(residual[i], value, coef)
    solved = gf.solve_submatrix(P, known.keys(), [bytes(r) for r in residual])
    values = {**known, **solved}
    a_k = scheme.universe.a_family[k]
    for b_idx, b in enumerate(scheme.universe.b_family):
        if b_idx in held:
            continue
        cid = scheme.pair_colors[(a_k, b)]
        acc = bytearray(values[cid])
        for a_idx, b2_idx in terms[cid]:
            if (a_idx, b2_idx) == (k, b_idx):
                continue
            xor_into(acc, instance.iv(demand[a_idx], b2_idx))
        if bytes(acc) != instance.iv(demand[k], b_idx):
            failures.append((rnd, k, b_idx, "reconstructed value mismatch"))
    return failures


def _reduce_node_multicast(instance, scheme, terms, by_slot, demand, k, rnd):
    failures = []
    held = instance.assignment[k]
    g = len(terms[0]) if terms else 0
    a_k = scheme.universe.a_family[k]
    T = instance.value_bytes
    seg = -(-T // (g - 1)) if g > 1 else T
    for b_idx, b in enumerate(scheme.universe.b_family):
        if b_idx in held:
            continue
        cid = scheme.pair_colors[(a_k, b)]
        cls = terms[cid]
        i = cls.index((k, b_idx))
        chunks = [None] * (g - 1)
        for j in range(g):
            if j == i:
                continue
            msg = by_slot[(cid, j)]
            acc = bytearray(msg.payload)
            for i2 in range(g):
                if i2 in (i, j):
                    continue
                v2 = instance.iv(demand[cls[i2][0]], cls[i2][1])
                v2 = v2 + bytes(seg * (g - 1) - len(v2))
                rank2 = _segment_ranks(g, i2).index(j)
                xor_into(acc, v2[rank2 * seg:(rank2 + 1) * seg])
            chunks[_segment_ranks(g, i).index(j)] = bytes(acc)
        value = b"".join(chunks)[:T]
        if value != instance.iv(demand[k], b_idx):
            failures.append((rnd, k, b_idx, "multicast value mismatch"))
    return failures


def cdc_bound(r, K):
    """Optimal communication load (1/r)(1 - r/K) at computation load r."""
    r = Fraction(r)
    if not 0 < r <= K:
        raise RangeError(f"need 0 < r <= K, got r={r}, K={K}")
    return Fraction(1, 1) / r * (1 - r / Fraction(K))
