"""Families, combining operations, colored subsets, and rainbow validation.

A universe pairs two ordered families A (users/nodes) and B (packets/files)
under a combining operation and records every combined element. A coloring
assigns dense integer color ids to a chosen subset of the combined elements;
it is valid when every designated structure inside that subset (3-term
arithmetic progression, overlapping subsets, grid-aligned cell patterns, or
a custom predicate) is rainbow, i.e. uses pairwise distinct colors.

Elements are plain Python values: ints, 2-tuples (position/symbol pairs or
combined user-packet pairs), or frozensets of ints/2-tuples.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import (
    DomainTooLarge,
    EmptyFamily,
    InfeasibleUnderCap,
    KindMismatch,
)

SET_UNION = "SET_UNION"
INTEGER_SUM = "INTEGER_SUM"
CARTESIAN_PAIR = "CARTESIAN_PAIR"
OPS = (SET_UNION, INTEGER_SUM, CARTESIAN_PAIR)

THREE_AP = "THREE_AP"
SUBSET_RAINBOW = "SUBSET_RAINBOW"
PDA_STRONG_EDGE = "PDA_STRONG_EDGE"
CUSTOM = "CUSTOM"

_EXACT_DOMAIN_GUARD = 24


def as_set(e):
    """Coerce an atom (int or pair) to a singleton frozenset; sets pass through."""
    if isinstance(e, frozenset):
        return e
    if isinstance(e, set):
        return frozenset(e)
    if isinstance(e, (int, tuple)):
        return frozenset((e,))
    raise KindMismatch(f"cannot treat {e!r} as a set element")


def combine_elements(op, a, b):
    """Apply the combining operation to one element from each family."""
    if op == SET_UNION:
        return as_set(a) | as_set(b)
    if op == INTEGER_SUM:
        if not (isinstance(a, int) and isinstance(b, int)):
            raise KindMismatch("INTEGER_SUM needs integer elements")
        return a + b
    if op == CARTESIAN_PAIR:
        return (a, b)
    raise KindMismatch(f"unknown operation {op!r}")


def sort_key(e):
    """Total order over mixed elements, used for canonical enumeration."""
    if isinstance(e, bool):
        raise KindMismatch("bool is not an element")
    if isinstance(e, int):
        return (0, e)
    if isinstance(e, tuple):
        return (1, tuple(sort_key(x) for x in e))
    if isinstance(e, frozenset):
        return (2, tuple(sorted(sort_key(x) for x in e)))
    raise KindMismatch(f"unsupported element {e!r}")


def encode_element(e):
    """JSON encoding: ints as numbers, pairs as 2-arrays, sets as sorted arrays."""
    if isinstance(e, int):
        return e
    if isinstance(e, tuple):
        return [encode_element(x) for x in e]
    if isinstance(e, frozenset):
        return [encode_element(x) for x in sorted(e, key=sort_key)]
    raise KindMismatch(f"unsupported element {e!r}")


def element_kind(e):
    """One of "int", "pair", "set"."""
    if isinstance(e, int):
        return "int"
    if isinstance(e, tuple):
        return "pair"
    if isinstance(e, frozenset):
        return "set"
    raise KindMismatch(f"unsupported element {e!r}")


def decode_element(obj, kind):
    """Inverse of encode_element given the element kind.

    The kind tag is needed because a bare 2-array is ambiguous between a
    pair atom and a 2-element integer set.
    """
    if kind == "int":
        if not isinstance(obj, int):
            raise KindMismatch(f"expected integer element, got {obj!r}")
        return obj
    if kind == "pair":
        if not (isinstance(obj, list) and len(obj) == 2):
            raise KindMismatch(f"expected pair encoding, got {obj!r}")
        return tuple(_decode_atom(x) for x in obj)
    if kind == "set":
        if not isinstance(obj, list):
            raise KindMismatch(f"expected set encoding, got {obj!r}")
        return frozenset(_decode_atom(x) for x in obj)
    raise KindMismatch(f"unknown element kind {kind!r}")


def _decode_atom(obj):
    if isinstance(obj, int):
        return obj
    if isinstance(obj, list) and len(obj) == 2 and all(isinstance(x, int) for x in obj):
        return tuple(obj)
    raise KindMismatch(f"cannot decode set member {obj!r}")


def element_key(e):
    """Canonical string key for an element, used in JSON maps."""
    return json.dumps(encode_element(e), separators=(",", ":"))


@dataclass(frozen=True)
class Universe:
    """Two ordered families, their operation, and all combined elements."""

    a_family: tuple
    b_family: tuple
    op: str
    elements: frozenset
    pair_index: dict  # (a, b) -> combined element

    @property
    def K(self):
        return len(self.a_family)

    @property
    def F(self):
        return len(self.b_family)

    def combined(self, a, b):
        return self.pair_index[(a, b)]


def build_universe(a_family, b_family, op):
    """Combine every (a, b) pair; duplicates merge in C but stay in pair_index."""
    if op not in OPS:
        raise KindMismatch(f"unknown operation {op!r}")
    a_family = tuple(a_family)
    b_family = tuple(b_family)
    if not a_family or not b_family:
        raise EmptyFamily("both families must be nonempty")
    if len(set(a_family)) != len(a_family) or len(set(b_family)) != len(b_family):
        raise EmptyFamily("family members must be distinct")
    pair_index = {}
    elements = set()
    for a in a_family:
        for b in b_family:
            e = combine_elements(op, a, b)
            pair_index[(a, b)] = e
            elements.add(e)
    return Universe(a_family, b_family, op, frozenset(elements), pair_index)


@dataclass(frozen=True)
class SigmaStructure:
    """A designated pattern that every coloring must render rainbow."""

    kind: str
    min_overlap: int = 1
    predicate: Optional[Callable] = None
    arity: int = 0
    name: str = ""

    @staticmethod
    def three_ap():
        return SigmaStructure(THREE_AP)

    @staticmethod
    def subset_rainbow(min_overlap=1):
        if min_overlap < 1:
            raise KindMismatch("overlap threshold must be >= 1")
        return SigmaStructure(SUBSET_RAINBOW, min_overlap=min_overlap)

    @staticmethod
    def pda_strong_edge():
        return SigmaStructure(PDA_STRONG_EDGE)

    @staticmethod
    def custom(predicate, arity, name=""):
        if not 2 <= arity <= 4:
            raise KindMismatch("custom structures support arity 2..4")
        return SigmaStructure(CUSTOM, predicate=predicate, arity=arity, name=name)

    def to_doc(self):
        doc = {"kind": self.kind}
        if self.kind == SUBSET_RAINBOW:
            doc["min_overlap"] = self.min_overlap
        if self.kind == CUSTOM:
            doc["name"] = self.name
            doc["arity"] = self.arity
        return doc


def _instances(domain, sigma):
    """All structure instances whose members all lie in `domain`."""
    elems = sorted(domain, key=sort_key)
    out = []
    if sigma.kind == THREE_AP:
        if not all(isinstance(e, int) for e in elems):
            raise KindMismatch("3-AP structures need integer elements")
        present = set(elems)
        hi = elems[-1] if elems else 0
        for x in elems:
            d = 1
            while x + 2 * d <= hi:
                if x + d in present and x + 2 * d in present:
                    out.append((x, x + d, x + 2 * d))
                d += 1
        out.sort()
        return out
    if sigma.kind == SUBSET_RAINBOW:
        if not all(isinstance(e, frozenset) for e in elems):
            raise KindMismatch("subset structures need set elements")
        for c1, c2 in itertools.combinations(elems, 2):
            if len(c1 & c2) >= sigma.min_overlap:
                out.append((c1, c2))
        for c1, c2, c3 in itertools.combinations(elems, 3):
            u12, u13, u23 = c1 | c2, c1 | c3, c2 | c3
            if c1 <= u23 or c2 <= u13 or c3 <= u12:
                out.append((c1, c2, c3))
        return out
    if sigma.kind == PDA_STRONG_EDGE:
        if not all(isinstance(e, tuple) and len(e) == 2 for e in elems):
            raise KindMismatch("grid structures need combined-pair elements")
        for e1, e2 in itertools.combinations(elems, 2):
            if e1[0] == e2[0] or e1[1] == e2[1]:
                out.append((e1, e2))
        for trip in itertools.combinations(elems, 3):
            firsts = {e[0] for e in trip}
            seconds = {e[1] for e in trip}
            if len(firsts) <= 2 and len(seconds) <= 2:
                out.append(trip)
        return out
    if sigma.kind == CUSTOM:
        for tup in itertools.combinations(elems, sigma.arity):
            if sigma.predicate(*tup):
                out.append(tup)
        return out
    raise KindMismatch(f"unknown structure kind {sigma.kind!r}")


def enumerate_sigma(universe, restricted_to, sigma):
    """Every structure instance fully contained in `restricted_to`."""
    return _instances(set(restricted_to), sigma)


def ap_endpoint_sigma(domain):
    """Endpoint pairs of 3-APs inside `domain`.

    Weaker than THREE_AP: only the two ends of a progression must differ.
    This is the condition pair-delivery actually needs (a cross sum is the
    midpoint of a progression whose ends share a color), and any strictly
    rainbow coloring satisfies it.
    """
    members = frozenset(domain)

    def endpoints(x, z):
        if (x + z) % 2:
            return False
        return (x + z) // 2 in members

    return SigmaStructure.custom(endpoints, 2, name="ap-endpoints")


def conflict_adjacency(domain, sigma):
    """Graph on `domain`: edge between any two members of one instance."""
    adj = {e: set() for e in domain}
    for inst in _instances(set(domain), sigma):
        for u, v in itertools.combinations(inst, 2):
            adj[u].add(v)
            adj[v].add(u)
    return adj


@dataclass
class Coloring:
    """Total color assignment on a chosen subset of combined elements."""

    domain: frozenset
    mapping: dict  # element -> color id (dense ints 0..num_colors-1)
    labels: Optional[dict] = None  # color id -> display label

    def __post_init__(self):
        self.domain = frozenset(self.domain)
        self.mapping = dict(self.mapping)
        if set(self.mapping) != self.domain:
            raise KindMismatch("coloring must cover exactly its domain")
        for v in self.mapping.values():
            if not isinstance(v, int) or v < 0:
                raise KindMismatch("color ids must be nonnegative ints")

    @property
    def num_colors(self):
        return len(set(self.mapping.values()))

    def color_of(self, e):
        return self.mapping[e]

    def label_of(self, color_id):
        if self.labels and color_id in self.labels:
            return self.labels[color_id]
        return str(color_id)


def coloring_from_labels(raw_mapping):
    """Build a Coloring from arbitrary hashable color labels.

    Labels are mapped to dense ids in sorted label order and kept as display
    labels.
    """
    distinct = sorted(set(raw_mapping.values()),
                      key=lambda v: (0, v, "") if isinstance(v, int) else (1, 0, str(v)))
    ids = {label: i for i, label in enumerate(distinct)}
    mapping = {e: ids[v] for e, v in raw_mapping.items()}
    labels = {i: label for label, i in ids.items()}
    return Coloring(frozenset(raw_mapping), mapping, labels)


@dataclass(frozen=True)
class RainbowReport:
    """PASS, or FAIL with the first violating instance and its colors."""

    passed: bool
    instance: Optional[tuple] = None
    colors: Optional[tuple] = None

    def __bool__(self):
        return self.passed


def validate_rainbow(coloring, sigma):
    """Check that every structure instance inside the domain is rainbow."""
    for inst in _instances(coloring.domain, sigma):
        colors = tuple(coloring.mapping[e] for e in inst)
        if len(set(colors)) != len(colors):
            return RainbowReport(False, inst, colors)
    return RainbowReport(True)


def greedy_color(universe, domain, sigma, order=None):
    """Smallest-free-color greedy over the conflict graph of `domain`.

    Deterministic for a fixed `order` (canonical element order by default);
    the result always passes validate_rainbow.
    """
    domain = frozenset(domain)
    if order is None:
        order = sorted(domain, key=sort_key)
    else:
        order = list(order)
        if frozenset(order) != domain:
            raise KindMismatch("order must enumerate exactly the domain")
    adj = conflict_adjacency(domain, sigma)
    mapping = {}
    for e in order:
        used = {mapping[v] for v in adj[e] if v in mapping}
        c = 0
        while c in used:
            c += 1
        mapping[e] = c
    return Coloring(domain, mapping)


def exact_min_colors(universe, domain, sigma, cap=None):
    """Provably minimum rainbow coloring via branch and bound.

    Returns (coloring, min_colors). Vertices are picked by saturation degree;
    a fresh color is only ever tried once per step, which removes color
    symmetry. Guarded to |domain| <= 24.
    """
    domain = frozenset(domain)
    n = len(domain)
    if n > _EXACT_DOMAIN_GUARD:
        raise DomainTooLarge(f"exact search limited to {_EXACT_DOMAIN_GUARD} elements")
    if n == 0:
        if cap is not None and cap < 0:
            raise InfeasibleUnderCap("negative cap")
        return Coloring(domain, {}), 0
    verts = sorted(domain, key=sort_key)
    index = {e: i for i, e in enumerate(verts)}
    adj_sets = conflict_adjacency(domain, sigma)
    adj = [sorted(index[v] for v in adj_sets[verts[i]]) for i in range(n)]

    greedy = greedy_color(universe, domain, sigma)
    best_count = greedy.num_colors
    best_assign = [greedy.mapping[verts[i]] for i in range(n)]

    colors = [-1] * n

    def pick_vertex():
        cand, cand_sat, cand_deg = -1, -1, -1
        for v in range(n):
            if colors[v] != -1:
                continue
            sat = len({colors[u] for u in adj[v] if colors[u] != -1})
            deg = len(adj[v])
            if sat > cand_sat or (sat == cand_sat and deg > cand_deg):
                cand, cand_sat, cand_deg = v, sat, deg
        return cand

    def backtrack(colored, used):
        nonlocal best_count, best_assign
        if used >= best_count:
            return
        if colored == n:
            best_count = used
            best_assign = colors[:]
            return
        v = pick_vertex()
        neighbor_colors = {colors[u] for u in adj[v] if colors[u] != -1}
        for c in range(min(used + 1, best_count - 1)):
            if c in neighbor_colors:
                continue
            colors[v] = c
            backtrack(colored + 1, max(used, c + 1))
            colors[v] = -1

    backtrack(0, 0)

    if cap is not None and best_count > cap:
        raise InfeasibleUnderCap(
            f"minimum is {best_count} colors, above the cap of {cap}")
    # relabel densely in canonical vertex order for reproducibility
    relabel = {}
    mapping = {}
    for i, e in enumerate(verts):
        c = best_assign[i]
        if c not in relabel:
            relabel[c] = len(relabel)
        mapping[e] = relabel[c]
    return Coloring(domain, mapping), best_count


def _family_kind(family):
    kinds = {element_kind(e) for e in family}
    if len(kinds) != 1:
        raise KindMismatch("cannot serialize a family of mixed element kinds")
    return kinds.pop()


def combined_kind(op, a_kind, b_kind):
    if op == INTEGER_SUM:
        return "int"
    if op == SET_UNION:
        return "set"
    return "pair"


def _decode_combined(obj, op, a_kind, b_kind):
    if op == CARTESIAN_PAIR:
        if not (isinstance(obj, list) and len(obj) == 2):
            raise KindMismatch(f"expected combined pair, got {obj!r}")
        return (decode_element(obj[0], a_kind), decode_element(obj[1], b_kind))
    return decode_element(obj, combined_kind(op, a_kind, b_kind))


def universe_to_doc(universe, coloring=None):
    """JSON document for a universe and (optionally) its coloring."""
    doc = {
        "A": [encode_element(a) for a in universe.a_family],
        "B": [encode_element(b) for b in universe.b_family],
        "op": universe.op,
        "a_kind": _family_kind(universe.a_family),
        "b_kind": _family_kind(universe.b_family),
    }
    if coloring is not None:
        doc["colored"] = {element_key(e): coloring.mapping[e]
                          for e in sorted(coloring.domain, key=sort_key)}
        if coloring.labels:
            doc["labels"] = {str(i): str(v) for i, v in coloring.labels.items()}
    return doc


def universe_from_doc(doc):
    """Rebuild (universe, coloring-or-None) from universe_to_doc output."""
    op = doc["op"]
    a_kind = doc["a_kind"]
    b_kind = doc["b_kind"]
    a_family = [decode_element(x, a_kind) for x in doc["A"]]
    b_family = [decode_element(x, b_kind) for x in doc["B"]]
    universe = build_universe(a_family, b_family, op)
    coloring = None
    if "colored" in doc:
        mapping = {}
        for key, cid in doc["colored"].items():
            e = _decode_combined(json.loads(key), op, a_kind, b_kind)
            mapping[e] = int(cid)
        labels = None
        if doc.get("labels"):
            labels = {int(k): v for k, v in doc["labels"].items()}
        coloring = Coloring(frozenset(mapping), mapping, labels)
    return universe, coloring
