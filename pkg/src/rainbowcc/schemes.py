"""Coded caching schemes built from validated colorings.

A scheme stores the placement (each user caches the packets whose combined
element is uncolored), the pair coloring that drives delivery, the per-user
visible-color counts, and the MDS matrix that compresses the per-color XOR
values into the broadcast. Within one color class any two pairs must miss
each other's packets; that single condition is what makes every user able
to peel its own subfile out of the class XOR.

Also hosts the catalog constructions (subset-based schemes, short linear
block codes, cyclic windows), placement delivery array interop, and the
cut-set converse bound.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import gf
from .errors import (
    ClaimViolation,
    DimensionMismatch,
    KindMismatch,
    NonuniformCache,
    PdaInvalid,
    RainbowViolation,
    RangeError,
    RankPropertyFail,
    Undecodable,
    Underdetermined,
    UnsupportedGenerator,
)
from .gf import GF2, GF256
from .kernels import xor_into
from .universe import (
    CARTESIAN_PAIR,
    SET_UNION,
    Coloring,
    SigmaStructure,
    Universe,
    ap_endpoint_sigma,
    build_universe,
    coloring_from_labels,
    decode_element,
    encode_element,
    sort_key,
    universe_from_doc,
    universe_to_doc,
    validate_rainbow,
)


@dataclass(frozen=True)
class SchemeParams:
    """Headline parameters: K users, F packets, cache fraction, delivery rate."""

    K: int
    F: int
    Z: int                      # colored (uncached) packets per user
    num_colors: int             # |Phi|, the XOR-group count
    m: int                      # broadcast packet count
    cache_fraction: Fraction    # M/N = 1 - Z/F
    rate: Fraction              # R = m/F
    field: str


@dataclass
class CachingScheme:
    universe: Universe
    coloring: Coloring
    sigma: SigmaStructure
    field: str
    pair_colors: dict           # (a, b) -> dense color id, colored pairs only
    color_classes: list         # color id -> list of (a, b)
    placement: dict             # user element -> sorted tuple of packet indices
    m_table: dict               # (a, b) -> visible-color count
    m: int
    P: gf.Matrix
    params: SchemeParams
    pair_labels: Optional[dict] = None
    family: Optional[dict] = None

    def __post_init__(self):
        self.a_index = {a: i for i, a in enumerate(self.universe.a_family)}
        self.b_index = {b: i for i, b in enumerate(self.universe.b_family)}

    @property
    def num_colors(self):
        return len(self.color_classes)

    def pair_label(self, color_id):
        if self.pair_labels and color_id in self.pair_labels:
            return self.pair_labels[color_id]
        return color_id


def decodability_sigma(universe, colored):
    """Pairs of colored elements that may not share a color.

    Two elements conflict when some decompositions (a1,b1), (a2,b2) share a
    user or a packet, or when one user's combination with the other packet
    is itself colored; equal colors would then break decodability.
    """
    colored = frozenset(colored)
    pairs_of = defaultdict(list)
    for (a, b), e in universe.pair_index.items():
        if e in colored:
            pairs_of[e].append((a, b))

    def conflicts(e1, e2):
        for a1, b1 in pairs_of[e1]:
            for a2, b2 in pairs_of[e2]:
                if a1 == a2 or b1 == b2:
                    return True
                if universe.pair_index[(a1, b2)] in colored:
                    return True
                if universe.pair_index[(a2, b1)] in colored:
                    return True
        return False

    return SigmaStructure.custom(conflicts, 2, name="decodability")


def sigma_from_doc(doc, universe, colored):
    kind = doc["kind"]
    if kind == "THREE_AP":
        return SigmaStructure.three_ap()
    if kind == "SUBSET_RAINBOW":
        return SigmaStructure.subset_rainbow(doc.get("min_overlap", 1))
    if kind == "PDA_STRONG_EDGE":
        return SigmaStructure.pda_strong_edge()
    if kind == "CUSTOM" and doc.get("name") == "decodability":
        return decodability_sigma(universe, colored)
    if kind == "CUSTOM" and doc.get("name") == "ap-endpoints":
        return ap_endpoint_sigma(colored)
    raise KindMismatch(f"cannot rebuild structure {doc!r}")


def compute_m_table(universe, pair_colors, colored, field=GF2):
    """Per-pair visible-color counts and the broadcast size m.

    m(a, b) counts the distinct colors over pairs (a', b') with a' = a or
    with the combination of a and b' colored; it depends on a only. Over
    GF(2), m is floored at num_colors - 1 so a binary MDS matrix exists.
    """
    colored = frozenset(colored)
    visible = {}
    for a in universe.a_family:
        seen = set()
        for (a2, b2), c in pair_colors.items():
            if a2 == a or universe.pair_index[(a, b2)] in colored:
                seen.add(c)
        visible[a] = len(seen)
    m_table = {pair: visible[pair[0]] for pair in pair_colors}
    num_colors = len(set(pair_colors.values()))
    max_m = max(m_table.values(), default=0)
    if num_colors == 0:
        m = 0
    elif field == GF2:
        m = max(max_m, num_colors - 1)
    else:
        m = max_m
    return m_table, m


def build_scheme(universe, coloring, sigma, field=GF2, pair_coloring=None,
                 pair_labels=None, family=None):
    """Turn a validated coloring into a full scheme.

    By default pairs inherit the color of their combined element; an
    explicit pair_coloring (mapping every colored pair to a color id)
    overrides that, which is how the difference-annotated sum colorings
    plug in.
    """
    if field not in (GF2, GF256):
        raise DimensionMismatch(f"unknown field tag {field!r}")
    if not coloring.domain <= universe.elements:
        raise KindMismatch("coloring domain is not a subset of the universe")
    report = validate_rainbow(coloring, sigma)
    if not report:
        raise RainbowViolation(
            f"structure {report.instance} has colors {report.colors}")
    colored = coloring.domain

    colored_pairs = [(a, b) for a in universe.a_family for b in universe.b_family
                     if universe.pair_index[(a, b)] in colored]
    if pair_coloring is None:
        raw = {pair: coloring.mapping[universe.pair_index[pair]]
               for pair in colored_pairs}
        if pair_labels is None and coloring.labels:
            pair_labels = dict(coloring.labels)
    else:
        if set(pair_coloring) != set(colored_pairs):
            raise KindMismatch("pair coloring must cover exactly the colored pairs")
        raw = dict(pair_coloring)

    used = sorted(set(raw.values()))
    remap = {c: i for i, c in enumerate(used)}
    pair_colors = {pair: remap[c] for pair, c in raw.items()}
    if pair_labels is not None:
        pair_labels = {remap[c]: lab for c, lab in pair_labels.items() if c in remap}

    num_colors = len(used)
    classes = [[] for _ in range(num_colors)]
    for pair in colored_pairs:
        classes[pair_colors[pair]].append(pair)
    for cls in classes:
        cls.sort(key=lambda p: (sort_key(p[0]), sort_key(p[1])))

    for cid, cls in enumerate(classes):
        for a1, b1 in cls:
            for a2, b2 in cls:
                if (a1, b1) != (a2, b2) and universe.pair_index[(a1, b2)] in colored:
                    raise ClaimViolation(
                        f"color {cid}: pairs ({a1},{b1}) and ({a2},{b2}) collide")

    z_values = {}
    for a in universe.a_family:
        z_values[a] = sum(1 for b in universe.b_family
                          if universe.pair_index[(a, b)] in colored)
    if len(set(z_values.values())) > 1:
        raise NonuniformCache(f"uncached counts vary: {sorted(set(z_values.values()))}")
    Z = next(iter(z_values.values()))

    m_table, m = compute_m_table(universe, pair_colors, colored, field)
    assert all(v <= num_colors for v in m_table.values())
    P = gf.mds_matrix(m, num_colors, field)

    placement = {a: tuple(i for i, b in enumerate(universe.b_family)
                          if universe.pair_index[(a, b)] not in colored)
                 for a in universe.a_family}

    params = SchemeParams(
        K=universe.K, F=universe.F, Z=Z, num_colors=num_colors, m=m,
        cache_fraction=Fraction(universe.F - Z, universe.F),
        rate=Fraction(m, universe.F), field=field)
    return CachingScheme(universe, coloring, sigma, field, pair_colors, classes,
                         placement, m_table, m, P, params,
                         pair_labels=pair_labels, family=family)


def check_demands(demands, K, N):
    demands = tuple(demands)
    if len(demands) != K:
        raise DimensionMismatch(f"demand vector length {len(demands)}, expected {K}")
    for d in demands:
        if not isinstance(d, int) or not 0 <= d < N:
            raise DimensionMismatch(f"demand {d!r} outside [0, {N})")
    return demands


def deliver(scheme, demands, library):
    """Broadcast for one demand vector: exactly m packets.

    `library` is an N x F table of equal-length packets; the per-color XOR
    values are stacked and multiplied by the MDS matrix.
    """
    N = len(library)
    demands = check_demands(demands, scheme.params.K, N)
    F = scheme.params.F
    for row in library:
        if len(row) != F:
            raise DimensionMismatch(f"library rows must have {F} packets")
    size = len(library[0][0]) if F else 0
    values = []
    for cls in scheme.color_classes:
        acc = bytearray(size)
        for a, b in cls:
            pkt = library[demands[scheme.a_index[a]]][scheme.b_index[b]]
            if len(pkt) != size:
                raise DimensionMismatch("library packets must share one size")
            xor_into(acc, pkt)
        values.append(bytes(acc))
    return gf.combine(scheme.P, values)


def decode(scheme, user, demands, cache_contents, broadcast):
    """Recover all F packets of the user's demanded file.

    The user first forms every color value whose packets it all caches,
    cancels them from the broadcast, solves the residual MDS system for the
    remaining color values, and finally peels cached siblings out of each
    class containing one of its own wanted subfiles.
    """
    a = scheme.universe.a_family[user]
    demands = tuple(demands)
    if len(demands) != scheme.params.K:
        raise DimensionMismatch(
            f"demand vector length {len(demands)}, expected {scheme.params.K}")
    cached = set(scheme.placement[a])
    if set(cache_contents) != cached:
        raise DimensionMismatch("cache contents do not match the placement")
    if len(broadcast) != scheme.m:
        raise DimensionMismatch(f"expected {scheme.m} broadcast packets")

    if cache_contents:
        size = len(next(iter(cache_contents.values()))[0])
    elif broadcast:
        size = len(broadcast[0])
    else:
        size = 0

    known = {}
    for cid, cls in enumerate(scheme.color_classes):
        if all(scheme.b_index[b] in cached for _, b in cls):
            acc = bytearray(size)
            for a2, b2 in cls:
                xor_into(acc, cache_contents[scheme.b_index[b2]]
                         [demands[scheme.a_index[a2]]])
            known[cid] = bytes(acc)

    residual = [bytearray(pkt) for pkt in broadcast]
    for i in range(scheme.P.rows):
        for cid, value in known.items():
            coef = scheme.P[i][cid]
            if coef == 1:
                xor_into(residual[i], value)
            elif coef:
                gf.kernels.gf256_axpy(residual[i], value, coef)
    try:
        solved = gf.solve_submatrix(scheme.P, known.keys(),
                                    [bytes(r) for r in residual])
    except Underdetermined as exc:
        raise Undecodable(f"user {user}: {exc}") from exc
    values = {**known, **solved}

    out = []
    for f_idx, b in enumerate(scheme.universe.b_family):
        if f_idx in cached:
            out.append(cache_contents[f_idx][demands[user]])
            continue
        cid = scheme.pair_colors[(a, b)]
        acc = bytearray(values[cid])
        for a2, b2 in scheme.color_classes[cid]:
            if (a2, b2) == (a, b):
                continue
            idx = scheme.b_index[b2]
            if idx not in cached:
                raise Undecodable(f"user {user} misses sibling packet {b2!r}")
            xor_into(acc, cache_contents[idx][demands[scheme.a_index[a2]]])
        out.append(bytes(acc))
    return out


# ---------------------------------------------------------------------------
# Placement delivery arrays
# ---------------------------------------------------------------------------

STAR = None


@dataclass(frozen=True)
class PDA:
    """F x K array of color ints and stars (None)."""

    grid: tuple

    @property
    def F(self):
        return len(self.grid)

    @property
    def K(self):
        return len(self.grid[0]) if self.grid else 0

    @property
    def g(self):
        sizes = {len(cells) for cells in self._classes().values()}
        if len(sizes) == 1:
            return sizes.pop()
        return None

    def colors(self):
        return sorted({v for row in self.grid for v in row if v is not STAR})

    def _classes(self):
        cls = defaultdict(list)
        for f, row in enumerate(self.grid):
            for k, v in enumerate(row):
                if v is not STAR:
                    cls[v].append((f, k))
        return cls


def pda_from_rows(rows):
    rows = tuple(tuple(r) for r in rows)
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError("grid rows must be nonempty and of equal length")
    return PDA(rows)


def parse_pda(text):
    """Parse the text format: F lines of K whitespace-separated tokens."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = []
        for tok in line.split():
            if tok == "*":
                row.append(STAR)
            else:
                row.append(int(tok))
        rows.append(tuple(row))
    return pda_from_rows(rows)


def format_pda(pda):
    lines = []
    for row in pda.grid:
        lines.append(" ".join("*" if v is STAR else str(v) for v in row))
    return "\n".join(lines) + "\n"


def validate_pda(pda):
    """Raise PdaInvalid (with the violated axiom and cells) unless all hold."""
    grid = pda.grid
    F, K = pda.F, pda.K
    for f in range(F):
        seen = {}
        for k in range(K):
            v = grid[f][k]
            if v is STAR:
                continue
            if v in seen:
                raise PdaInvalid(f"C1: color {v} twice in row {f} "
                                 f"at cells {(f, seen[v])} and {(f, k)}")
            seen[v] = k
    for k in range(K):
        seen = {}
        for f in range(F):
            v = grid[f][k]
            if v is STAR:
                continue
            if v in seen:
                raise PdaInvalid(f"C1: color {v} twice in column {k} "
                                 f"at cells {(seen[v], k)} and {(f, k)}")
            seen[v] = f
    for color, cells in pda._classes().items():
        for (f1, k1), (f2, k2) in itertools.combinations(cells, 2):
            if grid[f1][k2] is not STAR or grid[f2][k1] is not STAR:
                raise PdaInvalid(f"C2: color {color} at {(f1, k1)} and {(f2, k2)} "
                                 f"needs stars at {(f1, k2)} and {(f2, k1)}")
    star_counts = {sum(1 for f in range(F) if grid[f][k] is STAR) for k in range(K)}
    if len(star_counts) > 1:
        raise PdaInvalid(f"column star counts differ: {sorted(star_counts)}")


def pda_to_scheme(pda, field=GF2):
    """Columns become users, rows become packets, colored cells become XORs."""
    validate_pda(pda)
    universe = build_universe(list(range(pda.K)), list(range(pda.F)),
                              CARTESIAN_PAIR)
    raw = {}
    for f, row in enumerate(pda.grid):
        for k, v in enumerate(row):
            if v is not STAR:
                raw[(k, f)] = v
    coloring = coloring_from_labels(raw)
    return build_scheme(universe, coloring, SigmaStructure.pda_strong_edge(),
                        field=field, family={"kind": "pda"})


def scheme_to_pda(scheme):
    """Extract the F x K grid; colored cells carry their original labels."""
    rows = []
    for f, b in enumerate(scheme.universe.b_family):
        row = []
        for k, a in enumerate(scheme.universe.a_family):
            cid = scheme.pair_colors.get((a, b))
            if cid is None:
                row.append(STAR)
            else:
                label = scheme.pair_label(cid)
                row.append(label if isinstance(label, int) else cid)
        rows.append(tuple(row))
    return pda_from_rows(rows)


# ---------------------------------------------------------------------------
# Catalog constructions
# ---------------------------------------------------------------------------

def _all_distinct_coloring(elements):
    ordered = sorted(elements, key=sort_key)
    return Coloring(frozenset(ordered), {e: i for i, e in enumerate(ordered)})


def scheme_man(K, t, field=GF2):
    """Users [K] against t-subsets; every (t+1)-subset is its own XOR group.

    Parameters (K, C(K,t), t/K, C(K,t+1)/C(K,t)); the naive rate equals
    K(1-t/K)/(t+1).
    """
    if not 1 <= t < K:
        raise RangeError(f"need 1 <= t < K, got t={t}, K={K}")
    ground = range(1, K + 1)
    universe = build_universe(list(ground),
                              [frozenset(c) for c in itertools.combinations(ground, t)],
                              SET_UNION)
    colored = frozenset(e for e in universe.elements if len(e) == t + 1)
    return build_scheme(universe, _all_distinct_coloring(colored),
                        SigmaStructure.subset_rainbow(1), field=field,
                        family={"kind": "man", "K": K, "t": t})


def scheme_union_subsets(n, a, b, field=GF2):
    """a-subsets against b-subsets of [n]; (a+b)-subsets are the XOR groups."""
    if not (1 <= a < b and a + b <= n):
        raise RangeError(f"need 1 <= a < b and a+b <= n, got {(n, a, b)}")
    ground = range(1, n + 1)
    universe = build_universe(
        [frozenset(c) for c in itertools.combinations(ground, a)],
        [frozenset(c) for c in itertools.combinations(ground, b)],
        SET_UNION)
    colored = frozenset(e for e in universe.elements if len(e) == a + b)
    return build_scheme(universe, _all_distinct_coloring(colored),
                        SigmaStructure.subset_rainbow(a), field=field,
                        family={"kind": "union-subsets", "n": n, "a": a, "b": b})


def cyclic_universe(n):
    """Users [n] against the n cyclic windows of size n-2.

    The colored elements are the n windows of size n-1; each has exactly two
    decompositions, so every XOR group pairs two users.
    """
    if n < 4:
        raise RangeError(f"cyclic family needs n >= 4, got {n}")
    users = list(range(1, n + 1))
    windows = [frozenset((i + j) % n + 1 for j in range(n - 2)) for i in range(n)]
    universe = build_universe(users, windows, SET_UNION)
    colored = frozenset(e for e in universe.elements if len(e) == n - 1)
    return universe, _all_distinct_coloring(colored)


def scheme_cyclic(n, field=GF2):
    universe, coloring = cyclic_universe(n)
    return build_scheme(universe, coloring, SigmaStructure.subset_rainbow(1),
                        field=field, family={"kind": "cyclic", "n": n})


def _is_prime(q):
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def _solve_mod_q(matrix_rows, rhs, q):
    """Solve a square system mod prime q; returns the solution vector."""
    k = len(matrix_rows)
    work = [list(matrix_rows[r]) + [rhs[r] % q] for r in range(k)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if work[r][col] % q), None)
        if pivot is None:
            raise RankPropertyFail("singular system while coloring")
        work[col], work[pivot] = work[pivot], work[col]
        inv = pow(work[col][col], -1, q)
        work[col] = [(v * inv) % q for v in work[col]]
        for r in range(k):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [(work[r][j] - f * work[col][j]) % q for j in range(k + 1)]
    return [work[r][k] for r in range(k)]


def scheme_linear_block(generator, q, field=GF2):
    """Scheme from a k x (k+1) generator matrix over a prime field.

    Users are (position, symbol) pairs, packets are codeword sets. For each
    non-codeword sequence the k+1 one-position corrections form one XOR
    group. Requires every k-column subset of the generator to have full
    rank.
    """
    G = [list(row) for row in generator]
    k = len(G)
    if k == 0 or len({len(r) for r in G}) != 1:
        raise DimensionMismatch("generator must be a nonempty rectangular matrix")
    n = len(G[0])
    if n != k + 1:
        raise UnsupportedGenerator(f"only n = k+1 supported, got k={k}, n={n}")
    if not _is_prime(q):
        raise RangeError(f"alphabet size must be prime, got {q}")
    G = [[v % q for v in row] for row in G]

    for j in range(n):
        cols = [c for c in range(n) if c != j]
        sub = [[G[r][c] for c in cols] for r in range(k)]
        rank = 0
        work = [row[:] for row in sub]
        for col in range(k):
            pivot = next((r for r in range(rank, k) if work[r][col] % q), None)
            if pivot is None:
                continue
            work[rank], work[pivot] = work[pivot], work[rank]
            inv = pow(work[rank][col], -1, q)
            work[rank] = [(v * inv) % q for v in work[rank]]
            for r in range(k):
                if r != rank and work[r][col]:
                    f = work[r][col]
                    work[r] = [(work[r][c2] - f * work[rank][c2]) % q
                               for c2 in range(k)]
            rank += 1
        if rank < k:
            raise RankPropertyFail(f"columns {cols} have rank {rank} < {k}")

    def encode_msg(msg):
        return tuple(sum(msg[i] * G[i][j] for i in range(k)) % q for j in range(n))

    messages = list(itertools.product(range(q), repeat=k))
    codewords = [encode_msg(msg) for msg in messages]
    codeword_set = set(codewords)
    code_elem = {w: frozenset((pos + 1, w[pos]) for pos in range(n))
                 for w in codewords}

    users = [(pos, sym) for pos in range(1, n + 1) for sym in range(q)]
    universe = build_universe(users, [code_elem[w] for w in codewords], SET_UNION)
    colored = frozenset(e for e in universe.elements if len(e) == n + 1)

    mapping = {}
    class_id = 0
    for s in itertools.product(range(q), repeat=n):
        if s in codeword_set:
            continue
        for j in range(n):
            cols = [c for c in range(n) if c != j]
            sub = [[G[r][c] for c in cols] for r in range(k)]
            msg = _solve_mod_q([list(col) for col in zip(*sub)],
                               [s[c] for c in cols], q)
            w = encode_msg(msg)
            assert w[j] != s[j], "correction hit a codeword"
            element = code_elem[w] | {(j + 1, s[j])}
            assert element in colored and element not in mapping
            mapping[element] = class_id
        class_id += 1
    assert set(mapping) == set(colored)

    coloring = Coloring(colored, mapping)
    sigma = decodability_sigma(universe, colored)
    return build_scheme(universe, coloring, sigma, field=field,
                        family={"kind": "linear-block", "q": q, "k": k, "n": n})


def cutset_bound(K, N, M):
    """Converse bound: max over s of s - s*M/floor(N/s)."""
    if K < 1 or N < 1:
        raise RangeError("K and N must be positive")
    M = Fraction(M)
    if M < 0:
        raise RangeError("M must be nonnegative")
    best = Fraction(0)
    for s in range(1, min(N, K) + 1):
        term = s - Fraction(s, N // s) * M
        if term > best:
            best = term
    return best


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def scheme_to_doc(scheme):
    doc = universe_to_doc(scheme.universe, scheme.coloring)
    doc["sigma"] = scheme.sigma.to_doc()
    doc["field"] = scheme.field
    doc["pair_colors"] = [
        [encode_element(a), encode_element(b), cid]
        for (a, b), cid in sorted(scheme.pair_colors.items(),
                                  key=lambda kv: (sort_key(kv[0][0]),
                                                  sort_key(kv[0][1])))]
    if scheme.pair_labels:
        doc["pair_labels"] = {str(c): str(lab)
                              for c, lab in scheme.pair_labels.items()}
    doc["P"] = scheme.P.to_doc()
    p = scheme.params
    doc["params"] = {
        "K": p.K, "F": p.F, "Z": p.Z, "num_colors": p.num_colors, "m": p.m,
        "cache_fraction": str(p.cache_fraction), "rate": str(p.rate),
        "cache_fraction_float": float(p.cache_fraction), "rate_float": float(p.rate),
    }
    if scheme.family:
        doc["family"] = scheme.family
    return doc


def scheme_from_doc(doc, field=None):
    """Rebuild a scheme from its JSON document.

    The scheme is reconstructed through build_scheme so every validation
    reruns; the stored matrix must agree with the rebuilt one unless the
    field is overridden.
    """
    universe, coloring = universe_from_doc(doc)
    if coloring is None:
        raise KindMismatch("scheme document carries no coloring")
    sigma = sigma_from_doc(doc["sigma"], universe, coloring.domain)
    a_kind, b_kind = doc["a_kind"], doc["b_kind"]
    pair_coloring = {}
    for a_enc, b_enc, cid in doc["pair_colors"]:
        pair_coloring[(decode_element(a_enc, a_kind),
                       decode_element(b_enc, b_kind))] = int(cid)
    pair_labels = None
    if doc.get("pair_labels"):
        pair_labels = {int(c): lab for c, lab in doc["pair_labels"].items()}
    use_field = field or doc["field"]
    scheme = build_scheme(universe, coloring, sigma, field=use_field,
                          pair_coloring=pair_coloring, pair_labels=pair_labels,
                          family=doc.get("family"))
    if field is None or field == doc["field"]:
        if scheme.P.to_doc() != doc["P"]:
            raise KindMismatch("stored matrix disagrees with the rebuilt scheme")
    return scheme
