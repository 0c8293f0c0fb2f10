"""Caching schemes from integer sets whose 3-term APs are all rainbow.

Users and packets are both [m]; the combined element of user x and packet y
is the sum x+y, which lives in [2, 2m]. A subset of sums is colored so
every 3-term arithmetic progression inside it gets three distinct colors.
Pairs then inherit the color (x-y, chi(x+y)): two pairs sharing that color
share their difference, so a cross sum x_s + y_t (s != t) is the midpoint
of a 3-AP between their own sums and cannot lie in the colored set. That
is exactly the miss-each-other's-packet condition delivery needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    BudgetInfeasible,
    InfeasibleUnderCap,
    KindMismatch,
    RainbowViolation,
    RangeError,
)
from .gf import GF2
from .schemes import build_scheme
from .universe import (
    INTEGER_SUM,
    Coloring,
    SigmaStructure,
    ap_endpoint_sigma,
    build_universe,
    coloring_from_labels,
    exact_min_colors,
    greedy_color,
    validate_rainbow,
)

GREEDY = "greedy"
EXACT = "exact"
EXPLICIT = "explicit"


def reachable_sums(m):
    """Sums actually produced by [m] + [m]."""
    return range(2, 2 * m + 1)


def deletion_units(m):
    """Uncolor groups that keep per-user cache sizes uniform.

    User x sees the sum window [x+1, x+m]; the singleton {m+1} hits every
    window once, and each pair {s, s+m} splits the windows into a prefix
    covered by s and the complementary suffix covered by s+m.
    """
    units = [frozenset((m + 1,))]
    for s in range(2, m + 1):
        units.append(frozenset((s, s + m)))
    return units


def _unit_of(m, e):
    if e == m + 1:
        return frozenset((m + 1,))
    if e <= m:
        return frozenset((e, e + m))
    return frozenset((e - m, e))


@dataclass(frozen=True)
class RainbowAPSet:
    """A colored subset of [2, 2m] whose 3-term APs never repeat end colors.

    Search strategies produce strictly rainbow sets (all three members of
    every progression distinct); explicitly supplied colorings only have to
    satisfy the endpoint condition, which is what decoding relies on.
    """

    m: int
    members: frozenset
    chi: Coloring

    @property
    def n(self):
        return 2 * self.m

    @property
    def alpha_emp(self):
        """log(uncolored count + 1) / log(2m); reported, never asserted."""
        missing = self.n - len(self.members)
        return math.log(missing + 1) / math.log(self.n) if self.n > 1 else 0.0

    @property
    def beta_emp(self):
        """log(color count) / log(2m); reported, never asserted."""
        c = self.chi.num_colors
        if c <= 0 or self.n <= 1:
            return 0.0
        return math.log(c) / math.log(self.n)

    def to_doc(self):
        doc = {"n": self.n,
               "A": sorted(self.members),
               "chi": {str(e): self.chi.mapping[e] for e in sorted(self.members)}}
        if self.chi.labels:
            doc["labels"] = {str(i): str(v) for i, v in self.chi.labels.items()}
        return doc

    @staticmethod
    def from_doc(doc):
        n = int(doc["n"])
        if n % 2:
            raise RangeError(f"ground size must be even, got {n}")
        raw = {int(e): c for e, c in doc["chi"].items()}
        labels = doc.get("labels") or {}
        if labels:
            raw = {e: labels.get(str(c), c) for e, c in raw.items()}
        return build_rainbow_ap(n // 2, strategy=EXPLICIT, explicit=raw)


def _sum_universe(m):
    return build_universe(list(range(1, m + 1)), list(range(1, m + 1)), INTEGER_SUM)


def _ap_count(domain, e):
    """How many 3-APs inside `domain` contain e."""
    count = 0
    lo, hi = min(domain), max(domain)
    for d in range(1, (hi - lo) // 2 + 1):
        for x in (e - 2 * d, e - d, e):
            if x in domain and x + d in domain and x + 2 * d in domain:
                count += 1
    return count


def build_rainbow_ap(m, strategy=GREEDY, explicit=None, color_budget=None,
                     drop=()):
    """Search (or accept) a rainbow coloring of a subset of [2, 2m].

    GREEDY colors the whole reachable range and, under a color budget,
    repeatedly uncolors the deletion unit of the element sitting in the
    most 3-APs until the budget holds. EXACT (2m <= 24) proves the minimum
    and raises BudgetInfeasible if it exceeds the budget. Both search the
    strict rainbow condition (all three AP members distinct).

    EXPLICIT accepts a mapping {sum: color-label} and validates the weaker
    endpoint condition delivery actually needs: no progression inside the
    set may have equal colors on its two ends. Strictly rainbow colorings
    always qualify.
    """
    if m < 1:
        raise RangeError(f"need m >= 1, got {m}")
    universe = _sum_universe(m)
    sigma = SigmaStructure.three_ap()
    reachable = set(reachable_sums(m))

    if strategy == EXPLICIT:
        if explicit is None:
            raise KindMismatch("explicit strategy needs a coloring")
        raw = dict(explicit.mapping) if isinstance(explicit, Coloring) else dict(explicit)
        raw = {e: c for e, c in raw.items() if e in reachable}
        chi = coloring_from_labels(raw)
        report = validate_rainbow(chi, ap_endpoint_sigma(chi.domain))
        if not report:
            raise RainbowViolation(
                f"3-AP ends {report.instance} share colors {report.colors}")
        return RainbowAPSet(m, chi.domain, chi)

    domain = reachable - set(drop)
    if strategy == EXACT:
        if 2 * m > 24:
            raise RangeError("exact strategy limited to 2m <= 24")
        try:
            chi, _ = exact_min_colors(universe, domain, sigma, cap=color_budget)
        except InfeasibleUnderCap as exc:
            raise BudgetInfeasible(str(exc)) from exc
        return RainbowAPSet(m, chi.domain, chi)

    if strategy != GREEDY:
        raise KindMismatch(f"unknown strategy {strategy!r}")
    while True:
        chi = greedy_color(universe, domain, sigma)
        if color_budget is None or chi.num_colors <= color_budget or not domain:
            return RainbowAPSet(m, chi.domain, chi)
        worst = max(sorted(domain), key=lambda e: _ap_count(domain, e))
        domain = domain - _unit_of(m, worst)


@dataclass(frozen=True)
class PsiColoring:
    """Pair coloring (x-y, chi(x+y)) over [m] x [m]; uncolored off the set."""

    m: int
    cells: dict    # (x, y) -> (difference, chi color id), colored pairs only
    color_ids: dict  # (difference, chi color id) -> dense id
    labels: dict   # dense id -> display label

    @property
    def num_colors(self):
        return len(self.color_ids)

    def cell(self, x, y):
        return self.cells.get((x, y))

    def pair_colors(self):
        return {pair: self.color_ids[v] for pair, v in self.cells.items()}


def build_psi(raps):
    """Annotate every in-set sum with the pair difference."""
    cells = {}
    for x in range(1, raps.m + 1):
        for y in range(1, raps.m + 1):
            s = x + y
            if s in raps.members:
                cells[(x, y)] = (x - y, raps.chi.mapping[s])
    distinct = sorted(set(cells.values()))
    color_ids = {v: i for i, v in enumerate(distinct)}
    labels = {i: f"({diff},{raps.chi.label_of(cid)})"
              for (diff, cid), i in color_ids.items()}
    return PsiColoring(raps.m, cells, color_ids, labels)


def build_rainbow_scheme(raps, field=GF2):
    """Full scheme with K = F = m users/packets from a rainbow AP set.

    Rejects sets with nonuniform per-user cache sizes; the pair-class
    condition is re-checked during the build and can only fire if chi is
    not actually rainbow.
    """
    universe = _sum_universe(raps.m)
    psi = build_psi(raps)
    pair_coloring = psi.pair_colors()
    scheme = build_scheme(universe, raps.chi, ap_endpoint_sigma(raps.members),
                          field=field, pair_coloring=pair_coloring,
                          pair_labels=dict(psi.labels),
                          family={"kind": "rainbow-3ap", "m": raps.m})
    assert scheme.params.num_colors <= 2 * raps.m * max(raps.chi.num_colors, 1)
    return scheme
