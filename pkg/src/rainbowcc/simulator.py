"""End-to-end caching harness: synthetic library, demand sweeps, bounds.

Every decode is compared bytewise to the synthesized library, so a sweep
passing means every swept user recovered every packet of its demanded file
exactly. Delivery size is demand-independent, so the realized rate is m/F
for any demand; the sweep asserts that on every broadcast.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import gf, schemes
from .errors import RangeError, SweepTooLarge

EXHAUSTIVE = "exhaustive"
RANDOM = "random"
WORST_CASE_DISTINCT = "worst-case"

_EXHAUSTIVE_GUARD = 10 ** 6


@dataclass(frozen=True)
class Library:
    """N files x F packets of packet_size bytes, deterministic from a seed."""

    n_files: int
    n_packets: int
    packet_size: int
    seed: int

    def packet(self, file_idx, packet_idx):
        return gf.deterministic_bytes(self.seed, ("lib", file_idx, packet_idx),
                                      self.packet_size)

    def rows(self):
        return [[self.packet(i, f) for f in range(self.n_packets)]
                for i in range(self.n_files)]


def make_library(n_files, n_packets, packet_size=gf.DEFAULT_PACKET_SIZE, seed=0):
    if n_files < 1 or n_packets < 1 or packet_size < 1:
        raise RangeError("library dimensions must be positive")
    return Library(n_files, n_packets, packet_size, seed)


@dataclass(frozen=True)
class DemandOutcome:
    demand: tuple
    transmissions: int
    ok: bool


@dataclass
class RunReport:
    scheme_doc: dict
    N: int
    policy: str
    seed: int
    packet_size: int
    outcomes: list
    realized_rate: Fraction
    all_pass: bool
    bounds: Optional[list] = None

    def to_doc(self):
        doc = {
            "params": self.scheme_doc,
            "N": self.N,
            "policy": self.policy,
            "seed": self.seed,
            "packet_size": self.packet_size,
            "realized_rate": str(self.realized_rate),
            "realized_rate_float": float(self.realized_rate),
            "all_pass": self.all_pass,
            "demands": [
                {"demand": list(o.demand), "transmissions": o.transmissions,
                 "ok": o.ok}
                for o in self.outcomes],
        }
        if self.bounds is not None:
            doc["bounds"] = self.bounds
        return doc

    def to_csv_text(self):
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["demand", "transmissions", "rate", "ok"])
        F = self.scheme_doc["F"]
        for o in self.outcomes:
            writer.writerow([" ".join(map(str, o.demand)), o.transmissions,
                             float(Fraction(o.transmissions, F)), int(o.ok)])
        return buf.getvalue()


def _demand_iter(policy, N, K, count, seed):
    if policy == EXHAUSTIVE:
        if N ** K > _EXHAUSTIVE_GUARD:
            raise SweepTooLarge(f"{N}^{K} demand vectors exceed the guard")
        def gen():
            demand = [0] * K
            while True:
                yield tuple(demand)
                i = K - 1
                while i >= 0 and demand[i] == N - 1:
                    demand[i] = 0
                    i -= 1
                if i < 0:
                    return
                demand[i] += 1
        return gen()
    if policy == RANDOM:
        rng = random.Random(seed)
        return (tuple(rng.randrange(N) for _ in range(K)) for _ in range(count))
    if policy == WORST_CASE_DISTINCT:
        return iter([tuple(i % N for i in range(K))])
    raise RangeError(f"unknown demand policy {policy!r}")


def sweep(scheme, N, policy=WORST_CASE_DISTINCT, count=100, seed=0,
          packet_size=gf.DEFAULT_PACKET_SIZE):
    """Run placement/delivery/decode over a demand set and check bytewise."""
    K, F = scheme.params.K, scheme.params.F
    library = make_library(N, F, packet_size, seed)
    rows = library.rows()
    caches = {}
    for user in range(K):
        a = scheme.universe.a_family[user]
        caches[user] = {f: tuple(rows[i][f] for i in range(N))
                        for f in scheme.placement[a]}
    outcomes = []
    all_pass = True
    for demand in _demand_iter(policy, N, K, count, seed):
        broadcast = schemes.deliver(scheme, demand, rows)
        assert len(broadcast) == scheme.m
        ok = True
        for user in range(K):
            got = schemes.decode(scheme, user, demand, caches[user], broadcast)
            if got != rows[demand[user]]:
                ok = False
        all_pass = all_pass and ok
        outcomes.append(DemandOutcome(demand, len(broadcast), ok))
    realized = Fraction(scheme.m, F)
    doc = {"K": K, "F": F, "Z": scheme.params.Z,
           "num_colors": scheme.params.num_colors, "m": scheme.m,
           "cache_fraction": str(scheme.params.cache_fraction),
           "rate": str(scheme.params.rate), "field": scheme.field,
           "family": scheme.family}
    return RunReport(doc, N, policy, seed, packet_size, outcomes, realized,
                     all_pass)


def compare_bounds(report, scheme):
    """Rows comparing the realized rate with the scheme and converse bounds."""
    rows = []
    realized = report.realized_rate

    def add(name, value, note=""):
        rows.append({"name": name, "value": str(value),
                     "value_float": float(value),
                     "slack_vs_realized": str(realized - value), "note": note})

    add("realized_rate", realized)
    add("delivery_rate", scheme.params.rate, "m/F")
    M = scheme.params.cache_fraction * report.N
    add("cutset_bound", schemes.cutset_bound(scheme.params.K, report.N, M),
        "converse; realized must not go below")
    if scheme.family and scheme.family.get("kind") == "man":
        K, t = scheme.family["K"], scheme.family["t"]
        add("man_closed_form", Fraction(K - t, t + 1), "K(1-t/K)/(t+1)")
    report.bounds = rows
    return rows
