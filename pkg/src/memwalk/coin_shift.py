"""Coin-shift tables: the coin label emitted after each conditional move.

A coin shift gc maps (vertex, incoming coin) to an outgoing coin.  Together
with a partition it assembles into the shift step |v, c> -> |f_c(v), gc(v, c)>,
which is unitary exactly when, for every target vertex, the coins emitted by
its m incoming (vertex, coin) pairs form a permutation of all m coins.

Two constructions cover the walks this package studies on 2-regular hosts:

* recycled_coin_shift: the emitted coin is the oldest step recorded in the
  vertex's path tuple, independent of the incoming coin.  The two vertices
  sharing any out-neighborhood have opposite oldest steps, so this satisfies
  the constraint for every partition.
* carried_coin_shift: the coin label rides through the move unchanged.
  Valid precisely on dicycle factorizations, where each target's two in-arcs
  always arrive via different classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import NamedTuple

import numpy as np

from .errors import ConstraintViolationError, ValidationError
from .graphs import RegularDigraph, step_direction
from .partitions import Partition, coin_label

__all__ = [
    "CoinShift",
    "CoinShiftReport",
    "recycled_coin_shift",
    "carried_coin_shift",
    "validate_coin_shift",
    "enumerate_coin_shifts",
    "random_coin_shift",
    "paired_vertex",
]

#: Hosts whose full gc table exceeds this many cells refuse exhaustive
#: enumeration (the count grows as (m!)^V).
ENUMERATION_CELL_LIMIT = 24


@dataclass(frozen=True, eq=False)
class CoinShift:
    """table[v, c_in] = c_out, coin indices 0..m-1."""

    host: RegularDigraph
    table: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        if self.table.shape != (self.host.n_vertices, self.host.degree):
            raise ValidationError(
                f"coin-shift table shape {self.table.shape} does not match host"
            )
        self.table.flags.writeable = False

    def to_json_dict(self) -> dict:
        m = self.host.degree
        return {
            "name": self.name,
            "entries": [
                [int(v), coin_label(c, m), coin_label(int(self.table[v, c]), m)]
                for v in range(self.host.n_vertices)
                for c in range(m)
            ],
        }


class CoinShiftReport(NamedTuple):
    ok: bool
    violations: list[int]


def validate_coin_shift(p: Partition, gc: CoinShift) -> CoinShiftReport:
    """Check the per-target permutation constraint.

    Counts, for each (target vertex, emitted coin), how many (vertex, coin)
    pairs land there; the shift is a bijection iff every count is exactly 1.
    Returns the violating target vertices (deterministic ascending order).
    """
    host = p.host
    v, m = host.n_vertices, host.degree
    counts = np.zeros((v, m), dtype=np.int64)
    np.add.at(counts, (p.succ.ravel(), gc.table.ravel()), 1)
    bad = np.flatnonzero((counts != 1).any(axis=1))
    return CoinShiftReport(bad.size == 0, [int(b) for b in bad])


def recycled_coin_shift(p: Partition) -> CoinShift:
    """Emit the oldest recorded step of the path tuple, whatever coin came in.

    Needs a 2-regular host of depth >= 1 over a cycle, where each tuple's
    first two entries are adjacent and their step direction is +-1.
    """
    host = p.host
    if host.degree != 2:
        raise ValidationError(
            f"recycled coin shift supports m=2 hosts only, got m={host.degree}"
        )
    if host.depth < 1:
        raise ValidationError("recycled coin shift needs a depth >= 1 line digraph")
    table = np.empty((host.n_vertices, 2), dtype=np.int64)
    for v, lab in enumerate(host.labels):
        oldest = step_direction(lab[0], lab[1], host.base_n)
        table[v, :] = 0 if oldest == 1 else 1
    gc = CoinShift(host, table, name="recycled")
    report = validate_coin_shift(p, gc)
    if not report.ok:
        raise ConstraintViolationError(
            "recycled coin shift failed validation (bug)", report.violations
        )
    return gc


def carried_coin_shift(p: Partition) -> CoinShift:
    """Pass the coin label through the move unchanged.

    Only dicycle factorizations route each target's in-arcs via distinct
    classes, so anything else is rejected with the violating targets.
    """
    host = p.host
    table = np.tile(np.arange(host.degree, dtype=np.int64), (host.n_vertices, 1))
    gc = CoinShift(host, table, name="carried")
    if not p.is_dicycle:
        report = validate_coin_shift(p, gc)
        raise ConstraintViolationError(
            "carried coin shift needs a dicycle factorization; "
            f"{len(report.violations)} target(s) violate the permutation constraint",
            report.violations,
        )
    return gc


def _target_groups(p: Partition) -> list[list[tuple[int, int]]]:
    """Cells (v, c_in) grouped by target vertex, deterministically ordered."""
    host = p.host
    groups: list[list[tuple[int, int]]] = [[] for _ in range(host.n_vertices)]
    for v in range(host.n_vertices):
        for c in range(host.degree):
            groups[int(p.succ[v, c])].append((v, c))
    return groups


def enumerate_coin_shifts(p: Partition) -> list[CoinShift]:
    """All valid coin-shift tables for a partition, in deterministic order.

    The constraint splits cell-wise by target vertex: each target's m cells
    must receive a permutation of the coins, independently of every other
    target.  The count is therefore (m!)^V; hosts beyond
    ENUMERATION_CELL_LIMIT cells are refused.
    """
    host = p.host
    v, m = host.n_vertices, host.degree
    if v * m > ENUMERATION_CELL_LIMIT:
        raise ValidationError(
            f"host has {v * m} gc cells; enumeration is limited to "
            f"{ENUMERATION_CELL_LIMIT}"
        )
    groups = _target_groups(p)
    perms = list(permutations(range(m)))
    shifts = []
    for assignment in product(perms, repeat=v):
        table = np.empty((v, m), dtype=np.int64)
        for group, perm in zip(groups, assignment):
            for (vertex, c_in), c_out in zip(group, perm):
                table[vertex, c_in] = c_out
        shifts.append(CoinShift(host, table, name="enumerated"))
    return shifts


def random_coin_shift(p: Partition, seed: int) -> CoinShift:
    """A uniformly random valid coin shift (independent per-target permutations)."""
    rng = np.random.default_rng(seed)
    host = p.host
    table = np.empty((host.n_vertices, host.degree), dtype=np.int64)
    for group in _target_groups(p):
        perm = rng.permutation(host.degree)
        for (vertex, c_in), c_out in zip(group, perm):
            table[vertex, c_in] = c_out
    return CoinShift(host, table, name="random")


def paired_vertex(host: RegularDigraph, v: int) -> int:
    """The unique other vertex sharing v's out-neighborhood (m = 2 hosts).

    Under the block labeling these are the half-offset pairs (i, i + V/2).
    """
    if host.degree != 2 or host.depth < 1:
        raise ValidationError("pairing needs an m=2 line digraph")
    half = host.n_vertices // 2
    return (v + half) % host.n_vertices
