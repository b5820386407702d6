"""Canonical codes and exhaustive censuses of triangle gluings.

Two gluings get the same code exactly when some relabelling of triangles
and rotation of their corners carries one to the other.  By default the
code also identifies a surface with its mirror image, component by
component (a homeomorphism of a disconnected surface may reverse the
orientation of one component and not another).  ``oriented=True`` keeps
only orientation-preserving identifications.
"""

from __future__ import annotations

import csv
import io
import os
import struct
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from . import kernels
from .surface import CombSurface, from_pairing, mirror_pairing

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


def _pack(words) -> bytes:
    return struct.pack(f">{len(words)}I", *words)


def component_codes(s: CombSurface, oriented: bool = False) -> list[bytes]:
    pairing = s.pairing
    mirrored = None if oriented else mirror_pairing(pairing)
    groups: dict[int, list[int]] = {}
    for t, c in enumerate(s.triangle_component):
        groups.setdefault(c, []).append(t)
    codes = []
    for tris in groups.values():
        w = kernels.min_word(pairing, tris)
        if mirrored is not None:
            wm = kernels.min_word(mirrored, tris)
            if list(wm) < list(w):
                w = wm
        codes.append(_pack([len(tris)] + list(w)))
    codes.sort()
    return codes


def canonical_code(s: CombSurface, oriented: bool = False) -> bytes:
    """Relabelling-invariant byte string identifying ``s`` up to isomorphism."""
    parts = component_codes(s, oriented)
    return _pack([s.n_triangles, len(parts)]) + b"".join(parts)


def iter_pairings(m: int) -> Iterator[list[int]]:
    """All fixed-point-free involutions on ``range(m)`` as partner arrays."""
    if m % 2:
        raise ValueError("odd number of sides")
    p = [-1] * m

    def rec():
        try:
            a = p.index(-1)
        except ValueError:
            yield list(p)
            return
        for b in range(a + 1, m):
            if p[b] == -1:
                p[a], p[b] = b, a
                yield from rec()
                p[a] = p[b] = -1

    yield from rec()


def double_factorial_odd(m: int) -> int:
    """``(m - 1)!!`` for even ``m``: the number of perfect matchings of ``m`` items."""
    out = 1
    for k in range(m - 1, 0, -2):
        out *= k
    return out


def resolve_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("PANTSLAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class CensusEntry:
    code: bytes
    multiplicity: int
    genus: tuple[int, ...]
    components: int

    @property
    def code_hex(self) -> str:
        return self.code.hex()

    @property
    def connected(self) -> bool:
        return self.components == 1


def census(n: int, budget: int | None = None, oriented: bool = False) -> list[CensusEntry]:
    """Group all ``(3n - 1)!!`` gluings of ``n`` triangles by canonical code."""
    if n <= 0 or n % 2:
        raise ValueError(f"n must be even and positive, got {n}")
    total = double_factorial_odd(3 * n)
    limit = resolve_budget(budget)
    if total > limit:
        raise BudgetExceeded(f"census of n={n} needs {total} gluings, budget is {limit}")
    counts: Counter = Counter()
    info = {}
    for p in iter_pairings(3 * n):
        s = from_pairing(p)
        code = canonical_code(s, oriented)
        counts[code] += 1
        if code not in info:
            info[code] = (tuple(sorted(s.genus)), s.n_components)
    return [CensusEntry(code, counts[code], *info[code]) for code in sorted(counts)]


def census_by_genus(n: int, budget: int | None = None, oriented: bool = False) -> dict:
    """Class counts of connected surfaces keyed by genus, plus the disconnected count."""
    by_genus: Counter = Counter()
    disconnected = 0
    for entry in census(n, budget, oriented):
        if entry.connected:
            by_genus[entry.genus[0]] += 1
        else:
            disconnected += 1
    return {"connected": dict(sorted(by_genus.items())), "disconnected": disconnected}


def census_csv(entries: list[CensusEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["code_hex", "multiplicity", "genus", "components"])
    for e in sorted(entries, key=lambda e: e.code_hex):
        w.writerow([e.code_hex, e.multiplicity, "+".join(map(str, e.genus)), e.components])
    return buf.getvalue()
