"""Uniform random gluings and genus statistics.

A gluing of ``n`` triangles is drawn by shuffling the ``3n`` sides and
pairing consecutive entries, which is uniform over all ``(3n - 1)!!``
matchings.  Each sample gets its own seed derived from the master seed
and the sample index, so results do not depend on evaluation order::

    seed(master, index, attempt) =
        int.from_bytes(blake2b(f"{master}:{index}:{attempt}", digest_size=8), "big")
"""

from __future__ import annotations

import hashlib
import json
import random
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .canonical import iter_pairings, double_factorial_odd, resolve_budget, BudgetExceeded
from .surface import CombSurface, Gluing, from_gluing, from_pairing


class UnsatisfiableCondition(RuntimeError):
    """No sample met the condition within the allowed rejections."""


def derive_seed(master_seed: int, index: int, attempt: int = 0) -> int:
    key = f"{int(master_seed)}:{int(index)}:{int(attempt)}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def sample_matching(n: int, seed: int) -> Gluing:
    """A uniformly random gluing of ``n`` triangles."""
    if n <= 0 or n % 2:
        raise ValueError(f"number of triangles must be even and positive, got {n}")
    sides = list(range(3 * n))
    random.Random(seed).shuffle(sides)
    p = [0] * (3 * n)
    for k in range(0, 3 * n, 2):
        a, b = sides[k], sides[k + 1]
        p[a], p[b] = b, a
    return Gluing(n, tuple(p))


@dataclass(frozen=True)
class Condition:
    kind: str = "any"  # any | connected | genus
    lo: int = 0
    hi: int = 0

    @classmethod
    def parse(cls, text: str) -> "Condition":
        text = text.strip()
        if text in ("any", "connected"):
            return cls(text)
        m = re.fullmatch(r"genus(?:_range)?[:(]\s*(\d+)\s*[-,]\s*(\d+)\s*\)?", text)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise ValueError(f"empty genus range {lo}..{hi}")
            return cls("genus", lo, hi)
        raise ValueError(f"unknown condition {text!r}")

    def __str__(self):
        return self.kind if self.kind != "genus" else f"genus:{self.lo}-{self.hi}"

    def accepts(self, s: CombSurface) -> bool:
        if self.kind == "any":
            return True
        if s.n_components != 1:
            return False
        return self.kind == "connected" or self.lo <= s.genus[0] <= self.hi

    def feasible(self, n: int) -> bool:
        # a connected surface with n triangles has genus at most (n + 2) // 4
        return self.kind != "genus" or self.lo <= (n + 2) // 4


@dataclass(frozen=True)
class SampleSpec:
    n_triangles: int
    sample_count: int
    master_seed: int
    condition: Condition = field(default_factory=Condition)
    max_rejections: int = 10_000

    def __post_init__(self):
        if self.n_triangles <= 0 or self.n_triangles % 2:
            raise ValueError(f"n must be even and positive, got {self.n_triangles}")
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if isinstance(self.condition, str):
            object.__setattr__(self, "condition", Condition.parse(self.condition))


@dataclass(frozen=True)
class Sample:
    index: int
    attempts: int
    surface: CombSurface

    @property
    def genus(self) -> int:
        return sample_genus(self.surface)

    def record(self) -> dict:
        s = self.surface
        out = s.to_dict()
        out["seed_index"] = self.index
        out["genus"] = self.genus
        out["components"] = s.n_components
        return out


def sample_genus(s: CombSurface) -> int:
    """Genus, or for a disconnected surface the genus of its largest component."""
    if s.n_components == 1:
        return s.genus[0]
    sizes = Counter(s.triangle_component)
    big = max(range(s.n_components), key=lambda c: (sizes[c], s.genus[c]))
    return s.genus[big]


def _draw(args) -> Sample:
    n, master, index, cond, max_rej = args
    for attempt in range(max_rej + 1):
        s = from_gluing(sample_matching(n, derive_seed(master, index, attempt)))
        if cond.accepts(s):
            return Sample(index, attempt + 1, s)
    raise UnsatisfiableCondition(
        f"sample {index}: condition {cond} not met after {max_rej} rejections")


def sample_surface(spec: SampleSpec, jobs: int = 1) -> list[Sample]:
    if not spec.condition.feasible(spec.n_triangles):
        raise UnsatisfiableCondition(
            f"condition {spec.condition} is impossible with {spec.n_triangles} triangles")
    tasks = [(spec.n_triangles, spec.master_seed, i, spec.condition, spec.max_rejections)
             for i in range(spec.sample_count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_draw, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [_draw(t) for t in tasks]


@dataclass(frozen=True)
class GenusHistogram:
    n_triangles: int
    counts: dict
    total: int
    rejections: int
    disconnected: int

    def fraction_at_least(self, g: float) -> float:
        return sum(c for k, c in self.counts.items() if k >= g) / self.total


def histogram_of(samples: list[Sample], n: int) -> GenusHistogram:
    counts = Counter(x.genus for x in samples)
    return GenusHistogram(
        n_triangles=n,
        counts=dict(sorted(counts.items())),
        total=len(samples),
        rejections=sum(x.attempts - 1 for x in samples),
        disconnected=sum(1 for x in samples if x.surface.n_components > 1),
    )


def genus_histogram(spec: SampleSpec, jobs: int = 1) -> GenusHistogram:
    return histogram_of(sample_surface(spec, jobs), spec.n_triangles)


def exact_genus_distribution(n: int, budget: int | None = None) -> dict:
    """Exact counts of :func:`sample_genus` over all gluings of ``n`` triangles."""
    total = double_factorial_odd(3 * n)
    if total > resolve_budget(budget):
        raise BudgetExceeded(f"{total} gluings exceed the budget")
    counts = Counter(sample_genus(from_pairing(p)) for p in iter_pairings(3 * n))
    return dict(sorted(counts.items()))


def samples_jsonl(samples: list[Sample]) -> str:
    return "".join(json.dumps(x.record(), separators=(",", ":")) + "\n" for x in samples)


def histogram_csv(h: GenusHistogram) -> str:
    lines = ["genus,count"]
    lines += [f"{g},{c}" for g, c in h.counts.items()]
    return "\n".join(lines) + "\n"
