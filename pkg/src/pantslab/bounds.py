"""Counting formulas and volume bounds, exact where possible.

Counts are Python integers.  Anything that grows beyond
``EXACT_FACTORIAL_LIMIT`` is evaluated in the log domain through
``math.lgamma``; the two regimes agree to 1e-9 relative on their overlap.

The unnamed constants hidden in the asymptotic notation (``c``, ``C``,
``c0``) are always parameters and are echoed back in every report.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import numpy as np
from scipy.special import logsumexp

REL_TOL = 1e-9
EXACT_FACTORIAL_LIMIT = 3000


# --- log helpers -----------------------------------------------------------


def log_factorial(n: int) -> float:
    """``ln n!``, from the exact integer when ``n`` is small."""
    if n < 0:
        raise ValueError("factorial of a negative number")
    if n <= EXACT_FACTORIAL_LIMIT:
        return math.log(math.factorial(n))
    return math.lgamma(n + 1)


def log_binomial(n: int, k: int) -> float:
    if not 0 <= k <= n:
        return -math.inf
    if n <= EXACT_FACTORIAL_LIMIT:
        return math.log(math.comb(n, k))
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k)


def close(a: float, b: float, rel: float = REL_TOL) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=rel)


# --- reports ----------------------------------------------------------------


@dataclass(frozen=True)
class BoundParams:
    g: int = 2
    N: int = 0
    L: float = 1.0
    eps: float = 0.1
    c: float = 1.0
    C: float = 1.0
    c0: float = 1.0


@dataclass(frozen=True)
class BoundReport:
    """Named log-domain factors, their sum and a comparison baseline."""

    name: str
    factors: dict
    total_log: float
    baseline_log: float
    params: dict
    extra: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.total_log - self.baseline_log

    def consistent(self) -> bool:
        return close(self.total_log, math.fsum(self.factors.values()))

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "factors": dict(self.factors),
            "total_log": self.total_log,
            "baseline_log": self.baseline_log,
            "margin": self.margin,
            "params": dict(self.params),
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _report(name, factors, baseline, params, **extra) -> BoundReport:
    return BoundReport(name, factors, math.fsum(factors.values()), baseline, params, extra)


# --- exact counts -----------------------------------------------------------


def perfect_matchings(m: int) -> int:
    """``(m - 1)!! = m! / ((m/2)! 2^(m/2))`` perfect matchings of ``m`` points."""
    if m < 0 or m % 2:
        raise ValueError(f"m must be even and nonnegative, got {m}")
    out = 1
    for k in range(m - 1, 0, -2):
        out *= k
    return out


def log_perfect_matchings(m: int) -> float:
    if m < 0 or m % 2:
        raise ValueError(f"m must be even and nonnegative, got {m}")
    h = m // 2
    return log_factorial(m) - log_factorial(h) - h * math.log(2)


@dataclass(frozen=True)
class TrivalentCounts:
    n: int
    labeled: int
    class_bounds: tuple  # (low, high) as natural logs
    exact_small: int | None
    exact_connected: int | None

    def within_bounds(self) -> bool:
        if self.exact_small is None:
            return True
        lo, hi = self.class_bounds
        v = math.log(self.exact_small)
        return lo - REL_TOL <= v <= hi + REL_TOL


def trivalent_class_envelope(n: int) -> tuple[float, float]:
    """Log envelope for the number of trivalent graphs on ``2n`` vertices.

    A labelled configuration is a matching of ``6n`` half-edges; the
    group relabelling vertices and permuting half-edges at each vertex has
    order ``(2n)! 6^(2n)``.  Orbits are at most that large, which gives the
    lower end.  The upper end is ``labeled / (2n)!`` widened by the
    stabiliser factor ``2n 6^(2n)``.
    """
    lab = log_perfect_matchings(6 * n)
    group = log_factorial(2 * n) + 2 * n * math.log(6)
    stab = math.log(2 * n) + 2 * n * math.log(6)
    return lab - group, lab - log_factorial(2 * n) + stab


def trivalent_graph_counts(n: int, enumerate_small: bool = True) -> TrivalentCounts:
    """Labelled count, class envelope and (for ``2n <= 8``) exact class counts."""
    if n < 1:
        raise ValueError("n must be at least 1")
    labeled = math.factorial(6 * n) // (math.factorial(3 * n) * 2 ** (3 * n))
    exact = conn = None
    if enumerate_small and 2 * n <= 8:
        from .oracles import trivalent_classes

        r = trivalent_classes(2 * n)
        exact, conn = r["all"], r["connected"]
    return TrivalentCounts(n, labeled, trivalent_class_envelope(n), exact, conn)


def _theta_args(n: int, j: int):
    if n < 1 or not 0 <= j <= n - 1:
        raise ValueError(f"need 0 <= j <= n - 1, got n={n}, j={j}")
    if (n - 1 - j) % 2:
        raise ValueError(f"j must have the parity of n - 1, got n={n}, j={j}")
    return (n - j - 1) // 2


def brown_theta(n: int, j: int) -> int:
    """Rooted simplicial disk triangulations with ``n`` triangles,
    ``j + 3`` boundary vertices and ``k = (n - j - 1)/2`` interior vertices.

    ``2 (2j+3)! (2n-1)! / ((j+2)! j! k! ((3n+j+3)/2)!)``
    """
    k = _theta_args(n, j)
    f = math.factorial
    num = 2 * f(2 * j + 3) * f(2 * n - 1)
    den = f(j + 2) * f(j) * f(k) * f((3 * n + j + 3) // 2)
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"theta({n},{j}) is not an integer")
    return q


def brown_theta_as_printed(n: int, j: int) -> Fraction:
    """The same expression with ``((3n+j-3)/2)!`` in the denominator.

    Kept only to document the disagreement with the brute-force counts;
    it overcounts by ``((3n+j+3)/2)! / ((3n+j-3)/2)!``.
    """
    k = _theta_args(n, j)
    f = math.factorial
    num = 2 * f(2 * j + 3) * f(2 * n - 1)
    den = f(j + 2) * f(j) * f(k) * f((3 * n + j - 3) // 2)
    return Fraction(num, den)


def disk_triangulation_bound(n: int) -> int:
    """Sum of ``theta(6n, j)`` over odd ``j < 6n``.

    Doubly subdividing a disk with ``n`` triangles gives a simplicial disk
    with ``6n`` triangles, so this bounds the rooted disks with ``n``
    triangles from above.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    m = 6 * n
    return sum(brown_theta(m, j) for j in range(1, m, 2))


# --- volume bounds ----------------------------------------------------------


def fn_region_volume(g: int, L: float) -> BoundReport:
    """Volume of ``{sum of lengths <= L}`` times the twist box, ``d = 3g - 3``.

    Factors are the simplex ``L^d / d!`` and the AM-GM bound
    ``(L/d)^d`` on the product of twist ranges.
    """
    if g < 2:
        raise ValueError("genus must be at least 2")
    if L < 1:
        raise ValueError("L must be at least 1")
    d = 3 * g - 3
    factors = {
        "simplex": d * math.log(L) - log_factorial(d),
        "twist_amgm": d * math.log(L / d),
    }
    extra = {}
    if isinstance(L, int) or float(L).is_integer():
        Li = int(L)
        if d <= 200:
            simplex = Fraction(Li ** d, math.factorial(d))
            twist = Fraction(Li, d) ** d
            extra = {"exact": {"simplex": str(simplex), "twist_amgm": str(twist),
                               "total": str(simplex * twist)}}
    return _report("fn-region-volume", factors, 0.0, {"g": g, "L": L}, **extra)


def _check_eps(eps: float):
    if not 0 <= eps < 1 / 6:
        raise ValueError(f"eps must lie in [0, 1/6) for a crossover, got {eps}")


def hyperbolic_margin(g, eps: float, c: float = 1.0, C: float = 1.0):
    """Closed form ``(C + c) g - 6 eps g ln g``; accepts scalars or arrays."""
    g = np.asarray(g, dtype=float)
    return (C + c) * g - 6 * eps * g * np.log(g)


def hyperbolic_crossover(params: BoundParams, grid=None) -> BoundReport:
    """Volume of the short-pants region against the total moduli volume.

    At ``L = g^(7/6 - eps)`` the region is at most
    ``e^(Cg) g^g (L/g)^(6g)`` while the whole space has volume at least
    ``e^(-cg) g^(2g)``.  ``g0`` is the smallest grid point from which the
    margin stays negative.
    """
    _check_eps(params.eps)
    g = params.g
    if g < 2:
        raise ValueError("genus must be at least 2")
    lg = math.log(g)
    log_L = (7 / 6 - params.eps) * lg
    factors = {
        "constant": params.C * g,
        "topological_types": g * lg,
        "region_volume": 6 * g * (log_L - lg),
    }
    baseline = 2 * g * lg - params.c * g
    if grid is None:
        grid = range(2, 10_001)
    g0 = crossover_index(grid, lambda gs: hyperbolic_margin(gs, params.eps, params.c, params.C))
    p = {"g": g, "L": math.exp(log_L), "eps": params.eps, "c": params.c, "C": params.C}
    return _report("hyperbolic-crossover", factors, baseline, p, g0=g0)


def crossover_index(grid, margin_fn):
    """Smallest grid point after which ``margin_fn`` is negative throughout."""
    gs = np.asarray(sorted(grid), dtype=float)
    m = np.asarray(margin_fn(gs))
    nonneg = np.nonzero(m >= 0)[0]
    if len(nonneg) == 0:
        return int(gs[0])
    last = nonneg[-1]
    return None if last == len(gs) - 1 else int(gs[last + 1])


def twist_count(lengths) -> int:
    """Integer twist choices for curves of the given lengths."""
    out = 1
    for x in lengths:
        if x < 1:
            raise ValueError("curve lengths are positive")
        out *= int(x)
    return out


def twist_amgm_bound(lengths) -> Fraction:
    d = len(lengths)
    return Fraction(sum(lengths), d) ** d


def tight_pants_count_bound(params: BoundParams) -> BoundReport:
    """Bound on tight pants decompositions of total length ``L`` and area ``N``.

    The baseline is the closed form ``C g^g (L/g)^(6g) e^(CN)``.
    """
    g, N, L = params.g, params.N, params.L
    if g < 2:
        raise ValueError("genus must be at least 2")
    d = 3 * g - 3
    if L < d:
        raise ValueError(f"L must be at least 3g - 3 = {d}")
    if N < 0:
        raise ValueError("N must be nonnegative")
    factors = {
        "topological_types": g * math.log(g),
        "length_tuples": d * math.log(L) - log_factorial(d),
        "area_compositions": log_binomial(N + 2 * g - 3, 2 * g - 3),
        "pants_structures": (2 * g - 2) * math.log(params.c0) + params.c0 * N,
        "twists": d * math.log(L / d),
    }
    baseline = math.log(params.C) + g * math.log(g) + 6 * g * math.log(L / g) + params.C * N
    p = {"g": g, "N": N, "L": L, "C": params.C, "c0": params.c0}
    return _report("pants-count", factors, baseline, p,
                   compositions_exact=math.comb(N + 2 * g - 3, 2 * g - 3))


def combinatorial_terms(N: int, eps: float, c: float = 1.0) -> np.ndarray:
    """Log summands ``cN + 6i ln(L/i) + i ln i`` for ``i = 2 .. (N+2)/4``."""
    i = np.arange(2, (N + 2) // 4 + 1, dtype=float)
    log_L = (7 / 6 - eps) * math.log(N)
    return c * N + 6 * i * (log_L - np.log(i)) + i * np.log(i)


def combinatorial_crossover(N: int, eps: float, c: float = 1.0) -> BoundReport:
    """Surfaces with a short pants decomposition against all of ``Comb_N``.

    The sum over genera is evaluated by log-sum-exp; the baseline is
    ``(N/2) ln N``.  The literal exponent ``N/2 - 3 eps/2`` is reported
    next to the computed value, as is ``(1/2 - 3 eps/2) N``.
    """
    if N < 6 or N % 2:
        raise ValueError(f"N must be even and at least 6, got {N}")
    if not 0 <= eps < 1 / 6:
        raise ValueError(f"eps must lie in [0, 1/6), got {eps}")
    terms = combinatorial_terms(N, eps, c)
    total = float(logsumexp(terms))
    lN = math.log(N)
    literal = (N / 2 - 1.5 * eps) * lN
    linear = (0.5 - 1.5 * eps) * N * lN
    factors = {"sum_over_genus": total}
    baseline = 0.5 * N * lN
    extra = {
        "max_term_index": int(np.argmax(terms)) + 2,
        "top_index": (N + 2) // 4,
        "claimed_log_literal": literal,
        "claimed_log_linear": linear,
        "relative_gap_literal": (total - literal) / abs(literal),
        "relative_gap_linear": (total - linear) / abs(linear),
        "discrepancy": not close(total, literal, 1e-3),
    }
    return _report("combinatorial-crossover", factors, baseline,
                   {"N": N, "eps": eps, "c": c}, **extra)
