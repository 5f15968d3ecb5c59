"""The "flows to" relation: exact max-flow decisions with certificates, and
the Kleitman and Kahn weight schemes built on it.

``f`` flows to ``g`` when there is a nonnegative transport ``v(A, B)``
supported on pairs ``A subset-of B`` with row sums ``f`` and column sums
``g``.  By max-flow/min-cut this holds iff ``sum f == sum g`` and
``f(I) >= g(I)`` for every decreasing family ``I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .cube import CubeFunction, SetFamily, Spectrum, antipodal_lift, popcounts, wht
from .dyadic import to_fraction
from .errors import ClassViolation, ResourceLimit
from .families import enumerate_families, principal
from .maxflow import FlowNetwork
from .simplex import find_feasible

__all__ = [
    "FlowInstance",
    "FlowResult",
    "LambdaScheme",
    "flow_to",
    "verify_flow",
    "direct_criterion",
    "kahn_lambda",
    "check_kahn_flow",
    "kleitman_feasible",
]


def _as_table(n: int, values) -> tuple[Fraction, ...]:
    if isinstance(values, CubeFunction):
        if values.n != n:
            raise ValueError("dimension mismatch")
        return tuple(values.to_fractions())
    vals = tuple(to_fraction(v) for v in values)
    if len(vals) != 1 << n:
        raise ValueError(f"expected {1 << n} values, got {len(vals)}")
    return vals


@dataclass(frozen=True)
class FlowInstance:
    """Supply ``f`` and demand ``g``, each a table of ``2**n`` nonnegative rationals."""

    n: int
    supply: tuple[Fraction, ...]
    demand: tuple[Fraction, ...]

    def __init__(self, n: int, supply, demand):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "supply", _as_table(n, supply))
        object.__setattr__(self, "demand", _as_table(n, demand))
        if any(v < 0 for v in self.supply + self.demand):
            raise ValueError("flow instances need nonnegative supply and demand")


@dataclass
class FlowResult:
    feasible: bool
    flow: dict[tuple[int, int], Fraction] | None = None
    certificate: SetFamily | None = None
    max_flow: Fraction = Fraction(0)
    total: Fraction = Fraction(0)
    reason: str = ""
    direct_agrees: bool | None = None
    weights: tuple[Fraction, ...] | None = field(default=None, repr=False)


def _supersets(a: int, n: int) -> Iterable[int]:
    """All supersets of mask ``a`` in the n-cube."""
    free = ((1 << n) - 1) & ~a
    sub = free
    while True:
        yield a | sub
        if sub == 0:
            return
        sub = (sub - 1) & free


def flow_to(inst: FlowInstance) -> FlowResult:
    """Decide whether supply flows to demand.

    Capacities are scaled to integers by the common denominator, so the
    max-flow value and the verdict are exact.  On infeasibility the
    certificate is ``Omega \\ up(X)`` where X is the set of supply points
    reachable from the source in the final residual graph; it is decreasing
    and has ``f(F) < g(F)``.
    """
    n = inst.n
    f, g = inst.supply, inst.demand
    total_f, total_g = sum(f), sum(g)
    if total_f != total_g:
        return FlowResult(False, max_flow=Fraction(0), total=total_f,
                          reason=f"mass mismatch: sum f = {total_f}, sum g = {total_g}")
    scale = math.lcm(*(v.denominator for v in f + g))
    fs = [int(v * scale) for v in f]
    gs = [int(v * scale) for v in g]
    N = 1 << n
    src, snk = 2 * N, 2 * N + 1
    net = FlowNetwork(2 * N + 2)
    infinite = sum(fs) + 1
    mid_edges: list[tuple[int, int, int]] = []
    for a in range(N):
        if fs[a]:
            net.add_edge(src, a, fs[a])
    for b in range(N):
        if gs[b]:
            net.add_edge(N + b, snk, gs[b])
    for a in range(N):
        if not fs[a]:
            continue
        for b in _supersets(a, n):
            if gs[b]:
                mid_edges.append((net.add_edge(a, N + b, infinite), a, b))
    value = net.max_flow(src, snk)
    total = sum(fs)
    if value == total:
        flow = {}
        for eid, a, b in mid_edges:
            x = net.flow_on(eid)
            if x:
                flow[(a, b)] = Fraction(x, scale)
        return FlowResult(True, flow=flow, max_flow=Fraction(value, scale), total=total_f)
    reach = net.reachable(src)
    X = [a for a in range(N) if a in reach]
    up = SetFamily.up_closure(n, X)
    cert = up.complement()
    res = FlowResult(False, certificate=cert, max_flow=Fraction(value, scale), total=total_f,
                     reason="max flow below total supply")
    if not cert.is_decreasing or _mass(f, cert) >= _mass(g, cert):
        raise AssertionError("min-cut certificate failed its own check")
    return res


def _mass(table: Sequence[Fraction], fam: SetFamily) -> Fraction:
    return sum((table[m] for m in fam.masks()), Fraction(0))


def verify_flow(inst: FlowInstance, result: FlowResult) -> bool:
    """Check a feasible result's transport (marginals and support) exactly,
    or an infeasible result's certificate."""
    n = inst.n
    if not result.feasible:
        if result.certificate is None:
            return sum(inst.supply) != sum(inst.demand)
        c = result.certificate
        return c.is_decreasing and _mass(inst.supply, c) < _mass(inst.demand, c)
    rows = [Fraction(0)] * (1 << n)
    cols = [Fraction(0)] * (1 << n)
    for (a, b), x in result.flow.items():
        if a & ~b or x < 0:
            return False
        rows[a] += x
        cols[b] += x
    return tuple(rows) == inst.supply and tuple(cols) == inst.demand


def direct_criterion(inst: FlowInstance, decreasing: Iterable[SetFamily] | None = None
                     ) -> tuple[bool, SetFamily | None]:
    """``sum f == sum g`` and ``f(I) >= g(I)`` for all decreasing I (enumerated).

    Returns ``(holds, first violating family)``.
    """
    f, g = inst.supply, inst.demand
    if sum(f) != sum(g):
        return False, None
    if decreasing is None:
        decreasing = enumerate_families(inst.n, "decreasing")
    for I in decreasing:
        if _mass(f, I) < _mass(g, I):
            return False, I
    return True, None


# --------------------------------------------------------------------------
# Kahn weights

@dataclass(frozen=True)
class LambdaScheme:
    """How each squared coefficient ``f^(S)^2`` is split among the coordinates of S.

    ``max-coordinate``: all of it to the largest element of S under
    ``permutation`` (a list of coordinates, earliest = smallest; identity by
    default).  ``average``: ``f^(S)^2 / |S|`` to each element.  ``custom``:
    ``split(S_mask, f^(S)^2)`` returns ``{coordinate: weight}``.
    """

    kind: str = "max-coordinate"
    permutation: tuple[int, ...] | None = None
    split: Callable[[int, Fraction], dict] | None = None

    def __post_init__(self):
        if self.kind not in ("max-coordinate", "average", "custom"):
            raise ValueError(f"unknown scheme {self.kind!r}")
        if self.kind == "custom" and self.split is None:
            raise ValueError("custom scheme needs a split function")


def _ranks(n: int, permutation) -> list[int]:
    perm = list(range(1, n + 1)) if permutation is None else list(permutation)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{permutation} is not a permutation of 1..{n}")
    rank = [0] * (n + 1)
    for pos, i in enumerate(perm):
        rank[i] = pos
    return rank


def kahn_lambda(f: CubeFunction | Spectrum, scheme: LambdaScheme = LambdaScheme()) -> tuple[Fraction, ...]:
    """Weights ``lambda_1..lambda_n`` from the Fourier weight of a mean-zero f."""
    spec = f if isinstance(f, Spectrum) else wht(f)
    n = spec.n
    sq, e2 = spec.squared_scaled()
    if sq[0] != 0:
        raise ValueError("kahn_lambda requires f^({}) = 0")
    den = 1 << e2
    lam = [Fraction(0)] * n
    pcs = popcounts(n).tolist()
    if scheme.kind == "max-coordinate":
        rank = _ranks(n, scheme.permutation)
        for s in range(1, 1 << n):
            if sq[s]:
                top = max((i for i in range(1, n + 1) if s >> (i - 1) & 1), key=lambda i: rank[i])
                lam[top - 1] += Fraction(sq[s], den)
    elif scheme.kind == "average":
        for s in range(1, 1 << n):
            if sq[s]:
                w = Fraction(sq[s], den * pcs[s])
                for i in range(n):
                    if s >> i & 1:
                        lam[i] += w
    else:
        for s in range(1, 1 << n):
            if sq[s]:
                c = Fraction(sq[s], den)
                parts = scheme.split(s, c)
                if sum(parts.values()) != c or any(w < 0 or not s >> (i - 1) & 1 for i, w in parts.items()):
                    raise ValueError(f"custom split for mask {s} is not a nonnegative split over S")
                for i, w in parts.items():
                    lam[i - 1] += Fraction(w)
    return tuple(lam)


def _principal_bits(n: int) -> list[int]:
    return [principal(n, i).bits for i in range(1, n + 1)]


def _require_maximal_intersecting(F: SetFamily) -> None:
    if not F.is_increasing:
        raise ClassViolation("family is not increasing")
    if not F.is_antipodal:
        raise ClassViolation("family is not antipodal")


def _mixture_supply(n: int, lam: Sequence[Fraction]) -> list[Fraction]:
    return [sum((lam[i] for i in range(n) if t >> i & 1), Fraction(0)) for t in range(1 << n)]


def _direct_check_mixture(F: SetFamily, lam: Sequence[Fraction], decreasing_bits) -> tuple[bool, int | None]:
    """``sum_i lam_i |I & F_i| >= |I & F|`` for every listed decreasing I (integer arithmetic)."""
    n = F.n
    scale = math.lcm(*(q.denominator for q in lam)) if lam else 1
    w = [int(q * scale) for q in lam]
    prin = _principal_bits(n)
    fb = F.bits
    for ib in decreasing_bits:
        lhs = sum(wi * (ib & p).bit_count() for wi, p in zip(w, prin) if wi)
        if lhs < scale * (ib & fb).bit_count():
            return False, ib
    return True, None


def check_kahn_flow(F: SetFamily, scheme: LambdaScheme = LambdaScheme(),
                    cross_check_max_n: int = 5) -> FlowResult:
    """Does ``sum_i lambda_i chi_i`` flow to ``chi_F`` for the scheme's weights?

    F must be maximal intersecting.  For ``n <= cross_check_max_n`` the
    max-flow verdict is compared with the decreasing-family criterion and
    the comparison stored in ``direct_agrees``.
    """
    _require_maximal_intersecting(F)
    n = F.n
    lam = kahn_lambda(antipodal_lift(F), scheme)
    inst = FlowInstance(n, _mixture_supply(n, lam), F.indicator_array.tolist())
    res = flow_to(inst)
    res.weights = lam
    if n <= cross_check_max_n:
        ok, _ = _direct_check_mixture(F, lam, enumerate_families(n, "decreasing").bits())
        res.direct_agrees = ok == res.feasible
    return res


_KLEITMAN_MAX_N = 5


def kleitman_feasible(F: SetFamily) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Is there any convex combination of the dictators that flows to ``chi_F``?

    Decided exactly over the finite constraint system indexed by decreasing
    families.  The uniform weights and the max-coordinate Kahn weights are
    tried first; otherwise an exact simplex runs with constraint generation.
    """
    _require_maximal_intersecting(F)
    n = F.n
    if n > _KLEITMAN_MAX_N:
        raise ResourceLimit(f"kleitman_feasible is limited to n <= {_KLEITMAN_MAX_N}")
    dec = list(enumerate_families(n, "decreasing").bits())
    candidates = [tuple(Fraction(1, n) for _ in range(n)), kahn_lambda(antipodal_lift(F))]
    for lam in candidates:
        if _direct_check_mixture(F, lam, dec)[0]:
            return True, lam
    prin = _principal_bits(n)
    fb = F.bits

    def row(ib: int):
        return [(ib & p).bit_count() for p in prin], ">=", (ib & fb).bit_count()

    active = []
    lam = candidates[0]
    while True:
        ok, bad = _direct_check_mixture(F, lam, dec)
        if ok:
            return True, tuple(lam)
        active.append(row(bad))
        sol = find_feasible(active + [([1] * n, "==", 1)], n)
        if sol is None:
            return False, None
        lam = sol
