"""Registry of correlation and influence inequalities, evaluated on concrete families.

Every row is oriented as ``lhs >= rhs``.  Rows come in four kinds:

``exact``     hard assertion in exact rational arithmetic (theorems and the
              conjectures expected to hold at desk scale)
``float``     hard assertion where a logarithm enters; the transcendental side
              gets a slack of ``FLOAT_SLACK``
``margin``    statements known or expected to fail somewhere; the verdict is
              reported but never treated as an error
``ratio``     statements with an unspecified constant; only the empirical
              constant ``lhs / rhs_core`` is reported

Natural logarithms inside ``phi(x) = x / log(e/x)`` and ``psi(x) = x / sqrt(log(e/x))``;
base-2 logarithms where the statement is written with ``log2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .cube import (
    SetFamily,
    directional_difference,
    dual,
    log2_exact,
    m_alpha,
    popcounts,
    s_gamma,
    spectral_correlation,
)
from .errors import ClassViolation, DimensionMismatch, ResourceLimit
from .families import enumerate_families, majority, principal

__all__ = [
    "FLOAT_SLACK",
    "REGISTRY",
    "InequalityReport",
    "EnsembleReport",
    "EquivalenceRecord",
    "evaluate",
    "evaluate_ensemble",
    "equivalence_check",
    "phi",
    "psi",
    "psi_alpha",
    "psi_alpha_scan",
    "kahn_weights",
    "alpha_core",
    "double_sum_core",
]

FLOAT_SLACK = 1e-9
VACUOUS = "vacuous"
NOT_APPLICABLE = "n/a"


def phi(x: float) -> float:
    return 0.0 if x <= 0 else x / math.log(math.e / x)


def psi_alpha(x: float, alpha: float) -> float:
    return 0.0 if x <= 0 else x / math.log(math.e / x) ** alpha


def psi(x: float) -> float:
    return psi_alpha(x, 0.5)


# --------------------------------------------------------------------------
# per-family quantities (exact, as Fractions)

def _mu(F: SetFamily) -> Fraction:
    return Fraction(F.count, 1 << F.n)


def _infl(F: SetFamily) -> list[Fraction]:
    d = 1 << F.n >> 1 if F.n else 1
    return [Fraction(c, d) for c in F.influence_counts]


def _imin(F: SetFamily) -> Fraction:
    c = min(F.influence_counts, default=0)
    return Fraction(c, 1 << (F.n - 1)) if F.n else Fraction(0)


def _total(F: SetFamily) -> Fraction:
    return Fraction(sum(F.influence_counts), 1 << (F.n - 1)) if F.n else Fraction(0)


def _cor(A: SetFamily, B: SetFamily) -> Fraction:
    n = A.n
    return Fraction((A.bits & B.bits).bit_count() * (1 << n) - A.count * B.count, 1 << (2 * n))


def _squares(F: SetFamily) -> tuple[list[int], int]:
    return F.spectrum.squared_scaled()


def kahn_weights(B: SetFamily, scheme: str = "max", permutation: Sequence[int] | None = None,
                 odd_only: bool = False) -> list[Fraction]:
    """``w_i = sum{B^(S)^2 : max S = i}`` (``scheme="max"``) or
    ``sum{B^(S)^2 / |S| : S contains i}`` (``scheme="avg"``).

    ``permutation`` lists coordinates from smallest to largest for the max
    rule.  ``odd_only`` restricts to ``|S|`` odd.
    """
    n = B.n
    sq, e2 = _squares(B)
    den = 1 << e2
    pcs = popcounts(n).tolist()
    w = [Fraction(0)] * n
    if scheme == "max":
        perm = list(range(1, n + 1)) if permutation is None else list(permutation)
        if sorted(perm) != list(range(1, n + 1)):
            raise ValueError(f"{permutation} is not a permutation of 1..{n}")
        rank = {c: p for p, c in enumerate(perm)}
    for s in range(1, 1 << n):
        if not sq[s] or (odd_only and pcs[s] % 2 == 0):
            continue
        if scheme == "max":
            top = max((i for i in range(1, n + 1) if s >> (i - 1) & 1), key=rank.__getitem__)
            w[top - 1] += Fraction(sq[s], den)
        elif scheme == "avg":
            q = Fraction(sq[s], den * pcs[s])
            for i in range(n):
                if s >> i & 1:
                    w[i] += q
        else:
            raise ValueError(f"unknown weight scheme {scheme!r}")
    return w


def _diag(A: SetFamily, B: SetFamily, weight: Callable[[int], int]) -> Fraction:
    sa, ea = _squares(A)
    sb, eb = _squares(B)
    pcs = popcounts(A.n).tolist()
    total = sum(weight(pcs[s]) * sa[s] * sb[s] for s in range(1, 1 << A.n))
    return Fraction(total, 1 << (ea + eb))


def alpha_core(A: SetFamily, B: SetFamily, alpha: float) -> float:
    """``sum_i (sum_{S ni i} A^(S)^2/|S|^alpha)(sum_{T ni i} B^(T)^2/|T|^(1-alpha))``."""
    n = A.n
    sa, ea = _squares(A)
    sb, eb = _squares(B)
    pcs = popcounts(n).tolist()
    wa = [0.0] * n
    wb = [0.0] * n
    for s in range(1, 1 << n):
        ta = float(Fraction(sa[s], 1 << ea)) / pcs[s] ** alpha if sa[s] else 0.0
        tb = float(Fraction(sb[s], 1 << eb)) / pcs[s] ** (1 - alpha) if sb[s] else 0.0
        if ta or tb:
            for i in range(n):
                if s >> i & 1:
                    wa[i] += ta
                    wb[i] += tb
    return sum(x * y for x, y in zip(wa, wb))


def double_sum_core(A: SetFamily, B: SetFamily, alpha: float) -> float:
    """``sum_{S,T != {}} |S & T| A^(S)^2 B^(T)^2 / (|S|^alpha |T|^(1-alpha))`` term by term."""
    n = A.n
    sa, ea = _squares(A)
    sb, eb = _squares(B)
    pcs = popcounts(n).tolist()
    ta = [(s, float(Fraction(sa[s], 1 << ea)) / pcs[s] ** alpha) for s in range(1, 1 << n) if sa[s]]
    tb = [(t, float(Fraction(sb[t], 1 << eb)) / pcs[t] ** (1 - alpha)) for t in range(1, 1 << n) if sb[t]]
    return sum(pcs[s & t] * x * y for s, x in ta for t, y in tb)


def _delta_form(A: SetFamily, B: SetFamily, alpha: float) -> float:
    """``sum_i M_alpha(half Delta_i A) * M_(1-alpha)(half Delta_i B)``."""
    fa, fb = A.indicator(), B.indicator()
    return sum(m_alpha(directional_difference(fa, i, "half"), alpha)
               * m_alpha(directional_difference(fb, i, "half"), 1 - alpha)
               for i in range(1, A.n + 1))


# --------------------------------------------------------------------------
# reports

@dataclass
class InequalityReport:
    checker: str
    kind: str
    lhs: object
    rhs: object
    margin: object
    ratio: object
    holds: object
    metadata: dict = field(default_factory=dict)

    @property
    def hard_failure(self) -> bool:
        return self.kind in ("exact", "float") and self.holds is False


@dataclass(frozen=True)
class Row:
    id: str
    kind: str
    statement: str
    compute: Callable
    needs_b: bool = True
    upper: bool = False


class _Ctx:
    """Lazily computed shared quantities for one (A, B) evaluation."""

    def __init__(self, A: SetFamily, B: SetFamily | None, params: dict):
        self.A, self.B, self.params = A, B, params

    def require(self, which: str, *props: str) -> None:
        F = self.A if which == "A" else self.B
        if F is None:
            raise ClassViolation(f"this checker needs family {which}")
        for p in props:
            if not getattr(F, f"is_{p}"):
                raise ClassViolation(f"class violation: {which} not {p.replace('_', ' ')}")

    @property
    def cor(self) -> Fraction:
        if not hasattr(self, "_cor"):
            self._cor = _cor(self.A, self.B)
        return self._cor


def _alpha(ctx) -> float:
    a = float(ctx.params.get("alpha", 0.5))
    if not 0 <= a <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    return a


def _harris(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    return c.cor, Fraction(0), {}


def _harper(c):
    mu = _mu(c.A)
    if mu in (0, 1):
        rhs = Fraction(0)
    else:
        lg = log2_exact(1 / mu)
        rhs = 2 * mu * int(lg) if lg.is_integer() else 2 * float(mu) * lg
    return _total(c.A), rhs, {}


def _chvatal_equiv(c):
    c.require("A", "increasing"); c.require("B", "increasing", "antipodal")
    return c.cor, _imin(c.A) / 4, {}


def _var(F):
    mu = _mu(F)
    return mu * (1 - mu)


def _balanced_c(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    return c.cor, _imin(c.A) * _var(c.B), {}


def _half_weak(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    return c.cor, psi(float(_imin(c.A))) * float(_var(c.B)), {}


def _weak_phi(c):
    c.require("A", "increasing"); c.require("B", "increasing", "antipodal")
    return c.cor, phi(float(_imin(c.A))), {}


def _ik_products(c):
    return sum((x * y for x, y in zip(_infl(c.A), _infl(c.B))), Fraction(0))


def _talagrand(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    return c.cor, phi(float(_ik_products(c))), {}


def _kms(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    core = sum(psi(float(x)) * psi(float(y)) for x, y in zip(_infl(c.A), _infl(c.B)))
    return c.cor, core, {}


def _kkl(c):
    n = c.A.n
    lhs = max(_infl(c.A), default=Fraction(0))
    core = float(_var(c.A)) * math.log2(n) / n if n >= 2 else 0.0
    return lhs, core, {}


def _talagrand94(c):
    c.require("B", "increasing")
    return sum(phi(float(x)) for x in _infl(c.B)), _var(c.B), {}


def _chang(c):
    c.require("B", "increasing")
    mu = _mu(c.B)
    bound = 0.0 if mu in (0, 1) else 8 * float(mu) ** 2 * math.log(1 / float(mu))
    return bound, sum((x * x for x in _infl(c.B)), Fraction(0)), {}


def _dream(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    t = _mu(c.B)
    cons = 0.0 if t in (0, 1) else 0.5 * float(_imin(c.A)) * float(t) * log2_exact(1 / t)
    return c.cor, _ik_products(c) / 4, {"consequence_rhs": cons,
                                         "consequence_margin": float(c.cor) - cons}


def _majority_avg(c):
    c.require("A", "increasing")
    n = c.A.n
    if n % 2 == 0 or c.B != majority(n):
        raise ClassViolation("class violation: B not majority")
    return c.cor, _total(c.A) / (4 * n), {}


def _weighted(c, w):
    return sum((x * y for x, y in zip(_infl(c.A), w)), Fraction(0))


def _kahn_corr_a(c):
    c.require("A", "increasing"); c.require("B", "increasing", "antipodal")
    return c.cor, _weighted(c, kahn_weights(c.B, "max", c.params.get("permutation"))), {}


def _kahn_corr_b(c):
    c.require("A", "increasing"); c.require("B", "increasing", "antipodal")
    return c.cor, _weighted(c, kahn_weights(c.B, "avg")), {}


def _kahn_intro(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    return c.cor, _weighted(c, kahn_weights(c.B, "avg")), {}


def _sum_with_dual(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    lhs = c.cor + _cor(c.A, dual(c.B))
    return lhs, 2 * _var(c.B) * _imin(c.A), {}


def _reduction(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    return c.cor, _weighted(c, kahn_weights(c.B, "max", c.params.get("permutation"))) / 2, {}


def _alpha_nondiag(c):
    c.require("A", "increasing"); c.require("B", "increasing", "balanced")
    a = _alpha(c)
    return c.cor, alpha_core(c.A, c.B, a), {"alpha": a}


def _sym_m_half(c):
    c.require("A", "increasing"); c.require("B", "increasing", "balanced")
    core = alpha_core(c.A, c.B, 0.5)
    delta = _delta_form(c.A, c.B, 0.5)
    return c.cor, core, {"delta_form": delta, "identity_gap": abs(delta - core)}


def _diag_weak(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    return c.cor, _diag(c.A, c.B, lambda k: 1), {}


def _diag_maxint(c):
    c.require("A", "increasing"); c.require("B", "increasing", "antipodal")
    return c.cor, 4 * _diag(c.A, c.B, lambda k: 1), {}


def _diag_strong(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    return c.cor, _diag(c.A, c.B, lambda k: k), {}


def _gil_alpha(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    a = _alpha(c)
    ia, ib = _total(c.A), _total(c.B)
    if ia == 0 or ib == 0:
        return c.cor, 0.0, {"alpha": a}
    core = (float(_var(c.A) / ia) ** a) * (float(_var(c.B) / ib) ** (1 - a)) * float(_ik_products(c))
    return c.cor, core, {"alpha": a}


def _gil_dual(c):
    # As printed the variance factor is that of A; params["variance_of"] = "B"
    # selects the reading that strengthens sum_with_dual.
    c.require("A", "increasing"); c.require("B", "increasing")
    which = c.params.get("variance_of", "A")
    if which not in ("A", "B"):
        raise ValueError("variance_of must be 'A' or 'B'")
    lhs = c.cor + _cor(c.A, dual(c.B))
    ib = _total(c.B)
    if ib == 0:
        return lhs, None, {}
    var = _var(c.A if which == "A" else c.B)
    return lhs, 2 * var * _ik_products(c) / ib, {}


def _m_alpha_bound(c):
    a = _alpha(c)
    i = c.params.get("coordinate")
    if i is None:
        f = c.A.indicator() - c.A.measure()
    else:
        f = directional_difference(c.A.indicator(), int(i), "full")
    n2 = float(f.norm2_squared())
    n1 = float(f.norm1())
    if n2 == 0:
        return 0.0, 0.0, {"alpha": a}
    core = math.log(math.e * math.sqrt(n2) / n1) ** (-a) * n2
    return m_alpha(f, a), core, {"alpha": a, "function": "centered" if i is None else f"delta_{i}"}


def _kahn_small(scheme):
    def compute(c):
        c.require("A", "increasing"); c.require("B", "increasing")
        b_plus = c.B & dual(c.B)
        w = kahn_weights(c.B, scheme, c.params.get("permutation") if scheme == "max" else None,
                         odd_only=True)
        return _cor(c.A, b_plus), _weighted(c, w), {}
    return compute


def _chvatal_small(c):
    c.require("A", "increasing"); c.require("B", "increasing", "intersecting")
    return c.cor, _mu(c.B) * _imin(c.A) / 2, {}


def _kahn_small_ratio(c):
    c.require("A", "increasing", "intersecting"); c.require("B", "decreasing")
    F, I = c.A, c.B
    if F.count == 0:
        return None, None, {}
    n = F.n
    best = max(((principal(n, i).bits & I.bits).bit_count(), i) for i in range(1, n + 1))
    lhs = Fraction(best[0], 1 << (n - 1))
    return lhs, Fraction((F.bits & I.bits).bit_count(), F.count), {"best_coordinate": best[1]}


def _wrong3(c):
    c.require("A", "increasing"); c.require("B", "increasing")
    mu = _mu(c.B)
    if mu in (0, 1):
        return c.cor, Fraction(0), {}
    lg = log2_exact(1 / mu)
    factor = int(lg) if lg.is_integer() else lg
    rhs = mu * _imin(c.A) / 2 * factor if isinstance(factor, int) else float(mu * _imin(c.A) / 2) * factor
    return c.cor, rhs, {}


def _weakly_symmetric(c):
    c.require("A", "increasing"); c.require("B", "increasing", "balanced", "regular")
    a = float(c.params.get("a", 1.0))
    n = c.A.n
    mu = float(_mu(c.A))
    lo = n ** -a
    if not lo < mu < 1 - lo:
        return c.cor, 0.0, {"a": a, "window": "mu(A) outside (n^-a, 1 - n^-a)"}
    return c.cor, _imin(c.A), {"a": a}


_ROWS = [
    Row("harris", "exact", "Cor(A,B) >= 0 for increasing A, B", _harris),
    Row("harper", "float", "I(A) >= 2 mu(A) log2(1/mu(A))", _harper, needs_b=False),
    Row("chvatal_equiv", "exact", "Cor(A,B) >= Imin(A)/4; B increasing antipodal", _chvatal_equiv),
    Row("balanced_c", "ratio", "Cor(A,B) >= c Imin(A) mu(B)(1-mu(B))", _balanced_c),
    Row("half_weak", "ratio", "Cor(A,B) >= c psi(Imin(A)) mu(B)(1-mu(B))", _half_weak),
    Row("weak_phi", "ratio", "Cor(A,B) >= c phi(Imin(A)); B antipodal", _weak_phi),
    Row("talagrand", "ratio", "Cor(A,B) >= c phi(sum_k I_k(A) I_k(B))", _talagrand),
    Row("kms", "ratio", "Cor(A,B) >= c sum_k psi(I_k(A)) psi(I_k(B))", _kms),
    Row("kkl", "ratio", "max_k I_k(A) >= c mu(1-mu) log2(n)/n", _kkl, needs_b=False),
    Row("talagrand94", "ratio", "sum_k phi(I_k(B)) >= c mu(B)(1-mu(B))", _talagrand94),
    Row("chang", "float", "8 mu(B)^2 ln(1/mu(B)) >= sum_k I_k(B)^2", _chang),
    Row("dream", "margin", "Cor(A,B) >= sum_k I_k(A) I_k(B) / 4", _dream),
    Row("majority_avg", "exact", "Cor(A, Maj) >= I(A)/(4n)", _majority_avg),
    Row("kahn_corr_a", "exact", "Cor(A,B) >= sum_i I_i(A) sum{B^(S)^2 : max S = i}", _kahn_corr_a),
    Row("kahn_corr_b", "exact", "Cor(A,B) >= sum_i I_i(A) sum{B^(S)^2/|S| : S ni i}", _kahn_corr_b),
    Row("kahn_intro", "ratio", "Cor(A,B) >= c sum_i I_i(A) sum{B^(S)^2/|S| : S ni i}", _kahn_intro),
    Row("sum_with_dual", "exact", "Cor(A,B) + Cor(A,B') >= 2 mu(B)(1-mu(B)) Imin(A)", _sum_with_dual),
    Row("reduction", "margin", "Cor(A,B) >= 1/2 sum_i I_i(A) sum{B^(S)^2 : max S = i}", _reduction),
    Row("alpha_nondiag", "ratio",
        "Cor(A,B) >= c sum_{S,T} |S&T| A^(S)^2 B^(T)^2 / (|S|^a |T|^(1-a))", _alpha_nondiag),
    Row("sym_m_half", "ratio", "Cor(A,B) >= c sum_i M_1/2(Delta_i A) M_1/2(Delta_i B)", _sym_m_half),
    Row("diag_weak", "ratio", "Cor(A,B) >= c sum_{S != {}} A^(S)^2 B^(S)^2", _diag_weak),
    Row("diag_maxint", "exact", "Cor(A,B) >= 4 sum_{S != {}} A^(S)^2 B^(S)^2; B maximal intersecting",
        _diag_maxint),
    Row("diag_strong", "exact", "Cor(A,B) >= sum_{S != {}} |S| A^(S)^2 B^(S)^2", _diag_strong),
    Row("gil_alpha", "ratio",
        "Cor(A,B) >= c (Var A/I(A))^a (Var B/I(B))^(1-a) sum_i I_i(A) I_i(B)", _gil_alpha),
    Row("gil_dual", "exact", "Cor(A,B) + Cor(A,B') >= 2 mu(A)(1-mu(A)) sum_i I_i(A) I_i(B) / I(B)",
        _gil_dual),
    Row("m_alpha_bound", "ratio", "M_a(f) <= c log(e |f|_2 / |f|_1)^-a |f|_2^2", _m_alpha_bound,
        needs_b=False, upper=True),
    Row("kahn_small_a", "exact", "Cor(A,B+) >= sum_i I_i(A) sum{B^(S)^2 : max S = i, |S| odd}",
        _kahn_small("max")),
    Row("kahn_small_b", "exact", "Cor(A,B+) >= sum_i I_i(A) sum{B^(S)^2/|S| : S ni i, |S| odd}",
        _kahn_small("avg")),
    Row("chvatal_small", "exact", "Cor(A,B) >= mu(B) Imin(A) / 2; B intersecting", _chvatal_small),
    Row("kahn_small_ratio", "exact", "max_i |F_i & I| / 2^(n-1) >= |F & I| / |F|", _kahn_small_ratio),
    Row("wrong3", "margin", "Cor(A,B) >= mu(B) log2(1/mu(B)) Imin(A) / 2", _wrong3),
    Row("weakly_symmetric", "ratio", "Cor(A,B) > c(a) Imin(A); B balanced regular, mu(A) in window",
        _weakly_symmetric),
]

REGISTRY: dict[str, Row] = {r.id: r for r in _ROWS}


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def evaluate(checker: str, A: SetFamily, B: SetFamily | None = None, params: dict | None = None,
             verify_spectral: bool = True) -> InequalityReport:
    """Evaluate one registry row on ``(A, B)``.

    Raises :class:`ClassViolation` when an input is outside the row's class.
    With ``verify_spectral`` the correlation is recomputed as
    ``sum_{S != {}} A^(S) B^(S)`` and any disagreement raises.
    """
    if checker not in REGISTRY:
        raise ValueError(f"unknown checker {checker!r}")
    row = REGISTRY[checker]
    params = dict(params or {})
    if B is not None and A.n != B.n:
        raise DimensionMismatch(f"dimensions differ: {A.n} vs {B.n}")
    if row.needs_b and B is None:
        raise ClassViolation("this checker needs family B")
    ctx = _Ctx(A, B, params)
    lhs, rhs, meta = row.compute(ctx)
    meta = {"n": A.n, "A": A.digest(), **({"B": B.digest()} if B is not None else {}), **params, **meta}
    if hasattr(ctx, "_cor") and verify_spectral:
        spec = spectral_correlation(A.spectrum, B.spectrum).to_fraction()
        if spec != ctx._cor:
            raise AssertionError("pointwise and spectral correlations disagree")
        meta["cor_spectral_check"] = True
    return _report(row, lhs, rhs, meta)


def _report(row: Row, lhs, rhs, meta) -> InequalityReport:
    if lhs is None or rhs is None:
        return InequalityReport(row.id, row.kind, lhs, rhs, None, None, VACUOUS, meta)
    if row.kind == "ratio":
        if rhs == 0:
            return InequalityReport(row.id, row.kind, lhs, rhs, None, None, VACUOUS, meta)
        ratio = lhs / rhs if _exact(lhs) and _exact(rhs) else float(lhs) / float(rhs)
        if row.upper:
            meta["bound_direction"] = "upper: constant must be >= ratio"
        return InequalityReport(row.id, row.kind, lhs, rhs, None, ratio, NOT_APPLICABLE, meta)
    if _exact(lhs) and _exact(rhs):
        margin = lhs - rhs
        holds = margin >= 0
    else:
        margin = float(lhs) - float(rhs)
        holds = margin >= -FLOAT_SLACK
    ratio = None
    if rhs != 0:
        ratio = lhs / rhs if _exact(lhs) and _exact(rhs) else float(lhs) / float(rhs)
    return InequalityReport(row.id, row.kind, lhs, rhs, margin, ratio, holds, meta)


# --------------------------------------------------------------------------
# ensembles

@dataclass
class EnsembleReport:
    checker: str
    count: int
    lhs: object
    rhs: object
    margin: object
    holds: object
    metadata: dict = field(default_factory=dict)


ENSEMBLE_CHECKERS = ("avg_dream", "avg_chvatal", "avg_sgamma")


def evaluate_ensemble(checker: str, families: Sequence[SetFamily], params: dict | None = None
                      ) -> EnsembleReport:
    """Average-case checks with A and B drawn independently and uniformly from ``families``."""
    params = dict(params or {})
    if checker not in ENSEMBLE_CHECKERS:
        raise ValueError(f"unknown ensemble checker {checker!r}")
    fams = list(families)
    if not fams:
        raise ValueError("empty ensemble")
    n = fams[0].n
    for F in fams:
        if F.n != n:
            raise DimensionMismatch("ensemble families must share n")
        if not F.is_increasing:
            raise ClassViolation("class violation: ensemble family not increasing")
    k = len(fams)
    e_cor = sum((_cor(a, b) for a in fams for b in fams), Fraction(0)) / (k * k)
    meta = {"n": n, "families": [F.digest() for F in fams]}
    if checker == "avg_dream":
        infl = [_infl(F) for F in fams]
        tot = sum((x * y for ia in infl for ib in infl for x, y in zip(ia, ib)), Fraction(0))
        rhs = tot / (4 * k * k)
        return EnsembleReport(checker, k, e_cor, rhs, e_cor - rhs, e_cor >= rhs, meta)
    mus = {_mu(F) for F in fams}
    if len(mus) != 1:
        raise ClassViolation("class violation: ensemble families must have equal measure")
    t = mus.pop()
    if "t" in params and Fraction(params["t"]) != t:
        raise ClassViolation(f"class violation: ensemble measure is {t}, not {params['t']}")
    if not 0 < t < 1:
        raise ClassViolation("class violation: ensemble measure must lie in (0, 1)")
    meta["t"] = t
    if checker == "avg_chvatal":
        e_imin = sum((_imin(F) for F in fams), Fraction(0)) / k
        lg = log2_exact(1 / t)
        if lg.is_integer():
            rhs = t * int(lg) * e_imin / 2
            margin = e_cor - rhs
            holds = margin >= 0
        else:
            rhs = 0.5 * float(t) * lg * float(e_imin)
            margin = float(e_cor) - rhs
            holds = margin >= -FLOAT_SLACK
        return EnsembleReport(checker, k, e_cor, rhs, margin, holds, meta)
    gamma = float(params.get("gamma", 0.05))
    meta["gamma"] = gamma
    if gamma * log2_exact(1 / t) < 1:
        # fewer than one influence is summed; the bound says nothing here
        meta["reason"] = "gamma * log2(1/t) < 1"
        return EnsembleReport(checker, k, e_cor, None, None, VACUOUS, meta)
    e_s = sum((s_gamma(F, gamma).to_fraction() for F in fams), Fraction(0)) / k
    coef = (2 - 2 * math.sqrt(2 * gamma * math.log2(math.e))) / (4 * gamma)
    rhs = coef * float(t) * float(e_s)
    margin = float(e_cor) - rhs
    return EnsembleReport(checker, k, e_cor, rhs, margin, margin >= -FLOAT_SLACK, meta)


# --------------------------------------------------------------------------
# equivalence of the set-system and correlation forms

@dataclass(frozen=True)
class EquivalenceRecord:
    max_intersecting_subfamily_size: int
    best_principal_size: int
    cor_form_margin: Fraction
    consistent: bool
    count_identity_holds: bool


_EQUIV_MAX_N = 5


def equivalence_check(F: SetFamily) -> EquivalenceRecord:
    """Compare the three forms of the reformulation for a decreasing F.

    The largest intersecting subfamily is found as the max of ``|F & B|``
    over maximal intersecting B, each cross-checked against
    ``2^n (Cor(F,B) + mu(F)/2)``.  Consistency: the largest is achieved by a
    dictator iff ``Cor(F, B) <= -Imin(F)/4`` for every such B.
    """
    if not F.is_decreasing:
        raise ClassViolation("class violation: F not decreasing")
    n = F.n
    if n > _EQUIV_MAX_N:
        raise ResourceLimit(f"equivalence_check is limited to n <= {_EQUIV_MAX_N}")
    mu = _mu(F)
    quarter_imin = _imin(F) / 4
    best = 0
    margin = None
    identity = True
    for B in enumerate_families(n, "maximal-intersecting"):
        size = (F.bits & B.bits).bit_count()
        cor = _cor(F, B)
        identity &= size == (1 << n) * (cor + mu / 2)
        best = max(best, size)
        m = -cor - quarter_imin
        margin = m if margin is None else min(margin, m)
    principal_best = max(((F.bits & principal(n, i).bits).bit_count() for i in range(1, n + 1)), default=0)
    margin = Fraction(0) if margin is None else margin
    consistent = (best == principal_best) == (margin >= 0)
    return EquivalenceRecord(best, principal_best, margin, consistent, identity)


# --------------------------------------------------------------------------
# psi_alpha variant of the KMS bound

def psi_alpha_scan(alpha: float, n_values: Iterable[int], level_fraction: float = 0.75) -> list[dict]:
    """Ratios ``Cor(A, Maj) / sum_k psi_a(I_k(A)) psi_(1-a)(I_k(Maj))`` for threshold A.

    A is ``{x : |x| > s}`` with ``s = floor(level_fraction * n)``, so
    ``mu(A)`` is exponentially small.  Reported only.
    """
    from .families import threshold

    rows = []
    for n in n_values:
        B = majority(n)
        s = int(level_fraction * n)
        A = threshold(n, s + 1)
        cor = _cor(A, B)
        core = sum(psi_alpha(float(x), alpha) * psi_alpha(float(y), 1 - alpha)
                   for x, y in zip(_infl(A), _infl(B)))
        rows.append({"n": n, "s": s, "mu_A": float(_mu(A)), "cor": float(cor), "core": core,
                     "ratio": float(cor) / core if core else math.nan,
                     "inverse_ratio": core / float(cor) if cor else math.inf})
    return rows
