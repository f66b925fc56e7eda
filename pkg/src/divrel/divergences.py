"""f-divergences on aligned discrete distributions.

All values are in nats. Divergences may be +inf (IEEE infinity is used as
the explicit extended-real marker, never an exception), so inequalities
with infinite sides remain checkable. Boundary conventions follow the
standard f-divergence definition: f(0) is the right limit at zero,
0*f(0/0) = 0, and 0*f(a/0) = a * lim_{u->inf} f(u)/u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .distributions import DiscreteDistribution, mixture
from .errors import DomainError, UnalignedSupports

INF = math.inf

_TAGS = {"KL", "CHI2", "TV", "RENYI", "GV", "SKEW_K", "SKEW_S", "JS", "POLYLOG_F"}


@dataclass(frozen=True)
class DivergenceSpec:
    """Selects one member of the f-divergence families used here.

    tag: KL | CHI2 | TV | RENYI | GV | SKEW_K | SKEW_S | JS | POLYLOG_F
    param: order alpha for RENYI, skew s/alpha for GV/SKEW_*, integer k
    for POLYLOG_F; ignored otherwise.
    """

    tag: str
    param: float | None = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise DomainError(f"unknown divergence tag {self.tag!r}")
        p = self.param
        if self.tag == "RENYI" and not (p is not None and p >= 0):
            raise DomainError("RENYI requires alpha in [0, inf]")
        if self.tag == "GV" and not (p is not None and 0 <= p <= 1):
            raise DomainError("GV requires s in [0, 1]")
        if self.tag == "SKEW_K" and not (p is not None and 0 < p <= 1):
            raise DomainError("SKEW_K requires alpha in (0, 1]")
        if self.tag == "SKEW_S" and not (p is not None and 0 <= p <= 1):
            raise DomainError("SKEW_S requires alpha in [0, 1]")
        if self.tag == "POLYLOG_F" and not (
            p is not None and p >= 0 and float(p).is_integer()
        ):
            raise DomainError("POLYLOG_F requires integer k >= 0")

    @classmethod
    def parse(cls, text: str) -> "DivergenceSpec":
        """Parse CLI-style specs like 'kl', 'renyi:2', 'gv:0.5', 'polylog:2'."""
        name, _, arg = text.partition(":")
        name = name.strip().lower()
        table = {
            "kl": "KL", "chi2": "CHI2", "tv": "TV", "renyi": "RENYI",
            "gv": "GV", "skew_k": "SKEW_K", "skew_s": "SKEW_S", "js": "JS",
            "polylog": "POLYLOG_F", "polylog_f": "POLYLOG_F",
        }
        if name not in table:
            raise DomainError(f"unknown divergence name {name!r}")
        tag = table[name]
        param = float(arg) if arg else None
        return cls(tag, param)


def _aligned(p: DiscreteDistribution, q: DiscreteDistribution):
    if p.support != q.support:
        raise UnalignedSupports(
            "distributions must share a support; call align() first"
        )
    return p.p, q.p


def generic_f_divergence(
    f: Callable[[float], float],
    p: DiscreteDistribution,
    q: DiscreteDistribution,
    f_at_zero: float,
    slope_at_inf: float,
) -> float:
    """Sum q_i f(p_i/q_i) with the boundary conventions made explicit.

    f_at_zero is lim_{t->0+} f(t); slope_at_inf is lim_{u->inf} f(u)/u.
    Either may be +inf.
    """
    pv, qv = _aligned(p, q)
    total = 0.0
    for pi, qi in zip(pv, qv):
        if qi == 0.0:
            if pi == 0.0:
                continue
            if slope_at_inf == 0.0:
                continue
            if math.isinf(slope_at_inf):
                return INF
            total += pi * slope_at_inf
        elif pi == 0.0:
            if math.isinf(f_at_zero):
                return INF
            total += qi * f_at_zero
        else:
            total += qi * f(pi / qi)
    return total


def kl(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Relative entropy D(P||Q) in nats.

    Evaluated as sum p ln(p/q) - p + q, whose terms are individually
    non-negative; identical to sum p ln(p/q) for probability vectors but
    stable when P is extremely close to Q (the linear parts cancel per
    term instead of across the whole sum).
    """
    pv, qv = _aligned(p, q)
    pos = pv > 0
    if np.any(pos & (qv == 0)):
        return INF
    terms = pv[pos] * np.log(pv[pos] / qv[pos]) - pv[pos] + qv[pos]
    return max(float(np.sum(terms) + np.sum(qv[~pos])), 0.0)


def chi_squared(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Pearson chi-squared divergence chi^2(P||Q)."""
    pv, qv = _aligned(p, q)
    if np.any((qv == 0) & (pv > 0)):
        return INF
    pos = qv > 0
    d = pv[pos] - qv[pos]
    return float(np.sum(d * d / qv[pos]))


def total_variation(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Total variation |P-Q| = sum |p_i - q_i|, always in [0, 2]."""
    pv, qv = _aligned(p, q)
    return float(np.sum(np.abs(pv - qv)))


def renyi(alpha: float, p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Renyi divergence of order alpha in [0, inf], with continuous extensions."""
    if alpha < 0:
        raise DomainError(f"Renyi order must be >= 0, got {alpha}")
    pv, qv = _aligned(p, q)
    if alpha == 0.0:
        return float(-np.log(np.sum(qv[pv > 0])))
    if math.isinf(alpha):
        if np.any((qv == 0) & (pv > 0)):
            return INF
        pos = pv > 0
        return float(np.log(np.max(pv[pos] / qv[pos])))
    if abs(alpha - 1.0) < 1e-9:
        return kl(p, q)
    if alpha > 1.0 and np.any((qv == 0) & (pv > 0)):
        return INF
    both = (pv > 0) & (qv > 0)
    z = float(np.sum(pv[both] ** alpha * qv[both] ** (1.0 - alpha)))
    if z == 0.0:
        return INF
    return float(np.log(z) / (alpha - 1.0))


def gyorfi_vajda(s: float, p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Divergence with kernel (t-1)^2 / (s + (1-s)t); scaled chi^2 vs the s-mixture."""
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"skew parameter must lie in [0,1], got {s}")
    if s == 0.0:
        return chi_squared(q, p)
    return chi_squared(p, mixture(p, q, s)) / (s * s)


def skew_k(alpha: float, p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """K_alpha(P||Q) = D(P || (1-alpha)P + alpha*Q); K_0 = 0 by continuity."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"skew parameter must lie in [0,1], got {alpha}")
    if alpha == 0.0:
        return 0.0
    return kl(p, mixture(p, q, alpha))


def skew_s(alpha: float, p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """S_alpha(P||Q) = alpha*K_alpha(P||Q) + (1-alpha)*K_{1-alpha}(Q||P)."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"skew parameter must lie in [0,1], got {alpha}")
    total = 0.0
    if alpha > 0.0:
        total += alpha * skew_k(alpha, p, q)
    if alpha < 1.0:
        total += (1.0 - alpha) * skew_k(1.0 - alpha, q, p)
    return total


def jensen_shannon(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    return skew_s(0.5, p, q)


def binary_kl(r: float, s: float) -> float:
    """d(r||s) = r log(r/s) + (1-r) log((1-r)/(1-s)) in nats, 0 log(0/0) = 0."""
    if not (0.0 <= r <= 1.0 and 0.0 <= s <= 1.0):
        raise DomainError(f"binary_kl arguments must lie in [0,1], got ({r}, {s})")
    total = 0.0
    if r > 0.0:
        if s == 0.0:
            return INF
        total += r * math.log(r / s)
    if r < 1.0:
        if s == 1.0:
            return INF
        total += (1.0 - r) * math.log((1.0 - r) / (1.0 - s))
    return total


def entropy(p: DiscreteDistribution) -> float:
    """Shannon entropy in nats, 0 log 0 = 0."""
    m = p.p
    pos = m > 0
    return float(-np.sum(m[pos] * np.log(m[pos])))


def f_divergence(
    spec: DivergenceSpec, p: DiscreteDistribution, q: DiscreteDistribution
) -> float:
    """Evaluate the divergence selected by spec; result in nats (or +inf)."""
    if spec.tag == "KL":
        return kl(p, q)
    if spec.tag == "CHI2":
        return chi_squared(p, q)
    if spec.tag == "TV":
        return total_variation(p, q)
    if spec.tag == "RENYI":
        return renyi(spec.param, p, q)
    if spec.tag == "GV":
        return gyorfi_vajda(spec.param, p, q)
    if spec.tag == "SKEW_K":
        return skew_k(spec.param, p, q)
    if spec.tag == "SKEW_S":
        return skew_s(spec.param, p, q)
    if spec.tag == "JS":
        return jensen_shannon(p, q)
    if spec.tag == "POLYLOG_F":
        from .identities import f_k_divergence

        return f_k_divergence(int(spec.param), p, q)
    raise DomainError(f"unknown tag {spec.tag!r}")
