"""Contraction coefficients, maximal correlation and Markov mixing envelopes.

The chi-squared contraction coefficient of a (source, channel) pair is the
squared second-largest singular value of the normalized joint matrix
B[x, y] = sqrt(Qx(x)) W(y|x) / sqrt(Qy(y)); its square root is the maximal
correlation. Contraction coefficients of the skew divergence families are
sandwiched between this spectral value and explicit multiples of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Channel, DiscreteDistribution, mixture, push_forward
from .divergences import DivergenceSpec, f_divergence, kl, skew_k, skew_s
from .errors import (
    DimensionMismatch,
    DomainError,
    NotIrreducible,
    NotReversible,
    PreconditionViolated,
    SpectralFailure,
)
from .identities import DEFAULT_CFG, IdentityReport, QuadratureConfig, integrate
from .inequalities import InequalityReport

_SVD_CUTOFF = 64


@dataclass(frozen=True)
class SourceChannelPair:
    qx: DiscreteDistribution
    w: Channel

    def __post_init__(self):
        if len(self.qx) != self.w.n_inputs:
            raise DimensionMismatch("input law size must match channel rows")
        if np.any(self.qx.p <= 0):
            raise PreconditionViolated("input law must be strictly positive")
        qy = self.qx.p @ self.w.matrix
        if np.any(qy <= 0):
            raise PreconditionViolated("output law must be strictly positive")

    @property
    def qy(self) -> DiscreteDistribution:
        return push_forward(self.qx, self.w)


@dataclass(frozen=True)
class ContractionEstimate:
    lower: float
    upper: float
    point_estimate: float


def _second_singular_value(b: np.ndarray, u1: np.ndarray, v1: np.ndarray) -> float:
    """Second-largest singular value; the top pair (u1, v1, 1) is known."""
    if min(b.shape) <= _SVD_CUTOFF:
        sv = np.linalg.svd(b, compute_uv=False)
        if sv.size < 2:
            return 0.0
        return float(sv[1])
    # deflate the known top pair, then power-iterate on B B^T
    bd = b - np.outer(u1, v1)
    g = bd @ bd.T
    rng = np.random.default_rng(0)
    x = rng.standard_normal(g.shape[0])
    prev = 0.0
    for _ in range(100_000):
        x = g @ x
        norm = np.linalg.norm(x)
        if norm == 0.0:
            return 0.0
        x /= norm
        est = float(x @ g @ x)
        if abs(est - prev) < 1e-12:
            return math.sqrt(max(est, 0.0))
        prev = est
    raise SpectralFailure("power iteration did not converge")


def chi2_contraction(sc: SourceChannelPair) -> float:
    """Chi-squared contraction coefficient of the pair, in [0, 1]."""
    qx = sc.qx.p
    qy = qx @ sc.w.matrix
    b = np.sqrt(qx)[:, None] * sc.w.matrix / np.sqrt(qy)[None, :]
    s2 = _second_singular_value(b, np.sqrt(qx), np.sqrt(qy))
    return float(min(max(s2 * s2, 0.0), 1.0))


def maximal_correlation(sc: SourceChannelPair) -> float:
    """Maximal correlation of (X, Y); square root of the chi^2 contraction."""
    return math.sqrt(chi2_contraction(sc))


def maximal_correlation_ace(
    sc: SourceChannelPair, iters: int = 10_000, tol: float = 1e-14, seed: int = 0
) -> float:
    """Maximal correlation by alternating conditional expectations.

    Direct optimization over centered unit-variance score functions;
    independent of the SVD path, used to cross-validate it.
    """
    qx = sc.qx.p
    joint = qx[:, None] * sc.w.matrix
    qy = joint.sum(axis=0)
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(len(qx))
    prev = 0.0
    for _ in range(iters):
        f = f - np.dot(qx, f)
        # g(y) proportional to E[f(X) | Y=y]
        g = (joint * f[:, None]).sum(axis=0) / qy
        g = g - np.dot(qy, g)
        var_g = np.dot(qy, g * g)
        if var_g <= 0:
            return 0.0
        g /= math.sqrt(var_g)
        f = (joint * g[None, :]).sum(axis=1) / qx
        var_f = np.dot(qx, f * f)
        if var_f <= 0:
            return 0.0
        f /= math.sqrt(var_f)
        corr = float(np.einsum("x,xy,y->", f, joint, g))
        if abs(corr - prev) < tol:
            break
        prev = corr
    return abs(corr)


# below this input divergence the ratio loses enough float precision to
# overshoot the true supremum, so such candidates are rejected
_RATIO_FLOOR = 1e-6


def _ratio(spec: DivergenceSpec, sc: SourceChannelPair, px: np.ndarray) -> float:
    """Output/input divergence ratio for the candidate input law px."""
    p_in = DiscreteDistribution(sc.qx.support, tuple(px))
    d_in = f_divergence(spec, p_in, sc.qx)
    if not (_RATIO_FLOOR < d_in < math.inf):
        return -math.inf
    p_out = push_forward(p_in, sc.w)
    d_out = f_divergence(spec, p_out, sc.qy)
    if math.isinf(d_out):
        return -math.inf
    return d_out / d_in


def _spectral_direction(sc: SourceChannelPair) -> np.ndarray:
    """Input perturbation direction attaining the chi^2 contraction."""
    qx = sc.qx.p
    qy = qx @ sc.w.matrix
    b = np.sqrt(qx)[:, None] * sc.w.matrix / np.sqrt(qy)[None, :]
    u, _, _ = np.linalg.svd(b)
    # u2 is orthogonal to sqrt(qx), so this perturbation sums to zero
    return np.sqrt(qx) * u[:, 1]


def brute_force_mu_f(
    spec: DivergenceSpec,
    sc: SourceChannelPair,
    n_samples: int = 10_000,
    seed: int = 0,
) -> ContractionEstimate:
    """Sampled lower estimate of the contraction coefficient sup-ratio.

    Dirichlet(1, ..., 1) sampling over input laws, Nelder-Mead refinement
    through a softmax reparameterization, plus a line of candidates along
    the spectral direction toward Qx (where every smooth f-divergence
    ratio localizes to the chi^2 value). The result is a valid lower
    estimate only; the upper field is +inf.
    """
    if len(sc.qx) > 6:
        raise PreconditionViolated("brute-force search is limited to <= 6 atoms")
    rng = np.random.default_rng(seed)
    n = len(sc.qx)
    best = -math.inf
    best_px = None
    for _ in range(n_samples):
        px = rng.dirichlet(np.ones(n))
        r = _ratio(spec, sc, px)
        if r > best:
            best, best_px = r, px
    lower = best

    candidates = [best]
    # local candidates along the spectral direction
    h = _spectral_direction(sc)
    scale = np.max(np.abs(h) / sc.qx.p)
    for t in (1e-1, 3e-2, 1e-2):
        px = sc.qx.p + (t / scale) * h
        if np.all(px > 0):
            candidates.append(_ratio(spec, sc, px / px.sum()))
    # Nelder-Mead refinement from the best sample, softmax-parameterized
    if best_px is not None and np.all(best_px > 0):
        import scipy.optimize

        def neg_ratio(z):
            e = np.exp(z - z.max())
            return -_ratio(spec, sc, e / e.sum())

        res = scipy.optimize.minimize(
            neg_ratio, np.log(best_px), method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000},
        )
        candidates.append(-res.fun)
    point = max(c for c in candidates if not math.isinf(c))
    return ContractionEstimate(lower=lower, upper=math.inf, point_estimate=point)


def mu_chi2_channel(
    w: Channel, n_samples: int = 2000, seed: int = 0
) -> float:
    """Source-independent chi^2 contraction: sup over input laws."""
    import scipy.optimize

    rng = np.random.default_rng(seed)
    n = w.n_inputs
    support = tuple(float(i) for i in range(n))

    def value(px: np.ndarray) -> float:
        if np.any(px <= 0) or np.any(px @ w.matrix <= 0):
            return -math.inf
        sc = SourceChannelPair(DiscreteDistribution(support, tuple(px)), w)
        return chi2_contraction(sc)

    best, best_px = -math.inf, None
    for _ in range(n_samples):
        px = rng.dirichlet(np.ones(n))
        v = value(px)
        if v > best:
            best, best_px = v, px

    def neg(z):
        e = np.exp(z - z.max())
        return -value(e / e.sum())

    res = scipy.optimize.minimize(
        neg, np.log(best_px), method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 5000},
    )
    return max(best, -res.fun)


def skew_k_factor(alpha: float, q_min: float) -> float:
    """Upper-bound multiplier for the K-family contraction coefficient."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0,1], got {alpha}")
    return 1.0 / (alpha * q_min)


def skew_s_factor(alpha: float, q_min: float) -> float:
    """Upper-bound multiplier for the S-family contraction coefficient."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0,1], got {alpha}")
    num = (1.0 - alpha) * math.log(1.0 / alpha) + 2.0 * alpha - 1.0
    den = (1.0 - 3.0 * alpha + 3.0 * alpha * alpha) * q_min
    return num / den


def skew_contraction_sandwich(
    alpha: float, which: str, sc: SourceChannelPair,
    n_samples: int = 2000, seed: int = 0,
) -> tuple[float, float, float]:
    """(spectral lower, channel-sup upper, scaled-spectral upper) for mu_{k/s_alpha}."""
    if which not in ("K", "S"):
        raise DomainError("which must be 'K' or 'S'")
    lower = chi2_contraction(sc)
    upper_channel = mu_chi2_channel(sc.w, n_samples=n_samples, seed=seed)
    q_min = float(np.min(sc.qx.p))
    factor = skew_k_factor(alpha, q_min) if which == "K" else skew_s_factor(alpha, q_min)
    return lower, upper_channel, factor * lower


def g_alpha(alpha: float, s: float) -> float:
    """Weight kernel for the S-family integral representation."""
    out = 0.0
    if 0.0 < s <= alpha:
        out += alpha * s
    if alpha <= s < 1.0:
        out += (1.0 - alpha) * (1.0 - s)
    return out


def check_skew_s_integral(
    alpha: float, p: DiscreteDistribution, q: DiscreteDistribution,
    cfg: QuadratureConfig = DEFAULT_CFG,
) -> IdentityReport:
    """S_alpha(P||Q) vs its weighted integral over the skew-chi^2 curve."""
    from .divergences import gyorfi_vajda

    lhs = skew_s(alpha, p, q)
    rhs = integrate(
        lambda s: g_alpha(alpha, s) * gyorfi_vajda(s, p, q), 0.0, 1.0, cfg
    )
    return IdentityReport.compare(f"skew_s_integral_a{alpha}", lhs, rhs)


def stationary_distribution(w: Channel) -> DiscreteDistribution:
    """Stationary law of a square kernel via the leading left eigenvector."""
    m = w.matrix
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch("stationary law needs a square kernel")
    vals, vecs = np.linalg.eig(m.T)
    i = int(np.argmax(vals.real))
    v = np.abs(vecs[:, i].real)
    v /= v.sum()
    return DiscreteDistribution(
        tuple(float(j) for j in range(len(v))), tuple(v)
    )


def _check_irreducible(w: Channel) -> None:
    n = w.n_inputs
    reach = (w.matrix > 0).astype(bool)
    closure = reach | np.eye(n, dtype=bool)
    for _ in range(n):
        closure = closure | (closure @ closure)
    if not closure.all():
        raise NotIrreducible("kernel support graph is not strongly connected")


def _check_reversible(w: Channel, q: DiscreteDistribution, tol: float = 1e-10) -> None:
    m = w.matrix
    flow = q.p[:, None] * m
    if not np.allclose(flow, flow.T, atol=tol, rtol=0.0):
        raise NotReversible("detailed balance fails for the stationary law")


def markov_mixing_report(
    w: Channel, p0: DiscreteDistribution, alpha: float, n_max: int
) -> dict:
    """Divergence-to-stationarity trajectories with their decay envelopes.

    For each step n: the skew divergences K_alpha and S_alpha from the
    n-step law to the stationary law, together with the envelope
    factor * mu^n * (initial divergence), where mu is the chi^2
    contraction of the stationary pair and the factors are the skew
    family multipliers at Q_min.
    """
    if w.matrix.shape[0] != w.matrix.shape[1]:
        raise DimensionMismatch("mixing analysis needs a square kernel")
    _check_irreducible(w)
    q = stationary_distribution(w)
    _check_reversible(w, q)
    sc = SourceChannelPair(q, w)
    mu = chi2_contraction(sc)
    q_min = float(np.min(q.p))
    fk = skew_k_factor(alpha, q_min)
    fs = skew_s_factor(alpha, q_min)
    p0a = DiscreteDistribution(q.support, tuple(p0.p))
    k0 = skew_k(alpha, p0a, q)
    s0 = skew_s(alpha, p0a, q)
    rows = []
    pn = p0a.p
    for n in range(1, n_max + 1):
        pn = pn @ w.matrix
        dist = DiscreteDistribution(q.support, tuple(pn / pn.sum()))
        rows.append(
            {
                "n": n,
                "k_alpha": skew_k(alpha, dist, q),
                "s_alpha": skew_s(alpha, dist, q),
                "k_envelope": fk * mu**n * k0,
                "s_envelope": fs * mu**n * s0,
            }
        )
    return {
        "mu_chi2": mu,
        "q_min": q_min,
        "stationary": q,
        "k_alpha_initial": k0,
        "s_alpha_initial": s0,
        "rows": rows,
    }


def chi2_contraction_power(w: Channel, q: DiscreteDistribution, n: int) -> float:
    """Chi^2 contraction of the n-step kernel at input law q."""
    m = np.linalg.matrix_power(w.matrix, n)
    return chi2_contraction(SourceChannelPair(q, Channel(tuple(map(tuple, m)))))


def max_correlation_path_bound(
    p_x: DiscreteDistribution,
    q_x: DiscreteDistribution,
    w: Channel,
    n_grid: int = 101,
) -> InequalityReport:
    """Sup of the mixed-input maximal correlation dominates both KL-ratio roots."""
    if p_x.support != q_x.support or p_x.mass == q_x.mass:
        raise PreconditionViolated("needs P != Q on a shared support")
    if np.any(p_x.p <= 0) or np.any(q_x.p <= 0):
        raise PreconditionViolated("both input laws must be strictly positive")
    p_y, q_y = push_forward(p_x, w), push_forward(q_x, w)
    ratios = []
    for a, b, ay, by in ((p_x, q_x, p_y, q_y), (q_x, p_x, q_y, p_y)):
        din = kl(a, b)
        dout = kl(ay, by)
        # output divergences below 1e-13 are rounding noise (e.g. a
        # channel with identical rows maps everything to the same law)
        ratios.append(math.sqrt(dout / din) if din > 0 and dout > 1e-13 else 0.0)
    rhs_bound = max(ratios)
    sup_rho = 0.0
    for s in np.linspace(0.0, 1.0, n_grid):
        mix = mixture(p_x, q_x, float(s))
        sc = SourceChannelPair(mix, w)
        sup_rho = max(sup_rho, maximal_correlation(sc))
    return InequalityReport("max_correlation_path", rhs_bound, sup_rho)
