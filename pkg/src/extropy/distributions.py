"""Catalog of univariate lifetime distributions.

Each member carries vectorized pdf/cdf/survival evaluators, a quantile, a
sampler driven by an explicit numpy Generator, the analytic endpoint
exponents of its density (fed to the integration engine as singularity
hints), and a table of closed-form measure values where one exists.

Families: exponential(rate), uniform(a, b), gamma(alpha, beta) with beta
the scale, beta(alpha, beta), piecewise(weights) with unit-width cells on
[0, n), pareto(shape, scale) with hazard shape/t, and tabulated densities
given as an (x, f) grid, linearly interpolated and renormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy import special

__all__ = [
    "MEASURE_IDS",
    "ValidationError",
    "UnivariateDistribution",
    "log_gamma",
    "beta2",
    "beta3",
    "exponential",
    "uniform",
    "gamma_dist",
    "beta_dist",
    "piecewise",
    "pareto",
    "tabulated",
    "make_distribution",
    "closed_form",
]

MEASURE_IDS = (
    "extropy",
    "weighted_extropy",
    "residual_extropy",
    "past_extropy",
    "weighted_residual_extropy",
    "weighted_past_extropy",
    "dynamic_survival_extropy",
)

T_INDEXED_MEASURES = MEASURE_IDS[2:]


class ValidationError(ValueError):
    """A distribution specification violates a named constraint."""


# -- special functions -------------------------------------------------------

def log_gamma(x: float) -> float:
    return math.lgamma(x)


def beta2(a: float, b: float) -> float:
    """Complete beta function B(a, b)."""
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def beta3(a: float, b: float, c: float) -> float:
    """Three-parameter complete beta function G(a)G(b)G(c)/G(a+b+c)."""
    return math.exp(math.lgamma(a) + math.lgamma(b) + math.lgamma(c)
                    - math.lgamma(a + b + c))


# -- catalog type ------------------------------------------------------------

@dataclass(frozen=True)
class UnivariateDistribution:
    """A lifetime distribution with vectorized evaluators.

    ``pdf_edge_exponents`` holds the local power of f at the two support
    edges (an exponent at an infinite edge describes the tail; None means
    the tail decays faster than any power).  ``closed_forms`` maps measure
    identifiers to analytic values: a float, -inf for a divergent measure,
    or a callable of t for time-indexed measures.
    """

    family: str
    params: Mapping[str, object]
    support: tuple[float, float]
    pdf: Callable[[np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray], np.ndarray]
    sf: Callable[[np.ndarray], np.ndarray]
    quantile: Callable[[np.ndarray], np.ndarray]
    pdf_edge_exponents: tuple[float | None, float | None] = (None, None)
    sf_tail_exponent: float | None = None
    closed_forms: Mapping[str, object] = field(default_factory=dict)

    @property
    def label(self) -> str:
        inner = ", ".join(f"{k}={_fmt(v)}" for k, v in self.params.items())
        return f"{self.family}({inner})"

    def hazard(self, x):
        """f/sf where the survival function is positive."""
        x = np.asarray(x, dtype=float)
        s = self.sf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(s > 0.0, self.pdf(x) / np.where(s > 0.0, s, 1.0), np.inf)

    def reversed_hazard(self, x):
        """f/cdf where the distribution function is positive."""
        x = np.asarray(x, dtype=float)
        c = self.cdf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(c > 0.0, self.pdf(x) / np.where(c > 0.0, c, 1.0), np.inf)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.quantile(rng.random(n))


def _fmt(v) -> str:
    if isinstance(v, float) and v == int(v) and abs(v) < 1e15:
        return str(int(v))
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ",".join(_fmt(float(u)) for u in v) + "]"
    return str(v)


def _quantile_by_bisection(cdf, lo: float, hi: float, p, tol: float = 1e-12):
    """Vectorized bisection of cdf(x) = p on [lo, hi]."""
    p = np.asarray(p, dtype=float)
    a = np.full(p.shape, lo)
    b = np.full(p.shape, hi)
    iters = max(1, int(math.ceil(math.log2(max((hi - lo) / tol, 2.0)))))
    for _ in range(iters):
        m = 0.5 * (a + b)
        below = cdf(m) < p
        a = np.where(below, m, a)
        b = np.where(below, b, m)
    return 0.5 * (a + b)


# -- families ----------------------------------------------------------------

def exponential(rate: float) -> UnivariateDistribution:
    if not rate > 0:
        raise ValidationError("exponential requires rate > 0")
    lam = float(rate)

    def pdf(x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0.0, lam * np.exp(-lam * x), 0.0)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0.0, -np.expm1(-lam * x), 0.0)

    def sf(x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0.0, np.exp(-lam * x), 1.0)

    def quantile(p):
        p = np.asarray(p, dtype=float)
        return -np.log1p(-p) / lam

    return UnivariateDistribution(
        family="exponential", params={"rate": lam}, support=(0.0, math.inf),
        pdf=pdf, cdf=cdf, sf=sf, quantile=quantile,
        pdf_edge_exponents=(0.0, None),
        closed_forms={
            "weighted_extropy": -0.125,
            "weighted_residual_extropy": lambda t: -lam * t / 4.0 - 0.125,
        })


def uniform(a: float, b: float) -> UnivariateDistribution:
    if not a >= 0:
        raise ValidationError("uniform requires a >= 0 (non-negative support)")
    if not a < b:
        raise ValidationError("uniform requires a < b")
    a, b = float(a), float(b)
    w = b - a

    def pdf(x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= a) & (x <= b), 1.0 / w, 0.0)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        return np.clip((x - a) / w, 0.0, 1.0)

    def sf(x):
        x = np.asarray(x, dtype=float)
        return np.clip((b - x) / w, 0.0, 1.0)

    def quantile(p):
        return a + np.asarray(p, dtype=float) * w

    return UnivariateDistribution(
        family="uniform", params={"a": a, "b": b}, support=(a, b),
        pdf=pdf, cdf=cdf, sf=sf, quantile=quantile,
        pdf_edge_exponents=(0.0, 0.0),
        closed_forms={
            "extropy": -1.0 / (2.0 * w),
            "weighted_extropy": -(b + a) / (4.0 * w),
        })


def gamma_dist(alpha: float, beta: float) -> UnivariateDistribution:
    if not alpha > 0:
        raise ValidationError("gamma requires alpha > 0")
    if not beta > 0:
        raise ValidationError("gamma requires beta > 0 (scale)")
    al, sc = float(alpha), float(beta)
    lognorm = math.lgamma(al) + al * math.log(sc)

    def pdf(x):
        x = np.asarray(x, dtype=float)
        pos = x > 0.0
        xs = np.where(pos, x, 1.0)
        return np.where(pos, np.exp((al - 1.0) * np.log(xs) - xs / sc - lognorm), 0.0)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        return special.gammainc(al, np.maximum(x, 0.0) / sc)

    def sf(x):
        x = np.asarray(x, dtype=float)
        return special.gammaincc(al, np.maximum(x, 0.0) / sc)

    def quantile(p):
        hi = sc * (al + 1.0)
        while float(special.gammainc(al, hi / sc)) < 1.0 - 1e-15:
            hi *= 2.0
        return _quantile_by_bisection(cdf, 0.0, hi, p)

    # J^w(gamma) = -Gamma(2a) / (2**(2a+1) Gamma(a)**2), free of the scale.
    jw = -math.exp(math.lgamma(2 * al) - (2 * al + 1) * math.log(2.0)
                   - 2 * math.lgamma(al))
    return UnivariateDistribution(
        family="gamma", params={"alpha": al, "beta": sc}, support=(0.0, math.inf),
        pdf=pdf, cdf=cdf, sf=sf, quantile=quantile,
        pdf_edge_exponents=(al - 1.0, None),
        closed_forms={"weighted_extropy": jw})


def beta_dist(alpha: float, beta: float) -> UnivariateDistribution:
    if not alpha > 0:
        raise ValidationError("beta requires alpha > 0")
    if not beta > 0:
        raise ValidationError("beta requires beta > 0")
    al, be = float(alpha), float(beta)
    logb = math.lgamma(al) + math.lgamma(be) - math.lgamma(al + be)

    def pdf(x):
        x = np.asarray(x, dtype=float)
        inside = (x > 0.0) & (x < 1.0)
        xs = np.where(inside, x, 0.5)
        lp = (al - 1.0) * np.log(xs) + (be - 1.0) * np.log1p(-xs) - logb
        return np.where(inside, np.exp(lp), 0.0)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        return special.betainc(al, be, np.clip(x, 0.0, 1.0))

    def sf(x):
        x = np.asarray(x, dtype=float)
        return special.betainc(be, al, np.clip(1.0 - x, 0.0, 1.0))

    def quantile(p):
        return _quantile_by_bisection(cdf, 0.0, 1.0, p)

    # Divergent weighted extropy on the closed interval beta <= 1/2.
    if be > 0.5:
        jw = -beta2(2 * al, 2 * be - 1) / (2.0 * beta2(al, be) ** 2)
    else:
        jw = -math.inf
    return UnivariateDistribution(
        family="beta", params={"alpha": al, "beta": be}, support=(0.0, 1.0),
        pdf=pdf, cdf=cdf, sf=sf, quantile=quantile,
        pdf_edge_exponents=(al - 1.0, be - 1.0),
        closed_forms={"weighted_extropy": jw})


def piecewise(weights) -> UnivariateDistribution:
    c = np.asarray(weights, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValidationError("piecewise requires a non-empty weight vector")
    if np.any(c < 0.0):
        raise ValidationError("piecewise requires non-negative weights")
    if abs(float(c.sum()) - 1.0) > 1e-9:
        raise ValidationError("piecewise weights must sum to 1 within 1e-9")
    n = c.size
    cum = np.concatenate([[0.0], np.cumsum(c)])
    cum[-1] = 1.0

    def pdf(x):
        x = np.asarray(x, dtype=float)
        k = np.clip(np.floor(x).astype(int), 0, n - 1)
        return np.where((x >= 0.0) & (x < n), c[k], 0.0)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, 0.0, n)
        k = np.clip(np.floor(xc).astype(int), 0, n - 1)
        return np.clip(cum[k] + c[k] * (xc - k), 0.0, 1.0)

    def sf(x):
        return 1.0 - cdf(x)

    def quantile(p):
        p = np.asarray(p, dtype=float)
        k = np.clip(np.searchsorted(cum, p, side="right") - 1, 0, n - 1)
        ck = np.where(c[k] > 0.0, c[k], 1.0)
        return np.clip(k + (p - cum[k]) / ck, 0.0, float(n))

    ks = np.arange(1, n + 1)
    return UnivariateDistribution(
        family="piecewise", params={"weights": tuple(float(v) for v in c)},
        support=(0.0, float(n)),
        pdf=pdf, cdf=cdf, sf=sf, quantile=quantile,
        pdf_edge_exponents=(0.0, 0.0),
        closed_forms={
            "extropy": -0.5 * float(np.sum(c**2)),
            "weighted_extropy": -0.25 * float(np.sum(c**2 * (2 * ks - 1))),
        })


def pareto(shape: float, scale: float) -> UnivariateDistribution:
    if not shape > 0:
        raise ValidationError("pareto requires shape > 0")
    if not scale > 0:
        raise ValidationError("pareto requires scale > 0")
    k, sig = float(shape), float(scale)

    def pdf(x):
        x = np.asarray(x, dtype=float)
        xs = np.where(x >= sig, x, sig)
        return np.where(x >= sig, k * sig**k * xs ** (-k - 1.0), 0.0)

    def sf(x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= sig, (sig / np.where(x >= sig, x, sig)) ** k, 1.0)

    def cdf(x):
        return 1.0 - sf(x)

    def quantile(p):
        p = np.asarray(p, dtype=float)
        return sig * (1.0 - p) ** (-1.0 / k)

    return UnivariateDistribution(
        family="pareto", params={"shape": k, "scale": sig},
        support=(sig, math.inf),
        pdf=pdf, cdf=cdf, sf=sf, quantile=quantile,
        pdf_edge_exponents=(0.0, -(k + 1.0)),
        sf_tail_exponent=-k)


def tabulated(grid) -> UnivariateDistribution:
    pts = np.asarray(grid, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValidationError("tabulated requires a grid of at least two (x, f) pairs")
    x = pts[:, 0]
    f = pts[:, 1]
    if np.any(np.diff(x) <= 0.0):
        raise ValidationError("tabulated grid abscissae must be strictly increasing")
    if x[0] < 0.0:
        raise ValidationError("tabulated support must be non-negative")
    if np.any(f < 0.0):
        raise ValidationError("tabulated density values must be non-negative")
    mass = float(np.trapezoid(f, x))
    if not mass > 0.0:
        raise ValidationError("tabulated density must have positive mass")
    f = f / mass  # renormalize away user rounding error
    # Trapezoid cumulative is exact for the linear interpolant.
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(x))])
    cum[-1] = 1.0

    def pdf(q):
        q = np.asarray(q, dtype=float)
        return np.where((q >= x[0]) & (q <= x[-1]), np.interp(q, x, f), 0.0)

    def cdf(q):
        q = np.asarray(q, dtype=float)
        qc = np.clip(q, x[0], x[-1])
        i = np.clip(np.searchsorted(x, qc, side="right") - 1, 0, x.size - 2)
        dx = qc - x[i]
        slope = (f[i + 1] - f[i]) / (x[i + 1] - x[i])
        return np.clip(cum[i] + f[i] * dx + 0.5 * slope * dx**2, 0.0, 1.0)

    def sf(q):
        return 1.0 - cdf(q)

    def quantile(p):
        return _quantile_by_bisection(cdf, float(x[0]), float(x[-1]), p)

    return UnivariateDistribution(
        family="tabulated", params={"n_knots": int(x.size)},
        support=(float(x[0]), float(x[-1])),
        pdf=pdf, cdf=cdf, sf=sf, quantile=quantile,
        pdf_edge_exponents=(0.0, 0.0))


_FAMILY_PARAMS = {
    "exponential": ("rate",),
    "uniform": ("a", "b"),
    "gamma": ("alpha", "beta"),
    "beta": ("alpha", "beta"),
    "piecewise": ("weights",),
    "pareto": ("shape", "scale"),
}

_BUILDERS = {
    "exponential": exponential,
    "uniform": uniform,
    "gamma": gamma_dist,
    "beta": beta_dist,
    "piecewise": piecewise,
    "pareto": pareto,
}


def make_distribution(spec: Mapping) -> UnivariateDistribution:
    """Build a catalog member from a specification document.

    Shape: ``{"family": "...", "params": {...}}`` for parametric families,
    or ``{"family": "tabulated", "grid": [[x, f], ...]}``.
    """
    if not isinstance(spec, Mapping) or "family" not in spec:
        raise ValidationError("distribution spec must be a mapping with a 'family' key")
    family = spec["family"]
    if family == "tabulated":
        if "grid" not in spec:
            raise ValidationError("tabulated spec requires a 'grid' of (x, f) pairs")
        return tabulated(spec["grid"])
    if family not in _BUILDERS:
        known = ", ".join(sorted([*_BUILDERS, "tabulated"]))
        raise ValidationError(f"unknown family {family!r}; known families: {known}")
    wanted = _FAMILY_PARAMS[family]
    params = spec.get("params", {})
    missing = [k for k in wanted if k not in params]
    if missing:
        raise ValidationError(f"{family} spec missing params: {', '.join(missing)}")
    extra = [k for k in params if k not in wanted]
    if extra:
        raise ValidationError(f"{family} spec has unknown params: {', '.join(extra)}")
    return _BUILDERS[family](**{k: params[k] for k in wanted})


def closed_form(dist: UnivariateDistribution, measure_id: str,
                t: float | None = None) -> float | None:
    """Analytic value of a measure when the catalog carries one, else None."""
    entry = dist.closed_forms.get(measure_id)
    if entry is None:
        return None
    if callable(entry):
        return None if t is None else float(entry(t))
    return float(entry)
