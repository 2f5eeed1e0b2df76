"""Bivariate Archimedean and fundamental copulas.

All evaluation functions are vectorised over numpy arrays and return a plain
``float`` when every argument is scalar.  The Archimedean families follow the
usual generator parameterisations::

    Clayton  phi(t) = (t**-theta - 1) / theta          theta in [-1, inf) \\ {0}
    Frank    phi(t) = -log(expm1(-theta t) / expm1(-theta))   theta != 0
    Gumbel   phi(t) = (-log t)**theta                  theta in [1, inf)
    Joe      phi(t) = -log(1 - (1 - t)**theta)         theta in [1, inf)

Closed forms are written with ``expm1``/``log1p`` so that parameters close to
the independence limit and very large ``|theta|`` stay accurate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# |theta| below this is evaluated as the independence copula (Clayton, Frank).
INDEPENDENCE_EPS = 1e-8


class Family(str, enum.Enum):
    CLAYTON = "clayton"
    FRANK = "frank"
    GUMBEL = "gumbel"
    JOE = "joe"
    INDEPENDENCE = "pi"
    COMONOTONE = "cplus"
    COUNTERMONOTONE = "cminus"

    @property
    def archimedean(self) -> bool:
        return self in ARCHIMEDEAN

    @property
    def fundamental(self) -> bool:
        return not self.archimedean


ARCHIMEDEAN = frozenset({Family.CLAYTON, Family.FRANK, Family.GUMBEL, Family.JOE})


def validate(spec: "CopulaSpec") -> "CopulaSpec":
    """Return ``spec`` unchanged if its parameter lies in the family domain.

    Raises :class:`DomainError` otherwise.  Fundamental copulas ignore theta.
    """
    fam, theta = spec.family, spec.theta
    if fam.fundamental:
        return spec
    if theta is None or not isinstance(theta, (int, float)) or not math.isfinite(theta):
        raise DomainError(fam.value, theta)
    if fam is Family.CLAYTON:
        ok = theta >= -1.0 and theta != 0.0
    elif fam is Family.FRANK:
        ok = theta != 0.0
    else:
        ok = theta >= 1.0
    if not ok:
        raise DomainError(fam.value, theta)
    return spec


@dataclass(frozen=True)
class CopulaSpec:
    """A copula family together with its dependence parameter."""

    family: Family
    theta: float | None = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if fam.fundamental:
            object.__setattr__(self, "theta", None)
        elif self.theta is not None and not isinstance(self.theta, bool):
            object.__setattr__(self, "theta", float(self.theta))
        validate(self)

    @property
    def effective_family(self) -> Family:
        """Family actually evaluated, after collapsing degenerate parameters to Pi."""
        fam, theta = self.family, self.theta
        if fam in (Family.CLAYTON, Family.FRANK) and abs(theta) < INDEPENDENCE_EPS:
            return Family.INDEPENDENCE
        if fam in (Family.GUMBEL, Family.JOE) and theta == 1.0:
            return Family.INDEPENDENCE
        return fam

    def __str__(self):
        if self.family.fundamental:
            return self.family.value
        return f"{self.family.value}:{self.theta:.10g}"


# Convenience constructors
PI = CopulaSpec(Family.INDEPENDENCE)
C_PLUS = CopulaSpec(Family.COMONOTONE)
C_MINUS = CopulaSpec(Family.COUNTERMONOTONE)


def clayton(theta):
    return CopulaSpec(Family.CLAYTON, theta)


def frank(theta):
    return CopulaSpec(Family.FRANK, theta)


def gumbel(theta):
    return CopulaSpec(Family.GUMBEL, theta)


def joe(theta):
    return CopulaSpec(Family.JOE, theta)


def _result(arr, *args):
    if all(np.ndim(a) == 0 for a in args):
        return float(arr)
    return arr


def _require_archimedean(spec, what):
    if not spec.family.archimedean:
        raise DomainError(spec.family.value, spec.theta,
                          f"{spec.family.value} copula has no {what}")


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def generator(spec: CopulaSpec, t):
    """Archimedean generator phi_theta(t) on [0, 1]."""
    _require_archimedean(spec, "generator")
    t = np.asarray(t, dtype=float)
    th = spec.theta
    fam = spec.effective_family
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.INDEPENDENCE:
            out = -np.log(t)
        elif fam is Family.CLAYTON:
            out = np.expm1(-th * np.log(t)) / th
        elif fam is Family.FRANK:
            out = _frank_generator(th, t)
        elif fam is Family.GUMBEL:
            out = (-np.log(t)) ** th
        else:
            out = -np.log1p(-((1.0 - t) ** th))
    return _result(out, t)


def _frank_generator(th, t):
    near_zero = -np.log(np.expm1(-th * t) / math.expm1(-th))
    # near t = 1 write phi = -log1p(-r) with r = (e^{-th t} - e^{-th}) / (1 - e^{-th})
    if th > 0:
        r = np.exp(-th) * np.expm1(th * (1.0 - t)) / -math.expm1(-th)
    else:
        r = np.expm1(th * (1.0 - t)) / math.expm1(th)
    return np.where(t < 0.5, near_zero, -np.log1p(-r))


def generator_derivative(spec: CopulaSpec, t):
    """First derivative of the generator."""
    _require_archimedean(spec, "generator")
    t = np.asarray(t, dtype=float)
    th = spec.theta
    fam = spec.effective_family
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.INDEPENDENCE:
            out = -1.0 / t
        elif fam is Family.CLAYTON:
            out = -(t ** (-th - 1.0))
        elif fam is Family.FRANK:
            out = -th / np.expm1(th * t)
        elif fam is Family.GUMBEL:
            out = -th * (-np.log(t)) ** (th - 1.0) / t
        else:
            w = (1.0 - t) ** th
            out = -th * (1.0 - t) ** (th - 1.0) / (1.0 - w)
    return _result(out, t)


def generator_second_derivative(spec: CopulaSpec, t):
    """Second derivative of the generator."""
    _require_archimedean(spec, "generator")
    t = np.asarray(t, dtype=float)
    th = spec.theta
    fam = spec.effective_family
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.INDEPENDENCE:
            out = 1.0 / t**2
        elif fam is Family.CLAYTON:
            out = (th + 1.0) * t ** (-th - 2.0)
        elif fam is Family.FRANK:
            e = np.expm1(th * t)
            out = th**2 * (e + 1.0) / e**2
        elif fam is Family.GUMBEL:
            L = -np.log(t)
            out = th * L ** (th - 2.0) * (th - 1.0 + L) / t**2
        else:
            s = 1.0 - t
            w = s**th
            w1 = -th * s ** (th - 1.0)
            w2 = th * (th - 1.0) * s ** (th - 2.0)
            out = (w2 * (1.0 - w) + w1**2) / (1.0 - w) ** 2
    return _result(out, t)


def generator_at_zero(spec: CopulaSpec) -> float:
    """phi(0); finite only for Clayton with negative theta."""
    _require_archimedean(spec, "generator")
    if spec.effective_family is Family.CLAYTON and spec.theta < 0:
        return -1.0 / spec.theta
    return math.inf


def generator_pseudo_inverse(spec: CopulaSpec, x):
    """phi^[-1](x): the inverse on [0, phi(0)] and zero beyond."""
    _require_archimedean(spec, "generator")
    x = np.asarray(x, dtype=float)
    th = spec.theta
    fam = spec.effective_family
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.INDEPENDENCE:
            out = np.exp(-x)
        elif fam is Family.CLAYTON:
            base = th * x
            out = np.where(base > -1.0, np.exp(-np.log1p(np.maximum(base, -1.0)) / th), 0.0)
        elif fam is Family.FRANK:
            if th > 0:
                # 1 + e^-x (e^-th - 1) rewritten as a sum of positive terms
                out = -np.log(-np.expm1(-x) + np.exp(-x - th)) / th
            else:
                out = -np.log1p(np.exp(-x) * math.expm1(-th)) / th
        elif fam is Family.GUMBEL:
            out = np.exp(-(x ** (1.0 / th)))
        else:
            out = 1.0 - (-np.expm1(-x)) ** (1.0 / th)
    return _result(out, x)


# ---------------------------------------------------------------------------
# Distribution functions
# ---------------------------------------------------------------------------

def _clayton_cdf(th, u, v):
    s = np.expm1(-th * np.log(u)) + np.expm1(-th * np.log(v))
    base = 1.0 + s
    return np.where(base > 0.0, np.exp(-np.log1p(np.maximum(s, -1.0)) / th), 0.0)


def _frank_log_n(th, u, v):
    # log of (1 - e^-th) - (1 - e^{-th u})(1 - e^{-th v}) for th > 0, written as
    # e^{-th a}(1 - e^{-th b}) + e^{-th}(e^{th(1-b)} - 1) with both terms >= 0;
    # a = min(u, v), b = max(u, v) keeps the result exactly symmetric
    a = np.minimum(u, v)
    b = np.maximum(u, v)
    return np.logaddexp(-th * a + np.log(-np.expm1(-th * b)),
                        -th + np.log(np.expm1(th * (1.0 - b))))


def _frank_cdf(th, u, v):
    if th > 1.0:
        return -(_frank_log_n(th, u, v) - math.log(-math.expm1(-th))) / th
    if th > 0:
        a = np.expm1(-th * u)
        b = np.expm1(-th * v)
        return -np.log1p(a * b / math.expm1(-th)) / th
    k = -th
    la = np.log(-np.expm1(-k * u))
    lb = np.log(-np.expm1(-k * v))
    L = (k * (u + v - 1.0) - math.log(-math.expm1(-k))) + (la + lb)
    return np.logaddexp(0.0, L) / k


def _gumbel_cdf(th, u, v):
    x = -np.log(u)
    y = -np.log(v)
    hi = np.maximum(x, y)
    lo = np.minimum(x, y)
    ratio = np.where((hi > 0) & np.isfinite(hi), lo / np.where(hi > 0, hi, 1.0), 0.0)
    S = hi * (1.0 + ratio**th) ** (1.0 / th)
    return np.exp(-S)


def _joe_cdf(th, u, v):
    a = np.exp(th * np.log1p(-u))  # (1-u)^theta
    b = np.exp(th * np.log1p(-v))
    P = np.maximum(a, b) + np.minimum(a, b) * (1.0 - np.maximum(a, b))
    return -np.expm1(np.log(P) / th)


def cdf(spec: CopulaSpec, u, v):
    """Copula distribution function C(u, v)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    fam = spec.effective_family
    th = spec.theta
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.INDEPENDENCE:
            out = u * v
        elif fam is Family.COMONOTONE:
            out = np.minimum(u, v)
        elif fam is Family.COUNTERMONOTONE:
            out = np.maximum(u + v - 1.0, 0.0)
        elif fam is Family.CLAYTON:
            out = _clayton_cdf(th, u, v)
        elif fam is Family.FRANK:
            out = _frank_cdf(th, u, v)
        elif fam is Family.GUMBEL:
            out = _gumbel_cdf(th, u, v)
        else:
            out = _joe_cdf(th, u, v)
        out = np.clip(out, 0.0, 1.0)
    return _result(out, u, v)


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------

def _clayton_density(th, u, v):
    lu, lv = np.log(u), np.log(v)
    s = np.expm1(-th * lu) + np.expm1(-th * lv)
    if th == -1.0:
        return np.zeros(np.broadcast(u, v).shape)
    logc = (math.log1p(th) + (-th - 1.0) * (lu + lv)
            + (-2.0 - 1.0 / th) * np.log1p(np.maximum(s, -1.0)))
    return np.where(1.0 + s > 0.0, np.exp(logc), 0.0)


def _frank_density(th, u, v):
    if th > 1.0:
        logc = (math.log(th) + math.log(-math.expm1(-th)) - th * (u + v)
                - 2.0 * _frank_log_n(th, u, v))
        return np.exp(logc)
    if th > 0:
        a = np.expm1(-th * u)
        b = np.expm1(-th * v)
        d = math.expm1(-th)
        return -th * d * np.exp(-th * (u + v)) / (d + a * b) ** 2
    k = -th
    E = np.exp(k * (u + v - 1.0))
    den = (np.exp(k * (u - 1.0)) + np.exp(k * (v - 1.0))) - E - 1.0
    out = k * -math.expm1(-k) * E / den**2
    return np.where(np.isfinite(out), out, 0.0)


def _gumbel_density(th, u, v):
    x = -np.log(u)
    y = -np.log(v)
    hi = np.maximum(x, y)
    lo = np.minimum(x, y)
    ratio = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
    S = hi * (1.0 + ratio**th) ** (1.0 / th)
    logc = (-S + np.log(S + th - 1.0) + (1.0 - 2.0 * th) * np.log(S)
            + (th - 1.0) * (np.log(x) + np.log(y)) + (x + y))
    return np.exp(logc)


def _joe_density(th, u, v):
    lub = np.log1p(-u)
    lvb = np.log1p(-v)
    a = np.exp(th * lub)  # (1-u)^theta
    b = np.exp(th * lvb)
    hi, lo = np.maximum(a, b), np.minimum(a, b)
    P = hi + lo * (1.0 - hi)  # 1 - (1-a)(1-b) without cancellation
    logc = ((-2.0 + 1.0 / th) * np.log(P) + (th - 1.0) * (lub + lvb)
            + np.log(th - 1.0 + P))
    return np.exp(logc)


def density(spec: CopulaSpec, u, v):
    """Copula probability density c(u, v), not truncated.

    Gumbel and Joe densities are set to 0 on the boundary of the unit square,
    Clayton with negative theta is 0 outside its support.
    """
    fam = spec.effective_family
    if fam in (Family.COMONOTONE, Family.COUNTERMONOTONE):
        raise DomainError(fam.value, None, f"{fam.value} copula is singular and has no density")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    th = spec.theta
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        if fam is Family.INDEPENDENCE:
            out = np.ones(np.broadcast(u, v).shape)
        elif fam is Family.CLAYTON:
            out = _clayton_density(th, u, v)
        elif fam is Family.FRANK:
            out = _frank_density(th, u, v)
        elif fam is Family.GUMBEL:
            out = _gumbel_density(th, u, v)
        else:
            out = _joe_density(th, u, v)
        if fam in (Family.GUMBEL, Family.JOE):
            edge = (u <= 0.0) | (u >= 1.0) | (v <= 0.0) | (v >= 1.0)
            out = np.where(edge, 0.0, out)
        out = np.where(np.isnan(out), 0.0, out)
    return _result(out, u, v)
