"""Copula graphons, clamped copula-density graphons and their tensor products.

A graphon here is an ordered tuple of components, each a copula paired with
the function used as kernel: its distribution function (``cdf``) or its
density truncated at one (``density``).  A single component is an ordinary
graphon on [0, 1]^2; several components form a tensor product in which every
node carries one latent coordinate per component and the edge probability is
the product of the per-coordinate kernels.

Descriptors use the grammar ``family[:theta][:cdf|:density]`` with factors
joined by ``*``, for example ``joe:2:density*gumbel:5:density``.  A ``?`` in
place of theta marks a free parameter (see :class:`GraphonTemplate`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import copulas
from .copulas import CopulaSpec, Family
from .errors import DimensionMismatch, DomainError, UsageError


class Kind(str, enum.Enum):
    CDF = "cdf"
    DENSITY = "density"


@dataclass(frozen=True)
class Component:
    spec: CopulaSpec
    kind: Kind = Kind.CDF

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.DENSITY and self.spec.family in (
                Family.COMONOTONE, Family.COUNTERMONOTONE):
            raise DomainError(self.spec.family.value, None,
                              f"{self.spec.family.value} copula has no density")

    def kernel(self, x, y):
        if self.kind is Kind.CDF:
            return copulas.cdf(self.spec, x, y)
        return np.minimum(copulas.density(self.spec, x, y), 1.0)

    @property
    def descriptor(self) -> str:
        return f"{self.spec}:{self.kind.value}"


@dataclass(frozen=True)
class Graphon:
    """Symmetric kernel on ([0,1]^s)^2 built from copula components."""

    components: tuple[Component, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise UsageError("a graphon needs at least one component")
        object.__setattr__(self, "components", comps)

    @property
    def latent_dim(self) -> int:
        return len(self.components)

    @property
    def kind(self) -> str:
        if self.latent_dim > 1:
            return "tensor"
        if self.components[0].kind is Kind.CDF:
            return "copula_cdf"
        return "copula_density_clamped"

    @property
    def descriptor(self) -> str:
        return "*".join(c.descriptor for c in self.components)

    def __str__(self):
        return self.descriptor

    def evaluate(self, x, y):
        """Edge probability between latent positions ``x`` and ``y``.

        For ``latent_dim == 1`` the arguments are latent values (scalars or
        arrays).  Otherwise the last axis must have length ``latent_dim``.
        """
        s = self.latent_dim
        if s == 1:
            return self.components[0].kernel(x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.ndim == 0 or y.ndim == 0 or x.shape[-1] != s or y.shape[-1] != s:
            raise DimensionMismatch(
                f"expected latent vectors of length {s}, got shapes {x.shape} and {y.shape}")
        out = self.components[0].kernel(x[..., 0], y[..., 0])
        for j in range(1, s):
            out = out * self.components[j].kernel(x[..., j], y[..., j])
        if np.ndim(out) == 0:
            return float(out)
        return out

    def kernel_block(self, X, Y):
        """Matrix of edge probabilities between rows of ``X`` (a, s) and ``Y`` (b, s)."""
        X = np.asarray(X, dtype=float).reshape(len(X), self.latent_dim)
        Y = np.asarray(Y, dtype=float).reshape(len(Y), self.latent_dim)
        out = None
        for j, comp in enumerate(self.components):
            k = comp.kernel(X[:, j, None], Y[None, :, j])
            out = k if out is None else out * k
        return out


def make_copula_graphon(spec: CopulaSpec) -> Graphon:
    return Graphon((Component(copulas.validate(spec), Kind.CDF),))


def make_density_graphon(spec: CopulaSpec) -> Graphon:
    return Graphon((Component(copulas.validate(spec), Kind.DENSITY),))


def make_tensor_graphon(components) -> Graphon:
    """Tensor product of two or more ``(spec, kind)`` components."""
    comps = []
    for item in components:
        if isinstance(item, Component):
            comps.append(item)
        elif isinstance(item, Graphon):
            comps.extend(item.components)
        else:
            spec, kind = item
            comps.append(Component(copulas.validate(spec), Kind(kind)))
    if len(comps) < 2:
        raise UsageError("a tensor graphon needs at least two components")
    return Graphon(tuple(comps))


# ---------------------------------------------------------------------------
# Descriptor parsing
# ---------------------------------------------------------------------------

FAMILY_ALIASES = {
    "clayton": Family.CLAYTON,
    "frank": Family.FRANK,
    "gumbel": Family.GUMBEL,
    "joe": Family.JOE,
    "pi": Family.INDEPENDENCE,
    "independence": Family.INDEPENDENCE,
    "cplus": Family.COMONOTONE,
    "comonotone": Family.COMONOTONE,
    "cminus": Family.COUNTERMONOTONE,
    "countermonotone": Family.COUNTERMONOTONE,
}

FREE = "?"


def _parse_factor(token: str):
    parts = token.strip().split(":")
    name = parts[0].strip().lower()
    if name not in FAMILY_ALIASES:
        raise UsageError(f"unknown copula family {parts[0]!r} in {token!r}")
    fam = FAMILY_ALIASES[name]
    rest = parts[1:]
    kind = Kind.CDF
    if rest and rest[-1].strip().lower() in (k.value for k in Kind):
        kind = Kind(rest.pop().strip().lower())
    if fam.fundamental:
        if rest:
            raise UsageError(f"{name} takes no parameter: {token!r}")
        return fam, None, kind
    if len(rest) != 1:
        raise UsageError(f"expected {name}:theta[:cdf|:density], got {token!r}")
    raw = rest[0].strip()
    if raw == FREE:
        return fam, FREE, kind
    try:
        theta = float(raw)
    except ValueError:
        raise UsageError(f"bad theta {raw!r} in {token!r}") from None
    return fam, theta, kind


@dataclass(frozen=True)
class GraphonTemplate:
    """A descriptor whose ``?`` slots are filled by a single free parameter.

    The first free slot receives ``theta``; each later slot receives
    ``theta - lag * k`` for the k-th additional slot.
    """

    factors: tuple[tuple[Family, object, Kind], ...]

    @property
    def free_slots(self) -> int:
        return sum(1 for _, th, _ in self.factors if th == FREE)

    @property
    def free_families(self):
        return [fam for fam, th, _ in self.factors if th == FREE]

    def bind(self, theta: float, lag: float = 0.0) -> Graphon:
        comps = []
        k = 0
        for fam, th, kind in self.factors:
            if th == FREE:
                th = theta - lag * k
                k += 1
            comps.append(Component(CopulaSpec(fam, th), kind))
        return Graphon(tuple(comps))

    @property
    def descriptor(self) -> str:
        out = []
        for fam, th, kind in self.factors:
            if fam.fundamental:
                out.append(f"{fam.value}:{kind.value}")
            elif th == FREE:
                out.append(f"{fam.value}:?:{kind.value}")
            else:
                out.append(f"{fam.value}:{th:.10g}:{kind.value}")
        return "*".join(out)


def parse_template(text: str) -> GraphonTemplate:
    tokens = [t for t in text.split("*")]
    if not text.strip() or any(not t.strip() for t in tokens):
        raise UsageError(f"empty factor in graphon descriptor {text!r}")
    factors = tuple(_parse_factor(t) for t in tokens)
    return GraphonTemplate(factors)


def parse_graphon(text: str) -> Graphon:
    """Parse a concrete descriptor such as ``gumbel:3:cdf`` or ``pi*pi``."""
    template = parse_template(text)
    if template.free_slots:
        raise UsageError(f"descriptor {text!r} has a free parameter '?'")
    return template.bind(0.0)
