"""Numeric model of the standard chart C^n x T^{k-n} x R^m.

The orbit map sends (z, t, y) to (|z_1|^2, ..., |z_n|^2, y).  A face-
preserving diffeomorphism of the orbit space is represented as a sequence
of primitive layers, each scaling one x-coordinate by exp(q) with q a
polynomial in the other variables, or shearing/scaling one y-coordinate.
The layer family is closed under composition (concatenation) and has exact
closed-form inverses, and it tracks the logarithm of every multiplier, so
the quotient Phi_i(x, y) / x_i is evaluated without ever dividing: its
value exp(L_i) is defined on the boundary x_i = 0 as well.

Lifted equivariant diffeomorphisms multiply each z_i by the square root of
that quotient and by a torus factor built from two angle-valued maps on the
orbit space; removable singularities at z_i = 0 are exact zeros.

Derivative checks use one-sided finite differences extrapolated over a
geometric step ladder.  Such numbers are evidence for or against
smoothness, never proof; reports say so explicitly.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

TWO_PI = 2.0 * math.pi


class LocalModelError(ValueError):
    pass


class CornerHypothesisError(LocalModelError):
    """The sampled function violates the corner-quotient hypotheses."""


class StepUnderflowError(LocalModelError):
    pass


# ---------------------------------------------------------------------------
# Points.


def _reduce_angle(a: float) -> float:
    r = math.fmod(a, TWO_PI)
    return r + TWO_PI if r < 0 else r


@dataclass(frozen=True)
class ModelPoint:
    """A point (z, t, y) of the chart; angles stored reduced mod 2*pi."""

    z: tuple[complex, ...]
    t: tuple[float, ...]
    y: tuple[float, ...]

    def __init__(self, z: Sequence[complex], t: Sequence[float], y: Sequence[float]):
        zt = tuple(complex(v) for v in z)
        tt = tuple(_reduce_angle(float(v)) for v in t)
        yt = tuple(float(v) for v in y)
        for v in zt:
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise LocalModelError(f"non-finite z entry {v!r}")
        if any(not math.isfinite(v) for v in tt + yt):
            raise LocalModelError("non-finite coordinate")
        object.__setattr__(self, "z", zt)
        object.__setattr__(self, "t", tt)
        object.__setattr__(self, "y", yt)


@dataclass(frozen=True)
class OrbitPoint:
    """A point of the orbit space R^n_{>=0} x R^m."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __init__(self, x: Sequence[float], y: Sequence[float]):
        xt = tuple(float(v) for v in x)
        yt = tuple(float(v) for v in y)
        if any(v < 0 for v in xt):
            raise LocalModelError(f"negative x coordinate in {xt}")
        if any(not math.isfinite(v) for v in xt + yt):
            raise LocalModelError("non-finite coordinate")
        object.__setattr__(self, "x", xt)
        object.__setattr__(self, "y", yt)


def orbit_map(p: ModelPoint) -> OrbitPoint:
    return OrbitPoint(
        tuple(v.real * v.real + v.imag * v.imag for v in p.z), p.y
    )


def standard_section(q: OrbitPoint, torus_dim: int) -> ModelPoint:
    """The square-root section: x maps to (sqrt(x), identity, y)."""
    if torus_dim < 0:
        raise LocalModelError("torus dimension must be nonnegative")
    return ModelPoint(
        tuple(complex(math.sqrt(v), 0.0) for v in q.x),
        (0.0,) * torus_dim,
        q.y,
    )


def torus_act(angles: Sequence[float], p: ModelPoint, n: int) -> ModelPoint:
    """Standard action of a k-torus element given by angles: the first n
    rotate the z coordinates, the rest translate the t coordinates."""
    if len(angles) != n + len(p.t) or len(p.z) != n:
        raise LocalModelError("angle count does not match the chart")
    z = tuple(v * cmath.exp(1j * a) for v, a in zip(p.z, angles[:n]))
    t = tuple(tv + a for tv, a in zip(p.t, angles[n:]))
    return ModelPoint(z, t, p.y)


# ---------------------------------------------------------------------------
# Polynomials and primitive layers.


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: tuples of exponents over nvars variables."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], float], ...]

    def __init__(self, nvars: int, terms):
        items = []
        for exps, coeff in dict(terms).items():
            e = tuple(int(v) for v in exps)
            if len(e) != nvars or any(v < 0 for v in e):
                raise LocalModelError(f"bad exponent tuple {exps!r}")
            c = float(coeff)
            if not math.isfinite(c):
                raise LocalModelError("non-finite coefficient")
            if c != 0.0:
                items.append((e, c))
        object.__setattr__(self, "nvars", int(nvars))
        object.__setattr__(self, "terms", tuple(sorted(items)))

    def __call__(self, values: Sequence[float]) -> float:
        if len(values) != self.nvars:
            raise LocalModelError("wrong number of variables")
        total = 0.0
        for exps, coeff in self.terms:
            prod = coeff
            for v, e in zip(values, exps):
                if e:
                    prod *= v ** e
            total += prod
        return total

    def negate(self) -> "Polynomial":
        return Polynomial(self.nvars, [(e, -c) for e, c in self.terms])

    def depends_on(self, var: int) -> bool:
        return any(e[var] for e, _ in self.terms)

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, [])

    @classmethod
    def constant(cls, nvars: int, c: float) -> "Polynomial":
        return cls(nvars, [((0,) * nvars, c)])


@dataclass(frozen=True)
class XScaleLayer:
    """x_i gets multiplied by exp(q(x, y)); q must not involve x_i itself,
    which makes the layer a diffeomorphism with an exact inverse."""

    index: int
    q: Polynomial

    def inverted(self) -> "XScaleLayer":
        return XScaleLayer(self.index, self.q.negate())


@dataclass(frozen=True)
class YShearLayer:
    """y_j gets p(x, y) added; p must not involve y_j itself."""

    index: int
    p: Polynomial

    def inverted(self) -> "YShearLayer":
        return YShearLayer(self.index, self.p.negate())


@dataclass(frozen=True)
class YScaleLayer:
    index: int
    factor: float

    def inverted(self) -> "YScaleLayer":
        return YScaleLayer(self.index, 1.0 / self.factor)


Layer = XScaleLayer | YShearLayer | YScaleLayer


@dataclass(frozen=True)
class FaceDiffeo:
    """A face-preserving diffeomorphism of R^n_{>=0} x R^m as layers."""

    n: int
    m: int
    layers: tuple[Layer, ...]

    def __init__(self, n: int, m: int, layers: Sequence[Layer] = ()):
        if n < 0 or m < 0:
            raise LocalModelError("dimensions must be nonnegative")
        nv = n + m
        for layer in layers:
            if isinstance(layer, XScaleLayer):
                if not 0 <= layer.index < n:
                    raise LocalModelError(f"x index {layer.index} out of range")
                if layer.q.nvars != nv or layer.q.depends_on(layer.index):
                    raise LocalModelError(
                        "x-scale exponent must be a polynomial in the other "
                        "variables only"
                    )
            elif isinstance(layer, YShearLayer):
                if not 0 <= layer.index < m:
                    raise LocalModelError(f"y index {layer.index} out of range")
                if layer.p.nvars != nv or layer.p.depends_on(n + layer.index):
                    raise LocalModelError(
                        "y-shear must be a polynomial in the other variables only"
                    )
            elif isinstance(layer, YScaleLayer):
                if not 0 <= layer.index < m:
                    raise LocalModelError(f"y index {layer.index} out of range")
                if layer.factor == 0.0 or not math.isfinite(layer.factor):
                    raise LocalModelError("y-scale factor must be nonzero finite")
            else:
                raise LocalModelError(f"unknown layer {layer!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "layers", tuple(layers))

    def apply_with_logs(
        self, x: Sequence[float], y: Sequence[float]
    ) -> tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]:
        """Image of (x, y) plus the accumulated log-multiplier of each x_i,
        so Phi_i(x, y) == x_i * exp(logs[i]) holds exactly."""
        if len(x) != self.n or len(y) != self.m:
            raise LocalModelError("point does not match the chart dimensions")
        xs = list(x)
        ys = list(y)
        logs = [0.0] * self.n
        for layer in self.layers:
            state = xs + ys
            if isinstance(layer, XScaleLayer):
                val = layer.q(state)
                logs[layer.index] += val
                xs[layer.index] *= math.exp(val)
            elif isinstance(layer, YShearLayer):
                ys[layer.index] += layer.p(state)
            else:
                ys[layer.index] *= layer.factor
        return tuple(xs), tuple(ys), tuple(logs)

    def apply(self, q: OrbitPoint) -> OrbitPoint:
        xs, ys, _ = self.apply_with_logs(q.x, q.y)
        return OrbitPoint(xs, ys)

    def inverse(self) -> "FaceDiffeo":
        return FaceDiffeo(
            self.n, self.m, tuple(l.inverted() for l in reversed(self.layers))
        )

    def after(self, other: "FaceDiffeo") -> "FaceDiffeo":
        """self composed after other (other runs first)."""
        if (self.n, self.m) != (other.n, other.m):
            raise LocalModelError("chart dimensions differ")
        return FaceDiffeo(self.n, self.m, other.layers + self.layers)

    @classmethod
    def identity(cls, n: int, m: int) -> "FaceDiffeo":
        return cls(n, m, ())


@dataclass(frozen=True)
class TorusMap:
    """An angle-valued map on the orbit space, T^k-valued pointwise.

    Stored as a sum of terms, each a k-tuple of polynomials evaluated after
    an optional prefix of layers; that closure makes composition of lifted
    diffeomorphisms exact.
    """

    k: int
    n: int
    m: int
    terms: tuple[tuple[tuple[Layer, ...], tuple[Polynomial, ...], int], ...] = ()

    def angles(self, x: Sequence[float], y: Sequence[float]) -> tuple[float, ...]:
        total = [0.0] * self.k
        for prefix, polys, sign in self.terms:
            if prefix:
                xs, ys, _ = FaceDiffeo(self.n, self.m, prefix).apply_with_logs(x, y)
                state = list(xs) + list(ys)
            else:
                state = list(x) + list(y)
            for i, poly in enumerate(polys):
                total[i] += sign * poly(state)
        return tuple(total)

    def plus(self, other: "TorusMap") -> "TorusMap":
        self._check(other)
        return TorusMap(self.k, self.n, self.m, self.terms + other.terms)

    def minus(self, other: "TorusMap") -> "TorusMap":
        self._check(other)
        negated = tuple((p, polys, -s) for p, polys, s in other.terms)
        return TorusMap(self.k, self.n, self.m, self.terms + negated)

    def precomposed(self, phi: FaceDiffeo) -> "TorusMap":
        terms = tuple(
            (phi.layers + prefix, polys, sign) for prefix, polys, sign in self.terms
        )
        return TorusMap(self.k, self.n, self.m, terms)

    def _check(self, other: "TorusMap") -> None:
        if (self.k, self.n, self.m) != (other.k, other.n, other.m):
            raise LocalModelError("torus map shapes differ")

    @classmethod
    def from_polys(cls, k: int, n: int, m: int, polys: Sequence[Polynomial]) -> "TorusMap":
        if len(polys) != k:
            raise LocalModelError("need one angle polynomial per torus factor")
        if any(p.nvars != n + m for p in polys):
            raise LocalModelError("angle polynomials must live on the orbit space")
        return cls(k, n, m, (((), tuple(polys), 1),))

    @classmethod
    def identity(cls, k: int, n: int, m: int) -> "TorusMap":
        return cls(k, n, m, ())


@dataclass(frozen=True)
class SmoothMapSpec:
    """The data of an equivariant chart diffeomorphism: a face-preserving
    orbit-space map and two torus-valued maps (the section twists)."""

    n: int
    k: int
    m: int
    phi: FaceDiffeo
    f1: TorusMap
    f2: TorusMap

    def __post_init__(self) -> None:
        if not (0 <= self.n <= self.k):
            raise LocalModelError("need 0 <= n <= k")
        if (self.phi.n, self.phi.m) != (self.n, self.m):
            raise LocalModelError("orbit map dimensions disagree")
        for f in (self.f1, self.f2):
            if (f.k, f.n, f.m) != (self.k, self.n, self.m):
                raise LocalModelError("torus map dimensions disagree")

    @classmethod
    def identity(cls, n: int, k: int, m: int) -> "SmoothMapSpec":
        return cls(
            n,
            k,
            m,
            FaceDiffeo.identity(n, m),
            TorusMap.identity(k, n, m),
            TorusMap.identity(k, n, m),
        )

    def compose_after(self, first: "SmoothMapSpec") -> "SmoothMapSpec":
        """Data of the composition: self applied after first."""
        if (self.n, self.k, self.m) != (first.n, first.k, first.m):
            raise LocalModelError("chart dimensions differ")
        phi = self.phi.after(first.phi)
        f1 = first.f1.plus(self.f1.minus(first.f2).precomposed(first.phi))
        return SmoothMapSpec(self.n, self.k, self.m, phi, f1, self.f2)

    def inverse(self) -> "SmoothMapSpec":
        return SmoothMapSpec(
            self.n, self.k, self.m, self.phi.inverse(), self.f2, self.f1
        )


def lift_diffeo(spec: SmoothMapSpec, p: ModelPoint) -> ModelPoint:
    """Evaluate the lifted equivariant diffeomorphism at a chart point.

    Each z_i is scaled by sqrt(Phi_i / x_i) through the exact log-multiplier
    (never by division, so z_i = 0 stays exactly 0) and rotated by the
    angle difference of the two torus maps; t is translated; y follows the
    orbit-space map.
    """
    if len(p.z) != spec.n or len(p.t) != spec.k - spec.n or len(p.y) != spec.m:
        raise LocalModelError("point does not match the spec dimensions")
    x = tuple(v.real * v.real + v.imag * v.imag for v in p.z)
    x2, y2, logs = spec.phi.apply_with_logs(x, p.y)
    for xi, xi2 in zip(x, x2):
        if (xi == 0.0) != (xi2 == 0.0):
            raise LocalModelError("face preservation violated at runtime")
    a1 = spec.f1.angles(x, p.y)
    a2 = spec.f2.angles(x2, y2)
    theta = tuple(b - a for a, b in zip(a1, a2))
    z = tuple(
        v * math.exp(0.5 * lg) * cmath.exp(1j * th)
        for v, lg, th in zip(p.z, logs, theta[: spec.n])
    )
    t = tuple(tv + th for tv, th in zip(p.t, theta[spec.n :]))
    return ModelPoint(z, t, y2)


def section_point(spec: SmoothMapSpec, which: int, q: OrbitPoint) -> ModelPoint:
    """The twisted section s_i(q) = f_i(q) . s_0(q) for i in {1, 2}."""
    f = spec.f1 if which == 1 else spec.f2
    base = standard_section(q, spec.k - spec.n)
    return torus_act(f.angles(q.x, q.y), base, spec.n)


# ---------------------------------------------------------------------------
# Distances.


def angle_distance(a: float, b: float) -> float:
    d = abs(_reduce_angle(a) - _reduce_angle(b))
    return min(d, TWO_PI - d)


def model_point_distance(p: ModelPoint, q: ModelPoint) -> float:
    if len(p.z) != len(q.z) or len(p.t) != len(q.t) or len(p.y) != len(q.y):
        raise LocalModelError("points live in different charts")
    out = 0.0
    for a, b in zip(p.z, q.z):
        out = max(out, abs(a - b))
    for a, b in zip(p.t, q.t):
        out = max(out, angle_distance(a, b))
    for a, b in zip(p.y, q.y):
        out = max(out, abs(a - b))
    return out


def orbit_point_distance(p: OrbitPoint, q: OrbitPoint) -> float:
    out = 0.0
    for a, b in zip(p.x + p.y, q.x + q.y):
        out = max(out, abs(a - b))
    return out


# ---------------------------------------------------------------------------
# Corner quotient and even substitution.


def _richardson_ladder(samples: list[float]) -> list[float]:
    """Neville extrapolation diagonal for values at steps h0 / 2^j, assuming
    an error expansion in integer powers of h."""
    rows = [samples[0:1]]
    for j in range(1, len(samples)):
        prev = rows[-1]
        row = [samples[j]]
        for mth in range(1, j + 1):
            factor = 2.0 ** mth
            row.append(row[mth - 1] + (row[mth - 1] - prev[mth - 1]) / (factor - 1.0))
        rows.append(row)
    return [row[-1] for row in rows]


def _boundary_derivative(
    f: Callable[[float, tuple[float, ...]], float],
    y: tuple[float, ...],
    h0: float = 1e-2,
    levels: int = 8,
) -> float:
    """d f / d x at (0, y) for f with f(0, y) = 0, via the ratio f(h)/h.

    The ratio equals the central second difference of the even substitution
    F(u) = f(u^2, y) divided by two, and has a plain power-series error in
    h, so Richardson over a geometric ladder converges fast.
    """
    samples = []
    h = h0
    for _ in range(levels):
        if h == 0.0:
            raise StepUnderflowError("step ladder underflowed")
        samples.append(f(h, y) / h)
        h /= 2.0
    return _richardson_ladder(samples)[-1]


def corner_quotient(
    f: Callable[[float, tuple[float, ...]], float],
    x: float,
    y: Sequence[float] = (),
    exact_derivative: Optional[Callable[[tuple[float, ...]], float]] = None,
    check: bool = True,
) -> float:
    """The smooth extension g of f(x, y)/x across the boundary x = 0.

    Requires f(0, .) = 0, a positive x-derivative on the boundary, and
    positivity off it; violations found by sampling raise
    CornerHypothesisError.  The boundary value is the exact derivative when
    supplied, else an extrapolated one-sided ratio.
    """
    y = tuple(float(v) for v in y)
    if x < 0:
        raise LocalModelError("corner quotient needs x >= 0")
    if check:
        f0 = f(0.0, y)
        if abs(f0) > 1e-12:
            raise CornerHypothesisError(
                f"f(0, y) = {f0!r}, expected 0 on the boundary"
            )
        d0 = (
            exact_derivative(y)
            if exact_derivative is not None
            else _boundary_derivative(f, y)
        )
        if not d0 > 0.0:
            raise CornerHypothesisError(
                f"boundary derivative {d0!r} is not positive"
            )
        for probe in (1e-3, 0.1, 0.5, 1.0):
            val = f(probe, y)
            if not val > 0.0:
                raise CornerHypothesisError(
                    f"f({probe}, y) = {val!r} is not positive off the boundary"
                )
    if x > 0:
        return f(x, y) / x
    if exact_derivative is not None:
        return exact_derivative(y)
    return _boundary_derivative(f, y)


def even_substitution(
    f: Callable[[Sequence[float], Sequence[float]], float],
) -> Callable[[Sequence[float], Sequence[float]], float]:
    """F(x, y) = f(x^2, y): even in every x variable by construction."""

    def substituted(x: Sequence[float], y: Sequence[float]) -> float:
        return f(tuple(v * v for v in x), tuple(y))

    return substituted


# ---------------------------------------------------------------------------
# Smoothness probe.


@dataclass(frozen=True)
class DerivativeEstimate:
    order: int
    right: float
    left: Optional[float]
    spread: float


@dataclass(frozen=True)
class SmoothnessReport:
    at: float
    max_order: int
    estimates: tuple[DerivativeEstimate, ...]
    flags: tuple[str, ...]
    stable: bool
    note: str = (
        "finite-difference evidence for the stated orders; not a proof of "
        "smoothness"
    )

    def estimate(self, order: int) -> DerivativeEstimate:
        return self.estimates[order - 1]


_ORDER_BASE_STEP = {1: 1e-2, 2: 2e-2, 3: 5e-2, 4: 8e-2}
_LEVELS = 6
_MISMATCH_REL_TOL = 1e-3
_SPREAD_REL_TOL = 1e-3
_DIVERGENCE_FACTOR = 10.0


def _one_sided_quotients(
    func: Callable[[float], float], at: float, order: int, direction: int
) -> Optional[list[float]]:
    """Divided-difference quotients at steps h0/2^j, or None if the side is
    not evaluable (domain errors or non-finite values)."""
    binom = [math.comb(order, i) for i in range(order + 1)]
    h0 = _ORDER_BASE_STEP[order]
    out = []
    h = h0
    for _ in range(_LEVELS):
        if at + direction * h == at:
            raise StepUnderflowError("step ladder underflowed")
        total = 0.0
        try:
            for i in range(order + 1):
                val = func(at + direction * i * h)
                if not math.isfinite(val):
                    return None
                total += (-1.0) ** (order - i) * binom[i] * val
        except (ValueError, ArithmeticError, LocalModelError):
            return None
        quotient = total / (direction * h) ** order
        out.append(quotient)
        h /= 2.0
    return out


def smoothness_probe(
    func: Callable[[float], float], at: float, max_order: int
) -> SmoothnessReport:
    """Estimate one-sided derivatives of func at a boundary point.

    For each order up to max_order (at most 4: beyond that double precision
    drowns the differences), the right-hand derivative is extrapolated over
    a step ladder; when the left side is evaluable it is compared against
    the right.  Divergence across the ladder or a left/right mismatch is
    flagged as evidence against smoothness.
    """
    if not 1 <= max_order <= 4:
        raise LocalModelError("probe order must be between 1 and 4")
    estimates = []
    flags: list[str] = []
    for order in range(1, max_order + 1):
        right_raw = _one_sided_quotients(func, at, order, +1)
        if right_raw is None:
            flags.append(f"order-{order}: right side not evaluable")
            estimates.append(DerivativeEstimate(order, math.nan, None, math.inf))
            continue
        diag = _richardson_ladder(right_raw)
        right = diag[-1]
        scale = max(1.0, abs(right))
        spread = abs(diag[-1] - diag[-2]) / scale if len(diag) > 1 else 0.0
        magnitudes = [abs(v) for v in right_raw]
        if (
            magnitudes[-1] > _DIVERGENCE_FACTOR * max(1.0, magnitudes[0])
            and all(b >= a for a, b in zip(magnitudes, magnitudes[1:]))
        ):
            flags.append(
                f"order-{order}: one-sided differences diverge "
                f"({magnitudes[0]:.3g} -> {magnitudes[-1]:.3g})"
            )
        elif spread > _SPREAD_REL_TOL:
            flags.append(
                f"order-{order}: extrapolation unstable (spread {spread:.3g})"
            )
        left_raw = _one_sided_quotients(func, at, order, -1)
        left: Optional[float] = None
        if left_raw is not None:
            left = _richardson_ladder(left_raw)[-1]
            mism_scale = max(1.0, abs(right), abs(left))
            if abs(right - left) > _MISMATCH_REL_TOL * mism_scale:
                flags.append(
                    f"order-{order}: one-sided derivative mismatch "
                    f"(right {right:.6g}, left {left:.6g})"
                )
        estimates.append(DerivativeEstimate(order, right, left, spread))
    return SmoothnessReport(
        at=at,
        max_order=max_order,
        estimates=tuple(estimates),
        flags=tuple(flags),
        stable=not flags,
    )


# ---------------------------------------------------------------------------
# Random generation for the verification battery.


def random_polynomial(
    rng: random.Random,
    nvars: int,
    exclude: int = -1,
    max_degree: int = 2,
    max_terms: int = 2,
    scale: float = 0.3,
) -> Polynomial:
    terms = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        exps = [0] * nvars
        if nvars > 0:
            for _ in range(rng.randrange(0, max_degree + 1)):
                var = rng.randrange(nvars)
                if var == exclude:
                    continue
                exps[var] += 1
        coeff = rng.uniform(-scale, scale)
        key = tuple(exps)
        terms[key] = terms.get(key, 0.0) + coeff
    return Polynomial(nvars, terms)


def random_spec(rng: random.Random, n: int, k: int, m: int) -> SmoothMapSpec:
    nv = n + m
    layers: list[Layer] = []
    for i in range(n):
        layers.append(XScaleLayer(i, random_polynomial(rng, nv, exclude=i)))
    for j in range(m):
        if rng.random() < 0.7:
            layers.append(YShearLayer(j, random_polynomial(rng, nv, exclude=n + j)))
        else:
            layers.append(YScaleLayer(j, rng.choice([0.5, 2.0, -1.0, 1.5])))
    rng.shuffle(layers)
    phi = FaceDiffeo(n, m, layers)
    f1 = TorusMap.from_polys(
        k, n, m, [random_polynomial(rng, nv, scale=0.5) for _ in range(k)]
    )
    f2 = TorusMap.from_polys(
        k, n, m, [random_polynomial(rng, nv, scale=0.5) for _ in range(k)]
    )
    return SmoothMapSpec(n, k, m, phi, f1, f2)


def random_model_point(
    rng: random.Random, n: int, k: int, m: int, boundary_prob: float = 0.3
) -> ModelPoint:
    z = []
    for _ in range(n):
        if rng.random() < boundary_prob:
            z.append(0j)
        else:
            r = rng.uniform(0.2, 1.2)
            a = rng.uniform(0.0, TWO_PI)
            z.append(cmath.rect(r, a))
    t = [rng.uniform(0.0, TWO_PI) for _ in range(k - n)]
    y = [rng.uniform(-1.0, 1.0) for _ in range(m)]
    return ModelPoint(z, t, y)


def random_orbit_point(
    rng: random.Random, n: int, m: int, boundary_prob: float = 0.3
) -> OrbitPoint:
    x = [
        0.0 if rng.random() < boundary_prob else rng.uniform(0.05, 1.5)
        for _ in range(n)
    ]
    y = [rng.uniform(-1.0, 1.0) for _ in range(m)]
    return OrbitPoint(x, y)


# ---------------------------------------------------------------------------
# Verification battery (shared by tests and the command line).

EQUIVARIANCE_TOL = 1e-9
COVERING_TOL = 1e-9
SECTION_TOL = 1e-9
COMPOSITION_TOL = 1e-8
INVERSE_TOL = 1e-7


def section_compat_check(
    spec: SmoothMapSpec, samples: int, seed: int = 0
) -> dict:
    """Max discrepancy of (lift o s1) against (s2 o Phi) over random orbit
    points, boundary points included."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        q = random_orbit_point(rng, spec.n, spec.m)
        lhs = lift_diffeo(spec, section_point(spec, 1, q))
        rhs = section_point(spec, 2, spec.phi.apply(q))
        worst = max(worst, model_point_distance(lhs, rhs))
    return {"max_discrepancy": worst, "samples": samples, "tolerance": SECTION_TOL}


def run_local_checks(
    n: int, k: int, m: int, samples: int, seed: int, spec_count: int = 5
) -> dict:
    """Evaluate the whole contract battery on random specs and points.

    Returns a report dict with one entry per check: the observed maximum
    discrepancy, the documented tolerance, and a pass flag.
    """
    if not (0 <= n <= k) or m < 0:
        raise LocalModelError("need 0 <= n <= k and m >= 0")
    if samples < 1 or spec_count < 1:
        raise LocalModelError("need positive sample and spec counts")
    rng = random.Random(seed)

    worst = {
        "equivariance": 0.0,
        "covering": 0.0,
        "section_compat": 0.0,
        "composition": 0.0,
        "inverse": 0.0,
        "boundary_zeros": 0.0,
        "trivial_spec": 0.0,
    }
    probe_orders = []

    ident = SmoothMapSpec.identity(n, k, m)
    for _ in range(samples):
        p = random_model_point(rng, n, k, m)
        worst["trivial_spec"] = max(
            worst["trivial_spec"], model_point_distance(lift_diffeo(ident, p), p)
        )

    for _ in range(spec_count):
        spec = random_spec(rng, n, k, m)
        other = random_spec(rng, n, k, m)
        composed = other.compose_after(spec)
        inv = spec.inverse()
        for _ in range(samples):
            p = random_model_point(rng, n, k, m)
            image = lift_diffeo(spec, p)

            g = [rng.uniform(0.0, TWO_PI) for _ in range(k)]
            lhs = lift_diffeo(spec, torus_act(g, p, n))
            rhs = torus_act(g, image, n)
            worst["equivariance"] = max(
                worst["equivariance"], model_point_distance(lhs, rhs)
            )

            covered = spec.phi.apply(orbit_map(p))
            worst["covering"] = max(
                worst["covering"], orbit_point_distance(orbit_map(image), covered)
            )
            for zi, xi in zip(p.z, orbit_map(image).x):
                if zi == 0:
                    worst["boundary_zeros"] = max(worst["boundary_zeros"], abs(xi))

            two_step = lift_diffeo(other, image)
            one_step = lift_diffeo(composed, p)
            worst["composition"] = max(
                worst["composition"], model_point_distance(two_step, one_step)
            )

            back = lift_diffeo(inv, image)
            worst["inverse"] = max(worst["inverse"], model_point_distance(back, p))

        worst["section_compat"] = max(
            worst["section_compat"],
            section_compat_check(spec, samples, seed=rng.randrange(2 ** 30))[
                "max_discrepancy"
            ],
        )

        if n > 0:
            # Slice through z_0 = s on the real axis; components of the lift
            # should be smooth in s through order 2.
            base = random_model_point(rng, n, k, m, boundary_prob=0.0)

            def slice_component(s: float) -> float:
                z = (complex(s, 0.0),) + base.z[1:]
                moved = lift_diffeo(spec, ModelPoint(z, base.t, base.y))
                return moved.z[0].real

            report = smoothness_probe(slice_component, 0.0, 2)
            probe_orders.append(report.stable)

    checks = {
        "trivial_spec": (worst["trivial_spec"], 0.0),
        "equivariance": (worst["equivariance"], EQUIVARIANCE_TOL),
        "covering": (worst["covering"], COVERING_TOL),
        "boundary_zeros": (worst["boundary_zeros"], 0.0),
        "section_compat": (worst["section_compat"], SECTION_TOL),
        "composition": (worst["composition"], COMPOSITION_TOL),
        "inverse": (worst["inverse"], INVERSE_TOL),
    }
    report = {
        "dimensions": {"n": n, "k": k, "m": m},
        "samples": samples,
        "spec_count": spec_count,
        "seed": seed,
        "checks": {
            name: {
                "max_discrepancy": value,
                "tolerance": tol,
                "passed": value <= tol,
            }
            for name, (value, tol) in checks.items()
        },
        "lift_smoothness_probes_stable": all(probe_orders) if probe_orders else True,
    }
    report["passed"] = all(c["passed"] for c in report["checks"].values()) and report[
        "lift_smoothness_probes_stable"
    ]
    return report
