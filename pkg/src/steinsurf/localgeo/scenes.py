"""Model scenes: patched neighborhood functions and exhaustion certificates.

A scene places model charts (special hyperbolic or double point) in C^2,
each with a radius and a smooth cutoff, over an optional flat background
surface.  Two scalar fields matter:

* the neighborhood function rho, vanishing exactly on the scene surface,
  blended from the chart models and the tubular background quadratic;
* the localization term tau = sum_j chi_j * (|z_loc|^2 + |w_loc|^2),
  whose cutoffs are the only place second derivatives of the bump enter.

The exhaustion phi = -log(eps - rho) + delta * tau is certified strongly
plurisubharmonic on {rho < eps} (minus a collar) by assembling its Levi
form analytically:

    L_phi = h' L_rho + h'' (d rho)(d rho)^H + delta L_tau,

with h(t) = -log(eps - t).  Differencing through the log directly would
lose ~(eps - t)^-4 h^2 of precision near the collar, which is why the
chain rule is applied in closed form and the cutoff jets are analytic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..certificates import Certificate, RULE_EXHAUSTION, Witness
from ..errors import GeometryError
from .fields import (
    MODEL_DOUBLE_POINT,
    MODEL_KINDS,
    MODEL_SPECIAL_HYPERBOLIC,
    ScalarField,
    model_field,
)
from .geometry import Box4, PointC2, eigmin_arrays
from .sweeps import grid_chunks

TUBULAR_MODEL = "model"
TUBULAR_EUCLIDEAN = "euclidean"
BACKGROUND_NONE = "none"
BACKGROUND_FLAT = "flat"

# Cutoff thresholds: on |z_loc| for hyperbolic charts (fractions of the
# chart radius), on |z_loc|^2 + |w_loc|^2 for double point charts.
HYPERBOLIC_CUTOFF = (0.5, 0.75)
DOUBLE_CUTOFF = (0.25, 0.75)


# ---------------------------------------------------------------------------
# Smooth bump with analytic first and second derivatives
# ---------------------------------------------------------------------------


def _exp_piece(s):
    """exp(-1/s) continued by 0 for s <= 0, vectorized and overflow-safe."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    with np.errstate(divide="ignore", over="ignore"):
        out[pos] = np.exp(-1.0 / s[pos])
    return out


def bump_jets(sigma):
    """The standard smooth step g and its first two derivatives.

    g = f(sigma) / (f(sigma) + f(1 - sigma)) with f(s) = exp(-1/s); g is
    0 for sigma <= 0, 1 for sigma >= 1, and strictly increasing between.
    """
    sigma = np.asarray(sigma, dtype=float)
    f1 = _exp_piece(sigma)
    f2 = _exp_piece(1.0 - sigma)
    den = f1 + f2
    g = np.where(sigma <= 0, 0.0, np.where(sigma >= 1, 1.0, f1 / np.where(den > 0, den, 1.0)))

    interior = (f1 > 0) & (f2 > 0)
    g1 = np.zeros_like(g)
    g2 = np.zeros_like(g)
    if np.any(interior):
        s = sigma[interior]
        a = f1[interior]
        b = f2[interior]
        d = a + b
        inv_s2 = s**-2.0
        inv_r2 = (1.0 - s) ** -2.0
        q = inv_s2 + inv_r2
        gp = a * b * q / (d * d)
        qp = -2.0 * s**-3.0 + 2.0 * (1.0 - s) ** -3.0
        log_deriv = inv_s2 - inv_r2 + qp / q - 2.0 * (a * inv_s2 - b * inv_r2) / d
        g1[interior] = gp
        g2[interior] = gp * log_deriv
    return g, g1, g2


def cutoff_jets(c, lo: float, hi: float):
    """chi(c) with chi = 1 for c <= lo and 0 for c >= hi, plus chi', chi''."""
    if not lo < hi:
        raise GeometryError(f"cutoff thresholds must satisfy lo < hi, got ({lo}, {hi})")
    k = 1.0 / (hi - lo)
    g, g1, g2 = bump_jets((np.asarray(c, dtype=float) - lo) * k)
    return 1.0 - g, -g1 * k, -g2 * k * k


# ---------------------------------------------------------------------------
# Charts and scenes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelChart:
    """One model chart: kind, center in C^2, and patch radius."""

    kind: str
    center: PointC2
    radius: float

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise GeometryError(f"unknown chart kind {self.kind!r}")
        if self.radius <= 0:
            raise GeometryError(f"chart radius must be positive, got {self.radius}")

    def cutoff_interval(self) -> tuple[float, float]:
        if self.kind == MODEL_SPECIAL_HYPERBOLIC:
            return (HYPERBOLIC_CUTOFF[0] * self.radius, HYPERBOLIC_CUTOFF[1] * self.radius)
        return DOUBLE_CUTOFF

    def local_coords(self, x, y, u, v):
        cx, cy, cu, cv = self.center.reals
        return x - cx, y - cy, u - cu, v - cv

    def cutoff_argument(self, x, y, u, v):
        """The scalar the cutoff is applied to, at global coordinates."""
        lx, ly, lu, lv = self.local_coords(x, y, u, v)
        if self.kind == MODEL_SPECIAL_HYPERBOLIC:
            return np.sqrt(lx * lx + ly * ly)
        return lx * lx + ly * ly + lu * lu + lv * lv


@dataclass(frozen=True)
class Scene:
    """Model charts over a background, with a tubular extension choice.

    ``background`` is "flat" (the totally real plane {y = v = 0}) or
    "none" (a single chart whose model is the whole surface).  ``tubular``
    picks the extension of the neighborhood function outside the chart
    cores: "model" keeps each chart's own normal-chart quadratic, which
    coincides with the model function, while "euclidean" (double point
    charts only) substitutes the squared Euclidean distance
    min(x^2+u^2, y^2+v^2).
    """

    charts: tuple[ModelChart, ...]
    background: str = BACKGROUND_FLAT
    tubular: str = TUBULAR_MODEL

    def __post_init__(self):
        object.__setattr__(self, "charts", tuple(self.charts))
        if self.background not in (BACKGROUND_NONE, BACKGROUND_FLAT):
            raise GeometryError(f"unknown background {self.background!r}")
        if self.tubular not in (TUBULAR_MODEL, TUBULAR_EUCLIDEAN):
            raise GeometryError(f"unknown tubular mode {self.tubular!r}")
        if self.background == BACKGROUND_NONE and len(self.charts) != 1:
            raise GeometryError("background 'none' needs exactly one chart")
        for i, a in enumerate(self.charts):
            for b in self.charts[i + 1 :]:
                gap = math.dist(a.center.reals, b.center.reals)
                if gap <= a.radius + b.radius:
                    raise GeometryError(
                        f"overlapping charts at {a.center.reals} and {b.center.reals}"
                    )
        if self.tubular == TUBULAR_EUCLIDEAN:
            if any(c.kind != MODEL_DOUBLE_POINT for c in self.charts):
                raise GeometryError(
                    "euclidean tubular extension is defined for double point charts only"
                )


def special_hyperbolic_scene(radius: float = 0.5) -> Scene:
    chart = ModelChart(MODEL_SPECIAL_HYPERBOLIC, PointC2(0j, 0j), radius)
    return Scene((chart,), background=BACKGROUND_NONE)


def double_point_scene(radius: float = 1.0) -> Scene:
    chart = ModelChart(MODEL_DOUBLE_POINT, PointC2(0j, 0j), radius)
    return Scene((chart,), background=BACKGROUND_NONE)


def flat_scene() -> Scene:
    return Scene((), background=BACKGROUND_FLAT)


# ---------------------------------------------------------------------------
# The patched neighborhood function
# ---------------------------------------------------------------------------


def _flat_background_field() -> ScalarField:
    def value(x, y, u, v):
        return y * y + v * v

    def gradient(x, y, u, v):
        zero = np.zeros(np.broadcast(x, y, u, v).shape)
        return (zero, 2 * y + zero, zero, 2 * v + zero)

    def levi(x, y, u, v):
        half = 0.5 + np.zeros(np.broadcast(x, y, u, v).shape)
        return (half, half, np.zeros_like(half, dtype=complex))

    return ScalarField(name="FlatBackground", value=value, gradient=gradient, levi=levi)


def _shifted_model_field(chart: ModelChart) -> ScalarField:
    """The chart's model field expressed in global coordinates."""
    base = model_field(chart.kind)
    if chart.center == PointC2(0j, 0j):
        return base

    def value(x, y, u, v):
        return base.value(*chart.local_coords(x, y, u, v))

    def gradient(x, y, u, v):
        return base.gradient(*chart.local_coords(x, y, u, v))

    def levi(x, y, u, v):
        return base.levi(*chart.local_coords(x, y, u, v))

    return ScalarField(name=f"{chart.kind}@{chart.center.reals}", value=value,
                       gradient=gradient, levi=levi)


def _euclidean_double_value(chart: ModelChart):
    def value(x, y, u, v):
        lx, ly, lu, lv = chart.local_coords(x, y, u, v)
        return np.minimum(lx * lx + lu * lu, ly * ly + lv * lv)

    return value


def build_patched_rho(scene: Scene) -> ScalarField:
    """Neighborhood function of the scene surface.

    Inside each chart's inner cutoff region the field is the chart model;
    outside the outer threshold it is the tubular extension; in between
    the two are blended by the smooth cutoff.  With the default "model"
    tubular extension the blend collapses to the model itself, and the
    returned field carries closed-form jets.  Mixed or euclidean scenes
    return a value-only field (jets fall back to finite differences).
    """
    if scene.background == BACKGROUND_NONE:
        chart = scene.charts[0]
        if scene.tubular == TUBULAR_MODEL:
            return _shifted_model_field(chart)
        model = _shifted_model_field(chart)
        outer = _euclidean_double_value(chart)

        def value(x, y, u, v):
            chi, _, _ = cutoff_jets(
                chart.cutoff_argument(x, y, u, v), *chart.cutoff_interval()
            )
            return chi * model.value(x, y, u, v) + (1.0 - chi) * outer(x, y, u, v)

        return ScalarField(name=f"Patched{chart.kind}", value=value)

    background = _flat_background_field()
    if not scene.charts:
        return background

    models = [_shifted_model_field(c) for c in scene.charts]

    def value(x, y, u, v):
        total = np.asarray(background.value(x, y, u, v), dtype=float).copy()
        for chart, model in zip(scene.charts, models):
            chi, _, _ = cutoff_jets(
                chart.cutoff_argument(x, y, u, v), *chart.cutoff_interval()
            )
            total = total + chi * (model.value(x, y, u, v) - total)
        return total

    return ScalarField(name="PatchedScene", value=value)


# ---------------------------------------------------------------------------
# The localization term tau and its closed-form Levi data
# ---------------------------------------------------------------------------


def _tau_chart_jets(chart: ModelChart, x, y, u, v):
    """Value, complex gradient (tau_z, tau_w), and Levi entries of one
    chart's term chi(c) * (|z_loc|^2 + |w_loc|^2)."""
    lx, ly, lu, lv = chart.local_coords(x, y, u, v)
    z = lx + 1j * ly
    w = lu + 1j * lv
    zbar = np.conj(z)
    wbar = np.conj(w)
    q = (lx * lx + ly * ly) + (lu * lu + lv * lv)
    c = chart.cutoff_argument(x, y, u, v)
    chi, chi1, chi2 = cutoff_jets(c, *chart.cutoff_interval())

    if chart.kind == MODEL_SPECIAL_HYPERBOLIC:
        # c = |z|: chi_z = chi' zbar / (2c); the annulus excludes c = 0,
        # where chi is locally constant and every chi-derivative vanishes.
        safe_c = np.where(c > 0, c, 1.0)
        chi_z = chi1 * zbar / (2.0 * safe_c)
        chi_zz = chi2 / 4.0 + chi1 / (4.0 * safe_c)
        tau_z = chi_z * q + chi * zbar
        tau_w = chi * wbar
        t11 = chi_zz * q + chi1 * c + chi
        t22 = chi + np.zeros_like(q)
        t12 = chi_z * w
    else:
        # c = q: chi_z = chi' zbar, etc.
        tau_z = chi1 * zbar * q + chi * zbar
        tau_w = chi1 * wbar * q + chi * wbar
        t11 = (chi2 * (lx * lx + ly * ly) + chi1) * q + 2.0 * chi1 * (lx * lx + ly * ly) + chi
        t22 = (chi2 * (lu * lu + lv * lv) + chi1) * q + 2.0 * chi1 * (lu * lu + lv * lv) + chi
        t12 = chi2 * zbar * w * q + 2.0 * chi1 * zbar * w

    return chi * q, tau_z, tau_w, t11, t22, t12


def tau_jets(scene: Scene, x, y, u, v):
    """Summed tau value, complex gradient, and Levi entries over charts."""
    shape = np.broadcast(x, y, u, v).shape
    val = np.zeros(shape)
    tz = np.zeros(shape, dtype=complex)
    tw = np.zeros(shape, dtype=complex)
    a11 = np.zeros(shape)
    a22 = np.zeros(shape)
    a12 = np.zeros(shape, dtype=complex)
    for chart in scene.charts:
        cv, ctz, ctw, c11, c22, c12 = _tau_chart_jets(chart, x, y, u, v)
        val = val + cv
        tz = tz + ctz
        tw = tw + ctw
        a11 = a11 + c11
        a22 = a22 + c22
        a12 = a12 + c12
    return val, tz, tw, a11, a22, a12


def tau_field(scene: Scene) -> ScalarField:
    """tau as a ScalarField with closed-form jets (for cross-checking)."""

    def value(x, y, u, v):
        return tau_jets(scene, x, y, u, v)[0]

    def gradient(x, y, u, v):
        _, tz, tw, _, _, _ = tau_jets(scene, x, y, u, v)
        return (2 * np.real(tz), -2 * np.imag(tz), 2 * np.real(tw), -2 * np.imag(tw))

    def levi(x, y, u, v):
        _, _, _, a11, a22, a12 = tau_jets(scene, x, y, u, v)
        return a11, a22, a12

    return ScalarField(name="SceneTau", value=value, gradient=gradient, levi=levi)


# ---------------------------------------------------------------------------
# Exhaustion certificate
# ---------------------------------------------------------------------------


def exhaustion_certificate(
    scene: Scene,
    epsilon: float,
    delta: float,
    grid_step: float,
    collar: float | None = None,
    box: Box4 | None = None,
) -> Certificate:
    """Certify phi = -log(eps - rho) + delta * tau strongly psh.

    Sweeps the grid points of ``box`` with rho < eps - collar and checks
    that the smallest eigenvalue of the analytically assembled Levi form
    of phi is strictly positive.  The collar (default eps/10) keeps the
    log factor h' = 1/(eps - rho) bounded, so the certificate margin is
    meaningful; the sublevel set beyond the collar retracts inward along
    rho in any case.
    """
    if epsilon <= 0:
        raise GeometryError(f"epsilon must be positive, got {epsilon}")
    if delta <= 0:
        raise GeometryError(f"delta must be positive, got {delta}")
    if scene.tubular != TUBULAR_MODEL:
        raise GeometryError("exhaustion certificates need the 'model' tubular extension")
    collar = 0.1 * epsilon if collar is None else collar
    if not 0 < collar < epsilon:
        raise GeometryError(f"collar must lie in (0, epsilon), got {collar}")
    box = Box4.symmetric(1.0) if box is None else box
    rho = build_patched_rho(scene)
    if not rho.has_jets:
        raise GeometryError("exhaustion certificates need closed-form jets for rho")

    best = math.inf
    best_at = None
    n_masked = 0
    for x, y, u, v in grid_chunks(box, grid_step):
        val = np.asarray(rho.value(x, y, u, v), dtype=float)
        mask = val < epsilon - collar
        if not np.any(mask):
            continue
        n_masked += int(np.count_nonzero(mask))
        xs, ys, us, vs = x[mask], y[mask], u[mask], v[mask]
        t = val[mask]
        gx, gy, gu, gv = rho.gradient(xs, ys, us, vs)
        rho_z = 0.5 * (gx - 1j * gy)
        rho_w = 0.5 * (gu - 1j * gv)
        r11, r22, r12 = rho.levi(xs, ys, us, vs)
        _, _, _, t11, t22, t12 = tau_jets(scene, xs, ys, us, vs)
        h1 = 1.0 / (epsilon - t)
        h2 = h1 * h1
        a11 = h1 * r11 + h2 * np.abs(rho_z) ** 2 + delta * t11
        a22 = h1 * r22 + h2 * np.abs(rho_w) ** 2 + delta * t22
        a12 = h1 * r12 + h2 * rho_z * np.conj(rho_w) + delta * t12
        eig = eigmin_arrays(a11, a22, a12)
        k = int(np.argmin(eig))
        if eig[k] < best:
            best = float(eig[k])
            best_at = (float(xs[k]), float(ys[k]), float(us[k]), float(vs[k]))

    if best_at is None:
        raise GeometryError(
            f"no grid points with rho < {epsilon - collar}; refine the grid"
        )
    witnesses = (
        Witness(["phi_levi_min", *best_at], best),
        Witness("masked_points", n_masked),
    )
    return Certificate(best > 0, RULE_EXHAUSTION, witnesses)
