"""Position-dependent mass profiles and the deformation coordinate.

A profile is represented through U(x) with U^2(x) = 1/(2 m(x)); the
kinetic operator used everywhere in this package is the manifestly
Hermitian -d/dx U^2(x) d/dx.  The deformation coordinate

    mu(x) = int dz / U(z)

is strictly increasing (U > 0) and carries every solvable potential
shape in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DomainError, NumericalError

__all__ = ["MassProfile", "MuMap", "registry_get", "REGISTRY_NAMES"]

REGISTRY_NAMES = ("constant", "exp_mass", "asinh_mu", "arctan_mu", "tabulated")


@dataclass(frozen=True)
class MassProfile:
    """U(x) and its first two derivatives on an interval.

    ``mu_closed``, when present, is the closed-form deformation
    coordinate anchored at ``default_ref`` (which may be -inf for
    profiles whose natural anchor is the left asymptote).
    ``mu_limits`` are the limits of that closed form at the domain
    edges, used for inverse-range checks.
    """

    name: str
    params: dict
    x_lo: float
    x_hi: float
    u: Callable[[NDArray], NDArray]
    du: Callable[[NDArray], NDArray]
    d2u: Callable[[NDArray], NDArray]
    mu_closed: Optional[Callable[[NDArray], NDArray]] = None
    default_ref: float = 0.0
    mu_limits: Optional[tuple] = None

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.x_lo) and np.all(x <= self.x_hi))


def _require_positive(params: dict, key: str):
    val = params.get(key)
    if val is None:
        raise ConfigError(f"missing parameter '{key}'")
    if not (val > 0):
        raise ConfigError(f"parameter '{key}' must be positive, got {val!r}")
    return float(val)


def _constant(params: dict) -> MassProfile:
    m0 = _require_positive(params, "m0")
    s = math.sqrt(2.0 * m0)
    uval = 1.0 / s

    def u(x):
        return np.full_like(np.asarray(x, dtype=float), uval)

    def zero(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    return MassProfile(
        name="constant",
        params={"m0": m0},
        x_lo=-math.inf,
        x_hi=math.inf,
        u=u,
        du=zero,
        d2u=zero,
        mu_closed=lambda x: s * np.asarray(x, dtype=float),
        default_ref=0.0,
        mu_limits=(-math.inf, math.inf),
    )


def _exp_mass(params: dict) -> MassProfile:
    # m(x) = m0 exp(2 beta x); mu is anchored at the x -> -inf limit,
    # where it vanishes, and maps the real line onto (0, inf).
    m0 = _require_positive(params, "m0")
    beta = _require_positive(params, "beta")
    s = math.sqrt(2.0 * m0)

    def u(x):
        return np.exp(-beta * np.asarray(x, dtype=float)) / s

    def du(x):
        return -beta * np.exp(-beta * np.asarray(x, dtype=float)) / s

    def d2u(x):
        return beta * beta * np.exp(-beta * np.asarray(x, dtype=float)) / s

    return MassProfile(
        name="exp_mass",
        params={"m0": m0, "beta": beta},
        x_lo=-math.inf,
        x_hi=math.inf,
        u=u,
        du=du,
        d2u=d2u,
        mu_closed=lambda x: s * np.exp(beta * np.asarray(x, dtype=float)) / beta,
        default_ref=-math.inf,
        mu_limits=(0.0, math.inf),
    )


def _asinh_mu(params: dict) -> MassProfile:
    # m(x) = m0 / (1 + (alpha x)^2): mu = sqrt(2 m0) asinh(alpha x)/alpha.
    m0 = _require_positive(params, "m0")
    alpha = _require_positive(params, "alpha")
    s = math.sqrt(2.0 * m0)

    def u(x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(1.0 + (alpha * x) ** 2) / s

    def du(x):
        x = np.asarray(x, dtype=float)
        return alpha * alpha * x / (s * np.sqrt(1.0 + (alpha * x) ** 2))

    def d2u(x):
        x = np.asarray(x, dtype=float)
        return alpha * alpha / (s * (1.0 + (alpha * x) ** 2) ** 1.5)

    return MassProfile(
        name="asinh_mu",
        params={"m0": m0, "alpha": alpha},
        x_lo=-math.inf,
        x_hi=math.inf,
        u=u,
        du=du,
        d2u=d2u,
        mu_closed=lambda x: s * np.arcsinh(alpha * np.asarray(x, dtype=float)) / alpha,
        default_ref=0.0,
        mu_limits=(-math.inf, math.inf),
    )


def _arctan_mu(params: dict) -> MassProfile:
    # m(x) = m0 / (1 + (alpha x)^2)^2: mu = sqrt(2 m0) arctan(alpha x)/alpha,
    # a bounded coordinate range.
    m0 = _require_positive(params, "m0")
    alpha = _require_positive(params, "alpha")
    s = math.sqrt(2.0 * m0)

    def u(x):
        x = np.asarray(x, dtype=float)
        return (1.0 + (alpha * x) ** 2) / s

    def du(x):
        x = np.asarray(x, dtype=float)
        return 2.0 * alpha * alpha * x / s

    def d2u(x):
        x = np.asarray(x, dtype=float)
        return np.full_like(x, 2.0 * alpha * alpha / s)

    half = s * (math.pi / 2.0) / alpha
    return MassProfile(
        name="arctan_mu",
        params={"m0": m0, "alpha": alpha},
        x_lo=-math.inf,
        x_hi=math.inf,
        u=u,
        du=du,
        d2u=d2u,
        mu_closed=lambda x: s * np.arctan(alpha * np.asarray(x, dtype=float)) / alpha,
        default_ref=0.0,
        mu_limits=(-half, half),
    )


def _parse_table(path: str) -> tuple[NDArray, NDArray]:
    xs, ms = [], []
    with open(path, "r", encoding="utf-8") as fh:
        header_seen = False
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not header_seen:
                cols = [c.strip().lower() for c in line.split(",")]
                if cols != ["x", "m"]:
                    raise ConfigError(f"tabulated profile header must be 'x,m', got {line!r}")
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ConfigError(f"malformed table row: {line!r}")
            try:
                xs.append(float(parts[0]))
                ms.append(float(parts[1]))
            except ValueError as exc:
                raise ConfigError(f"malformed table row: {line!r}") from exc
    if not header_seen:
        raise ConfigError("tabulated profile file has no 'x,m' header")
    x = np.asarray(xs, dtype=float)
    m = np.asarray(ms, dtype=float)
    if x.size < 4:
        raise ConfigError("tabulated profile needs at least 4 samples")
    if np.any(np.diff(x) <= 0):
        raise ConfigError("tabulated profile x values must be strictly increasing")
    if np.any(m <= 0):
        raise ConfigError("tabulated profile mass values must be positive")
    return x, m


def _tabulated(params: dict) -> MassProfile:
    if "data" in params:
        data = np.asarray(params["data"], dtype=float)
        x, m = data[:, 0], data[:, 1]
        if np.any(np.diff(x) <= 0):
            raise ConfigError("tabulated profile x values must be strictly increasing")
        if np.any(m <= 0):
            raise ConfigError("tabulated profile mass values must be positive")
    elif "path" in params:
        x, m = _parse_table(str(params["path"]))
    else:
        raise ConfigError("tabulated profile requires 'path' or 'data'")

    # Monotone cubic interpolation of U itself keeps U positive and
    # avoids derivative overshoot near steep mass gradients.
    uvals = 1.0 / np.sqrt(2.0 * m)
    interp = PchipInterpolator(x, uvals, extrapolate=False)
    dinterp = interp.derivative()
    d2interp = interp.derivative(2)

    return MassProfile(
        name="tabulated",
        params={"x": x, "m": m},
        x_lo=float(x[0]),
        x_hi=float(x[-1]),
        u=lambda z: np.asarray(interp(np.asarray(z, dtype=float))),
        du=lambda z: np.asarray(dinterp(np.asarray(z, dtype=float))),
        d2u=lambda z: np.asarray(d2interp(np.asarray(z, dtype=float))),
        mu_closed=None,
        default_ref=float(x[0]),
        mu_limits=None,
    )


_BUILDERS = {
    "constant": _constant,
    "exp_mass": _exp_mass,
    "asinh_mu": _asinh_mu,
    "arctan_mu": _arctan_mu,
    "tabulated": _tabulated,
}


def registry_get(name: str, **params) -> MassProfile:
    """Build a profile from the built-in registry.

    Args:
        name: one of ``constant``, ``exp_mass``, ``asinh_mu``,
            ``arctan_mu``, ``tabulated``.
        **params: profile parameters (``m0``, ``alpha``, ``beta``, or
            ``path``/``data`` for tabulated samples).
    """
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ConfigError(
            f"unknown profile '{name}'; available: {', '.join(REGISTRY_NAMES)}"
        ) from None
    return builder(params)


def _quad(f, a, b, tol):
    if a == b:
        return 0.0
    val, err = quad(f, a, b, epsabs=tol, epsrel=1e-12, limit=200)
    if not math.isfinite(val) or err > max(1e4 * tol, 1e-8) * max(1.0, abs(val)):
        raise NumericalError(
            f"quadrature did not converge on [{a}, {b}] (estimate {val}, error {err})"
        )
    return val


class MuMap:
    """The deformation coordinate mu(x) with forward and inverse evaluation.

    Immutable after construction; the anchor cache is built eagerly.
    mu(x_ref) = 0.  For profiles anchored at -inf (exponential mass)
    ``x_ref`` defaults to that limit and mu maps onto (0, inf).
    """

    N_ANCHORS = 257

    def __init__(
        self,
        profile: MassProfile,
        x_ref: Optional[float] = None,
        tol: float = 1e-12,
        window: Optional[tuple] = None,
    ):
        self.profile = profile
        self.tol = float(tol)
        self.x_ref = profile.default_ref if x_ref is None else float(x_ref)

        def _inv_u(z):
            # U may overflow to inf deep in an asymptotic tail; 1/inf = 0
            # is exactly the right integrand value there
            with np.errstate(over="ignore"):
                return 1.0 / float(profile.u(z))

        self._inv_u = _inv_u

        if window is not None:
            lo, hi = float(window[0]), float(window[1])
        else:
            center = self.x_ref if math.isfinite(self.x_ref) else 0.0
            lo = max(profile.x_lo, center - 40.0)
            hi = min(profile.x_hi, center + 40.0)
        if not lo < hi:
            raise ConfigError(f"empty sampling window [{lo}, {hi}]")

        anchors = np.linspace(lo, hi, self.N_ANCHORS)
        if math.isfinite(self.x_ref):
            if not (profile.x_lo <= self.x_ref <= profile.x_hi):
                raise DomainError(f"x_ref={self.x_ref} outside profile domain")
            if lo <= self.x_ref <= hi:
                anchors = np.unique(np.concatenate([anchors, [self.x_ref]]))
            elif self.x_ref < lo:
                anchors = np.concatenate([[self.x_ref], anchors])
            else:
                anchors = np.concatenate([anchors, [self.x_ref]])

        seg = np.zeros(anchors.size)
        for i in range(1, anchors.size):
            seg[i] = _quad(self._inv_u, anchors[i - 1], anchors[i], self.tol)
        vals = np.cumsum(seg)

        if math.isfinite(self.x_ref):
            iref = int(np.argmin(np.abs(anchors - self.x_ref)))
            vals = vals - vals[iref]
        else:
            # anchored at the left asymptote: offset by the improper tail
            tail = _quad(self._inv_u, -math.inf, anchors[0], self.tol)
            vals = vals + tail

        self.cache_x = anchors
        self.cache_mu = vals
        self.mu_lo, self.mu_hi = self._range_limits()

    def _range_limits(self) -> tuple:
        prof = self.profile
        if prof.mu_limits is not None and prof.mu_closed is not None:
            if math.isfinite(self.x_ref):
                shift = float(prof.mu_closed(self.x_ref))
            else:
                shift = 0.0
            return (prof.mu_limits[0] - shift, prof.mu_limits[1] - shift)
        lo = -math.inf
        hi = math.inf
        if math.isfinite(prof.x_lo):
            lo = self.cache_mu[0] - _quad(self._inv_u, prof.x_lo, self.cache_x[0], self.tol)
        if math.isfinite(prof.x_hi):
            hi = self.cache_mu[-1] + _quad(self._inv_u, self.cache_x[-1], prof.x_hi, self.tol)
        return lo, hi

    # -- forward ---------------------------------------------------------

    def _check_domain(self, x):
        if np.any(np.asarray(x) < self.profile.x_lo) or np.any(np.asarray(x) > self.profile.x_hi):
            raise DomainError(f"x outside profile domain [{self.profile.x_lo}, {self.profile.x_hi}]")

    def mu(self, x: float) -> float:
        """Evaluate mu at a single point by quadrature from the nearest anchor."""
        x = float(x)
        self._check_domain(x)
        i = int(np.argmin(np.abs(self.cache_x - x)))
        return float(self.cache_mu[i] + _quad(self._inv_u, self.cache_x[i], x, self.tol))

    def mu_array(self, xs) -> NDArray:
        """Evaluate mu on an array of points, sharing cumulative segments."""
        xs = np.asarray(xs, dtype=float)
        if xs.ndim == 0:
            return np.asarray(self.mu(float(xs)))
        self._check_domain(xs)
        order = np.argsort(xs, kind="stable")
        xo = xs[order]
        i0 = int(np.argmin(np.abs(self.cache_x - xo[0])))
        nodes = np.concatenate([[self.cache_x[i0]], xo])
        seg = np.zeros(nodes.size)
        for i in range(1, nodes.size):
            seg[i] = _quad(self._inv_u, nodes[i - 1], nodes[i], self.tol)
        vals = self.cache_mu[i0] + np.cumsum(seg)[1:]
        out = np.empty_like(vals)
        out[order] = vals
        return out

    # -- inverse ---------------------------------------------------------

    def mu_inverse(self, m: float) -> float:
        """Solve mu(x) = m by anchor-cache bracketing plus safeguarded Newton."""
        m = float(m)
        if not (self.mu_lo < m < self.mu_hi) and m not in (self.mu_lo, self.mu_hi):
            raise DomainError(
                f"target {m} outside mu range ({self.mu_lo}, {self.mu_hi})"
            )
        xa, xb, fa, fb = self._bracket(m)
        if fa == 0.0:
            return xa
        if fb == 0.0:
            return xb
        x = 0.5 * (xa + xb)
        f = self.mu(x) - m
        ftol = max(10.0 * self.tol, 1e-14) * max(1.0, abs(m))
        for _ in range(100):
            if abs(f) <= ftol or (xb - xa) <= 1e-15 * max(1.0, abs(x)):
                return x
            if f > 0:
                xb = x
            else:
                xa = x
            step = f * float(self.profile.u(x))  # Newton: mu' = 1/U
            xn = x - step
            if not (xa < xn < xb):
                xn = 0.5 * (xa + xb)
            x = xn
            f = self.mu(x) - m
        raise NumericalError(f"mu_inverse failed to converge for target {m}")

    def _bracket(self, m: float):
        mu_vals = self.cache_mu
        if mu_vals[0] <= m <= mu_vals[-1]:
            j = int(np.searchsorted(mu_vals, m))
            j = min(max(j, 1), mu_vals.size - 1)
            return (
                float(self.cache_x[j - 1]),
                float(self.cache_x[j]),
                float(mu_vals[j - 1] - m),
                float(mu_vals[j] - m),
            )
        # expand beyond the cached window toward the domain edge
        if m < mu_vals[0]:
            x, f = float(self.cache_x[0]), float(mu_vals[0] - m)
            step = max(1.0, (self.cache_x[-1] - self.cache_x[0]) / 8.0)
            for _ in range(200):
                xn = max(x - step, self.profile.x_lo)
                fn = self.mu(xn) - m
                if fn <= 0.0:
                    return xn, x, fn, f
                if xn == self.profile.x_lo:
                    break
                x, f = xn, fn
                step *= 2.0
        else:
            x, f = float(self.cache_x[-1]), float(mu_vals[-1] - m)
            step = max(1.0, (self.cache_x[-1] - self.cache_x[0]) / 8.0)
            for _ in range(200):
                xn = min(x + step, self.profile.x_hi)
                fn = self.mu(xn) - m
                if fn >= 0.0:
                    return x, xn, f, fn
                if xn == self.profile.x_hi:
                    break
                x, f = xn, fn
                step *= 2.0
        raise NumericalError(f"failed to bracket mu target {m}")
