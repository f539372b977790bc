"""The four solvable families on the alternating-sign parameter branch.

Every family is built from a superpotential ansatz

    W(x) = lam * phi(x) + rho / phi(x) + sigma + U'(x)/2,

where phi solves U(x) phi'(x) = P(phi) for a family-specific polynomial
P of degree at most two in phi.  Writing W_eff = W - U'/2, the partner
potentials come in two flavours:

    V1     = W^2 - (U W)'            V2     = V1 + 2 U W' - U U''
    V1_eff = W_eff^2 - U W_eff'      V2_eff = W_eff^2 + U W_eff'

with V_i,eff = V_i + (U'' U / 2 + U'^2 / 4).  All derivatives of W are
evaluated in closed form through the phi equation, so residual checks
measure algebra rather than finite differencing.

The parameter recursion implemented here is the alternating branch: the
pole coefficient rho flips sign at every step (rho -> -(rho + const)).
On this branch the partner-potential difference V2_eff(x; p0) -
V1_eff(x; p1) is generally *not* constant in x; it is constant exactly
on special parameter subsets (see ``shape_invariance_residual``).  The
partial-sum spectra in :mod:`sip_effmass.spectra` are defined over the
recursion regardless, and the eigensolver comparisons in
:mod:`sip_effmass.verify` treat them as diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, PoleError, ValidationError
from .massprofile import MassProfile, MuMap

__all__ = [
    "FAMILIES",
    "ParamTriple",
    "FamilyCoeffs",
    "FamilyModel",
    "validate",
]

FAMILIES = ("ho", "morse", "pt_trig", "pt_hyp", "coulomb")

_ALIASES = {
    "ho": "ho",
    "morse": "morse",
    "pt_trig": "pt_trig",
    "pttrig": "pt_trig",
    "pt_hyp": "pt_hyp",
    "pthyp": "pt_hyp",
    "coulomb": "coulomb",
}

PT_TAN_GUARD = 1e-6
PHI_POLE_GUARD = 1e-12


def canonical_family(tag: str) -> str:
    key = tag.strip().lower().replace("-", "_")
    if key not in _ALIASES:
        raise ValidationError([f"unknown family '{tag}'"])
    return _ALIASES[key]


@dataclass(frozen=True)
class ParamTriple:
    """One point (lam, sigma, rho) of the parameter chain."""

    lam: float
    sigma: float
    rho: float

    def __post_init__(self):
        for name in ("lam", "sigma", "rho"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError([f"parameter '{name}' must be finite"])


@dataclass(frozen=True)
class FamilyCoeffs:
    """Coefficients (a, b, c) of the phi equation."""

    a: float
    b: float = 0.0
    c: float = 0.0

    @property
    def discriminant(self) -> float:
        return 4.0 * self.a * self.c - self.b * self.b


def validate(family: str, coeffs: FamilyCoeffs, params0: ParamTriple) -> list[str]:
    """Return the list of violated constraints (empty when valid)."""
    family = canonical_family(family)
    violations = []
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    if family == "ho":
        if a == 0.0:
            violations.append("a != 0")
        if 2.0 * a * params0.lam == 0.0:
            violations.append("q = 2*a*lambda0 != 0")
    elif family == "morse":
        if not a < 0.0:
            violations.append("a < 0")
        if 2.0 * b * params0.lam == 0.0:
            violations.append("q = 2*b*lambda0 != 0")
    elif family == "pt_trig":
        if not coeffs.discriminant > 0.0:
            violations.append("discriminant > 0")
    elif family == "pt_hyp":
        if not coeffs.discriminant < 0.0:
            violations.append("discriminant < 0")
    elif family == "coulomb":
        # tolerate rounding in 4ac - b^2 when c was derived as b^2/(4a)
        disc_scale = max(1.0, b * b, abs(4.0 * a * c))
        if abs(coeffs.discriminant) > 1e-12 * disc_scale:
            violations.append("discriminant == 0")
        if a == 0.0:
            violations.append("a != 0")
        if b == 0.0:
            violations.append("b != 0")
        if params0.rho != 0.0:
            violations.append("rho0 == 0")
    return violations


@dataclass(frozen=True)
class FamilyModel:
    """A family tag, coefficients, starting parameters, and a mass profile.

    Immutable; all evaluation methods are pure.  For the Coulomb family
    use :meth:`coulomb`, which derives (lam0, sigma0) from the angular
    momentum l and the coupling Z e^2; they cannot be set independently.
    """

    family: str
    coeffs: FamilyCoeffs
    params0: ParamTriple
    profile: MassProfile
    mumap: MuMap
    l: Optional[int] = None
    ze2: Optional[float] = None
    formal_limit: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", canonical_family(self.family))
        violations = validate(self.family, self.coeffs, self.params0)
        if self.formal_limit:
            # Reduced slices (e.g. the linear family with b = 0) are
            # well-defined potentials even though the separation source
            # term q vanishes; only that constraint is waived.
            violations = [v for v in violations if not v.startswith("q =")]
        if violations:
            raise ValidationError(violations)

    @classmethod
    def morse_reduced(
        cls,
        a: float,
        lambda0: float,
        sigma0: float,
        profile: MassProfile,
        mumap: MuMap,
    ) -> "FamilyModel":
        """Linear family on the rho0 = b = 0 slice (formal q -> 0 limit).

        This is the single-exponential well whose spectrum is
        sigma0^2 - (sigma0 + a n)^2; for a < 0 its zero mode is
        normalizable when sigma0 < 0.
        """
        if not a < 0.0:
            raise ValidationError(["a < 0"])
        return cls(
            family="morse",
            coeffs=FamilyCoeffs(a=a, b=0.0, c=0.0),
            params0=ParamTriple(lam=lambda0, sigma=sigma0, rho=0.0),
            profile=profile,
            mumap=mumap,
            formal_limit=True,
        )

    @classmethod
    def coulomb(
        cls,
        a: float,
        b: float,
        l: int,
        ze2: float,
        profile: MassProfile,
        mumap: MuMap,
    ) -> "FamilyModel":
        """Build the degenerate-quadratic (Coulomb) model.

        The quadratic coefficients are tied by c = b^2/(4a) (vanishing
        discriminant) and the starting parameters are
        lam0 = a (l+1), sigma0 = b (l+1)/2 + Z e^2 / (2 (l+1)).
        """
        if l < 0 or int(l) != l:
            raise ValidationError(["l must be a non-negative integer"])
        if a == 0.0:
            raise ValidationError(["a != 0"])
        coeffs = FamilyCoeffs(a=a, b=b, c=b * b / (4.0 * a))
        lam0 = a * (l + 1.0)
        sigma0 = 0.5 * b * (l + 1.0) + ze2 / (2.0 * (l + 1.0))
        return cls(
            family="coulomb",
            coeffs=coeffs,
            params0=ParamTriple(lam=lam0, sigma=sigma0, rho=0.0),
            profile=profile,
            mumap=mumap,
            l=int(l),
            ze2=float(ze2),
        )

    def with_params(self, params: ParamTriple) -> "FamilyModel":
        return replace(self, params0=params)

    # -- phi and its defining polynomial ----------------------------------

    def ode_coeffs(self) -> tuple[float, float, float]:
        """Coefficients (A, B, C) with U phi' = A phi^2 + B phi + C.

        The linear family solves U phi' = -a phi + b (the sign that the
        printed superpotential and partner potentials actually satisfy).
        """
        a, b, c = self.coeffs.a, self.coeffs.b, self.coeffs.c
        if self.family == "ho":
            return (0.0, 0.0, a)
        if self.family == "morse":
            return (0.0, -a, b)
        return (a, b, c)

    def _p_of_phi(self, phi):
        A, B, C = self.ode_coeffs()
        return (A * phi + B) * phi + C

    def phi_from_mu(self, mu):
        """phi as a function of the deformation coordinate."""
        mu = np.asarray(mu, dtype=float)
        a, b = self.coeffs.a, self.coeffs.b
        if self.family == "ho":
            return a * mu + b
        if self.family == "morse":
            return (b - np.exp(-a * mu)) / a
        if self.family == "pt_trig":
            sd = math.sqrt(self.coeffs.discriminant)
            theta = 0.5 * sd * mu
            if np.any(theta <= 0.0) or np.any(theta >= 0.5 * math.pi - PT_TAN_GUARD):
                raise DomainError(
                    "trigonometric branch restricted to "
                    f"sqrt(disc)*mu/2 in (0, pi/2 - {PT_TAN_GUARD})"
                )
            return (sd / (2.0 * a)) * np.tan(theta) - b / (2.0 * a)
        if self.family == "pt_hyp":
            sd = math.sqrt(-self.coeffs.discriminant)
            return -(sd / (2.0 * a)) * np.tanh(0.5 * sd * mu) - b / (2.0 * a)
        # coulomb
        if np.any(np.abs(mu) < PHI_POLE_GUARD):
            raise DomainError("coulomb phi undefined at mu = 0")
        return -(2.0 + b * mu) / (2.0 * a * mu)

    def phi(self, x):
        """phi(x) = phi(mu(x))."""
        scalar = np.ndim(x) == 0
        mu = self.mumap.mu_array(np.atleast_1d(np.asarray(x, dtype=float)))
        out = self.phi_from_mu(mu)
        return float(out[0]) if scalar else out

    # -- superpotential and partner potentials -----------------------------

    def _mu_core(self, mu, params: ParamTriple):
        """(phi, weff, uwp_eff) at deformation-coordinate points mu, where
        uwp_eff = U W_eff' = (lam - rho/phi^2) P(phi)."""
        phi = np.atleast_1d(self.phi_from_mu(mu))
        lam, sigma, rho = params.lam, params.sigma, params.rho
        if rho != 0.0:
            if np.any(np.abs(phi) < PHI_POLE_GUARD):
                raise PoleError("phi vanishes at an evaluation point with rho != 0")
            pole = rho / phi
            slope = lam - rho / (phi * phi)
        else:
            pole = np.zeros_like(phi)
            slope = np.full_like(phi, lam)
        weff = lam * phi + pole + sigma
        uwp_eff = slope * self._p_of_phi(phi)
        return phi, weff, uwp_eff

    def _eval_core(self, x, params: ParamTriple):
        """Common sub-expressions at points x for a given parameter triple."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        mu = self.mumap.mu_array(x)
        phi, weff, uwp_eff = self._mu_core(mu, params)
        u = np.atleast_1d(np.asarray(self.profile.u(x), dtype=float))
        du = np.atleast_1d(np.asarray(self.profile.du(x), dtype=float))
        d2u = np.atleast_1d(np.asarray(self.profile.d2u(x), dtype=float))
        w = weff + 0.5 * du
        return phi, u, du, d2u, w, weff, uwp_eff

    def superpotential_W(self, x, params: Optional[ParamTriple] = None):
        params = self.params0 if params is None else params
        scalar = np.ndim(x) == 0
        _, _, _, _, w, _, _ = self._eval_core(x, params)
        return float(w[0]) if scalar else w

    def potential_V1(self, x, params: Optional[ParamTriple] = None):
        """V1 = W^2 - (U W)' with W' in closed form via the phi equation."""
        params = self.params0 if params is None else params
        scalar = np.ndim(x) == 0
        _, u, du, d2u, w, _, uwp_eff = self._eval_core(x, params)
        # (U W)' = U' W + U W' and U W' = U W_eff' + U U''/2
        v1 = w * w - du * w - uwp_eff - 0.5 * u * d2u
        return float(v1[0]) if scalar else v1

    def potential_V2(self, x, params: Optional[ParamTriple] = None):
        """V2 = V1 + 2 U W' - U U'' = V1 + 2 U W_eff'."""
        params = self.params0 if params is None else params
        scalar = np.ndim(x) == 0
        _, u, du, d2u, w, _, uwp_eff = self._eval_core(x, params)
        v1 = w * w - du * w - uwp_eff - 0.5 * u * d2u
        v2 = v1 + 2.0 * uwp_eff
        return float(v2[0]) if scalar else v2

    def effective_pair(self, x, params: Optional[ParamTriple] = None):
        """(V1_eff, V2_eff) = (W_eff^2 -+ U W_eff')."""
        params = self.params0 if params is None else params
        scalar = np.ndim(x) == 0
        _, _, _, _, _, weff, uwp_eff = self._eval_core(x, params)
        v1e = weff * weff - uwp_eff
        v2e = weff * weff + uwp_eff
        if scalar:
            return float(v1e[0]), float(v2e[0])
        return v1e, v2e

    def effective_superpotential(self, x, params: Optional[ParamTriple] = None):
        params = self.params0 if params is None else params
        scalar = np.ndim(x) == 0
        _, _, _, _, _, weff, _ = self._eval_core(x, params)
        return float(weff[0]) if scalar else weff

    def weff_of_mu(self, mu, params: Optional[ParamTriple] = None):
        """W_eff as a function of mu (used for ground-state integrals)."""
        params = self.params0 if params is None else params
        _, weff, _ = self._mu_core(np.asarray(mu, dtype=float), params)
        return weff

    def effective_pair_of_mu(self, mu, params: Optional[ParamTriple] = None):
        """(V1_eff, V2_eff) at deformation-coordinate points mu.

        The effective pair depends on position only through mu, so this
        avoids the quadrature behind mu(x) when the caller already works
        in the deformation coordinate.
        """
        params = self.params0 if params is None else params
        _, weff, uwp_eff = self._mu_core(np.asarray(mu, dtype=float), params)
        return weff * weff - uwp_eff, weff * weff + uwp_eff

    # -- recursion and remainder -------------------------------------------

    def next_params(self, pk: Optional[ParamTriple] = None) -> ParamTriple:
        """One step of the alternating parameter recursion."""
        pk = self.params0 if pk is None else pk
        a, b, c = self.coeffs.a, self.coeffs.b, self.coeffs.c
        if self.family == "ho":
            return ParamTriple(lam=pk.lam, sigma=pk.sigma, rho=-(pk.rho + a))
        if self.family == "morse":
            return ParamTriple(lam=pk.lam, sigma=pk.sigma + a, rho=-(pk.rho + b))
        # quadratic families share one recursion
        return ParamTriple(lam=pk.lam + a, sigma=pk.sigma + b, rho=-(pk.rho + c))

    def param_chain(self, n: int) -> list[ParamTriple]:
        """params0 followed by n recursion steps (length n+1)."""
        chain = [self.params0]
        for _ in range(n):
            chain.append(self.next_params(chain[-1]))
        return chain

    def remainder_R(self, pk: Optional[ParamTriple] = None) -> float:
        """The x-independent remainder of the separation identity.

        Generic form: R = q - (sigma1^2 - sigma0^2) - 2 (rho1 lam1 -
        rho0 lam0), with the family-specific source term q.  This is
        the authoritative oracle; the per-family printed summands are
        cross-checks against it.
        """
        pk = self.params0 if pk is None else pk
        p1 = self.next_params(pk)
        a, b, c = self.coeffs.a, self.coeffs.b, self.coeffs.c
        if self.family == "ho":
            q = a * (p1.lam + pk.lam)
        elif self.family == "morse":
            q = b * (p1.lam + pk.lam)
        else:
            q = c * (p1.lam + pk.lam) - a * (p1.rho - pk.rho)
        return q - (p1.sigma**2 - pk.sigma**2) - 2.0 * (p1.rho * p1.lam - pk.rho * pk.lam)

    # -- residual check ------------------------------------------------------

    def shape_invariance_residual(self, grid) -> float:
        """max over the grid of |V2_eff(x; p0) - V1_eff(x; p1) - R(p0)|."""
        mu = self.mumap.mu_array(np.atleast_1d(np.asarray(grid, dtype=float)))
        return self.shape_invariance_residual_of_mu(mu)

    def shape_invariance_residual_of_mu(self, mu_grid) -> float:
        """Same residual, evaluated at deformation-coordinate points."""
        p1 = self.next_params(self.params0)
        _, v2e0 = self.effective_pair_of_mu(mu_grid)
        v1e1, _ = self.effective_pair_of_mu(mu_grid, params=p1)
        r = self.remainder_R(self.params0)
        return float(np.max(np.abs(np.atleast_1d(v2e0 - v1e1 - r))))
