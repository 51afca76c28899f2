"""Steady-state occupation, critical-divergence fits, and response sweeps.

The steady-state density follows from the frequency integral of the Keldysh
correlator,

    C = 2 <a'a> + 1 = int dw/2pi  iG^K(w),

evaluated by adaptive quadrature over a finite window plus an analytic
1/w^2 tail correction.  Near the critical coupling the density diverges;
the divergence exponent alpha in 2<a'a> + 1 ~ (gamma0 - gamma)^(-alpha) is
measured by a log-log least-squares fit on a geometric approach grid.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .bath import BathSpec, self_energy
from .errors import (
    DomainError,
    FitDegeneracyError,
    QuadratureError,
    SingularIntegrandError,
)
from .greens import keldysh_correlator, spectral_response
from .model import BosonModel, critical_coupling

__all__ = [
    "SweepResult",
    "ExponentFit",
    "steady_density",
    "fit_divergence_exponent",
    "sweep_response",
]


@dataclass(frozen=True)
class SweepResult:
    """Dense (gamma, omega) surfaces of A and iG^K for plotting/export.

    Frequencies are stored as given (the CLI passes omega/Omega); the peak
    track holds the argmax frequency of A for each coupling row.
    """

    gamma_over_gamma0: np.ndarray
    omega: np.ndarray
    response: np.ndarray
    correlator: np.ndarray
    peak_track: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        ng, nw = self.gamma_over_gamma0.size, self.omega.size
        if self.response.shape != (ng, nw) or self.correlator.shape != (ng, nw):
            raise DomainError("surface shapes do not match the axes")
        if np.any(np.diff(self.gamma_over_gamma0) <= 0) or np.any(
            np.diff(self.omega) <= 0
        ):
            raise DomainError("sweep axes must be strictly increasing")


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares divergence exponent with fit diagnostics."""

    alpha: float
    window: tuple
    stderr: float
    r_squared: float
    intercept: float = 0.0

    def __post_init__(self) -> None:
        lo, hi = self.window
        if not lo < hi:
            raise DomainError("fit window must satisfy gamma_lo < gamma_hi")


def steady_density(
    model: BosonModel,
    bath: BathSpec,
    sigma: Optional[Callable] = None,
    atol: float = 1e-12,
    rtol: float = 1e-11,
) -> float:
    """Steady-state occupation <a'a> = (C - 1)/2 from quadrature of iG^K.

    Window [-W, W] with W = 1e3 max(omega0, k, Omega), then the analytic
    tail 4k/(2 pi W) from iG^K -> 2k/w^2.  Requires k > 0 and a coupling
    below the transition (non-singular integrand).
    """
    if model.k <= 0:
        raise DomainError("steady_density requires k > 0")
    s0 = sigma(0.0) if sigma is not None else self_energy(bath, 0.0)
    gate = model.omega0**2 + model.k**2 - 2.0 * model.omega0 * s0
    if gate <= 0:
        raise SingularIntegrandError(
            "integrand of the density quadrature is singular: coupling at or "
            f"beyond the transition (zero-frequency gap {gate})"
        )
    w_cut = 1e3 * max(abs(model.omega0), model.k, bath.Omega)

    def f(w: float) -> float:
        return keldysh_correlator(model, bath, w, sigma)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(
            f,
            -w_cut,
            w_cut,
            points=[-abs(model.omega0), 0.0, abs(model.omega0)],
            limit=1000,
            epsabs=atol,
            epsrel=rtol,
        )
    if not np.isfinite(val) or err > 100.0 * max(atol, rtol * abs(val)):
        raise QuadratureError(
            f"density quadrature did not converge: value {val}, error {err}"
        )
    c_total = val / (2.0 * np.pi) + 4.0 * model.k / (2.0 * np.pi * w_cut)
    return (c_total - 1.0) / 2.0


def fit_divergence_exponent(
    model: BosonModel,
    bath: BathSpec,
    window: tuple,
    n_points: int = 24,
    sigma: Optional[Callable] = None,
) -> ExponentFit:
    """Fit 2<a'a> + 1 ~ (gamma0 - gamma)^(-alpha) on a geometric grid in
    (gamma0 - gamma) inside ``window`` = (gamma_lo, gamma_hi).

    The slope of log(2<a'a> + 1) against -log(gamma0 - gamma) is alpha;
    standard error and R^2 come from ordinary least squares.  A fit with
    R^2 < 0.9 raises, since the exponent is then meaningless.
    """
    gamma0 = critical_coupling(model)
    lo, hi = window
    if not (0.0 < lo < hi < gamma0):
        raise DomainError(
            f"fit window must satisfy 0 < lo < hi < gamma0 = {gamma0}, got {window}"
        )
    if n_points < 8:
        raise DomainError("fit needs at least 8 sample points")

    # Geometric approach to the transition: even spacing in log(gamma0-gamma).
    dists = np.exp(np.linspace(np.log(gamma0 - lo), np.log(gamma0 - hi), n_points))
    gammas = gamma0 - dists
    dens = np.array(
        [steady_density(model, bath.with_gamma(g), sigma) for g in gammas]
    )
    x = -np.log(dists)
    y = np.log(2.0 * dens + 1.0)

    n = x.size
    xbar, ybar = x.mean(), y.mean()
    sxx = float(((x - xbar) ** 2).sum())
    slope = float(((x - xbar) * (y - ybar)).sum() / sxx)
    intercept = ybar - slope * xbar
    resid = y - slope * x - intercept
    ssr = float((resid**2).sum())
    sst = float(((y - ybar) ** 2).sum())
    r2 = 1.0 - ssr / sst if sst > 0 else 0.0
    stderr = np.sqrt(ssr / (n - 2) / sxx)
    if r2 < 0.9:
        raise FitDegeneracyError(
            f"divergence fit is degenerate: R^2 = {r2:.4f} on window {window}"
        )
    return ExponentFit(
        alpha=slope,
        window=(float(lo), float(hi)),
        stderr=float(stderr),
        r_squared=float(r2),
        intercept=float(intercept),
    )


def sweep_response(
    model: BosonModel,
    bath: BathSpec,
    gamma_fracs: np.ndarray,
    omegas: np.ndarray,
    metadata: Optional[dict] = None,
) -> SweepResult:
    """A(w) and iG^K(w) surfaces over coupling (in units of gamma0) and
    frequency grids.  Rows are computed independently and written by index,
    so the output is deterministic.  Points where the shared denominator
    vanishes (the critical point) come out as +inf."""
    if model.k <= 0:
        raise DomainError("sweep_response requires k > 0")
    gamma_fracs = np.asarray(gamma_fracs, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    gamma0 = critical_coupling(model)

    resp = np.empty((gamma_fracs.size, omegas.size))
    corr = np.empty_like(resp)
    for i, frac in enumerate(gamma_fracs):
        b = bath.with_gamma(frac * gamma0)
        with np.errstate(divide="ignore", invalid="ignore"):
            resp[i] = spectral_response(model, b, omegas)
            corr[i] = keldysh_correlator(model, b, omegas)
    peak = omegas[np.argmax(resp, axis=1)]
    return SweepResult(
        gamma_over_gamma0=gamma_fracs,
        omega=omegas,
        response=resp,
        correlator=corr,
        peak_track=peak,
        metadata=metadata or {},
    )
