"""Collective spin model, its bosonic mapping, and the mean-field condensate.

The microscopic model is an infinite-range anisotropic Heisenberg exchange
between N spin-1/2 particles with single-spin decay.  A Holstein-Primakoff
expansion to leading order in 1/N maps it onto one self-interacting bosonic
mode; everything downstream works with that mode.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RootPolishError

__all__ = [
    "SpinModelParams",
    "BosonModel",
    "MeanField",
    "bosonize",
    "critical_coupling",
    "mean_field_amplitude",
    "saddle_residual",
    "solve_saddle",
]


@dataclass(frozen=True)
class SpinModelParams:
    """Microscopic spin-model inputs.

    Attributes
    ----------
    J : float
        Exchange coupling, J > 0.
    Delta : float
        Anisotropy, Delta >= 0.
    N : int
        Number of spin-1/2 particles, N >= 1.
    k : float
        Single-spin flip (decay) rate, k >= 0.
    """

    J: float
    Delta: float
    N: int
    k: float = 0.0

    def __post_init__(self) -> None:
        if not self.J > 0:
            raise DomainError(f"exchange coupling J must be positive, got {self.J}")
        if self.Delta < 0:
            raise DomainError(f"anisotropy Delta must be >= 0, got {self.Delta}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if self.k < 0:
            raise DomainError(f"decay rate k must be >= 0, got {self.k}")


@dataclass(frozen=True)
class BosonModel:
    """Bosonized mode parameters used by every downstream formula.

    Attributes
    ----------
    omega0 : float
        Bare mode frequency.  May be non-positive when produced by
        :func:`bosonize`; mean-field operations then reject it.
    lam : float
        Quartic self-interaction strength (the coefficient of the
        density-density term is lam/N).
    N : int
        Particle number carried over from the spin model; all 1/N
        corrections use it exactly.
    k : float
        Decay rate, k >= 0.
    """

    omega0: float
    lam: float
    N: int = 100
    k: float = 0.0

    def __post_init__(self) -> None:
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if self.k < 0:
            raise DomainError(f"decay rate k must be >= 0, got {self.k}")

    def require_positive_frequencies(self) -> None:
        """Reject sign combinations for which the mean-field formulas are
        meaningless (produced e.g. by :func:`bosonize` at Delta > 1/2)."""
        if self.omega0 <= 0:
            raise DomainError(
                f"operation requires omega0 > 0, got omega0 = {self.omega0}; "
                "construct the BosonModel with positive parameters directly"
            )

    def require_positive_coupling(self) -> None:
        if self.lam <= 0:
            raise DomainError(
                f"operation requires lam > 0, got lam = {self.lam}; "
                "construct the BosonModel with positive parameters directly"
            )


@dataclass(frozen=True)
class MeanField:
    """Stationary condensate amplitude at a given coupling.

    ``broken`` is true exactly when ``abs(phi0) > 0``; the Z2-symmetric
    solution phi0 = 0 always exists and is returned above the critical
    coupling.
    """

    phi0: complex
    broken: bool
    gamma: float

    def __post_init__(self) -> None:
        if self.broken != (abs(self.phi0) > 0):
            raise DomainError("broken flag inconsistent with phi0 magnitude")


def bosonize(params: SpinModelParams) -> BosonModel:
    """Map spin parameters onto the bosonic mode: omega0 = J(1-2 Delta),
    lam = J(Delta-1).

    The mapping is applied verbatim.  For Delta in the window where it
    yields a non-positive frequency or coupling a warning is emitted, since
    the mean-field sector then has no stable minimum; downstream operations
    enforce their own sign preconditions.
    """
    omega0 = params.J * (1.0 - 2.0 * params.Delta)
    lam = params.J * (params.Delta - 1.0)
    if omega0 <= 0 or lam <= 0:
        warnings.warn(
            f"bosonize produced omega0 = {omega0}, lam = {lam}; mean-field "
            "operations require both positive and will reject these values",
            stacklevel=2,
        )
    return BosonModel(omega0=omega0, lam=lam, N=params.N, k=params.k)


def critical_coupling(model: BosonModel) -> float:
    """Critical system-bath coupling gamma0 = (omega0^2 + k^2) / (pi omega0).

    This is where the zero-frequency dissipative mode goes soft and the
    normal phase destabilizes.
    """
    model.require_positive_frequencies()
    return (model.omega0**2 + model.k**2) / (np.pi * model.omega0)


def mean_field_amplitude(model: BosonModel, gamma: float) -> MeanField:
    """Condensate amplitude |phi0| = sqrt(N pi / lam) * (gamma0 - gamma)^{1/2}
    below the critical coupling, zero above it.

    By convention the returned amplitude is the non-negative real root; the
    complex root structure of the defining stationarity equation is exposed
    separately through :func:`solve_saddle`.
    """
    model.require_positive_frequencies()
    model.require_positive_coupling()
    if gamma < 0:
        raise DomainError(f"gamma must be >= 0, got {gamma}")
    gamma0 = critical_coupling(model)
    if gamma >= gamma0:
        return MeanField(phi0=0.0 + 0.0j, broken=False, gamma=gamma)
    amplitude = np.sqrt(model.N * np.pi / model.lam) * np.sqrt(gamma0 - gamma)
    return MeanField(phi0=complex(amplitude), broken=True, gamma=gamma)


def saddle_residual(model: BosonModel, bath, phi0: complex) -> complex:
    """Left-hand side of the stationarity condition for the condensate,

        (-omega0 + i k) phi0 + (lam / 2N) |phi0|^2 phi0 + Sigma(0) (conj(phi0) + phi0),

    with the static bath back-action Sigma(0) taken from the bath module's
    canonical self-energy so the mean-field and Green's-function sectors share
    one convention.  A vanishing residual identifies a self-consistent mean
    field; phi0 = 0 is always a solution.
    """
    from .bath import self_energy

    phi0 = complex(phi0)
    sigma0 = self_energy(bath, 0.0)
    return (
        (-model.omega0 + 1j * model.k) * phi0
        + (model.lam / (2.0 * model.N)) * abs(phi0) ** 2 * phi0
        + sigma0 * (phi0.conjugate() + phi0)
    )


def solve_saddle(
    model: BosonModel,
    bath,
    guess: complex | None = None,
    tol: float = 1e-12,
    maxiter: int = 100,
) -> complex:
    """Find a nonzero root of :func:`saddle_residual` by a 2D Newton
    iteration on (Re phi0, Im phi0).

    Writing B = -omega0 + (lam/2N)|phi0|^2, the nonzero roots satisfy
    B^2 + 2 Sigma(0) B + k^2 = 0, which seeds the iteration; the branch
    whose amplitude vanishes at the critical coupling is chosen.  Used to
    quantify how far the real closed-form amplitude sits from an exact
    stationary point.

    Raises
    ------
    DomainError
        If no nonzero stationary point exists (Sigma(0) < k, or the
        resulting squared amplitude is non-positive).
    RootPolishError
        If Newton does not converge.
    """
    from .bath import self_energy

    model.require_positive_frequencies()
    model.require_positive_coupling()
    sigma0 = self_energy(bath, 0.0)
    if guess is None:
        disc = sigma0**2 - model.k**2
        if disc < 0:
            raise DomainError(
                "no nonzero stationary point: static back-action Sigma(0) "
                f"= {sigma0} is below the decay rate k = {model.k}"
            )
        # Root of B^2 + 2 Sigma0 B + k^2 with B -> -omega0 at the critical
        # coupling, i.e. the branch that vanishes there.
        b = -(sigma0 + np.sqrt(disc))
        r2 = 2.0 * model.N * (model.omega0 + b) / model.lam
        if r2 <= 0:
            raise DomainError(
                "no nonzero stationary point at this coupling: squared "
                f"amplitude would be {r2}"
            )
        # y/x = -k/B fixes the phase of the seed.
        x = np.sqrt(r2 / (1.0 + (model.k / b) ** 2))
        guess = complex(x, -model.k * x / b)

    z = complex(guess)
    lam_2n = model.lam / (2.0 * model.N)
    for _ in range(maxiter):
        x, y = z.real, z.imag
        r2 = x * x + y * y
        f = saddle_residual(model, bath, z)
        if abs(f) < tol * max(1.0, abs(z)):
            return z
        j11 = -model.omega0 + lam_2n * (3 * x * x + y * y) + 2.0 * sigma0
        j12 = -model.k + lam_2n * 2 * x * y
        j21 = model.k + lam_2n * 2 * x * y
        j22 = -model.omega0 + lam_2n * (x * x + 3 * y * y)
        det = j11 * j22 - j12 * j21
        if det == 0:
            raise RootPolishError("singular Jacobian in saddle Newton solve")
        dx = (f.real * j22 - f.imag * j12) / det
        dy = (f.imag * j11 - f.real * j21) / det
        z = complex(x - dx, y - dy)
    f = saddle_residual(model, bath, z)
    if abs(f) < tol * max(1.0, abs(z)):
        return z
    raise RootPolishError(
        f"saddle Newton solve did not converge: residual {abs(f):.3e} at {z}"
    )
