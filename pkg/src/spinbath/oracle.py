"""Two independent brute-force validators.

(a) A truncated-Fock Lindblad steady-state solver for the decoupled
    (gamma = 0) interacting mode: the superoperator of

        drho/dt = -i[H, rho] + k (2 a rho a' - {a'a, rho}),
        H = omega0 a'a + (lam/N) (a'a)^2,

    is assembled on a Fock space cut at n_max and solved for its null
    vector.  Since [H, a'a] = 0 the superoperator is block diagonal in the
    coherence index m - n, and the diagonal (population) block is a closed
    birth-death cascade; the reported relaxation rate is the slowest
    nonzero decay rate of that population block.

(b) A discretized-bath Lyapunov solver for the gamma > 0, lam = 0 sector:
    the bath is resolved into M explicit modes on a logarithmic frequency
    grid, coupled through position-position terms g_j x_a x_j with
    couplings calibrated to the same self-energy convention as the
    analytic route, and the stationary quadrature covariance of the
    (M+1)-mode linear system is obtained from the continuous-time Lyapunov
    equation via a real Schur factorization and LAPACK's trsyl.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from .bath import BathSpec, calibration_constant, spectral_density
from .errors import DomainError, NumericalError, StabilityError, TruncationError
from .model import BosonModel

__all__ = [
    "FockTruncation",
    "LindbladResult",
    "DiscretizedBath",
    "lindblad_steady_state",
    "lyapunov_density",
    "drift_matrix",
    "drift_eigenvalues",
]


@dataclass(frozen=True)
class FockTruncation:
    """Fock cutoff with auto-escalation policy: n_max doubles until the
    population of the last level drops below ``tail_tol`` or ``n_cap`` is
    reached."""

    n_max: int = 20
    tail_tol: float = 1e-8
    n_cap: int = 640

    def __post_init__(self) -> None:
        if self.n_max < 2:
            raise DomainError(f"n_max must be >= 2, got {self.n_max}")


@dataclass(frozen=True)
class LindbladResult:
    density: float
    slowest_rate: float
    vacuum_fidelity: float
    tail: float
    n_max: int
    converged: bool


def _fock_operators(n_max: int):
    n = np.arange(n_max + 1, dtype=float)
    a = np.diag(np.sqrt(n[1:]), k=1)
    return n, a


def _superoperator(model: BosonModel, n_max: int) -> np.ndarray:
    """Dense Liouvillian in the row-major convention vec(A rho B) =
    (A kron B^T) vec(rho); all operators here are real."""
    n, a = _fock_operators(n_max)
    h = np.diag(model.omega0 * n + (model.lam / model.N) * n**2)
    nop = np.diag(n)
    eye = np.eye(n_max + 1)
    k = model.k
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    lv += k * (2.0 * np.kron(a, a) - np.kron(nop, eye) - np.kron(eye, nop))
    return lv


def lindblad_steady_state(
    model: BosonModel, trunc: FockTruncation = FockTruncation()
) -> LindbladResult:
    """Steady state of the decoupled damped interacting mode.

    Returns the steady occupation, the slowest nonzero decay rate of the
    population sector, the overlap with the Fock vacuum, and truncation
    diagnostics.  Requires k > 0 (otherwise no unique steady state).
    """
    if model.k <= 0:
        raise DomainError("lindblad_steady_state requires k > 0")

    n_max = trunc.n_max
    while True:
        dim = n_max + 1
        lv = _superoperator(model, n_max)
        # Unique steady state: replace the first row (the rho_00 equation,
        # which is a linear combination of the others through trace
        # preservation) by the trace condition.
        sys = lv.copy()
        eye_vec = np.eye(dim, dtype=complex).reshape(-1)
        sys[0, :] = eye_vec
        rhs = np.zeros(dim * dim, dtype=complex)
        rhs[0] = 1.0
        rho = np.linalg.solve(sys, rhs).reshape(dim, dim)

        resid = np.abs(lv @ rho.reshape(-1))
        resid[0] = 0.0  # replaced equation
        if resid.max() > 1e-9:
            raise NumericalError(
                f"Lindblad steady state residual too large: {resid.max():.3e}"
            )
        pops = np.real(np.diag(rho))
        tail = float(pops[-1])
        if tail < trunc.tail_tol:
            break
        if 2 * n_max > trunc.n_cap:
            raise TruncationError(
                f"tail population {tail:.3e} above {trunc.tail_tol} at the "
                f"truncation cap n_max = {n_max}"
            )
        n_max *= 2

    n = np.arange(dim, dtype=float)
    density = float(pops @ n)
    fidelity = float(np.real(rho[0, 0]))

    # Population block: dp_n/dt = 2k[(n+1) p_{n+1} - n p_n].
    pop_gen = np.diag(-2.0 * model.k * n) + np.diag(
        2.0 * model.k * n[1:], k=1
    )
    rates = -np.linalg.eigvals(pop_gen).real
    nonzero = rates[rates > 1e-10 * max(1.0, 2.0 * model.k * n_max)]
    slowest = float(nonzero.min()) if nonzero.size else 0.0

    return LindbladResult(
        density=density,
        slowest_rate=slowest,
        vacuum_fidelity=fidelity,
        tail=tail,
        n_max=n_max,
        converged=True,
    )


@dataclass(frozen=True)
class DiscretizedBath:
    """Explicit bath modes approximating a continuum spectral density.

    Mode frequencies sit at the midpoints of a logarithmic grid over
    [lo_factor * Omega, hi_factor * Omega]; squared couplings follow the
    midpoint rule g_j^2 = C J(omega_j) dOmega_j, carrying the same global
    calibration constant C as the numeric self-energy path so both
    validation routes share one Sigma convention.
    """

    source: BathSpec
    M: int
    omega: np.ndarray
    g: np.ndarray

    @classmethod
    def build(
        cls,
        bath: BathSpec,
        M: int,
        lo_factor: float = 1e-3,
        hi_factor: float = 50.0,
    ) -> "DiscretizedBath":
        if M < 1:
            raise DomainError(f"need at least one bath mode, got M = {M}")
        edges = np.logspace(
            np.log10(lo_factor * bath.Omega), np.log10(hi_factor * bath.Omega), M + 1
        )
        mid = 0.5 * (edges[:-1] + edges[1:])
        dw = np.diff(edges)
        if bath.gamma == 0.0:
            g = np.zeros(M)
        else:
            g = np.sqrt(calibration_constant() * spectral_density(bath, mid) * dw)
        return cls(source=bath, M=M, omega=mid, g=g)

    def moment(self) -> float:
        """Convergence diagnostic: sum_j g_j^2 / (omega_j^2 + Omega^2)."""
        return float(np.sum(self.g**2 / (self.omega**2 + self.source.Omega**2)))


def drift_matrix(
    model: BosonModel, dbath: DiscretizedBath, eps: Optional[float] = None
) -> tuple:
    """Drift matrix A and noise diagonal D of the quadrature system
    (x_a, p_a, x_1, p_1, ...), with position-position coupling g_j x_a x_j.

    The system mode damps at k with vacuum noise k; each bath mode carries
    the regularization damping eps (default 1e-6 Omega) and the matching
    vacuum noise, so an uncoupled bath mode sits exactly in its vacuum.
    """
    if eps is None:
        eps = 1e-6 * dbath.source.Omega
    m_modes = dbath.M
    n = 2 * (m_modes + 1)
    a = np.zeros((n, n))
    k, w0 = model.k, model.omega0
    a[0, 0] = -k
    a[0, 1] = w0
    a[1, 0] = -w0
    a[1, 1] = -k
    idx = 2 + 2 * np.arange(m_modes)
    a[idx, idx] = -eps
    a[idx, idx + 1] = dbath.omega
    a[idx + 1, idx] = -dbath.omega
    a[idx + 1, idx + 1] = -eps
    a[1, idx] = -dbath.g
    a[idx + 1, 0] = -dbath.g
    d = np.full(n, eps)
    d[0] = d[1] = k
    return a, d


def _schur_block_eigenvalues(t: np.ndarray) -> np.ndarray:
    """Eigenvalues read off the diagonal 1x1 / 2x2 blocks of a real Schur
    form (quasi-upper-triangular)."""
    n = t.shape[0]
    eigs = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            tr = t[i, i] + t[i + 1, i + 1]
            det = t[i, i] * t[i + 1, i + 1] - t[i, i + 1] * t[i + 1, i]
            disc = (tr / 2.0) ** 2 - det
            root = np.sqrt(complex(disc))
            eigs.extend([tr / 2.0 + root, tr / 2.0 - root])
            i += 2
        else:
            eigs.append(complex(t[i, i]))
            i += 1
    return np.asarray(eigs)


def drift_eigenvalues(
    model: BosonModel, dbath: DiscretizedBath, eps: Optional[float] = None
) -> np.ndarray:
    a, _ = drift_matrix(model, dbath, eps)
    return np.linalg.eigvals(a)


def lyapunov_density(
    model: BosonModel, dbath: DiscretizedBath, eps: Optional[float] = None
) -> float:
    """Steady occupation of the system mode of the discretized quadratic
    model, from the continuous-time Lyapunov equation A V + V A^T = -D.

    Requires lam = 0 (quadratic sector) and k > 0.  Raises StabilityError
    when the drift matrix has an eigenvalue with positive real part, which
    signals a coupling at or beyond the discretized model's transition.
    """
    if model.lam != 0.0:
        raise DomainError(
            f"lyapunov_density is exact only for lam = 0, got lam = {model.lam}"
        )
    if model.k <= 0:
        raise DomainError("lyapunov_density requires k > 0")

    a, d = drift_matrix(model, dbath, eps)
    t, z = linalg.schur(a, output="real")
    eigs = _schur_block_eigenvalues(t)
    worst = float(eigs.real.max())
    if worst > 0.0:
        raise StabilityError(
            f"drift matrix unstable: max Re(eigenvalue) = {worst:.3e} "
            "(coupling at or beyond the discretized transition)"
        )

    # Solve T Y + Y T^T = F in the Schur basis with LAPACK trsyl, then
    # transform back; verify the residual since the scale convention of
    # trsyl is easy to get wrong silently.
    q = -np.diag(d)
    f = z.T @ q @ z
    trsyl = linalg.get_lapack_funcs("trsyl", (t, f))
    y, scale, info = trsyl(t, t, f, tranb="T")
    if info < 0:
        raise NumericalError(f"trsyl failed with info = {info}")
    v = z @ (y * scale) @ z.T
    n = a.shape[0]
    resid = np.abs(a @ v + v @ a.T - q).max() / max(np.abs(q).max(), 1e-300)
    if resid > 1e-8:
        raise NumericalError(
            f"Lyapunov solve residual too large: {resid:.3e}"
        )
    return float((v[0, 0] + v[1, 1] - 1.0) / 2.0)
