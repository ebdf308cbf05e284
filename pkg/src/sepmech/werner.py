"""Closed-form 2x2 Werner / Bell-diagonal pipeline.

For W(p) = (1-p)|Psi-><Psi-| + (p/4) 1 (x) 1 the doubled antisymmetric
space is one-dimensional, so the whole h-matrix set collapses to a single
real diagonal matrix h(p) = (1/8) diag(4-3p, p, p, p) and the one-particle
energy to a single quartic modulus.  A Gaussian (Hubbard-Stratonovich)
rewrite of exp(-beta |z^T h z|^2) then reduces the one-particle partition
function to a one-dimensional integral

    Z1 = pi^4 / (4 bt det h) * exp(tr[w' h]) *
         integral_0^inf dx exp(-x/4 bt) / sqrt(det(x + w' wbar')),

over the rescaled multiplier w' = h^{-1/2} omega h^{-1/2}, restricted here
to w' = diag(gamma, lam, lam, lam).  Setting the gradient of log Z1 in w'
to zero enforces the averaged Stiefel constraints; the p-region where the
minimized gradient norm vanishes is the equipartition region, and
-d log Z1 / d beta on it gives the average energy <<E_1>>.

Units: the public beta multiplies the bare quartic |(4-3p) z1^2 + p z2^2
+ p z3^2 + p z4^2|^2, which is the convention the scan and scaling
defaults below are calibrated in.  The canonical energy sum_i c2(psi_i)
carries the prefactor 1/32, so the internal decay constant of the reduced
integral is bt = 64 beta and the matching inverse temperature of the
canonical machinery in `statmech` is 32 beta.  Slopes and onsets are
unaffected by this fixed rescaling; absolute <<E_1>> values are reported
in the public units.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .concurrence import h_matrices
from .quantum_core import DensityMatrix, EigenEnsemble, PureState

BETA_INTERNAL_SCALE = 64.0
CLOSED_FORM_PREFACTOR = 1.0 / 32.0
RESIDUAL_THRESHOLD = 1e-6
INTERIOR_MARGIN = 1e-3
_GK_TOL = 1e-7


class ConstraintsUnsatisfiable(RuntimeError):
    """No positive multiplier solves the averaged constraints at this p."""


class QuadratureError(RuntimeError):
    """The reduced integral did not converge to tolerance."""


@dataclass(frozen=True)
class WernerParams:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class OmegaPrime:
    """Restricted multiplier diag(gamma, lam, lam, lam), both entries > 0."""

    gamma: float
    lam: float

    def __post_init__(self):
        if not (self.gamma > 0 and self.lam > 0):
            raise ValueError("gamma and lam must be positive")


@dataclass(frozen=True)
class SaddleResult:
    gamma_star: float
    lambda_star: float
    residual_norm: float
    interior: bool
    iterations: int


@dataclass(frozen=True)
class EquipartitionScan:
    p_grid: tuple
    residuals: tuple
    threshold: float
    region_start: float | None
    saddles: tuple


# Bell basis, row-major (a, b) amplitude order
_PSI_MINUS = np.array([0, 1, -1, 0]) / np.sqrt(2.0)
_PSI_PLUS = np.array([0, 1, 1, 0]) / np.sqrt(2.0)
_PHI_MINUS = np.array([1, 0, 0, -1]) / np.sqrt(2.0)
_PHI_PLUS = np.array([1, 0, 0, 1]) / np.sqrt(2.0)


def werner_state(p: float) -> DensityMatrix:
    """W(p) = (1-p) |Psi-><Psi-| + (p/4) identity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    mat = (1 - p) * np.outer(_PSI_MINUS, _PSI_MINUS) + (p / 4.0) * np.eye(4)
    return DensityMatrix(2, 2, mat)


def _bell_ensemble(weights) -> EigenEnsemble:
    """Ensemble [sqrt(q0) Psi-, i sqrt(q1) Psi+, i sqrt(q2) Phi-, sqrt(q3) Phi+].

    The i phases on the middle two vectors are what make every h-matrix
    entry real and nonnegative, hence h diagonal.
    """
    q0, q1, q2, q3 = weights
    amps = [np.sqrt(q0) * _PSI_MINUS,
            1j * np.sqrt(q1) * _PSI_PLUS,
            1j * np.sqrt(q2) * _PHI_MINUS,
            np.sqrt(q3) * _PHI_PLUS]
    vecs = tuple(PureState(2, 2, a) for a in amps)
    return EigenEnsemble(2, 2, 4, vecs, np.asarray(weights, dtype=float))


def werner_eigenensemble(p: float) -> EigenEnsemble:
    """The fixed eigenensemble of W(p) with the phase choice that makes h real."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]; p = 0 is a pure state")
    return _bell_ensemble((1 - 3 * p / 4, p / 4, p / 4, p / 4))


def h_matrix(p: float) -> np.ndarray:
    """h(p) = (1/8) diag(4-3p, p, p, p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return np.diag([(4 - 3 * p) / 8.0, p / 8.0, p / 8.0, p / 8.0]).astype(complex)


def bell_diagonal_h(q0: float, q1: float, q2: float, q3: float) -> np.ndarray:
    """h of a Bell-diagonal state, computed generically from its eigenensemble.

    Reduces to h_matrix(p) at (q0, q1, q2, q3) = (1-3p/4, p/4, p/4, p/4).
    A zero weight gives a matching zero on the diagonal; callers wanting a
    strictly positive h should drop that eigenvector and reduce the rank.
    """
    q = np.array([q0, q1, q2, q3], dtype=float)
    if q.min() < 0 or abs(q.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be nonnegative and sum to 1")
    hset = h_matrices(_bell_ensemble(q))
    return hset.matrices[0, 0]


def energy_closed_form(z, p: float) -> float:
    """One-particle energy (1/32) |(4-3p) z1^2 + p z2^2 + p z3^2 + p z4^2|^2.

    The quartic inside the modulus is 8 z^T h(p) z; the 1/32 makes this
    equal to c2 of the ensemble vector psi(z), i.e. 2 |z^T h z|^2.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    z = np.asarray(z, dtype=complex).ravel()
    quart = (4 - 3 * p) * z[0] ** 2 + p * (z[1] ** 2 + z[2] ** 2 + z[3] ** 2)
    return CLOSED_FORM_PREFACTOR * float(np.abs(quart) ** 2)


def det_m(s: complex, omega: np.ndarray, p: float) -> complex:
    """Determinant of the 8x8 Gaussian block matrix [[omega, 2i sbar h], [2i s h, omegabar]].

    Factorizes as det h(p)^2 * det(4|s|^2 + w' wbar') with
    w' = h^{-1/2} omega h^{-1/2}; the direct determinant is computed here and
    the factorization is checked against it in the tests.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]; h(p) must be invertible")
    h = h_matrix(p)
    omega = np.asarray(omega, dtype=complex)
    top = np.hstack([omega, 2j * np.conj(s) * h])
    bot = np.hstack([2j * s * h, omega.conj()])
    return complex(np.linalg.det(np.vstack([top, bot])))


# 15-point Kronrod nodes and weights on [-1, 1], with the embedded 7-point
# Gauss weights on the odd-index nodes; the K-G difference is the per-panel
# error estimate.
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529])
_WG = np.zeros(15)
_WG[1::2] = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870])


def _panel_edges(bt: float, lo_scale: float, hi_scale: float) -> np.ndarray:
    """Geometric panels from the smallest structural scale out to the point
    where the exponential factor alone is below e^{-45} of its peak."""
    lo = min(lo_scale, hi_scale, 4.0 * bt)
    xmax = 4.0 * bt * 45.0 + 8.0 * max(lo_scale, hi_scale)
    first = lo / 8.0
    edges = [0.0, first]
    x = first
    while x < xmax:
        x *= 2.0
        edges.append(min(x, xmax))
    return np.array(edges)


def _moments(bt: float, g: float, lam: float):
    """All moments of the weight exp(-x/4bt) (x+g^2)^{-1/2} (x+lam^2)^{-3/2}.

    Returns (I0, <g/(x+g^2)>, <lam/(x+lam^2)>, <x>, gk_error) from one
    vectorized Gauss-Kronrod pass over shared panels.
    """
    a, b = g * g, lam * lam
    edges = _panel_edges(bt, a, b)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = mid[:, None] + half[:, None] * _XK[None, :]  # (panels, 15)
    w = np.exp(-x / (4.0 * bt)) * (x + a) ** -0.5 * (x + b) ** -1.5
    f = np.stack([w, w * (g / (x + a)), w * (lam / (x + b)), w * x])
    k = np.einsum("mpn,n,p->m", f, _WK, half)
    gq = np.einsum("mpn,n,p->m", f, _WG, half)
    err = np.max(np.abs(k - gq) / np.maximum(np.abs(k), 1e-300))
    return k[0], k[1] / k[0], k[2] / k[0], k[3] / k[0], err


def _checked_moments(beta: float, op: OmegaPrime, p: float):
    if beta <= 0:
        raise ValueError("beta must be positive")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    bt = BETA_INTERNAL_SCALE * beta
    i0, mg, ml, mx, err = _moments(bt, op.gamma, op.lam)
    if not (np.isfinite(i0) and i0 > 0 and err < _GK_TOL):
        raise QuadratureError(f"reduced integral did not converge "
                              f"(estimate {i0!r}, rel error {err:.3e})")
    return bt, i0, mg, ml, mx


def log_z1_quadrature(beta: float, op: OmegaPrime, p: float) -> float:
    """log Z1 by one-dimensional quadrature, log-domain throughout."""
    bt, i0, _, _, _ = _checked_moments(beta, op, p)
    h11, h22 = (4 - 3 * p) / 8.0, p / 8.0
    det_h = (4 - 3 * p) * p ** 3 / 4096.0
    return (4.0 * np.log(np.pi) - np.log(4.0 * bt * det_h)
            + op.gamma * h11 + 3.0 * op.lam * h22 + np.log(i0))


def grad_log_z1(beta: float, op: OmegaPrime, p: float):
    """Averaged-constraint residuals (d log Z1 / d gamma, (1/3) d log Z1 / d lam).

    res_gamma = h11 - <gamma/(x+gamma^2)>, res_lambda = h22 - <lam/(x+lam^2)>;
    the lam component carries multiplicity 3 in the full gradient and in the
    Hilbert-Schmidt norm used by saddle_search.
    """
    _, _, mg, ml, _ = _checked_moments(beta, op, p)
    return (4 - 3 * p) / 8.0 - mg, p / 8.0 - ml


def grad_log_z1_full(beta: float, omega_prime: np.ndarray, p: float) -> np.ndarray:
    """Gradient h(p) - <(x + w' wbar')^{-1} w'>_w for a generic Hermitian w' > 0.

    Used to confirm that the restricted diagonal form is self-consistent:
    at diag(gamma, lam, lam, lam) this reduces entrywise to grad_log_z1.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    wp = np.asarray(omega_prime, dtype=complex)
    if np.max(np.abs(wp - wp.conj().T)) > 1e-10:
        raise ValueError("omega_prime must be Hermitian")
    bt = BETA_INTERNAL_SCALE * beta
    M = wp @ wp.conj()
    d, V = np.linalg.eig(M)
    d = d.real  # product of two positive matrices: spectrum is real positive
    if d.min() <= 0:
        raise ValueError("omega_prime must be positive-definite")
    edges = _panel_edges(bt, d.min(), d.max())
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * _XK[None, :]).ravel()
    wts = (np.tile(_WK, len(half)) * np.repeat(half, 15))
    scal = np.exp(-x / (4.0 * bt)) / np.sqrt(np.prod(x[:, None] + d[None, :], axis=1))
    T = np.linalg.solve(V, wp)
    resolvent = np.einsum("ai,ki,ib->kab", V, 1.0 / (x[:, None] + d[None, :]), T)
    i0 = float(wts @ scal)
    avg = np.einsum("k,k,kab->ab", wts, scal, resolvent) / i0
    return h_matrix(p) - avg


def saddle_search(beta: float, p: float, tol: float = 1e-9,
                  restarts: int = 16, seed=0) -> SaddleResult:
    """Minimize res_gamma^2 + 3 res_lambda^2 over (gamma, lam) > 0.

    Multi-start Nelder-Mead in log parameters (positivity for free), seeded
    from log-uniform draws plus the beta -> inf interior solution when it
    exists, then a damped Newton polish on the residual 2-vector.  Converged
    interior saddles come out with residual norms near machine precision;
    outside the equipartition region the minimum sits on the gamma -> 0
    boundary and the norm stays finite.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    bt = BETA_INTERNAL_SCALE * beta
    h11, h22 = (4 - 3 * p) / 8.0, p / 8.0
    rng = np.random.default_rng(seed)

    def residual(g, lam):
        _, mg, ml, _, _ = _moments(bt, g, lam)
        return h11 - mg, h22 - ml

    def fval(u):
        g, lam = np.exp(np.clip(u, -40, 40))
        rg, rl = residual(g, lam)
        f = rg * rg + 3.0 * rl * rl
        return f if np.isfinite(f) else 1e300

    starts = [rng.uniform(np.log(1e-2), np.log(1e2), 2) for _ in range(restarts)]
    if 3 * h22 > h11 and 1 / h11 > 1 / (3 * h22 - h11):
        # interior solution of the beta -> inf limit, the best start available
        lam_inf = 1 / (3 * h22 - h11)
        starts.insert(0, np.log([1 / h11 - lam_inf, lam_inf]))
    best, iterations = None, 0
    for u0 in starts:
        r = minimize(fval, u0, method="Nelder-Mead",
                     options=dict(xatol=1e-10, fatol=1e-22, maxiter=300, maxfev=300))
        iterations += r.nit
        if best is None or r.fun < best.fun:
            best = r
        if best.fun < tol * tol:
            break

    u, fu = best.x.copy(), best.fun
    hstep = 1e-6
    for _ in range(40):
        r0 = np.array(residual(*np.exp(u)))
        J = np.empty((2, 2))
        for j in range(2):
            up, um = u.copy(), u.copy()
            up[j] += hstep
            um[j] -= hstep
            J[:, j] = (np.array(residual(*np.exp(up)))
                       - np.array(residual(*np.exp(um)))) / (2 * hstep)
        try:
            du = np.linalg.solve(J, -r0)
        except np.linalg.LinAlgError:
            break
        step, improved = 1.0, False
        for _ in range(20):
            un = u + step * du
            fn = fval(un)
            if fn < fu:
                u, fu, improved = un, fn, True
                break
            step *= 0.5
        iterations += 1
        if not improved or fu < 1e-28:
            break
    g, lam = np.exp(u)
    return SaddleResult(float(g), float(lam), float(np.sqrt(fu)),
                        bool(min(g, lam) > INTERIOR_MARGIN), iterations)


def equipartition_scan(p_grid, beta: float, threshold: float = RESIDUAL_THRESHOLD,
                       seed=0) -> EquipartitionScan:
    """Minimized residual norm per grid p; detects the onset of the region
    where the averaged constraints become satisfiable.

    region_start is the smallest grid p from which every larger grid p also
    has residual below threshold, or None if the tail never stays below.
    """
    p_grid = tuple(float(p) for p in p_grid)
    children = np.random.SeedSequence(seed).spawn(max(len(p_grid), 1))
    saddles = tuple(saddle_search(beta, p, seed=s)
                    for p, s in zip(p_grid, children))
    residuals = tuple(s.residual_norm for s in saddles)
    region_start = None
    for p, res in zip(reversed(p_grid), reversed(residuals)):
        if res < threshold:
            region_start = p
        else:
            break
    return EquipartitionScan(p_grid, residuals, threshold, region_start, saddles)


def avg_energy_werner(beta: float, p: float, seed=0) -> float:
    """<<E_1>> = -d log Z1/d beta at the saddle: 1/beta - <x>/(256 beta^2).

    Raises ConstraintsUnsatisfiable when no positive multiplier solves the
    averaged constraints at this p (outside the equipartition region).
    """
    sad = saddle_search(beta, p, seed=seed)
    if sad.residual_norm >= RESIDUAL_THRESHOLD:
        raise ConstraintsUnsatisfiable(
            f"constraints unsatisfiable at p={p} (residual {sad.residual_norm:.3e})")
    _, _, _, _, mx = _checked_moments(beta, OmegaPrime(sad.gamma_star, sad.lambda_star), p)
    return 1.0 / beta - mx / (256.0 * beta * beta)
