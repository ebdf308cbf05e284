"""Dense complex linear algebra and quantum-state primitives.

Bipartite states live on C^m (x) C^n.  Pure states are stored as flat
amplitude vectors in row-major (a, b) order, density matrices as
mn x mn arrays.  Provides tensor products, partial traces, eigenvector
ensembles of a mixed state, Haar-random unitaries, and the partial
transpose (PPT) entanglement test.

All functions are pure; RNG state is caller-owned and never global.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
DEFAULT_EIGENVALUE_CUTOFF = 1e-10


def _as_rng(seed) -> np.random.Generator:
    """Accept an int seed, a SeedSequence, or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class DensityMatrix:
    """Bipartite mixed state: Hermitian, PSD, unit trace mn x mn matrix."""

    dimA: int
    dimB: int
    mat: np.ndarray

    def __post_init__(self):
        m, n = self.dimA, self.dimB
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        if mat.shape != (m * n, m * n):
            raise ValueError(f"expected {(m*n, m*n)} matrix, got {mat.shape}")
        if not np.all(np.isfinite(mat.view(float))):
            raise ValueError("non-finite entries in density matrix")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > TRACE_TOL or abs(np.trace(mat).imag) > TRACE_TOL:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(mat).min() < -PSD_TOL:
            raise ValueError("density matrix has an eigenvalue below -1e-10")

    def to_json(self) -> str:
        return json.dumps({
            "dimA": self.dimA,
            "dimB": self.dimB,
            "re": self.mat.real.ravel().tolist(),
            "im": self.mat.imag.ravel().tolist(),
        })

    @staticmethod
    def from_json(text: str) -> "DensityMatrix":
        d = json.loads(text)
        m, n = int(d["dimA"]), int(d["dimB"])
        mat = (np.asarray(d["re"], dtype=float)
               + 1j * np.asarray(d["im"], dtype=float)).reshape(m * n, m * n)
        return DensityMatrix(m, n, mat)


@dataclass(frozen=True)
class PureState:
    """Pure (possibly subnormalized) bipartite state vector of length m*n."""

    dimA: int
    dimB: int
    amps: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).ravel()
        object.__setattr__(self, "amps", amps)
        if amps.size != self.dimA * self.dimB:
            raise ValueError(f"expected {self.dimA * self.dimB} amplitudes, got {amps.size}")
        if self.normalized and abs(np.linalg.norm(amps) - 1.0) > 1e-12:
            raise ValueError("state flagged normalized but its norm is not 1")

    def coeff_matrix(self) -> np.ndarray:
        """Amplitudes as the m x n coefficient matrix C with psi = sum C_ab |ab>."""
        return self.amps.reshape(self.dimA, self.dimB)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True)
class EigenEnsemble:
    """Subnormalized eigenvectors e_alpha = sqrt(lambda_alpha) |v_alpha> of a state.

    Serves as the fixed reference decomposition: every length-N ensemble of
    the same state is z @ [e_1 ... e_r] for a Stiefel matrix z.
    """

    dimA: int
    dimB: int
    rank: int
    vectors: tuple[PureState, ...]
    eigenvalues: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        if len(self.vectors) != self.rank:
            raise ValueError("rank does not match number of vectors")
        if self.eigenvalues is None:
            ev = np.array([v.norm() ** 2 for v in self.vectors])
            object.__setattr__(self, "eigenvalues", ev)
        else:
            object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, dtype=float))

    def matrix(self) -> np.ndarray:
        """Rows e_alpha stacked into an r x (mn) array."""
        return np.stack([v.amps for v in self.vectors])

    def reconstruct(self) -> np.ndarray:
        """Sum_alpha |e_alpha><e_alpha|."""
        E = self.matrix()
        return E.T @ E.conj()


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices (or vectors)."""
    return np.kron(np.asarray(a), np.asarray(b))


def _pure_reduced(psi: PureState, keep: str) -> np.ndarray:
    C = psi.coeff_matrix()
    if keep == "A":
        return C @ C.conj().T
    return C.T @ C.conj()


def partial_trace(state, keep: str) -> np.ndarray:
    """Reduced matrix of a PureState or DensityMatrix on subsystem keep in {A, B}.

    Trace is preserved: tr of the output equals tr of the input
    (norm squared for pure states).
    """
    if keep not in ("A", "B"):
        raise ValueError("keep must be 'A' or 'B'")
    if isinstance(state, PureState):
        return _pure_reduced(state, keep)
    if isinstance(state, DensityMatrix):
        m, n = state.dimA, state.dimB
        t = state.mat.reshape(m, n, m, n)
        if keep == "A":
            return np.einsum("ibjb->ij", t)
        return np.einsum("aiaj->ij", t)
    raise TypeError("state must be a PureState or DensityMatrix")


def eigen_ensemble(rho: DensityMatrix, cutoff: float = DEFAULT_EIGENVALUE_CUTOFF) -> EigenEnsemble:
    """Eigenvector ensemble of rho: vectors sqrt(lam)*v for eigenvalues above cutoff.

    Eigenvalues are returned in descending order.  Degenerate eigenspaces may
    come out in any orthonormal basis; downstream quantities are invariant
    under that choice.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    vals, vecs = np.linalg.eigh(rho.mat)
    if vals.min() < -PSD_TOL:
        raise ValueError("input is not positive semidefinite within tolerance")
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    sel = vals > cutoff
    vals, vecs = vals[sel], vecs[:, sel]
    vectors = [
        PureState(rho.dimA, rho.dimB, np.sqrt(lam) * vecs[:, k])
        for k, lam in enumerate(vals)
    ]
    return EigenEnsemble(rho.dimA, rho.dimB, len(vectors), tuple(vectors), vals)


def haar_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed d x d unitary: complex Gaussian, QR, diagonal phase fix.

    The phase correction q[:, j] *= r_jj / |r_jj| removes the QR sign ambiguity
    that would otherwise bias the distribution.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = _as_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r).copy()
    ph /= np.abs(ph)
    return q * ph


def ppt_is_entangled(rho: DensityMatrix, allow_inconclusive: bool = False) -> bool:
    """Partial-transpose test: True iff the partial transpose has a negative eigenvalue.

    Exact (necessary and sufficient) for mn <= 6, i.e. 2x2 and 2x3.  For larger
    systems the test is only necessary for separability; pass
    allow_inconclusive=True to use it there, in which case False means
    "PPT, not resolved" rather than "separable".
    """
    m, n = rho.dimA, rho.dimB
    if m * n > 6 and not allow_inconclusive:
        raise ValueError("PPT is conclusive only for mn <= 6; "
                         "set allow_inconclusive=True to run it anyway")
    t = rho.mat.reshape(m, n, m, n)
    pt = np.einsum("ajbi->aibj", t).reshape(m * n, m * n)
    return bool(np.linalg.eigvalsh(pt).min() < -1e-10)
