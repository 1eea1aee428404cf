"""Dense complex linear algebra and random matrix sampling.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Hermitian
eigenvalues come from LAPACK by default; a cyclic Jacobi solver is kept
alongside it so the two can be checked against each other.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, NotHermitian

__all__ = [
    "RngStream",
    "is_hermitian",
    "is_unitary",
    "hermitian_eigenvalues",
    "hermitian_eigh",
    "jacobi_eigh",
    "haar_unitary",
    "gue_hamiltonian",
    "hermitian_exp_i",
    "kron",
    "random_permutation_matrix",
]


class RngStream:
    """Seeded random stream.

    A stream is identified by ``seed`` plus a tuple ``key``; ``spawn(i)``
    derives an independent child stream keyed by ``key + (i,)``.  The same
    ``(seed, key)`` always reproduces the same draws, which is what lets
    surveys be split over workers and merged in index order.

    Draws go through numpy's PCG64 bit generator seeded via ``SeedSequence``.
    """

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        if seed < 0 or seed >= 2**64:
            raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.key))
        )
        self.position = 0

    def __repr__(self):
        return f"RngStream(seed={self.seed}, key={self.key}, position={self.position})"

    def spawn(self, *index: int) -> RngStream:
        """Independent child stream; ``spawn(i, j)`` equals ``spawn(i).spawn(j)``."""
        return RngStream(self.seed, self.key + tuple(int(i) for i in index))

    def normal(self, shape) -> np.ndarray:
        out = self._gen.standard_normal(shape)
        self.position += out.size
        return out

    def complex_normal(self, shape) -> np.ndarray:
        """I.i.d. standard complex Gaussians, E|z|^2 = 1."""
        re = self.normal(shape)
        im = self.normal(shape)
        return (re + 1j * im) / np.sqrt(2.0)

    def integers(self, high: int) -> int:
        """Uniform integer in ``[0, high)``."""
        self.position += 1
        return int(self._gen.integers(high))

    def permutation(self, n: int) -> np.ndarray:
        self.position += n
        return self._gen.permutation(n)


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got array of shape {m.shape}")
    return m.astype(complex, copy=False)


def is_hermitian(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol * scale)


def is_unitary(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    dev = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(dev), initial=0.0) <= tol)


def _check_hermitian(m, tol: float) -> np.ndarray:
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {m.shape}")
    if not is_hermitian(m, tol):
        dev = float(np.max(np.abs(m - m.conj().T)))
        raise NotHermitian(f"matrix is not Hermitian (max |M - M^dag| = {dev:.3e})")
    return m


def jacobi_eigh(m, tol: float = 1e-13, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``a_pq`` and then
    applies the real symmetric Jacobi rotation.  Sweeps stop once the
    off-diagonal Frobenius norm drops below ``tol * ||m||_F``; pivots
    smaller than that threshold over ``n`` are set to zero without rotating.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues descending and
    eigenvectors as columns.
    """
    a = np.array(_as_matrix(m), dtype=complex)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    thresh = tol * max(np.linalg.norm(a), np.finfo(float).tiny)
    # pivots this small cannot keep the off-diagonal norm above thresh
    negligible = thresh / max(n, 1)

    for _ in range(max_sweeps):
        off = np.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off < thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < negligible:
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # g = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    w = np.diag(a).real
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def hermitian_eigh(m, tol: float = 1e-10, method: str = "lapack") -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of a Hermitian matrix."""
    m = _check_hermitian(m, tol)
    if method == "jacobi":
        return jacobi_eigh(m)
    if method != "lapack":
        raise InvalidParameter(f"unknown eigensolver {method!r}")
    w, v = np.linalg.eigh(m)
    return w[::-1], v[:, ::-1]


def hermitian_eigenvalues(m, tol: float = 1e-10, method: str = "lapack") -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, in descending order.

    Raises :class:`NotHermitian` when ``m`` departs from its adjoint by more
    than ``tol`` (relative to its largest entry) and
    :class:`DimensionMismatch` when it is not square.
    """
    m = _check_hermitian(m, tol)
    if method == "jacobi":
        return jacobi_eigh(m)[0]
    if method != "lapack":
        raise InvalidParameter(f"unknown eigensolver {method!r}")
    return np.linalg.eigvalsh(m)[::-1]


def haar_unitary(n: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    QR of a complex Ginibre matrix, with the columns of Q rephased by the
    phases of R's diagonal so the result is exactly Haar.
    """
    if n < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {n}")
    z = rng.complex_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def gue_hamiltonian(n: int, rng: RngStream) -> np.ndarray:
    """GUE sample ``(A + A^dag) / 2`` from an i.i.d. complex Gaussian ``A``."""
    if n < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {n}")
    a = rng.complex_normal((n, n))
    return 0.5 * (a + a.conj().T)


def hermitian_exp_i(h, t: float) -> np.ndarray:
    """``exp(i t h)`` for Hermitian ``h``, through its eigendecomposition."""
    w, v = hermitian_eigh(h)
    return (v * np.exp(1j * t * w)) @ v.conj().T


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def random_permutation_matrix(n: int, rng: RngStream) -> np.ndarray:
    """Uniformly random ``n x n`` permutation matrix (Fisher-Yates shuffle)."""
    if n < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {n}")
    perm = rng.permutation(n)
    p = np.zeros((n, n), dtype=complex)
    p[np.arange(n), perm] = 1.0
    return p
