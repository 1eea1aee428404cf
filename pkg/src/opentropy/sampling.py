"""Random channels, entropy-plane surveys and Hamiltonian-evolution probes.

Two generators are provided.  ``haar_block`` slices the first block column
of a Haar unitary on ``n*m`` dimensions into ``m`` Kraus operators.
``stratified`` first draws a uniformly random integer partition of ``n*m``,
builds a block-diagonal unitary from independent Haar blocks of those
sizes and sandwiches it between two random permutations before slicing.
The second reaches low-entropy corners of the plane that Haar sampling
almost never visits.

Every sample ``i`` of a survey draws from ``RngStream(seed).spawn(i)``, so
results do not depend on how the work is split.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import EntropyPoint, KrausChannel, entropy_pairs, validate
from .errors import DimensionMismatch, InvalidParameter, NotHermitian
from .families import boundary_curve, violation_depth
from .linalg import RngStream, gue_hamiltonian, haar_unitary, is_hermitian, random_permutation_matrix
from .partitions import random_partition

__all__ = [
    "SamplerConfig",
    "Trajectory",
    "ProbeReport",
    "haar_block_channel",
    "stratified_channel",
    "block_column_channel",
    "survey",
    "sample_operators",
    "survey_arrays",
    "evolve_channel",
    "evolve_many",
    "boundary_starts",
    "boundary_probe",
    "METHODS",
]


def block_column_channel(w: np.ndarray, n: int, m: int) -> KrausChannel:
    """Kraus operators ``K^i_{jk} = W_{j + (i-1) n, k}`` from the first ``n`` columns of ``w``."""
    return KrausChannel(w[:, :n].reshape(m, n, n))


def _check_dims(n, m):
    if n < 1 or m < 1:
        raise InvalidParameter(f"need n >= 1 and m >= 1, got n={n}, m={m}")


def haar_block_channel(n: int, m: int, rng: RngStream) -> KrausChannel:
    _check_dims(n, m)
    return block_column_channel(haar_unitary(n * m, rng), n, m)


def stratified_unitary(dim: int, rng: RngStream, parts: tuple[int, ...] | None = None) -> np.ndarray:
    """``P1 (U_1 + ... + U_j) P2`` for Haar blocks ``U_i`` sized by a uniform partition of ``dim``."""
    if parts is None:
        parts = random_partition(dim, rng)
    if sum(parts) != dim:
        raise InvalidParameter(f"partition {parts} does not sum to {dim}")
    u = np.zeros((dim, dim), dtype=complex)
    start = 0
    for size in parts:
        u[start:start + size, start:start + size] = haar_unitary(size, rng)
        start += size
    p1 = random_permutation_matrix(dim, rng)
    p2 = random_permutation_matrix(dim, rng)
    return p1 @ u @ p2


def stratified_channel(n: int, m: int, rng: RngStream, parts: tuple[int, ...] | None = None) -> KrausChannel:
    _check_dims(n, m)
    return block_column_channel(stratified_unitary(n * m, rng, parts), n, m)


METHODS = {"haar_block": haar_block_channel, "stratified": stratified_channel}


@dataclass(frozen=True)
class SamplerConfig:
    n: int
    m: int
    method: str = "haar_block"
    count: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.m < 1 or self.count < 1:
            raise InvalidParameter(f"invalid sampler configuration {self}")
        if self.method not in METHODS:
            raise InvalidParameter(f"unknown method {self.method!r}; choose from {sorted(METHODS)}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def sample_operators(cfg: SamplerConfig, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Kraus stacks ``(stop - start, m, n, n)`` for samples ``start..stop-1`` of a survey."""
    stop = cfg.count if stop is None else stop
    make = METHODS[cfg.method]
    root = RngStream(cfg.seed)
    ops = np.empty((stop - start, cfg.m, cfg.n, cfg.n), dtype=complex)
    for k, i in enumerate(range(start, stop)):
        ops[k] = make(cfg.n, cfg.m, root.spawn(i)).operators
    return ops


def _chunk_pairs(args):
    cfg, start, stop = args
    ops = sample_operators(cfg, start, stop)
    s, st = entropy_pairs(ops)
    total = np.einsum("ckji,ckjl->cil", ops.conj(), ops)
    resid = np.max(np.abs(total - np.eye(cfg.n)), axis=(1, 2))
    return s, st, resid


def survey_arrays(cfg: SamplerConfig, workers: int = 1, chunk: int = 4096):
    """``(S, S~, residual)`` arrays for ``cfg.count`` sampled channels, in sample order.

    ``residual`` is each channel's deviation from the identity resolution.
    """
    bounds = [(cfg, a, min(a + chunk, cfg.count)) for a in range(0, cfg.count, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_pairs, bounds))
    else:
        parts = [_chunk_pairs(b) for b in bounds]
    s, st, resid = (np.concatenate(x) for x in zip(*parts))
    return s, st, resid


def survey(cfg: SamplerConfig, workers: int = 1) -> list[EntropyPoint]:
    s, st, _ = survey_arrays(cfg, workers=workers)
    return [
        EntropyPoint(float(a), float(b), cfg.n, cfg.m, cfg.method)
        for a, b in zip(s, st)
    ]


@dataclass
class Trajectory:
    """Entropy points of a channel evolved under ``exp(iHt)`` on its stacked Kraus column."""

    times: np.ndarray
    points: list[EntropyPoint]
    linear: np.ndarray
    residuals: np.ndarray
    hamiltonian_seed: tuple | None = None
    initial: str = ""

    @property
    def s(self) -> np.ndarray:
        return np.array([p.s for p in self.points])

    @property
    def s_tilde(self) -> np.ndarray:
        return np.array([p.s_tilde for p in self.points])


def _linear_entropies(ops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = ops.shape[-1]
    out = np.einsum("...kij,...klj->...il", ops, ops.conj()) / n
    flat = ops.reshape(ops.shape[:-2] + (-1,))
    env = np.einsum("...ia,...ja->...ij", flat, flat.conj()) / n
    purity = lambda r: np.sum(np.abs(r) ** 2, axis=(-1, -2))
    return 1.0 - purity(env), 1.0 - purity(out)


def _evolved_operators(ops: np.ndarray, h: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Evolve a stack of Kraus sets ``(S, m, n, n)`` for all ``times`` -> ``(T, S, m, n, n)``."""
    s_count, m, n, _ = ops.shape
    w, v = np.linalg.eigh(h)
    phases = np.exp(1j * np.outer(times, w))
    u = np.einsum("ab,tb,cb->tac", v, phases, v.conj())
    column = ops.reshape(s_count, m * n, n)
    return np.einsum("tab,sbc->tsac", u, column).reshape(len(times), s_count, m, n, n)


def _check_hamiltonian(h, dim):
    h = np.asarray(h, dtype=complex)
    if h.shape != (dim, dim):
        raise DimensionMismatch(f"Hamiltonian must be {dim}x{dim} to act on the Kraus column, got {h.shape}")
    if not is_hermitian(h, 1e-12):
        raise NotHermitian("Hamiltonian is not Hermitian")
    return h


def evolve_channel(ch: KrausChannel, h, times, hamiltonian_seed=None) -> Trajectory:
    """Left-multiply the stacked column ``(K_1; ...; K_m)`` by ``exp(iHt)`` for each ``t``.

    Unitarity of ``exp(iHt)`` keeps ``sum K^dag K = I`` at every step.
    """
    validate(ch)
    if not ch.is_square:
        raise DimensionMismatch("evolution needs a channel with equal input and output dimension")
    h = _check_hamiltonian(h, ch.m * ch.dim_in)
    times = np.asarray(times, dtype=float)
    ops = _evolved_operators(ch.operators[np.newaxis], h, times)[:, 0]
    s, st = entropy_pairs(ops)
    lin = np.stack(_linear_entropies(ops), axis=-1)
    total = np.einsum("tkji,tkjl->til", ops.conj(), ops)
    resid = np.max(np.abs(total - np.eye(ch.dim_in)), axis=(1, 2))
    points = [EntropyPoint(float(a), float(b), ch.dim_in, ch.m, ch.label) for a, b in zip(s, st)]
    return Trajectory(times, points, lin, resid, hamiltonian_seed, ch.label)


def boundary_starts(n: int, grid: int = 9, offsets=(1e-3, 1e-2)) -> list[KrausChannel]:
    """Channels on the lower boundary curves, densest near the branch ends.

    Branch ends are the cusp points of the boundary; each gets the exact end
    channel plus channels displaced by ``offsets`` along the branch.
    """
    starts = []
    for curve in boundary_curve(n):
        if curve.channel is None:
            continue
        a = list(np.linspace(curve.a_min, curve.a_max, grid))
        for d in offsets:
            a += [curve.a_min + d, curve.a_max - d]
        for value in sorted(set(float(x) for x in a)):
            ch = curve.channel(value)
            starts.append(KrausChannel(ch.operators, label=f"{curve.branch}@{value!r}"))
    return starts


@dataclass
class ProbeReport:
    n: int
    n_hamiltonians: int
    n_starts: int
    n_times: int
    seed: int
    max_violation: float
    worst: dict = field(default_factory=dict)
    min_sum: float = float("nan")
    max_residual: float = 0.0

    @property
    def violated(self) -> bool:
        return self.max_violation > 1e-6


def evolve_many(starts: list[KrausChannel], h, times):
    """Evolve several channels under one Hamiltonian.

    Returns ``(S, S~, residual)``; ``S`` and ``S~`` have shape
    ``(len(times), len(starts))`` and ``residual`` is the largest deviation
    from the identity resolution seen anywhere.
    """
    ops = np.stack([c.operators for c in starts])
    _, m, n, n_in = ops.shape
    if n != n_in:
        raise DimensionMismatch("evolution needs channels with equal input and output dimension")
    h = _check_hamiltonian(h, m * n)
    evolved = _evolved_operators(ops, h, np.asarray(times, dtype=float))
    s, st = entropy_pairs(evolved)
    total = np.einsum("tskji,tskjl->tsil", evolved.conj(), evolved)
    resid = float(np.max(np.abs(total - np.eye(n))))
    return s, st, resid


def boundary_probe(n: int, n_hamiltonians: int, times, seed: int = 0,
                   starts: list[KrausChannel] | None = None) -> ProbeReport:
    """Evolve boundary channels under random GUE Hamiltonians and report the deepest dip below the curve.

    Hamiltonian ``k`` is drawn from ``RngStream(seed).spawn(k)``.  The
    violation depth is the vertical distance ``S~_boundary(S) - S~``; a
    negative maximum means no evolved channel left the allowed side.
    """
    if n_hamiltonians < 1:
        raise InvalidParameter("need at least one Hamiltonian")
    times = np.asarray(times, dtype=float)
    starts = boundary_starts(n) if starts is None else starts
    dim = starts[0].m * n
    root = RngStream(seed)
    report = ProbeReport(n, n_hamiltonians, len(starts), len(times), seed, -np.inf)
    min_sum = np.inf
    for k in range(n_hamiltonians):
        h = gue_hamiltonian(dim, root.spawn(k))
        s, st, resid = evolve_many(starts, h, times)
        depth = violation_depth(n, s.ravel(), st.ravel()).reshape(s.shape)
        t_idx, s_idx = np.unravel_index(np.argmax(depth), depth.shape)
        if depth[t_idx, s_idx] > report.max_violation:
            report.max_violation = float(depth[t_idx, s_idx])
            report.worst = {
                "hamiltonian": k,
                "start": starts[s_idx].label,
                "t": float(times[t_idx]),
                "S": float(s[t_idx, s_idx]),
                "Stilde": float(st[t_idx, s_idx]),
            }
        min_sum = min(min_sum, float(np.min(s + st)))
        report.max_residual = max(report.max_residual, float(resid))
    report.min_sum = min_sum
    return report
