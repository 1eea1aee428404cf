"""Quantum channels in Kraus form and their operation entropies.

A :class:`KrausChannel` stores its operators stacked in one array of shape
``(m, dim_out, dim_in)``.  The number of operators ``m`` is the environment
dimension.  All entropies are in nats.

The two numbers that matter most here are

* ``S``  -- the map entropy of the channel, the von Neumann entropy of its
  Choi-Jamiolkowski state, and
* ``S~`` -- the map entropy of the complementary channel.

Both can be read off small states instead of the ``N^2``-dimensional Choi
state: ``S = S(comp(rho*))`` and ``S~ = S(channel(rho*))`` where ``rho*`` is
the maximally mixed input.  :func:`entropy_point` uses these;
:func:`map_entropy` goes through the Choi state and serves as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotAState, NotTracePreserving
from .linalg import hermitian_eigenvalues, kron

__all__ = [
    "KrausChannel",
    "EntropyPoint",
    "validate",
    "apply",
    "choi",
    "choi_stack",
    "complementary",
    "pad",
    "maximally_mixed",
    "check_state",
    "von_neumann_entropy",
    "linear_entropy",
    "entropy_from_spectrum",
    "map_entropy",
    "map_entropy_via_complement_image",
    "entropy_point",
    "entropy_pairs",
    "coherent_information_at_mixed",
    "tensor",
]

# eigenvalues in [-CLIP_TOL, 0) are treated as zero, anything lower is an error
CLIP_TOL = 1e-10
STATE_TOL = 1e-10
TP_TOL = 1e-9


@dataclass(frozen=True)
class KrausChannel:
    """Channel ``rho -> sum_i K_i rho K_i^dag``.

    ``operators`` may be any sequence of equally shaped matrices; it is
    stored as a read-only complex array of shape ``(m, dim_out, dim_in)``.
    Construction does not check trace preservation, use :func:`validate`.
    """

    operators: np.ndarray
    label: str = field(default="", compare=False)

    def __post_init__(self):
        ops = np.array(self.operators, dtype=complex)
        if ops.ndim == 2:
            ops = ops[np.newaxis]
        if ops.ndim != 3 or ops.shape[0] == 0 or 0 in ops.shape[1:]:
            raise DimensionMismatch(
                f"Kraus operators must be a non-empty stack of matrices, got shape {ops.shape}"
            )
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def m(self) -> int:
        return self.operators.shape[0]

    @property
    def dim_out(self) -> int:
        return self.operators.shape[1]

    @property
    def dim_in(self) -> int:
        return self.operators.shape[2]

    @property
    def is_square(self) -> bool:
        return self.dim_in == self.dim_out

    def __len__(self):
        return self.m

    def __iter__(self):
        return iter(self.operators)

    def __eq__(self, other):
        if not isinstance(other, KrausChannel):
            return NotImplemented
        return self.operators.shape == other.operators.shape and bool(
            np.array_equal(self.operators, other.operators)
        )

    __hash__ = None

    def identity_residual(self) -> float:
        """Max entrywise deviation of ``sum K^dag K`` from the identity."""
        ops = self.operators
        total = np.einsum("kji,kjl->il", ops.conj(), ops)
        return float(np.max(np.abs(total - np.eye(self.dim_in))))


@dataclass(frozen=True)
class EntropyPoint:
    """A point ``(S, S~)`` of the entropy plane, in nats."""

    s: float
    s_tilde: float
    n: int
    m: int
    tag: str = ""

    @property
    def total(self) -> float:
        return self.s + self.s_tilde

    def as_tuple(self) -> tuple[float, float]:
        return (self.s, self.s_tilde)


def validate(ch: KrausChannel, tol: float = TP_TOL) -> None:
    """Raise unless ``sum K^dag K = I`` holds within ``tol`` entrywise."""
    if not isinstance(ch, KrausChannel):
        raise DimensionMismatch(f"expected a KrausChannel, got {type(ch).__name__}")
    dev = ch.identity_residual()
    if not dev <= tol:
        raise NotTracePreserving(dev)


def maximally_mixed(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex) / n


def check_state(rho, tol: float = STATE_TOL) -> np.ndarray:
    """Return ``rho`` as a complex array after checking it is a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise NotAState("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise NotAState(f"trace is {tr!r}, not 1")
    return rho


def apply(ch: KrausChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch(f"state of shape {rho.shape} does not fit a channel on {ch.dim_in} dims")
    ops = ch.operators
    return np.einsum("kij,jl,kml->im", ops, rho, ops.conj())


def choi(ch: KrausChannel) -> np.ndarray:
    """Normalised Choi-Jamiolkowski state ``(1/N) sum_{mu,nu} |mu><nu| (x) Phi(|mu><nu|)``.

    The input factor comes first, so block ``(mu, nu)`` of the result is
    ``Phi(|mu><nu|) / N``.  Rectangular channels give a state on
    ``dim_in * dim_out`` dimensions.
    """
    n = ch.dim_in
    # row (mu, a) of vec_i holds (K_i)_{a, mu}
    vecs = ch.operators.transpose(0, 2, 1).reshape(ch.m, -1)
    return vecs.T @ vecs.conj() / n


def choi_stack(ops) -> np.ndarray:
    """:func:`choi` for a stack of Kraus sets of shape ``(..., m, out, in)``."""
    ops = np.asarray(ops, dtype=complex)
    n = ops.shape[-1]
    vecs = np.swapaxes(ops, -1, -2).reshape(ops.shape[:-2] + (-1,))
    return np.einsum("...ka,...kb->...ab", vecs, vecs.conj()) / n


def complementary(ch: KrausChannel) -> KrausChannel:
    """Complementary channel by exchanging operator index and output row.

    ``(K~_r)_{i, j} = (K_i)_{r, j}``: the result has ``dim_out`` operators of
    shape ``m x dim_in``, so that ``comp(rho)_{i i'} = Tr(K_i rho K_i'^dag)``.
    Applying it twice gives back the original operators exactly.
    """
    return KrausChannel(ch.operators.transpose(1, 0, 2).copy(), label=_comp_label(ch.label))


def _comp_label(label: str) -> str:
    if not label:
        return ""
    return label[:-5] if label.endswith("~comp") else label + "~comp"


def pad(ch: KrausChannel, m: int | None = None, dim_out: int | None = None) -> KrausChannel:
    """Append zero Kraus operators and/or zero output rows.

    Neither changes the channel's entropies; padding the output rows embeds
    the output space in a larger one.
    """
    m = ch.m if m is None else m
    dim_out = ch.dim_out if dim_out is None else dim_out
    if m < ch.m or dim_out < ch.dim_out:
        raise DimensionMismatch("padding cannot shrink a channel")
    ops = np.zeros((m, dim_out, ch.dim_in), dtype=complex)
    ops[: ch.m, : ch.dim_out] = ch.operators
    return KrausChannel(ops, label=ch.label)


def entropy_from_spectrum(w) -> np.ndarray:
    """``-sum w log w`` over the last axis with the ``0 log 0 = 0`` convention.

    Eigenvalues within ``CLIP_TOL`` below zero are clipped; larger negative
    values raise :class:`NotAState`.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w < -CLIP_TOL):
        raise NotAState(f"negative eigenvalue {float(w.min()):.3e}")
    w = np.clip(w, 0.0, 1.0)
    d = w.shape[-1]
    # -sum w log w written relative to the uniform spectrum: exact at w = 1/d
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0.0, w * np.log(np.where(w > 0.0, d * w, 1.0)), 0.0)
    return np.maximum(w.sum(axis=-1) * np.log(d) - terms.sum(axis=-1), 0.0)


def von_neumann_entropy(rho) -> float:
    rho = check_state(rho)
    return float(entropy_from_spectrum(hermitian_eigenvalues(rho)))


def linear_entropy(rho) -> float:
    """``1 - Tr rho^2``."""
    rho = check_state(rho)
    w = hermitian_eigenvalues(rho)
    if np.any(w < -CLIP_TOL):
        raise NotAState(f"negative eigenvalue {float(w.min()):.3e}")
    return float(1.0 - np.sum(np.abs(rho) ** 2))


def map_entropy(ch: KrausChannel) -> float:
    """Von Neumann entropy of the Choi state."""
    return von_neumann_entropy(choi(ch))


def _images_of_mixed(ops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(channel(rho*), comp(rho*))`` for stacked operators ``(..., m, out, in)``."""
    n = ops.shape[-1]
    out = np.einsum("...kij,...klj->...il", ops, ops.conj()) / n
    flat = ops.reshape(ops.shape[:-2] + (-1,))
    env = np.einsum("...ia,...ja->...ij", flat, flat.conj()) / n
    return out, env


def _spectra(states: np.ndarray) -> np.ndarray:
    states = 0.5 * (states + np.conj(np.swapaxes(states, -1, -2)))
    return np.linalg.eigvalsh(states)


def map_entropy_via_complement_image(ch: KrausChannel) -> float:
    """``S(comp(rho*))``: an ``m x m`` eigenproblem giving the map entropy."""
    _, env = _images_of_mixed(ch.operators)
    return von_neumann_entropy(env)


def entropy_pairs(ops) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(S, S~)`` for a stack of Kraus sets of shape ``(..., m, out, in)``."""
    ops = np.asarray(ops, dtype=complex)
    out, env = _images_of_mixed(ops)
    s = entropy_from_spectrum(_spectra(env))
    s_tilde = entropy_from_spectrum(_spectra(out))
    return s, s_tilde


def entropy_point(ch: KrausChannel, tag: str | None = None) -> EntropyPoint:
    s, s_tilde = entropy_pairs(ch.operators)
    return EntropyPoint(
        s=float(s), s_tilde=float(s_tilde), n=ch.dim_in, m=ch.m,
        tag=ch.label if tag is None else tag,
    )


def coherent_information_at_mixed(ch: KrausChannel) -> float:
    """Coherent information at the maximally mixed input, ``S~ - S``."""
    p = entropy_point(ch)
    return p.s_tilde - p.s


def tensor(ch1: KrausChannel, ch2: KrausChannel) -> KrausChannel:
    """Product channel with Kraus set ``{K_i (x) L_j}``."""
    ops = [kron(k, l) for k in ch1.operators for l in ch2.operators]
    label = f"{ch1.label}*{ch2.label}" if ch1.label or ch2.label else ""
    return KrausChannel(np.stack(ops), label=label)
