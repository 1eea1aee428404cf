"""Distinguished channel families and lower boundary curves of the entropy plane.

Emission channels are built from a left-upper-triangular 0/1 matrix ``L``
(rows of length ``N, N-1, ..., 1``) through

    K_i = sum_j L_ij |j><j+i-1|,        i = 1..N.

Because ``K_i^dag K_i`` only touches the diagonal entries ``j+i-1``, the
identity resolution holds iff every anti-diagonal of ``L`` sums to one.
Replacing the 0/1 entries by nonnegative reals with unit squared
anti-diagonal sums gives the :class:`AMatrix` interpolations.

For both kinds ``comp(rho*)`` and ``channel(rho*)`` are diagonal with
entries given by the row and column sums of the squared entries divided by
``N``, which is what :func:`entropies_from_L` evaluates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import EntropyPoint, KrausChannel
from .errors import DimensionMismatch, InvalidL, InvalidParameter, NotUnitary, UnknownName, Unsupported
from .linalg import is_unitary

__all__ = [
    "LMatrix",
    "AMatrix",
    "kraus_from_L",
    "kraus_from_A",
    "complementary_L",
    "entropies_from_L",
    "entropies_from_A",
    "interpolate",
    "interpolation_matrix",
    "all_L_matrices",
    "named_channel",
    "NAMED_CHANNELS",
    "qubit_extremal_channel",
    "phi4_L",
    "saturating_L_example",
    "product_saturating_channel",
    "binary_entropy",
    "BoundaryCurve",
    "boundary_curve",
    "lower_boundary",
    "violation_depth",
]

AMAT_TOL = 1e-12


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0.0, x * np.log(np.where(x > 0.0, x, 1.0)), 0.0)


def binary_entropy(q):
    """``-q log q - (1-q) log(1-q)`` in nats."""
    q = np.asarray(q, dtype=float)
    return 0.0 - _xlogx(q) - _xlogx(1.0 - q)


def _triangle_rows(rows, n=None) -> tuple[tuple, ...]:
    rows = tuple(tuple(r) for r in rows)
    n = len(rows) if n is None else n
    if n < 1 or len(rows) != n:
        raise InvalidL(f"expected {n} rows, got {len(rows)}")
    for i, r in enumerate(rows):
        if len(r) != n - i:
            raise InvalidL(f"row {i + 1} of a size-{n} triangle must have {n - i} entries, got {len(r)}")
    return rows


class _Triangle:
    """Shared storage for L and A matrices: ``rows[i][j]`` for ``i + j < N``."""

    def __init__(self, rows):
        self.rows = _triangle_rows(rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for i, r in enumerate(self.rows):
            out[i, : len(r)] = r
        return out

    def anti_diagonal_sums(self, power: int = 1) -> np.ndarray:
        d = self.dense() ** power
        n = self.n
        return np.array([sum(d[i, k - i] for i in range(k + 1)) for k in range(n)])

    def transpose_rows(self) -> tuple[tuple, ...]:
        d = self.dense()
        return tuple(tuple(d[j, i] for j in range(self.n - i)) for i in range(self.n))

    def __eq__(self, other):
        return type(self) is type(other) and self.rows == other.rows

    def __hash__(self):
        return hash((type(self).__name__, self.rows))


class LMatrix(_Triangle):
    """Left-upper-triangular 0/1 matrix describing an emission channel."""

    def __init__(self, rows):
        super().__init__(rows)
        for r in self.rows:
            if any(v not in (0, 1) for v in r):
                raise InvalidL(f"L entries must be 0 or 1, got row {r}")
        self.rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        sums = self.anti_diagonal_sums()
        bad = [k + 1 for k, s in enumerate(sums) if s != 1]
        if bad:
            raise InvalidL(f"anti-diagonals {bad} of L do not sum to 1")

    @classmethod
    def parse(cls, text: str) -> LMatrix:
        """Parse the shorthand ``"100;10;1"``: rows split by ``;``, one 0/1 character per entry."""
        parts = [p.strip() for p in text.strip().split(";")]
        rows = []
        for p in parts:
            if not p or any(ch not in "01" for ch in p):
                raise InvalidL(f"malformed L row {p!r}")
            rows.append(tuple(int(ch) for ch in p))
        return cls(rows)

    def __str__(self):
        return ";".join("".join(str(v) for v in r) for r in self.rows)

    def __repr__(self):
        return f"LMatrix({str(self)!r})"

    @property
    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(r) for r in self.rows)

    @property
    def column_sums(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.dense().sum(axis=0))

    def transpose(self) -> LMatrix:
        return LMatrix(tuple(tuple(int(v) for v in r) for r in self.transpose_rows()))


class AMatrix(_Triangle):
    """Nonnegative triangular matrix with unit squared anti-diagonal sums."""

    def __init__(self, rows, tol: float = AMAT_TOL):
        super().__init__(rows)
        self.rows = tuple(tuple(float(v) for v in r) for r in self.rows)
        if any(v < 0.0 for r in self.rows for v in r):
            raise InvalidParameter("A entries must be nonnegative")
        sums = self.anti_diagonal_sums(power=2)
        if np.max(np.abs(sums - 1.0)) > tol:
            raise InvalidL(f"squared anti-diagonal sums of A are {sums.tolist()}, not 1")

    def __repr__(self):
        return f"AMatrix({self.rows!r})"

    def transpose(self) -> AMatrix:
        return AMatrix(self.transpose_rows())


def _kraus_from_triangle(t: _Triangle, label: str) -> KrausChannel:
    n = t.n
    ops = np.zeros((n, n, n), dtype=complex)
    for i, r in enumerate(t.rows):
        for j, v in enumerate(r):
            ops[i, j, j + i] = v
    return KrausChannel(ops, label=label)


def kraus_from_L(L: LMatrix) -> KrausChannel:
    """``K_i = sum_j L_ij |j><j+i-1|`` for ``i = 1..N`` (some may be zero)."""
    if not isinstance(L, LMatrix):
        L = LMatrix(L)
    return _kraus_from_triangle(L, label=f"L[{L}]")


def kraus_from_A(A: AMatrix) -> KrausChannel:
    if not isinstance(A, AMatrix):
        A = AMatrix(A)
    return _kraus_from_triangle(A, label="A")


def complementary_L(L: LMatrix) -> LMatrix:
    return L.transpose()


def _entropy_of_counts(counts, n: int) -> float:
    counts = np.asarray(counts, dtype=float)
    return float(np.log(n) - _xlogx(counts).sum() / n)


def entropies_from_L(L: LMatrix) -> EntropyPoint:
    """Entropy point of an emission channel from the numbers of ones in rows and columns."""
    if not isinstance(L, LMatrix):
        L = LMatrix(L)
    n = L.n
    return EntropyPoint(
        s=_entropy_of_counts(L.row_sums, n),
        s_tilde=_entropy_of_counts(L.column_sums, n),
        n=n, m=n, tag=f"L[{L}]",
    )


def entropies_from_A(A: AMatrix) -> EntropyPoint:
    """Same as :func:`entropies_from_L` with squared entries in place of the ones.

    Here ``comp(rho*)`` and ``channel(rho*)`` have diagonal entries
    ``r_i / N`` and ``c_j / N`` where ``r``, ``c`` are the row and column sums
    of the squared entries.
    """
    d = A.dense() ** 2
    n = A.n
    s = -float(_xlogx(d.sum(axis=1) / n).sum())
    s_tilde = -float(_xlogx(d.sum(axis=0) / n).sum())
    return EntropyPoint(s=s, s_tilde=s_tilde, n=n, m=n, tag="A")


def interpolation_matrix(L1: LMatrix, L2: LMatrix, x: float) -> AMatrix:
    """Entrywise ``sqrt(x L1 + (1 - x) L2)``."""
    if not 0.0 <= x <= 1.0:
        raise InvalidParameter(f"interpolation parameter must lie in [0, 1], got {x}")
    if L1.n != L2.n:
        raise DimensionMismatch(f"cannot interpolate L matrices of sizes {L1.n} and {L2.n}")
    rows = [
        tuple(np.sqrt(x * a + (1.0 - x) * b) for a, b in zip(r1, r2))
        for r1, r2 in zip(L1.rows, L2.rows)
    ]
    return AMatrix(rows)


def interpolate(L1: LMatrix, L2: LMatrix, x: float) -> KrausChannel:
    """Channel of ``A(L1, L2; x)``; ``x = 1`` gives ``L1`` and ``x = 0`` gives ``L2``."""
    ch = kraus_from_A(interpolation_matrix(L1, L2, x))
    return KrausChannel(ch.operators, label=f"A(L[{L1}],L[{L2}];{x!r})")


def all_L_matrices(n: int):
    """Every valid ``LMatrix`` of size ``n``: one 1 on each anti-diagonal, ``n!`` in total."""
    if n < 1:
        raise InvalidParameter(f"size must be >= 1, got {n}")
    for choice in itertools.product(*(range(k + 1) for k in range(n))):
        d = np.zeros((n, n), dtype=int)
        for k, i in enumerate(choice):
            d[i, k - i] = 1
        yield LMatrix([d[i, : n - i] for i in range(n)])


def phi4_L() -> LMatrix:
    """Qutrit partial emission channel on the diagonal ``S = S~``."""
    return LMatrix.parse("101;10;0")


def saturating_L_example() -> LMatrix:
    """Size-4 emission channel with rows and columns ``{2, 2}``, saturating ``S + S~ = log 4``."""
    return LMatrix.parse("1010;101;00;0")


def _identity(n):
    return KrausChannel(np.eye(n)[np.newaxis], label=f"identity{n}")


def _coarse_graining(n):
    ops = np.zeros((n, n, n))
    for i in range(n):
        ops[i, i, i] = 1.0
    return KrausChannel(ops, label=f"coarse_graining{n}")


def _emission(n):
    ops = np.zeros((n, n, n))
    for i in range(n):
        ops[i, 0, i] = 1.0
    return KrausChannel(ops, label=f"emission{n}")


def _phi4(n):
    if n != 3:
        raise Unsupported("phi4 is defined for n = 3 only")
    ch = kraus_from_L(phi4_L())
    return KrausChannel(ch.operators, label="phi4")


NAMED_CHANNELS: dict[str, Callable[[int], KrausChannel]] = {
    "identity": _identity,
    "coarse_graining": _coarse_graining,
    "emission": _emission,
    "phi4": _phi4,
}


def named_channel(name: str, n: int) -> KrausChannel:
    """Identity, coarse graining (``|i><i|``), one-step emission (``|1><i|``) or ``phi4``."""
    try:
        make = NAMED_CHANNELS[name]
    except KeyError:
        raise UnknownName(f"unknown channel {name!r}; choose from {sorted(NAMED_CHANNELS)}") from None
    if n < 2:
        raise InvalidParameter(f"dimension must be >= 2, got {n}")
    return make(n)


def qubit_extremal_channel(a: float) -> KrausChannel:
    """Spontaneous emission qubit channel on the lower boundary.

    ``K_1 = diag(1, sqrt(x))``, ``K_2 = sqrt(1 - x)|1><2|`` with ``x = 1 - 2a``;
    the channel sits at ``(H(a), H(1/2 - a))``.
    """
    if not 0.0 <= a <= 0.5:
        raise InvalidParameter(f"a must lie in [0, 1/2], got {a}")
    x = 1.0 - 2.0 * a
    k1 = np.diag([1.0, np.sqrt(x)])
    k2 = np.array([[0.0, np.sqrt(1.0 - x)], [0.0, 0.0]])
    return KrausChannel(np.stack([k1, k2]), label=f"qubit_extremal({a!r})")


def product_saturating_channel(n_a: int, n_b: int, u) -> KrausChannel:
    """``n_b`` operators ``(K_alpha)_ij = U_{i + (alpha-1) n_a, j}`` on their first ``n_a`` rows.

    Every such channel sits at ``(log n_b, log n_a)``.
    """
    u = np.asarray(u, dtype=complex)
    n = n_a * n_b
    if n_a < 1 or n_b < 1 or u.shape != (n, n):
        raise DimensionMismatch(f"need an {n}x{n} unitary for n_a={n_a}, n_b={n_b}, got {u.shape}")
    if not is_unitary(u, 1e-10):
        raise NotUnitary("product_saturating_channel needs a unitary matrix")
    ops = np.zeros((n_b, n, n), dtype=complex)
    for alpha in range(n_b):
        ops[alpha, :n_a, :] = u[alpha * n_a:(alpha + 1) * n_a, :]
    return KrausChannel(ops, label=f"product({n_a},{n_b})")


# ---------------------------------------------------------------------------
# boundary curves


@dataclass(frozen=True)
class BoundaryCurve:
    """One branch ``a -> (S, S~)`` of the lower boundary of the allowed region.

    ``channel`` builds a channel sitting at ``evaluate(a)``, when the branch
    is realised by a known family.
    """

    n: int
    branch: str
    a_min: float
    a_max: float
    evaluator: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    channel: Callable[[float], KrausChannel] | None = None

    def evaluate(self, a):
        a = np.asarray(a, dtype=float)
        if np.any(a < self.a_min - 1e-15) or np.any(a > self.a_max + 1e-15):
            raise InvalidParameter(f"parameter outside [{self.a_min}, {self.a_max}]")
        s, st = self.evaluator(np.clip(a, self.a_min, self.a_max))
        if s.ndim == 0:
            return float(s), float(st)
        return s, st

    __call__ = evaluate

    def parameters(self, points: int = 512) -> np.ndarray:
        return np.linspace(self.a_min, self.a_max, points)

    def sample(self, points: int = 512) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Uniform parameter grid and curve coordinates ``(a, S, S~)``."""
        a = self.parameters(points)
        s, st = self.evaluate(a)
        return a, np.asarray(s), np.asarray(st)

    def mirrored(self) -> BoundaryCurve:
        ev = self.evaluator
        ch = self.channel
        return BoundaryCurve(
            n=self.n,
            branch=self.branch + "_mirror",
            a_min=self.a_min,
            a_max=self.a_max,
            evaluator=lambda a: ev(a)[::-1],
            channel=None if ch is None else (lambda a: _complement_square(ch(a))),
        )


def _complement_square(ch: KrausChannel) -> KrausChannel:
    from .channel import complementary, pad

    comp = complementary(ch)
    if comp.m < comp.dim_out:
        comp = pad(comp, m=comp.dim_out)
    return comp


def _qubit_branch(a):
    return binary_entropy(a), binary_entropy(0.5 - a)


def _qutrit_branch(a):
    third = 1.0 / 3.0
    return binary_entropy(a), np.log(3.0) / 3.0 - _xlogx(a + third) - _xlogx(third - a)


def _quartic_first(a):
    q = 0.25
    return binary_entropy(a), np.log(2.0) - _xlogx(a + q) - _xlogx(q - a)


def _quartic_second(a):
    return np.log(4.0) / 4.0 - _xlogx(1.0 - a) - _xlogx(a - 0.5), binary_entropy(a)


_L4 = {
    "1": LMatrix.parse("1000;100;10;1"),
    "2": LMatrix.parse("1000;100;11;0"),
    "3": LMatrix.parse("1100;000;11;0"),
}


def boundary_curve(n: int) -> list[BoundaryCurve]:
    """Branches of the lower boundary for ``n = 2`` (proven), 3 and 4 (conjectured)."""
    if n == 2:
        return [BoundaryCurve(2, "main", 0.0, 0.5, _qubit_branch, qubit_extremal_channel)]
    if n == 3:
        identity_l = LMatrix.parse("111;00;0")
        emission_l = LMatrix.parse("100;10;1")
        main = BoundaryCurve(
            3, "main", 0.0, 1.0 / 3.0, _qutrit_branch,
            lambda a: interpolate(identity_l, phi4_L(), 1.0 - 3.0 * a),
        )
        mirror = main.mirrored()
        mirror = BoundaryCurve(
            3, mirror.branch, mirror.a_min, mirror.a_max, mirror.evaluator,
            lambda a: interpolate(emission_l, phi4_L(), 1.0 - 3.0 * a),
        )
        return [main, mirror]
    if n == 4:
        l1, l2, l3 = _L4["1"], _L4["2"], _L4["3"]
        first = BoundaryCurve(
            4, "first", 0.0, 0.25, _quartic_first,
            lambda a: interpolate(l1.transpose(), l2.transpose(), 1.0 - 4.0 * a),
        )
        second = BoundaryCurve(
            4, "second", 0.5, 0.75, _quartic_second,
            lambda a: interpolate(l2, l3, 4.0 * a - 2.0),
        )
        first_m = BoundaryCurve(
            4, "first_mirror", 0.0, 0.25, first.mirrored().evaluator,
            lambda a: interpolate(l1, l2, 1.0 - 4.0 * a),
        )
        second_m = BoundaryCurve(
            4, "second_mirror", 0.5, 0.75, second.mirrored().evaluator,
            lambda a: interpolate(l2.transpose(), l3.transpose(), 4.0 * a - 2.0),
        )
        return [first, second_m, second, first_m]
    raise Unsupported(f"closed-form boundary known for n in {{2, 3, 4}} only, got {n}")


def _invert_branch(curve: BoundaryCurve, s: np.ndarray, iters: int = 80) -> np.ndarray:
    """Parameter ``a`` with ``S(a) = s`` on a branch where ``S`` is monotone."""
    lo = np.full(s.shape, curve.a_min)
    hi = np.full(s.shape, curve.a_max)
    s_lo, s_hi = curve.evaluator(np.array([curve.a_min, curve.a_max]))[0]
    increasing = s_hi > s_lo
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        s_mid = curve.evaluator(mid)[0]
        go_right = (s_mid < s) if increasing else (s_mid > s)
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    a = 0.5 * (lo + hi)
    # near a flat end of S(a) the bisection only sees rounding noise
    a = np.where(s >= max(s_lo, s_hi), curve.a_max if increasing else curve.a_min, a)
    a = np.where(s <= min(s_lo, s_hi), curve.a_min if increasing else curve.a_max, a)
    return a


def lower_boundary(n: int, s) -> np.ndarray:
    """Smallest ``S~`` on the boundary curves at channel entropy ``s``.

    Where no branch covers ``s`` (``s >= log n``) the boundary is 0.
    """
    curves = boundary_curve(n)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    best = np.full(s.shape, np.inf)
    for c in curves:
        s_ends = np.array(c.evaluator(np.array([c.a_min, c.a_max]))[0])
        lo, hi = s_ends.min(), s_ends.max()
        inside = (s >= lo - 1e-12) & (s <= hi + 1e-12)
        if not np.any(inside):
            continue
        a = _invert_branch(c, np.clip(s, lo, hi))
        st = c.evaluator(a)[1]
        best = np.where(inside, np.minimum(best, st), best)
    best = np.where(np.isinf(best), 0.0, best)
    return best


def violation_depth(n: int, s, s_tilde) -> np.ndarray:
    """Vertical distance below the lower boundary; negative means on or above it."""
    s_tilde = np.asarray(s_tilde, dtype=float)
    return lower_boundary(n, s) - np.atleast_1d(s_tilde)
