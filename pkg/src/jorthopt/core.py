"""Signature matrices, J-orthogonality predicates, block index machinery and
feasible random initialization.

A matrix X is J-orthogonal for the signature matrix J = Diag(j), j in {+1,-1}^n,
when X^T J X = J.  Everything downstream works on 2x2 row blocks of such
matrices; this module owns the bookkeeping: signatures, block pairs, disjoint
groupings, the feasibility residual and the CS-decomposition based random
starting point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "Signature",
    "JOrthMatrix",
    "BlockKind",
    "BlockPair",
    "BlockGrouping",
    "feasibility_residual",
    "cs_random_init",
    "sample_block",
    "sample_grouping",
    "apply_block_update",
    "block_pair",
    "n_pairs",
]


class BlockKind(Enum):
    HYPERBOLIC = "hyperbolic"
    ORTHOGONAL = "orthogonal"


@dataclass(frozen=True)
class Signature:
    """Diagonal +-1 signature matrix, stored as its diagonal vector."""

    diag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        if d.ndim != 1 or d.size == 0:
            raise ValueError("signature diagonal must be a nonempty vector")
        if not np.all(np.abs(d) == 1.0):
            raise ValueError("signature entries must be exactly +1 or -1")
        object.__setattr__(self, "diag", d)
        d.setflags(write=False)

    @classmethod
    def canonical(cls, n: int, p: int) -> "Signature":
        """Sorted signature with p leading +1 entries and n-p trailing -1."""
        if not 0 <= p <= n:
            raise ValueError(f"need 0 <= p <= n, got p={p}, n={n}")
        d = np.ones(n)
        d[p:] = -1.0
        return cls(d)

    @property
    def n(self) -> int:
        return self.diag.size

    @property
    def p(self) -> int:
        """Number of +1 entries."""
        return int(np.sum(self.diag > 0))

    @property
    def is_canonical(self) -> bool:
        return bool(np.all(np.diff(self.diag) <= 0))


def feasibility_residual(x: np.ndarray, sig: Signature) -> float:
    """Entrywise absolute constraint violation sum |X^T J X - J|."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {x.shape}")
    if x.shape[0] != sig.n:
        raise ValueError(f"matrix is {x.shape[0]}x{x.shape[0]} but signature has n={sig.n}")
    m = (x.T * sig.diag) @ x
    m[np.diag_indices_from(m)] -= sig.diag
    return float(np.abs(m).sum())


@dataclass
class JOrthMatrix:
    """Dense n x n matrix kept (approximately) on {X : X^T J X = J}.

    The feasibility residual is cached and recomputed lazily after updates.
    Single-writer: concurrent row updates are only safe on disjoint blocks.
    """

    x: np.ndarray
    sig: Signature
    _residual: float | None = field(default=None, repr=False)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        if self.x.shape != (self.sig.n, self.sig.n):
            raise ValueError(
                f"matrix shape {self.x.shape} does not match signature n={self.sig.n}"
            )

    @property
    def n(self) -> int:
        return self.sig.n

    @property
    def residual(self) -> float:
        if self._residual is None:
            self._residual = feasibility_residual(self.x, self.sig)
        return self._residual

    def invalidate(self) -> None:
        self._residual = None

    def copy(self) -> "JOrthMatrix":
        return JOrthMatrix(self.x.copy(), self.sig, self._residual)


@dataclass(frozen=True)
class BlockPair:
    """Unordered row index pair (i < j) tagged by its constraint kind."""

    i: int
    j: int
    kind: BlockKind

    def __post_init__(self):
        if not 0 <= self.i < self.j:
            raise ValueError(f"need 0 <= i < j, got ({self.i}, {self.j})")

    @property
    def idx(self) -> list[int]:
        return [self.i, self.j]


def block_pair(sig: Signature, i: int, j: int) -> BlockPair:
    """Build the (i, j) block pair with the kind derived from the signature."""
    if j < i:
        i, j = j, i
    if j >= sig.n:
        raise ValueError(f"index {j} out of range for n={sig.n}")
    kind = BlockKind.HYPERBOLIC if sig.diag[i] != sig.diag[j] else BlockKind.ORTHOGONAL
    return BlockPair(i, j, kind)


def n_pairs(n: int) -> int:
    """Number of unordered index pairs C(n, 2)."""
    return n * (n - 1) // 2


@dataclass(frozen=True)
class BlockGrouping:
    """n/2 disjoint block pairs covering {0, ..., n-1}."""

    pairs: tuple[BlockPair, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.pairs:
            seen.update((b.i, b.j))
        n = 2 * len(self.pairs)
        if len(seen) != n or seen != set(range(n)):
            raise ValueError("grouping pairs must be disjoint and cover 0..n-1")


def _haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix: QR of a Gaussian, R-diagonal sign fixed."""
    if n == 0:
        return np.zeros((0, 0))
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def cs_random_init(sig: Signature, rng_seed, scale: float = 1.0) -> JOrthMatrix:
    """Random feasible point built from the hyperbolic CS block structure.

    X = Diag(U1, U2) * S * Diag(V1, V2)^T with Haar orthogonal factors and a
    cosh/sinh core of k = min(p, q) hyperbolic angles, sinh values drawn from
    scale * |N(0, 1)|.  Requires a canonical (sorted) signature; callers with
    unsorted signatures permute the result themselves.

    Parameters
    ----------
    sig : Signature
        Canonical signature (p leading +1 entries).
    rng_seed : int, SeedSequence or Generator
        Source of randomness.
    scale : float
        Magnitude of the sampled sinh values; 0 yields an orthogonal matrix.
    """
    if not sig.is_canonical:
        raise ValueError("cs_random_init requires a canonical (sorted) signature")
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    rng = np.random.default_rng(rng_seed)
    n, p = sig.n, sig.p
    q = n - p
    k = min(p, q)

    s = scale * np.abs(rng.standard_normal(k))
    c = np.sqrt(1.0 + s * s)
    core = np.eye(n)
    head = np.arange(k)
    tail = n - k + np.arange(k)
    core[head, head] = c
    core[head, tail] = s
    core[tail, head] = s
    core[tail, tail] = c

    u1, v1 = _haar_orthogonal(p, rng), _haar_orthogonal(p, rng)
    u2, v2 = _haar_orthogonal(q, rng), _haar_orthogonal(q, rng)
    x = np.empty((n, n))
    left = np.zeros((n, n))
    left[:p, :p] = u1
    left[p:, p:] = u2
    right = np.zeros((n, n))
    right[:p, :p] = v1
    right[p:, p:] = v2
    x = left @ core @ right.T
    return JOrthMatrix(x, sig)


def _unrank_pair(k: int, n: int) -> tuple[int, int]:
    """k-th pair (lexicographic) among the C(n,2) unordered index pairs."""
    # i is the largest row with offset(i) = i*n - i*(i+1)/2 <= k
    i = int((2 * n - 1 - math.isqrt((2 * n - 1) ** 2 - 8 * k)) // 2)
    while i * n - i * (i + 1) // 2 > k:
        i -= 1
    while (i + 1) * n - (i + 1) * (i + 2) // 2 <= k:
        i += 1
    j = k - (i * n - i * (i + 1) // 2) + i + 1
    return i, j


def sample_block(sig: Signature, rng: np.random.Generator) -> BlockPair:
    """Uniform draw (with replacement) from all C(n,2) block pairs."""
    n = sig.n
    if n < 2:
        raise ValueError("need n >= 2 to sample a block pair")
    k = int(rng.integers(n_pairs(n)))
    i, j = _unrank_pair(k, n)
    return block_pair(sig, i, j)


def sample_grouping(sig: Signature, rng: np.random.Generator) -> BlockGrouping:
    """Random perfect matching: permute 0..n-1 and chunk consecutive pairs."""
    n = sig.n
    if n % 2 != 0:
        raise ValueError("n must be even")
    perm = rng.permutation(n)
    pairs = tuple(
        block_pair(sig, int(perm[2 * i]), int(perm[2 * i + 1])) for i in range(n // 2)
    )
    return BlockGrouping(pairs)


def apply_block_update(x: JOrthMatrix, b: BlockPair, v: np.ndarray) -> None:
    """Replace rows (i, j) of X by V @ X([i, j], :); invalidates the residual cache.

    V must satisfy the 2x2 block constraint V^T J_BB V = J_BB within 1e-10.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (2, 2):
        raise ValueError("block update matrix must be 2x2")
    jbb = x.sig.diag[b.idx]
    defect = (v.T * jbb) @ v
    defect[np.diag_indices_from(defect)] -= jbb
    if np.abs(defect).sum() > 1e-10:
        raise ValueError(
            f"update matrix violates the block constraint by {np.abs(defect).sum():.3e}"
        )
    rows = x.x[b.idx, :]
    x.x[b.idx, :] = v @ rows
    x.invalidate()
