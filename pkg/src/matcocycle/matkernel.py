"""Small dense matrix kernel: norms, singular values, exterior powers, moduli.

Everything here works on tiny ``k x k`` float64 arrays (k <= 6 in practice).
Long products are carried as :class:`ScaledProduct` so that logs of norms stay
finite for thousands of factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
import scipy.linalg

#: moduli closer than this (relative) are reported as possibly equal
SIMPLE_RTOL = 1e-6


def as_matrix(M) -> np.ndarray:
    a = np.asarray(M, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def op_norm(M) -> float:
    """Euclidean operator norm (largest singular value)."""
    return float(np.linalg.norm(as_matrix(M), 2))


def singular_values(M) -> np.ndarray:
    """Singular values in decreasing order."""
    return np.linalg.svd(as_matrix(M), compute_uv=False)


def op_norms(stack: np.ndarray) -> np.ndarray:
    """Operator norms of a stack of matrices with shape ``(N, k, k)``."""
    if stack.shape[-1] == 1:
        return np.abs(stack[:, 0, 0])
    return np.linalg.norm(stack, ord=2, axis=(-2, -1))


@lru_cache(maxsize=None)
def subsets(k: int, l: int) -> tuple[tuple[int, ...], ...]:
    """Sorted l-subsets of range(k) in lexicographic order."""
    return tuple(combinations(range(k), l))


def exterior_power(M, l: int) -> np.ndarray:
    """The l-th exterior power: the matrix of l x l minors.

    Rows and columns are indexed by sorted l-subsets in lexicographic order,
    so ``exterior_power(M @ N, l) == exterior_power(M, l) @ exterior_power(N, l)``.
    """
    M = as_matrix(M)
    k = M.shape[0]
    if not 1 <= l <= k:
        raise ValueError(f"exterior index l={l} out of range 1..{k}")
    if l == 1:
        return M.copy()
    S = subsets(k, l)
    if l == k:
        return np.array([[np.linalg.det(M)]])
    idx = np.array(S)
    # minors[r, c] = det M[rows S_r][:, cols S_c]
    sub = M[idx[:, None, :, None], idx[None, :, None, :]]
    return np.linalg.det(sub)


def eigen_moduli(M, rtol: float = SIMPLE_RTOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalue moduli in decreasing order and a per-modulus simplicity flag.

    Uses the real Schur form; a 2 x 2 diagonal block is a complex-conjugate
    pair and contributes two equal moduli ``sqrt(det(block))``.  A modulus is
    flagged simple iff no other modulus lies within relative ``rtol`` of it.
    """
    M = as_matrix(M)
    k = M.shape[0]
    T, _ = scipy.linalg.schur(M, output="real")
    if not np.all(np.isfinite(T)):
        raise np.linalg.LinAlgError("Schur iteration produced non-finite values")
    mods = []
    i = 0
    while i < k:
        if i + 1 < k and T[i + 1, i] != 0.0:
            block = T[i:i + 2, i:i + 2]
            m = math.sqrt(abs(np.linalg.det(block)))
            mods.extend([m, m])
            i += 2
        else:
            mods.append(abs(T[i, i]))
            i += 1
    mods = np.sort(np.array(mods))[::-1]
    simple = np.ones(k, dtype=bool)
    for a in range(k):
        for b in range(k):
            if a != b and abs(mods[a] - mods[b]) <= rtol * max(mods[a], mods[b]):
                simple[a] = False
    return mods, simple


def spectral_radius(M) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(as_matrix(M)))))


@dataclass(frozen=True)
class ScaledProduct:
    """A matrix product stored as ``exp(log_scale) * matrix``."""

    matrix: np.ndarray
    log_scale: float = 0.0

    @classmethod
    def identity(cls, k: int) -> "ScaledProduct":
        return cls(np.eye(k), 0.0)

    @property
    def log_norm(self) -> float:
        """Log of the operator norm of the true product."""
        return self.log_scale + math.log(op_norm(self.matrix))

    def value(self) -> np.ndarray:
        """The true product (may overflow for long products)."""
        return math.exp(self.log_scale) * self.matrix


def scaled_multiply(P: ScaledProduct, M) -> ScaledProduct:
    """Return the scaled form of ``M @ P``; the kept matrix has norm in [1/2, 2]."""
    prod = as_matrix(M) @ P.matrix
    nrm = op_norm(prod)
    if nrm == 0.0 or not math.isfinite(nrm):
        raise FloatingPointError("product became singular or overflowed")
    log_scale = P.log_scale
    if not 0.5 <= nrm <= 2.0:
        prod = prod / nrm
        log_scale += math.log(nrm)
    return ScaledProduct(prod, log_scale)


def product_log_norms(mats: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Log operator norms of ``mats[w[n-1]] @ ... @ mats[w[0]]`` for each row w.

    ``mats`` has shape ``(q, d, d)``; ``words`` has shape ``(N, n)``.
    Products are renormalized after every factor.
    """
    N, n = words.shape
    d = mats.shape[1]
    cur = mats[words[:, 0]].copy()
    logs = np.zeros(N)
    for j in range(1, n):
        nrm = op_norms(cur)
        cur /= nrm[:, None, None]
        logs += np.log(nrm)
        cur = np.matmul(mats[words[:, j]], cur)
    nrm = op_norms(cur)
    if d and np.any(nrm == 0):
        raise FloatingPointError("singular product encountered")
    return logs + np.log(nrm)


def product_stack(mats: np.ndarray, words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scaled products for each word: returns ``(matrices, log_scales)``."""
    N, n = words.shape
    cur = mats[words[:, 0]].copy()
    logs = np.zeros(N)
    for j in range(1, n):
        nrm = op_norms(cur)
        cur /= nrm[:, None, None]
        logs += np.log(nrm)
        cur = np.matmul(mats[words[:, j]], cur)
    return cur, logs
