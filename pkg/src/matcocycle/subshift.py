"""Two-sided subshifts of finite type given by a 0/1 transition matrix.

Words are tuples of ints.  A word ``I`` of length ``n`` names the cylinder
``{x : x_0 ... x_{n-1} = I}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

Word = tuple[int, ...]

#: default cap on the number of candidate words ``q**n`` an enumeration may touch
DEFAULT_WORD_CAP = 2**26


class ResourceLimitError(RuntimeError):
    """Raised when a computation would exceed a configured size cap."""


class InadmissibleWordError(ValueError):
    pass


@dataclass(frozen=True)
class TransitionMatrix:
    """0/1 adjacency matrix; entry (i, j) is 1 iff symbol j may follow i."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError(f"transition matrix must be square and nonempty, got shape {a.shape}")
        if not np.all((a == 0) | (a == 1)):
            raise ValueError("transition matrix entries must be 0 or 1")
        a = a.astype(np.int64)
        problems = []
        for i in range(a.shape[0]):
            if not a[i].any():
                problems.append(f"dead symbol {i}: row {i} has no allowed successor")
            if not a[:, i].any():
                problems.append(f"dead symbol {i}: column {i} has no allowed predecessor")
        if problems:
            raise ValueError("; ".join(problems))
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def q(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def full(cls, q: int) -> "TransitionMatrix":
        return cls(np.ones((q, q), dtype=np.int64))

    @property
    def is_full(self) -> bool:
        return bool(self.entries.all())

    def allows(self, a: int, b: int) -> bool:
        return bool(self.entries[a, b])

    def is_admissible(self, word: Sequence[int]) -> bool:
        if len(word) == 0:
            return True
        if any(s < 0 or s >= self.q for s in word):
            return False
        return all(self.entries[a, b] for a, b in zip(word[:-1], word[1:]))

    def is_cyclically_admissible(self, word: Sequence[int]) -> bool:
        return len(word) > 0 and self.is_admissible(word) and self.allows(word[-1], word[0])

    def check_word(self, word: Sequence[int]) -> Word:
        w = tuple(int(s) for s in word)
        if len(w) == 0 or not self.is_admissible(w):
            raise InadmissibleWordError(f"word {w} is not admissible")
        return w

    def __eq__(self, other):
        return isinstance(other, TransitionMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())


def parse_word(text: str | Sequence[int]) -> Word:
    """``"0110"`` or ``"0,1,10"`` or a sequence of ints -> tuple."""
    if not isinstance(text, str):
        return tuple(int(s) for s in text)
    text = text.strip()
    if "," in text or " " in text:
        return tuple(int(s) for s in text.replace(",", " ").split())
    return tuple(int(c) for c in text)


def format_word(word: Sequence[int]) -> str:
    if all(s < 10 for s in word):
        return "".join(str(s) for s in word)
    return ",".join(str(s) for s in word)


def is_primitive(Q: TransitionMatrix) -> tuple[bool, int | None]:
    """Return ``(flag, least n with Q**n > 0)`` testing up to the Wielandt bound."""
    q = Q.q
    bound = (q - 1) ** 2 + 1
    b = Q.entries.astype(bool)
    p = b.copy()
    for n in range(1, bound + 1):
        if p.all():
            return True, n
        p = (p.astype(np.int64) @ b.astype(np.int64)) > 0
    return False, None


def count_words(Q: TransitionMatrix, n: int) -> int:
    """Number of admissible words of length n (entry sum of ``Q**(n-1)``), exact."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = [1] * Q.q
    rows = [[int(x) for x in r] for r in Q.entries]
    for _ in range(n - 1):
        v = [sum(rows[i][j] * v[j] for j in range(Q.q)) for i in range(Q.q)]
    return sum(v)


def _check_cap(Q: TransitionMatrix, n: int, cap: int | None):
    cap = DEFAULT_WORD_CAP if cap is None else cap
    if cap <= 0:
        raise ValueError("cap must be positive")
    if Q.q ** n > cap:
        raise ResourceLimitError(f"enumeration of length {n} over {Q.q} symbols exceeds cap {cap}")


def word_array(Q: TransitionMatrix, n: int, cap: int | None = None, first: Sequence[int] | None = None) -> np.ndarray:
    """All admissible words of length n as an ``(N, n)`` int array, lexicographic.

    ``first`` restricts to words starting with one of the given symbols
    (used for sharding).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_cap(Q, n, cap)
    starts = range(Q.q) if first is None else sorted(first)
    words = np.array([[s] for s in starts], dtype=np.int64).reshape(-1, 1)
    A = Q.entries
    for _ in range(n - 1):
        last = words[:, -1]
        parent, sym = np.nonzero(A[last])
        words = np.concatenate([words[parent], sym[:, None]], axis=1)
    return words


def enumerate_words(Q: TransitionMatrix, n: int, cap: int | None = None) -> Iterator[Word]:
    """Yield every admissible word of length n once, in lexicographic order."""
    for row in word_array(Q, n, cap):
        yield tuple(int(s) for s in row)


def shard_prefixes(Q: TransitionMatrix, shards: int) -> list[list[int]]:
    """Split the first symbols into ``shards`` contiguous groups (some may be empty)."""
    shards = max(1, min(int(shards), Q.q))
    return [list(g) for g in np.array_split(np.arange(Q.q), shards)]


def perron_root(Q: TransitionMatrix, tol: float = 1e-14, max_iter: int = 100000) -> float:
    """Spectral radius of a primitive 0/1 matrix by power iteration."""
    ok, _ = is_primitive(Q)
    if not ok:
        raise ValueError("transition matrix is not primitive; restrict to a primitive component first")
    A = Q.entries.astype(float)
    v = np.ones(Q.q) / Q.q
    lam = 0.0
    for _ in range(max_iter):
        w = A @ v
        new = w.sum()
        w /= new
        # Collatz-Wielandt bounds bracket the root
        ratio = (A @ w) / w
        lo, hi = ratio.min(), ratio.max()
        v = w
        if hi - lo <= tol * hi:
            return float(0.5 * (lo + hi))
        lam = new
    raise RuntimeError(f"power iteration did not converge (last estimate {lam})")


def topological_entropy(Q: TransitionMatrix) -> float:
    """``log`` of the Perron root of Q."""
    return math.log(perron_root(Q))


def connector(Q: TransitionMatrix, I: Sequence[int], J: Sequence[int], max_gap: int) -> Word | None:
    """Shortest (then lexicographically least) K with ``|K| <= max_gap`` and IKJ admissible."""
    I = Q.check_word(I)
    J = Q.check_word(J)
    a, b = I[-1], J[0]
    if Q.allows(a, b):
        return ()
    # breadth-first in symbol order; keeping the first path to each end
    # symbol preserves shortest-then-lexicographic minimality
    layer = [(s,) for s in range(Q.q) if Q.allows(a, s)]
    for _ in range(max_gap):
        for K in layer:
            if Q.allows(K[-1], b):
                return K
        ends = set()
        nxt = []
        for K in layer:
            for s in range(Q.q):
                if Q.allows(K[-1], s) and s not in ends:
                    ends.add(s)
                    nxt.append(K + (s,))
        layer = nxt
    return None


def connector_table(Q: TransitionMatrix, max_gap: int) -> dict[tuple[int, int], Word | None]:
    """``connector`` for every (last symbol, first symbol) pair."""
    return {(a, b): connector(Q, (a,), (b,), max_gap) for a in range(Q.q) for b in range(Q.q)}
