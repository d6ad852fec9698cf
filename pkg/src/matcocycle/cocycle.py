"""Locally constant matrix cocycles over a subshift of finite type.

The generator attached to symbol ``i`` is ``A_i``; along a word
``I = i_0 ... i_{n-1}`` the cocycle is ``A(I) = A_{i_{n-1}} ... A_{i_0}``.
Because the generators depend on ``x_0`` only, the cylinder norm
``max_{x in [I]} ||A^n(x)||`` is just ``||A(I)||``.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from .matkernel import (ScaledProduct, as_matrix, exterior_power, op_norm, product_log_norms,
                        scaled_multiply)
from .subshift import TransitionMatrix, Word, format_word, shard_prefixes, word_array

#: generators with |det| below this are rejected
DET_FLOOR = 1e-12


class SpecError(ValueError):
    """A cocycle description failed validation; ``problems`` lists every violation."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True, eq=False)
class CocycleSpec:
    shift: TransitionMatrix
    generators: tuple[np.ndarray, ...]
    omega: float = 0.5
    holder_r: float = 1.0
    _ext_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(np.array(as_matrix(g), dtype=float) for g in self.generators)
        problems = validate(self.shift, gens, self.omega, self.holder_r)
        if problems:
            raise SpecError(problems)
        for g in gens:
            g.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "holder_r", float(self.holder_r))

    @property
    def q(self) -> int:
        return self.shift.q

    @property
    def k(self) -> int:
        return self.generators[0].shape[0]

    def exterior_generators(self, l: int) -> np.ndarray:
        """Stack ``(q, C(k,l), C(k,l))`` of the l-th exterior powers of the generators."""
        if not 1 <= l <= self.k:
            raise ValueError(f"exterior index l={l} out of range 1..{self.k}")
        if l not in self._ext_cache:
            self._ext_cache[l] = np.stack([exterior_power(g, l) for g in self.generators])
        return self._ext_cache[l]

    def mapped(self, fn) -> "CocycleSpec":
        """A spec with every generator replaced by ``fn(A_i)``."""
        return CocycleSpec(self.shift, tuple(fn(g) for g in self.generators), self.omega, self.holder_r)

    def to_dict(self) -> dict:
        return {
            "alphabet": self.q,
            "transition": self.shift.entries.tolist(),
            "matrices": {str(i): g.tolist() for i, g in enumerate(self.generators)},
            "omega": self.omega,
            "holder_r": self.holder_r,
        }

    def to_json(self) -> str:
        # repr of a float is the shortest string that round-trips exactly
        return json.dumps(self.to_dict(), indent=2)

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    @classmethod
    def from_dict(cls, d: Mapping) -> "CocycleSpec":
        problems = []
        for key in ("alphabet", "transition", "matrices"):
            if key not in d:
                problems.append(f"missing field '{key}'")
        if problems:
            raise SpecError(problems)
        q = d["alphabet"]
        if not isinstance(q, int) or q < 1:
            raise SpecError([f"alphabet must be a positive integer, got {q!r}"])
        try:
            shift = TransitionMatrix(np.array(d["transition"]))
        except ValueError as e:
            problems.append(f"transition: {e}")
            shift = None
        mats = d["matrices"]
        if isinstance(mats, Mapping):
            keys = {str(i) for i in range(q)}
            if set(mats) != keys:
                problems.append(f"matrices must be keyed by symbols 0..{q - 1}, got {sorted(mats)}")
                gens = []
            else:
                gens = [mats[str(i)] for i in range(q)]
        else:
            gens = list(mats)
        arrays = []
        for i, g in enumerate(gens):
            try:
                arrays.append(as_matrix(g))
            except (ValueError, TypeError) as e:
                problems.append(f"matrix for symbol {i}: {e}")
        omega = d.get("omega", 0.5)
        holder_r = d.get("holder_r", 1.0)
        if len(arrays) == len(gens):
            problems.extend(validate(shift, arrays, omega, holder_r, alphabet=q))
        elif shift is not None and shift.q != q:
            problems.append(f"transition is {shift.q}x{shift.q} but alphabet is {q}")
        if problems:
            raise SpecError(problems)
        return cls(shift, tuple(arrays), omega, holder_r)

    @classmethod
    def from_json(cls, text: str) -> "CocycleSpec":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError([f"invalid JSON: {e}"]) from e
        if not isinstance(d, Mapping):
            raise SpecError(["top-level JSON value must be an object"])
        return cls.from_dict(d)


def validate(shift, gens, omega, holder_r, alphabet=None) -> list[str]:
    """Every problem with the pieces of a spec; ``shift`` may be None if it failed to parse."""
    problems = []
    q = shift.q if shift is not None else (alphabet if alphabet is not None else len(gens))
    if alphabet is not None and alphabet != q:
        problems.append(f"transition is {q}x{q} but alphabet is {alphabet}")
    if len(gens) != q:
        problems.append(f"expected {q} generators, got {len(gens)}")
    shapes = {np.shape(g) for g in gens}
    if len(shapes) > 1:
        problems.append(f"generators have mismatched shapes {sorted(shapes)}")
    else:
        for i, g in enumerate(gens):
            det = abs(np.linalg.det(g))
            if not det >= DET_FLOOR:
                problems.append(f"matrix for symbol {i} is singular (|det|={det:.3g})")
    try:
        if not 0.0 < float(omega) < 1.0:
            problems.append(f"omega must lie in (0, 1), got {omega}")
    except (TypeError, ValueError):
        problems.append(f"omega must be a number, got {omega!r}")
    try:
        if not float(holder_r) > 0.0:
            problems.append(f"holder_r must be positive, got {holder_r}")
    except (TypeError, ValueError):
        problems.append(f"holder_r must be a number, got {holder_r!r}")
    return problems


def load_spec(path: str | Path) -> CocycleSpec:
    return CocycleSpec.from_json(Path(path).read_text())


def save_spec(spec: CocycleSpec, path: str | Path) -> None:
    Path(path).write_text(spec.to_json() + "\n")


def word_product(spec: CocycleSpec, word: Sequence[int], l: int = 1) -> ScaledProduct:
    """Scaled product ``A_{i_{n-1}}^l ... A_{i_0}^l`` (exterior power l)."""
    w = spec.shift.check_word(word)
    mats = spec.exterior_generators(l)
    P = ScaledProduct.identity(mats.shape[1])
    for s in w:
        P = scaled_multiply(P, mats[s])
    return P


@dataclass(frozen=True)
class CylinderNormTable:
    """Log operator norms of ``A^l(I)`` for every admissible word of length n."""

    n: int
    l: int
    words: np.ndarray
    log_norms: np.ndarray

    def __len__(self):
        return len(self.log_norms)

    def __getitem__(self, word) -> float:
        return self.as_dict()[tuple(int(s) for s in word)]

    def items(self) -> Iterator[tuple[Word, float]]:
        for w, v in zip(self.words, self.log_norms):
            yield tuple(int(s) for s in w), float(v)

    def as_dict(self) -> dict[Word, float]:
        return dict(self.items())

    def labelled(self) -> dict[str, float]:
        return {format_word(w): v for w, v in self.items()}


def _map_shards(fn, groups: list, shards: int) -> list:
    if shards <= 1 or len(groups) <= 1:
        return [fn(g) for g in groups]
    with ThreadPoolExecutor(max_workers=shards) as pool:
        return list(pool.map(fn, groups))


def cylinder_norm_table(spec: CocycleSpec, n: int, l: int = 1, cap: int | None = None,
                        shards: int = 1) -> CylinderNormTable:
    """Cylinder log-norm table at depth n; shards split by first symbol and merge in order."""
    mats = spec.exterior_generators(l)
    groups = shard_prefixes(spec.shift, shards)

    def run(first):
        words = word_array(spec.shift, n, cap, first=first)
        return words, product_log_norms(mats, words)

    parts = _map_shards(run, groups, shards)
    words = np.concatenate([p[0] for p in parts])
    logs = np.concatenate([p[1] for p in parts])
    return CylinderNormTable(n, l, words, logs)


def fiber_bunched(spec: CocycleSpec) -> tuple[bool, float]:
    """``(max_i ||A_i|| ||A_i^-1|| omega^r < 1, that maximum)``."""
    worst = max(op_norm(g) * op_norm(np.linalg.inv(g)) for g in spec.generators)
    margin = worst * spec.omega ** spec.holder_r
    return margin < 1.0, margin


def conformal(spec: CocycleSpec, rtol: float = 1e-12) -> bool:
    """True when every generator is a scalar multiple of an orthogonal matrix."""
    for g in spec.generators:
        s = np.linalg.svd(g, compute_uv=False)
        if s[0] - s[-1] > rtol * s[0]:
            return False
    return True


# Example cocycles used throughout the tests and demos.

def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def butler(sigma: float = 2.0, omega: float = 0.5, holder_r: float = 1.0) -> CocycleSpec:
    """Diagonal pair ``diag(sigma, 1/sigma)``, ``diag(1/sigma, sigma)`` on the full 2-shift."""
    return CocycleSpec(TransitionMatrix.full(2),
                       (np.diag([sigma, 1 / sigma]), np.diag([1 / sigma, sigma])), omega, holder_r)


def identity_cocycle(Q: TransitionMatrix, k: int = 2) -> CocycleSpec:
    return CocycleSpec(Q, tuple(np.eye(k) for _ in range(Q.q)))


def positive_pair() -> CocycleSpec:
    """``[[2,1],[1,1]]`` and ``[[1,1],[1,2]]`` on the full 2-shift."""
    return CocycleSpec(TransitionMatrix.full(2),
                       (np.array([[2.0, 1.0], [1.0, 1.0]]), np.array([[1.0, 1.0], [1.0, 2.0]])))


def golden_mean() -> TransitionMatrix:
    return TransitionMatrix(np.array([[1, 1], [1, 0]]))
