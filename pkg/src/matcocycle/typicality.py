"""Pinching and twisting for locally constant cocycles.

A periodic point ``p`` (one period ``p_word`` repeated) and a homoclinic
point ``z`` that agrees with ``p`` outside a finite block give two matrices:
the period product ``P = A^per(p)`` and the holonomy loop
``psi = H^s_{p<-z} H^u_{z<-p}``.  For a locally constant cocycle the
holonomies are finite products,

    H^s_{p<-z} = A^m(p)^{-1} A^m(z),
    H^u_{z<-p} = A^m'(T^{-m'} z) A^m'(T^{-m'} p)^{-1},

where ``m`` (resp. ``m'``) covers the coordinates ``>= 0`` (resp. ``< 0``)
where ``z`` and ``p`` differ.

Level ``t`` asks that the products of ``t`` distinct eigenvalues of ``P``
have distinct moduli (pinching) and that ``psi^t`` moves every eigenvector
``v_{i_1} ^ ... ^ v_{i_t}`` of ``P^t`` off every hyperplane spanned by the
others (twisting), i.e. every coefficient of the matrix
``(V^t)^{-1} psi^t V^t`` is nonzero.

Flags are three-valued: ``True``, ``False``, or ``None`` for inconclusive,
when the deciding quantity falls in ``[tol / 100, tol)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cocycle import CocycleSpec, word_product
from .matkernel import eigen_moduli, exterior_power
from .subshift import InadmissibleWordError, Word, parse_word

PINCH_TOL = 1e-6
TWIST_TOL = 1e-8
#: below tol * INCONCLUSIVE_FACTOR a flag is a definite False
INCONCLUSIVE_FACTOR = 1e-2


class PreconditionError(ValueError):
    """Twisting was requested at a level where pinching fails."""


def _three_valued(value: float, tol: float) -> bool | None:
    if value >= tol:
        return True
    if value < tol * INCONCLUSIVE_FACTOR:
        return False
    return None


@dataclass(frozen=True)
class HomoclinicSpec:
    """``z_j = insert[j - offset]`` on the insert block and ``p_word[j mod per]`` elsewhere."""

    p_word: Word
    insert: Word
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "p_word", parse_word(self.p_word))
        object.__setattr__(self, "insert", parse_word(self.insert))
        if not self.p_word:
            raise ValueError("p_word must be nonempty")

    @property
    def period(self) -> int:
        return len(self.p_word)

    def p_at(self, j: int) -> int:
        return self.p_word[j % self.period]

    def z_at(self, j: int) -> int:
        if self.offset <= j < self.offset + len(self.insert):
            return self.insert[j - self.offset]
        return self.p_at(j)

    def validate(self, spec: CocycleSpec) -> None:
        Q = spec.shift
        if not Q.is_cyclically_admissible(self.p_word):
            raise InadmissibleWordError(f"periodic word {self.p_word} is not cyclically admissible")
        lo, hi = self.offset - 1, self.offset + len(self.insert) + 1
        window = [self.z_at(j) for j in range(lo, hi)]
        if not Q.is_admissible(window):
            raise InadmissibleWordError(f"homoclinic block {window} (coordinates {lo}..{hi - 1}) "
                                        "is not admissible at its seams")

    def forward_depth(self) -> int:
        """Coordinates ``0..m-1`` cover every nonnegative place where z and p differ."""
        diff = [j for j in range(max(self.offset, 0), self.offset + len(self.insert)) if self.z_at(j) != self.p_at(j)]
        return max(diff) + 1 if diff else 0

    def backward_depth(self) -> int:
        """Coordinates ``-m'..-1`` cover every negative place where z and p differ."""
        diff = [j for j in range(self.offset, min(self.offset + len(self.insert), 0)) if self.z_at(j) != self.p_at(j)]
        return -min(diff) if diff else 0


def periodic_product(spec: CocycleSpec, p_word: Sequence[int]) -> np.ndarray:
    """``A^per(p) = A_{p_{per-1}} ... A_{p_0}``."""
    w = parse_word(p_word)
    if not spec.shift.is_cyclically_admissible(w):
        raise InadmissibleWordError(f"periodic word {w} is not cyclically admissible")
    return word_product(spec, w).value()


def _segment(spec: CocycleSpec, symbols: Sequence[int]) -> np.ndarray:
    if not symbols:
        return np.eye(spec.k)
    return word_product(spec, symbols).value()


def holonomy_loop(spec: CocycleSpec, h: HomoclinicSpec) -> np.ndarray:
    h.validate(spec)
    m = h.forward_depth()
    Hs = np.linalg.solve(_segment(spec, [h.p_at(j) for j in range(m)]),
                         _segment(spec, [h.z_at(j) for j in range(m)]))
    mb = h.backward_depth()
    Zb = _segment(spec, [h.z_at(j) for j in range(-mb, 0)])
    Pb = _segment(spec, [h.p_at(j) for j in range(-mb, 0)])
    Hu = np.linalg.solve(Pb.T, Zb.T).T
    return Hs @ Hu


def pinching_check(P, tol: float = PINCH_TOL, level: int = 1) -> tuple[bool | None, list[float]]:
    """Distinct eigenvalue moduli of ``P^level``; returns the flag and consecutive modulus ratios.

    The flag compares the smallest relative gap ``1 - m_{i+1}/m_i`` with
    ``tol``.  A complex pair has a zero gap, so it always fails.
    """
    M = exterior_power(P, level)
    mods, _ = eigen_moduli(M)
    if len(mods) == 1:
        return True, []
    with np.errstate(divide="ignore"):
        ratios = [float(a / b) if b > 0 else float("inf") for a, b in zip(mods[:-1], mods[1:])]
    rel = min(1.0 - 1.0 / r if r > 0 else 0.0 for r in ratios)
    return _three_valued(rel, tol), ratios


def _eigenbasis(P) -> np.ndarray:
    """Real unit eigenvectors of P as columns, ordered by decreasing modulus."""
    vals, vecs = np.linalg.eig(np.asarray(P, dtype=float))
    order = np.argsort(-np.abs(vals), kind="stable")
    V = np.real(vecs[:, order])
    return V / np.linalg.norm(V, axis=0)


def twisting_coefficients(psi, P, t: int = 1) -> np.ndarray:
    """``|c_ij|``: coefficient of ``v_I`` in ``psi^t(v_J)`` relative to ``||psi^t(v_J)||`` (unit ``v_I``)."""
    V = _eigenbasis(P)
    Vt = exterior_power(V, t)
    Vt = Vt / np.linalg.norm(Vt, axis=0)
    images = exterior_power(psi, t) @ Vt
    coeffs = np.linalg.solve(Vt, images)
    return np.abs(coeffs) / np.linalg.norm(images, axis=0)


def twisting_check(psi, P, t: int = 1, tol: float = TWIST_TOL,
                   pinch_tol: float = PINCH_TOL) -> tuple[bool | None, float]:
    pinched, _ = pinching_check(P, pinch_tol, level=1)
    pinched_t, _ = pinching_check(P, pinch_tol, level=t)
    if not (pinched and pinched_t):
        raise PreconditionError(f"precondition: pinching fails at level {t}")
    c = twisting_coefficients(psi, P, t)
    m = float(np.min(c))
    return _three_valued(m, tol), m


@dataclass(frozen=True)
class LevelResult:
    t: int
    pinching: bool | None
    modulus_ratios: list[float]
    twisting: bool | None
    min_coeff: float | None


def _and3(flags) -> bool | None:
    flags = list(flags)
    if any(f is False for f in flags):
        return False
    if any(f is None for f in flags):
        return None
    return True


@dataclass(frozen=True)
class TypicalityReport:
    levels: list[LevelResult]
    typical: bool | None
    pinch_tol: float
    twist_tol: float
    P: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)

    def to_dict(self, embed_matrices: bool = False) -> dict:
        d = {
            "typical": self.typical,
            "pinch_tol": self.pinch_tol,
            "twist_tol": self.twist_tol,
            "levels": [
                {"t": L.t, "pinching": L.pinching, "modulus_ratios": L.modulus_ratios,
                 "twisting": L.twisting, "min_coeff": L.min_coeff}
                for L in self.levels
            ],
        }
        if embed_matrices:
            d["P"] = self.P.tolist()
            d["psi"] = self.psi.tolist()
        return d

    def to_json(self, embed_matrices: bool = False) -> str:
        return json.dumps(self.to_dict(embed_matrices), indent=2)


def typicality_report(spec: CocycleSpec, h: HomoclinicSpec, pinch_tol: float = PINCH_TOL,
                      twist_tol: float = TWIST_TOL) -> TypicalityReport:
    """Pinching and twisting at every level ``1 <= t <= k-1``; typical is their conjunction."""
    P = periodic_product(spec, h.p_word)
    psi = holonomy_loop(spec, h)
    base, _ = pinching_check(P, pinch_tol, 1)
    levels = []
    for t in range(1, spec.k):
        pinch, ratios = pinching_check(P, pinch_tol, t)
        pinch = _and3([base, pinch])
        if pinch:
            twist, m = twisting_check(psi, P, t, twist_tol, pinch_tol)
        else:
            twist, m = None, None
        levels.append(LevelResult(t, pinch, ratios, twist, m))
    flags = [f for L in levels for f in (L.pinching, L.twisting if L.pinching else L.pinching)]
    return TypicalityReport(levels, _and3(flags), pinch_tol, twist_tol, P, psi)
