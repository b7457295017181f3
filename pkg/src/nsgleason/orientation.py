"""Choi-matrix construction and CP / co-CP orientation classification.

A bipartite Hermitian operator t induces a linear map on operators,
phi_t(a) = tr_1(t (a^T (x) I)), whose Choi matrix (in the convention fixed
here) is t itself.  Whether the Choi matrix of t or of its site-1 partial
transpose is positive semidefinite decides between the two local time
orientations: completely positive maps keep the orientation, co-completely
positive maps (CP after a transpose) flip it.  The symmetric (Jordan) part
of the map is blind to this choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import (
    HermitianOperator,
    ValidationError,
    hermitian_eig,
    make_rng,
    min_eigenvalue,
    partial_transpose,
)

PSD_TOL = 1e-10


@dataclass(frozen=True)
class OperatorMap:
    """The linear map phi_t: L(H1) -> L(H2) induced by a bipartite t.

    Convention: phi_t(E_ij)[k, l] = t[(i,k), (j,l)], i.e.
    phi_t(a) = tr_1(t (a^T (x) I)).
    """

    t: HermitianOperator

    def __post_init__(self):
        if self.t.nsites != 2:
            raise ValidationError("operator maps need a two-site operator")

    @property
    def dims(self) -> tuple:
        return self.t.dims

    def __call__(self, a: np.ndarray) -> np.ndarray:
        d1, d2 = self.t.dims
        arr = self.t.mat.reshape(d1, d2, d1, d2)
        return np.einsum("ikjl,ij->kl", arr, np.asarray(a, dtype=complex))


def operator_to_map(t: HermitianOperator) -> OperatorMap:
    return OperatorMap(t)


def choi_of(t: HermitianOperator) -> HermitianOperator:
    """Choi matrix of the induced map, sum_ij E_ij (x) phi(E_ij).

    In the convention fixed by :class:`OperatorMap` this reproduces t
    itself; the operation exists to pin the convention bit-exactly and to
    carry the positivity tests.
    """
    phi = OperatorMap(t)
    d1, d2 = t.dims
    choi = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    eij = np.zeros((d1, d1), dtype=complex)
    for i in range(d1):
        for j in range(d1):
            eij[:] = 0.0
            eij[i, j] = 1.0
            choi += np.kron(eij, phi(eij))
    return HermitianOperator(t.dims, choi)


class Orientation(str, Enum):
    CP = "CP"
    CO_CP = "CO_CP"
    BOTH = "BOTH"
    NEITHER = "NEITHER"


@dataclass(frozen=True)
class OrientationClass:
    value: Orientation
    min_eig_choi: float
    min_eig_flipped_choi: float

    def to_json(self) -> dict:
        return {
            "class": self.value.value,
            "min_eig_choi": self.min_eig_choi,
            "min_eig_flipped_choi": self.min_eig_flipped_choi,
            "psd_tolerance": PSD_TOL,
        }


def classify_orientation(t: HermitianOperator) -> OrientationClass:
    """CP / co-CP / both / neither, by Choi positivity under the site-1 flip."""
    ev_direct = min_eigenvalue(choi_of(t).mat)
    ev_flipped = min_eigenvalue(choi_of(partial_transpose(t, 0)).mat)
    cp = ev_direct >= -PSD_TOL
    co_cp = ev_flipped >= -PSD_TOL
    if cp and co_cp:
        value = Orientation.BOTH
    elif cp:
        value = Orientation.CP
    elif co_cp:
        value = Orientation.CO_CP
    else:
        value = Orientation.NEITHER
    return OrientationClass(value, float(ev_direct), float(ev_flipped))


class UnsupportedOrientation(ValueError):
    """No orientation choice makes the map completely positive."""


@dataclass(frozen=True)
class KrausSet:
    """Kraus form phi(a) = sum_m K_m a K_m^dagger, with the flip recorded."""

    operators: tuple  # d2 x d1 matrices
    flipped: bool

    def apply(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=complex)
        if self.flipped:
            a = a.T
        out = np.zeros(
            (self.operators[0].shape[0], self.operators[0].shape[0]), dtype=complex
        )
        for k in self.operators:
            out += k @ a @ k.conj().T
        return out


def kraus_factorize(t: HermitianOperator, rank_tol: float = 1e-12) -> KrausSet:
    """Eigendecompose the (possibly flipped) Choi matrix into Kraus operators.

    If Choi(t) is not PSD but the site-1 flip's Choi is, the flip is applied
    and recorded; the returned set then represents phi_t composed with the
    transpose.  Raises :class:`UnsupportedOrientation` for the NEITHER class.
    """
    cls = classify_orientation(t)
    if cls.value == Orientation.NEITHER:
        raise UnsupportedOrientation(
            "no dilation under either local time orientation"
        )
    flipped = cls.value == Orientation.CO_CP
    source = partial_transpose(t, 0) if flipped else t
    spec = hermitian_eig(choi_of(source))
    d1, d2 = t.dims
    ops = []
    for lam, col in zip(spec.eigenvalues, spec.eigenvectors.T):
        if lam <= rank_tol:
            continue
        v = col.reshape(d1, d2)
        ops.append(np.sqrt(lam) * v.T)
    return KrausSet(tuple(ops), flipped)


@dataclass(frozen=True)
class SymmetrizationReport:
    max_deviation: float
    trials: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= 1e-10


def jordan_symmetrization_check(
    t: HermitianOperator, trials: int = 100, seed: int = 0
) -> SymmetrizationReport:
    """The symmetrized map is the same under both orientations.

    Checks phi_t(a) + phi_t(a^T) = phi_s(a) + phi_s(a^T) with s the site-1
    partial transpose of t, on random Hermitian inputs a.
    """
    phi = OperatorMap(t)
    phi_flip = OperatorMap(partial_transpose(t, 0))
    d1 = t.dims[0]
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(trials):
        z = rng.standard_normal((d1, d1)) + 1j * rng.standard_normal((d1, d1))
        a = 0.5 * (z + z.conj().T)
        lhs = phi(a) + phi(a.T)
        rhs = phi_flip(a) + phi_flip(a.T)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return SymmetrizationReport(worst, trials)
