"""Dense complex linear algebra over finite tensor-product Hilbert spaces.

Everything here works on plain numpy arrays; :class:`HermitianOperator` is a
thin validated wrapper that remembers the tensor factorization of the space it
acts on.  Tolerances are fixed module-wide and chosen for double precision at
total dimension up to ~1024.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Fixed numerical tolerances (double precision, D <= 1024).
HERMITICITY_TOL = 1e-10
ORTHONORMALITY_TOL = 1e-12
EIG_RESIDUAL_TOL = 1e-8


class ValidationError(ValueError):
    """Raised when an input fails a structural invariant beyond tolerance."""


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def proj(v: np.ndarray) -> np.ndarray:
    """Rank-1 projector |v><v|."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def tensor(factors) -> np.ndarray:
    """Kronecker product of a sequence of vectors (or matrices).

    Raises ValueError on an empty factor list.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("tensor requires at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def canonical_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rescale a vector so its first nonzero amplitude is real positive.

    Makes equality-up-to-global-phase checks deterministic.
    """
    v = np.asarray(v, dtype=complex)
    for x in v:
        if abs(x) > tol:
            return v * (x.conjugate() / abs(x))
    return v.copy()


def check_unit(v: np.ndarray, tol: float = ORTHONORMALITY_TOL) -> None:
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > tol:
        raise ValidationError(f"vector norm {nrm!r} deviates from 1 beyond {tol}")


@dataclass(frozen=True)
class HermitianOperator:
    """Dense self-adjoint operator on a tensor-product space.

    ``dims`` lists the local dimensions (d1, ..., dn); ``mat`` is the full
    D x D matrix with D = prod(dims), row-major in the computational product
    basis.
    """

    dims: tuple
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        mat = np.asarray(self.mat, dtype=complex)
        d_total = int(np.prod(dims)) if dims else 0
        if mat.shape != (d_total, d_total):
            raise ValidationError(
                f"matrix shape {mat.shape} incompatible with dims {dims}"
            )
        herm_err = np.max(np.abs(mat - mat.conj().T)) if d_total else 0.0
        if herm_err > HERMITICITY_TOL:
            raise ValidationError(
                f"matrix deviates from Hermiticity by {herm_err:.3e} > {HERMITICITY_TOL}"
            )
        # Symmetrize so downstream eigensolves see an exactly Hermitian matrix.
        mat = 0.5 * (mat + mat.conj().T)
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def nsites(self) -> int:
        return len(self.dims)

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def expectation(self, v: np.ndarray) -> float:
        """<v|t|v> (real part; the imaginary residue is below tolerance)."""
        v = np.asarray(v, dtype=complex)
        return float(np.vdot(v, self.mat @ v).real)

    def to_json(self) -> dict:
        entries = [[float(z.real), float(z.imag)] for z in self.mat.ravel()]
        return {"dims": list(self.dims), "entries": entries}

    @classmethod
    def from_json(cls, data: dict) -> "HermitianOperator":
        dims = tuple(int(d) for d in data["dims"])
        d_total = int(np.prod(dims))
        flat = np.array([complex(re, im) for re, im in data["entries"]])
        return cls(dims, flat.reshape(d_total, d_total))


def vector_to_json(v: np.ndarray) -> dict:
    return {"entries": [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]}


def vector_from_json(data: dict) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data["entries"]])


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian operator, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, orthonormal


def hermitian_eig(a: HermitianOperator | np.ndarray) -> Spectrum:
    """Eigendecomposition with eigenvalues sorted descending.

    Accepts a HermitianOperator or a raw matrix (validated against the
    Hermiticity tolerance either way).
    """
    if isinstance(a, HermitianOperator):
        mat = a.mat
    else:
        mat = np.asarray(a, dtype=complex)
        herm_err = np.max(np.abs(mat - mat.conj().T))
        if herm_err > HERMITICITY_TOL:
            raise ValidationError(
                f"matrix deviates from Hermiticity by {herm_err:.3e}"
            )
        mat = 0.5 * (mat + mat.conj().T)
    vals, vecs = np.linalg.eigh(mat)
    order = np.argsort(vals)[::-1]
    return Spectrum(vals[order], vecs[:, order])


def min_eigenvalue(mat: np.ndarray) -> float:
    mat = np.asarray(mat, dtype=complex)
    return float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0])


def _as_tensor(op: HermitianOperator) -> np.ndarray:
    dims = op.dims
    return op.mat.reshape(dims + dims)


def partial_transpose(t: HermitianOperator, site: int) -> HermitianOperator:
    """Transpose the given tensor factor in the computational basis."""
    n = t.nsites
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for {n} factors")
    arr = _as_tensor(t).copy()
    arr = np.swapaxes(arr, site, n + site)
    d_total = t.dim
    return HermitianOperator(t.dims, arr.reshape(d_total, d_total))


def partial_trace(t: HermitianOperator, site: int) -> HermitianOperator:
    """Trace out the given tensor factor."""
    n = t.nsites
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for {n} factors")
    arr = _as_tensor(t)
    arr = np.trace(arr, axis1=site, axis2=n + site)
    new_dims = t.dims[:site] + t.dims[site + 1:]
    d_total = int(np.prod(new_dims)) if new_dims else 1
    return HermitianOperator(new_dims, arr.reshape(d_total, d_total))


# ---------------------------------------------------------------------------
# Random sampling helpers (all take an explicit numpy Generator).

def random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-random unit vector in C^d, canonical phase."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return canonical_phase(v / np.linalg.norm(v))


def random_onb(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-random orthonormal basis of C^d, as columns, canonical phases."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    for k in range(d):
        q[:, k] = canonical_phase(q[:, k])
    return q


def random_hermitian(rng: np.random.Generator, dims) -> HermitianOperator:
    dims = tuple(int(d) for d in dims)
    d_total = int(np.prod(dims))
    z = rng.standard_normal((d_total, d_total)) + 1j * rng.standard_normal((d_total, d_total))
    return HermitianOperator(dims, 0.5 * (z + z.conj().T))


def random_density(rng: np.random.Generator, dims) -> HermitianOperator:
    """Random density matrix (Hilbert-Schmidt-style: G G^dagger normalized)."""
    dims = tuple(int(d) for d in dims)
    d_total = int(np.prod(dims))
    g = rng.standard_normal((d_total, d_total)) + 1j * rng.standard_normal((d_total, d_total))
    rho = g @ g.conj().T
    return HermitianOperator(dims, rho / np.trace(rho).real)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator so identical seeds reproduce across platforms."""
    return np.random.Generator(np.random.Philox(seed))
