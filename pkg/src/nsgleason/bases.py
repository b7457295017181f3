"""Product, unentangled, and twisted product bases.

An *unentangled basis* is an orthonormal basis of the full space all of whose
elements are product states.  A *twisted product basis* is one reachable from
a plain product basis by a sequence of local two-element rotations (twist
moves).  This module applies and searches such moves, and ships the
nine-element C3 x C3 worked example together with its four-move certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import (
    ValidationError,
    canonical_phase,
    check_unit,
    tensor,
    vector_from_json,
    vector_to_json,
)

# Two factors agreeing up to phase must overlap by at least this much.
SAME_FACTOR_TOL = 1e-10
# Pairwise element overlaps below this count as orthogonal.
ORTHO_PAIR_TOL = 1e-8
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class ProductState:
    """A product state, stored as per-site unit factors with canonical phase."""

    factors: tuple

    def __post_init__(self):
        facs = []
        for f in self.factors:
            f = canonical_phase(np.asarray(f, dtype=complex))
            check_unit(f)
            f.setflags(write=False)
            facs.append(f)
        object.__setattr__(self, "factors", tuple(facs))

    @property
    def dims(self) -> tuple:
        return tuple(len(f) for f in self.factors)

    @property
    def nsites(self) -> int:
        return len(self.factors)

    def full(self) -> np.ndarray:
        return tensor(self.factors)

    def overlap(self, other: "ProductState") -> complex:
        """<self|other>, computed factorwise."""
        out = 1.0 + 0j
        for f, g in zip(self.factors, other.factors):
            out *= np.vdot(f, g)
        return out

    def key(self) -> bytes:
        """Bit-exact serialization key (canonical phases make this stable)."""
        return b"".join(np.ascontiguousarray(f).tobytes() for f in self.factors)

    def to_json(self) -> dict:
        return {"factors": [vector_to_json(f)["entries"] for f in self.factors]}

    @classmethod
    def from_json(cls, data: dict) -> "ProductState":
        return cls(tuple(vector_from_json({"entries": e}) for e in data["factors"]))


@dataclass(frozen=True)
class ProductBasis:
    """Per-site orthonormal bases; elements are all combinations."""

    local_bases: tuple  # per site: tuple of unit vectors

    def __post_init__(self):
        bases = []
        for lb in self.local_bases:
            vecs = tuple(canonical_phase(np.asarray(v, dtype=complex)) for v in lb)
            d = len(vecs[0])
            if len(vecs) != d:
                raise ValidationError(f"local basis has {len(vecs)} vectors in dim {d}")
            gram = np.array([[np.vdot(u, v) for v in vecs] for u in vecs])
            if np.max(np.abs(gram - np.eye(d))) > 1e-10:
                raise ValidationError("local basis Gram matrix deviates from identity")
            bases.append(vecs)
        object.__setattr__(self, "local_bases", tuple(bases))

    @property
    def dims(self) -> tuple:
        return tuple(len(lb) for lb in self.local_bases)

    def elements(self) -> list:
        combos = itertools.product(*self.local_bases)
        return [ProductState(c) for c in combos]

    def to_unentangled(self) -> "UnentangledBasis":
        return UnentangledBasis(tuple(self.elements()))


@dataclass(frozen=True)
class UnentangledBasis:
    """An orthonormal basis consisting of product states."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(
            e if isinstance(e, ProductState) else ProductState(tuple(e))
            for e in self.elements
        )
        if not elems:
            raise ValidationError("empty basis")
        dims = elems[0].dims
        for e in elems:
            if e.dims != dims:
                raise ValidationError("inconsistent dims across basis elements")
        object.__setattr__(self, "elements", elems)

    @property
    def dims(self) -> tuple:
        return self.elements[0].dims

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "elements": [e.to_json() for e in self.elements],
        }

    @classmethod
    def from_json(cls, data: dict) -> "UnentangledBasis":
        return cls(tuple(ProductState.from_json(e) for e in data["elements"]))


@dataclass(frozen=True)
class BasisReport:
    """Validation report for an unentangled basis."""

    is_valid: bool
    complete: bool
    worst_overlap: float
    worst_pair: tuple | None
    failures: tuple = ()


def _site_overlaps(b: UnentangledBasis) -> list:
    """Per-site N x N matrices of absolute factor overlaps |<f_i^s|f_j^s>|."""
    out = []
    for s in range(b.elements[0].nsites):
        f = np.array([e.factors[s] for e in b.elements])
        out.append(np.abs(f.conj() @ f.T))
    return out


def validate_unentangled(b: UnentangledBasis) -> BasisReport:
    """Check pairwise orthogonality (factorwise) and completeness.

    Overlaps are computed per site and multiplied, never via full
    D-dimensional vectors, so large bases (e.g. 2^10 elements) stay cheap.
    """
    n = len(b.elements)
    total = np.ones((n, n))
    for ov in _site_overlaps(b):
        total *= ov
    iu = np.triu_indices(n, k=1)
    pair_overlaps = total[iu]
    failures = []
    if pair_overlaps.size:
        worst_idx = int(np.argmax(pair_overlaps))
        worst = float(pair_overlaps[worst_idx])
        worst_pair = (int(iu[0][worst_idx]), int(iu[1][worst_idx]))
        bad = np.nonzero(pair_overlaps > ORTHO_PAIR_TOL)[0]
        failures = [
            (int(iu[0][k]), int(iu[1][k]), float(pair_overlaps[k])) for k in bad
        ]
    else:
        worst, worst_pair = 0.0, None
    complete = n == b.dim
    is_valid = complete and not failures
    return BasisReport(is_valid, complete, worst, worst_pair, tuple(failures))


@dataclass(frozen=True)
class TwistMove:
    """Rotate two basis elements inside a 2-dim subspace at one site.

    The two referenced elements must agree on every factor except ``site``;
    there their factors span the 2-dim local subspace the rotation acts on.
    """

    site: int
    pair: tuple
    rotation: np.ndarray  # 2x2 unitary

    def __post_init__(self):
        u = np.asarray(self.rotation, dtype=complex)
        if u.shape != (2, 2):
            raise ValidationError("rotation must be 2x2")
        if np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
            raise ValidationError("rotation is not unitary within tolerance")
        u.setflags(write=False)
        object.__setattr__(self, "rotation", u)
        object.__setattr__(self, "pair", (int(self.pair[0]), int(self.pair[1])))

    def to_json(self) -> dict:
        return {
            "site": self.site,
            "pair": list(self.pair),
            "rotation": [[[z.real, z.imag] for z in row] for row in self.rotation],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TwistMove":
        rot = np.array(
            [[complex(re, im) for re, im in row] for row in data["rotation"]]
        )
        return cls(int(data["site"]), tuple(data["pair"]), rot)


def _factors_agree(e1: ProductState, e2: ProductState, site: int) -> bool:
    for s in range(e1.nsites):
        if s == site:
            continue
        if abs(np.vdot(e1.factors[s], e2.factors[s])) < 1 - SAME_FACTOR_TOL:
            return False
    return True


def apply_twist(b: UnentangledBasis, m: TwistMove) -> UnentangledBasis:
    """Apply a twist move; all elements except the referenced pair are unchanged."""
    i, j = m.pair
    ei, ej = b.elements[i], b.elements[j]
    if not _factors_agree(ei, ej, m.site):
        raise ValidationError(
            f"elements {i},{j} do not agree on all factors except site {m.site}"
        )
    u_i = ei.factors[m.site]
    u_j = ej.factors[m.site]
    if abs(np.vdot(u_i, u_j)) > ORTHO_PAIR_TOL:
        raise ValidationError("pair factors at the twist site are not orthogonal")
    new_i = m.rotation[0, 0] * u_i + m.rotation[0, 1] * u_j
    new_j = m.rotation[1, 0] * u_i + m.rotation[1, 1] * u_j
    elems = list(b.elements)
    elems[i] = ProductState(
        ei.factors[: m.site] + (new_i,) + ei.factors[m.site + 1:]
    )
    elems[j] = ProductState(
        ei.factors[: m.site] + (new_j,) + ei.factors[m.site + 1:]
    )
    return UnentangledBasis(tuple(elems))


def find_local_pairs(b: UnentangledBasis) -> list:
    """All (site, (i, j)) pairs differing in exactly one tensor factor.

    These are the 2-dim local subspaces a twist move can act on.  Exhaustive
    over element pairs; overlap matrices are computed per site, so even the
    2^10-element tiling bases are handled quickly.
    """
    site_ov = _site_overlaps(b)
    differs = np.stack([ov < 1 - SAME_FACTOR_TOL for ov in site_ov])
    n_diff = differs.sum(axis=0)
    out = []
    n = len(b.elements)
    iu = np.triu_indices(n, k=1)
    single = np.nonzero(n_diff[iu] == 1)[0]
    for k in single:
        i, j = int(iu[0][k]), int(iu[1][k])
        site = int(np.nonzero(differs[:, i, j])[0][0])
        out.append((site, (i, j)))
    return out


@dataclass(frozen=True)
class TwistCertificate:
    """A replayable move sequence from an unentangled basis to a product basis."""

    moves: tuple
    initial: UnentangledBasis
    final: ProductBasis

    def replay(self, tol: float = 1e-8) -> bool:
        b = self.initial
        for m in self.moves:
            b = apply_twist(b, m)
        # Compare as sets of elements up to phase, within tolerance.
        final_elems = self.final.to_unentangled().elements
        for e in b.elements:
            if not any(abs(e.overlap(f)) > 1 - tol for f in final_elems):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "moves": [m.to_json() for m in self.moves],
            "initial": self.initial.to_json(),
            "final": [
                [vector_to_json(v)["entries"] for v in lb]
                for lb in self.final.local_bases
            ],
        }


@dataclass(frozen=True)
class SearchResult:
    found: bool
    certificate: TwistCertificate | None
    reason: str = ""
    moves_tried: int = 0


def _as_product_basis(b: UnentangledBasis) -> ProductBasis | None:
    """Recognize a basis whose elements form a full product grid."""
    nsites = b.elements[0].nsites
    reps = [[] for _ in range(nsites)]
    signatures = []
    for e in b.elements:
        sig = []
        for s in range(nsites):
            f = e.factors[s]
            idx = None
            for k, r in enumerate(reps[s]):
                if abs(np.vdot(f, r)) > 1 - SAME_FACTOR_TOL:
                    idx = k
                    break
            if idx is None:
                reps[s].append(f)
                idx = len(reps[s]) - 1
            sig.append(idx)
        signatures.append(tuple(sig))
    dims = b.dims
    for s in range(nsites):
        if len(reps[s]) != dims[s]:
            return None
    if len(set(signatures)) != len(signatures):
        return None
    try:
        return ProductBasis(tuple(tuple(r) for r in reps))
    except ValidationError:
        return None


def _alignment_score(b: UnentangledBasis) -> int:
    """Count (site, pair) slots whose factors are equal or orthogonal.

    A full product basis maximizes this: every pair of elements either shares
    a site factor or has orthogonal ones.
    """
    elems = b.elements
    nsites = elems[0].nsites
    score = 0
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            for s in range(nsites):
                ov = abs(np.vdot(elems[i].factors[s], elems[j].factors[s]))
                if ov > 1 - SAME_FACTOR_TOL or ov < ORTHO_PAIR_TOL:
                    score += 1
    return score


def _span_coefficients(g: np.ndarray, u: np.ndarray, v: np.ndarray):
    """Express g in span{u, v}; returns (alpha, beta) or None if outside."""
    a = np.vdot(u, g)
    c = np.vdot(v, g)
    if abs(a) ** 2 + abs(c) ** 2 < 1 - 1e-8:
        return None
    return a, c


def _rotation_to_target(u: np.ndarray, v: np.ndarray, g: np.ndarray) -> np.ndarray | None:
    """2x2 unitary sending (u, v) to (g, g_perp) inside span{u, v}."""
    coeffs = _span_coefficients(g, u, v)
    if coeffs is None:
        return None
    a, c = coeffs
    nrm = np.hypot(abs(a), abs(c))
    a, c = a / nrm, c / nrm
    # Rows act on the (u, v) pair: new_1 = a*u + c*v = g, new_2 = its complement.
    return np.array([[a, c], [-np.conj(c), np.conj(a)]])


def twist_search(b: UnentangledBasis, budget: int = 50) -> SearchResult:
    """Greedy untwisting: apply moves that strictly improve alignment.

    Ties break deterministically (lowest site, then lowest element pair).  A
    returned certificate is a positive proof of twisted-product membership; an
    exhaustion report is NOT a proof of non-membership.
    """
    initial = b
    moves = []
    tried = 0
    for _ in range(budget):
        pb = _as_product_basis(b)
        if pb is not None:
            cert = TwistCertificate(tuple(moves), initial, pb)
            return SearchResult(True, cert)
        pairs = find_local_pairs(b)
        if not pairs:
            return SearchResult(
                False, None, "no local pairs exist; no twist move applies", tried
            )
        base_score = _alignment_score(b)
        best = None  # (score, site, pair, move, new_basis)
        for site, (i, j) in sorted(pairs):
            u = b.elements[i].factors[site]
            v = b.elements[j].factors[site]
            # Candidate targets: site factors of other elements (align with
            # an existing local frame) plus computational axes in the span.
            targets = [e.factors[site] for k, e in enumerate(b.elements) if k not in (i, j)]
            d_loc = len(u)
            targets.extend(np.eye(d_loc)[k] for k in range(d_loc))
            tried_keys = set()
            for g in targets:
                rot = _rotation_to_target(u, v, np.asarray(g, dtype=complex))
                if rot is None:
                    continue
                key = np.round(rot, 9).tobytes()
                if key in tried_keys:
                    continue
                tried_keys.add(key)
                move = TwistMove(site, (i, j), rot)
                try:
                    nb = apply_twist(b, move)
                except ValidationError:
                    continue
                tried += 1
                score = _alignment_score(nb)
                if score > base_score and (best is None or score > best[0]):
                    best = (score, site, (i, j), move, nb)
        if best is None:
            return SearchResult(False, None, "no strictly improving move found", tried)
        moves.append(best[3])
        b = best[4]
    pb = _as_product_basis(b)
    if pb is not None:
        cert = TwistCertificate(tuple(moves), initial, pb)
        return SearchResult(True, cert)
    return SearchResult(False, None, "move budget exhausted", tried)


# ---------------------------------------------------------------------------
# Worked nine-element example on C3 x C3 and its four-move certificate.

def _ket(d: int, *amps) -> np.ndarray:
    """Normalized vector in C^d with the given computational amplitudes."""
    v = np.zeros(d, dtype=complex)
    for idx, a in amps:
        v[idx] = a
    return v / np.linalg.norm(v)


def twisted_example_basis() -> UnentangledBasis:
    """Nine-element twisted (non-product) unentangled basis of C3 x C3."""
    e0 = _ket(3, (0, 1))
    e1 = _ket(3, (1, 1))
    e2 = _ket(3, (2, 1))
    p01 = _ket(3, (0, 1), (1, 1))
    m01 = _ket(3, (0, 1), (1, -1))
    p12 = _ket(3, (1, 1), (2, 1))
    m12 = _ket(3, (1, 1), (2, -1))
    elems = (
        ProductState((e0, p01)),
        ProductState((e0, m01)),
        ProductState((p01, e2)),
        ProductState((p12, e0)),
        ProductState((e1, e1)),
        ProductState((m01, e2)),
        ProductState((m12, e0)),
        ProductState((e2, p12)),
        ProductState((e2, m12)),
    )
    return UnentangledBasis(elems)


_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def twisted_example_certificate() -> TwistCertificate:
    """Known four-move certificate untwisting :func:`twisted_example_basis`."""
    initial = twisted_example_basis()
    moves = (
        TwistMove(1, (7, 8), _HADAMARD),  # |2>|1+2>, |2>|1-2>  ->  |2>|1>, |2>|2>
        TwistMove(1, (0, 1), _HADAMARD),  # |0>|0+1>, |0>|0-1>  ->  |0>|0>, |0>|1>
        TwistMove(0, (2, 5), _HADAMARD),  # |0+1>|2>, |0-1>|2>  ->  |0>|2>, |1>|2>
        TwistMove(0, (3, 6), _HADAMARD),  # |1+2>|0>, |1-2>|0>  ->  |1>|0>, |2>|0>
    )
    eye = np.eye(3)
    final = ProductBasis((tuple(eye), tuple(eye)))
    return TwistCertificate(moves, initial, final)
