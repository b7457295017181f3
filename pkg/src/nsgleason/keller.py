"""Cube-tiling graphs on {0,1,2,3}^n, clique verification/search, and the
clique-to-basis map.

Vertices are integer vectors m with coordinates in {0,1,2,3}.  Two vertices
are adjacent in G when some coordinate differs by exactly 2 (mod-free: the
literal difference |m_i - m_i'| equals 2); they are adjacent in G* when in
addition they differ in at least two coordinates.  A clique of size 2^n in G
encodes a 4Z^n-periodic cube tiling; in G* the tiling is moreover facet-free.
Mapping digits 0,1,2,3 to the qubit states |0>, |+>, |1>, |-> turns any
size-2^n G-clique into an orthonormal basis of (C^2)^(x n) made of product
states; for G*-cliques that basis admits no local twist pairs at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from importlib import resources

import numpy as np

from .bases import ProductState, UnentangledBasis
from .linalg import ValidationError


class Graph(str, Enum):
    G = "G"
    G_STAR = "G_STAR"


@dataclass(frozen=True)
class CliqueCandidate:
    """A set of distinct vectors in {0,1,2,3}^n, stored as a (N, n) array."""

    n: int
    vectors: np.ndarray

    def __post_init__(self):
        vecs = np.asarray(self.vectors, dtype=np.int8)
        if vecs.ndim != 2 or vecs.shape[1] != self.n:
            raise ValidationError(f"vectors must have shape (N, {self.n})")
        if vecs.min() < 0 or vecs.max() > 3:
            raise ValidationError("coordinates must lie in {0,1,2,3}")
        if len({tuple(v) for v in vecs}) != len(vecs):
            raise ValidationError("duplicate vectors in candidate")
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)

    @property
    def size(self) -> int:
        return len(self.vectors)


def edge(m, m2, graph: Graph = Graph.G) -> bool:
    """Adjacency test for a single vertex pair."""
    m = np.asarray(m, dtype=int)
    m2 = np.asarray(m2, dtype=int)
    if m.shape != m2.shape:
        raise ValidationError("length mismatch")
    diff = np.abs(m - m2)
    has_two = bool(np.any(diff == 2))
    if graph == Graph.G:
        return has_two
    return has_two and int(np.count_nonzero(diff)) >= 2


@dataclass(frozen=True)
class CliqueReport:
    is_clique: bool
    graph: Graph
    size: int
    n: int
    first_failure: tuple | None = None
    tiling_certificate: bool = False
    facet_free: bool = False

    def to_json(self) -> dict:
        return {
            "is_clique": self.is_clique,
            "graph": self.graph.value,
            "size": self.size,
            "n": self.n,
            "first_failure": list(self.first_failure) if self.first_failure else None,
            "tiling_certificate": self.tiling_certificate,
            "facet_free": self.facet_free,
        }


def verify_clique(c: CliqueCandidate, graph: Graph = Graph.G_STAR) -> CliqueReport:
    """Check all pairs; blockwise vectorized so 2^10 vectors verify fast."""
    vecs = c.vectors.astype(np.int8)
    n_vec = len(vecs)
    first_failure = None
    block = 256
    done = False
    for i0 in range(0, n_vec, block):
        bi = vecs[i0:i0 + block]
        # diff[a, b, k] = |bi[a, k] - vecs[b, k]| for b > global index of a
        diff = np.abs(bi[:, None, :].astype(np.int16) - vecs[None, :, :])
        has_two = np.any(diff == 2, axis=2)
        if graph == Graph.G_STAR:
            ok = has_two & (np.count_nonzero(diff, axis=2) >= 2)
        else:
            ok = has_two
        for a in range(len(bi)):
            i = i0 + a
            row = ok[a, i + 1:]
            if not row.all():
                j = int(i + 1 + np.argmin(row))
                first_failure = (i, j)
                done = True
                break
        if done:
            break
    is_clique = first_failure is None
    is_tiling = is_clique and c.size == 2 ** c.n
    return CliqueReport(
        is_clique, graph, c.size, c.n, first_failure,
        tiling_certificate=is_tiling,
        facet_free=is_tiling and graph == Graph.G_STAR,
    )


class SearchMode(str, Enum):
    EXHAUSTIVE = "EXHAUSTIVE"
    HEURISTIC = "HEURISTIC"


def _all_vertices(n: int) -> np.ndarray:
    grids = np.meshgrid(*([np.arange(4)] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int8)


def _exhaustive(n: int, target: int, graph: Graph):
    """Deterministic branch-and-bound clique enumeration over all 4^n vertices."""
    verts = _all_vertices(n)
    n_v = len(verts)
    adj = np.zeros((n_v, n_v), dtype=bool)
    for i in range(n_v):
        diff = np.abs(verts[i][None, :].astype(np.int16) - verts)
        has_two = np.any(diff == 2, axis=1)
        if graph == Graph.G_STAR:
            adj[i] = has_two & (np.count_nonzero(diff, axis=1) >= 2)
        else:
            adj[i] = has_two
    np.fill_diagonal(adj, False)

    clique = []

    def extend(candidates):
        if len(clique) == target:
            return True
        if len(clique) + len(candidates) < target:
            return False
        for idx, v in enumerate(candidates):
            clique.append(v)
            nxt = [u for u in candidates[idx + 1:] if adj[v, u]]
            if extend(nxt):
                return True
            clique.pop()
        return False

    if extend(list(range(n_v))):
        return CliqueCandidate(n, verts[np.array(clique)])
    return None


def _heuristic(n: int, target: int, graph: Graph, budget: int, seed: int):
    """Seeded greedy-with-restarts local search; best-effort only."""
    verts = _all_vertices(n)
    rng = np.random.Generator(np.random.Philox(seed))
    best = None
    for _ in range(max(1, budget)):
        order = rng.permutation(len(verts))
        clique: list = []
        for idx in order:
            v = verts[idx]
            if all(edge(v, verts[j], graph) for j in clique):
                clique.append(idx)
                if len(clique) == target:
                    return CliqueCandidate(n, verts[np.array(clique)])
        if best is None or len(clique) > best.size:
            best = CliqueCandidate(n, verts[np.array(clique)])
    return None


def clique_search(
    n: int,
    target: int,
    mode: SearchMode = SearchMode.EXHAUSTIVE,
    budget: int = 1000,
    seed: int = 0,
    graph: Graph = Graph.G_STAR,
):
    """Search for a clique of the given size; EXHAUSTIVE (n <= 3) is a proof.

    EXHAUSTIVE results are deterministic and seed-independent; a NONE result
    proves no clique of that size exists.  HEURISTIC NONE results prove
    nothing.
    """
    if mode == SearchMode.EXHAUSTIVE:
        if n > 3:
            raise ValidationError("exhaustive search supported only for n <= 3")
        return _exhaustive(n, target, graph)
    return _heuristic(n, target, graph, budget, seed)


# Digit-to-qubit-state map: 0 -> |0>, 1 -> |+>, 2 -> |1>, 3 -> |->.
_SQ2 = 1.0 / np.sqrt(2.0)
DIGIT_STATES = (
    np.array([1.0, 0.0], dtype=complex),
    np.array([_SQ2, _SQ2], dtype=complex),
    np.array([0.0, 1.0], dtype=complex),
    np.array([_SQ2, -_SQ2], dtype=complex),
)


def basis_from_clique(c: CliqueCandidate) -> UnentangledBasis:
    """Map a verified size-2^n G-clique to an unentangled basis of (C^2)^n.

    Orthogonality holds factorwise: a coordinate pair differing by exactly 2
    maps to orthogonal qubit states ((0,2) -> |0>,|1>; (1,3) -> |+>,|->).
    """
    report = verify_clique(c, Graph.G)
    if not (report.is_clique and c.size == 2 ** c.n):
        raise ValidationError(
            "candidate is not a verified G-clique of size 2^n"
        )
    elems = tuple(
        ProductState(tuple(DIGIT_STATES[d] for d in vec)) for vec in c.vectors
    )
    return UnentangledBasis(elems)


def family_from_clique(c: CliqueCandidate, graph: Graph = Graph.G) -> UnentangledBasis:
    """Map any verified clique to an orthonormal family of product states.

    Unlike basis_from_clique, the clique may be partial (size < 2^n), so the
    family need not span (C^2)^n; use this to inspect structural properties
    such as local pairs on best-effort search results.
    """
    report = verify_clique(c, graph)
    if not report.is_clique:
        raise ValidationError(f"candidate is not a verified {graph.value}-clique")
    elems = tuple(
        ProductState(tuple(DIGIT_STATES[d] for d in vec)) for vec in c.vectors
    )
    return UnentangledBasis(elems)


# ---------------------------------------------------------------------------
# File format: ASCII, one vector per line, characters '0'-'3'.

def save_clique(path, c: CliqueCandidate) -> None:
    with open(path, "w") as fh:
        for vec in c.vectors:
            fh.write("".join(str(int(d)) for d in vec) + "\n")


def load_clique(path) -> CliqueCandidate:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValidationError("empty clique file")
    n = len(lines[0])
    vecs = []
    for ln in lines:
        if len(ln) != n or any(ch not in "0123" for ch in ln):
            raise ValidationError(f"malformed line {ln!r}")
        vecs.append([int(ch) for ch in ln])
    return CliqueCandidate(n, np.array(vecs, dtype=np.int8))


def bundled_candidate() -> CliqueCandidate:
    """The packaged full-scale verification candidate: 1024 vectors, n = 10.

    The shipped file is the even grid {0,2}^10 — a genuine 4Z^10-periodic
    cube tiling (size-2^n clique in G_10) at the dimension where published
    facet-free tilings live.  It is deliberately not facet-free: grid cubes
    that differ in a single coordinate share a facet, so G*-verification
    rejects it.  A published facet-free clique can be dropped into the same
    file format and flows through the identical code path.

    Shipped as data, never trusted: callers must run verify_clique on it.
    """
    ref = resources.files("nsgleason.data").joinpath("keller_candidate_n10.txt")
    with resources.as_file(ref) as path:
        return load_clique(path)
