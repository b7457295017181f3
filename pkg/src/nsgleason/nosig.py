"""No-signalling checkers, CHSH evaluation/optimization, and the LP-based
quantum-extension feasibility test that excludes the PR box.

Two levels of no-signalling are checked: conditional probability tables
(boxes) must have remote-setting-independent marginals, and frame functions
must have remote-basis-independent marginal sums.  The quantum-extension
test asks whether a box with projective realizations can be reproduced by a
unit-trace Hermitian operator that is nonnegative on (sampled) product
states; for the PR box the answer is no, with a robust residual floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize

from .bases import ProductState
from .gleason import (
    feature_of,
    product_seesaw_min,
    vec_to_herm,
)
from .linalg import (
    HermitianOperator,
    ValidationError,
    make_rng,
    proj,
    random_onb,
    random_unit,
)

TSIRELSON = 2.0 * np.sqrt(2.0)


# ---------------------------------------------------------------------------
# Boxes

@dataclass(frozen=True)
class Box:
    """Conditional probability table P(A, B | a, b) with optional realizations.

    ``table`` maps (a_label, b_label) to a matrix P[A, B]; ``realizations``
    (optional) maps each setting label to an orthonormal measurement basis
    (columns = outcome vectors) on the corresponding site.
    """

    settings: tuple  # per site, tuple of labels
    outcomes: tuple  # per site, tuple of labels
    table: dict
    realizations: tuple | None = None  # per site: dict label -> ndarray (d x n_out)

    def __post_init__(self):
        n1, n2 = len(self.outcomes[0]), len(self.outcomes[1])
        for a in self.settings[0]:
            for b in self.settings[1]:
                p = np.asarray(self.table[(a, b)], dtype=float)
                if p.shape != (n1, n2):
                    raise ValidationError(f"table block ({a},{b}) has shape {p.shape}")
                if p.min() < -1e-12:
                    raise ValidationError("negative probability in table")
                if abs(p.sum() - 1.0) > 1e-10:
                    raise ValidationError(
                        f"table block ({a},{b}) sums to {p.sum()!r}, not 1"
                    )

    def block(self, a, b) -> np.ndarray:
        return np.asarray(self.table[(a, b)], dtype=float)

    def to_json(self) -> dict:
        out = {
            "settings": [list(s) for s in self.settings],
            "outcomes": [list(o) for o in self.outcomes],
            "table": {
                f"{a},{b}": self.block(a, b).tolist()
                for a in self.settings[0]
                for b in self.settings[1]
            },
        }
        if self.realizations is not None:
            out["realizations"] = [
                {
                    str(lbl): [[[z.real, z.imag] for z in row] for row in np.asarray(m)]
                    for lbl, m in site.items()
                }
                for site in self.realizations
            ]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Box":
        settings = tuple(tuple(s) for s in data["settings"])
        outcomes = tuple(tuple(o) for o in data["outcomes"])
        table = {}
        for key, block in data["table"].items():
            a, b = key.split(",")
            # Labels may be ints or strings; match against declared settings.
            a = _match_label(a, settings[0])
            b = _match_label(b, settings[1])
            table[(a, b)] = np.asarray(block, dtype=float)
        realizations = None
        if "realizations" in data:
            realizations = tuple(
                {
                    _match_label(lbl, settings[i]): np.array(
                        [[complex(re, im) for re, im in row] for row in mat]
                    )
                    for lbl, mat in site.items()
                }
                for i, site in enumerate(data["realizations"])
            )
        return cls(settings, outcomes, table, realizations)


def _match_label(raw: str, labels):
    for lbl in labels:
        if str(lbl) == raw:
            return lbl
    raise ValidationError(f"unknown setting label {raw!r}")


def pr_box() -> Box:
    """The extremal no-signalling box: P = 1/2 when A xor B = a*b, else 0."""
    table = {}
    for a in (0, 1):
        for b in (0, 1):
            p = np.zeros((2, 2))
            for out_a in (0, 1):
                for out_b in (0, 1):
                    if (out_a ^ out_b) == (a & b):
                        p[out_a, out_b] = 0.5
            table[(a, b)] = p
    return Box(((0, 1), (0, 1)), ((0, 1), (0, 1)), table)


def with_qubit_realizations(box: Box, angles=None) -> Box:
    """Attach standard equatorial qubit measurement bases to a 2x2x2x2 box."""
    if angles is None:
        angles = ((0.0, np.pi / 2), (np.pi / 4, 3 * np.pi / 4))
    realizations = tuple(
        {
            lbl: equator_basis(theta)
            for lbl, theta in zip(box.settings[i], angles[i])
        }
        for i in range(2)
    )
    return Box(box.settings, box.outcomes, box.table, realizations)


def deterministic_box() -> Box:
    """Deterministic local box: both parties always output their first outcome."""
    p = np.zeros((2, 2))
    p[0, 0] = 1.0
    table = {(a, b): p for a in (0, 1) for b in (0, 1)}
    return Box(((0, 1), (0, 1)), ((0, 1), (0, 1)), table)


def box_from_operator(t: HermitianOperator, realizations) -> Box:
    """Box induced by tr(t (p_A (x) q_B)) at the given measurement bases."""
    settings = tuple(tuple(site.keys()) for site in realizations)
    n_out = tuple(next(iter(site.values())).shape[1] for site in realizations)
    outcomes = tuple(tuple(range(n)) for n in n_out)
    table = {}
    for a in settings[0]:
        u = realizations[0][a]
        for b in settings[1]:
            v = realizations[1][b]
            p = np.zeros((n_out[0], n_out[1]))
            for i in range(n_out[0]):
                for j in range(n_out[1]):
                    p[i, j] = t.expectation(np.kron(u[:, i], v[:, j]))
            p = np.clip(p, 0.0, None)
            table[(a, b)] = p / p.sum() * 1.0 if abs(p.sum() - 1) > 1e-12 else p
    return Box(settings, outcomes, table, tuple(realizations))


@dataclass(frozen=True)
class NoSigReport:
    max_discrepancy: float
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= 1e-10


def check_box(box: Box) -> NoSigReport:
    """Maximum variation of either site's marginals over the remote setting."""
    worst, witness = 0.0, None
    for site in (0, 1):
        remote = 1 - site
        for a in box.settings[site]:
            marginals = {}
            for b in box.settings[remote]:
                block = box.block(a, b) if site == 0 else box.block(b, a)
                marginals[b] = block.sum(axis=1) if site == 0 else block.sum(axis=0)
            labels = list(marginals)
            for i in range(len(labels)):
                for j in range(i + 1, len(labels)):
                    d = float(np.max(np.abs(marginals[labels[i]] - marginals[labels[j]])))
                    if d > worst:
                        worst = d
                        witness = {
                            "site": site,
                            "setting": a,
                            "remote_pair": (labels[i], labels[j]),
                        }
    return NoSigReport(worst, witness if worst > 1e-10 else None)


def check_framefn(f, trials: int = 100, seed: int = 0) -> NoSigReport:
    """Probe a two-site frame function for remote-basis-dependent marginals.

    For random fixed remote states x and random pairs of local bases, the
    sums over the two local bases must agree.  Reports the worst discrepancy
    and the configuration achieving it.
    """
    dims = f.dims
    if len(dims) != 2:
        raise ValidationError("check_framefn handles two-site frame functions")
    rng = make_rng(seed)
    worst, witness = 0.0, None
    for trial in range(trials):
        site = int(rng.integers(0, 2))
        remote = 1 - site
        x = random_unit(rng, dims[remote])
        b1 = random_onb(rng, dims[site])
        b2 = random_onb(rng, dims[site])

        def marginal(basis):
            total = 0.0
            for k in range(dims[site]):
                factors = [None, None]
                factors[site] = basis[:, k]
                factors[remote] = x
                total += f(ProductState(tuple(factors)))
            return total

        d = abs(marginal(b1) - marginal(b2))
        if d > worst:
            worst = d
            witness = {
                "trial": trial,
                "site": site,
                "remote_state": x,
                "bases": (b1, b2),
            }
    return NoSigReport(float(worst), witness if worst > 1e-10 else None)


# ---------------------------------------------------------------------------
# CHSH

def equator_basis(theta: float) -> np.ndarray:
    """Qubit measurement basis along the Bloch-equator direction theta.

    Columns are the +1 and -1 outcome vectors of the observable
    cos(theta) Z + sin(theta) X.
    """
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def bloch_basis(theta: float, phi: float) -> np.ndarray:
    """Qubit basis for a general Bloch direction (theta, phi)."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array(
        [[c, -s], [np.exp(1j * phi) * s, np.exp(1j * phi) * c]], dtype=complex
    )


def _observable(basis: np.ndarray) -> np.ndarray:
    return proj(basis[:, 0]) - proj(basis[:, 1])


@dataclass(frozen=True)
class ChshInstance:
    """Four qubit measurement bases (a, a', b, b') and the operator t."""

    settings: tuple  # (basis_a, basis_a2, basis_b, basis_b2)
    t: HermitianOperator

    def __post_init__(self):
        for basis in self.settings:
            basis = np.asarray(basis, dtype=complex)
            if np.max(np.abs(basis.conj().T @ basis - np.eye(2))) > 1e-10:
                raise ValidationError("CHSH setting basis is not orthonormal")
        if self.t.dims != (2, 2):
            raise ValidationError("CHSH instance needs a two-qubit operator")


def bell_operator(settings) -> np.ndarray:
    a, a2, b, b2 = (_observable(np.asarray(s, dtype=complex)) for s in settings)
    return np.kron(a, b) + np.kron(a, b2) + np.kron(a2, b) - np.kron(a2, b2)


def chsh_value(inst: ChshInstance) -> float:
    """E(a,b) + E(a,b') + E(a',b) - E(a',b') for the instance's operator."""
    return float(np.trace(inst.t.mat @ bell_operator(inst.settings)).real)


def chsh_value_box(box: Box) -> float:
    """CHSH value of a 2-setting 2-outcome box (outcomes read as +1, -1)."""
    signs = np.array([[1.0, -1.0], [-1.0, 1.0]])
    a, a2 = box.settings[0]
    b, b2 = box.settings[1]

    def corr(x, y):
        return float(np.sum(box.block(x, y) * signs))

    return corr(a, b) + corr(a, b2) + corr(a2, b) - corr(a2, b2)


def singlet() -> HermitianOperator:
    """The two-qubit singlet state (|01> - |10>)/sqrt(2) as a projector."""
    v = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    return HermitianOperator((2, 2), proj(v))


def singlet_chsh_instance() -> ChshInstance:
    """Singlet with equatorial settings achieving the quantum maximum 2*sqrt(2).

    With the sign convention E(a, b) = -cos(theta_a - theta_b) fixed by
    :func:`equator_basis`, the maximum is attained at Bloch angles
    (0, pi/2) for the first site and (5*pi/4, 3*pi/4) for the second.
    """
    angles = (0.0, np.pi / 2, 5 * np.pi / 4, 3 * np.pi / 4)
    return ChshInstance(tuple(equator_basis(a) for a in angles), singlet())


def chsh_optimize(
    t: HermitianOperator, restarts: int = 32, seed: int = 0
) -> tuple:
    """Multi-start local ascent over the four measurement directions.

    Each setting is a full Bloch direction (theta, phi).  Returns
    (best value, settings) — a lower bound on the true maximum.
    """
    if t.dims != (2, 2):
        raise ValidationError("chsh_optimize needs a two-qubit operator")
    rng = make_rng(seed)

    def settings_of(x):
        return tuple(bloch_basis(x[2 * k], x[2 * k + 1]) for k in range(4))

    def neg_chsh(x):
        return -float(np.trace(t.mat @ bell_operator(settings_of(x))).real)

    best_val, best_x = -np.inf, None
    for _ in range(restarts):
        x0 = rng.uniform(0, np.pi, 8)
        x0[1::2] *= 2.0  # phi in [0, 2pi)
        res = minimize(neg_chsh, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        if -res.fun > best_val:
            best_val, best_x = -res.fun, res.x
    return float(best_val), settings_of(best_x)


# ---------------------------------------------------------------------------
# LP-based quantum extension

def _positivity_rows(rng: np.random.Generator, dims, count: int) -> np.ndarray:
    """Feature rows of sampled product projectors, drawn as complete bases.

    States are drawn in groups forming full product bases so the sampled
    polytope is bounded (each sampled value is pinned to [0, 1] by the trace
    constraint).
    """
    d1, d2 = dims
    rows = []
    while len(rows) < count:
        u = random_onb(rng, d1)
        v = random_onb(rng, d2)
        for i in range(d1):
            for j in range(d2):
                rows.append(feature_of(proj(np.kron(u[:, i], v[:, j]))))
    return np.array(rows[:count])


def _trace_row(d_total: int) -> np.ndarray:
    return feature_of(np.eye(d_total))


@dataclass(frozen=True)
class ExtensionVerdict:
    verdict: str  # FEASIBLE | INFEASIBLE | AMBIGUOUS
    residual: float
    t: HermitianOperator | None = None
    seesaw_min: float | None = None
    rounds: int = 1

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "residual": self.residual,
            "rounds": self.rounds,
            "infeasibility_threshold": 1e-4,
        }
        if self.seesaw_min is not None:
            out["seesaw_min"] = self.seesaw_min
        if self.t is not None:
            out["t"] = self.t.to_json()
        return out


def _box_equalities(box: Box):
    """Feature rows and targets for tr(t (p_A (x) q_B)) = P(A,B|a,b)."""
    if box.realizations is None:
        raise ValidationError("quantum_extension requires projective realizations")
    rows, vals = [], []
    for a in box.settings[0]:
        u = box.realizations[0][a]
        for b in box.settings[1]:
            v = box.realizations[1][b]
            p = box.block(a, b)
            for i in range(p.shape[0]):
                for j in range(p.shape[1]):
                    rows.append(feature_of(proj(np.kron(u[:, i], v[:, j]))))
                    vals.append(p[i, j])
    return np.array(rows), np.array(vals)


def quantum_extension(
    box: Box, positivity_samples: int = 2000, seed: int = 0, max_rounds: int = 5
) -> ExtensionVerdict:
    """Can a unit-trace, product-positive Hermitian t reproduce the box?

    Solves min s subject to |tr(t (p_A (x) q_B)) - P(A,B|a,b)| <= s for all
    realized settings/outcomes, tr(t) = 1, and tr(t (p (x) q)) >= 0 for
    sampled product projectors.  A see-saw pass then hunts for product
    states on which the candidate t is negative; violators are added as
    constraints and the LP re-solved.  INFEASIBLE is declared when the
    residual floor exceeds 1e-4.
    """
    dims = tuple(r[next(iter(r))].shape[0] for r in box.realizations or ())
    if not dims:
        raise ValidationError("quantum_extension requires projective realizations")
    d_total = int(np.prod(dims))
    n_var = d_total * d_total
    eq_rows, eq_vals = _box_equalities(box)
    rng = make_rng(seed)
    pos_rows = _positivity_rows(rng, dims, positivity_samples)

    rounds = 0
    while True:
        rounds += 1
        n_eq = len(eq_vals)
        # Variables: [x (n_var), s (1)]; minimize s.
        c = np.zeros(n_var + 1)
        c[-1] = 1.0
        a_ub = np.zeros((2 * n_eq + len(pos_rows), n_var + 1))
        b_ub = np.zeros(2 * n_eq + len(pos_rows))
        a_ub[:n_eq, :n_var] = eq_rows
        a_ub[:n_eq, -1] = -1.0
        b_ub[:n_eq] = eq_vals
        a_ub[n_eq:2 * n_eq, :n_var] = -eq_rows
        a_ub[n_eq:2 * n_eq, -1] = -1.0
        b_ub[n_eq:2 * n_eq] = -eq_vals
        a_ub[2 * n_eq:, :n_var] = -pos_rows
        a_eq = np.concatenate([_trace_row(d_total), [0.0]])[None, :]
        res = linprog(
            c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
            bounds=[(None, None)] * n_var + [(0, None)], method="highs",
        )
        if not res.success:
            return ExtensionVerdict("INFEASIBLE", np.inf, rounds=rounds)
        residual = float(res.x[-1])
        t = HermitianOperator(dims, vec_to_herm(res.x[:n_var]))
        if residual > 1e-4:
            return ExtensionVerdict("INFEASIBLE", residual, t=None, rounds=rounds)
        wit = product_seesaw_min(t, restarts=16, seed=seed + rounds)
        if wit.value >= -1e-8:
            verdict = "FEASIBLE" if residual <= 1e-8 else "AMBIGUOUS"
            return ExtensionVerdict(verdict, residual, t=t,
                                    seesaw_min=wit.value, rounds=rounds)
        if rounds >= max_rounds:
            return ExtensionVerdict("AMBIGUOUS", residual, t=t,
                                    seesaw_min=wit.value, rounds=rounds)
        pos_rows = np.vstack(
            [pos_rows, feature_of(proj(np.kron(wit.factors[0], wit.factors[1])))]
        )


def max_chsh_lp(realizations, sample_schedule=(250, 500, 1000, 2000), seed: int = 0):
    """LP upper bounds on CHSH over sampled product-positive unit-trace t.

    The positivity samples are nested across the schedule, so the sequence
    of bounds is nonincreasing.  Returns the list of bounds.
    """
    dims = tuple(r[next(iter(r))].shape[0] for r in realizations)
    d_total = int(np.prod(dims))
    n_var = d_total * d_total
    settings = [realizations[0][lbl] for lbl in realizations[0]]
    settings += [realizations[1][lbl] for lbl in realizations[1]]
    objective = feature_of(bell_operator(settings))
    rng = make_rng(seed)
    all_rows = _positivity_rows(rng, dims, max(sample_schedule))
    a_eq = _trace_row(d_total)[None, :]
    bounds = []
    for count in sample_schedule:
        res = linprog(
            -objective, A_ub=-all_rows[:count], b_ub=np.zeros(count),
            A_eq=a_eq, b_eq=[1.0], bounds=[(None, None)] * n_var, method="highs",
        )
        bounds.append(np.inf if res.status == 3 else float(-res.fun))
    return bounds
