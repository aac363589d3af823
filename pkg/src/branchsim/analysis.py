"""Reduced density matrices, branch structure, and correlation analysis.

Everything here is exact linear algebra on the sparse states — no
approximations beyond floating point.  Conventions:

* Reduced density matrices are indexed like basis strings: the first
  kept site is the most significant bit of the row/column index.
* Coherence and branch structure are basis-dependent quantities *by
  design*; they are reported in the bit basis of the lattice (the model's
  record/pointer basis) unless a basis change is applied first.
* Entropies are in nats (natural log), with 0 ln 0 = 0.
* A measurement "axis" theta means the observable
  cos(theta) Z + sin(theta) X; theta = 0 is a plain bit readout.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gates import rotation_gate, apply_gate1
from .lattice import PureState

#: Default tolerance for calling a site decohered / a weight a branch.
BRANCH_TOL = 1e-9

#: Largest region an exact reduced density matrix is built for (2^12 dim).
MAX_RDM_SITES = 12

_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


class AnalysisError(ValueError):
    """Bad region (unknown/duplicate sites, or too large for exact work)."""


@dataclass(frozen=True)
class DensityMatrix:
    """A density matrix on an ordered tuple of sites.

    Checked Hermitian with unit trace at construction; positivity is a
    property of correctly produced inputs and is exercised by the tests
    rather than re-verified on every instance.
    """

    sites: tuple
    matrix: np.ndarray

    def __post_init__(self):
        sites = tuple(self.sites)
        m = np.array(self.matrix, dtype=complex)
        dim = 2 ** len(sites)
        if m.shape != (dim, dim):
            raise AnalysisError(f"want a {dim}x{dim} matrix for {len(sites)} site(s), "
                                f"got shape {m.shape}")
        if float(np.abs(m - m.conj().T).max()) > 1e-12:
            raise AnalysisError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > 1e-10:
            raise AnalysisError(f"density matrix trace is {np.trace(m).real!r}, not 1")
        m.setflags(write=False)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "matrix", m)

    @property
    def n_sites(self) -> int:
        return len(self.sites)


def _positions(state: PureState, region: Iterable) -> tuple:
    sites = tuple(region)
    if not sites or len(set(sites)) != len(sites):
        raise AnalysisError(f"region must be distinct sites, got {sites}")
    if len(sites) > MAX_RDM_SITES:
        raise AnalysisError(f"region of {len(sites)} sites is too large for an exact "
                            f"density matrix (limit {MAX_RDM_SITES})")
    return sites, tuple(state.lattice.position(s) for s in sites)


def reduced_density_matrix(state: PureState, keep: Iterable) -> DensityMatrix:
    """Partial trace onto `keep` (ordered; first site = most significant bit).

    Works directly on the sparse amplitude map: terms are grouped by
    their bits *outside* the region, and each group contributes one
    outer product.  Cost is linear in the number of terms for the
    branchy states this model produces.
    """
    sites, kpos = _positions(state, keep)
    rest = tuple(p for p in range(state.lattice.n_sites) if p not in kpos)
    groups: dict = {}
    for bits, amp in state.amplitudes.items():
        idx = 0
        for p in kpos:
            idx = (idx << 1) | bits[p]
        groups.setdefault(tuple(bits[p] for p in rest), []).append((idx, amp))

    dim = 2 ** len(sites)
    rho = np.zeros((dim, dim), dtype=complex)
    for entries in groups.values():
        v = np.zeros(dim, dtype=complex)
        for idx, amp in entries:
            v[idx] += amp
        rho += v[:, None] * v.conj()
    return DensityMatrix(sites, rho)


def change_basis(rho: DensityMatrix, rotations: Mapping) -> DensityMatrix:
    """Re-express a density matrix in per-site rotated bases.

    `rotations` maps site id -> Gate1; missing sites keep the bit basis.
    The result is (U1 x U2 x ...)^dag rho (U1 x U2 x ...), whose diagonal
    gives outcome probabilities in the rotated product basis.
    """
    u = np.eye(1, dtype=complex)
    for site in rho.sites:
        gate = rotations.get(site)
        u = np.kron(u, np.eye(2, dtype=complex) if gate is None else gate.matrix)
    return DensityMatrix(rho.sites, u.conj().T @ rho.matrix @ u)


def coherence(rho: DensityMatrix) -> float:
    """Sum of off-diagonal magnitudes — basis-dependent by design."""
    a = np.abs(rho.matrix)
    return float(a.sum() - np.trace(a))


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2); 1 for pure states, 2^-k for maximally mixed k sites."""
    return float(np.trace(rho.matrix @ rho.matrix).real)


def entropy_of(rho: DensityMatrix) -> float:
    """Von Neumann entropy in nats, with 0 ln 0 = 0."""
    w = np.linalg.eigvalsh(rho.matrix)
    w = w[w > 0.0]
    return float(-(w * np.log(w)).sum()) if w.size else 0.0


def entanglement_entropy(state: PureState, region: Iterable) -> float:
    """Entropy of the region's reduced density matrix, in nats."""
    return entropy_of(reduced_density_matrix(state, region))


def mutual_information(state: PureState, region_a: Iterable, region_b: Iterable) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) for disjoint site regions, in nats."""
    a, b = tuple(region_a), tuple(region_b)
    if set(a) & set(b):
        raise AnalysisError(f"regions overlap: {sorted(set(a) & set(b))}")
    return (entanglement_entropy(state, a) + entanglement_entropy(state, b)
            - entanglement_entropy(state, a + b))


def is_decohered(state: PureState, site: int, tol: float = BRANCH_TOL) -> bool:
    """True when the site carries a proper mixture in the bit basis.

    Requires both negligible off-diagonals (no local phase coherence)
    and purity strictly below 1 (the site actually has something to be
    mixed about); a spectator site in a pure local state is not
    "decohered", it is untouched.
    """
    rho = reduced_density_matrix(state, [site])
    return coherence(rho) <= tol and purity(rho) < 1.0 - tol


# ---------------------------------------------------------------------------
# branch structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    """One branch: a weight and a bit assignment on the branched sites."""

    weight: float
    assignment: Mapping  # site id -> bit
    support: frozenset   # sites the assignment covers

    def key(self) -> tuple:
        return tuple(sorted(self.assignment.items()))


@dataclass(frozen=True)
class BranchDecomposition:
    branches: tuple
    unbranched: frozenset
    tolerance: float

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    @property
    def weights(self) -> tuple:
        return tuple(b.weight for b in self.branches)


def branch_decompose(state: PureState, tol: float = BRANCH_TOL) -> BranchDecomposition:
    """Decompose a state into bit-basis branches on its branched sites.

    A site is *unbranched* when its one-site reduced density matrix is
    pure within `tol` — it factors out and belongs to no branch.  Each
    surviving bit pattern on the branched sites with weight > `tol` is a
    branch; patterns differing only on unbranched sites are the same
    branch and their weights merge.  Weights are renormalised to sum to
    one, and equal the Born probabilities of the corresponding records.
    """
    lattice = state.lattice
    branched = [s for s in lattice.indices
                if purity(reduced_density_matrix(state, [s])) < 1.0 - tol]
    bpos = [lattice.position(s) for s in branched]

    merged: dict = {}
    for bits, amp in state.amplitudes.items():
        w = amp.real * amp.real + amp.imag * amp.imag
        if w > tol:
            key = tuple(bits[p] for p in bpos)
            merged[key] = merged.get(key, 0.0) + w
    total = sum(merged.values())
    support = frozenset(branched)
    branches = tuple(
        Branch(w / total, dict(zip(branched, key)), support)
        for key, w in sorted(merged.items())
    )
    unbranched = frozenset(lattice.indices) - support
    return BranchDecomposition(branches, unbranched, tol)


@dataclass(frozen=True)
class Cluster:
    """A connected set of branched sites with its own branch list."""

    sites: tuple
    branches: tuple

    @property
    def n_branches(self) -> int:
        return len(self.branches)


@dataclass(frozen=True)
class BranchClusters:
    clusters: tuple
    unbranched: frozenset
    tolerance: float

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)


def extended_branch_clusters(state: PureState, tol: float = BRANCH_TOL) -> BranchClusters:
    """Group branched sites into clusters by pairwise mutual information.

    Two branched sites are linked when their mutual information exceeds
    `tol`; clusters are the connected components of that graph.  Each
    cluster gets the global branch decomposition marginalised to its own
    sites, so independently-branching regions are reported separately
    with their local branch counts and weights.
    """
    decomp = branch_decompose(state, tol)
    branched = sorted({s for b in decomp.branches for s in b.support})

    adjacency: dict = {s: set() for s in branched}
    for i, a in enumerate(branched):
        for b in branched[i + 1:]:
            if mutual_information(state, [a], [b]) > tol:
                adjacency[a].add(b)
                adjacency[b].add(a)

    clusters = []
    seen: set = set()
    for start in branched:
        if start in seen:
            continue
        component, queue = set(), [start]
        while queue:
            s = queue.pop()
            if s in component:
                continue
            component.add(s)
            queue.extend(adjacency[s] - component)
        seen |= component
        sites = tuple(sorted(component))
        local: dict = {}
        for br in decomp.branches:
            key = tuple((s, br.assignment[s]) for s in sites)
            local[key] = local.get(key, 0.0) + br.weight
        branches = tuple(
            Branch(w, dict(key), frozenset(sites)) for key, w in sorted(local.items())
        )
        clusters.append(Cluster(sites, branches))
    return BranchClusters(tuple(clusters), decomp.unbranched, tol)


# ---------------------------------------------------------------------------
# correlations, CHSH, sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasurementSetting:
    """Measure site `site` along the axis tilted by `theta` in the X-Z plane."""

    site: int
    theta: float = 0.0


def _axis(theta: float) -> np.ndarray:
    return math.cos(theta) * _Z + math.sin(theta) * _X


def correlation(state: PureState, a: MeasurementSetting, b: MeasurementSetting) -> float:
    """E(a, b) = <sigma(theta_a) x sigma(theta_b)> on the two sites."""
    rho = reduced_density_matrix(state, [a.site, b.site])
    return float(np.trace(rho.matrix @ np.kron(_axis(a.theta), _axis(b.theta))).real)


def chsh(state: PureState, site_a: int, site_b: int, settings: Sequence) -> float:
    """CHSH combination S = E(a,b) - E(a,b') + E(a',b) + E(a',b').

    `settings` is (theta_a, theta_a', theta_b, theta_b').  |S| <= 2 for
    any local-hidden-variable model; quantum mechanics allows up to
    2 sqrt(2) (the Tsirelson bound), which no state exceeds.
    """
    ta, tap, tb, tbp = settings
    e = lambda t1, t2: correlation(state, MeasurementSetting(site_a, t1),
                                   MeasurementSetting(site_b, t2))
    return e(ta, tb) - e(ta, tbp) + e(tap, tb) + e(tap, tbp)


@dataclass(frozen=True)
class ChshScanResult:
    value: float          # best S found on the grid
    settings: tuple       # (theta_a, theta_a', theta_b, theta_b') in radians
    angles: np.ndarray    # the scanned angles in radians
    e_grid: np.ndarray    # E[i, j] at (angles[i], angles[j])


def max_chsh_from_grid(angles: np.ndarray, e_grid: np.ndarray) -> tuple:
    """Maximise S over all setting 4-tuples drawn from a correlation grid.

    For fixed (b, b') the maximum over a and a' separates:
    max_a (E[a,b] - E[a,b']) + max_a' (E[a',b] + E[a',b']), so the scan
    is quadratic in the number of angles rather than quartic.
    Returns (value, (theta_a, theta_a', theta_b, theta_b')).
    """
    k = len(angles)
    best = -math.inf
    best_idx = (0, 0, 0, 0)
    for jp in range(k):  # j' column against all j at once
        d = e_grid - e_grid[:, jp][:, None]   # D[a, j]  = E[a,j] - E[a,j']
        s = e_grid + e_grid[:, jp][:, None]   # S[a', j] = E[a',j] + E[a',j']
        ia = d.argmax(axis=0)
        iap = s.argmax(axis=0)
        cand = d[ia, range(k)] + s[iap, range(k)]
        j = int(cand.argmax())
        if cand[j] > best:
            best = float(cand[j])
            best_idx = (int(ia[j]), int(iap[j]), j, jp)
    ia, iap, j, jp = best_idx
    return best, (float(angles[ia]), float(angles[iap]), float(angles[j]), float(angles[jp]))


def chsh_grid_max(state: PureState, site_a: int, site_b: int,
                  resolution_deg: float = 1.0) -> ChshScanResult:
    """Grid-search the CHSH maximum for measurements on two sites.

    E(theta1, theta2) is bilinear in (cos, sin) of each angle, so the
    whole grid follows exactly from the four Pauli correlators
    <P x Q>, P, Q in {Z, X}; the search over setting 4-tuples is then a
    plain maximisation over the gridded correlation table.
    """
    rho = reduced_density_matrix(state, [site_a, site_b])
    t = np.array([
        [np.trace(rho.matrix @ np.kron(p, q)).real for q in (_Z, _X)]
        for p in (_Z, _X)
    ])
    angles = np.deg2rad(np.arange(0.0, 360.0, resolution_deg))
    v = np.stack([np.cos(angles), np.sin(angles)])   # (2, K)
    e_grid = v.T @ t @ v                             # E[i, j]
    value, settings = max_chsh_from_grid(angles, e_grid)
    return ChshScanResult(value, settings, angles, e_grid)


def sample_measurement(state: PureState, setting: MeasurementSetting, seed: int):
    """Born-sample one measurement; returns (outcome_bit, post_state).

    Outcome bit 0 is the +1 eigenvalue of the measured axis (up / |0>),
    bit 1 the -1 eigenvalue.  The post-measurement state is collapsed,
    renormalised, and expressed back in the lattice bit basis.  The draw
    is deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    rotated = state
    if setting.theta != 0.0:
        rotated = apply_gate1(state, rotation_gate(setting.theta), setting.site)
    pos = state.lattice.position(setting.site)

    p1 = sum(a.real * a.real + a.imag * a.imag
             for bits, a in rotated.amplitudes.items() if bits[pos] == 1)
    outcome = 1 if rng.random() < p1 else 0
    p = p1 if outcome == 1 else 1.0 - p1
    scale = 1.0 / math.sqrt(p)
    collapsed = PureState(state.lattice, {
        bits: a * scale for bits, a in rotated.amplitudes.items() if bits[pos] == outcome
    })
    if setting.theta != 0.0:
        collapsed = apply_gate1(collapsed, rotation_gate(-setting.theta), setting.site)
    return outcome, collapsed
