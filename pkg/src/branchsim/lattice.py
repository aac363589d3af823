"""Lattice geometry and sparse pure states.

The model lives on a finite 1-D chain of two-level sites.  Each site is
either a *system* site (a qubit we later measure) or a *field* site (an
environment spin).  Both kinds are encoded with a single bit per site:

    bit 0  <->  |0> for a system site,  up-spin   for a field site
    bit 1  <->  |1> for a system site,  down-spin for a field site

A basis string lists one bit per site in lattice order, leftmost site
first (most significant).  States are stored sparsely as a mapping from
basis string to complex amplitude; only nonzero amplitudes are kept, and
amplitudes with |a| < PRUNE_EPS are dropped as floating-point dust.  The
branch structure produced by the model's gates keeps these maps tiny even
on long chains.

PureState objects are immutable: every operation returns a new state.
"""

import json
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

#: States produced by constructors and gates stay normalised to this.
NORM_TOL = 1e-12

#: Amplitudes smaller than this in modulus are treated as exact zeros.
PRUNE_EPS = 1e-14

BasisString = tuple  # tuple of 0/1 ints, one per site, lattice order


class LatticeError(ValueError):
    """Malformed lattice, or a site id that does not belong to one."""


class StateError(ValueError):
    """Malformed state construction (bad basis string, zero norm, ...)."""


class SiteKind(Enum):
    SYSTEM = "system"
    FIELD = "field"


@dataclass(frozen=True)
class Site:
    """A lattice site: an integer coordinate plus its kind."""

    index: int
    kind: SiteKind


@dataclass(frozen=True)
class Lattice:
    """An ordered chain of sites with strictly increasing indices.

    Site indices are arbitrary integers (they may be negative, e.g. a
    chain extending to the left of the system), but must be strictly
    increasing so that basis strings have a unique reading order.
    """

    sites: tuple

    def __post_init__(self):
        sites = tuple(self.sites)
        object.__setattr__(self, "sites", sites)
        if not sites:
            raise LatticeError("lattice needs at least one site")
        indices = [s.index for s in sites]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise LatticeError(f"site indices must strictly increase, got {indices}")
        object.__setattr__(self, "_pos", {s.index: p for p, s in enumerate(sites)})

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def indices(self) -> tuple:
        return tuple(s.index for s in self.sites)

    @property
    def system_sites(self) -> tuple:
        return tuple(s.index for s in self.sites if s.kind is SiteKind.SYSTEM)

    @property
    def field_sites(self) -> tuple:
        return tuple(s.index for s in self.sites if s.kind is SiteKind.FIELD)

    def position(self, site_id: int) -> int:
        """Position of a site id within basis strings (0 = leftmost)."""
        try:
            return self._pos[site_id]
        except KeyError:
            raise LatticeError(f"site {site_id} is not on the lattice {self.indices}") from None

    def kind(self, site_id: int) -> SiteKind:
        return self.sites[self.position(site_id)].kind

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "Lattice":
        """Build from (index, kind) pairs; kinds may be SiteKind or its value."""
        return cls(tuple(Site(int(i), SiteKind(k)) for i, k in pairs))


def chain_lattice(system: Iterable[int], fields: Iterable[int]) -> Lattice:
    """Lattice with the given system and field site indices (any order)."""
    tagged = [(i, SiteKind.SYSTEM) for i in system] + [(i, SiteKind.FIELD) for i in fields]
    tagged.sort(key=lambda t: t[0])
    return Lattice(tuple(Site(i, k) for i, k in tagged))


def _as_bits(basis, n_sites: int) -> BasisString:
    """Normalise a basis-string argument ('0110' or iterable of bits)."""
    if isinstance(basis, str):
        bits = tuple(int(c) for c in basis)
    else:
        bits = tuple(int(b) for b in basis)
    if len(bits) != n_sites or any(b not in (0, 1) for b in bits):
        raise StateError(f"basis string {basis!r} is not {n_sites} bits of 0/1")
    return bits


@dataclass(frozen=True)
class PureState:
    """Sparse pure state: basis string -> complex amplitude.

    The amplitude map is exposed read-only; states are value objects and
    never mutated in place.  Constructors (`product_state`,
    `entangled_state`) and gate application keep states normalised;
    `norm` lets callers check.
    """

    lattice: Lattice
    amplitudes: Mapping

    def __post_init__(self):
        n = self.lattice.n_sites
        amps = {}
        for basis, amp in self.amplitudes.items():
            amp = complex(amp)
            if abs(amp) >= PRUNE_EPS:
                amps[_as_bits(basis, n)] = amp
        object.__setattr__(self, "amplitudes", MappingProxyType(amps))

    @property
    def n_terms(self) -> int:
        return len(self.amplitudes)

    def amplitude(self, basis) -> complex:
        """Amplitude of one basis string (0 if absent)."""
        return self.amplitudes.get(_as_bits(basis, self.lattice.n_sites), 0j)

    def terms(self):
        """(basis, amplitude) pairs in lexicographic basis order."""
        return sorted(self.amplitudes.items())

    def __repr__(self):
        parts = ", ".join(
            f"{''.join(map(str, b))}: {a:.6g}" for b, a in list(self.terms())[:6]
        )
        more = "" if self.n_terms <= 6 else f", ... ({self.n_terms} terms)"
        return f"PureState({parts}{more})"


def norm(state: PureState) -> float:
    """Sum of squared amplitude moduli, sum_b |a_b|^2 (1.0 for unit states)."""
    return float(sum((a.real * a.real + a.imag * a.imag) for a in state.amplitudes.values()))


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, summed over the (typically small) intersection of supports."""
    if a.lattice != b.lattice:
        raise LatticeError("inner product needs states on the same lattice")
    if a.n_terms > b.n_terms:  # iterate the smaller support
        return complex(np.conj(inner_product(b, a)))
    return sum(
        (amp.conjugate() * b.amplitudes.get(basis, 0j) for basis, amp in a.amplitudes.items()),
        start=0j,
    )


def overlap(a: PureState, b: PureState) -> float:
    """|<a|b>| — equality of unit states up to global phase iff this is 1."""
    return abs(inner_product(a, b))


def product_state(lattice: Lattice, site_states: Mapping) -> PureState:
    """Product state from per-site two-component vectors.

    `site_states` maps every site id on the lattice to a length-2
    complex vector (amplitudes of bit 0 and bit 1), each normalised
    within NORM_TOL.
    """
    missing = set(lattice.indices) - set(site_states)
    extra = set(site_states) - set(lattice.indices)
    if missing or extra:
        raise StateError(f"site states must cover the lattice exactly "
                         f"(missing {sorted(missing)}, extra {sorted(extra)})")
    columns = []
    for site_id in lattice.indices:
        vec = np.asarray(site_states[site_id], dtype=complex).reshape(-1)
        if vec.shape != (2,):
            raise StateError(f"site {site_id}: want 2 components, got shape {vec.shape}")
        if abs(np.vdot(vec, vec).real - 1.0) > NORM_TOL:
            raise StateError(f"site {site_id}: vector not normalised "
                             f"(|v|^2 = {np.vdot(vec, vec).real!r})")
        columns.append(vec)

    amps = {(): 1 + 0j}
    for vec in columns:  # grow the product one site at a time, skipping zeros
        amps = {
            bits + (b,): amp * vec[b]
            for bits, amp in amps.items()
            for b in (0, 1)
            if abs(vec[b]) >= PRUNE_EPS
        }
    return PureState(lattice, amps)


def entangled_state(lattice: Lattice, terms: Iterable) -> PureState:
    """Normalised superposition from explicit (basis, amplitude) terms.

    Duplicate basis strings are an error (ambiguous intent), as is a
    zero-norm term list.  Amplitudes are rescaled to unit norm.
    """
    n = lattice.n_sites
    amps = {}
    for basis, amp in terms:
        bits = _as_bits(basis, n)
        if bits in amps:
            raise StateError(f"duplicate basis string {basis!r}")
        amps[bits] = complex(amp)
    total = sum(a.real * a.real + a.imag * a.imag for a in amps.values())
    if total < PRUNE_EPS:
        raise StateError("zero-norm term list")
    scale = 1.0 / math.sqrt(total)
    return PureState(lattice, {b: a * scale for b, a in amps.items()})


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------
#
# States serialise to a small JSON document.  Amplitude components are
# written with 17 significant digits so that reading the document back
# reproduces every float64 bit-exactly.

def state_to_document(state: PureState) -> str:
    """Serialise to JSON text (sorted terms; bit-exact round trip)."""
    lattice_json = json.dumps(
        [{"index": s.index, "kind": s.kind.value} for s in state.lattice.sites]
    )
    term_lines = ",\n".join(
        f'    {{"basis": "{"".join(map(str, bits))}", '
        f'"re": {amp.real:.17g}, "im": {amp.imag:.17g}}}'
        for bits, amp in state.terms()
    )
    return f'{{\n  "lattice": {lattice_json},\n  "terms": [\n{term_lines}\n  ]\n}}\n'


def state_from_document(text: str) -> PureState:
    """Inverse of `state_to_document`."""
    try:
        doc = json.loads(text)
        lattice = Lattice.from_pairs((s["index"], s["kind"]) for s in doc["lattice"])
        amps = {t["basis"]: complex(t["re"], t["im"]) for t in doc["terms"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise StateError(f"malformed state document: {exc}") from exc
    return PureState(lattice, amps)
