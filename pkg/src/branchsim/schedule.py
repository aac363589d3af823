"""Discrete-time gate schedules and the built-in scenarios.

Time advances in integer steps.  A schedule assigns each step a set of
gate applications whose site supports must be disjoint, so the gates of
one step commute and the step is a well-defined product unitary.  Steps
with no gates are the identity.

The model is local: two-site gates are meant to act on adjacent sites,
which is what produces the strict light cone (a record can spread at
most one site per step).  Non-adjacent applications are allowed for
experiments but are flagged with a warning.

Built-in scenarios
------------------
``single``         one qubit at site 0 coupled once to an up-spin chain
                   on its right; the record then copies outward one site
                   per step and every visited site keeps a copy.
``bidirectional``  the same, plus a single late coupling to one field
                   site on the *left*, showing records spreading both
                   ways from the system.
``collision``      two qubits at the ends of a four-spin chain; each
                   imprints a record that is *swapped* (not copied)
                   toward the other side, so the two records pass
                   through each other and arrive at the far qubit's
                   doorstep.
``epr``            the collision geometry, but the two qubits start in
                   the entangled (|01> + |10>)/sqrt(2) state, so the
                   travelling records end up entangled with each other.
"""

import json
import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .gates import Gate, Gate1, Gate2, GateError, apply_gate1, apply_gate2, gate_by_name
from .lattice import Lattice, LatticeError, PureState, chain_lattice, entangled_state, product_state


class ScheduleError(ValueError):
    """Overlapping supports within a step, or a malformed application."""


class ConfigError(ValueError):
    """Malformed scenario configuration document."""


@dataclass(frozen=True)
class GateApplication:
    """One gate applied to one or two sites at one time step.

    `gate` may be a Gate1/Gate2 or a name resolvable by `gate_by_name`
    (names keep configs serialisable).  For two-site gates the site
    order is meaningful: the first site feeds the gate's left slot.
    """

    time: int
    sites: tuple
    gate: Union[Gate, str]

    def __post_init__(self):
        sites = tuple(self.sites)
        object.__setattr__(self, "sites", sites)
        if len(sites) not in (1, 2) or len(set(sites)) != len(sites):
            raise ScheduleError(f"application needs 1 or 2 distinct sites, got {sites}")
        if self.time < 0:
            raise ScheduleError(f"negative time {self.time}")

    def resolved_gate(self) -> Gate:
        gate = gate_by_name(self.gate) if isinstance(self.gate, str) else self.gate
        if gate.n_sites != len(self.sites):
            raise ScheduleError(
                f"gate {gate.name} acts on {gate.n_sites} site(s), got sites {self.sites}")
        return gate


@dataclass(frozen=True)
class Schedule:
    """An immutable collection of gate applications grouped by time."""

    applications: tuple

    def __post_init__(self):
        apps = tuple(sorted(self.applications, key=lambda a: (a.time, min(a.sites))))
        object.__setattr__(self, "applications", apps)
        for t, group in self.by_step().items():
            seen: set = set()
            for app in group:
                clash = seen.intersection(app.sites)
                if clash:
                    raise ScheduleError(
                        f"step {t}: site(s) {sorted(clash)} hit by two gates at once")
                seen.update(app.sites)

    def by_step(self) -> dict:
        steps: dict = {}
        for app in self.applications:
            steps.setdefault(app.time, []).append(app)
        return steps

    @property
    def horizon(self) -> int:
        """Number of steps needed to play every scheduled gate."""
        return 1 + max((a.time for a in self.applications), default=-1)

    def is_local(self, lattice: Lattice) -> bool:
        """True when every two-site gate acts on lattice neighbours."""
        positions = {s: p for p, s in enumerate(lattice.indices)}
        return all(
            abs(positions[a.sites[0]] - positions[a.sites[1]]) == 1
            for a in self.applications
            if len(a.sites) == 2
        )


def run_schedule(state: PureState, schedule: Schedule,
                 horizon: Optional[int] = None) -> list:
    """Evolve a state through a schedule.

    Returns the list of states at t = 0 .. horizon (inclusive), so
    `result[t]` is the state after the gates of steps 0..t-1.  The
    default horizon is the schedule's own.  Within a step, gates are
    applied in order of their lowest site (they commute regardless —
    supports are disjoint).
    """
    if horizon is None:
        horizon = schedule.horizon
    if horizon < 0:
        raise ScheduleError(f"negative horizon {horizon}")
    if not schedule.is_local(state.lattice):
        warnings.warn("schedule applies two-site gates to non-adjacent sites; "
                      "light-cone locality does not hold", stacklevel=2)
    steps = schedule.by_step()
    out = [state]
    for t in range(horizon):
        current = out[-1]
        for app in steps.get(t, ()):
            gate = app.resolved_gate()
            if isinstance(gate, Gate1):
                current = apply_gate1(current, gate, app.sites[0])
            else:
                current = apply_gate2(current, gate, app.sites)
        out.append(current)
    return out


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

#: Analyses the CLI runs per step when a config does not choose its own.
DEFAULT_ANALYSES = ("sites", "branches", "clusters")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to run and analyse one scenario."""

    name: str
    lattice: Lattice
    initial: PureState
    schedule: Schedule
    horizon: int
    analyses: tuple = DEFAULT_ANALYSES

    def run(self, horizon: Optional[int] = None) -> list:
        return run_schedule(self.initial, self.schedule,
                            self.horizon if horizon is None else horizon)


def _up() -> np.ndarray:
    return np.array([1.0, 0.0], dtype=complex)


def scenario_single(alpha: complex = 1 / math.sqrt(2),
                    beta: complex = 1 / math.sqrt(2),
                    n_sites: int = 4) -> ScenarioConfig:
    """One qubit, one coupling, then copying: a record spreads rightward.

    The qubit starts at site 0 in alpha|0> + beta|1>; field sites
    1..n_sites start up.  Step 0 couples the qubit to site 1; step t
    copies site t onto site t+1, until the record reaches the boundary.
    """
    if n_sites < 1:
        raise ConfigError("need at least one field site")
    lattice = chain_lattice([0], range(1, n_sites + 1))
    site_states: dict = {0: np.array([alpha, beta], dtype=complex)}
    site_states.update({i: _up() for i in range(1, n_sites + 1)})
    apps = [GateApplication(0, (0, 1), "U_si")]
    apps += [GateApplication(t, (t, t + 1), "U_copy") for t in range(1, n_sites)]
    return ScenarioConfig("single", lattice, product_state(lattice, site_states),
                          Schedule(tuple(apps)), horizon=n_sites)


def scenario_bidirectional(n_right: int = 4) -> ScenarioConfig:
    """A rightward record as in `single`, then one late leftward coupling.

    One extra field site sits at -1, to the system's left.  Steps 0..2
    build a three-site record on the right; step 3 couples the qubit to
    site -1, so branching happens on both sides of the system.
    """
    if n_right < 3:
        raise ConfigError("need at least three field sites on the right")
    lattice = chain_lattice([0], [-1, *range(1, n_right + 1)])
    site_states: dict = {0: np.array([1, 1], dtype=complex) / math.sqrt(2), -1: _up()}
    site_states.update({i: _up() for i in range(1, n_right + 1)})
    apps = [
        GateApplication(0, (0, 1), "U_si"),
        GateApplication(1, (1, 2), "U_copy"),
        GateApplication(2, (2, 3), "U_copy"),
        GateApplication(3, (0, -1), "U_si"),
    ]
    return ScenarioConfig("bidirectional", lattice,
                          product_state(lattice, site_states),
                          Schedule(tuple(apps)), horizon=4)


def _collision_frame(n_field: int):
    """Lattice and swap-transport schedule shared by collision and epr."""
    if n_field < 2 or n_field % 2:
        # an odd chain has no single central pair for the records to meet at
        raise ConfigError(f"collision needs an even field count >= 2, got {n_field}")
    right = n_field + 1
    lattice = chain_lattice([0, right], range(1, right))
    apps = [
        GateApplication(0, (0, 1), "U_si"),
        GateApplication(0, (right, right - 1), "U_si"),  # mirrored coupling
    ]
    for k in range(1, n_field // 2):
        apps.append(GateApplication(k, (k, k + 1), "U_swap"))
        apps.append(GateApplication(k, (right - k, right - k - 1), "U_swap"))
    center = n_field // 2
    apps.append(GateApplication(center, (center, center + 1), "U_swap"))
    return lattice, Schedule(tuple(apps)), center + 1


def scenario_collision(n_field: int = 4) -> ScenarioConfig:
    """Two independent qubits whose records swap toward each other.

    Qubits at the chain ends start in (|0> + |1>)/sqrt(2) each; the run
    halts right after the central swap, where the two records have just
    passed through each other.
    """
    lattice, sched, horizon = _collision_frame(n_field)
    right = n_field + 1
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    site_states = {0: plus, right: plus}
    site_states.update({i: _up() for i in range(1, right)})
    return ScenarioConfig("collision", lattice, product_state(lattice, site_states),
                          sched, horizon=horizon)


def scenario_epr(n_field: int = 4) -> ScenarioConfig:
    """The collision geometry with the qubits starting entangled.

    The two system qubits begin in (|01> + |10>)/sqrt(2); the travelling
    records inherit that entanglement.
    """
    lattice, sched, horizon = _collision_frame(n_field)
    right = n_field + 1
    ups = (0,) * n_field
    terms = [
        ((0, *ups, 1), 1.0),
        ((1, *ups, 0), 1.0),
    ]
    return ScenarioConfig("epr", lattice, entangled_state(lattice, terms),
                          sched, horizon=horizon)


SCENARIOS = {
    "single": scenario_single,
    "bidirectional": scenario_bidirectional,
    "collision": scenario_collision,
    "epr": scenario_epr,
}


# ---------------------------------------------------------------------------
# configuration documents
# ---------------------------------------------------------------------------
#
# A scenario config is a JSON object.  Either it names a built-in:
#
#   {"scenario": "epr"}
#   {"scenario": "single", "params": {"alpha": [0.8164965809277261, 0.0],
#                                     "beta":  [0.5773502691896257, 0.0],
#                                     "n_sites": 4}}
#
# or it spells everything out:
#
#   {"lattice": [{"index": 0, "kind": "system"}, {"index": 1, "kind": "field"}],
#    "initial": {"product": {"0": [[1,0],[0,0]], "1": [[1,0],[0,0]]}},
#    "schedule": [{"time": 0, "sites": [0, 1], "gate": "U_si"}],
#    "horizon": 1,
#    "analyses": ["sites", "branches"]}
#
# `initial` may instead list explicit terms:
#    {"terms": [{"basis": "01", "re": 0.707106..., "im": 0.0}, ...]}
# and a schedule entry's "gate" may be an inline 4x4 (or 2x2) matrix of
# [re, im] pairs instead of a name.

def _complex_from(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, Sequence) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"want a number or [re, im] pair, got {value!r}")


def _gate_from_config(entry) -> Union[str, Gate]:
    if isinstance(entry, str):
        gate_by_name(entry)  # fail fast on unknown names
        return entry
    if isinstance(entry, Sequence):
        rows = [[_complex_from(cell) for cell in row] for row in entry]
        matrix = np.array(rows, dtype=complex)
        try:
            return Gate1("custom", matrix) if matrix.shape == (2, 2) else Gate2("custom", matrix)
        except GateError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"bad gate entry {entry!r}")


def _initial_from_config(entry, lattice: Lattice) -> PureState:
    if not isinstance(entry, Mapping):
        raise ConfigError("'initial' must be an object with 'product' or 'terms'")
    if "product" in entry:
        site_states = {
            int(site): [_complex_from(c) for c in vec]
            for site, vec in entry["product"].items()
        }
        return product_state(lattice, site_states)
    if "terms" in entry:
        terms = [(t["basis"], complex(float(t["re"]), float(t.get("im", 0.0))))
                 for t in entry["terms"]]
        return entangled_state(lattice, terms)
    raise ConfigError("'initial' needs a 'product' or 'terms' key")


def config_from_document(text: str) -> ScenarioConfig:
    """Parse a scenario configuration document (JSON text)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise ConfigError("config must be a JSON object")

    if "scenario" in doc:
        name = doc["scenario"]
        if name not in SCENARIOS:
            raise ConfigError(f"unknown scenario {name!r}; "
                              f"available: {', '.join(sorted(SCENARIOS))}")
        params = dict(doc.get("params", {}))
        for key in ("alpha", "beta"):
            if key in params:
                params[key] = _complex_from(params[key])
        try:
            config = SCENARIOS[name](**params)
        except TypeError as exc:
            raise ConfigError(f"bad params for scenario {name!r}: {exc}") from exc
        if "analyses" in doc:
            config = ScenarioConfig(config.name, config.lattice, config.initial,
                                    config.schedule, config.horizon,
                                    tuple(doc["analyses"]))
        return config

    try:
        lattice = Lattice.from_pairs((s["index"], s["kind"]) for s in doc["lattice"])
        initial = _initial_from_config(doc["initial"], lattice)
        apps = tuple(
            GateApplication(int(e["time"]), tuple(e["sites"]), _gate_from_config(e["gate"]))
            for e in doc.get("schedule", ())
        )
        sched = Schedule(apps)
        horizon = int(doc.get("horizon", sched.horizon))
        analyses = tuple(doc.get("analyses", DEFAULT_ANALYSES))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, LatticeError, ScheduleError, GateError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return ScenarioConfig(str(doc.get("name", "custom")), lattice, initial,
                          sched, horizon, analyses)


def load_config(path) -> ScenarioConfig:
    """Read and parse a scenario configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_document(text)
