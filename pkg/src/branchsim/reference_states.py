"""Closed-form reference states for the built-in scenarios.

These are the exact step-by-step states of the four bundled scenarios,
worked out by hand from the gate definitions and entered here as data.
They are written
against the same site encoding as the engine (bit 0 = |0>/up, leftmost
site first) but deliberately share no code with it, so comparing a
simulated run against them checks the gate conventions end to end.

Weights of 1/sqrt(2) and 1/2 are spelled as expressions, not decimals,
to keep them exact.
"""

import math

from .lattice import PureState
from .schedule import (scenario_bidirectional, scenario_collision, scenario_epr,
                       scenario_single)

_R2 = 1.0 / math.sqrt(2.0)


def _state(config, terms) -> PureState:
    return PureState(config.lattice, dict(terms))


def single_chain_states() -> list:
    """scenario_single(1/sqrt2, 1/sqrt2, 4), t = 0..4.

    The |0> branch flips site 1 and then copies the flip outward one
    site per step; the |1> branch leaves the chain untouched.
    """
    cfg = scenario_single(_R2, _R2, 4)
    seq = [
        {"00000": _R2, "10000": _R2},
        {"01000": _R2, "10000": _R2},
        {"01100": _R2, "10000": _R2},
        {"01110": _R2, "10000": _R2},
        {"01111": _R2, "10000": _R2},
    ]
    return [_state(cfg, s) for s in seq]


def bidirectional_states() -> list:
    """scenario_bidirectional(4), t = 0..4; lattice order is -1, 0, 1..4.

    Identical to the single chain through t = 3 (site -1 spectating),
    then the late left coupling branches site -1 too: down in the |0>
    branch, up in the |1> branch.
    """
    cfg = scenario_bidirectional(4)
    seq = [
        {"000000": _R2, "010000": _R2},
        {"001000": _R2, "010000": _R2},
        {"001100": _R2, "010000": _R2},
        {"001110": _R2, "010000": _R2},
        {"101110": _R2, "010000": _R2},
    ]
    return [_state(cfg, s) for s in seq]


def collision_states() -> list:
    """scenario_collision(4), t = 0..3; qubits at sites 0 and 5.

    Each qubit writes a record next to itself at t = 0; swaps then
    carry the two records inward past each other, leaving the interior
    sites they vacate back in the up state.
    """
    cfg = scenario_collision(4)
    h = 0.5
    seq = [
        {"000000": h, "000001": h, "100000": h, "100001": h},
        {"010010": h, "010001": h, "100010": h, "100001": h},
        {"001100": h, "001001": h, "100100": h, "100001": h},
        {"001100": h, "000101": h, "101000": h, "100001": h},
    ]
    return [_state(cfg, s) for s in seq]


def epr_states() -> list:
    """scenario_epr(4), t = 0..3: entangled qubits, swap-carried records.

    Two branches throughout; at t = 3 the records sit at sites 2 and 3,
    perfectly anticorrelated like the qubits that wrote them.
    """
    cfg = scenario_epr(4)
    seq = [
        {"000001": _R2, "100000": _R2},
        {"010001": _R2, "100010": _R2},
        {"001001": _R2, "100100": _R2},
        {"000101": _R2, "101000": _R2},
    ]
    return [_state(cfg, s) for s in seq]


REFERENCE_SEQUENCES = {
    "single": single_chain_states,
    "bidirectional": bidirectional_states,
    "collision": collision_states,
    "epr": epr_states,
}
