"""Logical gates on dual-rail qubits embedded in a mode register.

A dual-rail qubit is one photon across a pair of modes: |10> is logical 0,
|01> is logical 1, |00> is an empty (vacuum) qubit. The CNOT acts term by
term on occupation patterns and carries explicit vacuum-port amplitudes:
eta multiplies terms whose target pair is empty, eta_prime multiplies
terms whose control pair is empty, and doubly-empty terms pass through
with factor 1. Patterns with two photons on a pair are rejected loudly --
they signal a scheme-construction bug, not a physical branch.

The module also assembles the 6-mode post-selected physical CNOT network
(three 1/3 couplers between balanced mixers on the target rails) as a
demonstration fixture, plus a report showing how vacuum inputs break its
post-selected behavior. Protocol pipelines use the logical gate only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fock import FockState, Occupation, _pruned, basis_state
from .optics import ModeUnitary, apply_unitary, beamsplitter, compose, hadamard_pair

# Post-selected success amplitude of the physical network on logical inputs.
NETWORK_SUCCESS_AMPLITUDE = 1.0 / 3.0

_LEGAL_PATTERNS = {(1, 0), (0, 1), (0, 0)}


class IllegalPatternError(ValueError):
    """A term violates the one-photon-or-vacuum rule on a rail pair."""


@dataclass(frozen=True)
class DualRailQubit:
    """Mode pair holding at most one photon; mode0 is the logical-0 rail."""

    mode0: int
    mode1: int

    def __post_init__(self):
        if self.mode0 == self.mode1:
            raise ValueError("rail modes must differ")
        if self.mode0 < 0 or self.mode1 < 0:
            raise ValueError("rail modes must be non-negative")

    @property
    def modes(self) -> tuple[int, int]:
        return (self.mode0, self.mode1)


@dataclass(frozen=True)
class QuartEncoding:
    """Four distinct modes carrying one photon, ordered as logical 0..3."""

    modes: tuple[int, int, int, int]

    def __post_init__(self):
        if len(set(self.modes)) != 4:
            raise ValueError("the four modes must be distinct")
        if any(m < 0 for m in self.modes):
            raise ValueError("modes must be non-negative")


@dataclass(frozen=True)
class CnotSpec:
    """CNOT descriptor with vacuum-port amplitudes.

    eta rescales terms whose target pair is empty, eta_prime terms whose
    control pair is empty. Unitary gates have |eta| = |eta_prime| = 1;
    the common physical implementations have both equal to 1.
    """

    control: DualRailQubit
    target: DualRailQubit
    eta: complex = 1.0
    eta_prime: complex = 1.0

    def __post_init__(self):
        all_modes = self.control.modes + self.target.modes
        if len(set(all_modes)) != 4:
            raise ValueError("control and target pairs must use four distinct modes")
        if abs(self.eta) > 1 + 1e-12 or abs(self.eta_prime) > 1 + 1e-12:
            raise ValueError("vacuum-port amplitudes cannot exceed unit magnitude")


def _pair_pattern(occ: Occupation, q: DualRailQubit) -> tuple[int, int]:
    pattern = (occ[q.mode0], occ[q.mode1])
    if pattern not in _LEGAL_PATTERNS:
        raise IllegalPatternError(f"pattern {pattern} on modes {q.modes} in term {occ}")
    return pattern


def apply_cnot(s: FockState, g: CnotSpec) -> FockState:
    """Term-wise logical CNOT with vacuum-port semantics."""
    out: dict[Occupation, complex] = {}
    for occ, amp in s.terms.items():
        pc = _pair_pattern(occ, g.control)
        pt = _pair_pattern(occ, g.target)
        if pc == (0, 0) and pt == (0, 0):
            new_occ, new_amp = occ, amp
        elif pt == (0, 0):
            new_occ, new_amp = occ, amp * g.eta
        elif pc == (0, 0):
            new_occ, new_amp = occ, amp * g.eta_prime
        elif pc == (0, 1):
            swapped = list(occ)
            swapped[g.target.mode0], swapped[g.target.mode1] = (
                occ[g.target.mode1],
                occ[g.target.mode0],
            )
            new_occ, new_amp = tuple(swapped), amp
        else:
            new_occ, new_amp = occ, amp
        out[new_occ] = out.get(new_occ, 0j) + new_amp
    return _pruned(s.modes, out)


def apply_reversed_cnot(s: FockState, g: CnotSpec) -> FockState:
    """CNOT with the control and target ports exchanged."""
    flipped = CnotSpec(control=g.target, target=g.control, eta=g.eta, eta_prime=g.eta_prime)
    return apply_cnot(s, flipped)


def logical_phase_flip(s: FockState, q: DualRailQubit) -> FockState:
    """Multiply by -1 every term with a photon on the logical-1 rail."""
    out = {
        occ: (-amp if occ[q.mode1] > 0 else amp)
        for occ, amp in s.terms.items()
    }
    return _pruned(s.modes, out)


# --- physical post-selected network -----------------------------------------
#
# Mode layout: 0 ancilla, 1 control-0 rail, 2 control-1 rail,
#              3 target-0 rail, 4 target-1 rail, 5 ancilla.

NETWORK_CONTROL = DualRailQubit(1, 2)
NETWORK_TARGET = DualRailQubit(3, 4)


def build_postselected_cnot_network() -> ModeUnitary:
    """Assemble the 6-mode post-selected CNOT.

    The target rails are mixed, three couplers with 1/3 transmission run
    in parallel (ancilla/control-0, control-1/target-1, target-0/ancilla),
    and the target rails are unmixed. Post-selecting one photon per rail
    pair yields the CNOT truth table with amplitude 1/3.
    """
    theta = math.acos(1.0 / math.sqrt(3.0))
    mixer = hadamard_pair(6, 3, 4)
    core = compose(
        beamsplitter(6, 0, 1, theta),
        beamsplitter(6, 2, 4, theta),
        beamsplitter(6, 3, 5, theta),
    )
    return compose(mixer, core, mixer)


def network_input(control_pattern, target_pattern) -> FockState:
    occ = [0] * 6
    occ[1], occ[2] = control_pattern
    occ[3], occ[4] = target_pattern
    return basis_state(6, occ)


def postselect_rail_pairs(s: FockState) -> FockState:
    """Unnormalized branch with exactly one photon on each rail pair."""
    kept = {
        occ: amp
        for occ, amp in s.terms.items()
        if occ[1] + occ[2] == 1 and occ[3] + occ[4] == 1 and occ[0] == 0 and occ[5] == 0
    }
    return _pruned(6, kept)


@dataclass(frozen=True)
class VacuumCaseResult:
    """Post-network branch analysis for one input pattern."""

    label: str
    control_pattern: tuple[int, int]
    target_pattern: tuple[int, int]
    branch_weights: dict[Occupation, float]
    intact_amplitude: complex
    control_intact_probability: float
    target_leak_probability: float
    ancilla_leak_probability: float
    consistent_with_scaled_identity: bool


@dataclass(frozen=True)
class VacuumFailureReport:
    logical_success_amplitude: float
    cases: list[VacuumCaseResult] = field(default_factory=list)

    @property
    def demonstrates_failure(self) -> bool:
        vacuum_cases = [c for c in self.cases if c.target_pattern == (0, 0)]
        return bool(vacuum_cases) and not any(
            c.consistent_with_scaled_identity for c in vacuum_cases
        )


def _classify_case(u: ModeUnitary, label, control_pattern, target_pattern, eta_ref) -> VacuumCaseResult:
    state = network_input(control_pattern, target_pattern)
    evolved = apply_unitary(state, u)
    weights = {occ: abs(a) ** 2 for occ, a in evolved.terms.items()}
    intact_occ = next(iter(state.terms))
    intact_amplitude = evolved.terms.get(intact_occ, 0j)

    control_intact = 0.0
    target_leak = 0.0
    ancilla_leak = 0.0
    for occ, w in weights.items():
        in_control = occ[1] + occ[2]
        in_target = occ[3] + occ[4]
        in_ancilla = occ[0] + occ[5]
        if in_control == sum(control_pattern) and in_target == sum(target_pattern) and in_ancilla == 0:
            control_intact += w
        if sum(target_pattern) == 0 and in_target > 0:
            target_leak += w
        if in_ancilla > 0:
            ancilla_leak += w

    # Scaled-identity behavior means: the input pattern survives with the
    # same amplitude the gate applies to logical inputs, and no photon
    # escapes into the empty target rails.
    consistent = bool(abs(intact_amplitude - eta_ref) <= 1e-9 and target_leak <= 1e-12)
    return VacuumCaseResult(
        label=label,
        control_pattern=tuple(control_pattern),
        target_pattern=tuple(target_pattern),
        branch_weights=weights,
        intact_amplitude=complex(intact_amplitude),
        control_intact_probability=control_intact,
        target_leak_probability=target_leak,
        ancilla_leak_probability=ancilla_leak,
        consistent_with_scaled_identity=consistent,
    )


def vacuum_failure_demo(u: ModeUnitary | None = None) -> VacuumFailureReport:
    """Show that the physical network does not act as eta x identity on vacuum targets.

    Runs the network with an occupied control and an empty target pair and
    records every surviving branch. The control photon leaks into the
    target rails and the intact-branch amplitude differs from the logical
    success amplitude, so no scalar rescaling can describe the action.
    A logical input is included as a sanity leg.
    """
    if u is None:
        u = build_postselected_cnot_network()
    eta_ref = NETWORK_SUCCESS_AMPLITUDE
    cases = [
        _classify_case(u, "control |10>, target vacuum", (1, 0), (0, 0), eta_ref),
        _classify_case(u, "control |01>, target vacuum", (0, 1), (0, 0), eta_ref),
        _classify_case(u, "control |10>, target |10> (sanity)", (1, 0), (1, 0), eta_ref),
    ]
    return VacuumFailureReport(logical_success_amplitude=eta_ref, cases=cases)
