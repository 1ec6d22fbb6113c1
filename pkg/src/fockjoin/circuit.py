"""Line-oriented circuit description language and interpreter.

Grammar (one instruction per line, ``#`` starts a comment, angles in
radians; the ``modes`` declaration must come first):

    modes N
    bs i j theta phi
    ps i phi
    perm p0 p1 ... p{N-1}
    had i j
    cnot c0 c1 t0 t1 [eta_re eta_im [etap_re etap_im]]
    rcnot c0 c1 t0 t1 [eta_re eta_im [etap_re etap_im]]
    zflip m0 m1
    project i0 a_re a_im [i1 b_re b_im ...]
    vac i0 [i1 ...]

Parsing collects every diagnostic instead of stopping at the first, so a
fixture corpus can be validated in one pass. Execution folds instructions
over a Fock state; projections multiply the running success probability.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .fock import FockState, postselect_vacuum
from .gates import CnotSpec, DualRailQubit, IllegalPatternError, apply_cnot, apply_reversed_cnot, logical_phase_flip
from .optics import ProjectorSpec, apply_projector, apply_unitary, beamsplitter, hadamard_pair, mode_permutation, phase_shifter

_TOKEN = re.compile(r"\S+")


class CircuitError(RuntimeError):
    """Execution failure, annotated with the offending instruction index."""

    def __init__(self, message: str, instruction_index: int):
        super().__init__(message)
        self.instruction_index = instruction_index


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    token: str


@dataclass(frozen=True)
class Instruction:
    op: str
    args: tuple
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class CircuitProgram:
    modes: int
    instructions: tuple[Instruction, ...]


def _tokenize(line: str):
    tokens = []
    for match in _TOKEN.finditer(line):
        text = match.group()
        if text.startswith("#"):
            break
        tokens.append((text, match.start() + 1))
    return tokens


def parse_circuit(text: str):
    """Parse a circuit; returns the program, or every diagnostic found."""
    diagnostics: list[ParseDiagnostic] = []
    instructions: list[Instruction] = []
    modes: int | None = None

    def complain(line_no, column, message, token=""):
        diagnostics.append(ParseDiagnostic(line_no, column, message, token))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw)
        if not tokens:
            continue
        (keyword, key_col), rest = tokens[0], tokens[1:]

        if modes is None:
            if keyword != "modes":
                complain(line_no, key_col, "the first instruction must declare 'modes N'", keyword)
                continue
            value = _parse_int(rest, 0, line_no, complain, "mode count")
            if value is None:
                continue
            if value < 1 or len(rest) != 1:
                complain(line_no, key_col, "usage: modes N with N >= 1", keyword)
                continue
            modes = value
            continue

        handler = _HANDLERS.get(keyword)
        if handler is None:
            complain(line_no, key_col, f"unknown instruction {keyword!r}", keyword)
            continue
        result = handler(rest, modes, line_no, key_col, complain)
        if result is not None:
            instructions.append(Instruction(result[0], result[1], line_no))

    if modes is None and not diagnostics:
        diagnostics.append(ParseDiagnostic(1, 1, "empty program: missing 'modes N'", ""))
    if diagnostics:
        return diagnostics
    return CircuitProgram(modes, tuple(instructions))


def _parse_int(tokens, index, line_no, complain, what):
    if index >= len(tokens):
        complain(line_no, 1, f"missing {what}", "")
        return None
    text, col = tokens[index]
    try:
        return int(text)
    except ValueError:
        complain(line_no, col, f"{what} must be an integer", text)
        return None


def _numbers(tokens, line_no, complain):
    values = []
    for text, col in tokens:
        try:
            values.append(float(text))
        except ValueError:
            complain(line_no, col, "expected a numeric literal", text)
            return None
    return values


def _mode_args(tokens, count, modes, line_no, key_col, complain, distinct=True):
    if len(tokens) < count:
        complain(line_no, key_col, f"expected {count} mode indices", "")
        return None
    out = []
    for text, col in tokens[:count]:
        try:
            value = int(text)
        except ValueError:
            complain(line_no, col, "mode index must be an integer", text)
            return None
        if value < 0 or value >= modes:
            complain(line_no, col, f"mode {value} out of range for {modes} modes", text)
            return None
        out.append(value)
    if distinct and len(set(out)) != len(out):
        complain(line_no, key_col, "mode indices must be distinct", "")
        return None
    return out


def _handle_bs(tokens, modes, line_no, key_col, complain):
    if len(tokens) != 4:
        complain(line_no, key_col, "usage: bs i j theta phi", "bs")
        return None
    pair = _mode_args(tokens[:2], 2, modes, line_no, key_col, complain)
    angles = _numbers(tokens[2:], line_no, complain)
    if pair is None or angles is None:
        return None
    return "bs", (pair[0], pair[1], angles[0], angles[1])


def _handle_ps(tokens, modes, line_no, key_col, complain):
    if len(tokens) != 2:
        complain(line_no, key_col, "usage: ps i phi", "ps")
        return None
    pair = _mode_args(tokens[:1], 1, modes, line_no, key_col, complain)
    angles = _numbers(tokens[1:], line_no, complain)
    if pair is None or angles is None:
        return None
    return "ps", (pair[0], angles[0])


def _handle_perm(tokens, modes, line_no, key_col, complain):
    if len(tokens) != modes:
        complain(line_no, key_col, f"perm needs exactly {modes} indices", "perm")
        return None
    values = _mode_args(tokens, modes, modes, line_no, key_col, complain)
    if values is None:
        return None
    if sorted(values) != list(range(modes)):
        complain(line_no, key_col, "perm arguments must form a permutation", "perm")
        return None
    return "perm", tuple(values)


def _handle_had(tokens, modes, line_no, key_col, complain):
    if len(tokens) != 2:
        complain(line_no, key_col, "usage: had i j", "had")
        return None
    pair = _mode_args(tokens, 2, modes, line_no, key_col, complain)
    if pair is None:
        return None
    return "had", tuple(pair)


def _handle_zflip(tokens, modes, line_no, key_col, complain):
    if len(tokens) != 2:
        complain(line_no, key_col, "usage: zflip m0 m1", "zflip")
        return None
    pair = _mode_args(tokens, 2, modes, line_no, key_col, complain)
    if pair is None:
        return None
    return "zflip", tuple(pair)


def _handle_cnot(op):
    def handler(tokens, modes, line_no, key_col, complain):
        if len(tokens) not in (4, 6, 8):
            complain(line_no, key_col, f"usage: {op} c0 c1 t0 t1 [eta_re eta_im [etap_re etap_im]]", op)
            return None
        quads = _mode_args(tokens[:4], 4, modes, line_no, key_col, complain)
        if quads is None:
            return None
        extras = _numbers(tokens[4:], line_no, complain)
        if extras is None:
            return None
        eta = complex(extras[0], extras[1]) if len(extras) >= 2 else 1 + 0j
        etap = complex(extras[2], extras[3]) if len(extras) >= 4 else 1 + 0j
        if abs(eta) > 1 + 1e-12 or abs(etap) > 1 + 1e-12:
            complain(line_no, key_col, "vacuum-port amplitudes cannot exceed unit magnitude", op)
            return None
        return op, (*quads, eta, etap)

    return handler


def _handle_project(tokens, modes, line_no, key_col, complain):
    if not tokens or len(tokens) % 3 != 0:
        complain(line_no, key_col, "usage: project i0 a_re a_im [i1 b_re b_im ...]", "project")
        return None
    entries = []
    seen = set()
    for k in range(0, len(tokens), 3):
        mode = _mode_args(tokens[k : k + 1], 1, modes, line_no, key_col, complain)
        amps = _numbers(tokens[k + 1 : k + 3], line_no, complain)
        if mode is None or amps is None:
            return None
        if mode[0] in seen:
            complain(line_no, tokens[k][1], f"mode {mode[0]} listed twice", tokens[k][0])
            return None
        seen.add(mode[0])
        entries.append((mode[0], complex(amps[0], amps[1])))
    total = sum(abs(a) ** 2 for _, a in entries)
    if abs(total - 1.0) > 1e-6:
        complain(line_no, key_col, f"projection amplitudes have squared norm {total:.6g}, expected 1", "project")
        return None
    return "project", tuple(entries)


def _handle_vac(tokens, modes, line_no, key_col, complain):
    if not tokens:
        complain(line_no, key_col, "usage: vac i0 [i1 ...]", "vac")
        return None
    values = _mode_args(tokens, len(tokens), modes, line_no, key_col, complain)
    if values is None:
        return None
    return "vac", tuple(values)


_HANDLERS = {
    "bs": _handle_bs,
    "ps": _handle_ps,
    "perm": _handle_perm,
    "had": _handle_had,
    "cnot": _handle_cnot("cnot"),
    "rcnot": _handle_cnot("rcnot"),
    "zflip": _handle_zflip,
    "project": _handle_project,
    "vac": _handle_vac,
}


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def format_circuit(program: CircuitProgram) -> str:
    """Canonical text form; parsing it reproduces the program exactly."""
    lines = [f"modes {program.modes}"]
    for ins in program.instructions:
        if ins.op in ("cnot", "rcnot"):
            c0, c1, t0, t1, eta, etap = ins.args
            parts = [ins.op, c0, c1, t0, t1, eta.real, eta.imag, etap.real, etap.imag]
        elif ins.op == "project":
            parts = [ins.op]
            for mode, amp in ins.args:
                parts += [mode, amp.real, amp.imag]
        else:
            parts = [ins.op, *ins.args]
        lines.append(" ".join(_fmt(p) for p in parts))
    return "\n".join(lines) + "\n"


def run_circuit(program: CircuitProgram, state: FockState):
    """Execute a program on an input state.

    Returns (final state, cumulative success probability, branch log).
    Unitary instructions leave the probability untouched; each projection
    multiplies it by the branch weight and appends a log entry.
    """
    if state.modes != program.modes:
        raise ValueError(f"input has {state.modes} modes, program declares {program.modes}")
    probability = 1.0
    log: list[str] = []
    for index, ins in enumerate(program.instructions):
        try:
            state, probability = _step(ins, state, probability, index, log)
        except IllegalPatternError as exc:
            raise CircuitError(f"instruction {index} (line {ins.line}, {ins.op}): {exc}", index) from exc
    return state, probability, log


def _step(ins: Instruction, state: FockState, probability: float, index: int, log: list[str]):
    m = state.modes
    if ins.op == "bs":
        i, j, theta, phi = ins.args
        return apply_unitary(state, beamsplitter(m, i, j, theta, phi)), probability
    if ins.op == "ps":
        i, phi = ins.args
        return apply_unitary(state, phase_shifter(m, i, phi)), probability
    if ins.op == "perm":
        return apply_unitary(state, mode_permutation(m, ins.args)), probability
    if ins.op == "had":
        i, j = ins.args
        return apply_unitary(state, hadamard_pair(m, i, j)), probability
    if ins.op in ("cnot", "rcnot"):
        c0, c1, t0, t1, eta, etap = ins.args
        spec = CnotSpec(DualRailQubit(c0, c1), DualRailQubit(t0, t1), eta=eta, eta_prime=etap)
        gate = apply_cnot if ins.op == "cnot" else apply_reversed_cnot
        return gate(state, spec), probability
    if ins.op == "zflip":
        m0, m1 = ins.args
        return logical_phase_flip(state, DualRailQubit(m0, m1)), probability
    if ins.op == "vac":
        state, weight = postselect_vacuum(state, ins.args)
        log.append(f"instruction {index} (line {ins.line}): vacuum check weight {weight:.17g}")
        return state, probability * weight
    if ins.op == "project":
        phi = np.zeros(m, dtype=complex)
        for mode, amp in ins.args:
            phi[mode] = amp
        phi /= math.sqrt(sum(abs(a) ** 2 for a in phi))
        state, weight = apply_projector(state, ProjectorSpec(phi))
        log.append(f"instruction {index} (line {ins.line}): project weight {weight:.17g}")
        return state, probability * weight
    raise CircuitError(f"unsupported instruction {ins.op!r}", index)
