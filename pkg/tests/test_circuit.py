import math

import numpy as np
import pytest

from fockjoin.circuit import CircuitError, CircuitProgram, format_circuit, parse_circuit, run_circuit
from fockjoin.fock import discard_empty_modes, fidelity, make_state, norm, normalize, tensor, basis_state
from fockjoin.schemes import (
    joined_ququart,
    join_projective,
    split_projective,
    two_qubit_input,
    unfold_target,
)

ROOT_HALF = 1 / math.sqrt(2)


def random_alphas(rng):
    a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return a / np.linalg.norm(a)


def test_parse_minimal_program():
    program = parse_circuit("modes 2\nbs 0 1 0.7853981633974483 0\n")
    assert isinstance(program, CircuitProgram)
    assert program.modes == 2
    assert len(program.instructions) == 1
    assert program.instructions[0].op == "bs"


def test_parse_collects_all_diagnostics():
    bad = parse_circuit("modes 2\nbs 0 5 0 0\nfoo 1\nbs 0 1\n")
    assert isinstance(bad, list)
    assert len(bad) == 3
    assert bad[0].line == 2 and "out of range" in bad[0].message and bad[0].token == "5"
    assert bad[1].line == 3 and "unknown instruction" in bad[1].message
    assert bad[2].line == 4


def test_parse_requires_modes_first():
    bad = parse_circuit("bs 0 1 0 0\n")
    assert isinstance(bad, list)
    assert "modes" in bad[0].message


def test_parse_non_numeric_literal():
    bad = parse_circuit("modes 2\nbs 0 1 half 0\n")
    assert isinstance(bad, list)
    assert bad[0].token == "half"


def test_parse_comments_and_blank_lines():
    program = parse_circuit("# header\n\nmodes 2\nhad 0 1  # inline\n")
    assert isinstance(program, CircuitProgram)
    assert len(program.instructions) == 1


def test_format_parse_fixed_point():
    text = """modes 6
bs 0 1 0.7853981633974483 0.25
ps 2 1.5
perm 5 4 3 2 1 0
had 0 1
cnot 4 5 0 1
rcnot 4 5 2 3 0.5 0.5 1 0
zflip 0 1
project 4 0.7071067811865476 0 5 0.7071067811865476 0
vac 1 3
"""
    program = parse_circuit(text)
    assert isinstance(program, CircuitProgram)
    printed = format_circuit(program)
    assert parse_circuit(printed) == program
    assert format_circuit(parse_circuit(printed)) == printed


def test_run_empty_program_is_identity():
    program = parse_circuit("modes 2\n")
    state = make_state(2, [((1, 0), 1.0)])
    out, prob, log = run_circuit(program, state)
    assert out.terms == state.terms
    assert prob == 1.0
    assert log == []


def test_run_two_photon_interference_script():
    program = parse_circuit("modes 2\nbs 0 1 0.7853981633974483 0\n")
    out, prob, _ = run_circuit(program, make_state(2, [((1, 1), 1.0)]))
    assert prob == 1.0
    assert out.terms[(0, 2)] == pytest.approx(ROOT_HALF)
    assert out.terms[(2, 0)] == pytest.approx(-ROOT_HALF)


def test_run_mode_count_mismatch():
    program = parse_circuit("modes 3\n")
    with pytest.raises(ValueError):
        run_circuit(program, basis_state(2, (1, 0)))


def test_joining_script_matches_scheme():
    script = """modes 6
cnot 4 5 0 1
cnot 4 5 2 3
project 4 0.7071067811865476 0 5 0.7071067811865476 0
"""
    program = parse_circuit(script)
    rng = np.random.default_rng(90)
    for _ in range(5):
        alphas = random_alphas(rng)
        s = two_qubit_input(alphas)
        out6, prob, log = run_circuit(program, unfold_target(s))
        report = join_projective(s, branch="plus")
        assert prob == pytest.approx(report.success_probability, abs=1e-12)
        out4 = discard_empty_modes(out6, (4, 5))
        assert fidelity(out4, report.output) >= 1 - 1e-12
        assert len(log) == 1


def test_splitting_script_matches_scheme():
    script = """modes 6
cnot 0 1 4 5
cnot 2 3 4 5
had 0 1
had 2 3
vac 1 3
"""
    program = parse_circuit(script)
    rng = np.random.default_rng(91)
    for _ in range(5):
        q = joined_ququart(random_alphas(rng))
        state = tensor(q, basis_state(2, (1, 0)))
        out6, prob, _ = run_circuit(program, state)
        report = split_projective(q, branch="plus")
        assert prob == pytest.approx(0.5, abs=1e-12)
        out4 = discard_empty_modes(out6, (1, 3))
        assert fidelity(out4, report.output) >= 1 - 1e-12


def test_unitary_only_program_preserves_norm():
    script = """modes 4
bs 0 1 0.3 0.1
bs 2 3 1.1 -0.4
ps 1 2.2
perm 1 2 3 0
had 0 3
"""
    program = parse_circuit(script)
    rng = np.random.default_rng(92)
    terms = [
        (tuple(int(rng.integers(0, 2)) for _ in range(4)), complex(rng.standard_normal(), rng.standard_normal()))
        for _ in range(5)
    ]
    state = normalize(make_state(4, terms))
    out, prob, _ = run_circuit(program, state)
    assert prob == 1.0
    assert abs(norm(out) - 1.0) <= 1e-10


def test_gate_errors_carry_instruction_index():
    program = parse_circuit("modes 4\nhad 0 1\ncnot 0 1 2 3\n")
    bad_input = make_state(4, [((1, 1, 1, 0), 1.0)])
    with pytest.raises(CircuitError) as err:
        run_circuit(program, bad_input)
    assert err.value.instruction_index == 1
    assert "line 3" in str(err.value)
