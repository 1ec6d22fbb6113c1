"""Linear-optical evolution of Fock states.

An m x m unitary u acts on creation operators by substitution,
a+_i -> sum_j u[i, j] a+_j, and a state evolves by expanding each basis
term as a polynomial in the substituted operators with the bosonic
sqrt(n!) normalization per mode. Detection of one photon in a mode
superposition phi is the operator sum_h conj(phi[h]) a_h.

All functions are pure; unitaries and projectors validate themselves on
construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import FockState, Occupation, _pruned, norm, zero_state

UNITARY_ATOL = 1e-10


@dataclass(frozen=True)
class ModeUnitary:
    """m x m complex unitary acting on the mode creation operators."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (self.dim, self.dim):
            raise ValueError(f"matrix shape {mat.shape} does not match dim {self.dim}")
        defect = np.max(np.abs(mat @ mat.conj().T - np.eye(self.dim)))
        if defect > UNITARY_ATOL:
            raise ValueError(f"matrix is not unitary (max defect {defect:.3e})")
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class ProjectorSpec:
    """Normalized mode superposition defining a one-photon detection."""

    phi: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.phi, dtype=complex).reshape(-1)
        defect = abs(np.sum(np.abs(vec) ** 2) - 1.0)
        if defect > UNITARY_ATOL:
            raise ValueError(f"projector vector is not normalized (defect {defect:.3e})")
        object.__setattr__(self, "phi", vec)

    @property
    def modes(self) -> int:
        return len(self.phi)


def identity(m: int) -> ModeUnitary:
    return ModeUnitary(m, np.eye(m, dtype=complex))


def compose(*elements: ModeUnitary) -> ModeUnitary:
    """Unitary equivalent to applying the elements left to right.

    Under the substitution convention, applying u then v equals applying
    the single matrix u @ v.
    """
    if not elements:
        raise ValueError("compose needs at least one element")
    dim = elements[0].dim
    total = np.eye(dim, dtype=complex)
    for el in elements:
        if el.dim != dim:
            raise ValueError("all elements must share the same mode count")
        total = total @ el.matrix
    return ModeUnitary(dim, total)


def beamsplitter(m: int, i: int, j: int, theta: float, phase: float = 0.0) -> ModeUnitary:
    """Two-mode coupler: block [[cos, e^{i p} sin], [-e^{-i p} sin, cos]] on (i, j)."""
    _check_pair(m, i, j)
    mat = np.eye(m, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    mat[i, i] = c
    mat[i, j] = np.exp(1j * phase) * s
    mat[j, i] = -np.exp(-1j * phase) * s
    mat[j, j] = c
    return ModeUnitary(m, mat)


def phase_shifter(m: int, i: int, phase: float) -> ModeUnitary:
    if i < 0 or i >= m:
        raise ValueError(f"mode {i} out of range for {m} modes")
    mat = np.eye(m, dtype=complex)
    mat[i, i] = np.exp(1j * phase)
    return ModeUnitary(m, mat)


def hadamard_pair(m: int, i: int, j: int) -> ModeUnitary:
    """Balanced symmetric mixer (1/sqrt2)[[1, 1], [1, -1]] on modes (i, j)."""
    _check_pair(m, i, j)
    r = 1.0 / math.sqrt(2.0)
    mat = np.eye(m, dtype=complex)
    mat[i, i] = r
    mat[i, j] = r
    mat[j, i] = r
    mat[j, j] = -r
    return ModeUnitary(m, mat)


def mode_permutation(m: int, perm) -> ModeUnitary:
    """Routing unitary sending the photon in mode i to perm[i]."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(m)):
        raise ValueError(f"{perm} is not a permutation of 0..{m - 1}")
    mat = np.zeros((m, m), dtype=complex)
    for i, p in enumerate(perm):
        mat[i, p] = 1.0
    return ModeUnitary(m, mat)


def haar_random_unitary(m: int, seed: int) -> ModeUnitary:
    """Haar-distributed unitary, deterministic for a fixed seed."""
    return haar_from_rng(m, np.random.default_rng(seed))


def haar_from_rng(m: int, rng: np.random.Generator) -> ModeUnitary:
    if m < 1:
        raise ValueError("mode count must be positive")
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return ModeUnitary(m, q)


def random_projector(m: int, rng: np.random.Generator) -> ProjectorSpec:
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return ProjectorSpec(v / np.linalg.norm(v))


def unitary_to_dict(u: ModeUnitary) -> dict:
    return {"dim": u.dim, "re": u.matrix.real.tolist(), "im": u.matrix.imag.tolist()}


def unitary_from_dict(data: dict) -> ModeUnitary:
    try:
        dim = int(data["dim"])
        mat = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed unitary object: {exc}") from exc
    return ModeUnitary(dim, mat)


def _check_pair(m: int, i: int, j: int):
    if i == j:
        raise ValueError("the two modes must differ")
    for k in (i, j):
        if k < 0 or k >= m:
            raise ValueError(f"mode {k} out of range for {m} modes")


def apply_unitary(s: FockState, u: ModeUnitary) -> FockState:
    """Evolve a state through a mode unitary.

    Each term is expanded by substituting every creation operator and
    collecting monomials; photon number per term and the overall norm are
    preserved.
    """
    if u.dim != s.modes:
        raise ValueError(f"unitary dim {u.dim} does not match state modes {s.modes}")
    mat = u.matrix
    out: dict[Occupation, complex] = {}
    zero = (0,) * s.modes
    for occ, amp in s.terms.items():
        # Polynomial in the output creation operators, keyed by exponent vector.
        poly: dict[Occupation, complex] = {zero: 1.0 + 0j}
        for i, n in enumerate(occ):
            for _ in range(n):
                nxt: dict[Occupation, complex] = {}
                for expo, coeff in poly.items():
                    for j in range(s.modes):
                        cij = mat[i, j]
                        if cij == 0:
                            continue
                        key = expo[:j] + (expo[j] + 1,) + expo[j + 1 :]
                        nxt[key] = nxt.get(key, 0j) + coeff * cij
                poly = nxt
        in_norm = math.sqrt(math.prod(math.factorial(n) for n in occ))
        for expo, coeff in poly.items():
            out_norm = math.sqrt(math.prod(math.factorial(n) for n in expo))
            out[expo] = out.get(expo, 0j) + amp * coeff * out_norm / in_norm
    return _pruned(s.modes, out)


def apply_projector(s: FockState, p: ProjectorSpec) -> tuple[FockState, float]:
    """Detect one photon in the mode superposition p.

    Returns the renormalized post-detection state and the detection
    weight |Pi s|^2. For states holding at most one photon across the
    support of p the weight is the detection probability. A vanished
    branch comes back as the flagged zero state with weight 0.
    """
    if p.modes != s.modes:
        raise ValueError(f"projector length {p.modes} does not match state modes {s.modes}")
    phi_conj = np.conj(p.phi)
    out: dict[Occupation, complex] = {}
    for occ, amp in s.terms.items():
        for h, n in enumerate(occ):
            if n == 0 or phi_conj[h] == 0:
                continue
            lowered = occ[:h] + (n - 1,) + occ[h + 1 :]
            out[lowered] = out.get(lowered, 0j) + amp * phi_conj[h] * math.sqrt(n)
    projected = _pruned(s.modes, out)
    weight = norm(projected) ** 2
    if weight == 0.0:
        return zero_state(s.modes), 0.0
    return _pruned(s.modes, {o: a / math.sqrt(weight) for o, a in projected.terms.items()}), weight
