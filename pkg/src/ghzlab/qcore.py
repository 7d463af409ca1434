"""Complex linear algebra for three-qubit states.

Conventions used everywhere in the package:

* Basis order is qubit-1 major: amplitude index ``b1 b2 b3`` in binary,
  with bit 0 meaning "up" and measurement outcome +1.
* sigma_y eigenvectors are ``(|up> + 1j*s*|down>)/sqrt(2)`` for outcome
  ``s``; no alternative phase, so amplitude tables are bit-reproducible.
* Tolerances: 1e-12 for exact algebraic identities, 1e-10 for
  eigenchecks, 1e-6 for optimizer convergence.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ImaginaryResidual, VisibilityOutOfRange

SQRT2_INV = 1.0 / np.sqrt(2.0)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

#: The 8 outcome triples in canonical order (+1 before -1, party-1 major).
OUTCOMES = [
    (i, j, k) for i in (+1, -1) for j in (+1, -1) for k in (+1, -1)
]

#: Settings patterns appearing in the four perfect-correlation identities.
PATTERNS = ("xxx", "xyy", "yxy", "yyx")


def _as_complex_vector(amplitudes) -> np.ndarray:
    arr = np.asarray(amplitudes, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Pure state of three qubits (or two, for the EPR contrast)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _as_complex_vector(self.amplitudes))
        dim = self.amplitudes.size
        if dim not in (4, 8):
            raise ValueError(f"expected 4 or 8 amplitudes, got {dim}")
        norm2 = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |psi|^2 = {norm2!r}")

    @property
    def num_qubits(self) -> int:
        return int(np.log2(self.amplitudes.size))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state of three qubits as an 8x8 (or 4x4) matrix."""

    entries: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] not in (4, 8):
            raise ValueError(f"expected a 4x4 or 8x8 matrix, got shape {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-12:
            raise ValueError("density matrix not Hermitian within 1e-12")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace {tr!r} != 1")
        # White-noise mixing can leave eigenvalues a hair below zero.
        if np.min(np.linalg.eigvalsh(mat)) < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    @property
    def num_qubits(self) -> int:
        return int(np.log2(self.entries.shape[0]))


@dataclass(frozen=True)
class Observable:
    """Real linear combination of tensor products of per-qubit Paulis.

    Each term is ``(coefficient, settings)`` with settings a string over
    {X, Y, Z, I}, qubit-1 leftmost. Real coefficients on Hermitian
    factors keep the whole observable Hermitian by construction.
    """

    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        norm = []
        for coeff, settings in self.terms:
            settings = settings.upper()
            if any(ch not in PAULI for ch in settings):
                raise ValueError(f"bad Pauli settings {settings!r}")
            norm.append((float(coeff), settings))
        if len({len(s) for _, s in norm}) > 1:
            raise ValueError("all terms must act on the same number of qubits")
        object.__setattr__(self, "terms", tuple(norm))

    @classmethod
    def single(cls, settings: str, coeff: float = 1.0) -> "Observable":
        return cls(((coeff, settings),))


@dataclass(frozen=True)
class AmplitudeTable:
    """Amplitudes of a pure state in a per-party sigma_x/sigma_y eigenbasis.

    ``entries[(i, j, k)]`` is the amplitude of the joint eigenvector with
    outcomes ``i, j, k`` in {+1, -1}.
    """

    settings: str
    entries: dict

    def __post_init__(self):
        if any(ch not in "xy" for ch in self.settings.lower()):
            raise ValueError(f"settings must be over {{x, y}}, got {self.settings!r}")
        object.__setattr__(self, "settings", self.settings.lower())
        total = sum(abs(a) ** 2 for a in self.entries.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"amplitude table not normalized: {total!r}")


def make_ghz() -> StateVector:
    """The three-qubit state (|up,up,up> + |down,down,down>)/sqrt(2)."""
    amps = np.zeros(8, dtype=complex)
    amps[0] = SQRT2_INV
    amps[7] = SQRT2_INV
    return StateVector(amps)


def maximally_mixed(num_qubits: int = 3) -> DensityMatrix:
    dim = 2 ** num_qubits
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def observable_matrix(obs: Observable) -> np.ndarray:
    """Kronecker-product expansion with qubit-1 as the leftmost factor."""
    dim = 2 ** len(obs.terms[0][1])
    total = np.zeros((dim, dim), dtype=complex)
    for coeff, settings in obs.terms:
        term = np.array([[1.0 + 0j]])
        for ch in settings:
            term = np.kron(term, PAULI[ch])
        total += coeff * term
    return total


def expectation(state, obs: Observable) -> float:
    """<psi|O|psi> or Tr(rho O); the imaginary residual must vanish."""
    mat = observable_matrix(obs)
    if isinstance(state, StateVector):
        value = complex(np.vdot(state.amplitudes, mat @ state.amplitudes))
    elif isinstance(state, DensityMatrix):
        value = complex(np.trace(state.entries @ mat))
    else:
        raise TypeError(f"expected StateVector or DensityMatrix, got {type(state)}")
    if abs(value.imag) >= 1e-10:
        raise ImaginaryResidual(f"imaginary residual {value.imag!r} in expectation")
    return value.real


def eigencheck(state: StateVector, obs: Observable, eigenvalue: float) -> bool:
    """True iff ||O|psi> - lambda|psi>|| < 1e-10."""
    return eigen_residual(state, obs, eigenvalue) < 1e-10


def eigen_residual(state: StateVector, obs: Observable, eigenvalue: float) -> float:
    mat = observable_matrix(obs)
    return float(np.linalg.norm(mat @ state.amplitudes - eigenvalue * state.amplitudes))


def basis_eigenvector(setting: str, outcome: int) -> np.ndarray:
    """Single-qubit eigenvector of sigma_x or sigma_y for outcome +-1."""
    if setting == "x":
        return np.array([SQRT2_INV, outcome * SQRT2_INV], dtype=complex)
    if setting == "y":
        return np.array([SQRT2_INV, 1j * outcome * SQRT2_INV], dtype=complex)
    raise ValueError(f"setting must be 'x' or 'y', got {setting!r}")


def joint_eigenvector(settings: str, outcomes) -> np.ndarray:
    vec = np.array([1.0 + 0j])
    for setting, outcome in zip(settings, outcomes):
        vec = np.kron(vec, basis_eigenvector(setting, outcome))
    return vec


def amplitude_table(state: StateVector, settings: str) -> AmplitudeTable:
    """Expand a pure state over a per-party x/y eigenbasis."""
    settings = settings.lower()
    if len(settings) != state.num_qubits:
        raise ValueError("one setting per qubit required")
    entries = {}
    for outcomes in itertools.product((+1, -1), repeat=len(settings)):
        vec = joint_eigenvector(settings, outcomes)
        entries[outcomes] = complex(np.vdot(vec, state.amplitudes))
    return AmplitudeTable(settings, entries)


def signed_probability_sum(table: AmplitudeTable) -> float:
    """Sum over outcomes of (product of outcomes) * |amplitude|^2."""
    return float(
        sum(np.prod(out) * abs(amp) ** 2 for out, amp in table.entries.items())
    )


def signed_sum_for_state(state, settings: str) -> float:
    """Signed probability sum for either a pure or a mixed state."""
    if isinstance(state, StateVector):
        return signed_probability_sum(amplitude_table(state, settings))
    total = 0.0
    for outcomes in itertools.product((+1, -1), repeat=state.num_qubits):
        vec = joint_eigenvector(settings, outcomes)
        prob = float(np.vdot(vec, state.entries @ vec).real)
        total += np.prod(outcomes) * prob
    return total


def mix_with_white_noise(state: StateVector, visibility: float) -> DensityMatrix:
    """v * |psi><psi| + (1 - v) * I/dim."""
    if not 0.0 <= visibility <= 1.0:
        raise VisibilityOutOfRange(f"visibility {visibility!r} outside [0, 1]")
    dim = state.amplitudes.size
    proj = np.outer(state.amplitudes, state.amplitudes.conj())
    return DensityMatrix(visibility * proj + (1.0 - visibility) * np.eye(dim) / dim)


# --- state file format -----------------------------------------------------
#
# Pure state:    {"dim": 8, "re": [8 reals], "im": [8 reals]}
# Mixed state:   {"dim": 8, "re": [[...]], "im": [[...]]}

def state_to_json_dict(state) -> dict:
    if isinstance(state, StateVector):
        arr = state.amplitudes
        return {"dim": arr.size, "re": arr.real.tolist(), "im": arr.imag.tolist()}
    if isinstance(state, DensityMatrix):
        mat = state.entries
        return {"dim": mat.shape[0], "re": mat.real.tolist(), "im": mat.imag.tolist()}
    raise TypeError(f"expected StateVector or DensityMatrix, got {type(state)}")


def state_from_json_dict(doc: dict):
    try:
        dim = int(doc["dim"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state document: {exc}") from exc
    data = re + 1j * im
    if data.shape == (dim,):
        return StateVector(data)
    if data.shape == (dim, dim):
        return DensityMatrix(data)
    raise ValueError(f"state arrays have shape {data.shape}, expected ({dim},) or ({dim}, {dim})")


def save_state(state, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_json_dict(state), fh)
        fh.write("\n")


def load_state(path):
    with open(path) as fh:
        return state_from_json_dict(json.load(fh))
