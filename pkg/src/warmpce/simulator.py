"""Exact statevector simulation of the layered ansatz and Pauli-string expectations.

States are plain 1-D complex arrays of length 2^n.  Basis convention: qubit 0
is the most significant bit of the flat index, so
``state.reshape((2,) * n)[b0, b1, ..., b_{n-1}]`` is the amplitude of
|b0 b1 ... b_{n-1}>.  Pauli strings are plain Python strings over "IXYZ",
one letter per qubit, e.g. ``"ZZII"``.

Gates are applied as O(2^n) amplitude-pair updates; expectation values use the
flip/phase action of a Pauli string on basis states.  No 2^n x 2^n operator is
ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin

import numpy as np

PAULI_LETTERS = "IXYZ"


@dataclass(frozen=True)
class AnsatzConfig:
    """Layered two-local circuit: ``layers`` blocks of (RY on every qubit,
    CX chain with qubit i controlling i+1), then one final RY layer."""

    qubits: int
    layers: int
    rotation_axis: str = "ry"
    entanglement: str = "linear-cx"

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.qubits}")
        if self.layers < 1:
            raise ValueError(f"layer count must be >= 1, got {self.layers}")
        if self.rotation_axis != "ry":
            raise ValueError("only 'ry' rotations are supported")
        if self.entanglement != "linear-cx":
            raise ValueError("only 'linear-cx' entanglement is supported")

    @property
    def parameter_count(self) -> int:
        """One angle per qubit per rotation layer: n * (p + 1)."""
        return self.qubits * (self.layers + 1)


def _apply_ry(state: np.ndarray, qubit: int, theta: float) -> None:
    """In-place RY(theta) on ``qubit``; ``state`` has shape (2,)*n."""
    c, s = cos(theta / 2.0), sin(theta / 2.0)
    # trailing Ellipsis keeps 0-d results as views
    lo = state[(slice(None),) * qubit + (0, Ellipsis)]
    hi = state[(slice(None),) * qubit + (1, Ellipsis)]
    old_lo = lo.copy()
    lo *= c
    lo -= s * hi
    hi *= c
    hi += s * old_lo


def _apply_cx(state: np.ndarray, control: int, target: int) -> None:
    """In-place CNOT; flips ``target`` amplitudes in the control=1 subspace."""
    sub = state[(slice(None),) * control + (1,)]
    t_ax = target - 1 if target > control else target
    idx0 = (slice(None),) * t_ax + (0,)
    idx1 = (slice(None),) * t_ax + (1,)
    tmp = sub[idx0].copy()
    sub[idx0] = sub[idx1]
    sub[idx1] = tmp


def prepare_state(config: AnsatzConfig, params) -> np.ndarray:
    """Run the ansatz on |0...0> and return the normalized statevector.

    ``params`` is laid out layer-major: the first n angles feed the first
    rotation layer, and so on through the final layer.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (config.parameter_count,):
        raise ValueError(
            f"expected {config.parameter_count} parameters for "
            f"{config.qubits} qubits x {config.layers} layers, got {params.shape}"
        )
    n = config.qubits
    angles = params.reshape(config.layers + 1, n)
    state = np.zeros((2,) * n, dtype=complex)
    state[(0,) * n] = 1.0
    for block in range(config.layers):
        for q in range(n):
            _apply_ry(state, q, angles[block, q])
        for q in range(n - 1):
            _apply_cx(state, q, q + 1)
    for q in range(n):
        _apply_ry(state, q, angles[-1, q])
    return state.reshape(-1)


def _qubit_count(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if state.ndim != 1 or dim != 1 << n:
        raise ValueError(f"state length {state.shape} is not a power of two")
    return n


class PauliBatch:
    """Precompiled flip/phase tables for a fixed set of Pauli strings.

    A Pauli string maps each basis state |b> to phase(b) |b ^ flip_mask>,
    where X/Y letters contribute to the flip mask and Z/Y letters contribute
    parity signs (Y additionally a global i per letter).  The expectation is

        <P> = sum_b conj(psi[b ^ flip]) * phase(b) * psi[b]

    which one einsum evaluates for the whole batch.
    """

    def __init__(self, strings, qubits: int):
        strings = tuple(strings)
        for s in strings:
            if len(s) != qubits:
                raise ValueError(f"pauli {s!r} does not match {qubits} qubits")
            if any(ch not in PAULI_LETTERS for ch in s):
                raise ValueError(f"invalid pauli letter in {s!r}")
        self.strings = strings
        self.qubits = qubits
        dim = 1 << qubits
        idx = np.arange(dim)
        self._flipped = np.empty((len(strings), dim), dtype=np.intp)
        self._phase = np.empty((len(strings), dim), dtype=complex)
        for row, s in enumerate(strings):
            flip_mask = 0
            sign_mask = 0
            n_y = 0
            for q, letter in enumerate(s):
                bit = 1 << (qubits - 1 - q)
                if letter in "XY":
                    flip_mask |= bit
                if letter in "ZY":
                    sign_mask |= bit
                if letter == "Y":
                    n_y += 1
            self._flipped[row] = idx ^ flip_mask
            parity = np.bitwise_count(idx & sign_mask) & 1
            self._phase[row] = (1j**n_y) * np.where(parity, -1.0, 1.0)

    def values(self, state: np.ndarray) -> np.ndarray:
        """Expectation value of every string on ``state`` (real vector)."""
        if _qubit_count(state) != self.qubits:
            raise ValueError(
                f"state has {_qubit_count(state)} qubits, batch expects {self.qubits}"
            )
        raw = np.einsum(
            "sd,sd,d->s", np.conj(state)[self._flipped], self._phase, state
        )
        return raw.real


def expectation(state: np.ndarray, pauli: str) -> float:
    """<psi| P |psi> for a single Pauli string; real, in [-1, 1]."""
    return float(PauliBatch((pauli,), _qubit_count(state)).values(state)[0])


def expectation_batch(state: np.ndarray, paulis) -> np.ndarray:
    """Expectation of each string in ``paulis``; empty input gives an empty vector."""
    paulis = tuple(paulis)
    if not paulis:
        return np.zeros(0)
    return PauliBatch(paulis, _qubit_count(state)).values(state)
