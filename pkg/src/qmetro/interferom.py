"""Interferometer sequences and readouts.

Single-particle Mach-Zehnder and Ramsey pipelines use explicit 2x2
matrices.  The collective Ramsey sequence composes the two pi/2 pulses
about y with the phase accumulation about z (rightmost factor first).
The two-mode Mach-Zehnder acts sector-by-sector in total particle
number, which keeps each beam splitter exactly unitary on the truncated
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import grid_then_golden
from .estimate import (
    PrecisionReport,
    classical_fisher,
    cramer_rao,
    error_propagation,
    povm_family,
    qfi_from_family,
    Povm,
)
from .spinops import (
    BasisTag,
    CollectiveSpinState,
    Observable,
    collective_ops,
    expectation_vector,
    moments,
    rotate,
)
from .statelib import TwoModeFockState

__all__ = [
    "RamseySequence",
    "MzSequence",
    "ParityOperator",
    "mz_single_particle",
    "ramsey_single_particle",
    "ramsey",
    "mz_two_mode",
    "parity_expectation",
    "parity_operator",
    "parity_sector_povm",
    "number_operator",
    "optimal_readout_rotation",
    "phase_sweep",
]

# 50:50 splitter of the single-particle pipelines (self-inverse Hadamard form)
SPLITTER_2X2 = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def _unitary(generator: np.ndarray, angle: float) -> np.ndarray:
    """Dense exp(-i angle generator) by spectral decomposition."""
    w, v = np.linalg.eigh(generator)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T


def mz_single_particle(phi: float) -> tuple[float, float]:
    """Single-particle Mach-Zehnder detection probabilities (p_a, p_b).

    Computed by the explicit 2x2 pipeline: splitter, relative phase
    e^(i phi) on path b, splitter.  Equals (cos^2(phi/2), sin^2(phi/2)).
    """
    psi = np.array([1.0, 0.0], dtype=complex)  # enter in port a
    psi = SPLITTER_2X2 @ psi
    psi = np.array([psi[0], np.exp(1j * phi) * psi[1]])
    psi = SPLITTER_2X2 @ psi
    p = np.abs(psi) ** 2
    return float(p[0]), float(p[1])


def ramsey_single_particle(phi: float) -> tuple[float, float]:
    """Single-atom Ramsey detection probabilities (p_down, p_up).

    Two self-inverse pi/2 pulses around a free evolution that advances
    the ground state by -phi/2 and the excited state by +phi/2; yields
    p(down|phi) = (1 + cos phi)/2.
    """
    psi = np.array([1.0, 0.0], dtype=complex)  # start in the ground state
    psi = SPLITTER_2X2 @ psi
    psi = np.array(
        [np.exp(-1j * phi / 2.0) * psi[0], np.exp(+1j * phi / 2.0) * psi[1]]
    )
    psi = SPLITTER_2X2 @ psi
    p = np.abs(psi) ** 2
    return float(p[0]), float(p[1])


@dataclass(frozen=True)
class RamseySequence:
    """Collective Ramsey sequence: pi/2 pulse, phase phi about z, pi/2 pulse,
    plus an optional pre-readout rotation about the mean-spin axis."""

    n_particles: int
    phi: float
    readout_rotation: float | None = None

    def propagator(self) -> np.ndarray:
        """Dense unitary of the pulse-phase-pulse sequence (no readout rotation)."""
        ops = collective_ops(self.n_particles)
        pulse = _unitary(ops.jy, math.pi / 2.0)
        phase = _unitary(ops.jz, self.phi)
        return pulse @ phase @ pulse

    def apply(self, initial: CollectiveSpinState) -> CollectiveSpinState:
        return ramsey(initial, self.phi, self.readout_rotation)


def ramsey(
    initial: CollectiveSpinState,
    phi: float,
    readout_rotation: float | None = None,
) -> CollectiveSpinState:
    """Run the collective Ramsey sequence on a probe state.

    Applies exp(-i pi/2 Jy), then exp(-i phi Jz), then exp(-i pi/2 Jy)
    (rightmost factor of the composed propagator acts first).  When
    ``readout_rotation`` is given, the final state is additionally
    rotated by that angle about its own mean-spin axis, which reorients
    the uncertainty ellipse without moving the mean spin.
    """
    state = rotate(initial, (0.0, 1.0, 0.0), math.pi / 2.0)
    state = rotate(state, (0.0, 0.0, 1.0), phi)
    state = rotate(state, (0.0, 1.0, 0.0), math.pi / 2.0)
    if readout_rotation is not None:
        state = _rotate_about_mean_spin(state, readout_rotation)
    return state


def _mean_spin_axis(state: CollectiveSpinState) -> np.ndarray:
    jvec = expectation_vector(state)
    norm = float(np.linalg.norm(jvec))
    if norm <= 1e-10:
        raise ValueError("mean spin vanishes; readout rotation axis undefined")
    return jvec / norm


def _rotate_about_mean_spin(
    state: CollectiveSpinState, angle: float
) -> CollectiveSpinState:
    return rotate(state, _mean_spin_axis(state), angle)


def optimal_readout_rotation(state: CollectiveSpinState) -> float:
    """Rotation angle about the mean-spin axis minimizing Var(Jz).

    Scanned over [0, pi) by a coarse bracket and refined by
    golden-section to width 1e-10.
    """
    axis = _mean_spin_axis(state)
    ops = collective_ops(state.n_particles)
    jz_obs = Observable(ops.jz, ops.basis_tag)

    def readout_variance(angle):
        return moments(rotate(state, axis, angle), jz_obs)[1]

    return grid_then_golden(readout_variance, 0.0, math.pi, n_grid=64, tol=1e-10)


def _sector_indices(n: int, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    na = np.arange(max(0, n - cutoff), min(n, cutoff) + 1)
    return na, n - na


def _sector_generators(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian generators of the two splitters on the total-number-n sector.

    h1 = i (a†b - b†a) so that exp(-i pi/4 h1) = exp[(pi/4)(a†b - b†a)];
    h2 = a†b + b†a   so that exp(-i pi/4 h2) = exp[-i(pi/4)(a†b + b†a)].
    Basis ordered by ascending n_a.
    """
    h1 = np.zeros((n + 1, n + 1), dtype=complex)
    h2 = np.zeros((n + 1, n + 1), dtype=complex)
    for k in range(n):  # a†b : |k, n-k> -> sqrt((k+1)(n-k)) |k+1, n-k-1>
        amp = math.sqrt((k + 1) * (n - k))
        h1[k + 1, k] = 1j * amp
        h1[k, k + 1] = -1j * amp
        h2[k + 1, k] = amp
        h2[k, k + 1] = amp
    return h1, h2


@dataclass(frozen=True)
class MzSequence:
    """Two-mode Mach-Zehnder: splitter, phase e^(i phi n_b) on mode b, splitter."""

    cutoff: int
    phi: float

    def sector_bs1(self, n: int) -> np.ndarray:
        h1, _ = _sector_generators(n)
        return _unitary(h1, math.pi / 4.0)

    def sector_bs2(self, n: int) -> np.ndarray:
        _, h2 = _sector_generators(n)
        return _unitary(h2, math.pi / 4.0)

    def apply(self, state: TwoModeFockState) -> TwoModeFockState:
        return mz_two_mode(state, self.phi)


def mz_two_mode(state: TwoModeFockState, phi: float) -> TwoModeFockState:
    """Run the two-mode Mach-Zehnder sequence on a Fock-space state.

    Total particle number is conserved exactly: the splitters act inside
    each total-number sector, and the phase is diagonal.  Every occupied
    sector must fit under the cutoff (otherwise the splitter would leak
    amplitude off the grid).
    """
    support = state.total_number_support()
    if support.size and int(support.max()) > state.cutoff:
        raise ValueError(
            f"cutoff {state.cutoff} cannot hold total number {int(support.max())}"
        )
    grid = np.array(state.amplitudes)
    out = np.zeros_like(grid)
    for n in support:
        na, nb = _sector_indices(int(n), state.cutoff)
        vec = grid[na, nb]
        h1, h2 = _sector_generators(int(n))
        vec = _unitary(h1, math.pi / 4.0) @ vec
        vec = np.exp(1j * phi * nb) * vec
        vec = _unitary(h2, math.pi / 4.0) @ vec
        out[na, nb] = vec
    return TwoModeFockState(state.cutoff, out, state.truncation_deficit)


def _mode_numbers(cutoff: int, mode: str) -> np.ndarray:
    n = np.arange(cutoff + 1)
    if mode == "a":
        return np.repeat(n, cutoff + 1).reshape(cutoff + 1, cutoff + 1)
    if mode == "b":
        return np.tile(n, (cutoff + 1, 1))
    raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")


@dataclass(frozen=True)
class ParityOperator:
    """exp(i pi n_mode): diagonal with eigenvalues +-1."""

    mode: str
    cutoff: int

    def diagonal(self) -> np.ndarray:
        return (-1.0) ** _mode_numbers(self.cutoff, self.mode).reshape(-1)

    def observable(self) -> Observable:
        return Observable(np.diag(self.diagonal()), BasisTag("fock", self.cutoff))


def parity_operator(mode: str, cutoff: int) -> Observable:
    return ParityOperator(mode, cutoff).observable()


def number_operator(mode: str, cutoff: int) -> Observable:
    """Occupation number of one mode as a diagonal observable."""
    diag = _mode_numbers(cutoff, mode).reshape(-1).astype(float)
    return Observable(np.diag(diag), BasisTag("fock", cutoff))


def parity_expectation(state: TwoModeFockState, mode: str) -> float:
    """<exp(i pi n_mode)> = sum over occupations of (-1)^n_mode |c|^2."""
    signs = (-1.0) ** _mode_numbers(state.cutoff, mode)
    return float(np.sum(signs * np.abs(state.amplitudes) ** 2))


def parity_sector_povm(mode: str, cutoff: int) -> Povm:
    """Two-outcome POVM projecting onto the +1 / -1 parity sectors of a mode."""
    signs = (-1.0) ** _mode_numbers(cutoff, mode).reshape(-1)
    even = np.diag((signs > 0).astype(complex))
    odd = np.diag((signs < 0).astype(complex))
    return Povm((even, odd), BasisTag("fock", cutoff))


def phase_sweep(
    state_family,
    povm: Povm,
    observable: Observable,
    phi_grid,
    repetitions: int = 1,
) -> list[PrecisionReport]:
    """Evaluate all precision figures over a phase grid.

    For each grid point: classical Fisher information of the POVM
    outcome distribution, quantum Fisher information of the state
    family, the error-propagation uncertainty of the readout
    observable, and the (quantum) Cramer-Rao bounds at ``repetitions``.
    Reports are returned in grid order.
    """
    grid = np.atleast_1d(np.asarray(phi_grid, dtype=float))
    if grid.size == 0:
        raise ValueError("phase grid must be non-empty")
    family = povm_family(state_family, povm)

    def signal(theta):
        return moments(state_family(theta), observable)[0]

    def noise(theta):
        return math.sqrt(moments(state_family(theta), observable)[1])

    reports = []
    for phi in grid:
        fisher = classical_fisher(family, phi)
        qfi = qfi_from_family(state_family, phi)
        prop = error_propagation(signal, noise, phi)
        reports.append(
            PrecisionReport(
                theta=float(phi),
                classical_fisher=fisher,
                quantum_fisher=qfi,
                repetitions=repetitions,
                crb=cramer_rao(fisher, repetitions),
                qcrb=cramer_rao(qfi, repetitions),
                error_prop=prop.value,
                stationary=prop.stationary,
            )
        )
    return reports
