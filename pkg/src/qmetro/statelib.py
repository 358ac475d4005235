"""Probe-state constructors: coherent spin, GHZ/NOON, twin Fock, entangled coherent.

Collective-spin states use the ascending-m Dicke convention from
``spinops``.  Two-mode states are dense amplitude grids over occupation
pairs (n_a, n_b) up to a per-mode cutoff, flattened in lexicographic
(n_a, n_b) order.

Phase convention: every constructor returns the global-phase
representative whose first nonzero amplitude is real and positive, so
up-to-phase comparisons reduce to plain equality.

Sign convention for coherent spin states: theta = 0 is the all-down
state |J,-J>, hence <Jz> = -J cos(theta) (and <Jx> = J sin(theta) cos(phi)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .spinops import BasisTag, CollectiveSpinState

__all__ = [
    "TwoModeFockState",
    "CssParams",
    "EcsParams",
    "TruncationError",
    "css",
    "ghz",
    "twin_fock",
    "ecs",
    "ecs_branch_tail",
]

MAX_DEFICIT = 1e-10
NORM_TOL = 1e-12


class TruncationError(RuntimeError):
    """Raised when no cutoff under the hard cap meets the tail bound."""


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TwoModeFockState:
    """Amplitudes over |n_a, n_b> with 0 <= n_a, n_b <= cutoff.

    ``truncation_deficit`` is the probability weight dropped by the
    cutoff; amplitudes are NOT renormalized to hide it.
    """

    cutoff: int
    amplitudes: np.ndarray
    truncation_deficit: float = 0.0

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        amp = np.asarray(self.amplitudes, dtype=complex)
        d = self.cutoff + 1
        if amp.shape != (d, d):
            raise ValueError(f"amplitude grid must be {d}x{d}, got {amp.shape}")
        if not 0.0 <= self.truncation_deficit < MAX_DEFICIT:
            raise ValueError(
                f"truncation deficit {self.truncation_deficit!r} out of range"
            )
        norm_sq = float(np.sum(np.abs(amp) ** 2))
        if abs(norm_sq - (1.0 - self.truncation_deficit)) > NORM_TOL:
            raise ValueError(f"state not normalized: sum |c|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", _readonly(amp))

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    @property
    def basis_tag(self) -> BasisTag:
        return BasisTag("fock", self.cutoff)

    def total_number_support(self) -> np.ndarray:
        """Sorted total particle numbers n_a + n_b carrying any amplitude."""
        na, nb = np.nonzero(self.amplitudes)
        return np.unique(na + nb)


@dataclass(frozen=True)
class CssParams:
    """Polar/azimuthal angles of a coherent spin state."""

    theta: float
    phi: float


@dataclass(frozen=True)
class EcsParams:
    """Coherent amplitude and normalization of an entangled coherent state."""

    alpha: complex
    norm_factor: float

    def __post_init__(self):
        expected = 1.0 / math.sqrt(2.0 * (1.0 + math.exp(-abs(self.alpha) ** 2)))
        if abs(self.norm_factor - expected) > 1e-14:
            raise ValueError(
                f"norm factor {self.norm_factor!r} inconsistent with alpha "
                f"(expected {expected!r})"
            )

    @classmethod
    def from_alpha(cls, alpha: complex) -> "EcsParams":
        n = 1.0 / math.sqrt(2.0 * (1.0 + math.exp(-abs(alpha) ** 2)))
        return cls(complex(alpha), n)

    @property
    def mean_total_number(self) -> float:
        return 2.0 * self.norm_factor**2 * abs(self.alpha) ** 2


def _phase_normalized(amp: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real positive.

    Round-off dust far below the dominant amplitude is ignored when
    picking the reference entry.
    """
    flat = amp.reshape(-1)
    peak = np.abs(flat).max()
    if peak == 0.0:
        return amp
    idx = np.flatnonzero(np.abs(flat) > 1e-13 * peak)
    a0 = flat[idx[0]]
    return amp * (a0.conjugate() / abs(a0))


def _signed_power(base: float, exponent: int) -> tuple[float, float]:
    """(sign, log|base^exponent|); handles base = 0 and negative bases."""
    if exponent == 0:
        return 1.0, 0.0
    if base == 0.0:
        return 0.0, -math.inf
    sign = -1.0 if (base < 0.0 and exponent % 2 == 1) else 1.0
    return sign, exponent * math.log(abs(base))


def css(n_particles: int, theta: float, phi: float) -> CollectiveSpinState:
    """Coherent spin state: all N particles polarized along (theta, phi).

    Dicke amplitudes are binomial,
    c_m = sqrt(C(N, J+m)) cos^(J-m)(theta/2) sin^(J+m)(theta/2) e^(-i(J+m)phi),
    with the binomial square roots accumulated through log-gamma so that
    N >= 170 does not overflow.
    """
    n = int(n_particles)
    if n < 1:
        raise ValueError("n_particles must be >= 1")
    half = 0.5 * theta
    c, s = math.cos(half), math.sin(half)
    k = np.arange(n + 1)  # k = J + m
    log_binom_sqrt = 0.5 * (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))
    amp = np.zeros(n + 1, dtype=complex)
    for ki in range(n + 1):
        sc, lc = _signed_power(c, n - ki)
        ss, ls = _signed_power(s, ki)
        sign = sc * ss
        if sign == 0.0:
            continue
        mag = math.exp(log_binom_sqrt[ki] + lc + ls)
        amp[ki] = sign * mag * np.exp(-1j * ki * phi)
    amp /= np.linalg.norm(amp)
    return CollectiveSpinState(n, _phase_normalized(amp))


def ghz(n_particles: int, rel_phase: float = 0.0) -> CollectiveSpinState:
    """GHZ / NOON state (|J,+J> + e^(i theta) |J,-J>) / sqrt(2)."""
    n = int(n_particles)
    if n < 1:
        raise ValueError("n_particles must be >= 1")
    amp = np.zeros(n + 1, dtype=complex)
    amp[n] = 1.0 / math.sqrt(2.0)
    amp[0] = np.exp(1j * rel_phase) / math.sqrt(2.0)
    return CollectiveSpinState(n, _phase_normalized(amp))


def twin_fock(n_per_mode: int, cutoff: int | None = None) -> TwoModeFockState:
    """Twin Fock state |N>_a |N>_b.

    The cutoff must accommodate the Mach-Zehnder sequence, which can
    populate |2N, 0>; it defaults to exactly 2N.
    """
    n = int(n_per_mode)
    if n < 0:
        raise ValueError("n_per_mode must be >= 0")
    if cutoff is None:
        cutoff = 2 * n
    if cutoff < 2 * n:
        raise ValueError(f"cutoff must be >= 2N = {2 * n}, got {cutoff}")
    amp = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amp[n, n] = 1.0
    return TwoModeFockState(cutoff, amp)


def ecs_branch_tail(alpha: complex, cutoff: int) -> float:
    """Poisson weight e^(-|a|^2) sum_{n > cutoff} |a|^(2n) / n! of one branch."""
    lam = abs(alpha) ** 2
    if lam == 0.0:
        return 0.0
    n = np.arange(cutoff + 1)
    kept = np.exp(-lam + n * math.log(lam) - gammaln(n + 1))
    return max(0.0, 1.0 - float(kept.sum()))


def ecs(
    alpha: complex,
    tail_bound: float = 1e-13,
    max_cutoff: int = 512,
) -> TwoModeFockState:
    """Entangled coherent state N_a (|alpha>_a |0>_b + |0>_a |alpha>_b).

    The per-mode cutoff is the smallest one whose Poisson tail per branch
    stays below ``tail_bound``; the dropped weight is reported as the
    state's truncation deficit.
    """
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise ValueError("alpha must be finite")
    params = EcsParams.from_alpha(alpha)
    lam = abs(alpha) ** 2

    cutoff = 0
    while ecs_branch_tail(alpha, cutoff) >= tail_bound:
        cutoff += 1
        if cutoff > max_cutoff:
            raise TruncationError(
                f"no cutoff <= {max_cutoff} reaches branch tail < {tail_bound} "
                f"for |alpha|^2 = {lam}"
            )

    n = np.arange(cutoff + 1)
    # coherent branch: N_a e^(-|a|^2 / 2) a^n / sqrt(n!)
    if lam == 0.0:
        branch = np.zeros(cutoff + 1, dtype=complex)
        branch[0] = 1.0
    else:
        unit = alpha / abs(alpha)
        mag = np.exp(-0.5 * lam + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1))
        branch = mag * unit**n
    branch = params.norm_factor * branch

    amp = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amp[:, 0] += branch  # |alpha>_a |0>_b
    amp[0, :] += branch  # |0>_a |alpha>_b (shared vacuum term doubles)
    deficit = 2.0 * params.norm_factor**2 * ecs_branch_tail(alpha, cutoff)
    return TwoModeFockState(cutoff, _phase_normalized(amp), deficit)
