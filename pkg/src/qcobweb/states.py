"""Zero-sum-amplitude (ZSA) entangled states.

The special ZSA class puts one complex amplitude c_k on each one-hot basis
string |x_k> (all zeros except a single 1 at party k), with sum(c_k) = 0 and
sum(|c_k|^2) = 1 and every c_k nonzero.  The general class allows one
amplitude per full computational-basis string and gets construction plus
validation only.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    CONSTRUCTION_TOL,
    DensityMatrix,
    LinearOperator,
    PureState,
    project,
)

ZERO_AMPLITUDE_TOL = 1e-12
MIN_RANDOM_AMPLITUDE = 1e-3  # generator rejects smaller magnitudes after normalization
IMPOSSIBLE_PROBABILITY = 1e-14
MAX_DENSE_QUBITS = 20


class ZsaValidationError(ValueError):
    """A coefficient list failed one of the ZSA invariants.

    ``residual`` carries the measured size of the violation.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = float(residual)


class ZeroSumViolation(ZsaValidationError):
    pass


class NormalizationViolation(ZsaValidationError):
    pass


class ZeroAmplitude(ZsaValidationError):
    pass


class ImpossibleOutcome(ValueError):
    """Requested measurement outcome has (numerically) zero probability."""


class AmplitudeFileError(ValueError):
    """An amplitude JSON document is structurally malformed."""


def _coefficient_array(coeffs, minimum: int) -> np.ndarray:
    arr = np.array(coeffs, dtype=complex).reshape(-1)
    if arr.size < minimum:
        raise ValueError(f"need at least {minimum} coefficients, got {arr.size}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("coefficients must be finite")
    return arr


def _check_sum_and_norm(arr: np.ndarray) -> None:
    total = complex(arr.sum())
    if abs(total) > CONSTRUCTION_TOL:
        raise ZeroSumViolation(
            f"coefficients sum to {total!r} (|sum| = {abs(total):.6e}, required 0)", abs(total)
        )
    sq = float(np.vdot(arr, arr).real)
    if abs(sq - 1.0) > CONSTRUCTION_TOL:
        raise NormalizationViolation(
            f"squared moduli sum to {sq!r} (deviation {abs(sq - 1.0):.6e} from 1)",
            abs(sq - 1.0),
        )


@dataclass(frozen=True, eq=False)
class ZsaAmplitudes:
    """One amplitude per party: zero sum, unit norm, all entries nonzero."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _coefficient_array(self.coeffs, minimum=2)
        _check_sum_and_norm(arr)
        smallest = float(np.min(np.abs(arr)))
        if smallest <= ZERO_AMPLITUDE_TOL:
            raise ZeroAmplitude(
                f"smallest amplitude magnitude {smallest:.6e} is indistinguishable from 0",
                smallest,
            )
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def num_parties(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True, eq=False)
class GeneralZsaAmplitudes:
    """One amplitude per full basis string: zero sum and unit norm only."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _coefficient_array(self.coeffs, minimum=4)
        n = int(math.log2(arr.size))
        if 2**n != arr.size:
            raise ValueError(f"coefficient count {arr.size} is not a power of two")
        _check_sum_and_norm(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def num_qubits(self) -> int:
        return int(math.log2(self.coeffs.size))


@dataclass(frozen=True)
class UnknownQubit:
    """Qubit parametrized by polar angles: alpha = cos(theta/2), beta = sin(theta/2) e^{i phi}."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def alpha(self) -> float:
        return math.cos(self.theta / 2.0)

    @property
    def beta(self) -> complex:
        return math.sin(self.theta / 2.0) * complex(math.cos(self.phi), math.sin(self.phi))

    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def state(self) -> PureState:
        return PureState(1, self.vector())


def validate_zsa(coeffs) -> ZsaAmplitudes:
    """Validate a coefficient list, raising the specific violated invariant."""
    return ZsaAmplitudes(coeffs)


def validate_general_zsa(coeffs) -> GeneralZsaAmplitudes:
    return GeneralZsaAmplitudes(coeffs)


def one_hot_index(num_qubits: int, k: int) -> int:
    """Basis index of |x_k>: the n-bit string with a single 1 at position k."""
    if not 1 <= k <= num_qubits:
        raise ValueError(f"party index {k} out of range 1..{num_qubits}")
    return 1 << (num_qubits - k)


def build_state(z: ZsaAmplitudes) -> PureState:
    """The N-qubit state sum_k c_k |x_k>, supported only on one-hot strings."""
    n = z.num_parties
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense statevectors are limited to {MAX_DENSE_QUBITS} qubits")
    amp = np.zeros(2**n, dtype=complex)
    for k in range(1, n + 1):
        amp[one_hot_index(n, k)] = z.coeffs[k - 1]
    return PureState(n, amp)


def roots_of_unity_zsa(n: int) -> ZsaAmplitudes:
    """Amplitudes c_k = e^{2 pi i k / n} / sqrt(n), the Nth roots of unity."""
    if n < 2:
        raise ValueError(f"need at least two parties, got {n}")
    k = np.arange(1, n + 1)
    return ZsaAmplitudes(np.exp(2j * np.pi * k / n) / math.sqrt(n))


def epr_zsa() -> ZsaAmplitudes:
    """The two-party coefficients (1/sqrt2, -1/sqrt2); builds the singlet."""
    s = 1.0 / math.sqrt(2.0)
    return ZsaAmplitudes([s, -s])


def random_zsa(num_parties: int, rng: np.random.Generator) -> ZsaAmplitudes:
    """Random ZSA coefficients: complex Gaussian draws with the last entry

    fixed to minus the partial sum, rejected until every normalized magnitude
    exceeds MIN_RANDOM_AMPLITUDE.
    """
    if num_parties < 2:
        raise ValueError(f"need at least two parties, got {num_parties}")
    while True:
        c = rng.standard_normal(num_parties - 1) + 1j * rng.standard_normal(num_parties - 1)
        c = np.append(c, -c.sum())
        c /= np.linalg.norm(c)
        if np.min(np.abs(c)) >= MIN_RANDOM_AMPLITUDE:
            return ZsaAmplitudes(c)


def reduced_single(z: ZsaAmplitudes, k: int) -> DensityMatrix:
    """Single-party marginal: |c_k|^2 I + (1 - 2|c_k|^2)|0><0| = diag(1-|c_k|^2, |c_k|^2)."""
    if not 1 <= k <= z.num_parties:
        raise ValueError(f"party index {k} out of range 1..{z.num_parties}")
    p = float(abs(z.coeffs[k - 1]) ** 2)
    entries = p * np.eye(2, dtype=complex)
    entries[0, 0] += 1.0 - 2.0 * p
    return DensityMatrix(1, entries)


def reduced_pair(z: ZsaAmplitudes) -> DensityMatrix:
    """Two-party marginal of the tripartite state after tracing out party 1.

    In the pair basis {00, 01, 10, 11}: populations |c1|^2, |c3|^2, |c2|^2
    and the single coherence c2 c3* between |10> and |01>.
    """
    if z.num_parties != 3:
        raise ValueError("pair marginal is defined for the tripartite state")
    c1, c2, c3 = z.coeffs
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = abs(c1) ** 2
    m[1, 1] = abs(c3) ** 2
    m[2, 2] = abs(c2) ** 2
    m[2, 1] = c2 * np.conj(c3)
    m[1, 2] = np.conj(c2) * c3
    return DensityMatrix(2, m)


def project_qubit(state: PureState, k: int, outcome: int) -> tuple[float, PureState]:
    """Measure qubit k in the computational basis and keep the given outcome.

    Returns the Born probability and the renormalized residual state of the
    remaining qubits.  Raises ImpossibleOutcome when the probability vanishes.
    """
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    target = np.zeros(2, dtype=complex)
    target[outcome] = 1.0
    prob, residual = project(state, [k], target)
    if prob < IMPOSSIBLE_PROBABILITY:
        raise ImpossibleOutcome(
            f"outcome {outcome} on qubit {k} has probability {prob:.3e}"
        )
    return prob, PureState(state.num_qubits - 1, residual / math.sqrt(prob))


def param_count(n: int, general: bool) -> int:
    """Real parameters needed to specify a state: 2^(n+1) - 3 general, 2n - 3 special."""
    if n < 2:
        raise ValueError(f"need at least two parties, got {n}")
    return 2 ** (n + 1) - 3 if general else 2 * n - 3


def lu_phase_strip(z: ZsaAmplitudes) -> tuple[np.ndarray, list[LinearOperator]]:
    """Local-phase normal form.

    Returns the amplitude magnitudes and one diagonal phase gate per party;
    applying gate k (|1>_k -> e^{-i arg c_k} |1>_k) to the built state leaves
    the state with amplitudes |c_k|.  One-hot support makes each phase
    independently removable.
    """
    magnitudes = np.abs(z.coeffs)
    gates = [
        LinearOperator(2, np.diag([1.0, np.exp(-1j * np.angle(c))]), unitary=True)
        for c in z.coeffs
    ]
    return magnitudes, gates


def ghz_state(n: int) -> PureState:
    """(|00...0> + |11...1>)/sqrt2."""
    if n < 2:
        raise ValueError(f"need at least two qubits, got {n}")
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = amp[-1] = 1.0 / math.sqrt(2.0)
    return PureState(n, amp)


def w_state(n: int) -> PureState:
    """(1/sqrt n) sum_k |x_k>."""
    if n < 2:
        raise ValueError(f"need at least two qubits, got {n}")
    amp = np.zeros(2**n, dtype=complex)
    for k in range(1, n + 1):
        amp[one_hot_index(n, k)] = 1.0 / math.sqrt(n)
    return PureState(n, amp)


def coefficients_from_document(doc) -> np.ndarray:
    """Parse {"coeffs": [[re, im], ...]} into a complex array, or raise AmplitudeFileError."""
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise AmplitudeFileError('document must be an object with a "coeffs" key')
    raw = doc["coeffs"]
    if not isinstance(raw, list) or not raw:
        raise AmplitudeFileError('"coeffs" must be a nonempty list of [re, im] pairs')
    out = np.empty(len(raw), dtype=complex)
    for i, pair in enumerate(raw):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in pair)
            or any(not math.isfinite(float(x)) for x in pair)
        ):
            raise AmplitudeFileError(f"coeffs[{i}] is not a finite [re, im] pair: {pair!r}")
        out[i] = complex(float(pair[0]), float(pair[1]))
    return out


def load_amplitudes(path) -> ZsaAmplitudes:
    """Read and validate an amplitude JSON document."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return validate_zsa(coefficients_from_document(doc))


def save_amplitudes(z: ZsaAmplitudes, path) -> None:
    """Write coefficients as JSON; float repr keeps full double precision."""
    doc = {"coeffs": [[float(c.real), float(c.imag)] for c in z.coeffs]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
