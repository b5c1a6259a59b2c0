"""Disentangling the unknown qubit from an output state: obstruction and odds.

No isometry (even a joint one with ancillas) can peel the unknown qubit off
the output state exactly: acting on the outputs for |psi> and its orthogonal
complement, inner-product preservation would force
2 N(alpha) N(beta) alpha beta* Re(c2 c3*) = 0.  The modulus of that quantity
is the obstruction value; it vanishes only at the poles (theta in {0, pi})
or when Re(c2 c3*) = 0, which IS reachable with all amplitudes nonzero
(for example c2 = a, c3 = ia).

A nonlocal probabilistic recovery exists: CNOT across the pair, then measure
the control in the |+->  basis.  The |+> branch restores |psi> exactly with
probability P = |c1|^2 N(alpha)^2 / 2, which exceeds 1/2 exactly when
Re(c2* c3) > 0.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .linalg import LinearOperator, PureState, apply_gate, project, state_fidelity
from .protocol import CobwebState, normalization_constants, target_vector
from .states import UnknownQubit, ZsaAmplitudes

CNOT = LinearOperator(4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], unitary=True)
_S = 1.0 / math.sqrt(2.0)
PLUS = np.array([_S, _S], dtype=complex)
MINUS = np.array([_S, -_S], dtype=complex)


@dataclass(frozen=True, eq=False)
class ObstructionReport:
    """Closed-form obstruction modulus, its inner-product oracle, and the inputs."""

    value: float
    oracle_value: float
    theta: float
    phi: float
    coeffs: tuple[complex, ...]

    def to_dict(self) -> dict:
        return {
            "closed_form": self.value,
            "simulated": self.oracle_value,
            "abs_difference": abs(self.value - self.oracle_value),
            "theta": self.theta,
            "phi": self.phi,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }


@dataclass(frozen=True, eq=False)
class DisentangleResult:
    """Outcome of the probabilistic CNOT recovery."""

    success_probability: float
    closed_form_probability: float
    success_state: PureState
    failure_state: PureState | None
    success_fidelity: float

    def to_dict(self) -> dict:
        return {
            "simulated_probability": self.success_probability,
            "closed_form_probability": self.closed_form_probability,
            "abs_difference": abs(self.success_probability - self.closed_form_probability),
            "success_fidelity": self.success_fidelity,
            "success_state": [[a.real, a.imag] for a in self.success_state.amplitudes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class RecoveryOddsReport:
    """Recovery probability with the sign rule P > 1/2 iff Re(c2* c3) > 0."""

    probability: float
    better_than_half: bool
    re_cross: float

    def to_dict(self) -> dict:
        return {
            "probability": self.probability,
            "better_than_half": self.better_than_half,
            "re_c2_conj_c3": self.re_cross,
            "sign": (self.re_cross > 0) - (self.re_cross < 0),
        }


def orthogonal_complement(q: UnknownQubit) -> np.ndarray:
    """The vector alpha|1> - beta*|0>, orthogonal to q's state."""
    return np.array([-np.conj(q.beta), q.alpha], dtype=complex)


def obstruction(q: UnknownQubit, z: ZsaAmplitudes) -> ObstructionReport:
    """Obstruction modulus |2 N(alpha) N(beta) alpha beta* Re(c2 c3*)|.

    The oracle builds the reference-0 outputs for |psi> and its orthogonal
    complement and takes the modulus of their normalized inner product; a
    perfect disentangler would need it to be zero.
    """
    if z.num_parties != 3:
        raise ValueError("the obstruction is computed for the tripartite output")
    n_alpha, n_beta = normalization_constants(q, z)
    re_cross = float((z.coeffs[1] * np.conj(z.coeffs[2])).real)
    value = 2.0 * n_alpha * n_beta * q.alpha * abs(q.beta) * abs(re_cross)

    v = target_vector(q.vector(), z, 0)
    v_bar = target_vector(orthogonal_complement(q), z, 0)
    oracle = float(abs(np.vdot(v, v_bar)) / (np.linalg.norm(v) * np.linalg.norm(v_bar)))
    return ObstructionReport(
        value=value,
        oracle_value=oracle,
        theta=q.theta,
        phi=q.phi,
        coeffs=tuple(complex(c) for c in z.coeffs),
    )


def cnot_disentangle(c: CobwebState) -> DisentangleResult:
    """CNOT (first pair qubit controls the second), then measure the control in |+->.

    The |+> branch leaves the target qubit exactly in |psi>; the closed-form
    success probability (|c2|^2 + |c3|^2 + 2 Re(c2* c3)) /
    (2 (|c2|^2 + |c3|^2 + 2 alpha^2 Re(c2* c3))) must match the simulated
    branch probability.
    """
    if c.zsa.num_parties != 3:
        raise ValueError("the CNOT recovery acts on the two-qubit output")
    if c.reference_bit != 0:
        raise ValueError("the CNOT recovery is defined for reference bit 0")
    after = apply_gate(c.vector, (1, 2), CNOT)
    p_plus, res_plus = project(after, [1], PLUS)
    p_minus, res_minus = project(after, [1], MINUS)
    success_state = PureState(1, res_plus / math.sqrt(p_plus))
    failure_state = None if p_minus < 1e-14 else PureState(1, res_minus / math.sqrt(p_minus))

    a2 = float(abs(c.zsa.coeffs[1]) ** 2)
    a3 = float(abs(c.zsa.coeffs[2]) ** 2)
    re_cross = float((np.conj(c.zsa.coeffs[1]) * c.zsa.coeffs[2]).real)
    closed = (a2 + a3 + 2.0 * re_cross) / (2.0 * (a2 + a3 + 2.0 * c.qubit.alpha**2 * re_cross))

    return DisentangleResult(
        success_probability=p_plus,
        closed_form_probability=closed,
        success_state=success_state,
        failure_state=failure_state,
        success_fidelity=state_fidelity(success_state, c.qubit.state()),
    )


def success_probability_sign(z: ZsaAmplitudes, q: UnknownQubit) -> RecoveryOddsReport:
    """Recovery odds and the sign rule, for theta strictly inside (0, pi).

    Raises RuntimeError if the computed probability ever disagrees with the
    sign of Re(c2* c3); the two are algebraically equivalent.
    """
    if z.num_parties != 3:
        raise ValueError("recovery odds are computed for the tripartite output")
    if q.theta in (0.0, math.pi):
        raise ValueError("theta must lie strictly inside (0, pi)")
    a2 = float(abs(z.coeffs[1]) ** 2)
    a3 = float(abs(z.coeffs[2]) ** 2)
    re_cross = float((np.conj(z.coeffs[1]) * z.coeffs[2]).real)
    numerator = a2 + a3 + 2.0 * re_cross
    denominator = a2 + a3 + 2.0 * q.alpha**2 * re_cross
    probability = numerator / (2.0 * denominator)
    better = probability > 0.5
    if better != (re_cross > 0.0):
        raise RuntimeError(
            f"sign rule violated: P = {probability!r} while Re(c2* c3) = {re_cross!r}"
        )
    return RecoveryOddsReport(probability=probability, better_than_half=better, re_cross=re_cross)
