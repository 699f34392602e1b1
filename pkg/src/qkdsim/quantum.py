"""Exact state-vector mechanics for one qubit and one qubit-probe pair.

States are unit vectors over the complex numbers: :class:`Ket2` for a
single polarization qubit, :class:`Ket4` for a carrier/probe product
space.  Operators are plain 2x2 / 4x4 complex numpy arrays.  Amplitudes
are kept as Python complex scalars so the per-pulse hot path (inner
products, Born-rule draws) avoids numpy call overhead; matrix-level
operations go through numpy.

Conventions
-----------
* Linear polarization at angle ``phi`` from the reference (vertical)
  axis is the real vector ``(cos phi, sin phi)``.  Vertical is ``(1, 0)``,
  horizontal ``(0, 1)``, the oblique states ``(1, +-1)/sqrt(2)``, and the
  B92 code pair ``(cos theta, +-sin theta)`` -- whose overlap is then the
  real, positive ``cos(2 theta)``.
* Measurement outcomes are selected by cumulative-probability inversion
  in a fixed order (bit 0 before bit 1; ZERO, ONE, INCONCLUSIVE), so
  equal seeds give identical outcome sequences.
* Tolerances: 1e-12 on state norms, 1e-10 on unitarity, Hermiticity and
  positivity.  Double precision on these tiny matrices is far better
  than either bound.
"""

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import (
    BadBasis,
    DegenerateProjection,
    DimensionMismatch,
    NotHermitian,
    NotUnitary,
    ThetaOutOfRange,
    ZeroVector,
)

NORM_TOL = 1e-12
OPERATOR_TOL = 1e-10
_ZERO_NORM_SQ = 1e-24


class Ket2:
    """Unit state vector of a single qubit: amplitudes over basis states 0 and 1.

    Construction rescales the input to unit norm, so any nonzero
    amplitude pair represents a valid state.
    """

    __slots__ = ("a0", "a1")

    def __init__(self, a0, a1):
        a0 = complex(a0)
        a1 = complex(a1)
        n2 = a0.real * a0.real + a0.imag * a0.imag + a1.real * a1.real + a1.imag * a1.imag
        if n2 < _ZERO_NORM_SQ:
            raise ZeroVector("cannot normalize the zero vector")
        if n2 != 1.0:
            inv = 1.0 / math.sqrt(n2)
            a0 *= inv
            a1 *= inv
        self.a0 = a0
        self.a1 = a1

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=complex)

    def norm(self) -> float:
        return math.sqrt(abs(self.a0) ** 2 + abs(self.a1) ** 2)

    def orthogonal(self) -> "Ket2":
        """The unique (up to phase) state orthogonal to this one."""
        return Ket2(-self.a1.conjugate(), self.a0.conjugate())

    def __repr__(self):
        return f"Ket2({self.a0:.6g}, {self.a1:.6g})"


class Ket4:
    """Unit state vector of a carrier qubit paired with a probe qubit.

    Amplitude index is ``2 * carrier_bit + probe_bit``.
    """

    __slots__ = ("c",)

    def __init__(self, c0, c1, c2, c3):
        c = (complex(c0), complex(c1), complex(c2), complex(c3))
        n2 = sum(z.real * z.real + z.imag * z.imag for z in c)
        if n2 < _ZERO_NORM_SQ:
            raise ZeroVector("cannot normalize the zero vector")
        if n2 != 1.0:
            inv = 1.0 / math.sqrt(n2)
            c = tuple(z * inv for z in c)
        self.c = c

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.c, dtype=complex)

    def norm(self) -> float:
        return math.sqrt(sum(abs(z) ** 2 for z in self.c))

    def __repr__(self):
        return "Ket4(" + ", ".join(f"{z:.6g}" for z in self.c) + ")"


def polarization(angle: float) -> Ket2:
    """Linear-polarization state at ``angle`` radians from the reference axis."""
    return Ket2(math.cos(angle), math.sin(angle))


def inner(u, v) -> complex:
    """Bracket of two states, conjugate-linear in the first argument.

    Raises
    ------
    DimensionMismatch
        If the operands do not live in the same space.
    """
    if isinstance(u, Ket2) and isinstance(v, Ket2):
        return u.a0.conjugate() * v.a0 + u.a1.conjugate() * v.a1
    if isinstance(u, Ket4) and isinstance(v, Ket4):
        return sum(a.conjugate() * b for a, b in zip(u.c, v.c))
    raise DimensionMismatch(f"cannot pair {type(u).__name__} with {type(v).__name__}")


def states_equal(u: Ket2, v: Ket2, tol: float = OPERATOR_TOL) -> bool:
    """True when two unit states coincide up to a global phase."""
    return abs(inner(u, v)) >= 1.0 - tol


def rotation(phi: float) -> np.ndarray:
    """Polarization rotation by ``phi`` radians (a real unitary)."""
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _unitarity_defect(mat: np.ndarray) -> float:
    eye = np.eye(mat.shape[0])
    return float(np.max(np.abs(mat.conj().T @ mat - eye)))


def _hermiticity_defect(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat - mat.conj().T)))


def apply_unitary(mat: np.ndarray, state):
    """Evolve a state by a unitary matrix of matching dimension.

    Raises
    ------
    NotUnitary
        If ``mat`` fails the 1e-10 unitarity check.
    DimensionMismatch
        If the matrix dimension does not match the state.
    """
    mat = np.asarray(mat, dtype=complex)
    if isinstance(state, Ket2):
        if mat.shape != (2, 2):
            raise DimensionMismatch(f"matrix shape {mat.shape} does not act on a qubit")
        defect = _unitarity_defect(mat)
        if defect > OPERATOR_TOL:
            raise NotUnitary(f"matrix deviates from unitarity by {defect:.3e}")
        a0, a1 = state.a0, state.a1
        return Ket2(mat[0, 0] * a0 + mat[0, 1] * a1, mat[1, 0] * a0 + mat[1, 1] * a1)
    if isinstance(state, Ket4):
        if mat.shape != (4, 4):
            raise DimensionMismatch(f"matrix shape {mat.shape} does not act on a carrier-probe pair")
        defect = _unitarity_defect(mat)
        if defect > OPERATOR_TOL:
            raise NotUnitary(f"matrix deviates from unitarity by {defect:.3e}")
        out = mat @ state.vec
        return Ket4(*out)
    raise DimensionMismatch(f"cannot evolve {type(state).__name__}")


def _check_basis(basis):
    b0, b1 = basis
    if not (isinstance(b0, Ket2) and isinstance(b1, Ket2)):
        raise BadBasis("basis must be a pair of qubit states")
    if abs(inner(b0, b1)) > OPERATOR_TOL:
        raise BadBasis(f"basis states are not orthogonal: |<b0|b1>| = {abs(inner(b0, b1)):.3e}")
    return b0, b1


def measure_projective(state: Ket2, basis, rng):
    """Projective measurement of ``state`` in an orthonormal basis pair.

    Parameters
    ----------
    basis : (Ket2, Ket2)
        Basis states indexed by their bit label: ``basis[b]`` is the
        state reported as outcome ``b``.
    rng : Rng
        Source for the single Born-rule draw.

    Returns
    -------
    (bit, collapsed) : (int, Ket2)
        Outcome ``b`` occurs with probability ``|<basis[b]|state>|**2``
        and leaves the system in ``basis[b]``.
    """
    b0, b1 = _check_basis(basis)
    p0 = abs(inner(b0, state)) ** 2
    bit = 0 if rng.uniform() < p0 else 1
    return bit, (b0 if bit == 0 else b1)


class PovmOutcome(IntEnum):
    ZERO = 0
    ONE = 1
    INCONCLUSIVE = 2


@dataclass(frozen=True, eq=False)
class PovmSet:
    """Three-element positive operator measure for unambiguous code-state readout.

    ``a_plus`` fires only for the plus code state (outcome ONE),
    ``a_minus`` only for the minus code state (outcome ZERO), and
    ``a_inconclusive`` absorbs the rest.
    """

    a_plus: np.ndarray
    a_minus: np.ndarray
    a_inconclusive: np.ndarray
    theta: float

    def elements(self):
        """Elements in outcome order: ZERO, ONE, INCONCLUSIVE."""
        return (self.a_minus, self.a_plus, self.a_inconclusive)


def quad_form(mat: np.ndarray, state: Ket2) -> float:
    """Real quadratic form <state|mat|state> of a Hermitian 2x2 matrix."""
    a0, a1 = state.a0, state.a1
    m00 = complex(mat[0, 0])
    m01 = complex(mat[0, 1])
    m10 = complex(mat[1, 0])
    m11 = complex(mat[1, 1])
    return (a0.conjugate() * (m00 * a0 + m01 * a1) + a1.conjugate() * (m10 * a0 + m11 * a1)).real


def _positivity_defect(mat: np.ndarray) -> float:
    # 2x2 Hermitian positivity via trace and determinant; avoids an eigensolver.
    tr = float(np.trace(mat).real)
    det = float(np.linalg.det(mat).real)
    return max(-tr, -det, 0.0)


def build_povm(theta: float) -> PovmSet:
    """Construct the unambiguous-discrimination POVM for code states at +-theta.

    The plus element annihilates the minus code state and vice versa::

        a_plus  = (1 - |minus><minus|) / (1 + <plus|minus>)
        a_minus = (1 - |plus><plus|)   / (1 + <plus|minus>)
        a_inconclusive = 1 - a_plus - a_minus

    Raises
    ------
    ThetaOutOfRange
        Unless 0 < theta < pi/4.
    """
    if not 0.0 < theta < math.pi / 4:
        raise ThetaOutOfRange(f"theta must lie in (0, pi/4), got {theta!r}")
    plus = polarization(theta)
    minus = polarization(-theta)
    overlap = math.cos(2.0 * theta)
    eye = np.eye(2, dtype=complex)
    proj_plus = np.outer(plus.vec, plus.vec.conj())
    proj_minus = np.outer(minus.vec, minus.vec.conj())
    a_plus = (eye - proj_minus) / (1.0 + overlap)
    a_minus = (eye - proj_plus) / (1.0 + overlap)
    a_inc = eye - a_plus - a_minus
    povm = PovmSet(a_plus, a_minus, a_inc, theta)

    completeness = float(np.max(np.abs(a_plus + a_minus + a_inc - eye)))
    if completeness > OPERATOR_TOL:
        raise NotHermitian(f"POVM completeness defect {completeness:.3e}")
    for el in povm.elements():
        if _hermiticity_defect(el) > OPERATOR_TOL:
            raise NotHermitian("POVM element is not Hermitian")
        if _positivity_defect(el) > OPERATOR_TOL:
            raise NotHermitian("POVM element is not positive semidefinite")
    return povm


def povm_probabilities(state: Ket2, povm: PovmSet):
    """Outcome probabilities (ZERO, ONE, INCONCLUSIVE) for a given state."""
    return tuple(quad_form(el, state) for el in povm.elements())


def measure_povm(state: Ket2, povm: PovmSet, rng) -> PovmOutcome:
    """Sample one POVM outcome; probabilities are the three quadratic forms."""
    probs = povm_probabilities(state, povm)
    if abs(sum(probs) - 1.0) > OPERATOR_TOL:
        raise NotHermitian(f"POVM probabilities sum to {sum(probs)!r}")
    return PovmOutcome(rng.pick_weighted(probs))


def tensor(carrier: Ket2, probe: Ket2) -> Ket4:
    """Product state of a carrier qubit and a probe qubit."""
    return Ket4(
        carrier.a0 * probe.a0,
        carrier.a0 * probe.a1,
        carrier.a1 * probe.a0,
        carrier.a1 * probe.a1,
    )


def measure_carrier(joint: Ket4, basis, rng):
    """Projectively measure the carrier half of a joint state.

    Returns
    -------
    (bit, residual) : (int, Ket2)
        Outcome probability is the squared norm of the projected
        component; ``residual`` is the renormalized post-measurement
        probe state.

    Raises
    ------
    DegenerateProjection
        If the drawn component has numerically zero norm.
    """
    b0, b1 = _check_basis(basis)
    c = joint.c

    def project(b):
        amp0 = b.a0.conjugate() * c[0] + b.a1.conjugate() * c[2]
        amp1 = b.a0.conjugate() * c[1] + b.a1.conjugate() * c[3]
        return amp0, amp1

    amps0 = project(b0)
    amps1 = project(b1)
    p0 = abs(amps0[0]) ** 2 + abs(amps0[1]) ** 2
    bit = 0 if rng.uniform() < p0 else 1
    amp = amps0 if bit == 0 else amps1
    norm_sq = abs(amp[0]) ** 2 + abs(amp[1]) ** 2
    if norm_sq < _ZERO_NORM_SQ:
        raise DegenerateProjection("projected component has zero norm")
    return bit, Ket2(amp[0], amp[1])


def product_factors(joint: Ket4, tol: float = 1e-8):
    """Split a product state back into (carrier, probe) factors.

    Raises
    ------
    ValueError
        If the state is entangled beyond ``tol`` (mixed residuals are
        out of scope for this package).
    """
    mat = np.array([[joint.c[0], joint.c[1]], [joint.c[2], joint.c[3]]])
    u, s, vh = np.linalg.svd(mat)
    if s[1] > tol * max(s[0], 1.0):
        raise ValueError(f"state is entangled (secondary singular value {s[1]:.3e})")
    return Ket2(u[0, 0], u[1, 0]), Ket2(vh[0, 0], vh[0, 1])


def measure_povm_carrier(joint: Ket4, povm: PovmSet, rng):
    """Apply a carrier-side POVM to a joint product state.

    Outcome ``i`` occurs with probability ``<J|(A_i (x) 1)|J>``.  The
    probe factor of a product state is untouched by any carrier
    measurement, so the residual is exact; entangled inputs are
    rejected by :func:`product_factors`.
    """
    mat = np.array([[joint.c[0], joint.c[1]], [joint.c[2], joint.c[3]]])
    probs = tuple(float(np.trace(mat.conj().T @ el @ mat).real) for el in povm.elements())
    if abs(sum(probs) - 1.0) > OPERATOR_TOL:
        raise NotHermitian(f"POVM probabilities sum to {sum(probs)!r}")
    _, probe = product_factors(joint)
    outcome = PovmOutcome(rng.pick_weighted(probs))
    return outcome, probe


def _require_hermitian(mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    defect = _hermiticity_defect(mat)
    if defect > OPERATOR_TOL:
        raise NotHermitian(f"matrix deviates from self-adjointness by {defect:.3e}")
    return mat


def expectation(observable: np.ndarray, state: Ket2) -> float:
    """Mean observed value <state|observable|state> of a Hermitian matrix."""
    return quad_form(_require_hermitian(observable), state)


def uncertainty_product(obs_a: np.ndarray, obs_b: np.ndarray, state: Ket2):
    """Evaluate both sides of the uncertainty inequality for two observables.

    Returns
    -------
    (lhs, rhs, holds)
        ``lhs`` is the product of the two mean-squared deviations,
        ``rhs`` is ``|<[A, B]>|**2 / 4``, and ``holds`` reports
        ``lhs >= rhs - 1e-9``.
    """
    mat_a = _require_hermitian(obs_a)
    mat_b = _require_hermitian(obs_b)
    eye = np.eye(2, dtype=complex)
    dev_a = mat_a - expectation(mat_a, state) * eye
    dev_b = mat_b - expectation(mat_b, state) * eye
    var_a = quad_form(dev_a @ dev_a, state)
    var_b = quad_form(dev_b @ dev_b, state)
    lhs = var_a * var_b
    comm = mat_a @ mat_b - mat_b @ mat_a
    vec = state.vec
    mean_comm = complex(vec.conj() @ (comm @ vec))
    rhs = 0.25 * abs(mean_comm) ** 2
    return lhs, rhs, lhs >= rhs - 1e-9
