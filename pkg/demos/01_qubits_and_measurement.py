# Single-qubit states, brackets, evolution, and the uncertainty inequality.
#
# States are unit vectors (cos phi, sin phi) for linear polarization at
# angle phi from vertical.  Everything random takes an explicit seeded
# Rng, so every number printed here is reproducible.

import math

import numpy as np

from qkdsim import (
    Ket2,
    Rng,
    apply_unitary,
    expectation,
    inner,
    measure_projective,
    polarization,
    rotation,
    uncertainty_product,
)

vertical = Ket2(1, 0)
horizontal = Ket2(0, 1)
diagonal = polarization(math.pi / 4)

# Brackets: orthogonal states pair to zero, a 45-degree state overlaps
# either axis with amplitude 1/sqrt(2).
print("(vertical | horizontal) =", inner(vertical, horizontal))
print("(vertical | diagonal)   =", inner(vertical, diagonal))

# Unitary evolution: a quarter-turn rotation swaps the axes.
print("quarter turn of vertical ->", apply_unitary(rotation(math.pi / 2), vertical))

# Born rule: measuring the diagonal state in the vertical/horizontal
# basis gives each outcome half the time.
rng = Rng(1)
draws = 100_000
ones = sum(measure_projective(diagonal, (horizontal, vertical), rng)[0] for _ in range(draws))
print(f"diagonal measured vertical {ones / draws:.4f} of the time (expect 0.5)")

# Measurement collapses the state: afterwards it is the observed basis
# state, so repeating the measurement repeats the answer.
bit, collapsed = measure_projective(diagonal, (horizontal, vertical), Rng(7))
again, _ = measure_projective(collapsed, (horizontal, vertical), Rng(8))
print("first outcome", bit, "- repeated on the collapsed state:", again)

# Observables are Hermitian matrices; expectation is the quadratic form.
weight = np.diag([1.0, -1.0])
print("expectation of diag(1,-1) on diagonal state =", expectation(weight, diagonal))

# Incompatible observables obey the uncertainty inequality.
swap = np.array([[0, 1], [1, 0]], dtype=complex)
lhs, rhs, holds = uncertainty_product(swap, weight, diagonal)
print(f"uncertainty: lhs={lhs:.4f} >= rhs={rhs:.4f} -> {holds}")
