"""Shared helpers for the test suite: random states/observables and oracles."""

import math

import numpy as np

from qkdsim import Ket2, Rng


def rand_ket(rng: Rng) -> Ket2:
    """Random qubit state with complex amplitudes."""
    comps = [rng.uniform() * 2 - 1 for _ in range(4)]
    return Ket2(complex(comps[0], comps[1]), complex(comps[2], comps[3]))


def rand_hermitian(rng: Rng, scale: float = 2.0) -> np.ndarray:
    """Random 2x2 Hermitian matrix with entries of order ``scale``."""
    a = (rng.uniform() * 2 - 1) * scale
    b = (rng.uniform() * 2 - 1) * scale
    c = (rng.uniform() * 2 - 1) * scale
    d = (rng.uniform() * 2 - 1) * scale
    return np.array([[a, complex(c, d)], [complex(c, -d), b]], dtype=complex)


def eig_bounds_2x2(mat: np.ndarray):
    """Eigenvalue bracket of a 2x2 Hermitian matrix via its characteristic polynomial."""
    tr = float(np.trace(mat).real)
    det = float(np.linalg.det(mat).real)
    disc = math.sqrt(max(0.0, tr * tr - 4.0 * det))
    return (tr - disc) / 2.0, (tr + disc) / 2.0


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def shannon_entropy(probs) -> float:
    return -sum(p * math.log2(p) for p in probs if p > 0.0)


def subset_parity_information(subsets, n_bits: int, known: int, true_bits) -> float:
    """Exhaustive eavesdropper information (bits) about a subset-parity key.

    The key source is ``n_bits`` uniform bits of which the eavesdropper
    knows the first ``known`` (their true values are ``true_bits[:known]``).
    Every assignment of the remaining bits is enumerated to get her
    posterior over the final key, and every assignment of all bits for
    the key's marginal; the information is H(K) - H(K | eavesdropper).
    """
    masks = [sum(1 << i for i in subset) for subset in subsets]

    def final_key(assignment: int):
        return tuple((assignment & m).bit_count() & 1 for m in masks)

    unknown = n_bits - known
    known_mask = sum(1 << i for i in range(known) if true_bits[i])

    posterior = {}
    for x in range(1 << unknown):
        key = final_key(known_mask | (x << known))
        posterior[key] = posterior.get(key, 0) + 1
    total = float(1 << unknown)
    h_posterior = shannon_entropy([c / total for c in posterior.values()])

    marginal = {}
    for x in range(1 << n_bits):
        key = final_key(x)
        marginal[key] = marginal.get(key, 0) + 1
    total = float(1 << n_bits)
    h_marginal = shannon_entropy([c / total for c in marginal.values()])
    return h_marginal - h_posterior


def best_projective_discrimination(s0: Ket2, s1: Ket2, grid: int = 20001) -> float:
    """Brute-force oracle: best equal-prior success probability over basis angles.

    Scans projective measurements (cos phi, sin phi) / orthogonal on a
    dense angle grid; independent of the eigenbasis construction used by
    the library.
    """
    best = 0.0
    for i in range(grid):
        phi = math.pi * i / grid
        c, s = math.cos(phi), math.sin(phi)
        amp1 = c * s1.a0 + s * s1.a1  # <phi|s1>
        amp0 = -s * s0.a0 + c * s0.a1  # <phi_perp|s0>
        success = 0.5 * (abs(amp1) ** 2 + abs(amp0) ** 2)
        best = max(best, success)
    return best

