"""Deterministic random source used by every sampling operation.

All randomness in the package flows through :class:`Rng` so that a
session is a pure function of its seed.  The generator is the Mersenne
Twister behind :class:`random.Random`, and only its ``random()`` output
is consumed -- the one primitive whose sequence CPython guarantees to be
reproducible for a given seed across versions and platforms.  Every
helper below (coins, bounded integers, permutations, subsets) is built
on that single primitive, so transcripts replay bit-for-bit anywhere.
"""

import random


class Rng:
    """Seeded random stream with the handful of draws the protocols need."""

    __slots__ = ("seed", "_random")

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._random = random.Random(self.seed).random

    def uniform(self) -> float:
        """One draw in [0, 1)."""
        return self._random()

    def coin(self) -> int:
        """Fair bit: 1 with probability 1/2."""
        return 1 if self._random() < 0.5 else 0

    def below(self, n: int) -> int:
        """Integer in [0, n). Bias from the float path is ~2**-53, irrelevant here."""
        v = int(self._random() * n)
        return n - 1 if v >= n else v

    def pick_weighted(self, weights) -> int:
        """Index drawn by cumulative-probability inversion, in list order.

        The last bucket absorbs any rounding slack so a draw always lands.
        """
        u = self._random()
        acc = 0.0
        for i, w in enumerate(weights):
            acc += w
            if u < acc:
                return i
        return len(weights) - 1

    def permutation(self, n: int) -> list:
        """Fisher-Yates shuffle of range(n)."""
        order = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            order[i], order[j] = order[j], order[i]
        return order

    def sample_positions(self, n: int, m: int) -> list:
        """m distinct positions out of range(n), returned in ascending order."""
        return sorted(self.permutation(n)[:m])

    def nonempty_subset(self, n: int) -> list:
        """Ascending positions of a uniformly random nonempty subset of range(n).

        Each index is included with probability 1/2; empty draws are rejected.
        """
        while True:
            subset = [i for i in range(n) if self._random() < 0.5]
            if subset:
                return subset
