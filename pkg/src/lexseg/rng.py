"""Portable 64-bit random numbers for reproducible shuffling.

The generator is splitmix64 (Steele, Lea & Flood's SplittableRandom mixer):
a counter advanced by the golden-ratio increment, finalized with two
xor-multiply rounds.  It is tiny, well distributed, and produces the same
stream on every platform and Python version, which is what permutation
experiments need to be replayable bit-for-bit.
"""

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit generator with unbiased bounded draws."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection sampling."""
        if n <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < threshold:
                return r % n


def derive_seed(base_seed: int, index: int) -> int:
    """Seed for run `index`, a pure function of (base_seed, index).

    This is the (index+1)-th raw output of SplitMix64(base_seed) in closed
    form, so re-running any single run of a batch reproduces exactly the
    seed it had inside the full batch.
    """
    if index < 0:
        raise ValueError("index must be nonnegative")
    return _mix((base_seed + (index + 1) * _GAMMA) & _MASK64)


def shuffled(items, seed: int) -> list:
    """Fisher-Yates shuffle driven by SplitMix64; uniform over permutations."""
    out = list(items)
    rng = SplitMix64(seed)
    for i in range(len(out) - 1, 0, -1):
        j = rng.below(i + 1)
        out[i], out[j] = out[j], out[i]
    return out
