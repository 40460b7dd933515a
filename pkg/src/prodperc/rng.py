"""Deterministic random streams shared by every sampler in the package.

The generator stack is pinned down to the bit so that an independent
implementation in any language can reproduce every experiment stream:

* ``splitmix64(x)`` is the usual finalizer: add the golden-ratio constant,
  then two xor-multiply mixing rounds and a final xor-shift.  Per-trial
  seeds are derived as ``splitmix64(base_seed XOR trial_index)``.
* The working generator is xoshiro256**, seeded with four successive
  splitmix64 outputs obtained by stepping the splitmix64 state from the
  64-bit seed.
* Uniform doubles take the top 53 bits of a 64-bit word:
  ``(word >> 11) * 2**-53``.
* Bounded integers use rejection sampling: draw 64-bit words until one
  falls below the largest multiple of the bound, then reduce modulo the
  bound.  No bias, no platform dependence.
* Shuffles are Fisher-Yates from the last index downwards, with
  ``j = next_below(i + 1)``.
"""

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """One splitmix64 output for state ``x`` (state advance included)."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def derive_trial_seed(base_seed: int, trial_index: int) -> int:
    """Seed for one trial: ``splitmix64(base_seed XOR trial_index)``."""
    if trial_index < 0:
        raise ValueError("trial_index must be non-negative")
    return splitmix64((base_seed ^ trial_index) & MASK64)


def split_seeds(seed: int, count: int) -> list[int]:
    """First ``count`` outputs of the splitmix64 sequence started at ``seed``.

    Used to derive independent sub-stream seeds, e.g. the two exposure
    rounds of a double exposure.
    """
    out = []
    state = seed & MASK64
    for _ in range(count):
        state = (state + _GOLDEN) & MASK64
        z = ((state ^ (state >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        out.append(z ^ (z >> 31))
    return out


class Xoshiro256StarStar:
    """xoshiro256** with the reference update rule, seeded via splitmix64."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        self.s0, self.s1, self.s2, self.s3 = split_seeds(seed, 4)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        x = (s1 * 5) & MASK64
        result = (((x << 7) | (x >> 57)) & MASK64) * 9 & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        self.s0 = s0
        self.s1 = s1
        self.s2 = s2
        self.s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
        return result

    def next_double(self) -> float:
        """Uniform in [0, 1) with 53 random mantissa bits."""
        return (self.next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("bound must be positive")
        threshold = ((1 << 64) // n) * n
        while True:
            x = self.next_u64()
            if x < threshold:
                return x % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, last index downwards."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]
