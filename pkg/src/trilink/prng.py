"""Seeded 64-bit linear congruential generator.

All randomness in the package goes through :class:`Lcg64` so that seeded runs
are bit-reproducible on any platform and in any language:

    state_0     = seed mod 2**64
    state_{i+1} = (6364136223846793005 * state_i + 1442695040888963407) mod 2**64
    randbelow(m) = (state_{i+1} >> 32) mod m

The multiplier/increment pair is Knuth's MMIX constants.  The modulo
reduction has a bias below m / 2**32, which is irrelevant at the sizes used.
"""

MASK64 = (1 << 64) - 1
MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407


class Lcg64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (MULTIPLIER * self.state + INCREMENT) & MASK64
        return self.state

    def randbelow(self, m: int) -> int:
        if m <= 0:
            raise ValueError("randbelow() needs a positive bound")
        return (self.next_u64() >> 32) % m

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]
