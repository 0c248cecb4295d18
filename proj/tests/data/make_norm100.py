"""Regenerates norm100_seed1234.csv: the first 100 draws of R's default
generator (Mersenne-Twister + Inversion) after set.seed(1234)."""
import sys

from scipy.stats import norm

MASK = 0xFFFFFFFF
I2_32M1 = 2.328306437080797e-10


class RMersenneTwister:
    def __init__(self, seed):
        seed &= MASK
        for _ in range(50):
            seed = (69069 * seed + 1) & MASK
        state = []
        for _ in range(625):
            seed = (69069 * seed + 1) & MASK
            state.append(seed)
        self.mt = state[1:]
        self.mti = 624

    def unif(self):
        n, m, mt = 624, 397, self.mt
        if self.mti >= n:
            for k in range(n):
                y = (mt[k] & 0x80000000) | (mt[(k + 1) % n] & 0x7FFFFFFF)
                mt[k] = mt[(k + m) % n] ^ (y >> 1) ^ (0x9908B0DF if y & 1 else 0)
            self.mti = 0
        y = mt[self.mti]
        self.mti += 1
        y ^= y >> 11
        y ^= (y << 7) & 0x9D2C5680
        y ^= (y << 15) & 0xEFC60000
        y ^= y >> 18
        v = y * 2.3283064365386963e-10
        # R's fixup keeps draws inside (0, 1)
        if v <= 0.0:
            return 0.5 * I2_32M1
        if 1.0 - v <= 0.0:
            return 1.0 - 0.5 * I2_32M1
        return v

    def rnorm(self):
        big = 134217728
        u = self.unif()
        u = int(big * u) + self.unif()
        return float(norm.ppf(u / big))


def main(path):
    rng = RMersenneTwister(1234)
    with open(path, "w") as f:
        f.write("x\n")
        for _ in range(100):
            f.write(repr(rng.rnorm()) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "norm100_seed1234.csv")
