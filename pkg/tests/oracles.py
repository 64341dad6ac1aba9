"""Slow, independent reference implementations used only as test oracles."""
import math

M64 = (1 << 64) - 1


class RefXoshiro:
    """Pure-Python xoshiro256** with splitmix64 seeding."""

    def __init__(self, seed):
        x = seed & M64
        self.s = []
        for _ in range(4):
            x = (x + 0x9E3779B97F4A7C15) & M64
            z = x
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
            self.s.append(z ^ (z >> 31))

    @staticmethod
    def _rotl(x, k):
        return ((x << k) | (x >> (64 - k))) & M64

    def next(self):
        s = self.s
        result = (self._rotl((s[1] * 5) & M64, 7) * 9) & M64
        t = (s[1] << 17) & M64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = self._rotl(s[3], 45)
        return result


def bisect(f, lo, hi, tol=1e-14, max_iter=500):
    flo = f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def compensator_residual(dt, z, tau, nu0, target):
    return nu0 * dt + sum(zk * tk * (1.0 - math.exp(-dt / tk)) for zk, tk in zip(z, tau)) - target


def log_series_pmf(m, omega):
    q = omega / (omega + 1.0)
    return -q ** m / (m * math.log(1.0 - q))
