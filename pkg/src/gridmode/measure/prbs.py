"""Maximal-length PRBS generation.

The LFSR is run in recurrence form: the new chip is the XOR of the chips
``tap`` steps back for every tap in the set, i.e. the characteristic
polynomial is x^n + sum(x^(n-tap)) + ... with n = max(tap).  The published
tap tables (used as defaults below) describe the reciprocal polynomials,
which generate the time-reversed and equally maximal sequences.

Maximality of a tap set is verified algebraically: the sequence has period
2^n - 1 iff x has multiplicative order 2^n - 1 in GF(2)[x]/(p), which is
checked with carry-less modular exponentiation against the prime factors of
2^n - 1 (simulating 2^31 chips is not an option).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import sympy

from ..errors import InvalidTaps, ParamOutOfRange
from .spectrum import TimeSeries

# one standard maximal-length tap set per register length
DEFAULT_TAPS = {
    2: (2, 1), 3: (3, 2), 4: (4, 3), 5: (5, 3), 6: (6, 5), 7: (7, 6),
    8: (8, 6, 5, 4), 9: (9, 5), 10: (10, 7), 11: (11, 9),
    12: (12, 11, 10, 4), 13: (13, 12, 11, 8), 14: (14, 13, 12, 2),
    15: (15, 14), 16: (16, 15, 13, 4), 17: (17, 14), 18: (18, 11),
    19: (19, 18, 17, 14), 20: (20, 17), 21: (21, 19), 22: (22, 21),
    23: (23, 18), 24: (24, 23, 22, 17), 25: (25, 22), 26: (26, 25, 24, 20),
    27: (27, 26, 25, 22), 28: (28, 25), 29: (29, 27), 30: (30, 29, 28, 7),
    31: (31, 28),
}


@dataclass(frozen=True)
class PrbsConfig:
    """One PRBS excitation: register length, usable bandwidth, level."""

    order: int
    f_max: float                  # Hz; chip rate is 2*f_max
    amplitude: float = 0.02      # pu
    taps: tuple = None
    seed: int = 1

    def __post_init__(self):
        if not 2 <= self.order <= 31:
            raise ParamOutOfRange(f"order {self.order} outside 2..31")
        if self.f_max <= 0 or self.amplitude <= 0:
            raise ParamOutOfRange("f_max and amplitude must be positive")
        taps = self.taps if self.taps is not None else DEFAULT_TAPS[self.order]
        taps = tuple(sorted(set(int(t) for t in taps), reverse=True))
        if not taps or taps[0] != self.order or any(t < 1 for t in taps):
            raise InvalidTaps(f"taps {taps} invalid for order {self.order}")
        object.__setattr__(self, "taps", taps)
        if not 0 < self.seed < 2 ** self.order:
            raise ParamOutOfRange("seed must be a nonzero register state")
        if not _is_maximal(self.taps, self.order):
            raise InvalidTaps(f"taps {taps} do not generate a maximal-length "
                              f"sequence for order {self.order}")

    @property
    def f_clock(self) -> float:
        return 2.0 * self.f_max

    @property
    def period_chips(self) -> int:
        return 2 ** self.order - 1

    @property
    def chip_dt(self) -> float:
        return 1.0 / self.f_clock


def _gf2_mulmod(a: int, b: int, p: int, n: int) -> int:
    """Carry-less product of a and b reduced modulo p (degree n)."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> n) & 1:
            a ^= p
    return r


def _gf2_powmod(a: int, e: int, p: int, n: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = _gf2_mulmod(r, a, p, n)
        a = _gf2_mulmod(a, a, p, n)
        e >>= 1
    return r


@functools.lru_cache(maxsize=None)
def _is_maximal(taps: tuple, order: int) -> bool:
    # characteristic polynomial of the recurrence a_t = xor(a_{t-tap})
    p = 1 << order
    for t in taps:
        p |= 1 << (order - t)
    m = 2 ** order - 1
    if _gf2_powmod(2, m, p, order) != 1:      # 2 encodes the polynomial x
        return False
    for prime in sympy.factorint(m):
        if _gf2_powmod(2, m // prime, p, order) == 1:
            return False
    return True


def generate_prbs(config: PrbsConfig) -> TimeSeries:
    """One full period of +-amplitude chips at the chip rate.

    The balance property of an m-sequence makes the period sum exactly one
    chip's worth of amplitude, and its circular autocarrelation two-valued.
    """
    n = config.order
    mask = 0
    for t in config.taps:
        mask |= 1 << (t - 1)
    reg = config.seed
    period = config.period_chips
    bits = np.empty(period, dtype=np.int8)
    for k in range(period):
        fb = bin(reg & mask).count("1") & 1
        bits[k] = fb
        reg = ((reg << 1) | fb) & ((1 << n) - 1)
    chips = np.where(bits > 0, config.amplitude, -config.amplitude)
    return TimeSeries(dt=config.chip_dt, values=chips)
