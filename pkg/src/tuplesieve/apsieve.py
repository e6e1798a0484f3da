"""Segmented Eratosthenes sieve over the k arithmetic progressions
f_i(r + j*W), clearing candidates hit by any sieve prime.

One segment covers a single wheel residue r: byte j of the segment
stands for the candidate x(j) = r + j*W, and stays 1 only if no sieve
prime divides any form value there.  Segment length is about n/W, which
the planner keeps near the sieve bound B so a segment sits comfortably
in cache.
"""

import math
from dataclasses import dataclass

from .arith import modinv

__all__ = [
    "PlanError",
    "SievePlan",
    "make_plan",
    "EarlyAbort",
    "SieveSegment",
    "sieve_segment",
    "survivors",
    "primes_upto",
]


class PlanError(ValueError):
    pass


def primes_upto(n: int) -> list:
    """Primes <= n by a byte sieve."""
    if n < 2:
        return []
    t = bytearray([1]) * (n + 1)
    t[0] = t[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if t[p]:
            t[p * p :: p] = b"\x00" * ((n - p * p) // p + 1)
    return [i for i in range(2, n + 1) if t[i]]


@dataclass(frozen=True)
class SievePlan:
    """Sieve bound B, wheel budget, and the primes <= B.

    The primes split into wheel moduli and sieve primes only once the
    wheel is actually built; `sieve_primes` performs that split so an
    explicitly excluded wheel prime still gets sieved.
    """

    n: int
    B: int
    wheel_limit: int
    c: float | None
    primes: tuple

    def sieve_primes(self, wheel_moduli) -> list:
        skip = set(wheel_moduli)
        return [p for p in self.primes if p not in skip]


def make_plan(n: int, c: float | None = None, sieve_bound: int | None = None,
              wheel_limit: int | None = None) -> SievePlan:
    """Derive the sieve bound and enumerate its primes.

    Either pass an explicit sieve_bound, or a space exponent c > 2 which
    sets B to the power of two nearest n^(1/c) from below.  The wheel
    budget defaults to n // B.
    """
    if n < 4:
        raise PlanError(f"search bound n={n} too small to plan")
    if sieve_bound is not None:
        B = int(sieve_bound)
    elif c is not None:
        if not c > 2:
            raise PlanError(f"space exponent c={c} must exceed 2")
        B = 1 << int(math.log2(n) / c)
    else:
        raise PlanError("need either a space exponent or an explicit sieve bound")
    if B < 2:
        raise PlanError(f"sieve bound B={B} below 2")
    if wheel_limit is None:
        wheel_limit = max(2, n // B)
    return SievePlan(n=n, B=B, wheel_limit=wheel_limit, c=c,
                     primes=tuple(primes_upto(B)))


@dataclass(frozen=True)
class EarlyAbort:
    """Stop sieving a segment once live bytes drop below 1 per `min_live_per`
    positions; the density is re-checked every `check_every` primes."""

    enabled: bool = True
    min_live_per: int = 4096
    check_every: int = 64


@dataclass
class SieveSegment:
    r: int
    W: int
    j_max: int
    bits: bytearray
    sieved_to: int        # every prime <= this has been ruled out
    aborted: bool = False
    applied: int = 0      # sieve primes actually applied

    def live_count(self) -> int:
        return sum(self.bits)


def segment_length(pattern, r: int, W: int, n: int) -> int:
    """j_max + 1 where j_max is the largest j with max_i f_i(r + j*W) <= n.

    Every form constrains j, not just the first; with multipliers above 1
    the steepest form is the binding one.
    """
    j_max = None
    for a, b in pattern.forms:
        x_top = (n - b) // a
        jm = (x_top - r) // W
        j_max = jm if j_max is None else min(j_max, jm)
    return max(0, j_max + 1)


def sieve_segment(pattern, r: int, W: int, n: int, sieve_primes,
                  early_abort: EarlyAbort | None = None,
                  full_bound: int | None = None) -> SieveSegment:
    """Sieve the candidates x(j) = r + j*W, j = 0..j_max, by sieve_primes.

    For each prime p and each form with p not dividing the multiplier,
    the stricken progression starts at j0 = W^-1 * (-b*a^-1 - r) mod p
    and steps by p.  Forms whose multiplier p divides are skipped: their
    values are never 0 mod p.

    full_bound is the trial-division depth a completed sieve certifies
    (the plan's B); when early abort fires, the certified depth drops to
    just below the first unapplied prime.
    """
    length = segment_length(pattern, r, W, n)
    bits = bytearray([1]) * length
    if length == 0:
        return SieveSegment(r, W, -1, bits, sieved_to=full_bound or 0)
    if full_bound is None:
        full_bound = max(sieve_primes) if sieve_primes else 2
    j_max = length - 1
    abort = early_abort if early_abort is not None else EarlyAbort(enabled=False)
    min_live = length // abort.min_live_per if abort.enabled else -1

    applied = 0
    for p in sieve_primes:
        winv = modinv(W % p, p)
        for a, b in pattern.forms:
            if a % p == 0:
                continue
            j0 = winv * ((-b * modinv(a % p, p) - r) % p) % p
            if j0 <= j_max:
                bits[j0::p] = b"\x00" * ((j_max - j0) // p + 1)
        applied += 1
        if abort.enabled and applied % abort.check_every == 0 and applied < len(sieve_primes):
            if sum(bits) <= min_live:
                # certified depth: everything below the next unapplied prime
                depth = sieve_primes[applied] - 1
                return SieveSegment(r, W, j_max, bits, sieved_to=depth,
                                    aborted=True, applied=applied)
    return SieveSegment(r, W, j_max, bits, sieved_to=full_bound, applied=applied)


def survivors(seg: SieveSegment) -> list:
    """Candidate x values still alive, in increasing order."""
    r, W = seg.r, seg.W
    return [r + j * W for j, alive in enumerate(seg.bits) if alive]
