"""Overflow-checked modular arithmetic on integers below 2**127.

Python integers never wrap, so "overflow" here means exceeding the
declared width cap.  Every value stored or returned by this package is
kept under WIDE_MAX; intermediate products may exceed it freely.
"""

WIDE_MAX = 2**127 - 1


class NotInvertibleError(ValueError):
    """gcd(a, m) != 1, so a has no inverse mod m."""


def check_wide(value: int, what: str = "value") -> int:
    """Validate that value fits the supported integer width."""
    if not 0 <= value <= WIDE_MAX:
        raise OverflowError(f"{what}={value} outside [0, 2^127)")
    return value


def mulmod(a: int, b: int, m: int) -> int:
    """(a * b) mod m, exact for any modulus below 2^127."""
    if m == 0:
        raise ZeroDivisionError("modulus is zero")
    check_wide(a, "a")
    check_wide(b, "b")
    check_wide(m, "m")
    return a * b % m


def powmod(a: int, e: int, m: int) -> int:
    """a**e mod m by square-and-multiply on top of mulmod."""
    if m == 0:
        raise ZeroDivisionError("modulus is zero")
    check_wide(a, "a")
    check_wide(e, "e")
    check_wide(m, "m")
    if m == 1:
        return 0
    result = 1
    base = a % m
    while e:
        if e & 1:
            result = result * base % m
        base = base * base % m
        e >>= 1
    return result


def modinv(a: int, m: int) -> int:
    """Inverse of a mod m via extended Euclid.

    Raises NotInvertibleError when gcd(a, m) != 1; callers that sieve
    by a prime dividing a form's multiplier must handle that case.
    """
    if m < 2:
        raise ValueError(f"modulus m={m} must be >= 2")
    check_wide(a, "a")
    check_wide(m, "m")
    a %= m
    # invariants: old_r = old_s*a (mod m), r = s*a (mod m)
    old_r, r = a, m
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise NotInvertibleError(f"gcd({a}, {m}) = {old_r}, not invertible")
    return old_s % m
