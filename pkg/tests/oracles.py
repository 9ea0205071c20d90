"""Slow, obviously-correct reference implementations used by the tests."""

import math


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def big_omega(n: int) -> int:
    return sum(factorize(n).values())


def liouville(n: int) -> int:
    return -1 if big_omega(n) % 2 else 1


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def mangoldt(n: int) -> float:
    f = factorize(n)
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def largest_prime_factor(n: int) -> int:
    return max(factorize(n)) if n > 1 else 1


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}
