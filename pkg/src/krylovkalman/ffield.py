"""Arithmetic in the prime field GF(p) for odd word-size primes.

Field elements are plain Python ints holding the canonical residue in
``[0, p)``. Matrix kernels work on numpy ``int64`` arrays and only need
:attr:`PrimeField.p` plus the helpers here for scalar pivots.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadModulus, ZeroInverse

DEFAULT_PRIME = 65521
MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def inverse_mod(a: int, p: int) -> int:
    """Inverse of ``a`` modulo ``p`` by the extended Euclidean algorithm."""
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse modulo {p}")
    r0, r1 = p, a
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if r0 != 1:
        raise ZeroInverse(f"{a} is not invertible modulo {p}")
    return t0 % p


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p), ``2 < p < 2**31`` with p prime."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or isinstance(p, bool):
            raise BadModulus(f"modulus must be an int, got {p!r}")
        if not 2 < p < MAX_PRIME:
            raise BadModulus(f"modulus {p} outside (2, 2^31)")
        if not is_prime(p):
            raise BadModulus(f"modulus {p} is not prime")

    def __repr__(self):
        return f"GF({self.p})"

    def __call__(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        return inverse_mod(a, self.p)

    def div(self, a: int, b: int) -> int:
        return a * inverse_mod(b, self.p) % self.p

    def arith(self, op: str, a: int, b: int = 0) -> int:
        """Dispatch on an operation name: add, sub, mul or neg."""
        try:
            fn = {"add": self.add, "sub": self.sub, "mul": self.mul}[op]
        except KeyError:
            if op == "neg":
                return self.neg(a)
            raise ValueError(f"unknown field operation {op!r}") from None
        return fn(a, b)
