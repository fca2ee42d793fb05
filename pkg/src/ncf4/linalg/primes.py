"""Word-size primality and prime enumeration for the modular code paths."""

MERSENNE_EXPONENTS = (13, 17, 19, 31)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17)


def is_prime(n: int) -> bool:
    # deterministic for n < 3.4e14 with these bases
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def prev_prime(n: int) -> int:
    """Largest prime strictly below ``n``."""
    n -= 1
    while n >= 2:
        if is_prime(n):
            return n
        n -= 1
    raise ValueError("no prime below 2")


def descending_primes(start: int = 2**31):
    """Yield primes below ``start`` in descending order."""
    p = start
    while True:
        p = prev_prime(p)
        yield p


def mersenne_exponent(p: int) -> int:
    """Return b if p = 2^b - 1 for a supported b, else 0."""
    for b in MERSENNE_EXPONENTS:
        if p == (1 << b) - 1:
            return b
    return 0
