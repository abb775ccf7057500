#!/usr/bin/env python3
"""Search and vet primitive polynomials over GF(2).

Polynomials are ints: bit i is the coefficient of x^i. A polynomial of
degree n is primitive iff it is irreducible and x has order 2^n - 1
modulo it. Prints C++ table rows for include/qclat/poly_table.inc.
"""
import sys
from sympy import factorint, primefactors


def mulmod(a, b, g, n):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> n) & 1:
            a ^= g
    return r


def powmod(e, g, n):
    r, base = 1, 2 % g if n > 1 else 2
    while e:
        if e & 1:
            r = mulmod(r, base, g, n)
        base = mulmod(base, base, g, n)
        e >>= 1
    return r


def gcd(a, b):
    while b:
        while a and a.bit_length() >= b.bit_length():
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def x_pow_2k(k, g, n):
    r = 2
    for _ in range(k):
        r = mulmod(r, r, g, n)
    return r


def irreducible(g, n):
    if x_pow_2k(n, g, n) != 2:
        return False
    for r in primefactors(n):
        if gcd(x_pow_2k(n // r, g, n) ^ 2, g) != 1:
            return False
    return True


def primitive(g, n, primes):
    if not g & 1 or not irreducible(g, n):
        return False
    order = (1 << n) - 1
    return all(powmod(order // p, g, n) != 1 for p in primes)


def sparse_candidates(n):
    for k in range(1, n):
        yield (1 << n) | (1 << k) | 1
    for a in range(3, n):
        for b in range(2, a):
            for c in range(1, b):
                yield (1 << n) | (1 << a) | (1 << b) | (1 << c) | 1


def find(n, count):
    primes = list(factorint((1 << n) - 1).keys())
    out = []
    for g in sparse_candidates(n):
        if primitive(g, n, primes):
            out.append(g)
            if len(out) == count:
                break
    return out


if __name__ == "__main__":
    degrees = [int(a) for a in sys.argv[1:]] or list(range(2, 65)) + [256, 258]
    for n in degrees:
        for g in find(n, 2 if n <= 64 else 1):
            taps = [i for i in range(n + 1) if (g >> i) & 1]
            print("{%d, {%s}}," % (n, ", ".join(map(str, reversed(taps)))), flush=True)
