"""Univariate polynomial arithmetic and factorization over GF(p).

Polynomials are coefficient lists, lowest degree first, entries in [0, p).
Used for splitting zero-dimensional schemes into Galois orbits and for
finding rational points.
"""

from __future__ import annotations

import random


def trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f) -> int:
    return len(f) - 1


def umul(f, g, p):
    if not f or not g:
        return []
    out = [0] *(len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def uadd(f, g, p):
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] = a
    for i, b in enumerate(g):
        out[i] = (out[i] + b) % p
    return trim(out)


def uscale(f, c, p):
    c %= p
    return trim([a * c % p for a in f])


def udivmod(f, g, p):
    f = list(f)
    g = trim(list(g))
    if not g:
        raise ZeroDivisionError
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and trim(f):
        if len(f) < len(g):
            break
        c = f[-1] * inv % p
        d = len(f) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            f[d + i] = (f[d + i] - c * b) % p
        f = trim(f)
    return trim(q), trim(f)


def ugcd(f, g, p):
    f, g = trim(list(f)), trim(list(g))
    while g:
        _, r = udivmod(f, g, p)
        f, g = g, r
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [a * inv % p for a in f]
    return f


def upow_mod(base, e, mod, p):
    result = [1]
    b = list(base)
    while e:
        if e & 1:
            result = udivmod(umul(result, b, p), mod, p)[1]
        b = udivmod(umul(b, b, p), mod, p)[1]
        e >>= 1
    return result


def is_squarefree(f, p) -> bool:
    df = uderiv(f, p)
    return degree(ugcd(f, df, p)) <= 0 if df else False


def uderiv(f, p):
    return trim([(i * c) % p for i, c in enumerate(f)][1:])


def distinct_degree_factor(f, p):
    """[(d, product of irreducible factors of degree d)], f squarefree monic."""
    out = []
    h = [0, 1]  # x
    v = list(f)
    d = 0
    while degree(v) > 0:
        d += 1
        if 2 * d > degree(v):
            out.append((degree(v), v))
            break
        h = upow_mod(h, p, v, p)
        g = ugcd(uadd(h, uscale([0, 1], p - 1, p), p), v, p)
        if degree(g) > 0:
            out.append((d, g))
            v = udivmod(v, g, p)[0]
            h = udivmod(h, v, p)[1]
    return out


def equal_degree_split(f, d, p, rng: random.Random):
    """One nontrivial factor of f, a product of degree-d irreducibles."""
    n = degree(f)
    if n == d:
        return None
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = trim(a)
        if degree(a) <= 0:
            continue
        g = ugcd(a, f, p)
        if 0 < degree(g) < n:
            return g
        b = upow_mod(a, (p**d - 1) // 2, f, p)
        b = uadd(b, [p - 1], p)
        g = ugcd(b, f, p)
        if 0 < degree(g) < n:
            return g


def factor_squarefree(f, p, rng: random.Random):
    """Irreducible monic factors of a squarefree monic polynomial."""
    result = []
    for d, g in distinct_degree_factor(f, p):
        stack = [g]
        while stack:
            h = stack.pop()
            if degree(h) == d:
                result.append(h)
                continue
            piece = equal_degree_split(h, d, p, rng)
            stack.append(piece)
            stack.append(udivmod(h, piece, p)[0])
    result.sort(key=lambda q: (degree(q), q))
    return result


def ufactor(f, p, rng: random.Random | None = None):
    """Monic irreducible factors with multiplicities: [(poly, mult)].

    The squarefree part f / gcd(f, f') contains every distinct irreducible
    factor once (the degrees here are far below p, so f is separable in
    each squarefree layer), so one pass of dividing out suffices.
    """
    rng = rng or random.Random(2)
    f = trim(list(f))
    if degree(f) <= 0:
        return []
    inv = pow(f[-1], p - 2, p)
    f = [c * inv % p for c in f]
    df = uderiv(f, p)
    if not df:
        raise ArithmeticError("inseparable polynomial")
    g = ugcd(f, df, p)
    sqf = udivmod(f, g, p)[0]
    out = []
    for irr in factor_squarefree(sqf, p, rng):
        mult = 0
        while True:
            q, r = udivmod(f, irr, p)
            if r:
                break
            f = q
            mult += 1
        out.append((irr, mult))
    if degree(f) != 0:
        raise ArithmeticError("factorization incomplete")
    out.sort(key=lambda t: (degree(t[0]), t[0]))
    return out


def uroots(f, p, rng: random.Random | None = None) -> list[int]:
    """Roots of f in GF(p), without multiplicity."""
    rng = rng or random.Random(3)
    f = trim(list(f))
    if degree(f) <= 0:
        return []
    x_p = upow_mod([0, 1], p, f, p)
    lin = ugcd(uadd(x_p, uscale([0, 1], p - 1, p), p), f, p)
    roots = []
    stack = [lin]
    while stack:
        g = stack.pop()
        if degree(g) <= 0:
            continue
        if degree(g) == 1:
            roots.append((-g[0]) * pow(g[1], p - 2, p) % p)
            continue
        piece = equal_degree_split(g, 1, p, rng)
        stack.append(piece)
        stack.append(udivmod(g, piece, p)[0])
    return sorted(roots)
