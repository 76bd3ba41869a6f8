"""Dense univariate polynomial arithmetic over an exact field.

Polynomials are coefficient lists, lowest degree first, with a nonzero
last entry ([] is the zero polynomial).  Used by the quadric-pencil
analysis: determinants of one-parameter symmetric pencils, gcds of minor
families, squarefree decomposition, and rank computations modulo a
squarefree modulus with D5-style splitting on ambiguous zero tests.
"""

from __future__ import annotations

from .fields import Field


class UnivarError(ValueError):
    pass


def up_trim(F: Field, cs: list) -> list:
    while cs and F.is_zero(cs[-1]):
        cs.pop()
    return cs


def up_deg(cs: list) -> int:
    return len(cs) - 1


def up_const(F: Field, c) -> list:
    c = F.coerce(c)
    return [] if F.is_zero(c) else [c]


def up_add(F: Field, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero
        y = b[i] if i < len(b) else F.zero
        out.append(F.add(x, y))
    return up_trim(F, out)


def up_sub(F: Field, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero
        y = b[i] if i < len(b) else F.zero
        out.append(F.sub(x, y))
    return up_trim(F, out)


def up_mul(F: Field, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return up_trim(F, out)


def up_scale(F: Field, a: list, c) -> list:
    if F.is_zero(c):
        return []
    return [F.mul(x, c) for x in a]


def up_neg(F: Field, a: list) -> list:
    return [F.neg(x) for x in a]


def up_monic(F: Field, a: list) -> list:
    if not a:
        return []
    lead = a[-1]
    if lead == F.one:
        return list(a)
    inv = F.inv(lead)
    return [F.mul(x, inv) for x in a]


def up_divmod(F: Field, a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    a = list(a)
    db, lead = up_deg(b), b[-1]
    q = [F.zero] * max(len(a) - db, 0)
    while a and up_deg(a) >= db:
        factor = F.div(a[-1], lead)
        shift = up_deg(a) - db
        q[shift] = factor
        for i, y in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(factor, y))
        up_trim(F, a)
    return up_trim(F, q), a


def up_divexact(F: Field, a: list, b: list) -> list:
    q, r = up_divmod(F, a, b)
    if r:
        raise UnivarError("division was not exact")
    return q


def up_gcd(F: Field, a: list, b: list) -> list:
    a, b = list(a), list(b)
    while b:
        _, r = up_divmod(F, a, b)
        a, b = b, r
    return up_monic(F, a)


def up_xgcd(F: Field, a: list, b: list) -> tuple[list, list, list]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = up_const(F, 1), []
    t0, t1 = [], up_const(F, 1)
    while r1:
        q, r = up_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, up_sub(F, s0, up_mul(F, q, s1))
        t0, t1 = t1, up_sub(F, t0, up_mul(F, q, t1))
    if not r0:
        return [], s0, t0
    inv = F.inv(r0[-1])
    return up_scale(F, r0, inv), up_scale(F, s0, inv), up_scale(F, t0, inv)


def up_invmod(F: Field, a: list, mod: list) -> list:
    g, s, _ = up_xgcd(F, a, mod)
    if up_deg(g) != 0:
        raise UnivarError("element not invertible modulo the given modulus")
    return up_divmod(F, s, mod)[1]


def up_derivative(F: Field, a: list) -> list:
    out = [F.mul(c, F.coerce(i)) for i, c in enumerate(a) if i > 0]
    return up_trim(F, out)


def up_eval(F: Field, a: list, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def squarefree_decomposition(F: Field, a: list) -> list[tuple[list, int]]:
    """Yun's algorithm: returns [(g_i, i)] with a = lc * prod g_i^i, g_i squarefree.

    Requires characteristic 0 or characteristic larger than deg(a); in
    small characteristic multiplicities can be invisible to the
    derivative, so we refuse rather than answer wrongly.
    """
    if not a:
        raise UnivarError("squarefree decomposition of the zero polynomial")
    if F.char != 0 and F.char <= up_deg(a):
        raise UnivarError(
            f"squarefree decomposition needs char 0 or char > deg ({F.char} <= {up_deg(a)})"
        )
    a = up_monic(F, a)
    if up_deg(a) == 0:
        return []
    d = up_derivative(F, a)
    g = up_gcd(F, a, d)
    b = up_divexact(F, a, g)
    c = up_divexact(F, d, g)
    out = []
    i = 1
    while up_deg(b) > 0:
        dd = up_sub(F, c, up_derivative(F, b))
        factor = up_gcd(F, b, dd)
        if up_deg(factor) > 0:
            out.append((up_monic(F, factor), i))
        b = up_divexact(F, b, factor)
        c = up_divexact(F, dd, factor)
        i += 1
    return out
