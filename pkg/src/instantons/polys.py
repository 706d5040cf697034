# Minimal univariate polynomial helpers over the exact fields.  Coefficient
# lists are low-degree first and always trimmed.  Root finding is exhaustive
# scan over a finite field and rational-root extraction over Q; anything
# irreducible left over is reported as a residual factor, never approximated.

from __future__ import annotations

from fractions import Fraction

from .fields import Field


def trim(coeffs: list, field: Field) -> list:
    c = list(coeffs)
    while c and field.is_zero(c[-1]):
        c.pop()
    return c


def degree(coeffs: list) -> int:
    """Degree with the convention deg 0 = -1."""
    return len(coeffs) - 1


def evaluate(coeffs: list, x, field: Field):
    acc = field.zero()
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, x), c)
    return acc


def add(a: list, b: list, field: Field) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero()
        y = b[i] if i < len(b) else field.zero()
        out.append(field.add(x, y))
    return trim(out, field)


def mul(a: list, b: list, field: Field) -> list:
    if not a or not b:
        return []
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return trim(out, field)


def divmod_poly(a: list, b: list, field: Field) -> tuple[list, list]:
    a = trim(a, field)
    b = trim(b, field)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [field.zero()] * max(0, len(a) - len(b) + 1)
    r = list(a)
    inv_lead = field.inv(b[-1])
    while len(r) >= len(b) and r:
        c = field.mul(r[-1], inv_lead)
        d = len(r) - len(b)
        q[d] = c
        for i, bc in enumerate(b):
            r[d + i] = field.sub(r[d + i], field.mul(c, bc))
        r = trim(r, field)
    return trim(q, field), r


def gcd(a: list, b: list, field: Field) -> list:
    a, b = trim(a, field), trim(b, field)
    while b:
        a, b = b, divmod_poly(a, b, field)[1]
    if a:
        inv = field.inv(a[-1])
        a = [field.mul(inv, c) for c in a]
    return a


def interpolate(points: list, values: list, field: Field) -> list:
    """Lagrange interpolation through distinct points; exact in the field."""
    if len(points) != len(values):
        raise ValueError("points/values length mismatch")
    acc: list = []
    for i, (xi, yi) in enumerate(zip(points, values)):
        num = [field.one()]
        den = field.one()
        for j, xj in enumerate(points):
            if i == j:
                continue
            num = mul(num, [field.neg(xj), field.one()], field)
            den = field.mul(den, field.sub(xi, xj))
        scale = field.mul(yi, field.inv(den))
        acc = add(acc, [field.mul(scale, c) for c in num], field)
    return trim(acc, field)


def roots(coeffs: list, field: Field) -> tuple[list, list]:
    """All roots locatable exactly, plus the residual (root-free) factor.

    Finite fields: exhaustive scan of the field, then repeated division.
    Rationals: rational-root extraction on the primitive integer form.
    The residual factor is what remains after dividing out located roots
    (up to the scan's reach); for finite prime fields it is genuinely
    root-free over that field.
    """
    coeffs = trim(coeffs, field)
    if not coeffs:
        raise ValueError("zero polynomial has every root")
    found = []
    rest = coeffs
    if field.kind == "prime":
        candidates = _prime_root_candidates(rest, field.p)
        for x in candidates:
            while rest and len(rest) > 1 and field.is_zero(evaluate(rest, x, field)):
                found.append(x)
                rest = divmod_poly(rest, [field.neg(x), field.one()], field)[0]
        return found, rest
    if field.kind == "prime-extension":
        for x in field.elements():
            while rest and len(rest) > 1 and field.is_zero(evaluate(rest, x, field)):
                found.append(x)
                rest = divmod_poly(rest, [field.neg(x), field.one()], field)[0]
        return found, rest
    # rationals: scale to integers, try divisor ratios of constant/leading
    denom = 1
    for c in coeffs:
        denom = denom * Fraction(c).denominator // _gcd_int(denom, Fraction(c).denominator)
    ints = [int(Fraction(c) * denom) for c in coeffs]
    while len(rest) > 1:
        root = _rational_root(ints)
        if root is None:
            break
        found.append(root)
        rest = divmod_poly(rest, [field.neg(root), field.one()], field)[0]
        denom = 1
        for c in rest:
            denom = denom * Fraction(c).denominator // _gcd_int(denom, Fraction(c).denominator)
        ints = [int(Fraction(c) * denom) for c in rest]
    return found, rest


def _prime_root_candidates(coeffs: list, p: int) -> list[int]:
    """Roots of a polynomial over GF(p) by vectorized Horner over the field."""
    import numpy as np

    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * xs + int(c)) % p
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _rational_root(ints: list[int]) -> Fraction | None:
    if not ints:
        return None
    # strip trailing zero coefficients of x^0 as roots at 0
    if ints[0] == 0:
        return Fraction(0)
    lead = ints[-1]
    const = ints[0]
    for q in _divisors(lead):
        for p in _divisors(const):
            for sign in (1, -1):
                cand = Fraction(sign * p, q)
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    return cand
    return None
