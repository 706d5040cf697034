# Exact coefficient fields: rationals, prime fields, and small prime-power
# extensions.  Everything downstream is parametrized by one of these; no
# floating point exists anywhere in the package.

from __future__ import annotations

from fractions import Fraction


def is_prime(n: int) -> bool:
    """Trial-division primality test; adequate for the moduli used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Common interface of the exact coefficient fields.

    Elements are plain Python values (Fraction for the rationals, int in
    [0, p) for GF(p), tuple of ints for GF(p^k)); the field object owns all
    arithmetic on them.  A field object doubles as its own spec: ``kind`` is
    one of "rational" | "prime" | "prime-extension", with modulus ``p`` and
    extension degree ``k`` when finite.
    """

    kind: str
    p: int | None
    k: int

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def of_int(self, n: int):
        raise NotImplementedError

    def parse(self, s: str):
        """Inverse of :meth:`to_str`."""
        raise NotImplementedError

    def to_str(self, a) -> str:
        raise NotImplementedError

    def elements(self):
        """Iterate all field elements (finite fields only)."""
        raise NotImplementedError

    @property
    def order(self) -> int | None:
        """Number of elements, or None for the rationals."""
        return None

    def spec_str(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"Field({self.spec_str()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.spec_str() == other.spec_str()

    def __hash__(self) -> int:
        return hash(self.spec_str())


class RationalField(Field):
    """The field of rationals; elements are Fraction."""

    kind = "rational"
    p = None
    k = 1

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def of_int(self, n: int):
        return Fraction(n)

    def parse(self, s: str):
        return Fraction(s)

    def to_str(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def spec_str(self) -> str:
        return "rational"


class PrimeField(Field):
    """GF(p); elements are ints reduced to [0, p)."""

    kind = "prime"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.k = 1

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def of_int(self, n: int):
        return n % self.p

    def parse(self, s: str):
        return int(s) % self.p

    def to_str(self, a) -> str:
        return str(a % self.p)

    def elements(self):
        return range(self.p)

    @property
    def order(self) -> int:
        return self.p

    def spec_str(self) -> str:
        return f"fp:{self.p}"


def _poly_mul_mod(a: tuple, b: tuple, modulus: tuple, p: int) -> tuple:
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce by the monic modulus
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(k):
                prod[i - k + j] = (prod[i - k + j] - c * modulus[j]) % p
    return tuple(prod[:k])


def _find_irreducible(p: int, k: int) -> tuple:
    """First monic irreducible of degree k over GF(p), in lex coefficient order.

    Returned as coefficient tuple (c0, ..., c_{k-1}, 1).  Irreducibility is
    checked by the absence of roots for k <= 3 plus a gcd test with x^(p^d)-x
    for higher k; degrees used here stay tiny so brute force is fine.
    """
    if k == 1:
        return (0, 1)

    def poly_pow_x(q: int, modulus: tuple) -> tuple:
        # x^q mod modulus via square-and-multiply
        result = (0, 1) + (0,) * (k - 2)  # the polynomial x
        result = tuple(result[:k])
        acc = (1,) + (0,) * (k - 1)
        base = result
        e = q
        while e:
            if e & 1:
                acc = _poly_mul_mod(acc, base, modulus, p)
            base = _poly_mul_mod(base, base, modulus, p)
            e >>= 1
        return acc

    def is_irred(mod: tuple) -> bool:
        # f irreducible of degree k iff x^(p^k) == x mod f and
        # gcd-style check x^(p^(k/q)) != x for prime divisors q of k.
        x = (0, 1) + (0,) * (k - 2)
        x = tuple(x[:k])
        if poly_pow_x(p**k, mod) != x:
            return False
        q = 2
        kk = k
        divisors = set()
        while q * q <= kk:
            if kk % q == 0:
                divisors.add(q)
                while kk % q == 0:
                    kk //= q
            q += 1
        if kk > 1:
            divisors.add(kk)
        for q in divisors:
            if poly_pow_x(p ** (k // q), mod) == x:
                return False
        return True

    # enumerate monic polynomials by lex order on (c0, ..., c_{k-1})
    total = p**k
    for idx in range(total):
        coeffs = []
        t = idx
        for _ in range(k):
            coeffs.append(t % p)
            t //= p
        mod = tuple(coeffs) + (1,)
        if is_irred(mod):
            return mod
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class ExtensionField(Field):
    """GF(p^k) as GF(p)[x]/(f) for the first monic irreducible f of degree k.

    Elements are coefficient tuples of length k.  Used only for small witness
    scans over field towers, so plain polynomial arithmetic is enough.
    """

    kind = "prime-extension"

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.modulus = _find_irreducible(p, k)

    def zero(self):
        return (0,) * self.k

    def one(self):
        return (1 % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def mul(self, a, b):
        return _poly_mul_mod(a, b, self.modulus, self.p)

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0")
        # a^(q-2) with q = p^k
        q = self.p**self.k
        acc = self.one()
        base = a
        e = q - 2
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def is_zero(self, a) -> bool:
        return all(x % self.p == 0 for x in a)

    def of_int(self, n: int):
        return (n % self.p,) + (0,) * (self.k - 1)

    def parse(self, s: str):
        return tuple(int(t) % self.p for t in s.split(","))

    def to_str(self, a) -> str:
        return ",".join(str(x % self.p) for x in a)

    def elements(self):
        p, k = self.p, self.k
        for idx in range(p**k):
            coeffs = []
            t = idx
            for _ in range(k):
                coeffs.append(t % p)
                t //= p
            yield tuple(coeffs)

    @property
    def order(self) -> int:
        return self.p**self.k

    def embed(self, a: int):
        """Embed a GF(p) element."""
        return self.of_int(a)

    def spec_str(self) -> str:
        return f"fp:{self.p}^{self.k}"


QQ = RationalField()
GF32003 = PrimeField(32003)


def field_from_spec(spec: str) -> Field:
    """Parse "rational" | "fp:<p>" | "fp:<p>^<k>" into a field object."""
    if spec == "rational":
        return QQ
    if spec.startswith("fp:"):
        body = spec[3:]
        if "^" in body:
            ps, ks = body.split("^")
            return ExtensionField(int(ps), int(ks))
        p = int(body)
        if p == 32003:
            return GF32003
        return PrimeField(p)
    raise ValueError(f"unknown field spec {spec!r}")
