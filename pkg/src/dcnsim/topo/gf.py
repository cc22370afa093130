"""Small finite fields GF(p^k) for algebraic graph constructions.

Elements are plain ints in [0, q). Extension-field elements encode their
polynomial coefficients base p, lowest degree first. Prime fields work at
any size; extension fields build lookup tables once and are capped at
q <= 64, which covers every radix generated here.
"""

from __future__ import annotations


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k and p prime, or raise ValueError."""
    if q < 2:
        raise ValueError(f"field order must be at least 2, got {q}")
    n = 2
    while n * n <= q:
        if q % n == 0:
            m, k = q, 0
            while m % n == 0:
                m //= n
                k += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return n, k
        n += 1
    return q, 1


def _digits(n: int, p: int) -> list[int]:
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return out


def _undigits(coeffs: list[int], p: int) -> int:
    out = 0
    for c in reversed(coeffs):
        out = out * p + c
    return out


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m, coefficients in GF(p)."""
    a = a[:]
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1]
        if lead:
            off = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[off + i] = (a[off + i] - lead * mi) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic(low: int, deg: int, p: int) -> list[int]:
    c = _digits(low, p)
    c += [0] * (deg - len(c))
    c.append(1)
    return c


def _is_irreducible(poly: list[int], p: int, k: int) -> bool:
    # A reducible degree-k polynomial has a monic factor of degree <= k // 2.
    for t in range(1, k // 2 + 1):
        for low in range(p**t):
            if not _poly_mod(poly, _monic(low, t, p), p):
                return False
    return True


def _find_irreducible(p: int, k: int) -> list[int]:
    """Smallest monic irreducible polynomial of degree k over GF(p)."""
    for low in range(p**k):
        cand = _monic(low, k, p)
        if _is_irreducible(cand, p, k):
            return cand
    raise RuntimeError(f"no irreducible polynomial of degree {k} over GF({p})")


class GF:
    """Field arithmetic with add/sub/mul and a fixed primitive element."""

    def __init__(self, q: int):
        p, k = factor_prime_power(q)
        if k > 1 and q > 64:
            raise ValueError(f"extension fields are supported up to order 64, got {q}")
        self.q = q
        self.p = p
        self.k = k
        if k == 1:
            self._add_t = None
            self._mul_t = None
        else:
            mod = _find_irreducible(p, k)
            self._add_t = [[self._ext_add(a, b) for b in range(q)] for a in range(q)]
            self._mul_t = [
                [
                    _undigits(_poly_mod(_poly_mul(_digits(a, p), _digits(b, p), p), mod, p), p)
                    for b in range(q)
                ]
                for a in range(q)
            ]
        self.primitive_element = self._find_primitive()

    def _ext_add(self, a: int, b: int) -> int:
        p = self.p
        out, shift = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def add(self, a: int, b: int) -> int:
        if self._add_t is None:
            return (a + b) % self.p
        return self._add_t[a][b]

    def neg(self, a: int) -> int:
        if self._add_t is None:
            return -a % self.p
        p = self.p
        out, shift = 0, 1
        while a:
            out += (p - a % p) % p * shift
            a //= p
            shift *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul_t is None:
            return a * b % self.p
        return self._mul_t[a][b]

    def _order(self, a: int) -> int:
        n, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            n += 1
        return n

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        for a in range(2, self.q):
            if self._order(a) == self.q - 1:
                return a
        raise RuntimeError(f"no primitive element in GF({self.q})")

    def primitive_powers(self) -> list[int]:
        """[xi^0, xi^1, ..., xi^(q-2)]: every nonzero element exactly once."""
        out = [1]
        x = self.primitive_element
        while x != 1:
            out.append(x)
            x = self.mul(x, self.primitive_element)
        return out
