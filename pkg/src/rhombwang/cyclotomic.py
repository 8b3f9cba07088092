"""Exact arithmetic in cyclotomic rings Z[zeta_N] and Q[zeta_N].

Points and edge vectors of a rhombus tiling with N unit directions live in
Z[zeta_N], the ring of integer combinations of the N-th roots of unity. An
integer coefficient vector is reduced modulo the N-th cyclotomic polynomial,
which yields a canonical representation of length phi(N); two vectors denote
the same point of the plane iff their reductions agree, so equality is an
exact integer test.

Sign predicates (orientation, comparisons of squared distances, cone tests)
reduce to the sign of the real or imaginary part of a ring element. The sign
is computed by an exact zero test first, then floating point with a rigorous
error margin, escalating to mpmath at increasing precision until the interval
excludes zero. No fixed epsilon is ever treated as ground truth.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd

import mpmath

_TWO_PI = 2.0 * 3.141592653589793


def _poly_divmod_monic(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials, den monic. Coefficients low to high."""
    num = list(num)
    dd = len(den) - 1
    if dd == 0:
        return num, []
    quot = [0] * max(1, len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c == 0:
            continue
        quot[k - dd] = c
        for j, dcoef in enumerate(den):
            num[k - dd + j] -= c * dcoef
    while num and num[-1] == 0:
        num.pop()
    return quot, num


def cyclotomic_poly_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, low to high."""
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            q, rem = _poly_divmod_monic(num, list(cyclotomic_poly_coeffs(d)))
            assert not rem
            num = q
    return tuple(num)


class CycRing:
    """The ring Z[zeta_N], with reduction and embedding tables."""

    _instances: dict[int, "CycRing"] = {}

    def __new__(cls, order: int) -> "CycRing":
        inst = cls._instances.get(order)
        if inst is None:
            if order < 3:
                raise ValueError("basis order must be >= 3")
            inst = super().__new__(cls)
            inst._init(order)
            cls._instances[order] = inst
        return inst

    def _init(self, order: int) -> None:
        self.order = order
        phi = cyclotomic_poly_coeffs(order)
        self.phi = phi
        self.degree = len(phi) - 1
        deg = self.degree
        # x^m mod phi for m in [0, 2*order): enough for raw vectors and products
        table: list[tuple[int, ...]] = []
        cur = [0] * deg
        for m in range(2 * order):
            if m < deg:
                row = [0] * deg
                row[m] = 1
                table.append(tuple(row))
            else:
                prev = table[m - 1]
                nxt = [0] * (deg + 1)
                for j, c in enumerate(prev):
                    nxt[j + 1] = c
                lead = nxt[deg]
                if lead:
                    for j in range(deg):
                        nxt[j] -= lead * phi[j]
                table.append(tuple(nxt[:deg]))
        self.pow_table = tuple(table)
        # conjugation: x^j -> x^{(order - j) mod order}, reduced
        self.conj_table = tuple(self.pow_table[(order - j) % order] for j in range(deg))
        self.zero_co = (0,) * deg
        one = [0] * deg
        one[0] = 1
        self.one_co = tuple(one)
        self._float_emb = tuple(
            cmath.exp(1j * _TWO_PI * j / order) for j in range(deg)
        )
        self._mp_emb: dict[int, tuple] = {}
        self.zero = CycInt(self, self.zero_co)
        self.one = CycInt(self, self.one_co)

    def __repr__(self) -> str:
        return f"CycRing({self.order})"

    def reduce_raw(self, coeffs) -> tuple[int, ...]:
        """Reduce a coefficient vector of any length < 2*order."""
        deg = self.degree
        acc = [0] * deg
        for m, c in enumerate(coeffs):
            if c:
                row = self.pow_table[m]
                for j in range(deg):
                    acc[j] += c * row[j]
        return tuple(acc)

    def element(self, coeffs) -> "CycInt":
        return CycInt(self, self.reduce_raw(coeffs))

    def unit(self, k: int) -> "CycInt":
        """The root of unity zeta^k as a ring element."""
        return CycInt(self, self.pow_table[k % self.order])

    def from_int(self, n: int) -> "CycInt":
        if n == 0:
            return self.zero
        row = [0] * self.degree
        row[0] = n
        return CycInt(self, tuple(row))

    def mp_emb(self, dps: int):
        emb = self._mp_emb.get(dps)
        if emb is None:
            with mpmath.workdps(dps + 10):
                emb = tuple(
                    mpmath.expjpi(mpmath.mpf(2 * j) / self.order)
                    for j in range(self.degree)
                )
            self._mp_emb[dps] = emb
        return emb


class CycInt:
    """An element of Z[zeta_N] in reduced (canonical) form."""

    __slots__ = ("ring", "co", "_hash")

    def __init__(self, ring: CycRing, reduced: tuple[int, ...]):
        self.ring = ring
        self.co = reduced
        self._hash = -1

    def __hash__(self) -> int:
        h = self._hash
        if h == -1:
            h = hash((self.ring.order, self.co))
            self._hash = h
        return h

    def __eq__(self, other) -> bool:
        if isinstance(other, CycInt):
            return self.ring is other.ring and self.co == other.co
        if isinstance(other, int):
            return self.co == self.ring.from_int(other).co
        return NotImplemented

    def __repr__(self) -> str:
        return f"CycInt({self.ring.order}, {self.co})"

    @property
    def is_zero(self) -> bool:
        return self.co == self.ring.zero_co

    def __add__(self, other: "CycInt") -> "CycInt":
        return CycInt(self.ring, tuple(a + b for a, b in zip(self.co, other.co)))

    def __sub__(self, other: "CycInt") -> "CycInt":
        return CycInt(self.ring, tuple(a - b for a, b in zip(self.co, other.co)))

    def __neg__(self) -> "CycInt":
        return CycInt(self.ring, tuple(-a for a in self.co))

    def __mul__(self, other) -> "CycInt":
        ring = self.ring
        if isinstance(other, int):
            return CycInt(ring, tuple(a * other for a in self.co))
        a, b = self.co, other.co
        deg = ring.degree
        conv = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        acc = list(conv[:deg]) + [0] * (deg - len(conv[:deg]))
        for m in range(deg, len(conv)):
            c = conv[m]
            if c:
                row = ring.pow_table[m]
                for j in range(deg):
                    acc[j] += c * row[j]
        return CycInt(ring, tuple(acc))

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        ring = self.ring
        acc = [0] * ring.degree
        for j, c in enumerate(self.co):
            if c:
                row = ring.conj_table[j]
                for k in range(ring.degree):
                    acc[k] += c * row[k]
        return CycInt(ring, tuple(acc))

    def galois(self, t: int) -> "CycInt":
        """The Galois conjugate zeta -> zeta^t, for t coprime to the order."""
        ring = self.ring
        if gcd(t, ring.order) != 1:
            raise ValueError(f"zeta -> zeta^{t} is not a field automorphism")
        acc = [0] * ring.degree
        for i, c in enumerate(self.co):
            if c:
                row = ring.pow_table[(t * i) % ring.order]
                for k in range(ring.degree):
                    acc[k] += c * row[k]
        return CycInt(ring, tuple(acc))

    def norm2(self) -> "CycInt":
        """|z|^2 = z * conj(z), a real ring element."""
        return self * self.conj()

    def complex_value(self) -> complex:
        emb = self.ring._float_emb
        return sum(c * emb[j] for j, c in enumerate(self.co) if c) or 0j

    def _mp_value(self, dps: int):
        emb = self.ring.mp_emb(dps)
        with mpmath.workdps(dps):
            val = mpmath.mpc(0)
            for j, c in enumerate(self.co):
                if c:
                    val += c * emb[j]
            return val


def _refine_sign(z: CycInt, part: str) -> int:
    """Sign of Re(z) or Im(z), given that the exact part is nonzero."""
    mag = sum(abs(c) for c in z.co)
    val = z.complex_value()
    v = val.real if part == "re" else val.imag
    if abs(v) > mag * 1e-12 + 1e-300:
        return 1 if v > 0 else -1
    dps = 40
    while dps <= 20000:
        mv = z._mp_value(dps)
        v = mv.real if part == "re" else mv.imag
        bound = mpmath.mpf(mag) * mpmath.mpf(10) ** (5 - dps)
        if abs(v) > bound:
            return 1 if v > 0 else -1
        dps *= 2
    raise ArithmeticError("sign refinement failed to separate a nonzero value")


def sign_re(z: CycInt) -> int:
    """Exact sign of the real part of z."""
    if (z + z.conj()).is_zero:
        return 0
    return _refine_sign(z, "re")


def sign_im(z: CycInt) -> int:
    """Exact sign of the imaginary part of z."""
    if (z - z.conj()).is_zero:
        return 0
    return _refine_sign(z, "im")


def sign_real_elem(z: CycInt) -> int:
    """Exact sign of a ring element known (or checked) to be real."""
    if z.is_zero:
        return 0
    return _refine_sign(z, "re")


def dot_sign(a: CycInt, b: CycInt) -> int:
    """Sign of the scalar product <a, b> = Re(conj(a) * b)."""
    return sign_re(a.conj() * b)


def cross_sign(a: CycInt, b: CycInt) -> int:
    """Sign of the cross product a x b = Im(conj(a) * b)."""
    return sign_im(a.conj() * b)


class QCyc:
    """An element of Q[zeta_N]: a CycInt numerator over a positive int denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: CycInt, den: int = 1):
        if den == 0:
            raise ZeroDivisionError
        if den < 0:
            num, den = -num, -den
        g = den
        for c in num.co:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = CycInt(num.ring, tuple(c // g for c in num.co))
            den //= g
        self.num = num
        self.den = den

    @classmethod
    def from_fraction(cls, ring: CycRing, q: Fraction | int) -> "QCyc":
        q = Fraction(q)
        return cls(ring.from_int(q.numerator), q.denominator)

    @property
    def ring(self) -> CycRing:
        return self.num.ring

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, QCyc):
            return self.den == other.den and self.num == other.num
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"QCyc({self.num!r}/{self.den})"

    def __add__(self, other: "QCyc") -> "QCyc":
        return QCyc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "QCyc") -> "QCyc":
        return QCyc(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "QCyc":
        return QCyc(-self.num, self.den)

    def __mul__(self, other) -> "QCyc":
        if isinstance(other, QCyc):
            return QCyc(self.num * other.num, self.den * other.den)
        if isinstance(other, CycInt):
            return QCyc(self.num * other, self.den)
        if isinstance(other, int):
            return QCyc(self.num * other, self.den)
        if isinstance(other, Fraction):
            return QCyc(self.num * other.numerator, self.den * other.denominator)
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> "QCyc":
        return QCyc(self.num.conj(), self.den)

    def inv(self) -> "QCyc":
        """Exact inverse: 1/z = (product of the other Galois conjugates of
        the numerator) * den / Norm(numerator), with an integer field norm."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        ring = self.ring
        p = ring.from_int(1)
        for t in range(2, ring.order):
            if gcd(t, ring.order) == 1:
                p = p * self.num.galois(t)
        norm = self.num * p
        assert all(c == 0 for c in norm.co[1:]), "field norm must be rational"
        return QCyc(p * self.den, norm.co[0])

    def __truediv__(self, other: "QCyc") -> "QCyc":
        if isinstance(other, QCyc):
            return self * other.inv()
        return NotImplemented

    def sign_re(self) -> int:
        return sign_re(self.num)

    def complex_value(self) -> complex:
        return self.num.complex_value() / self.den

    def floor_real(self) -> int:
        """floor of a real element, exact."""
        z = self.num
        if not (z - z.conj()).is_zero:
            raise ValueError("floor_real on a non-real element")
        k = int(self.complex_value().real // 1)
        # verify k <= x < k+1 exactly, walking if the float guess was off
        while True:
            lo = sign_real_elem(z + z.conj() - self.ring.from_int(2 * k * self.den))
            if lo < 0:
                k -= 1
                continue
            hi = sign_real_elem(z + z.conj() - self.ring.from_int(2 * (k + 1) * self.den))
            if hi >= 0:
                k += 1
                continue
            return k

    def is_integer(self) -> bool:
        if not (self.num - self.num.conj()).is_zero:
            return False
        k = self.floor_real()
        return (self.num - self.ring.from_int(k * self.den)).is_zero
