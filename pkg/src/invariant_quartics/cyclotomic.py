"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Scalars are dense rational coefficient vectors over the power basis
1, zeta, ..., zeta^(phi(N)-1) reduced modulo the N-th cyclotomic polynomial.
This gives canonical representatives, so equality and hashing are structural.

The module also provides the named-constant constructors used by the bundled
group files (roots of unity, square roots of integers via quadratic Gauss
sums), a certified complex-interval embedding for sign checks, and ring
homomorphisms into prime fields for cheap nonvanishing certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator, Sequence, Union

import numpy as np
from mpmath import iv

from .errors import BadPrime, ConductorMismatch, DivisionByZero, NotInField

__all__ = [
    "CyclotomicField",
    "CycScalar",
    "ComplexInterval",
    "PrimeEmbedding",
    "cyclotomic_field",
    "cyclotomic_polynomial",
    "euler_phi",
    "root_of_unity",
    "sqrt_int",
    "rational_scalar",
    "embed_complex",
    "multiplicative_order",
    "scalar_to_expr",
    "scalar_to_json",
    "scalar_from_json",
    "prime_embeddings",
    "find_prime_embedding",
    "is_prime",
]

Rational = Union[int, Fraction]

# Pure-python convolution beats numpy dispatch overhead below this degree.
_SMALL_DEGREE = 16


def euler_phi(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            result *= p - 1
            m //= p
            while m % p == 0:
                result *= p
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        result *= m - 1
    return result


def _poly_div_exact(num: list[int], den: Sequence[int]) -> list[int]:
    # long division by a monic integer polynomial, remainder must vanish
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        out[i - dd] = c
        for j, d in enumerate(den):
            num[i - dd + j] -= c * d
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first, monic."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


class CyclotomicField:
    """The field Q(zeta_N); one shared instance per conductor."""

    _cache: dict[int, "CyclotomicField"] = {}

    __slots__ = (
        "N",
        "degree",
        "phi_poly",
        "_red_rows",
        "_red_np",
        "_fast_bound",
        "_power_memo",
        "zero",
        "one",
        "zeta",
    )

    def __new__(cls, N: int) -> "CyclotomicField":
        if N < 1:
            raise ValueError("conductor must be a positive integer")
        inst = cls._cache.get(N)
        if inst is not None:
            return inst
        inst = super().__new__(cls)
        inst._init(N)
        cls._cache[N] = inst
        return inst

    def _init(self, N: int) -> None:
        self.N = N
        phi = cyclotomic_polynomial(N)
        deg = len(phi) - 1
        self.degree = deg
        self.phi_poly = phi
        # reduction rows: zeta^k in the power basis for k = deg .. 2*deg-2
        rows: list[tuple[int, ...]] = []
        base = [-c for c in phi[:deg]]
        rows.append(tuple(base))
        cur = base
        for _ in range(deg - 2):
            nxt = [0] + cur[: deg - 1]
            top = cur[deg - 1]
            if top:
                for j in range(deg):
                    nxt[j] += top * base[j]
            rows.append(tuple(nxt))
            cur = nxt
        self._red_rows = tuple(rows)
        self._red_np = (
            np.array(rows, dtype=np.int64) if rows else np.zeros((0, deg), dtype=np.int64)
        )
        rmax = max((max(abs(v) for v in row) for row in rows), default=0)
        # int64 safety for convolve-and-reduce: see _mul_nums
        self._fast_bound = (1 << 62) // max(1, deg * (1 + (deg - 1) * rmax))
        self._power_memo: dict[int, tuple[int, ...]] = {}
        self.zero = CycScalar(self, (0,) * deg, 1)
        self.one = CycScalar(self, (1,) + (0,) * (deg - 1), 1)
        if deg >= 2:
            self.zeta = CycScalar(self, (0, 1) + (0,) * (deg - 2), 1)
        else:
            self.zeta = CycScalar(self, tuple(base), 1)

    def __repr__(self) -> str:
        return f"CyclotomicField({self.N})"

    def __reduce__(self):
        return (CyclotomicField, (self.N,))

    def zeta_power_vector(self, j: int) -> tuple[int, ...]:
        """Power basis coordinates of zeta^j (integers)."""
        j %= self.N
        memo = self._power_memo
        hit = memo.get(j)
        if hit is not None:
            return hit
        deg = self.degree
        if j < deg:
            vec = tuple(1 if t == j else 0 for t in range(deg))
            memo[j] = vec
            return vec
        base = self._red_rows[0]
        cur = list(self.zeta_power_vector(deg - 1))
        for _ in range(j - deg + 1):
            top = cur[deg - 1]
            cur = [0] + cur[: deg - 1]
            if top:
                for t in range(deg):
                    cur[t] += top * base[t]
        vec = tuple(cur)
        memo[j] = vec
        return vec

    def scalar(self, coeffs: Sequence[Rational]) -> "CycScalar":
        """Build a scalar from rational power-basis coordinates."""
        if len(coeffs) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coeffs)}")
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        nums = tuple(int(f * den) for f in fracs)
        return CycScalar._make(self, nums, den)

    def rational(self, q: Rational) -> "CycScalar":
        f = Fraction(q)
        nums = (f.numerator,) + (0,) * (self.degree - 1)
        return CycScalar._make(self, nums, f.denominator)

    def zeta_pow(self, j: int) -> "CycScalar":
        return CycScalar(self, self.zeta_power_vector(j), 1)


def cyclotomic_field(N: int) -> CyclotomicField:
    return CyclotomicField(N)


def _coerce(field: CyclotomicField, value) -> "CycScalar | None":
    if isinstance(value, CycScalar):
        if value.field is not field:
            raise ConductorMismatch(
                f"conductor {value.field.N} vs {field.N}: no implicit coercion"
            )
        return value
    if isinstance(value, (int, Fraction)):
        return field.rational(value)
    return None


class CycScalar:
    """An element of Q(zeta_N): integer coordinate vector over a common
    positive denominator, normalized so gcd(coords, den) = 1."""

    __slots__ = ("field", "nums", "den", "_h")

    def __init__(self, field: CyclotomicField, nums: tuple[int, ...], den: int) -> None:
        self.field = field
        self.nums = nums
        self.den = den
        self._h = None

    @staticmethod
    def _make(field: CyclotomicField, nums, den: int) -> "CycScalar":
        if den < 0:
            den = -den
            nums = [-v for v in nums]
        g = gcd(den, *nums) if nums else den
        if g > 1:
            den //= g
            nums = tuple(v // g for v in nums)
        elif not isinstance(nums, tuple):
            nums = tuple(nums)
        if den == 0:
            raise DivisionByZero("zero denominator")
        return CycScalar(field, nums, den)

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is not rational")
        return Fraction(self.nums[0], self.den)

    def coefficients(self) -> tuple[Fraction, ...]:
        d = self.den
        return tuple(Fraction(v, d) for v in self.nums)

    # -- structural equality -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, CycScalar):
            if other.field is not self.field:
                raise ConductorMismatch(
                    f"conductor {self.field.N} vs {other.field.N}: no implicit coercion"
                )
            return self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return (
                not any(self.nums[1:])
                and self.nums[0] == f.numerator
                and self.den == f.denominator
            )
        return NotImplemented

    def __hash__(self) -> int:
        h = self._h
        if h is None:
            h = self._h = hash((self.field.N, self.nums, self.den))
        return h

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        da, db = self.den, o.den
        if da == db:
            nums = [x + y for x, y in zip(self.nums, o.nums)]
            return CycScalar._make(self.field, nums, da)
        g = gcd(da, db)
        ma, mb = db // g, da // g
        nums = [x * ma + y * mb for x, y in zip(self.nums, o.nums)]
        return CycScalar._make(self.field, nums, da // g * db)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.field, tuple(-v for v in self.nums), self.den)

    def __sub__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return o.__add__(-self)

    def __mul__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        f = self.field
        nums = _mul_nums(f, self.nums, o.nums)
        return CycScalar._make(f, nums, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return self.__mul__(o.inverse())

    def __rtruediv__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return o.__mul__(self.inverse())

    def inverse(self) -> "CycScalar":
        if not any(self.nums):
            raise DivisionByZero("division by zero scalar")
        inv_nums, inv_den = _inverse_nums(self.field, self.nums)
        # 1/(P/den) = den * P^{-1}
        return CycScalar._make(
            self.field, tuple(v * self.den for v in inv_nums), inv_den
        )

    def __pow__(self, e: int) -> "CycScalar":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base2 = base * base if e > 1 else base
            base = base2
            e >>= 1
        return result

    # -- field change ----------------------------------------------------

    def lift_to(self, target: CyclotomicField) -> "CycScalar":
        """Image in Q(zeta_M) for N | M."""
        f = self.field
        if target is f:
            return self
        if target.N % f.N != 0:
            raise ConductorMismatch(
                f"cannot lift conductor {f.N} into {target.N} (not a multiple)"
            )
        rows = _lift_rows(f.N, target.N)
        out = [0] * target.degree
        for t, c in enumerate(self.nums):
            if c == 0:
                continue
            row = rows[t]
            for j in range(target.degree):
                r = row[j]
                if r:
                    out[j] += c * r
        return CycScalar._make(target, out, self.den)

    def __repr__(self) -> str:
        return f"<{scalar_to_expr(self)} @ N={self.field.N}>"


def _mul_nums(f: CyclotomicField, na: tuple[int, ...], nb: tuple[int, ...]) -> list[int]:
    deg = f.degree
    if deg == 1:
        return [na[0] * nb[0]]
    if deg <= _SMALL_DEGREE:
        conv = [0] * (2 * deg - 1)
        for i, a in enumerate(na):
            if a:
                for j, b in enumerate(nb):
                    if b:
                        conv[i + j] += a * b
    else:
        amax = max(map(abs, na))
        bmax = max(map(abs, nb))
        if amax and bmax and amax * bmax <= f._fast_bound:
            conv = np.convolve(
                np.array(na, dtype=np.int64), np.array(nb, dtype=np.int64)
            )
            low = conv[:deg] + conv[deg:] @ f._red_np[: max(0, len(conv) - deg)]
            return low.tolist()
        conv = [0] * (2 * deg - 1)
        for i, a in enumerate(na):
            if a:
                for j, b in enumerate(nb):
                    if b:
                        conv[i + j] += a * b
    out = conv[:deg]
    rows = f._red_rows
    for k in range(deg, 2 * deg - 1):
        c = conv[k]
        if c:
            row = rows[k - deg]
            for t in range(deg):
                r = row[t]
                if r:
                    out[t] += c * r
    return out


@lru_cache(maxsize=16384)
def _inverse_nums(field: CyclotomicField, nums: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Inverse of the integer polynomial `nums` modulo Phi_N, as (nums, den)."""
    # extended Euclid over Q[x] against Phi_N
    r0 = [Fraction(c) for c in field.phi_poly]
    r1 = [Fraction(c) for c in nums]
    while r1 and r1[-1] == 0:
        r1.pop()
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise DivisionByZero("noninvertible element (Phi_N not coprime?)")
    c = r1[0]
    inv = [v / c for v in s1]
    inv += [Fraction(0)] * (field.degree - len(inv))
    den = 1
    for v in inv:
        den = den * v.denominator // gcd(den, v.denominator)
    out = tuple(int(v * den) for v in inv[: field.degree])
    g = gcd(den, *out)
    if g > 1:
        den //= g
        out = tuple(v // g for v in out)
    return out, den


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        c /= lead
        q[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0)) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


@lru_cache(maxsize=64)
def _lift_rows(n_small: int, n_big: int) -> tuple[tuple[int, ...], ...]:
    big = CyclotomicField(n_big)
    small = CyclotomicField(n_small)
    step = n_big // n_small
    return tuple(big.zeta_power_vector(t * step) for t in range(small.degree))


# -- named constructors ----------------------------------------------------


def rational_scalar(N: int, q: Rational) -> CycScalar:
    return CyclotomicField(N).rational(q)


def root_of_unity(N: int, j: int) -> CycScalar:
    """zeta_N^j in canonical form (j taken mod N)."""
    return CyclotomicField(N).zeta_pow(j)


def _legendre(a: int, q: int) -> int:
    v = pow(a % q, (q - 1) // 2, q)
    return 1 if v == 1 else -1


def _factor_squarefree(m: int) -> tuple[int, list[int]]:
    """m = square * product(primes), primes distinct."""
    square_root_part = 1
    primes: list[int] = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            square_root_part *= p ** (e // 2)
            if e % 2:
                primes.append(p)
        p += 1 if p == 2 else 2
    if m > 1:
        primes.append(m)
    return square_root_part, primes


def sqrt_int(N: int, m: int) -> CycScalar:
    """The square root of the integer m >= 1 in Q(zeta_N) whose complex
    embedding is real and positive, built from quadratic Gauss sums.

    Membership: for each odd prime q dividing the squarefree part, q | N if
    q = 1 mod 4 and 4q | N otherwise; if the squarefree part is even, 8 | N.
    """
    if m < 1:
        raise NotInField("sqrt_int requires a positive integer")
    field = CyclotomicField(N)
    s, primes = _factor_squarefree(m)
    result = field.rational(s)
    for q in primes:
        if q == 2:
            if N % 8 != 0:
                raise NotInField(f"sqrt(2) not in Q(zeta_{N}) (needs 8 | N)")
            k = N // 8
            term = field.zeta_pow(k) + field.zeta_pow(N - k)
        elif q % 4 == 1:
            if N % q != 0:
                raise NotInField(f"sqrt({q}) not in Q(zeta_{N}) (needs {q} | N)")
            step = N // q
            vec = [0] * field.degree
            term = field.zero
            for a in range(1, q):
                pw = field.zeta_power_vector((a * step) % N)
                sign = _legendre(a, q)
                vec = [v + sign * w for v, w in zip(vec, pw)]
            term = CycScalar._make(field, vec, 1)
        else:
            if N % (4 * q) != 0:
                raise NotInField(
                    f"sqrt({q}) not in Q(zeta_{N}) (needs {4 * q} | N since {q} = 3 mod 4)"
                )
            step = N // q
            vec = [0] * field.degree
            for a in range(1, q):
                pw = field.zeta_power_vector((a * step) % N)
                sign = _legendre(a, q)
                vec = [v + sign * w for v, w in zip(vec, pw)]
            gauss = CycScalar._make(field, vec, 1)
            term = field.zeta_pow(3 * N // 4) * gauss  # -i * (i sqrt(q))
        result = result * term
    if result * result != m:
        raise AssertionError(f"sqrt_int({N}, {m}) failed its own square check")
    return result


def multiplicative_order(s: CycScalar, cap: int) -> "int | None":
    """Least k >= 1 with s^k = 1, or None if no such k <= cap."""
    one = s.field.one
    cur = s
    for k in range(1, cap + 1):
        if cur == one:
            return k
        cur = cur * s
    return None


# -- complex interval embedding --------------------------------------------


@dataclass(frozen=True)
class ComplexInterval:
    """Rectangle [re] x [im] certified to contain the true complex value."""

    re: object  # mpmath iv.mpf
    im: object

    @property
    def mid(self) -> complex:
        return complex(float(self.re.mid), float(self.im.mid))

    @property
    def width(self) -> float:
        return max(float(self.re.delta), float(self.im.delta))

    def contains_zero(self) -> bool:
        return (self.re.a <= 0 <= self.re.b) and (self.im.a <= 0 <= self.im.b)

    def real_sign(self) -> int:
        """+1 / -1 when the real part is certified nonzero, else 0."""
        if self.re.a > 0:
            return 1
        if self.re.b < 0:
            return -1
        return 0

    def __repr__(self) -> str:
        return f"ComplexInterval({self.mid.real:.6g} + {self.mid.imag:.6g}i, width={self.width:.2g})"


def embed_complex(a: CycScalar, digits: int = 15) -> ComplexInterval:
    """Certified enclosure of a under zeta_N -> exp(2 pi i / N).

    The working precision is raised adaptively until the enclosure width
    reaches the requested number of digits (best effort after several
    doublings; the returned interval is always rigorous).
    """
    target = 10.0 ** (-digits)
    prec = max(64, int(digits * 3.5) + 32)
    N = a.field.N
    re = im = None
    for _ in range(8):
        saved = iv.prec
        iv.prec = prec
        try:
            re = iv.mpf(0)
            im = iv.mpf(0)
            for t, c in enumerate(a.nums):
                if c == 0:
                    continue
                ang = (2 * iv.pi) * t / N
                re += c * iv.cos(ang)
                im += c * iv.sin(ang)
            re /= a.den
            im /= a.den
        finally:
            iv.prec = saved
        ci = ComplexInterval(re, im)
        if ci.width <= target:
            return ci
        prec *= 2
    return ComplexInterval(re, im)


# -- serialization -----------------------------------------------------------


def scalar_to_expr(s: CycScalar) -> str:
    """Canonical textual form over the grammar: rationals, z, ^, * and signs."""
    parts: list[str] = []
    for t, c in enumerate(s.coefficients()):
        if c == 0:
            continue
        mag = abs(c)
        if t == 0:
            body = str(mag)
        else:
            zt = "z" if t == 1 else f"z^{t}"
            body = zt if mag == 1 else f"{mag}*{zt}"
        if not parts:
            if c > 0:
                parts.append(body)
            elif "^" in body.split("*", 1)[0]:
                # grammar binds ^ outside unary minus: -z^2 means (-z)^2
                parts.append(f"-1*{body}")
            else:
                parts.append(f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts) if parts else "0"


def scalar_to_json(s: CycScalar, digits: int = 12) -> dict:
    ci = embed_complex(s, digits)
    return {
        "conductor": s.field.N,
        "coeffs": [str(c) for c in s.coefficients()],
        "approx": [round(ci.mid.real, digits), round(ci.mid.imag, digits)],
    }


def scalar_from_json(d: dict) -> CycScalar:
    field = CyclotomicField(int(d["conductor"]))
    return field.scalar([Fraction(c) for c in d["coeffs"]])


# -- prime embeddings --------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _least_primitive_root(p: int) -> int:
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ArithmeticError(f"no primitive root mod {p}")


@dataclass(frozen=True)
class PrimeEmbedding:
    """Ring homomorphism Z[zeta_N] -> F_p with p = 1 mod N."""

    N: int
    p: int
    zeta_image: int

    def __post_init__(self) -> None:
        if (self.p - 1) % self.N != 0:
            raise BadPrime(f"p={self.p} is not 1 mod {self.N}")
        if pow(self.zeta_image, self.N, self.p) != 1:
            raise BadPrime("zeta_image does not have order dividing N")
        for q in _prime_factors(self.N):
            if pow(self.zeta_image, self.N // q, self.p) == 1:
                raise BadPrime("zeta_image has order smaller than N")

    def reduce_scalar(self, s: CycScalar) -> int:
        if s.field.N != self.N:
            raise ConductorMismatch(
                f"embedding for conductor {self.N}, scalar has {s.field.N}"
            )
        p = self.p
        if s.den % p == 0:
            raise BadPrime(f"denominator divisible by p={p}")
        acc = 0
        z = self.zeta_image
        for c in reversed(s.nums):
            acc = (acc * z + c) % p
        return acc * pow(s.den, p - 2, p) % p

    def reduce_fraction(self, q: Fraction) -> int:
        p = self.p
        if q.denominator % p == 0:
            raise BadPrime(f"denominator divisible by p={p}")
        return q.numerator * pow(q.denominator, p - 2, p) % p


def prime_embeddings(
    N: int, *, above: int = 109, avoid: Sequence[int] = ()
) -> Iterator[PrimeEmbedding]:
    """Primes p = 1 mod N with p > above, coprime to every entry of `avoid`,
    in increasing order, each packaged with a verified zeta image."""
    avoid = [a for a in avoid if a not in (0, 1, -1)]
    p = above + 1
    p += (-(p - 1)) % N
    while True:
        if p > above and is_prime(p) and all(a % p != 0 for a in avoid):
            g = _least_primitive_root(p)
            yield PrimeEmbedding(N, p, pow(g, (p - 1) // N, p))
        p += N if N > 1 else 1


def find_prime_embedding(
    N: int, *, above: int = 109, avoid: Sequence[int] = ()
) -> PrimeEmbedding:
    return next(prime_embeddings(N, above=above, avoid=avoid))
