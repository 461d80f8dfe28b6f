"""Exact coefficient fields: prime fields F_p and the rationals.

Prime-field arrays are ``int64`` reduced mod p; rational arrays use ``object``
dtype holding :class:`fractions.Fraction`.  No floating point anywhere.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """The field with p elements."""

    dtype = np.int64
    is_prime = True

    def __init__(self, p: int):
        p = int(p)
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p >= 2**31:
            raise FieldError("primes >= 2**31 are not supported")
        self.p = p
        self.size = p
        self.characteristic = p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    # scalars
    def elem(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    zero = 0
    one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def to_json(self, a):
        return int(a)

    def spec(self):
        return {"prime": self.p}

    def elements(self):
        return range(self.p)

    def nonzero_elements(self):
        return range(1, self.p)

    def random(self, rng, shape=None):
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    # arrays
    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def array(self, data):
        arr = np.array(data, dtype=object)
        if arr.size == 0:
            return np.zeros(arr.shape, dtype=np.int64)
        return np.vectorize(self.elem, otypes=[np.int64])(arr)

    def norm(self, arr):
        return np.asarray(arr, dtype=np.int64) % self.p

    def matmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        inner = a.shape[-1] if a.ndim else 1
        if inner and (self.p - 1) ** 2 * inner >= 2**62:
            return (a.astype(object) @ b.astype(object) % self.p).astype(np.int64)
        return (a @ b) % self.p

    def tensordot(self, a, b, axes):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p > 2**20:
            res = np.tensordot(a.astype(object), b.astype(object), axes=axes) % self.p
            return np.asarray(res, dtype=np.int64)
        return np.tensordot(a, b, axes=axes) % self.p


class RationalField:
    """The field of rational numbers with exact Fraction arithmetic."""

    dtype = object
    is_prime = False
    size = None
    characteristic = 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def elem(self, x) -> Fraction:
        return Fraction(x)

    zero = Fraction(0)
    one = Fraction(1)

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
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def to_json(self, a):
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def spec(self):
        return "rational"

    def elements(self):
        raise FieldError("the rationals cannot be enumerated")

    def nonzero_elements(self):
        # small heights first; used only for bounded searches
        for n in itertools.count(1):
            for s in (1, -1):
                yield Fraction(s * n)

    def random(self, rng, shape=None):
        vals = rng.integers(-9, 10, size=shape)
        if shape is None:
            return Fraction(int(vals))
        out = np.empty(np.shape(vals), dtype=object)
        for idx, v in np.ndenumerate(vals):
            out[idx] = Fraction(int(v))
        return out

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def array(self, data):
        arr = np.array(data, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = Fraction(v)
        return out

    def norm(self, arr):
        arr = np.asarray(arr, dtype=object)
        return arr

    def matmul(self, a, b):
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        if a.shape[-1] == 0:
            return self.zeros(a.shape[:-1] + b.shape[1:])
        return a @ b

    def tensordot(self, a, b, axes):
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        res = np.tensordot(a, b, axes=axes)
        return self.array(res)


Field = PrimeField | RationalField


def parse_field(spec) -> Field:
    """Parse the JSON field description: ``{"prime": p}`` or ``"rational"``."""
    if spec == "rational":
        return RationalField()
    if isinstance(spec, dict) and set(spec) == {"prime"}:
        return PrimeField(spec["prime"])
    raise FieldError(f"unrecognised field {spec!r}; expected 'rational' or {{'prime': p}}")
