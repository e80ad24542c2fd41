"""Exact arithmetic in GF(p^n) and in relative extensions F_{q^m}/F_q.

An element ``c_0 + c_1 x + ... + c_{n-1} x^{n-1}`` of ``B[x]/(f)``, with the
``c_i`` in the base field ``B`` of order ``Q``, is encoded as the integer
``sum_i c_i * Q**i``.  Base-field elements therefore embed into an extension
with the same integer, and the integers ``0..p-1`` are always the prime
subfield.  Every arithmetic method accepts Python ints or numpy integer
arrays; scalars in give scalars out.

Two kinds of field exist:

* :class:`FieldSpec` -- ``GF(p^n)`` over the prime field, root symbol ``w``;
* :class:`ExtensionSpec` -- ``F_{q^m}`` over a :class:`FieldSpec` ``F_q``,
  root symbol ``z``.  One level of relativity is supported.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Sequence

import numpy as np

from . import linalg

MAX_ORDER = 1 << 16
TABLE_LIMIT = 1 << 10


class FieldError(ValueError):
    """Invalid field construction or field literal."""


class FieldMismatchError(FieldError):
    """Operands belong to different fields."""


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and _prime_factors(n) == [n]


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**n, raising FieldError if q is not a prime power."""
    ps = _prime_factors(q) if q >= 2 else []
    if len(ps) != 1:
        raise FieldError(f"{q} is not a prime power")
    p, n = ps[0], 0
    while q > 1:
        q //= p
        n += 1
    return p, n


# -- polynomials over a base field, low-to-high coefficient lists -------------


class _Scalars:
    """Scalar arithmetic of a base field (or of Z/p when base is None)."""

    def __init__(self, p: int, base: FiniteField | None):
        self.p = p
        self.base = base
        self.order = base.order if base is not None else p

    def add(self, a, b):
        return self.base.add(a, b) if self.base else (a + b) % self.p

    def sub(self, a, b):
        return self.base.sub(a, b) if self.base else (a - b) % self.p

    def mul(self, a, b):
        return self.base.mul(a, b) if self.base else (a * b) % self.p

    def inv(self, a):
        return self.base.inv(a) if self.base else pow(a, self.p - 2, self.p)


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mul(S: _Scalars, f: list[int], g: list[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = S.add(out[i + j], S.mul(a, b))
    return _trim(out)


def _poly_mod(S: _Scalars, f: list[int], g: list[int]) -> list[int]:
    f = list(f)
    dg = len(g) - 1
    lead_inv = S.inv(g[-1])
    while len(_trim(f)) - 1 >= dg:
        c = S.mul(f[-1], lead_inv)
        shift = len(f) - 1 - dg
        for j, b in enumerate(g):
            f[shift + j] = S.sub(f[shift + j], S.mul(c, b))
    return f


def _poly_sub(S: _Scalars, f: list[int], g: list[int]) -> list[int]:
    n = max(len(f), len(g))
    f = f + [0] * (n - len(f))
    g = g + [0] * (n - len(g))
    return _trim([S.sub(a, b) for a, b in zip(f, g)])


def _poly_powmod(S: _Scalars, f: list[int], e: int, g: list[int]) -> list[int]:
    result, base = [1], _poly_mod(S, f, g)
    while e:
        if e & 1:
            result = _poly_mod(S, _poly_mul(S, result, base), g)
        base = _poly_mod(S, _poly_mul(S, base, base), g)
        e >>= 1
    return result


def _poly_gcd(S: _Scalars, f: list[int], g: list[int]) -> list[int]:
    f, g = _trim(list(f)), _trim(list(g))
    while g:
        f, g = g, _trim(_poly_mod(S, f, g))
    return f


def _is_irreducible(S: _Scalars, low: list[int]) -> bool:
    """Rabin's test for a monic polynomial given low-to-high."""
    n = len(low) - 1
    if n == 1:
        return True
    if low[0] == 0:
        return False
    x = [0, 1]
    frob = {0: x}
    cur = x
    for i in range(1, n + 1):
        cur = _poly_powmod(S, cur, S.order, low)
        frob[i] = cur
    if _poly_sub(S, frob[n], x):
        return False
    for r in _prime_factors(n):
        g = _poly_gcd(S, _poly_sub(S, frob[n // r], x), low)
        if len(g) > 1:
            return False
    return True


def default_modulus(p: int, degree: int, base: FiniteField | None = None) -> tuple[int, ...]:
    """Lowest monic irreducible polynomial of the given degree, high-to-low.

    Candidates are ordered lexicographically by (c_{n-1}, ..., c_0).
    """
    if degree == 1:
        return (1, 0)
    S = _Scalars(p, base)
    Q = S.order
    for idx in range(Q**degree):
        tail = []
        rest = idx
        for _ in range(degree):
            rest, d = divmod(rest, Q)
            tail.append(d)
        low = tail + [1]  # tail[0] is c_0
        if _is_irreducible(S, low):
            return tuple(reversed(low))
    raise FieldError(f"no irreducible polynomial of degree {degree}")  # pragma: no cover


# -- fields ------------------------------------------------------------------


class FiniteField:
    """Common machinery for :class:`FieldSpec` and :class:`ExtensionSpec`."""

    symbol = "w"

    def __init__(self, p: int, base: FiniteField | None, degree: int, modulus: Sequence[int]):
        if degree < 1:
            raise FieldError("degree must be positive")
        self.p = p
        self.base = base
        self.degree = degree
        self.base_order = base.order if base is not None else p
        self.order = self.base_order**degree
        if self.order > MAX_ORDER:
            raise FieldError(f"field order {self.order} exceeds the budget 2^16")
        self.prime_degree = (base.prime_degree if base is not None else 1) * degree
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != degree + 1 or modulus[0] != 1:
            raise FieldError(f"modulus must be monic of degree {degree}: {modulus}")
        if any(not 0 <= c < self.base_order for c in modulus):
            raise FieldError(f"modulus coefficients out of range: {modulus}")
        self.modulus = modulus
        self._low = list(reversed(modulus))
        self._scalars = _Scalars(p, base)
        if not _is_irreducible(self._scalars, self._low):
            raise FieldError(f"modulus {modulus} is reducible over the base field")
        self.is_prime_field = base is None
        self._build_tables()

    # construction helpers

    def _slow_mul(self, a: int, b: int) -> int:
        if self.base is None:
            return (a * b) % self.p
        S = self._scalars
        fa, fb = self._coords_int(a), self._coords_int(b)
        prod = _poly_mul(S, _trim(fa), _trim(fb))
        rem = _poly_mod(S, prod, self._low) if prod else []
        return self._encode(rem)

    def _coords_int(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            a, d = divmod(a, self.base_order)
            out.append(d)
        return out

    def _encode(self, coords: Sequence[int]) -> int:
        v = 0
        for c in reversed(list(coords)[: self.degree]):
            v = v * self.base_order + int(c)
        return v

    def _build_tables(self) -> None:
        q = self.order
        n1 = q - 1
        ps = _prime_factors(n1) if n1 > 1 else []
        gen = 1
        for g in range(1, q):
            if all(self._slow_pow(g, n1 // r) != 1 for r in ps):
                gen = g
                break
        exp = np.zeros(max(n1, 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = 1
        for i in range(n1):
            exp[i] = cur
            log[cur] = i
            cur = self._slow_mul(cur, gen)
        self._exp, self._log = exp, log
        self.primitive_element = gen
        self._pow_p = np.array([self.p**i for i in range(self.prime_degree)], dtype=np.int64)
        self._add_t = self._mul_t = None
        elems = np.arange(q, dtype=np.int64)
        self._neg_t = self._digit_op(np.zeros(q, dtype=np.int64), elems, -1)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % max(n1, 1)]
        self._inv_t = inv
        if q <= TABLE_LIMIT:
            a, b = np.meshgrid(elems, elems, indexing="ij")
            self._add_t = self._digit_op(a, b, 1).ravel()
            self._mul_t = self._log_mul(a, b).ravel()

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _digit_op(self, a, b, sign: int):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.prime_degree == 1:
            return (a + sign * b) % self.p
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        ra, rb = a, b
        for w in self._pow_p:
            ra, da = np.divmod(ra, self.p)
            rb, db = np.divmod(rb, self.p)
            out = out + ((da + sign * db) % self.p) * w
        return out

    def _log_mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self._exp[(self._log[a] + self._log[b]) % max(self.order - 1, 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    # arithmetic

    @staticmethod
    def _out(r, *args):
        if all(isinstance(x, (int, np.integer)) for x in args):
            return int(r)
        return r

    def add(self, a, b):
        if self.p == 2:
            r = np.bitwise_xor(a, b)
        elif self._add_t is not None:
            r = self._add_t[np.asarray(a, dtype=np.int64) * self.order + b]
        else:
            r = self._digit_op(a, b, 1)
        return self._out(r, a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        return self._out(self._neg_t[np.asarray(a, dtype=np.int64)], a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul_t is not None:
            r = self._mul_t[np.asarray(a, dtype=np.int64) * self.order + b]
        else:
            r = self._log_mul(a, b)
        return self._out(r, a, b)

    def inv(self, a):
        arr = np.asarray(a, dtype=np.int64)
        if np.any(arr == 0):
            raise ZeroDivisionError("inverse of zero in " + str(self))
        return self._out(self._inv_t[arr], a)

    def inv_unchecked(self, a):
        """Vectorised inverse mapping 0 to 0."""
        return self._inv_t[np.asarray(a, dtype=np.int64)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        e = int(e)
        if e < 0:
            return self.pow(self.inv(a), -e)
        arr = np.asarray(a, dtype=np.int64)
        if e == 0:
            return self._out(np.ones_like(arr), a)
        n1 = max(self.order - 1, 1)
        r = self._exp[(self._log[arr] * (e % n1)) % n1]
        return self._out(np.where(arr == 0, 0, r), a)

    def frobenius(self, a, i: int = 1):
        """a -> a^(Q^i) with Q the base order (the base-linear Frobenius)."""
        return self.pow(a, self.base_order**i)

    def trace(self, a):
        """Relative trace a + a^Q + ... + a^(Q^(n-1)), landing in the base field."""
        if self.base is None:
            raise FieldError("the prime field has no base to trace down to")
        acc = 0
        term = a
        for _ in range(self.degree):
            acc = self.add(acc, term)
            term = self.frobenius(term)
        if np.any(np.asarray(acc) >= self.base_order):
            raise ArithmeticError("trace left the base field")  # pragma: no cover
        return acc

    # coordinates over the base field

    def coords(self, a: int) -> tuple[int, ...]:
        return tuple(self._coords_int(int(a)))

    def coord_array(self, a) -> np.ndarray:
        """Base coordinates of an array of elements, shape a.shape + (degree,)."""
        rest = np.asarray(a, dtype=np.int64)
        out = np.empty(rest.shape + (self.degree,), dtype=np.int64)
        for i in range(self.degree):
            rest, out[..., i] = np.divmod(rest, self.base_order)
        return out

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != self.degree:
            raise FieldError(f"expected {self.degree} coordinates")
        return self._encode(coords)

    @property
    def root(self) -> int:
        """The class of x in B[x]/(f)."""
        if self.degree == 1:
            return self._scalars.sub(0, self._low[0])
        return self.base_order

    # element wrappers

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            if self.base is not None and value.field == self.base:
                return FieldElement(self, value.value)
            raise FieldMismatchError(f"{value!r} is not in {self}")
        if isinstance(value, str):
            return FieldElement(self, parse_element(self, value))
        return FieldElement(self, int(value) % self.p)

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, int(value))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Iterator[FieldElement]:
        for v in range(self.order):
            yield FieldElement(self, v)

    def format(self, v: int) -> str:
        return format_element(self, v)

    def parse(self, text: str) -> int:
        return parse_element(self, text)

    # identity

    def _key(self):
        return (type(self).__name__, self.p, self.degree, self.modulus, self.base._key() if self.base else None)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return str(self)


class FieldSpec(FiniteField):
    """GF(p^n) = GF(p)[w]/(modulus)."""

    symbol = "w"

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if p**n > MAX_ORDER:
            raise FieldError(f"field order {p}^{n} exceeds the budget 2^16")
        base = FieldSpec(p) if n > 1 else None
        if modulus is None:
            modulus = default_modulus(p, n)
        super().__init__(p, base, n, modulus)

    def __str__(self):
        if self.degree == 1 and self.modulus == (1, 0):
            return f"GF({self.p})"
        return f"GF({self.p}^{self.degree}; {','.join(map(str, self.modulus))})"


class ExtensionSpec(FiniteField):
    """F_{q^m} = F_q[z]/(modulus) with F_q a :class:`FieldSpec`."""

    symbol = "z"

    def __init__(self, base: FieldSpec, m: int, modulus: Sequence | None = None):
        if not isinstance(base, FieldSpec):
            raise FieldError("the base of an extension must be a FieldSpec")
        if base.order**m > MAX_ORDER:
            raise FieldError(f"extension order {base.order}^{m} exceeds the budget 2^16")
        if modulus is None:
            modulus = default_modulus(base.p, m, base)
        else:
            modulus = [base(c).value if isinstance(c, (str, FieldElement)) else int(c) for c in modulus]
        super().__init__(base.p, base, m, modulus)

    @property
    def ext_degree(self) -> int:
        return self.degree

    def __str__(self):
        coeffs = ",".join(self.base.format(c) for c in self.modulus)
        return f"GF({self.base.order}^{self.degree} / {self.base}; {coeffs})"


def field_for_order(q: int) -> FieldSpec:
    """GF(q) with the default modulus."""
    p, n = prime_power(q)
    return FieldSpec(p, n)


# -- elements ----------------------------------------------------------------


class FieldElement:
    """An immutable element of a :class:`FiniteField`."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        value = int(value)
        if not 0 <= value < field.order:
            raise FieldError(f"{value} is not an element encoding of {field}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return other.value
            raise FieldMismatchError(f"cannot combine elements of {self.field} and {other.field}")
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _wrap(self, v) -> FieldElement:
        return FieldElement(self.field, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, other):
        return isinstance(other, FieldElement) and other.field == self.field and other.value == self.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficients over GF(p) in the (tower) power basis, low degree first."""
        out, v = [], self.value
        for _ in range(self.field.prime_degree):
            v, d = divmod(v, self.field.p)
            out.append(d)
        return tuple(out)

    @property
    def coords(self) -> tuple[int, ...]:
        """Coordinates over the immediate base field, low degree first."""
        return self.field.coords(self.value)

    def __repr__(self):
        return self.field.format(self.value)


# -- textual forms -------------------------------------------------------------


def format_element(F: FiniteField, v: int) -> str:
    """Canonical literal, e.g. ``2*w+1`` in GF(9) or ``(w+1)*z+w`` over GF(4)."""
    v = int(v)
    if F.base is None:
        return str(v)
    if F.degree == 1:
        return F.base.format(v) if isinstance(F, ExtensionSpec) else str(v)
    terms = []
    coords = F.coords(v)
    for i in range(F.degree - 1, -1, -1):
        c = coords[i]
        if c == 0:
            continue
        cs = F.base.format(c)
        if i == 0:
            terms.append(cs)
            continue
        mono = F.symbol if i == 1 else f"{F.symbol}^{i}"
        if c == 1:
            terms.append(mono)
        else:
            if "+" in cs:
                cs = f"({cs})"
            terms.append(f"{cs}*{mono}")
    return "+".join(terms) if terms else "0"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _tokens(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            break
        pos = mt.end()
        if mt.group(1) is not None:
            out.append(("int", mt.group(1)))
        elif mt.group(2) is not None:
            out.append(("sym", mt.group(2)))
        elif mt.group(3) is not None:
            out.append(("op", mt.group(3)))
    return out


def parse_element(F: FiniteField, text: str) -> int:
    """Evaluate an element literal (``+ - * ^`` and parentheses) inside F."""
    symbols = {}
    level = F
    while level is not None:
        if level.base is not None and level.symbol not in symbols:
            symbols[level.symbol] = level.root
        level = level.base
    toks = _tokens(str(text))
    if not toks:
        raise FieldError(f"empty element literal in {F}")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", "")

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def atom():
        kind, val = take()
        if kind == "int":
            return int(val) % F.p
        if kind == "sym":
            if val not in symbols:
                raise FieldError(f"unknown symbol {val!r} for {F}")
            return symbols[val]
        if (kind, val) == ("op", "("):
            r = expr()
            if take() != ("op", ")"):
                raise FieldError(f"unbalanced parentheses in {text!r}")
            return r
        raise FieldError(f"unexpected token {val!r} in {text!r}")

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "int":
                raise FieldError(f"exponent must be an integer in {text!r}")
            return F.pow(base, int(val))
        return base

    def term():
        r = factor()
        while peek() == ("op", "*"):
            take()
            r = F.mul(r, factor())
        return r

    def expr():
        sign = 1
        if peek() in (("op", "+"), ("op", "-")):
            sign = -1 if take()[1] == "-" else 1
        r = term()
        if sign < 0:
            r = F.neg(r)
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            r = F.add(r, t) if op == "+" else F.sub(r, t)
        return r

    value = expr()
    if pos != len(toks):
        raise FieldError(f"trailing input in element literal {text!r}")
    return int(value)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _unwrap_gf(text: str) -> str:
    text = text.strip()
    if not (text.startswith("GF(") and text.endswith(")")):
        raise FieldError(f"field literal must look like GF(...): {text!r}")
    return text[3:-1]


def _parse_order(head: str) -> tuple[int, int | None]:
    mt = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+))?\s*", head)
    if mt is None:
        raise FieldError(f"bad field order {head!r}")
    return int(mt.group(1)), int(mt.group(2)) if mt.group(2) else None


def parse_field(text: str) -> FiniteField:
    """Parse ``GF(p^n; c_n,...,c_0)``, ``GF(q)`` or ``GF(q^m / <base>; ...)``."""
    inner = _unwrap_gf(text)
    parts = _split_top(inner, ";")
    if len(parts) > 2:
        raise FieldError(f"too many ';' in {text!r}")
    head = parts[0]
    coeff_text = parts[1] if len(parts) == 2 else None
    slash = _split_top(head, "/")
    if len(slash) == 2:
        base = parse_field(slash[1])
        return parse_extension(f"GF({slash[0]}{';' + coeff_text if coeff_text is not None else ''})", base)
    q, n = _parse_order(head)
    if n is None:
        p, n = prime_power(q)
    else:
        p = q
    coeffs = None
    if coeff_text is not None:
        try:
            coeffs = [int(c) for c in coeff_text.split(",")]
        except ValueError as exc:
            raise FieldError(f"bad modulus in {text!r}") from exc
    return FieldSpec(p, n, coeffs)


def parse_extension(text: str, base: FieldSpec) -> ExtensionSpec:
    """Parse ``GF(q^m; c_m,...,c_0)`` as an extension of `base` (q must equal |base|)."""
    inner = _unwrap_gf(text)
    parts = _split_top(inner, ";")
    slash = _split_top(parts[0], "/")
    if len(slash) == 2:
        if parse_field(slash[1]) != base:
            raise FieldError(f"extension base {slash[1].strip()} does not match {base}")
    q, m = _parse_order(slash[0])
    if m is None:
        raise FieldError(f"extension order must be written q^m: {text!r}")
    if q != base.order:
        raise FieldError(f"extension over GF({q}) but base field is {base}")
    coeffs = None
    if len(parts) == 2:
        coeffs = [parse_element(base, c) for c in parts[1].split(",")]
    return ExtensionSpec(base, m, coeffs)


# -- bases and duality over the base field ---------------------------------------


class FieldBasis:
    """An ordered basis gamma_1..gamma_m of a field over its base field."""

    def __init__(self, field: FiniteField, elements: Iterable):
        if field.base is None:
            raise FieldError("a basis needs a field with a base field")
        vals = tuple(field(e).value if not isinstance(e, (int, np.integer)) else int(e) for e in elements)
        if len(vals) != field.degree:
            raise FieldError(f"a basis of {field} has {field.degree} elements, got {len(vals)}")
        self.field = field
        self.values = vals
        self.matrix = np.array([field.coords(v) for v in vals], dtype=np.int64).reshape(field.degree, field.degree)
        try:
            self._inverse = linalg.inverse(field.base, self.matrix)
        except linalg.SingularMatrixError as exc:
            raise FieldError("elements are not linearly independent over the base field") from exc

    @classmethod
    def power(cls, field: FiniteField) -> FieldBasis:
        """The basis 1, x, ..., x^(m-1) of the defining power basis."""
        return cls(field, [field.base_order**i for i in range(field.degree)])

    @property
    def elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.values)

    def coords(self, a) -> np.ndarray:
        """Base coordinates of a (scalar or array) w.r.t. this basis, trailing axis of length m."""
        raw = self.field.coord_array(a)
        return linalg.matmul(self.field.base, raw.reshape(-1, self.field.degree), self._inverse).reshape(raw.shape)

    def from_coords(self, c) -> np.ndarray | int:
        c = np.asarray(c, dtype=np.int64)
        raw = linalg.matmul(self.field.base, c.reshape(-1, self.field.degree), self.matrix)
        vals = np.array([self.field._encode(row) for row in raw.tolist()], dtype=np.int64)
        return int(vals[0]) if c.ndim == 1 else vals.reshape(c.shape[:-1])

    def gram(self) -> np.ndarray:
        """The matrix [Trace(gamma_i gamma_j)] over the base field."""
        F = self.field
        return np.array([[F.trace(F.mul(a, b)) for b in self.values] for a in self.values], dtype=np.int64)

    def dual(self) -> FieldBasis:
        X = linalg.inverse(self.field.base, self.gram())
        F = self.field
        new = []
        for row in X.tolist():
            acc = 0
            for coef, g in zip(row, self.values):
                acc = F.add(acc, F.mul(coef, g))
            new.append(acc)
        return FieldBasis(F, new)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, FieldBasis) and other.field == self.field and other.values == self.values

    def __hash__(self):
        return hash((self.field, self.values))

    def __repr__(self):
        return "{" + ", ".join(self.field.format(v) for v in self.values) + "}"


def field_trace(a: FieldElement) -> FieldElement:
    """Trace(a) = a + a^q + ... + a^(q^(m-1)) as an element of the base field."""
    return FieldElement(a.field.base, a.field.trace(a.value))


def dual_basis(G: FieldBasis) -> FieldBasis:
    """The unique basis G' with Trace(g'_i g_j) = delta_ij."""
    return G.dual()


def coords_over_basis(a: FieldElement, G: FieldBasis) -> tuple[FieldElement, ...]:
    if a.field != G.field:
        raise FieldMismatchError(f"{a!r} is not in {G.field}")
    return tuple(FieldElement(G.field.base, c) for c in G.coords(a.value).tolist())


def from_coords(coords: Sequence, G: FieldBasis) -> FieldElement:
    vals = [int(c) for c in coords]
    return FieldElement(G.field, G.from_coords(vals))
