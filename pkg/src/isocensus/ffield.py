"""Exact arithmetic in one ambient finite field F_{p^D}.

Elements are represented as tuples of D integers in [0, p): the coefficients,
low degree first, of the polynomial representative modulo a fixed monic
irreducible modulus of degree D.  The modulus is chosen deterministically as
the lexicographically smallest monic irreducible of degree D over F_p, where
coefficient sequences are compared low-degree-first; two constructions of the
same (p, D) therefore agree bit for bit.

All computations are exact.  Subfields F_{p^d} for d | D are never built as
separate objects: they are the fixed sets of the d-th Frobenius power
x -> x^(p^d), and can be tested for membership or enumerated in place.

The raw tuple API on :class:`AmbientField` is the fast path used by the rest
of the package; :class:`FieldElement` is a thin operator-overloading wrapper
around it.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Optional

Coeffs = tuple[int, ...]

#: construction bound on p^D; towers used for preimage searches stay far below
DEFAULT_SIZE_LIMIT = 2**64

#: bound on p^d for operations that materialize a full subfield
DEFAULT_SCAN_LIMIT = 2**24


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3 * 10^24."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; intended for small n."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p (lists of ints, low degree first)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)

def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df and a:
        if a[-1]:
            c = a[-1] * inv_lead % p
            shift = len(a) - 1 - df
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fi) % p
        _trim(a)
    return a

def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    return _poly_mod(_poly_mul(a, b, p), f, p)

def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result

def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """True iff monic f has no factor of degree <= deg(f)/2.

    x^(p^i) - x is the product of all monic irreducibles of degree dividing i,
    so coprimality with it for every i up to deg(f)/2 rules out any nontrivial
    factorization.
    """
    d = len(f) - 1
    if d == 1:
        return True
    u = [0, 1]
    for _ in range(d // 2):
        u = _poly_powmod(u, p, f, p)
        diff = list(u)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(diff, f, p)
        if len(g) - 1 >= 1:
            return False
    return True


def _smallest_irreducible(p: int, degree: int) -> Coeffs:
    """Lexicographically smallest monic irreducible of the given degree.

    Candidates are ordered by their non-leading coefficient tuple
    (c_0, ..., c_{D-1}), compared low-degree-first.  The c_0 = 0 block is
    skipped for degree >= 2 since x then divides the candidate.
    """
    if degree == 1:
        return (0, 1)
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=degree - 1):
            f = [c0, *rest, 1]
            if _is_irreducible(f, p):
                return tuple(f)
    raise AssertionError(f"no irreducible of degree {degree} over F_{p}")


class AmbientField:
    """The field F_{p^D} with a deterministic modulus.

    Immutable after construction; every method is pure, so instances are safe
    to share across threads.  Raw-tuple methods (`add`, `mul`, ...) operate on
    coefficient tuples of length D.
    """

    def __init__(self, p: int, degree: int, *,
                 size_limit: int = DEFAULT_SIZE_LIMIT,
                 scan_limit: int = DEFAULT_SCAN_LIMIT):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if degree < 1:
            raise ValueError(f"extension degree must be positive, got {degree}")
        if p**degree > size_limit:
            raise ValueError(f"field size {p}^{degree} exceeds bound {size_limit}")
        self.p = p
        self.degree = degree
        self.scan_limit = scan_limit
        self.modulus: Coeffs = _smallest_irreducible(p, degree)
        self.zero: Coeffs = (0,) * degree
        self.one: Coeffs = tuple(1 if i == 0 else 0 for i in range(degree))
        self._frob_rows: dict[int, list[Coeffs]] = {}
        # fully reduced tails x^(degree + i) mod modulus for the hot multiply
        tails: list[Coeffs] = []
        if degree > 1:
            cur = [(-c) % p for c in self.modulus[:degree]]
            for _ in range(degree - 1):
                tails.append(tuple(cur))
                top = cur[degree - 1]
                cur = [0] + cur[:degree - 1]
                if top:
                    first = tails[0]
                    cur = [(x + top * y) % p for x, y in zip(cur, first)]
        self._tails = tails

    @property
    def order(self) -> int:
        return self.p**self.degree

    def __repr__(self) -> str:
        return f"AmbientField(p={self.p}, degree={self.degree})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, AmbientField)
                and self.p == other.p and self.degree == other.degree)

    def __hash__(self) -> int:
        return hash((self.p, self.degree))

    # -- raw tuple arithmetic ------------------------------------------------

    def from_int(self, c: int) -> Coeffs:
        return (c % self.p,) + (0,) * (self.degree - 1)

    def element_of(self, coeffs) -> Coeffs:
        t = tuple(c % self.p for c in coeffs)
        if len(t) > self.degree:
            t = tuple(_poly_mod(list(t), list(self.modulus), self.p))
        return t + (0,) * (self.degree - len(t))

    def add(self, a: Coeffs, b: Coeffs) -> Coeffs:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Coeffs, b: Coeffs) -> Coeffs:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Coeffs) -> Coeffs:
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a: Coeffs, b: Coeffs) -> Coeffs:
        p = self.p
        d = self.degree
        if d == 1:
            return (a[0] * b[0] % p,)
        # schoolbook product with deferred reduction; coefficients stay small
        # enough that one final modulo suffices
        acc = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    acc[i + j] += ai * bj
        out = acc[:d]
        tails = self._tails
        for i in range(d, 2 * d - 1):
            c = acc[i]
            if c:
                row = tails[i - d]
                for j in range(d):
                    out[j] += c * row[j]
        return tuple(x % p for x in out)

    def inv(self, a: Coeffs) -> Coeffs:
        """Multiplicative inverse by extended Euclid on representatives."""
        if not any(a):
            raise ZeroDivisionError("inverse of zero field element")
        if self.degree == 1:
            return (pow(a[0], self.p - 2, self.p),)
        p = self.p
        r0, r1 = list(self.modulus), _trim(list(a))
        t0, t1 = [], [1]
        while r1:
            # one division step of the extended Euclidean algorithm
            q: list[int] = []
            r = list(r0)
            inv_lead = pow(r1[-1], p - 2, p)
            while len(r) >= len(r1) and r:
                c = r[-1] * inv_lead % p
                shift = len(r) - len(r1)
                while len(q) < shift + 1:
                    q.append(0)
                q[shift] = c
                for i, fi in enumerate(r1):
                    r[shift + i] = (r[shift + i] - c * fi) % p
                _trim(r)
            r0, r1 = r1, r
            t0, t1 = t1, _trim([(x - y) % p for x, y in
                                itertools.zip_longest(t0, _poly_mul(q, t1, p),
                                                      fillvalue=0)])
        lead_inv = pow(r0[-1], p - 2, p)
        t0 = [c * lead_inv % p for c in t0]
        return tuple(t0) + (0,) * (self.degree - len(t0))

    def pow(self, a: Coeffs, e: int) -> Coeffs:
        """a^e by square-and-multiply; negative e inverts first."""
        if e < 0:
            a, e = self.inv(a), -e
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- Frobenius and subfields ----------------------------------------------

    def _frobenius_rows(self, e: int) -> list[Coeffs]:
        """Rows of the F_p-linear map a -> a^(p^e) on coefficient vectors."""
        rows = self._frob_rows.get(e)
        if rows is None:
            f, p = list(self.modulus), self.p
            xq = _poly_powmod([0, 1], p**e, f, p)
            rows = []
            cur = [1]
            for _ in range(self.degree):
                rows.append(tuple(cur) + (0,) * (self.degree - len(cur)))
                cur = _poly_mulmod(cur, xq, f, p)
            self._frob_rows[e] = rows
        return rows

    def frobenius(self, a: Coeffs, e: int) -> Coeffs:
        """a^(p^e), reduced along the Frobenius orbit (period divides D)."""
        e %= self.degree
        if e == 0:
            return a
        rows = self._frobenius_rows(e)
        p = self.p
        out = [0] * self.degree
        for j, aj in enumerate(a):
            if aj:
                row = rows[j]
                for i in range(self.degree):
                    out[i] = (out[i] + aj * row[i]) % p
        return tuple(out)

    def in_subfield(self, a: Coeffs, d: int) -> bool:
        if self.degree % d:
            raise ValueError(f"degree {d} does not divide ambient degree {self.degree}")
        return self.frobenius(a, d) == a

    def subfield_basis(self, d: int) -> list[Coeffs]:
        """F_p-basis of the fixed set of x -> x^(p^d), i.e. of F_{p^d}."""
        if self.degree % d:
            raise ValueError(f"degree {d} does not divide ambient degree {self.degree}")
        n, p = self.degree, self.p
        rows = self._frobenius_rows(d % n) if d % n else None
        # columns of (F - I) as a linear system acting on row vectors
        system = []
        for i in range(n):
            col = []
            for j in range(n):
                v = rows[j][i] if rows is not None else (1 if i == j else 0)
                if i == j:
                    v -= 1
                col.append(v % p)
            system.append(col)
        basis = _nullspace(system, p)
        assert len(basis) == d, "fixed space of Frobenius^d must have dimension d"
        return [tuple(v) for v in basis]

    def enumerate_subfield(self, d: int) -> list[Coeffs]:
        """All p^d elements of F_{p^d}, sorted lexicographically on coeffs."""
        if self.p**d > self.scan_limit:
            raise ValueError(f"subfield size {self.p}^{d} exceeds scan bound")
        basis = self.subfield_basis(d)
        p, n = self.p, self.degree
        out = []
        for combo in itertools.product(range(p), repeat=d):
            acc = [0] * n
            for c, vec in zip(combo, basis):
                if c:
                    for i in range(n):
                        acc[i] = (acc[i] + c * vec[i]) % p
            out.append(tuple(acc))
        out.sort()
        assert len(set(out)) == p**d
        return out

    def iter_elements(self) -> Iterator[Coeffs]:
        """All field elements in lexicographic coefficient order, lazily."""
        return itertools.product(range(self.p), repeat=self.degree) \
            if self.degree == 1 else map(tuple, self._iter_tuples())

    def _iter_tuples(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.p), repeat=self.degree)

    def mult_order(self, a: Coeffs, cap: int = 2**21) -> int:
        """Multiplicative order by power iteration; raises past cap."""
        if not any(a):
            raise ZeroDivisionError("order of zero")
        cur, n = a, 1
        while cur != self.one:
            cur = self.mul(cur, a)
            n += 1
            if n > cap:
                raise ValueError(f"multiplicative order exceeds cap {cap}")
        return n

    def element(self, coeffs) -> "FieldElement":
        return FieldElement(self, self.element_of(coeffs))


def _nullspace(matrix: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {v : matrix . v = 0} over F_p (matrix given as list of rows)."""
    m = [row[:] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivot_of_col: dict[int, int] = {}
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivot_of_col[c] = r
        r += 1
        if r == rows:
            break
    basis = []
    free_cols = [c for c in range(cols) if c not in pivot_of_col]
    for fc in free_cols:
        v = [0] * cols
        v[fc] = 1
        for c, pr in pivot_of_col.items():
            v[c] = -m[pr][fc] % p
        basis.append(v)
    return basis


class FieldElement:
    """A single element of an :class:`AmbientField`, with operator sugar."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: AmbientField, coeffs: Coeffs):
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.add(self.coeffs, other.coeffs))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.sub(self.coeffs, other.coeffs))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.mul(self.coeffs, other.coeffs))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field,
                            self.field.mul(self.coeffs, self.field.inv(other.coeffs)))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.coeffs, e))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldElement) and self.coeffs == other.coeffs \
            and self.field == other.field

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"FieldElement{self.coeffs}"

    def is_zero(self) -> bool:
        return not any(self.coeffs)


# ---------------------------------------------------------------------------
# spec-level operations


def make_field(p: int, degree: int, *, size_limit: int = DEFAULT_SIZE_LIMIT,
               scan_limit: int = DEFAULT_SCAN_LIMIT) -> AmbientField:
    """Construct F_{p^degree} with the deterministic modulus."""
    return AmbientField(p, degree, size_limit=size_limit, scan_limit=scan_limit)


def frobenius_power(x: FieldElement, e: int) -> FieldElement:
    """x^(p^e); a field automorphism for every e >= 0."""
    if e < 0:
        raise ValueError("Frobenius exponent must be nonnegative")
    return FieldElement(x.field, x.field.frobenius(x.coeffs, e))


def in_subfield(x: FieldElement, d: int) -> bool:
    """True iff x lies in F_{p^d}, i.e. x^(p^d) = x."""
    return x.field.in_subfield(x.coeffs, d)


def enumerate_subfield(field: AmbientField, d: int) -> list[FieldElement]:
    """The p^d elements of F_{p^d} inside the ambient field, in coeff order."""
    return [FieldElement(field, c) for c in field.enumerate_subfield(d)]


# ---------------------------------------------------------------------------
# roots in the multiplicative group
#
# Used by the isogeny machinery to find rational preimages under power maps.
# Only elements of small multiplicative order are ever passed in, so orders
# are found by plain iteration and discrete logs by scanning one small cyclic
# subgroup; no general discrete-logarithm machinery is involved.


def _order_of_small(field: AmbientField, a: Coeffs, cap: int) -> int:
    return field.mult_order(a, cap=cap)


def _element_of_order(field: AmbientField, t: int) -> Optional[Coeffs]:
    """Deterministic search for an element of exact multiplicative order t.

    Walks the field in canonical order, mapping each nonzero z to
    z^((p^D - 1)/t); the image has order t exactly when the t-part of z's
    order is full, which happens for a positive fraction of z.
    """
    big = field.order - 1
    if big % t:
        return None
    checks = [t // ell for ell in factorize(t)]
    for z in field.iter_elements():
        if not any(z):
            continue
        cand = field.pow(z, big // t)
        if cand == field.one and t > 1:
            continue
        if all(field.pow(cand, c) != field.one for c in checks):
            return cand
    return None


def subfield_generator(field: AmbientField, d: int) -> Coeffs:
    """First element (in coefficient order) generating F_{p^d}^*.

    The multiplicative order p^d - 1 is factored by trial division, so this
    is meant for subfields small enough to enumerate anyway.
    """
    target = field.p**d - 1
    if target == 0:
        raise ValueError("F_p^0 has no multiplicative generator")
    checks = [target // ell for ell in factorize(target)] if target > 1 else []
    for a in field.enumerate_subfield(d):
        if not any(a):
            continue
        if all(field.pow(a, c) != field.one for c in checks):
            return a
    raise AssertionError("multiplicative group of a finite field is cyclic")


def _prime_root(field: AmbientField, x: Coeffs, ell: int, order_cap: int) -> Optional[Coeffs]:
    r = _order_of_small(field, x, order_cap)
    if r % ell:
        # x stays inside its own cyclic group: invert ell modulo ord(x)
        return field.pow(x, pow(ell, -1, r))
    delta = _element_of_order(field, r * ell)
    if delta is None:
        return None
    w = field.pow(delta, ell)
    # <w> = <x> since both have order r in a cyclic ambient group
    cur, y = field.one, field.one
    for _ in range(r):
        if cur == x:
            return y
        cur = field.mul(cur, w)
        y = field.mul(y, delta)
    return None


def kth_root(field: AmbientField, x: Coeffs, k: int, *,
             order_cap: int = 2**21) -> Optional[Coeffs]:
    """Some y with y^k = x, or None if no such y exists in this field.

    x must have small multiplicative order (it comes from an enumerated
    rational-point group).  Roots are extracted one prime of k at a time.
    """
    if k < 1:
        raise ValueError("root index must be positive")
    if not any(x):
        return x
    y = x
    for ell, mult in sorted(factorize(k).items()):
        for _ in range(mult):
            y = _prime_root(field, y, ell, order_cap)
            if y is None:
                return None
    assert field.pow(y, k) == x
    return y
