"""Exact-modulus arithmetic for Z_p and its unramified extension.

Scalars are p-adic numbers stored as ``val * p**(-shift)`` with ``val``
an integer known modulo ``p**(prec + shift)``; ``prec`` is the absolute
precision in p-adic digits (``math.inf`` for exact integer constants).
The shift makes fractional scratch values (gamma/p style coefficients,
Witt unghosting, square-root-of-inverse-different generators) first
class citizens while keeping all stored data integral.

Precision propagates pessimistically:

* add/sub: ``min`` of the operand precisions;
* mul: ``min(prec_a + v(b), prec_b + v(a))``;
* inverse and division by ``p**k`` pay the valuation of the divisor.

An operation whose result would carry no trusted digit raises
:class:`~padicexp.errors.PrecisionExhausted` instead of returning junk.
A representative that reduces to 0 at its precision is "zero to
precision": its reported valuation equals its precision.

The unramified extension ``K`` of degree ``d`` is ``Z_p[x]/(Phi)`` with
``Phi`` the lexicographically smallest monic degree-d lift that is
irreducible mod p (coefficients compared from the X^(d-1) coefficient
down to the constant).  Elements are coefficient vectors over the power
basis; the valuation of a vector is the minimum of its coefficient
valuations, exact because K/Q_p is unramified.
"""

import math
from fractions import Fraction
from itertools import product

from .errors import (
    ConvergenceDomain,
    InverseOfNonUnit,
    PrecisionExhausted,
    RingMismatch,
)

INF = math.inf


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Z_p scalars
# ---------------------------------------------------------------------------


class ZpRing:
    """Structural tag for Z_p scalars plus a default working precision."""

    __slots__ = ("p", "wp", "_pows")

    def __init__(self, p: int, wp: int):
        self.p = p
        self.wp = wp
        self._pows = [1, p]

    def pow(self, k: int) -> int:
        pw = self._pows
        while len(pw) <= k:
            pw.append(pw[-1] * self.p)
        return pw[k]

    # abs_ram / abs_deg let towers treat Z_p as the trivial floor.
    @property
    def abs_ram(self):
        return 1

    @property
    def abs_deg(self):
        return 1

    def of(self, x, prec=None):
        """Build a scalar from an int or Fraction at `prec` digits (default wp)."""
        if prec is None:
            prec = self.wp
        if isinstance(x, Zp):
            return x
        if isinstance(x, Fraction):
            den = x.denominator
            w = vp_int(den, self.p) if den != 1 else 0
            m = den // self.p**w
            if m == 1:
                return _mk(self, x.numerator, w, prec)
            minv = pow(m, -1, self.pow(prec + w if prec != INF else self.wp + w))
            return _mk(self, x.numerator * minv, w,
                       prec if prec != INF else self.wp)
        return _mk(self, x, 0, prec)

    def exact(self, n: int) -> "Zp":
        return _mk(self, n, 0, INF)

    def zero(self, prec=None):
        return self.of(0, prec)

    def exact_zero(self):
        return self.of(0, INF)

    def one(self):
        return self.exact(1)

    def coords(self, x):
        return [x]

    def __repr__(self):
        return f"ZpRing(p={self.p}, wp={self.wp})"


def _mk(ring, val, shift, prec):
    """Normalize and wrap raw (val, shift, prec) data."""
    if prec != INF:
        if prec <= 0:
            raise PrecisionExhausted(
                f"no trusted digits left (prec={prec}, p={ring.p})")
        val %= ring.pow(prec + shift)
    if val == 0:
        shift = 0
    elif shift > 0:
        p = ring.p
        while shift > 0 and val % p == 0:
            val //= p
            shift -= 1
    z = Zp.__new__(Zp)
    z.ring = ring
    z.val = val
    z.shift = shift
    z.prec = prec
    return z


class Zp:
    __slots__ = ("ring", "val", "shift", "prec")

    # -- queries ----------------------------------------------------------

    def valuation(self):
        """Valuation in p-digits; equals precision for a zero representative."""
        if self.val == 0:
            return self.prec
        return vp_int(self.val, self.ring.p) - self.shift

    def precision(self):
        return self.prec

    def vp(self):
        v = self.valuation()
        return v if v == INF else Fraction(v)

    def prec_p(self):
        return self.prec if self.prec == INF else Fraction(self.prec)

    def is_zero(self):
        return self.val == 0

    def is_unit(self):
        return self.val != 0 and self.valuation() == 0

    def coords(self):
        return [self]

    def lift(self) -> Fraction:
        """Canonical rational representative."""
        return Fraction(self.val, self.ring.pow(self.shift))

    def to_int(self) -> int:
        if self.shift != 0:
            raise ValueError("element is not integral")
        return self.val

    def residue(self) -> int:
        if self.shift != 0:
            raise ValueError("element is not integral")
        return self.val % self.ring.p

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Zp):
            if other.ring.p != self.ring.p:
                raise RingMismatch("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.of(other, INF if isinstance(other, int) else None)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        s, t = self.shift, o.shift
        if s == t:
            return _mk(self.ring, self.val + o.val, s, min(self.prec, o.prec))
        m = max(s, t)
        pw = self.ring.pow
        return _mk(self.ring,
                   self.val * pw(m - s) + o.val * pw(m - t),
                   m, min(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        return _mk(self.ring, -self.val, self.shift, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        pa, pb = self.prec, o.prec
        if pa == INF and pb == INF:
            prec = INF
        else:
            prec = min(pa + o.valuation(), pb + self.valuation())
        return _mk(self.ring, self.val * o.val, self.shift + o.shift, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        acc = self.ring.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def inv(self):
        """Field inverse (fractional results allowed)."""
        if self.val == 0:
            if self.prec == INF:
                raise ZeroDivisionError("inverse of exact zero")
            raise PrecisionExhausted("inverse of zero-to-precision element")
        p = self.ring.p
        w = vp_int(self.val, p)
        v = w - self.shift
        rel = self.ring.wp if self.prec == INF else self.prec - v
        if rel <= 0:
            raise PrecisionExhausted("no relative precision for inverse")
        u = self.val // self.ring.pow(w)
        ui = pow(u, -1, self.ring.pow(rel))
        if v > 0:
            return _mk(self.ring, ui, v, rel - v)
        return _mk(self.ring, ui * self.ring.pow(-v), 0, rel - v)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def pshift(self, k: int):
        """Multiply by p**(-k); costs k digits of absolute precision."""
        if k == 0:
            return self
        prec = self.prec if self.prec == INF else self.prec - k
        if k > 0:
            return _mk(self.ring, self.val, self.shift + k, prec)
        return _mk(self.ring, self.val * self.ring.pow(-k), self.shift, prec)

    def at_prec(self, P: int):
        """Cap the absolute precision at P digits."""
        if self.prec != INF and self.prec <= P:
            return self
        return _mk(self.ring, self.val, self.shift, P)

    def with_prec(self, P: int):
        """Reinterpret the stored representative at precision P.

        Raising precision is only sound inside self-correcting iterations
        (Newton), where the representative is an arbitrary lift.
        """
        return _mk(self.ring, self.val, self.shift, P)

    def div_int(self, n: int):
        """Exact-rational division by a nonzero integer."""
        if n == 0:
            raise ZeroDivisionError
        p = self.ring.p
        w = vp_int(n, p) if n % p == 0 else 0
        m = n // p**w
        x = self.pshift(w)
        if m == 1:
            return x
        if m == -1:
            return -x
        mod = self.ring.pow((self.ring.wp if x.prec == INF else x.prec) + x.shift)
        return _mk(x.ring, x.val * pow(m, -1, mod), x.shift,
                   x.prec if x.prec != INF else self.ring.wp)

    def scale(self, z):
        return self * z

    def scale_int(self, n: int):
        return self * n

    # -- comparisons -------------------------------------------------------

    def eq_prec(self, other) -> bool:
        """Equality at the shared precision min(prec_a, prec_b)."""
        o = self._coerce(other)
        return (self - o).is_zero()

    def __repr__(self):
        prec = "inf" if self.prec == INF else self.prec
        if self.shift:
            return f"Zp({self.val}/{self.ring.p}^{self.shift} + O({self.ring.p}^{prec}))"
        return f"Zp({self.val} + O({self.ring.p}^{prec}))"


# ---------------------------------------------------------------------------
# polynomials over F_p (for choosing Phi and mod-p inversion)
# ---------------------------------------------------------------------------


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    return _fp_trim([((a[i] if i < len(a) else 0)
                      - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _fp_mulmod(a, b, phi, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    d = len(phi) - 1
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for j in range(d):
                out[k - d + j] = (out[k - d + j] - c * phi[j]) % p
    return _fp_trim(out[:d] if len(out) > d else out)

def _fp_powmod(a, n, phi, p):
    acc = [1]
    base = a[:]
    while n:
        if n & 1:
            acc = _fp_mulmod(acc, base, phi, p)
        base = _fp_mulmod(base, base, phi, p)
        n >>= 1
    return acc


def _fp_divmod(a, b, p):
    a = a[:]
    binv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = (a[k + len(b) - 1] * binv) % p
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] = (a[k + j] - c * bj) % p
    return q, _fp_trim(a)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a[:]), _fp_trim(b[:])
    while b:
        _, r = _fp_divmod(a, b, p)
        a, b = b, r
    return a


def _fp_ext_euclid(a, m, p):
    """Inverse of a modulo the monic polynomial m over F_p."""
    r0, r1 = m[:], _fp_trim(a[:])
    s0, s1 = [], [1]
    while r1:
        q, r = _fp_divmod(r0, r1, p)
        qs = [0] * (len(q) + len(s1) - 1) if q and s1 else []
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    qs[i + j] = (qs[i + j] + qi * sj) % p
        s = [(x - y) % p for x, y in
             zip(s0 + [0] * max(0, len(qs) - len(s0)),
                 qs + [0] * max(0, len(s0) - len(qs)))]
        r0, r1, s0, s1 = r1, r, s1, _fp_trim(s)
    if len(r0) != 1:
        raise ZeroDivisionError("not invertible mod Phi")
    c = pow(r0[0], -1, p)
    return [(c * x) % p for x in s0]


def _is_irreducible_mod_p(phi, p):
    """phi monic over F_p; product-of-(X^{p^k}-X) criterion."""
    d = len(phi) - 1
    if d == 1:
        return True
    x = [0, 1]
    xq = _fp_powmod(x, p**d, phi, p)
    if _fp_sub(xq, x, p):
        return False
    for r in range(2, d + 1):
        if d % r == 0 and _is_prime_small(r):
            xr = _fp_powmod(x, p**(d // r), phi, p)
            diff = _fp_sub(xr, x, p)
            if not diff:
                return False
            g = _fp_gcd(phi, diff, p)
            if len(g) != 1:
                return False
    return True


def _is_prime_small(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def defining_polynomial(p: int, d: int) -> tuple:
    """Smallest monic degree-d lift irreducible mod p.

    Coefficient tuples (c_{d-1}, ..., c_0) over {0..p-1} are scanned in
    lexicographic order; the chosen literal coefficients are used for the
    characteristic-zero lift, so the ring tag is reproducible.
    """
    for tail in product(range(p), repeat=d):
        phi = [tail[d - 1 - i] for i in range(d)] + [1]
        if _is_irreducible_mod_p(phi, p):
            return tuple(phi)
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# the unramified extension K of degree d
# ---------------------------------------------------------------------------


class UnramifiedRing:
    """O_K = Z_p[x]/(Phi) with Phi monic irreducible mod p."""

    __slots__ = ("p", "d", "phi", "zp", "_tails", "_frob_image")

    def __init__(self, p: int, d: int, wp: int, phi=None):
        self.p = p
        self.d = d
        self.zp = ZpRing(p, wp)
        self.phi = tuple(phi) if phi is not None else defining_polynomial(p, d)
        self._tails = self._make_tails()
        self._frob_image = None

    def _make_tails(self):
        # X^k mod Phi for k = d .. 2d-2, exact integer vectors.
        d = self.d
        tails = []
        cur = [-c for c in self.phi[:d]]
        tails.append(cur[:])
        for _ in range(d - 2):
            nxt = [0] + cur[:-1]
            top = cur[-1]
            if top:
                for j in range(d):
                    nxt[j] -= top * self.phi[j]
            cur = nxt
            tails.append(cur[:])
        return tails

    @property
    def wp(self):
        return self.zp.wp

    @property
    def abs_ram(self):
        return 1

    @property
    def abs_deg(self):
        return self.d

    def same(self, other):
        return (isinstance(other, UnramifiedRing) and other.p == self.p
                and other.phi == self.phi)

    def of(self, coeffs, prec=None):
        """Build an element at `prec` digits (default: working precision)."""
        if isinstance(coeffs, UnramifiedElement):
            return coeffs
        if isinstance(coeffs, (int, Fraction, Zp)):
            coeffs = [coeffs]
        cs = [c if isinstance(c, Zp) else self.zp.of(c, prec) for c in coeffs]
        cs += [self.zp.exact(0)] * (self.d - len(cs))
        if len(cs) != self.d:
            raise ValueError(f"expected at most {self.d} coefficients")
        e = UnramifiedElement.__new__(UnramifiedElement)
        e.ring = self
        e.coeffs = cs
        return e

    def exact(self, coeffs):
        """Element with exact integer coefficients (no modulus applied)."""
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        return self.of([self.zp.exact(c) for c in coeffs])

    def zero(self, prec=None):
        return self.of([self.zp.zero(prec)])

    def exact_zero(self):
        return self.zero(INF)

    def one(self):
        return self.exact(1)

    def gen(self):
        if self.d == 1:
            # Phi = X, so the generator is 0; K = Q_p.
            return self.exact(0)
        return self.exact([0, 1])

    def coords(self, x):
        return list(x.coeffs)

    def from_residue(self, res) -> "UnramifiedElement":
        """Lift a residue-field coefficient tuple with integer literals."""
        return self.exact([int(c) % self.p for c in res])

    def frobenius_generator_image(self):
        """Root of Phi congruent to gen^p (Hensel), cached."""
        if self._frob_image is None:
            x = (self.gen() ** self.p).at_prec(self.wp)
            for _ in range(self.wp.bit_length() + 3):
                fx = self.eval_phi(x)
                if fx.is_zero() or fx.valuation() >= self.wp:
                    break
                x = x - fx * self.eval_phi_deriv(x).inv()
            self._frob_image = x
        return self._frob_image

    def eval_phi(self, x):
        acc = self.zero(INF)
        for c in reversed(self.phi):
            acc = acc * x + self.of(c)
        return acc

    def eval_phi_deriv(self, x):
        acc = self.zero(INF)
        for k in range(self.d, 0, -1):
            acc = acc * x + self.of(k * self.phi[k])
        return acc

    def __repr__(self):
        return f"UnramifiedRing(p={self.p}, d={self.d}, phi={list(self.phi)})"


class UnramifiedElement:
    __slots__ = ("ring", "coeffs")

    # -- queries ----------------------------------------------------------

    def valuation(self):
        return min(c.valuation() for c in self.coeffs)

    def precision(self):
        return min(c.precision() for c in self.coeffs)

    def vp(self):
        v = self.valuation()
        return v if v == INF else Fraction(v)

    def prec_p(self):
        pr = self.precision()
        return pr if pr == INF else Fraction(pr)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def is_unit(self):
        return not self.is_zero() and self.valuation() == 0

    def coords(self):
        return list(self.coeffs)

    def residue(self) -> tuple:
        """Reduction mod p as a coefficient tuple over F_p."""
        return tuple(c.residue() for c in self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, UnramifiedElement):
            if other.ring is not self.ring and not self.ring.same(other.ring):
                raise RingMismatch("unramified ring tags differ")
            return other
        if isinstance(other, int):
            return self.ring.exact(other)
        if isinstance(other, (Fraction, Zp)):
            return self.ring.of(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.ring.of([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return self.ring.of([-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.ring.of([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.ring.d
        if d == 1:
            return self.ring.of([self.coeffs[0] * o.coeffs[0]])
        a, b = self.coeffs, o.coeffs
        out = [None] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai.is_zero() and ai.prec == INF:
                continue
            for j, bj in enumerate(b):
                t = ai * bj
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = self.ring.zp.exact(0)
        out = [zero if c is None else c for c in out]
        tails = self.ring._tails
        for k in range(2 * d - 2, d - 1, -1):
            c = out[k]
            if not (c.is_zero() and c.prec == INF):
                tail = tails[k - d]
                for j in range(d):
                    if tail[j]:
                        out[j] = out[j] + c * tail[j]
        return self.ring.of(out[:d])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        acc = self.ring.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def at_prec(self, P: int):
        return self.ring.of([c.at_prec(P) for c in self.coeffs])

    def with_prec(self, P: int):
        return self.ring.of([c.with_prec(P) for c in self.coeffs])

    def inv(self):
        """Field inverse via mod-p inversion plus quadratic Hensel lifting."""
        if self.is_zero():
            raise PrecisionExhausted("inverse of zero-to-precision element")
        v = self.valuation()
        xhat = self.pshift(v) if v else self
        rel = xhat.precision()
        if rel == INF:
            rel = self.ring.wp
            xhat = xhat.at_prec(rel)
        p = self.ring.p
        res = [c.residue() for c in xhat.coeffs]
        z0 = _fp_ext_euclid(res, list(self.ring.phi), p)
        z = self.ring.of([self.ring.zp.of(c, rel) for c in
                          z0 + [0] * (self.ring.d - len(z0))])
        two = self.ring.of(2)
        k = 1
        while k < rel:
            z = z * (two - xhat * z)
            k *= 2
        return z.pshift(v)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def pshift(self, k: int):
        if k == 0:
            return self
        return self.ring.of([c.pshift(k) for c in self.coeffs])

    def div_int(self, n: int):
        return self.ring.of([c.div_int(n) for c in self.coeffs])

    def scale(self, z: Zp):
        return self.ring.of([c * z for c in self.coeffs])

    def scale_int(self, n: int):
        return self.ring.of([c * n for c in self.coeffs])

    def eq_prec(self, other) -> bool:
        return (self - other).is_zero()

    # -- structure maps ----------------------------------------------------

    def mult_matrix(self):
        """Matrix of multiplication by self on the power basis, over Z_p."""
        d = self.ring.d
        cols = []
        cur = self
        for _ in range(d):
            cols.append(cur.coeffs)
            cur = cur * self.ring.gen() if d > 1 else cur
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def trace(self) -> Zp:
        """Trace to Q_p (sum of diagonal of the multiplication matrix)."""
        m = self.mult_matrix()
        acc = self.ring.zp.exact(0)
        for i in range(self.ring.d):
            acc = acc + m[i][i]
        return acc

    def norm(self) -> Zp:
        from .linalg import field_det
        return field_det(self.mult_matrix())

    def frobenius(self):
        """The lift of x -> x^p fixing Z_p, via the Hensel image of gen."""
        img = self.ring.frobenius_generator_image()
        acc = self.ring.zero(INF)
        for c in reversed(self.coeffs):
            acc = acc * img + self.ring.of([c])
        return acc

    def __repr__(self):
        return f"Unram({self.coeffs})"


# ---------------------------------------------------------------------------
# context-level constructors and element transcendentals
# ---------------------------------------------------------------------------


def zp_ring(ctx) -> ZpRing:
    return ZpRing(ctx.p, ctx.work_prec)


def unramified_ring(ctx) -> UnramifiedRing:
    return UnramifiedRing(ctx.p, ctx.d, ctx.work_prec)


def ring_inverse(x):
    """Valuation-ring inverse: raises InverseOfNonUnit off the unit group."""
    if x.is_zero() or x.valuation() > 0:
        raise InverseOfNonUnit(f"valuation {x.valuation()} > 0")
    return x.inv()


def teichmuller_lift(ring: UnramifiedRing, a) -> UnramifiedElement:
    """The unique (q-1)-th root of unity congruent to a mod p.

    Iterates x -> x^q, which gains one digit per step and stabilizes at
    working precision.
    """
    x = ring.of(a) if not isinstance(a, UnramifiedElement) else a
    x = x.at_prec(ring.wp)
    q = ring.p**ring.d
    prev = x
    for _ in range(ring.wp + 2):
        nxt = prev**q
        if (nxt - prev).is_zero():
            prev = nxt
            break
        prev = nxt
    assert (prev**q - prev).is_zero(), "Teichmuller iteration failed to stabilize"
    return prev


def is_teichmuller_unit(ring: UnramifiedRing, x: UnramifiedElement) -> bool:
    """True when x^(q-1) = 1 to precision."""
    q = ring.p**ring.d
    return (x**(q - 1) - 1).is_zero()


def padic_exp(x):
    """exp on the maximal ideal of Z_p or O_K (p odd, unramified)."""
    if x.precision() == INF:
        x = x.at_prec(x.ring.wp)
    if x.is_zero():
        return x + 1
    if x.valuation() < 1:
        raise ConvergenceDomain(f"exp needs valuation >= 1, got {x.valuation()}")
    target = x.precision()
    acc = x - x  # zero at x's precision
    term = acc + 1
    n = 0
    while not term.is_zero() and term.valuation() < target:
        acc = acc + term
        n += 1
        term = (term * x).div_int(n)
    return acc


def padic_log(y):
    """log on 1 + P for Z_p or O_K (p odd, unramified)."""
    if y.precision() == INF:
        y = y.at_prec(y.ring.wp)
    t = y - 1
    if t.is_zero():
        return t
    if t.valuation() < 1:
        raise ConvergenceDomain(
            f"log needs y in 1 + P, got v(y-1) = {t.valuation()}")
    target = t.precision()
    vt = t.valuation()
    p = y.ring.p
    n_max = 1
    while n_max * vt - math.log(max(n_max, 1), p) < target:
        n_max += 1
    acc = t - t
    power = acc + 1
    for n in range(1, n_max + 1):
        power = power * t
        if power.is_zero():
            break
        term = power.div_int(n)
        acc = acc + term if n % 2 == 1 else acc - term
    return acc
