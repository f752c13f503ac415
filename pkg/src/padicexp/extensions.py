"""Eisenstein extension towers over Z_p and its unramified extension.

A :class:`TowerRing` adjoins a root of a monic Eisenstein polynomial to a
base ring (ZpRing, UnramifiedRing or another TowerRing); elements are
coefficient vectors on the power basis of the generator.  Because every
step is Eisenstein, the valuation of ``sum c_i pi^i`` in top-uniformizer
units is ``min_i (e * v(c_i) + i)`` and the minimum is attained by a
single term, so it is exact.

The towers used downstream:

* the cyclotomic step: X^(p-1) + p over K (its root generates K(zeta_p));
* the Kummer step over the cyclotomic field: X^p + u*p*X - pi_cyc;
* the wild degree-p step over K: X*(X + u*p)^(p-1) + p, whose root is
  the (p-1)-st power of the Kummer generator;
* coherent-root steps over Q_p: X^(p-1) + u*p, then repeatedly
  X^p + u*p*X - (previous generator).

Division inside a tower is a valuation-pivoted linear solve against the
multiplication matrix over the base, so its precision cost is exactly the
valuation of the divisor's norm.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian

from .errors import NotAUnit, NotInSubfield, PrecisionExhausted, RingMismatch, RootCountMismatch
from .linalg import field_det, field_solve, solve_overdetermined
from .padic import INF, UnramifiedElement, UnramifiedRing, Zp, ZpRing, is_teichmuller_unit

_binom = math.comb


class TowerRing:
    """base[X]/(minpoly) for a monic Eisenstein minpoly over the base."""

    __slots__ = ("base", "minpoly", "e", "label", "_tails")

    def __init__(self, base, minpoly, label="custom"):
        self.base = base
        self.minpoly = list(minpoly)
        self.e = len(minpoly) - 1
        self.label = label
        self._tails = self._make_tails()

    def _make_tails(self):
        e = self.e
        tails = []
        cur = [-c for c in self.minpoly[:e]]
        tails.append(cur[:])
        for _ in range(e - 2):
            nxt = [self._bzero()] + cur[:-1]
            top = cur[-1]
            if not top.is_zero():
                for j in range(e):
                    nxt[j] = nxt[j] - top * self.minpoly[j]
            cur = nxt
            tails.append(cur[:])
        return tails

    def _bzero(self):
        return self.base.exact_zero()

    # -- structure ----------------------------------------------------------

    @property
    def p(self):
        return self.base.p

    @property
    def wp(self):
        return self.base.wp

    @property
    def abs_ram(self):
        return self.base.abs_ram * self.e

    @property
    def abs_deg(self):
        return self.base.abs_deg * self.e

    def is_eisenstein(self) -> bool:
        """Monic, inner coefficients of positive valuation, v(c_0) = 1."""
        mp = self.minpoly
        if not (mp[-1] - 1).is_zero():
            return False
        if mp[0].valuation() != 1:
            return False
        return all(c.is_zero() or c.valuation() >= 1 for c in mp[1:-1])

    def chain(self):
        """Rings from here down to the unramified / Z_p floor."""
        out = [self]
        r = self.base
        while isinstance(r, TowerRing):
            out.append(r)
            r = r.base
        out.append(r)
        return out

    # -- constructors --------------------------------------------------------

    def of(self, coeffs):
        cs = list(coeffs)
        cs += [self._bzero()] * (self.e - len(cs))
        if len(cs) != self.e:
            raise ValueError(f"expected at most {self.e} coefficients")
        x = TowerElement.__new__(TowerElement)
        x.ring = self
        x.coeffs = cs
        return x

    def of_const(self, b):
        return self.of([b])

    def const(self, v):
        """Constant element from an int or Fraction, recursing to the floor."""
        if isinstance(self.base, TowerRing):
            return self.of_const(self.base.const(v))
        if isinstance(v, int):
            return self.of_const(self.base.of(v, INF) if isinstance(self.base, ZpRing)
                                 else self.base.exact(v))
        return self.of_const(self.base.of(v))

    def zero(self, prec=None):
        return self.of([self.base.zero(prec)])

    def exact_zero(self):
        return self.of([self.base.exact_zero()])

    def one(self):
        return self.of_const(self._bone())

    def _bone(self):
        return self.base.one()

    def gen(self):
        return self.of([self._bzero(), self._bone()])

    def uniformizer(self):
        return self.gen()

    def minpoly_eval(self, x):
        """Evaluate the defining polynomial at any element of this ring."""
        acc = self.zero(INF)
        for c in reversed(self.minpoly):
            acc = acc * x + embed(c, self)
        return acc

    def minpoly_deriv_eval(self, x):
        acc = self.zero(INF)
        for k in range(self.e, 0, -1):
            acc = acc * x + embed(self.minpoly[k], self).scale_int(k)
        return acc

    def __repr__(self):
        return f"TowerRing({self.label}, e={self.e}, over {self.base!r})"


class TowerElement:
    __slots__ = ("ring", "coeffs")

    # -- queries -------------------------------------------------------------

    def valuation(self):
        """Valuation in top-uniformizer units (exact for Eisenstein steps)."""
        e = self.ring.e
        best = INF
        for i, c in enumerate(self.coeffs):
            v = c.valuation()
            t = v if v == INF else e * v + i
            if t < best:
                best = t
        return best

    def precision(self):
        e = self.ring.e
        return min((c.precision() if c.precision() == INF else
                    e * c.precision() + i) for i, c in enumerate(self.coeffs))

    def vp(self):
        v = self.valuation()
        return v if v == INF else Fraction(v, self.ring.abs_ram)

    def prec_p(self):
        pr = self.precision()
        return pr if pr == INF else Fraction(pr, self.ring.abs_ram)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def coords(self):
        return list(self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.ring is not self.ring:
                raise RingMismatch(
                    f"tower tags differ: {self.ring.label} vs {other.ring.label}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        if isinstance(other, (Zp, UnramifiedElement)):
            return embed(other, self.ring)
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
        e = self.ring.e
        a, b = self.coeffs, o.coeffs
        out = [None] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai.is_zero() and ai.precision() == INF:
                continue
            for j, bj in enumerate(b):
                t = ai * bj
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = self.ring._bzero()
        out = [zero if c is None else c for c in out]
        tails = self.ring._tails
        for k in range(2 * e - 2, e - 1, -1):
            c = out[k]
            if not (c.is_zero() and c.precision() == INF):
                tail = tails[k - e]
                for j in range(e):
                    tj = tail[j]
                    if not (tj.is_zero() and tj.precision() == INF):
                        out[j] = out[j] + c * tj
        return self.ring.of(out[:e])

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

    def mult_matrix(self):
        """Columns: coefficients of self * gen^j over the base."""
        cols = []
        cur = self
        g = self.ring.gen()
        for j in range(self.ring.e):
            cols.append(cur.coeffs)
            if j < self.ring.e - 1:
                cur = cur * g
        return [[cols[j][i] for j in range(self.ring.e)]
                for i in range(self.ring.e)]

    def inv(self):
        if self.is_zero():
            raise PrecisionExhausted("inverse of zero-to-precision element")
        sol = field_solve(self.mult_matrix(), [_unit_column(self.ring)])
        return self.ring.of(sol[0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise PrecisionExhausted("division by zero-to-precision element")
        sol = field_solve(o.mult_matrix(), [self.coeffs])
        return self.ring.of(sol[0])

    def __rtruediv__(self, other):
        return self.inv() * other

    def pshift(self, k: int):
        return self.ring.of([c.pshift(k) for c in self.coeffs])

    def div_int(self, n: int):
        return self.ring.of([c.div_int(n) for c in self.coeffs])

    def scale(self, z):
        """Multiply by a bottom-floor scalar, coefficient-wise."""
        return self.ring.of([c.scale(z) if isinstance(c, TowerElement)
                             else c * z for c in self.coeffs])

    def scale_int(self, n: int):
        return self.ring.of([c.scale_int(n) if isinstance(c, TowerElement)
                             else c * n for c in self.coeffs])

    def at_prec(self, P: int):
        return self.ring.of([c.at_prec(P) for c in self.coeffs])

    def with_prec(self, P: int):
        return self.ring.of([c.with_prec(P) for c in self.coeffs])

    def eq_prec(self, other) -> bool:
        return (self - other).is_zero()

    # -- trace / norm --------------------------------------------------------

    def trace(self):
        m = self.mult_matrix()
        acc = m[0][0]
        for i in range(1, self.ring.e):
            acc = acc + m[i][i]
        return acc

    def norm(self):
        return field_det(self.mult_matrix())

    def __repr__(self):
        return f"Tower[{self.ring.label}]({self.coeffs})"


def _unit_column(ring):
    col = [ring._bzero() for _ in range(ring.e)]
    col[0] = ring._bone()
    return col


# ---------------------------------------------------------------------------
# embeddings and flattening
# ---------------------------------------------------------------------------


def embed(x, ring):
    """Lift x (from any floor of ring's chain, Zp included) into ring."""
    if getattr(x, "ring", None) is ring:
        return x
    if isinstance(ring, TowerRing):
        return ring.of_const(embed(x, ring.base))
    if isinstance(ring, UnramifiedRing):
        if isinstance(x, UnramifiedElement) and ring.same(x.ring):
            return x
        if isinstance(x, Zp):
            return ring.of([x])
        raise RingMismatch(f"cannot embed {x!r} into {ring!r}")
    if isinstance(ring, ZpRing):
        if isinstance(x, Zp) and x.ring.p == ring.p:
            return x
        raise RingMismatch(f"cannot embed {x!r} into {ring!r}")
    raise RingMismatch(f"cannot embed {x!r} into {ring!r}")


def coords_over(x, target):
    """Flatten x to its coordinate vector over a lower floor of its chain."""
    if x.ring is target or (isinstance(target, UnramifiedRing)
                            and isinstance(x, UnramifiedElement)
                            and target.same(x.ring)):
        return [x]
    if isinstance(x, Zp):
        if isinstance(target, ZpRing) and x.ring.p == target.p:
            return [x]
        raise RingMismatch("cannot flatten below Z_p")
    return [c for coeff in x.coeffs for c in coords_over(coeff, target)]


def eval_poly(coeffs, point, ring=None):
    """Horner evaluation of sum coeffs[i] * point^i inside point's ring."""
    ring = ring or point.ring
    acc = ring.zero(INF)
    for c in reversed(list(coeffs)):
        acc = acc * point + embed(c, ring)
    return acc


def mult_matrix_over(x, target):
    """Multiplication-by-x matrix over a lower floor (block expansion)."""
    if x.ring is target or (isinstance(target, UnramifiedRing)
                            and isinstance(x, UnramifiedElement)
                            and target.same(x.ring)):
        return [[x]]
    if isinstance(x, Zp):
        return [[x]]
    if isinstance(x, UnramifiedElement):
        return x.mult_matrix()
    m = x.mult_matrix()
    blocks = [[mult_matrix_over(e, target) for e in row] for row in m]
    bdim = len(blocks[0][0])
    n = len(m) * bdim
    out = [[None] * n for _ in range(n)]
    for r in range(len(m)):
        for c in range(len(m)):
            for i in range(bdim):
                for j in range(bdim):
                    out[r * bdim + i][c * bdim + j] = blocks[r][c][i][j]
    return out


def trace_to(x, target):
    """Trace down the tower chain to the target floor."""
    while x.ring is not target and not (
            isinstance(target, UnramifiedRing) and isinstance(x, UnramifiedElement)
            and target.same(x.ring)):
        if isinstance(x, TowerElement):
            x = x.trace()
        elif isinstance(x, UnramifiedElement) and isinstance(target, ZpRing):
            x = x.trace()
        else:
            raise RingMismatch("target is not below the element's ring")
    return x


def norm_to(x, target):
    """Norm down the tower chain to the target floor."""
    while x.ring is not target and not (
            isinstance(target, UnramifiedRing) and isinstance(x, UnramifiedElement)
            and target.same(x.ring)):
        if isinstance(x, TowerElement):
            x = x.norm()
        elif isinstance(x, UnramifiedElement) and isinstance(target, ZpRing):
            x = x.norm()
        else:
            raise RingMismatch("target is not below the element's ring")
    return x


def trace_and_norm(x, target):
    return trace_to(x, target), norm_to(x, target)


# ---------------------------------------------------------------------------
# the ramified towers of the Galois-module construction
# ---------------------------------------------------------------------------


def cyclotomic_extension(K: UnramifiedRing) -> TowerRing:
    """Degree p-1 step generated by a root of X^(p-1) + p."""
    p = K.p
    mp = [K.exact(p)] + [K.zero(INF)] * (p - 2) + [K.one()]
    return TowerRing(K, mp, label="cyclotomic")


def kummer_extension(cyc: TowerRing, u: UnramifiedElement) -> TowerRing:
    """Degree p step over the cyclotomic field: X^p + u*p*X - pi_cyc."""
    K = cyc.base
    p = K.p
    c0 = -cyc.gen()
    c1 = cyc.of_const(u * p)
    mp = [c0, c1] + [cyc.zero(INF)] * (p - 2) + [cyc.one()]
    return TowerRing(cyc, mp, label=f"kummer(u={u.residue()})")


def wild_polynomial(K: UnramifiedRing, u: UnramifiedElement):
    """Coefficients of X*(X + u*p)^(p-1) + p over K (monic, degree p)."""
    p = K.p
    up = u * p
    coeffs = [K.zero(INF) for _ in range(p + 1)]
    coeffs[0] = K.exact(p)
    for j in range(p):
        coeffs[j + 1] = (up ** (p - 1 - j)) * _binom(p - 1, j)
    return coeffs


def wild_extension(K: UnramifiedRing, u: UnramifiedElement) -> TowerRing:
    """Degree p step over K generated by a root of X*(X+u*p)^(p-1) + p."""
    return TowerRing(K, wild_polynomial(K, u), label=f"wild(u={u.residue()})")


@dataclass
class RamifiedTower:
    """The fields attached to one Teichmueller unit u: cyclotomic step,
    Kummer step over it, and the wild degree-p field inside the latter."""

    K: UnramifiedRing
    u: UnramifiedElement
    cyclotomic: TowerRing
    kummer: TowerRing
    wild: TowerRing

    @property
    def p(self):
        return self.K.p

    def kummer_gen(self):
        return self.kummer.gen()

    def wild_gen_in_kummer(self):
        """Image of the wild generator: (Kummer generator)^(p-1)."""
        return self.kummer.gen() ** (self.p - 1)


def build_tower(K: UnramifiedRing, u) -> RamifiedTower:
    """Construct the three extension steps for a Teichmueller unit u."""
    u = K.of(u) if not isinstance(u, UnramifiedElement) else u
    if not is_teichmuller_unit(K, u):
        raise NotAUnit("u must satisfy u^(q-1) = 1 to working precision")
    cyc = cyclotomic_extension(K)
    kum = kummer_extension(cyc, u)
    wild = wild_extension(K, u)
    for step in (cyc, kum, wild):
        assert step.is_eisenstein(), f"{step.label} step is not Eisenstein"
    return RamifiedTower(K=K, u=u, cyclotomic=cyc, kummer=kum, wild=wild)


def different_exponent(wild: TowerRing) -> int:
    """Valuation of psi'(t) at the tautological root t, in t-units."""
    t = wild.gen()
    return wild.minpoly_deriv_eval(t).valuation()


# ---------------------------------------------------------------------------
# Hensel conjugates inside the wild degree-p field
# ---------------------------------------------------------------------------


def hensel_conjugates(wild: TowerRing, teich_reps=None, max_iter=40):
    """All p roots of the wild polynomial inside its own splitting field.

    Conjugate roots agree with the tautological root t to valuation 1 and
    first differ at valuation 2 (the different exponent 2(p-1) is spread
    evenly over the p-1 differences), so seeds t + c*t^2 over residue
    representatives c land each Newton iteration in a separated basin.

    Every division by psi' costs 2(p-1) uniformizer units of tracked
    precision, but Newton is self-correcting, so iterates are re-lifted to
    full working precision each round; the returned roots are stamped with
    the Krasner-style bound v(root error) >= v(residual) - v(psi'), which
    the final exact-modulus residual evaluation certifies.
    """
    K = wild.base
    p = wild.p
    wp = wild.wp
    t = wild.gen()
    if teich_reps is None:
        from .padic import teichmuller_lift
        teich_reps = [K.zero()] + [
            teichmuller_lift(K, K.from_residue(res))
            for res in _nonzero_residues(K)]
    diff_exp = 2 * (p - 1)
    roots = []
    for c in teich_reps:
        x = (t + t * t * embed(c, wild)).with_prec(wp)
        converged = False
        for _ in range(max_iter):
            fx = wild.minpoly_eval(x)
            if fx.is_zero():
                converged = True
                break
            step = fx / wild.minpoly_deriv_eval(x)
            if step.is_zero() or step.valuation() <= 2:
                break
            x = (x - step).with_prec(wp)
        if not converged:
            continue
        fx = wild.minpoly_eval(x)
        trust = fx.precision() - diff_exp
        if trust < wild.abs_ram:  # not even one trusted p-digit
            raise PrecisionExhausted(
                f"root certified only to {trust} uniformizer units")
        x = x.at_prec((trust - (wild.e - 1)) // wild.e)
        if all((x - r).valuation() < 3 for r in roots):
            roots.append(x)
    if len(roots) != p:
        raise RootCountMismatch(
            f"found {len(roots)} roots of the wild polynomial, expected {p}")
    roots.sort(key=lambda r: (r - t).valuation(), reverse=True)
    return roots


def _nonzero_residues(K: UnramifiedRing):
    for res in _cartesian(range(K.p), repeat=K.d):
        if any(res):
            yield res


def substitute_root(x: TowerElement, root: TowerElement) -> TowerElement:
    """Apply the K-automorphism sending the tower generator to `root`."""
    return eval_poly(x.coeffs, root)


def express_in_subfield(x: TowerElement, wild: TowerRing) -> TowerElement:
    """Write x in the kummer step as a K-combination of wild-generator powers.

    The wild generator embeds as g^(p-1) for the Kummer generator g; the
    overdetermined K-linear system must be consistent, otherwise x does
    not lie in the subfield.
    """
    kum = x.ring
    K = wild.base
    p = wild.p
    base_img = kum.gen() ** (p - 1)
    cols = []
    acc = kum.one()
    for i in range(p):
        cols.append(coords_over(acc, K))
        if i < p - 1:
            acc = acc * base_img
    rows = len(cols[0])
    M = [[cols[j][i] for j in range(p)] for i in range(rows)]
    sol, residual = solve_overdetermined(M, coords_over(x, K))
    for r in residual:
        if not r.is_zero():
            raise NotInSubfield(
                f"residual valuation {r.valuation()} below precision "
                f"{r.precision()}")
    return wild.of(sol)
