"""Finite-length Witt vectors over p-adic rings.

Arithmetic goes through ghost coordinates: the n-th ghost component is
``sum_{i<=n} p^i * comp_i^(p^(n-i))``, the ghost map linearizes addition
and multiplication, and unghosting divides by ``p^n`` at level n, so a
computation touching levels up to n needs ``1 + 2 + ... + n`` guard
digits on top of the target precision.  Components of vectors over a
valuation ring must stay integral; a division that leaves負 valuation
raises NotInGhostImage rather than silently keeping a fractional entry.

The bracket map sends an integral series h to the Witt vector whose ghost
vector is ``<h(x), h(f_u(x)), h(f_u(f_u(x))), ...>`` for the distinguished
polynomial ``f_u(X) = X^p + u p X``; its components exist integrally, so
a failed unghost there signals a precision shortfall, not mathematics.
"""

from dataclasses import dataclass

from .errors import IntegralityViolation, NotInGhostImage, RingMismatch
from .extensions import embed
from .padic import INF, Zp
from .series import TruncatedSeries, make_series, series_exp


@dataclass
class WittVector:
    ring: object
    comps: list

    def __len__(self):
        return len(self.comps)

    def __getitem__(self, i):
        return self.comps[i]

    def ghost(self):
        return ghost(self)

    def extended(self, length):
        """Zero-extend to the requested length."""
        if length <= len(self.comps):
            return self
        pad = [self.ring.exact_zero()] * (length - len(self.comps))
        return WittVector(self.ring, self.comps + pad)

    def is_integral(self):
        return all(c.is_zero() or c.vp() >= 0 for c in self.comps)


def witt(ring, comps) -> WittVector:
    return WittVector(ring, [_as_elem(ring, c) for c in comps])


def _as_elem(ring, c):
    if getattr(c, "ring", None) is ring:
        return c
    if isinstance(c, int):
        if hasattr(ring, "const"):
            return ring.const(c)
        if hasattr(ring, "exact"):
            return ring.exact(c)
        return ring.of(c, INF)
    return embed(c, ring)


def ghost(w: WittVector) -> list:
    """Ghost vector <g_0, ..., g_n> with g_n = sum p^i comp_i^(p^(n-i))."""
    p = w.ring.p
    out = []
    for n in range(len(w.comps)):
        acc = None
        for i in range(n + 1):
            t = (w.comps[i] ** (p ** (n - i))).pshift(-i)
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def unghost(ring, ghost_vec, require_integral=True) -> WittVector:
    """Invert the ghost map; level n costs n digits of precision."""
    p = ring.p
    comps = []
    for n, g in enumerate(ghost_vec):
        acc = g
        for i in range(n):
            acc = acc - (comps[i] ** (p ** (n - i))).pshift(-i)
        lam = acc.pshift(n)
        if require_integral and not lam.is_zero() and lam.vp() < 0:
            raise NotInGhostImage(
                f"component {n} has valuation {lam.vp()} < 0")
        comps.append(lam)
    return WittVector(ring, comps)


def _check_compat(a: WittVector, b: WittVector):
    if a.ring is not b.ring:
        raise RingMismatch("Witt vectors over different rings")
    if len(a.comps) != len(b.comps):
        raise RingMismatch("Witt vectors of different lengths")


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    _check_compat(a, b)
    ga, gb = ghost(a), ghost(b)
    return unghost(a.ring, [x + y for x, y in zip(ga, gb)])


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    _check_compat(a, b)
    ga, gb = ghost(a), ghost(b)
    return unghost(a.ring, [x * y for x, y in zip(ga, gb)])


def witt_neg(a: WittVector) -> WittVector:
    # p odd: negation is componentwise.
    return WittVector(a.ring, [-c for c in a.comps])


# ---------------------------------------------------------------------------
# the bracket map and the relative Artin-Hasse exponential
# ---------------------------------------------------------------------------


def lubin_tate_poly_eval(y, u):
    """f_u(y) = y^p + u*p*y evaluated in y's ring (u a Z_p unit)."""
    p = y.ring.p
    return y ** p + y.scale(u * p)


def bracket_map(h: TruncatedSeries, x, u, length: int) -> WittVector:
    """Witt vector with ghost <h(x), h(f_u(x)), h(f_u(f_u(x))), ...>.

    h must have Z_p coefficients; x must lie in the maximal ideal of its
    ring.  Integral components exist, so a NotInGhostImage here means the
    guard digits were insufficient.
    """
    if x.is_zero() or x.vp() <= 0:
        raise ValueError("bracket map needs |x| < 1")
    ring = x.ring
    pts = [x]
    for _ in range(length - 1):
        pts.append(lubin_tate_poly_eval(pts[-1], u))
    gvec = []
    for y in pts:
        acc = ring.exact_zero()
        for c in reversed(h.coeffs):
            acc = acc * y + embed(c, ring)
        gvec.append(acc)
    return unghost(ring, gvec)


def artin_hasse_relative(lam: WittVector, D: int) -> TruncatedSeries:
    """E(lam, X) = exp(sum_i ghost_i(lam) X^(p^i) / p^i), truncated at D.

    For components in the valuation ring the result lies in 1 + X O[[X]];
    a non-integral output coefficient is a hard failure.
    """
    ring = lam.ring
    p = ring.p
    gvec = ghost(lam)
    entries = {}
    deg = 1
    for i, g in enumerate(gvec):
        if deg > D:
            break
        entries[deg] = g.pshift(i)
        deg *= p
    series = series_exp(make_series(ring, entries, D))
    if not lam.is_integral():
        return series  # caller opted into non-integral input
    for n, c in enumerate(series.coeffs):
        if not c.is_zero() and c.vp() < 0:
            raise IntegralityViolation(
                f"relative Artin-Hasse coefficient {n} has vp {c.vp()}")
    return series


def classical_artin_hasse(zp_ring, D: int) -> TruncatedSeries:
    """E(X) = exp(X + X^p/p + X^(p^2)/p^2 + ...) over Z_p."""
    one = zp_ring.of(1)
    lam = WittVector(zp_ring, [one] + [zp_ring.exact_zero()] *
                     (_levels_for(zp_ring.p, D) - 1))
    return artin_hasse_relative(lam, D)


def _levels_for(p: int, D: int) -> int:
    n = 1
    deg = p
    while deg <= D:
        n += 1
        deg *= p
    return n


def lemma_valuation_pattern(h: TruncatedSeries, x, u, length: int) -> dict:
    """Valuation pattern of [h(x)] against v_p(a_0).

    Reports the first index r with |comp_r| = 1 (None if absent) and
    whether the pattern matches the constant coefficient: v_p(a_0) = r
    exactly when components 0..r-1 have |.| < 1 and component r is a unit;
    a_0 = 0 forces every component below 1 in absolute value.
    """
    w = bracket_map(h, x, u, length)
    flags = []
    first_unit = None
    for i, c in enumerate(w.comps):
        unit = (not c.is_zero()) and c.vp() == 0
        flags.append(unit)
        if unit and first_unit is None:
            first_unit = i
    a0 = h.coeffs[0]
    expected = None if a0.is_zero() else int(a0.vp())
    if expected is None:
        consistent = first_unit is None
    else:
        # first_unit == expected already forces flags[:expected] all False.
        consistent = first_unit == expected
    return {
        "first_unit_index": first_unit,
        "unit_flags": flags,
        "a0_valuation": None if a0.is_zero() else int(a0.vp()),
        "consistent": consistent,
        "witt": w,
    }
