"""Residue-field combinatorics and the norm-group verifications.

Everything here is desk-scale brute force over the residue field k of q =
p^d elements: trace kernels of the linear forms y -> Tr(v^p y), the
projective correspondence between unit classes and degree-p subfields,
line containment in P(k), Frobenius equivariance, normal-basis
decompositions of the valuation ring, the multiplicative generation of
(1 + P)/(1 + P^2), an abstract wreath-product model, and the
endomorphism series of the distinguished one-dimensional formal group
law X^q + p X.

Norm groups are verified through these finite invariants (kernels mod p,
congruences mod p^2) rather than by constructing a reciprocity map: the
correspondence and containment statements reduce exactly to them.
"""

from dataclasses import dataclass
from itertools import product as _cartesian

from .errors import CheckFailed, DuplicateFingerprint, PivotNotUnit
from .padic import INF, UnramifiedElement, UnramifiedRing, teichmuller_lift, vp_int
from .series import TruncatedSeries, make_series, one_series


# ---------------------------------------------------------------------------
# the residue field k = F_q as tuples over F_p
# ---------------------------------------------------------------------------


class ResidueField:
    """F_q = F_p[x]/(Phi mod p), elements as length-d int tuples."""

    def __init__(self, p: int, d: int, phi):
        self.p = p
        self.d = d
        self.q = p**d
        self.phi = tuple(c % p for c in phi)

    @classmethod
    def of_ring(cls, K: UnramifiedRing):
        return cls(K.p, K.d, K.phi)

    def zero(self):
        return (0,) * self.d

    def one(self):
        return (1,) + (0,) * (self.d - 1)

    def elements(self):
        for t in _cartesian(range(self.p), repeat=self.d):
            yield t

    def nonzero(self):
        for t in self.elements():
            if any(t):
                yield t

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def scale(self, c, a):
        return tuple((c * x) % self.p for x in a)

    def mul(self, a, b):
        d, p = self.d, self.p
        out = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        for k in range(2 * d - 2, d - 1, -1):
            c = out[k]
            if c:
                out[k] = 0
                for j in range(d):
                    out[k - d + j] = (out[k - d + j] - c * self.phi[j]) % p
        return tuple(out[:d])

    def pow(self, a, n):
        if not any(a):
            return self.one() if n == 0 else self.zero()
        n %= self.q - 1
        acc = self.one()
        base = a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def inv(self, a):
        return self.pow(a, self.q - 2)

    def frobenius(self, a):
        return self.pow(a, self.p)

    def trace(self, a):
        """Trace to F_p: a + a^p + ... + a^(p^(d-1)), constant term."""
        acc = self.zero()
        x = a
        for _ in range(self.d):
            acc = self.add(acc, x)
            x = self.frobenius(x)
        assert all(c == 0 for c in acc[1:]), "trace landed outside F_p"
        return acc[0]

    def encode(self, a) -> int:
        return sum(c * self.p**i for i, c in enumerate(a))


# ---------------------------------------------------------------------------
# projective points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    """A class in k^x / F_p^x, stored by its minimal-encoding representative."""

    rep: tuple

    @classmethod
    def of(cls, k: ResidueField, a) -> "ProjectivePoint":
        best = None
        for c in range(1, k.p):
            cand = k.scale(c, a)
            if best is None or k.encode(cand) < k.encode(best):
                best = cand
        return cls(rep=best)


def projective_points(k: ResidueField):
    """The (q-1)/(p-1) points of P(k), canonical representatives."""
    seen = set()
    out = []
    for a in k.nonzero():
        pt = ProjectivePoint.of(k, a)
        if pt.rep not in seen:
            seen.add(pt.rep)
            out.append(pt)
    out.sort(key=lambda pt: k.encode(pt.rep))
    return out


# ---------------------------------------------------------------------------
# trace module membership and kernels
# ---------------------------------------------------------------------------


def z_membership(x) -> bool:
    """x in O_K lies in the trace module iff Tr_{K/Qp}(x) is divisible by p."""
    tr = x.trace()
    return tr.is_zero() or tr.valuation() >= 1


def trace_kernel(k: ResidueField, v) -> frozenset:
    """{y in k : Tr(v^p y) = 0}, an F_p-hyperplane fingerprint."""
    vp = k.pow(v, k.p)
    return frozenset(y for y in k.elements()
                     if k.trace(k.mul(vp, y)) == 0)


def subextension_correspondence(k: ResidueField) -> dict:
    """Each projective point gets a distinct trace-kernel fingerprint."""
    points = projective_points(k)
    expected = (k.q - 1) // (k.p - 1)
    fingerprints = {}
    for pt in points:
        fp = trace_kernel(k, pt.rep)
        if len(fp) * k.p != k.q:
            raise CheckFailed(
                f"kernel size {len(fp)} != q/p for point {pt.rep}")
        for other, ofp in fingerprints.items():
            if ofp == fp:
                raise DuplicateFingerprint(
                    f"points {other} and {pt.rep} share a kernel")
        fingerprints[pt.rep] = fp
    if len(fingerprints) != expected:
        raise CheckFailed(
            f"{len(fingerprints)} fingerprints, expected {expected}")
    return fingerprints


def line_points(k: ResidueField, v1, v2):
    """Projective points on the line through v1 and v2 (v1 != v2 in P(k))."""
    pts = set()
    for a in range(k.p):
        for b in range(k.p):
            if a == 0 and b == 0:
                continue
            w = k.add(k.scale(a, v1), k.scale(b, v2))
            if any(w):
                pts.add(ProjectivePoint.of(k, w).rep)
    return pts


def line_containment(k: ResidueField, v, v1, v2) -> bool:
    """v on the line through v1, v2, by span and by kernel intersection.

    Both characterizations are computed; disagreement is a hard failure.
    """
    span = ProjectivePoint.of(k, v).rep in line_points(k, v1, v2)
    ker = trace_kernel(k, v) >= (trace_kernel(k, v1) & trace_kernel(k, v2))
    if span != ker:
        raise CheckFailed(
            f"span ({span}) and kernel ({ker}) characterizations disagree "
            f"for {v} on line({v1}, {v2})")
    return span


def frobenius_equivariance(k: ResidueField) -> dict:
    """kernel(sigma v) = sigma(kernel v) for all projective points.

    Also reports the units u = v^(1-p) fixed by Frobenius, which mark the
    degree-p fields that are Galois over Q_p (u^p = u).
    """
    points = projective_points(k)
    for pt in points:
        lhs = trace_kernel(k, k.frobenius(pt.rep))
        rhs = frozenset(k.frobenius(y) for y in trace_kernel(k, pt.rep))
        if lhs != rhs:
            raise CheckFailed(f"Frobenius equivariance fails at {pt.rep}")
    fixed = []
    fixed_units = set()
    for pt in points:
        u = k.pow(k.inv(pt.rep), k.p - 1)
        if k.frobenius(u) == u:
            fixed.append(pt.rep)
            fixed_units.add(u)
    return {
        "points": len(points),
        "equivariant": True,
        "fixed_points": sorted(fixed, key=k.encode),
        "fixed_units": sorted(fixed_units, key=k.encode),
    }


# ---------------------------------------------------------------------------
# normal basis generator and decompositions
# ---------------------------------------------------------------------------


def normal_basis_eta(K: UnramifiedRing):
    """Smallest-encoding Teichmueller unit whose Frobenius orbit is a basis.

    Returns (eta, residue); also checks Tr(eta mod p) != 0, which the
    normal-basis property forces.
    """
    k = ResidueField.of_ring(K)
    for a in sorted(k.nonzero(), key=k.encode):
        orbit = []
        x = a
        for _ in range(K.d):
            orbit.append(x)
            x = k.frobenius(x)
        if _independent(k, orbit):
            assert k.trace(a) != 0, "normal basis with zero trace"
            return teichmuller_lift(K, K.from_residue(a)), a
    raise AssertionError("no normal basis generator found")


def _independent(k: ResidueField, vecs) -> bool:
    rows = [list(v) for v in vecs]
    p = k.p
    rank = 0
    cols = len(rows[0])
    for c in range(cols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][c] % p:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        for r in range(len(rows)):
            if r != rank and rows[r][c] % p:
                f = (rows[r][c] * inv) % p
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank == len(vecs)


def eta_decomposition_check(K: UnramifiedRing, eta) -> dict:
    """The basis (eta, eta^p - eta^(p^2), ..., eta^(p^(d-1)) - eta^(p^d))
    of O_K over Z_p: unit determinant on the power basis, and the tail
    vectors have zero trace."""
    from .linalg import field_det
    d = K.d
    basis = [eta]
    for i in range(1, d):
        basis.append(eta**(K.p**i) - eta**(K.p**(i + 1)))
    mat = [[b.coeffs[i] for b in basis] for i in range(d)]
    det = field_det(mat)
    traces_zero = all(z_membership(b) and b.trace().is_zero()
                      for b in basis[1:])
    ok = det.valuation() == 0 and traces_zero
    if not ok:
        raise CheckFailed(
            f"decomposition basis: det valuation {det.valuation()}, "
            f"tail traces zero: {traces_zero}")
    return {"det_valuation": det.valuation(), "tail_traces_zero": traces_zero}


def unit_group_decomposition(K: UnramifiedRing, eta) -> dict:
    """(1 + P)/(1 + P^2) is generated by the classes of 1 + eta^(p^i) p.

    Brute force in (O_K/p^2)^x: multiply out all exponent tuples and
    collect classes mod p^2; the subgroup must have exactly p^d classes
    covering every 1 + p*a.
    """
    p, d = K.p, K.d
    gens = []
    for i in range(d):
        e = eta**(p**i)
        gens.append(1 + e * p)
    reps = set()
    for exps in _cartesian(range(p), repeat=d):
        acc = K.one()
        for g, e in zip(gens, exps):
            acc = acc * g**e
        reps.add(_encode_mod(acc, p * p))
    expected = {_encode_mod(1 + K.from_residue(res) * p, p * p)
                for res in ResidueField.of_ring(K).elements()}
    if reps != expected:
        raise CheckFailed(
            f"generated {len(reps)} unit classes mod p^2, expected {p**d}")
    return {"classes": len(reps), "order": p**d}


def _encode_mod(x, modulus: int) -> tuple:
    return tuple(c.at_prec(_count_digits(modulus, c.ring.p)).val
                 for c in x.coeffs)


def _count_digits(modulus: int, p: int) -> int:
    n = 0
    while modulus > 1:
        modulus //= p
        n += 1
    return n


# ---------------------------------------------------------------------------
# abstract wreath-product model
# ---------------------------------------------------------------------------


def wreath_model(p: int, d: int) -> dict:
    """The group <s, g_0..g_{d-1} | g_i^p, s^d, s g_i s^-1 = g_{i+1}>.

    Realized as vectors (Z/p)^d twisted by a Z/d shift; the element count
    p^d * d and the defining relations are verified by enumeration.
    """
    elements = [(vec, s) for vec in _cartesian(range(p), repeat=d)
                for s in range(d)]

    def mul(x, y):
        (vx, sx), (vy, sy) = x, y
        shifted = tuple(vy[(i - sx) % d] for i in range(d))
        return (tuple((a + b) % p for a, b in zip(vx, shifted)),
                (sx + sy) % d)

    ident = ((0,) * d, 0)
    gens = []
    for i in range(d):
        vec = tuple(1 if j == i else 0 for j in range(d))
        gens.append((vec, 0))
    s = ((0,) * d, 1 % d)
    s_inv = next(c for c in elements if mul(c, s) == ident)
    for i in range(d):
        if mul(mul(s, gens[i]), s_inv) != gens[(i + 1) % d]:
            raise CheckFailed(f"conjugation relation fails at generator {i}")
        acc = ident
        for _ in range(p):
            acc = mul(acc, gens[i])
        if acc != ident:
            raise CheckFailed(f"generator {i} does not have order p")
    acc = ident
    for _ in range(d):
        acc = mul(acc, s)
    if acc != ident:
        raise CheckFailed("shift generator does not have order d")
    commuting = all(mul(gens[i], gens[j]) == mul(gens[j], gens[i])
                    for i in range(d) for j in range(d))
    if not commuting:
        raise CheckFailed("base generators do not commute")
    return {
        "order": len(elements),
        "expected": p**d * d,
        "order_matches": len(elements) == p**d * d,
        "nonabelian": d > 1 and any(
            mul(s, g) != mul(g, s) for g in gens),
    }


# ---------------------------------------------------------------------------
# the norm-element congruence
# ---------------------------------------------------------------------------


def norm_identity_check(tower, w_res, v_res, target=2) -> dict:
    """The norm-element congruence behind exp(p v^-p Z) c N(M_u/K).

    With the determinant convention for norms,

        N(-(w/v)(1 + t w v^-1)) = N(-w/v) * N(1 + t w v^-1)

    and the clean congruence N(1 + t w v^-1) = 1 + p v^-p (w - w^p)
    mod p^2 holds on the nose; the prefactor N(-w/v) = -(w/v)^p is a
    Teichmueller unit times -1 and is recorded, since the printed form of
    the identity absorbs it.  Norm-group membership is insensitive to
    that unit: it is itself a norm.
    """
    K = tower.K
    p = tower.p
    from .extensions import norm_to
    w = teichmuller_lift(K, K.from_residue(w_res))
    v = teichmuller_lift(K, K.from_residue(v_res))
    wv = w * v.inv()
    t = tower.wild.gen()
    base_elem = t.scale(wv) + 1
    nrm_base = norm_to(base_elem, K)
    elem = -base_elem.scale(wv)
    nrm = norm_to(elem, K)
    unit_factor = -(wv**p)
    vp_inv = (v.inv()) ** p
    rhs = 1 + (vp_inv * (w - w**p)) * p
    clean = (nrm_base - rhs).at_prec(target).is_zero()
    factored = (nrm - unit_factor * rhs).at_prec(target).is_zero()
    literal = (nrm - rhs).at_prec(target).is_zero()
    prefactor_exact = (nrm - unit_factor * nrm_base).is_zero()
    return {
        "w": w_res,
        "v": v_res,
        "congruent_mod_p2": clean and factored and prefactor_exact,
        "paper_form_literal": literal,
        "unit_factor_residue": unit_factor.residue(),
        "norm_valuation": nrm.valuation(),
    }


# ---------------------------------------------------------------------------
# endomorphism series of the formal group law X^q + pX
# ---------------------------------------------------------------------------


def lubin_tate_endomorphism(K: UnramifiedRing, a, D: int) -> TruncatedSeries:
    """The unique series [a](X) = aX + ... commuting with X^q + pX.

    Solved degree by degree: the X^m equation has pivot p - p^m, a unit
    times p, so each coefficient costs one digit; the functional-equation
    residual is re-verified by the caller at full degree.
    """
    q = K.p**K.d
    a = a if isinstance(a, UnramifiedElement) else K.of(a)
    c = [K.exact_zero(), a] + [None] * (D - 1)
    for m in range(2, D + 1):
        # [X^m] of [a](h(X)) for j < m, h = X^q + pX
        rhs = K.exact_zero()
        for j in range(1, m):
            if c[j] is None or (c[j].is_zero() and c[j].precision() == INF):
                continue
            # coefficient of X^m in (X^q + pX)^j
            num = m - j
            if num % (q - 1):
                continue
            i = num // (q - 1)
            if i < 0 or i > j:
                continue
            rhs = rhs + c[j] * (_binomial(j, i) * K.p**(j - i))
        # [X^m] of ([a](X))^q, built from lower-index coefficients
        lhs_low = _power_coefficient(c, q, m, K)
        pivot = K.p - K.p**m
        piv_val = 1
        if _vp_int_of(pivot, K.p) != piv_val:
            raise PivotNotUnit(f"pivot p - p^{m} has unexpected valuation")
        c[m] = (rhs - lhs_low).div_int(pivot)
    return TruncatedSeries(K, c)


def _binomial(n, k):
    from math import comb
    return comb(n, k)


def _vp_int_of(n, p):
    return vp_int(n, p)


def _power_coefficient(c, q, m, K):
    """[X^m] of (sum c_j X^j)^q using only c_1..c_{m-1} (valid: the top
    index cannot appear in a q-fold product reaching degree m)."""
    D = m
    cur = [K.exact_zero()] * (D + 1)
    cur[0] = K.one()
    known = [K.exact_zero() if x is None else x for x in c[:D + 1]]
    for _ in range(q):
        nxt = [K.exact_zero()] * (D + 1)
        for i in range(D + 1):
            ci = cur[i]
            if ci.is_zero() and ci.precision() == INF:
                continue
            for j in range(1, D + 1 - i):
                kj = known[j]
                if kj.is_zero() and kj.precision() == INF:
                    continue
                nxt[i + j] = nxt[i + j] + ci * kj
        cur = nxt
    return cur[m]


def lubin_tate_functional_residual(K: UnramifiedRing, series: TruncatedSeries,
                                   D: int):
    """min coefficient valuation of h([a](X)) - [a](h(X)), h = X^q + pX."""
    q = K.p**K.d
    lhs = series**q + series.scale(K.exact(K.p))
    comp = _compose_with_h(series, q, K)
    worst, index, capped = lhs.residual_against(comp)
    return worst, index, capped


def _compose_with_h(series: TruncatedSeries, q: int, K) -> TruncatedSeries:
    """[a](X^q + pX) truncated at the series cap."""
    D = series.cap
    h = [K.exact_zero()] * (D + 1)
    if 1 <= D:
        h[1] = K.exact(K.p)
    if q <= D:
        h[q] = K.one()
    hs = TruncatedSeries(K, h)
    acc = make_series(K, {}, D)
    power = one_series(K, D)
    for j, cj in enumerate(series.coeffs):
        if j > 0:
            power = power * hs
        if cj.is_zero() and cj.precision() == INF:
            continue
        acc = acc + power.scale(cj)
    return acc


def lubin_tate_compose(K, f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(X)) for series with zero constant term, truncated at f's cap."""
    D = f.cap
    acc = make_series(K, {}, D)
    power = one_series(K, D)
    for j, cj in enumerate(f.coeffs):
        if j > 0:
            power = power * g
        if cj.is_zero() and cj.precision() == INF:
            continue
        acc = acc + power.scale(cj)
    return acc
