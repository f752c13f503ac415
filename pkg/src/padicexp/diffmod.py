"""Rank-one differential modules over truncated series rings.

A rank-one module is described by its connection coefficient: the
operator is theta - g for the derivation theta = X d/dX.  Changing basis
by an invertible series f shifts the coefficient by theta(f)/f; a pullback
under an absolute Frobenius (coefficient automorphism plus X -> X^p plus
the factor p) sends g to p * phi(g)(X^p).  A module "has Frobenius
structure" when an explicit gauge factor exhibits the pullback as
isomorphic to the module itself; here that factor is the n-level
exponential at -X, and the verification is the series identity

    theta(f)/f + g - u p g(X^p) = 0   (f = E_{u,n}(-X))

checked coefficient by coefficient at working precision.  Only truncated
forward power series appear: every series manipulated here is a
polynomial or an over-convergent exponential, so no Laurent tails are
needed.
"""

from dataclasses import dataclass

from .errors import DegreeOverflow, IdentityResidualNonzero, NonUnitLeadingTerm
from .extensions import TowerElement
from .padic import INF
from .series import TruncatedSeries, make_series, series_exp, series_inverse


@dataclass
class RankOneConnection:
    """The module defined by theta - g on a free rank-one basis."""

    g: TruncatedSeries

    @property
    def ring(self):
        return self.g.ring


@dataclass
class FrobeniusDescriptor:
    """Coefficient automorphism together with X -> X^p and the factor p."""

    coeff_map: object     # element -> element, fixing Q_p
    p: int


def gauge_transform(g: TruncatedSeries, f: TruncatedSeries) -> TruncatedSeries:
    """Connection coefficient after the basis change by f: g + theta(f)/f."""
    c0 = f.coeffs[0]
    if c0.is_zero() or c0.valuation() != 0:
        raise NonUnitLeadingTerm("gauge factor must have a unit constant term")
    return g + f.theta() * series_inverse(f)


def frobenius_pullback(m: RankOneConnection,
                       phi: FrobeniusDescriptor) -> RankOneConnection:
    """The module defined by theta - p*phi(g)(X^p)."""
    g = m.g
    D = g.cap
    top = max((n for n, c in enumerate(g.coeffs) if not c.is_zero()),
              default=0)
    if top * phi.p > D:
        raise DegreeOverflow(
            f"pullback degree {top * phi.p} exceeds cap {D}")
    out = [g.ring.exact_zero()] * (D + 1)
    for n, c in enumerate(g.coeffs):
        if n * phi.p > D:
            break
        out[n * phi.p] = phi.coeff_map(c).scale_int(phi.p)
    return RankOneConnection(TruncatedSeries(g.ring, out))


def coherent_frobenius_map(coh, ring):
    """The automorphism sending every coherent root w to u*w.

    On the iterated tower it acts as sum c_i gen^i -> sum phi(c_i)
    (u*gen)^i, recursing through the floors; u in mu_(p-1) makes u*gen a
    root of the same minimal polynomial, so this is a ring automorphism
    fixing Q_p.
    """
    u = coh.u

    def act(x):
        if not isinstance(x, TowerElement):
            return x  # Z_p coefficients are fixed
        upow = None
        out = []
        for i, c in enumerate(x.coeffs):
            cc = act(c)
            if i == 0:
                out.append(cc)
                upow = u
            else:
                out.append(cc.scale(upow))
                upow = upow * u
        return x.ring.of(out)

    return act


def connection_from_roots(coh, n: int, D: int) -> RankOneConnection:
    """theta - sum_{i<n} roots[n-1-i] X^(p^i), the module under study."""
    from .exponentials import embed_root
    ring = coh.ring_at(n)
    p = ring.p
    entries = {}
    for i in range(n):
        entries[p**i] = embed_root(coh, n - i, ring)
    return RankOneConnection(make_series(ring, entries, D))


def verify_frobenius_structure(coh, n: int, D: int, tol_digits: int) -> dict:
    """Gauge by the n-level exponential at -X and compare with the pullback.

    Asserts theta(f)/f + g - u p g(X^p) = 0 mod (X^(D+1), p^tol) with
    f = E_{u,n}(-X); on success the module is isomorphic to its Frobenius
    pullback, witnessed constructively by f.
    """
    from .exponentials import e_un_exponent
    ring = coh.ring_at(n)
    conn = connection_from_roots(coh, n, D)
    g = conn.g
    exponent = e_un_exponent(coh, n, D, ring=ring)
    f = series_exp(_negate_argument(exponent))
    gauged = gauge_transform(g, f)
    phi = FrobeniusDescriptor(coeff_map=coherent_frobenius_map(coh, ring),
                              p=ring.p)
    pulled = frobenius_pullback(conn, phi)
    worst, index, capped = gauged.residual_against(pulled.g)
    # residual_against reports normalized (Q_p) valuations
    ok = capped or worst >= tol_digits
    if not ok:
        raise IdentityResidualNonzero(
            f"Frobenius-structure residual at X^{index} has vp "
            f"{worst} < {tol_digits}", index=index)
    return {
        "n": n,
        "cap": D,
        "residual_valuation": None if capped else float(worst),
        "exact_to_precision": capped,
        "tol_digits": tol_digits,
        "passed": True,
    }


def _negate_argument(s: TruncatedSeries) -> TruncatedSeries:
    """s(-X): flips the sign of odd-degree coefficients."""
    return TruncatedSeries(s.ring,
                           [(-c if n % 2 else c)
                            for n, c in enumerate(s.coeffs)])
