"""The over-convergent exponential series and the self-dual generators.

Constructions, all degree-capped and precision-tracked:

* the Dwork exponential exp(g X - g X^p) over the cyclotomic step, whose
  value at a Teichmueller point is a primitive p-th root of unity;
* its two-level modification exp(w X - u w X^p + (g X^p - g X^(p^2))/p)
  over the Kummer step, integral through the cap and the engine of the
  Galois-module construction;
* the n-level generalization over coherent-root towers, tied to the
  relative Artin-Hasse exponential via the bracket map;
* the self-dual normal basis generator: the averaged sum of the twist
  orbit of a certified value, expressed in the wild degree-p subfield and
  checked against its Gram matrix.

Twist exponents s in mu_(p-1) act through certified integer powers: the
exponent is the Teichmueller lift of the smallest primitive root mod p,
reduced modulo p^(working precision); truncating the exponent at p^m
perturbs a principal unit by (1 + max ideal)^(p^m), far below working
precision.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CheckFailed, GramNotIdentity, SetMismatch
from .extensions import (
    RamifiedTower,
    TowerRing,
    embed,
    eval_poly,
    express_in_subfield,
    hensel_conjugates,
    substitute_root,
    trace_to,
)
from .padic import INF, Zp, ZpRing, UnramifiedElement, UnramifiedRing
from .series import (
    TruncatedSeries,
    evaluate_at_unit,
    make_series,
    series_exp,
)
from .witt import WittVector, bracket_map, artin_hasse_relative, witt_mul


# ---------------------------------------------------------------------------
# scalar helpers
# ---------------------------------------------------------------------------


def smallest_primitive_root(p: int) -> int:
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = (x * g) % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    raise AssertionError("no primitive root found")


def zp_teichmuller(ring: ZpRing, a: int) -> Zp:
    """Teichmueller lift of a mod p inside Z_p."""
    x = ring.of(a)
    for _ in range(ring.wp + 2):
        nxt = x**ring.p
        if (nxt - x).is_zero():
            return nxt
        x = nxt
    raise AssertionError("Teichmuller iteration failed to stabilize")


# ---------------------------------------------------------------------------
# the Dwork series and its two-level modification
# ---------------------------------------------------------------------------


def dwork_series(cyc: TowerRing, D: int) -> TruncatedSeries:
    """exp(g X - g X^p) over the cyclotomic step, g its uniformizer."""
    g = cyc.gen()
    p = cyc.p
    return series_exp(make_series(cyc, {1: g, p: -g}, D))


def dwork_series_over(ring: TowerRing, cyc: TowerRing, D: int,
                      power: int = 1) -> TruncatedSeries:
    """The Dwork series with X -> X^power, computed inside a larger ring."""
    g = embed(cyc.gen(), ring)
    p = ring.p
    return series_exp(make_series(ring, {power: g, p * power: -g}, D))


def dwork_root_of_unity(E: TruncatedSeries, target_prec: int):
    """Certified E(1); the acceptance checks value^p = 1 != value."""
    one = E.ring.one()
    return evaluate_at_unit(E, one, target_prec)


def dwork_congruence_check(E: TruncatedSeries, cyc: TowerRing,
                           v_point, target_prec: int) -> dict:
    """E evaluated at v^p lands in 1 + v^p*g + g^2*O; also v(E(v^p)-1) = 1."""
    p = cyc.p
    vp_point = embed(v_point, cyc) ** p
    val = evaluate_at_unit(E, vp_point, target_prec).value
    dev = val - 1 - vp_point * cyc.gen()
    vval = (val - 1).valuation()
    return {
        "unit_minus_one_valuation": vval,
        "valuation_is_one": vval == 1,
        "congruent_mod_gamma2": dev.is_zero() or dev.valuation() >= 2,
        "deviation_valuation": None if dev.is_zero() else dev.valuation(),
    }


def e_u2_series(tower: RamifiedTower, D: int) -> TruncatedSeries:
    """exp(w X - u w X^p + (g X^p - g X^(p^2))/p) over the Kummer step."""
    kum = tower.kummer
    p = tower.p
    w = kum.gen()
    g_over_p = embed(tower.cyclotomic.gen(), kum).pshift(1)
    uw = w.scale(tower.u)
    entries = {
        1: w,
        p: g_over_p - uw,
        p * p: -g_over_p,
    }
    return series_exp(make_series(kum, entries, D))


def e_u2_power_identity(tower: RamifiedTower, E: TruncatedSeries,
                        D_identity: int) -> dict:
    """Cross-multiplied p-th power factorization of the two-level series.

    E^p * exp(p u w X^p) and exp(p w X) * (Dwork at X^p) must agree as
    truncated series; both sides are computed along independent paths
    (dense power versus sparse exponentials).
    """
    kum = tower.kummer
    p = tower.p
    w = kum.gen()
    Et = E.truncate(D_identity)
    lhs = (Et**p) * series_exp(make_series(
        kum, {p: (w * embed(tower.u, kum)).scale_int(p)}, D_identity))
    rhs = series_exp(make_series(kum, {1: w.scale_int(p)}, D_identity)) * \
        dwork_series_over(kum, tower.cyclotomic, D_identity, power=p)
    worst, index, capped = lhs.residual_against(rhs)
    return {
        "residual_valuation": None if capped else worst,
        "exact_to_precision": capped,
        "first_bad_index": index,
    }


@dataclass
class CertifiedEvaluation:
    """A certified value of the two-level series, together with the
    (possibly cap-boosted) rings everything downstream must live in."""

    value: object
    series: TruncatedSeries
    tower: RamifiedTower
    v: UnramifiedElement
    ctx: object
    cap_used: int
    tail_bound: object


def certified_eval_package(ctx, v_residue, target_prec: int,
                           D_max: int = 4096) -> CertifiedEvaluation:
    """Certified evaluation at the Teichmueller point with residue v_residue.

    The two-level series gains only about 0.04 digits of coefficient
    valuation per degree at p = 3, so certifying the requested precision
    after the 50% haircut can need caps well beyond the context default;
    the cap (and with it the guard) doubles until the tail certifies, and
    the whole tower is rebuilt at matching working precision.
    """
    from .context import PrecisionContext
    from .errors import TailNotBounded
    from .padic import teichmuller_lift, unramified_ring
    from .extensions import build_tower
    from .series import certify_tail, SLOPE_HAIRCUT

    D = ctx.D
    while True:
        c = PrecisionContext(ctx.p, ctx.d, max(ctx.N, target_prec), D)
        K = unramified_ring(c)
        v = teichmuller_lift(K, K.from_residue(v_residue))
        tower = build_tower(K, v.inv() ** (c.p - 1))
        E = e_u2_series(tower, D)
        certified, bound, rep = certify_tail(E, target_prec)
        if certified:
            ev = evaluate_at_unit(E, embed(v, tower.kummer), target_prec)
            return CertifiedEvaluation(value=ev.value, series=E, tower=tower,
                                       v=v, ctx=c, cap_used=D,
                                       tail_bound=ev.tail_bound)
        if 2 * D > D_max:
            raise TailNotBounded(
                f"cannot certify {target_prec} digits below cap {D_max} "
                f"(slope {rep.slope}, cap {D})")
        if rep.slope not in (None, INF) and rep.slope > 0:
            # jump straight to the cap the observed slope calls for
            need = int(1.4 * target_prec * E.ring.abs_ram
                       / float(rep.slope * SLOPE_HAIRCUT))
            while D < min(need, D_max):
                D *= 2
        if D <= E.cap:
            D = 2 * E.cap


def kummer_generator_check(ctx, v_residue, target_prec: int) -> dict:
    """The certified value at v is a Kummer generator witness.

    (i) value^p equals the Dwork series at v^p (an element of the
    cyclotomic step); (ii) that element is a principal unit exactly one
    uniformizer level deep, hence not a p-th power.
    """
    pk = certified_eval_package(ctx, v_residue, target_prec)
    tower, v = pk.tower, pk.v
    kum, cyc, p = tower.kummer, tower.cyclotomic, tower.p
    lhs = pk.value**p
    dwork = dwork_series(cyc, max(ctx.D, 256))
    rhs_cyc = evaluate_at_unit(dwork, embed(v, cyc) ** p, target_prec).value
    diff = lhs - embed(rhs_cyc, kum)
    vval = (rhs_cyc - 1).valuation()
    ok = (diff.is_zero() or diff.vp() >= target_prec) and vval == 1
    return {
        "identity_residual_vp": None if diff.is_zero() else float(diff.vp()),
        "identity_at_cap": diff.is_zero(),
        "unit_depth": vval,
        "not_a_pth_power": vval == 1,
        "cap_used": pk.cap_used,
        "passed": bool(ok),
    }


# ---------------------------------------------------------------------------
# coherent roots and the n-level exponentials
# ---------------------------------------------------------------------------


@dataclass
class CoherentRoots:
    """Tower of coherent roots for f_u(X) = X^p + u p X over Q_p.

    rings[0] adjoins a root of X^(p-1) + u p to Z_p; each later level
    adjoins a root of X^p + u p X - (previous generator).  roots[i] is
    the depth-(i+1) root viewed in the top ring, so f_u(roots[i]) =
    roots[i-1] and f_u(roots[0]) = 0 != roots[0].
    """

    u: Zp
    rings: list
    roots: list

    @property
    def top(self):
        return self.rings[-1]

    @property
    def depth(self):
        return len(self.rings)

    def ring_at(self, level: int):
        return self.rings[level - 1]


def build_coherent_roots(zp: ZpRing, u, depth: int) -> CoherentRoots:
    """Iterated Eisenstein steps carrying a coherent set of roots."""
    p = zp.p
    u = zp.of(u) if isinstance(u, int) else u
    up = u * p
    first = TowerRing(zp, [up] + [zp.exact_zero()] * (p - 2) + [zp.of(1, INF)],
                      label="coherent-1")
    rings = [first]
    for lvl in range(2, depth + 1):
        prev = rings[-1]
        # minpoly coefficients live in prev, the base of the new step
        mp = [-prev.gen(), embed(up, prev)] + \
             [prev.exact_zero()] * (p - 2) + [prev.one()]
        rings.append(TowerRing(prev, mp, label=f"coherent-{lvl}"))
    top = rings[-1]
    roots = [None] * depth
    roots[depth - 1] = top.gen()
    for i in range(depth - 2, -1, -1):
        y = roots[i + 1]
        roots[i] = y**p + y.scale(up)
    return CoherentRoots(u=u, rings=rings, roots=roots)


def e_un_exponent(coh: CoherentRoots, n: int, D: int,
                  ring=None) -> TruncatedSeries:
    """sum_{i<n} roots[n-1-i] (X^(p^i) - u X^(p^(i+1))) / p^i as a series."""
    if n > coh.depth:
        raise ValueError(f"need coherent roots to depth {n}, have {coh.depth}")
    ring = ring or coh.top
    p = ring.p
    entries = {}
    for i in range(n):
        w = embed_root(coh, n - i, ring).pshift(i)
        entries[p**i] = entries.get(p**i, ring.exact_zero()) + w
        entries[p**(i + 1)] = entries.get(p**(i + 1), ring.exact_zero()) - \
            w.scale(coh.u)
    return make_series(ring, entries, D)


def embed_root(coh: CoherentRoots, level: int, ring) -> object:
    """The depth-`level` coherent root as an element of `ring`.

    `ring` must be one of the coherent tower rings at depth >= level; the
    root is recomputed there by iterating f_u from the generator.
    """
    idx = coh.rings.index(ring) + 1 if ring in coh.rings else None
    if idx is None:
        raise ValueError("ring is not part of this coherent tower")
    p = ring.p
    up = coh.u * p
    y = ring.gen()
    for _ in range(idx - level):
        y = y**p + y.scale(up)
    return y


def e_un_series(coh: CoherentRoots, n: int, D: int, ring=None) -> TruncatedSeries:
    return series_exp(e_un_exponent(coh, n, D, ring))


def e_un_factorization_check(coh: CoherentRoots, n: int, D: int) -> dict:
    """E_{u,n} = exp(u p roots[n] X) * E([roots[n]][h(roots[n])], X).

    Needs the coherent tower to depth n+1; h(X) = f_u(X)/X - u p = X^(p-1).
    Both sides are series over the depth-(n+1) ring.
    """
    ring = coh.ring_at(n + 1)
    p = ring.p
    zp = _zp_of(coh.u)
    omega_top = ring.gen()
    h = make_series(zp, {p - 1: zp.of(1, INF)}, p)
    length = n + 1
    w_id = bracket_map(make_series(zp, {1: zp.of(1, INF)}, 2), omega_top,
                       coh.u, length)
    w_h = bracket_map(h, omega_top, coh.u, length)
    lam = witt_mul(w_id, w_h)
    rhs = series_exp(make_series(
        ring, {1: omega_top.scale(coh.u * p)}, D)) * \
        artin_hasse_relative(lam, D)
    lhs = e_un_series(coh, n, D, ring=ring)
    worst, index, capped = lhs.residual_against(rhs)
    return {
        "residual_valuation": None if capped else float(worst),
        "exact_to_precision": capped,
        "first_bad_index": index,
        "components_subunit": all(
            c.is_zero() or c.vp() > 0 for c in lam.comps),
    }


def _zp_of(u: Zp) -> ZpRing:
    return u.ring


# ---------------------------------------------------------------------------
# self-dual normal basis generators
# ---------------------------------------------------------------------------


@dataclass
class SelfDualGenerator:
    v: UnramifiedElement
    u: UnramifiedElement
    alpha: object                 # element of the wild degree-p step
    alpha_in_kummer: object
    twists: list                  # the mu_(p-1) orbit of the certified value
    conjugates: list              # Galois conjugates of alpha
    gram: list                    # p x p matrix over K
    gram_residual_vp: object      # worst deviation from the identity
    alpha_valuation: int
    roots: list
    tower: RamifiedTower
    ctx: object


def twist_orbit(value, p: int, zp: ZpRing, digits: int = None) -> list:
    """[value^(z^k) for k in 0..p-2], z the Teichmueller primitive root.

    The exponent is used modulo p^digits: truncating it at p^m perturbs a
    principal unit by a (1 + maximal ideal)^(p^m) factor, i.e. by roughly
    m digits, so a modest margin over the downstream tolerance suffices
    and keeps the power ladder short.
    """
    if digits is None:
        digits = zp.wp
    digits = min(digits, zp.wp)
    z = zp_teichmuller(zp, smallest_primitive_root(p))
    zint = z.val % zp.pow(digits)
    orbit = [value]
    for _ in range(p - 2):
        orbit.append(orbit[-1] ** zint)
    return orbit


def self_dual_generator(ctx, v_residue, target_prec: int,
                        gram_tol=None) -> SelfDualGenerator:
    """Average of the twist orbit, expressed in the wild subfield.

    Verifies the Gram matrix Tr(conj_i * conj_j) = delta_ij to gram_tol
    digits (default: target_prec digits) and the valuation -(p-1) of the
    generator; either failure is a hard error.
    """
    pk = certified_eval_package(ctx, v_residue, target_prec)
    tower, v = pk.tower, pk.v
    K = tower.K
    p = tower.p
    kum = tower.kummer
    orbit = twist_orbit(pk.value, p, K.zp, digits=target_prec + 24)
    total = kum.one()
    for t in orbit:
        total = total + t
    alpha_L = total.pshift(1)
    alpha = express_in_subfield(alpha_L, tower.wild)
    aval = alpha.valuation()
    roots = hensel_conjugates(tower.wild)
    conj = [substitute_root(alpha, r) for r in roots]
    gram = [[trace_to(conj[i] * conj[j], K) for j in range(p)]
            for i in range(p)]
    tol = gram_tol if gram_tol is not None else target_prec
    worst = INF
    for i in range(p):
        for j in range(p):
            dev = gram[i][j] - (1 if i == j else 0)
            if not dev.is_zero():
                worst = min(worst, dev.vp())
    if worst != INF and worst < tol:
        raise GramNotIdentity(
            f"Gram deviates from the identity at vp {worst} < {tol}")
    if aval != -(p - 1):
        raise CheckFailed(
            f"generator valuation {aval}, expected {-(p - 1)}")
    return SelfDualGenerator(
        v=v, u=tower.u, alpha=alpha, alpha_in_kummer=alpha_L,
        twists=orbit, conjugates=conj, gram=gram,
        gram_residual_vp=None if worst == INF else float(worst),
        alpha_valuation=aval, roots=roots, tower=tower, ctx=pk.ctx)


def conjugate_crosscheck(sdg: SelfDualGenerator, target_prec: int) -> dict:
    """Twist-model conjugates match the Hensel-derived conjugate set.

    The twist model lifts the cyclic generator acting as value -> zeta *
    value^z; summing the orbit with zeta-powers reproduces each conjugate
    of the averaged generator inside the Kummer step.
    """
    tower = sdg.tower
    K = tower.K
    p = tower.p
    kum = tower.kummer
    dwork = dwork_series(tower.cyclotomic, max(sdg.ctx.D, 256))
    zeta = embed(evaluate_at_unit(dwork, tower.cyclotomic.one(),
                                  target_prec).value, kum)
    g0 = smallest_primitive_root(p)
    twist_model = []
    for j in range(p):
        total = kum.one()
        for k, t in enumerate(sdg.twists):
            zk = pow(g0, k, p)
            total = total + (zeta ** ((j * zk) % p)) * t
        twist_model.append(total.pshift(1))
    hensel_set = [eval_poly(c.coeffs, tower.wild_gen_in_kummer())
                  for c in sdg.conjugates]
    matched = []
    used = set()
    worst = INF
    for tm in twist_model:
        found = None
        for i, hs in enumerate(hensel_set):
            if i in used:
                continue
            diff = tm - hs
            if diff.is_zero() or diff.vp() >= target_prec:
                found = i
                if not diff.is_zero():
                    worst = min(worst, diff.vp())
                break
        if found is None:
            raise SetMismatch(
                "twist-model conjugate has no Hensel counterpart at "
                f"precision {target_prec}")
        used.add(found)
        matched.append(found)
    trace_alpha = trace_to(sdg.alpha, K)
    trace_dev = trace_alpha - 1
    return {
        "matching": matched,
        "worst_match_vp": None if worst == INF else float(worst),
        "trace_is_one": trace_dev.is_zero() or trace_dev.vp() >= target_prec,
        "passed": True,
    }


# ---------------------------------------------------------------------------
# exploratory Frobenius-alignment comparison (never asserted)
# ---------------------------------------------------------------------------


def explore_sigma_alpha(ctx, v_residue, target_prec: int) -> list:
    """Rows comparing coefficientwise-Frobenius images of the generator
    with the generator of the Frobenius-shifted unit, one per root
    alignment.  Informational only; nothing is asserted."""
    sdg = self_dual_generator(ctx, v_residue, target_prec)
    K = sdg.tower.K
    v_shift = sdg.v.frobenius()
    shift_residue = v_shift.residue()
    sdg2 = self_dual_generator(ctx, shift_residue, target_prec)
    K2 = sdg2.tower.K
    sigma_coeffs = [K2.of(list(c.frobenius().coeffs))
                    for c in sdg.alpha.coeffs]
    rows = []
    for j, r in enumerate(sdg2.roots):
        candidate = eval_poly(sigma_coeffs, r)
        diff = candidate - sdg2.alpha
        rows.append({
            "alignment": j,
            "agrees": diff.is_zero() or diff.vp() >= target_prec,
            "difference_vp": None if diff.is_zero() else float(diff.vp()),
            "informational": True,
        })
    return rows
