"""Degree-capped power series over any p-adic coefficient ring.

A :class:`TruncatedSeries` is a coefficient list ``a_0..a_D``; arithmetic
is exact modulo ``(X^(D+1), p^precision)`` with precision tracked by the
coefficients themselves.  Exponentials are computed by the derivative
recurrence ``n g_n = sum_k (k f_k) g_{n-k}``, which visits only the
support of ``f`` (the exponents used downstream are sparse polynomials),
and the division by ``n`` draws on the context guard digits.

Over-convergence is witnessed at finite level: coefficient valuations of
an over-convergent series grow linearly in ``n``, so the module reports
the largest integral prefix plus an exact-rational least-squares fit of
``v(a_n)`` against ``n``.  Evaluation at a unit is "certified" only when
the coefficients are integral through the cap and the fitted slope, cut
in half and re-anchored below every observed point, still pushes the tail
past the requested precision; the 50% haircut is an artifact convention
(the underlying theory is qualitative) and is recorded in every report.
"""

import csv
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConvergenceDomain,
    DegreeOverflow,
    NonUnitLeadingTerm,
    NonzeroConstantTerm,
    TailNotBounded,
)
from .padic import INF

SLOPE_HAIRCUT = Fraction(1, 2)


class TruncatedSeries:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs, D=None):
        if D is not None and len(coeffs) < D + 1:
            coeffs = list(coeffs) + [_zero(ring)] * (D + 1 - len(coeffs))
        self.ring = ring
        self.coeffs = list(coeffs)

    @property
    def cap(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def valuation_profile(self):
        """(n, valuation) pairs in coefficient-ring uniformizer units.

        None marks zero-to-precision entries, which carry no valuation
        information.
        """
        out = []
        for n, c in enumerate(self.coeffs):
            out.append((n, None if c.is_zero() else c.valuation()))
        return out

    def constant_is(self, value) -> bool:
        return (self.coeffs[0] - value).is_zero()

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(self, other)
        return TruncatedSeries(self.ring,
                               [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = _coerce(self, other)
        return TruncatedSeries(self.ring,
                               [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return TruncatedSeries(self.ring, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = _coerce(self, other)
        D = min(self.cap, other.cap)
        out = [None] * (D + 1)
        for i, ai in enumerate(self.coeffs):
            if i > D or (ai.is_zero() and ai.precision() == INF):
                continue
            for j, bj in enumerate(other.coeffs):
                if i + j > D:
                    break
                if bj.is_zero() and bj.precision() == INF:
                    continue
                t = ai * bj
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        z = _zero(self.ring)
        return TruncatedSeries(self.ring, [z if c is None else c for c in out])

    def scale(self, elem):
        return TruncatedSeries(self.ring, [c * elem for c in self.coeffs])

    def __pow__(self, n: int):
        acc = one_series(self.ring, self.cap)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def truncate(self, D):
        return TruncatedSeries(self.ring, self.coeffs[:D + 1])

    def theta(self):
        """The derivation X d/dX applied coefficient-wise."""
        return TruncatedSeries(self.ring,
                               [c.scale_int(n) for n, c in enumerate(self.coeffs)])

    def compose_xpow(self, m: int):
        """Substitute X -> X^m, truncating at the cap."""
        if m < 1:
            raise ValueError("exponent must be positive")
        out = [_zero(self.ring)] * (self.cap + 1)
        for n, c in enumerate(self.coeffs):
            if n * m > self.cap:
                break
            out[n * m] = c
        return TruncatedSeries(self.ring, out)

    def evaluate(self, x):
        """Horner sum at a point of the coefficient ring (uncertified)."""
        acc = x.ring.exact_zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def residual_against(self, other):
        """Minimum coefficient vp of (self - other); INF when all vanish."""
        diff = self - other
        worst = INF
        index = None
        capped = True
        for n, c in enumerate(diff.coeffs):
            if c.is_zero():
                continue
            capped = False
            v = c.vp()
            if v < worst:
                worst, index = v, n
        return worst, index, capped

    def __repr__(self):
        return f"TruncatedSeries(D={self.cap}, ring={getattr(self.ring, 'label', self.ring)!r})"


def _zero(ring):
    return ring.exact_zero()


def _coerce(s, other):
    if isinstance(other, TruncatedSeries):
        return other
    raise TypeError(f"cannot combine series with {other!r}")


def make_series(ring, entries, D) -> TruncatedSeries:
    """Series from a dict {degree: element} or a coefficient list."""
    coeffs = [_zero(ring)] * (D + 1)
    if isinstance(entries, dict):
        for n, c in entries.items():
            if n > D:
                raise DegreeOverflow(f"degree {n} beyond cap {D}")
            coeffs[n] = c
    else:
        for n, c in enumerate(entries):
            if n > D:
                break
            coeffs[n] = c
    return TruncatedSeries(ring, coeffs)


def one_series(ring, D) -> TruncatedSeries:
    coeffs = [_zero(ring)] * (D + 1)
    one = ring.one()
    coeffs[0] = one
    return TruncatedSeries(ring, coeffs)


def series_exp(f: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with zero constant term, via n g_n = sum k f_k g_{n-k}."""
    if not f.coeffs[0].is_zero():
        raise NonzeroConstantTerm("series_exp needs f(0) = 0")
    D = f.cap
    support = [(k, c.scale_int(k)) for k, c in enumerate(f.coeffs)
               if k > 0 and not c.is_zero()]
    g = [None] * (D + 1)
    g[0] = f.ring.one()
    for n in range(1, D + 1):
        acc = None
        for k, kfk in support:
            if k > n:
                break
            t = kfk * g[n - k]
            acc = t if acc is None else acc + t
        g[n] = _zero(f.ring) if acc is None else acc.div_int(n)
    return TruncatedSeries(f.ring, g)


def series_log(g: TruncatedSeries) -> TruncatedSeries:
    """Inverse of series_exp on 1 + X(...): dense O(D^2) recurrence."""
    if not g.constant_is(1):
        raise NonzeroConstantTerm("series_log needs g(0) = 1")
    D = g.cap
    L = [None] * (D + 1)
    L[0] = _zero(g.ring)
    kLk = [None] * (D + 1)
    for n in range(1, D + 1):
        acc = g.coeffs[n].scale_int(n)
        for k in range(1, n):
            if kLk[k] is None or (g.coeffs[n - k].is_zero()
                                  and g.coeffs[n - k].precision() == INF):
                continue
            acc = acc - kLk[k] * g.coeffs[n - k]
        L[n] = acc.div_int(n)
        kLk[n] = None if L[n].is_zero() and L[n].precision() == INF \
            else L[n].scale_int(n)
    return TruncatedSeries(g.ring, L)


def series_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; requires a unit constant term."""
    c0 = f.coeffs[0]
    if c0.is_zero() or c0.valuation() != 0:
        raise NonUnitLeadingTerm("series inverse needs a unit constant term")
    D = f.cap
    inv0 = c0.inv()
    out = [None] * (D + 1)
    out[0] = inv0
    for n in range(1, D + 1):
        acc = None
        for k in range(1, n + 1):
            fk = f.coeffs[k]
            if fk.is_zero() and fk.precision() == INF:
                continue
            t = fk * out[n - k]
            acc = t if acc is None else acc + t
        out[n] = _zero(f.ring) if acc is None else -(acc * inv0)
    return TruncatedSeries(f.ring, out)


# ---------------------------------------------------------------------------
# over-convergence diagnostics and certified evaluation
# ---------------------------------------------------------------------------


def integral_up_to(s: TruncatedSeries) -> int:
    """Largest n such that v(a_i) >= 0 for all i <= n; -1 if a_0 fails."""
    last = -1
    for n, c in enumerate(s.coeffs):
        if not c.is_zero() and c.valuation() < 0:
            return last
        last = n
    return last


@dataclass
class OverconvergenceReport:
    integral_up_to: int
    slope: object          # Fraction, or INF marker for degenerate windows
    intercept: object      # Fraction or None
    window: tuple
    points: int
    haircut: Fraction = SLOPE_HAIRCUT

    def as_record(self):
        return {
            "integral_up_to": self.integral_up_to,
            "slope": float(self.slope) if self.slope not in (None, INF) else "inf",
            "intercept": float(self.intercept) if self.intercept is not None else None,
            "window": list(self.window),
            "points": self.points,
            "haircut": float(self.haircut),
        }


def overconvergence_report(s: TruncatedSeries, window=None) -> OverconvergenceReport:
    """Exact-rational least-squares fit of v(a_n) against n over a window.

    Zero-to-precision coefficients carry no valuation information and are
    skipped; a window with fewer than two informative points reports the
    infinite-slope marker.
    """
    D = s.cap
    if window is None:
        window = (D // 2, D)
    n0, n1 = window
    if not (0 <= n0 <= n1 <= D):
        raise ValueError(f"window {window} outside [0, {D}]")
    pts = [(n, Fraction(s.coeffs[n].valuation())) for n in range(n0, n1 + 1)
           if not s.coeffs[n].is_zero()]
    iu = integral_up_to(s)
    if len(pts) < 2:
        return OverconvergenceReport(iu, INF, None, window, len(pts))
    k = len(pts)
    sn = sum(Fraction(n) for n, _ in pts)
    sv = sum(v for _, v in pts)
    snn = sum(Fraction(n) * n for n, _ in pts)
    snv = sum(n * v for n, v in pts)
    denom = k * snn - sn * sn
    if denom == 0:
        return OverconvergenceReport(iu, INF, None, window, k)
    slope = Fraction(k * snv - sn * sv, 1) / denom
    intercept = (sv - slope * sn) / k
    return OverconvergenceReport(iu, slope, intercept, window, k)


@dataclass
class EvalResult:
    value: object
    certified: bool
    tail_bound: object  # Fraction lower bound on v(tail), or None
    report: OverconvergenceReport


def certify_tail(s: TruncatedSeries, target_prec, window=None):
    """Tail bound from integrality plus haircut slope extrapolation.

    Returns (certified, bound_in_digits, report).  The profile works in
    uniformizer units; the bound is the minimum of haircut_slope*n +
    floored_intercept over n > D (intercept floored so the haircut line
    lies below every observed valuation), converted to p-adic digits via
    the absolute ramification of the coefficient ring, then compared to
    target_prec digits.
    """
    D = s.cap
    rep = overconvergence_report(s, window)
    if rep.integral_up_to < D or rep.slope in (None, INF) or rep.slope <= 0:
        return False, None, rep
    hslope = rep.slope * SLOPE_HAIRCUT
    floors = [Fraction(s.coeffs[n].valuation()) - hslope * n
              for n in range(D + 1) if not s.coeffs[n].is_zero()]
    floor = min(floors) if floors else Fraction(0)
    bound_digits = (hslope * (D + 1) + floor) / s.ring.abs_ram
    return bound_digits >= target_prec, bound_digits, rep


def evaluate_at_unit(s: TruncatedSeries, x, target_prec,
                     require_certified=True) -> EvalResult:
    """Evaluate at a unit argument with a rigor flag on the truncation tail.

    A certified result has its precision capped at the proven tail bound:
    the discarded tail is a genuine error term, so the value is only known
    modulo p**floor(bound).
    """
    if x.is_zero() or x.valuation() != 0:
        raise ConvergenceDomain("evaluation point must be a unit")
    certified, bound, rep = certify_tail(s, target_prec)
    if require_certified and not certified:
        raise TailNotBounded(
            f"profile cannot certify target precision {target_prec} "
            f"(slope={rep.slope}, integral_up_to={rep.integral_up_to})")
    acc = x.ring.exact_zero()
    for c in reversed(s.coeffs):
        acc = acc * x + c
    if certified:
        acc = acc.at_prec(int(bound))
    return EvalResult(value=acc, certified=certified, tail_bound=bound, report=rep)


def dump_valuation_profile(s: TruncatedSeries, path):
    """CSV of (n, v(a_n)); blank valuation marks zero-to-precision entries."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "valuation"])
        for n, v in s.valuation_profile():
            writer.writerow([n, "" if v is None else float(v)])
