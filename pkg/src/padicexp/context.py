"""Global precision parameters shared by every computation.

A :class:`PrecisionContext` fixes the odd prime ``p``, the unramified
degree ``d`` (so the residue field has ``q = p**d`` elements), the target
absolute precision ``N`` in p-adic digits, the series degree cap ``D``,
and the number of guard digits used as working headroom.  Exponentials of
series divide by n!, which costs up to ``(n-1)//(p-1)`` digits, so the
guard must dominate that loss; fractional scratch coefficients of the
shape gamma/p cost roughly ``D/p**2`` more.
"""

from dataclasses import dataclass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def default_guard(p: int, D: int) -> int:
    """Guard digits covering n! losses plus fractional-coefficient drift.

    Always at least ceil(D/(p-1)) + 2, the minimum needed for series
    exponentials truncated at degree D.
    """
    loss_factorial = -(-D // (p - 1))
    loss_scratch = -(-D // (p * p))
    return loss_factorial + loss_scratch + 8


@dataclass(frozen=True)
class PrecisionContext:
    p: int
    d: int = 1
    N: int = 12
    D: int = 64
    guard: int = 0

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.d < 1:
            raise ValueError(f"unramified degree must be >= 1, got {self.d}")
        if self.N < 1:
            raise ValueError(f"target precision must be >= 1, got {self.N}")
        if self.D < 1:
            raise ValueError(f"series degree cap must be >= 1, got {self.D}")
        if self.guard == 0:
            object.__setattr__(self, "guard", default_guard(self.p, self.D))
        minimum = -(-self.D // (self.p - 1)) + 2
        if self.guard < minimum:
            raise ValueError(
                f"guard {self.guard} below minimum {minimum} for p={self.p}, D={self.D}"
            )

    @property
    def q(self) -> int:
        return self.p**self.d

    @property
    def work_prec(self) -> int:
        """Absolute working precision in p-adic digits."""
        return self.N + self.guard

    def boosted(self, extra: int) -> "PrecisionContext":
        """Same parameters with `extra` more guard digits."""
        return PrecisionContext(self.p, self.d, self.N, self.D, self.guard + extra)
