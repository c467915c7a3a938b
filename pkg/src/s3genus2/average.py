"""Desk-scale averages of superspecial prime counts over parameter windows.

phi(lambda, X) counts the primes p < X at which the member indexed by the
rational lambda is superspecial.  The window sums swap the order of
summation: for each prime, the admissible window members congruent to a
superspecial residue are counted exactly (integer windows by a floor count
per residue, rational-height windows by a Moebius/floor-sum lattice count),
and the totals are compared against the closed-form constants
(6 + 4 sqrt(3)) pi / 9 and 4 (3 + 2 sqrt(3)) / (3 pi), both times
sqrt(X)/log X.

Skip conventions: bad reduction (p divides the denominator) and degenerate
residues (lambda = 0, 1 mod p or delta = 0 mod p) are skipped, not counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .family import delta_of, superspecial_lambdas

INTEGER_WINDOW_CONSTANT = (6 + 4 * math.sqrt(3)) * math.pi / 9
RATIONAL_HEIGHT_CONSTANT = 4 * (3 + 2 * math.sqrt(3)) / (3 * math.pi)

MAX_X_BUDGET = 50_000
MAX_N_BUDGET = 10_000_000

SKIP_CONVENTIONS = (
    "skipped: p | denominator (bad reduction); lambda = 0, 1 (mod p); "
    "lambda^2 - lambda + 1 = 0 (mod p)"
)


class BudgetError(ValueError):
    """A run was asked for that exceeds the configured desk-scale budget."""


@lru_cache(maxsize=None)
def primes_below(X: int) -> tuple[int, ...]:
    if X <= 5:
        return ()
    sieve = bytearray([1]) * X
    sieve[0:2] = b"\x00\x00"
    for n in range(2, math.isqrt(X - 1) + 1):
        if sieve[n]:
            sieve[n * n :: n] = b"\x00" * len(range(n * n, X, n))
    return tuple(n for n in range(5, X) if sieve[n])


@lru_cache(maxsize=None)
def _superspecial_set(p: int) -> frozenset[int]:
    return frozenset(superspecial_lambdas(p))


def is_degenerate_rational(numerator: int, denominator: int) -> bool:
    """lambda = 0 and lambda = 1 index singular members at every prime."""
    return numerator == 0 or numerator == denominator


def phi_lambda(numerator: int, denominator: int, X: int) -> int:
    """#{5 <= p < X : the member at numerator/denominator is superspecial}.

    The fraction is reduced; degenerate lambda (0 or 1) counts no primes.
    """
    if denominator == 0:
        raise ZeroDivisionError("lambda must be a rational number")
    if denominator < 0:
        numerator, denominator = -numerator, -denominator
    g = math.gcd(numerator, denominator)
    if g:
        numerator //= g
        denominator //= g
    if is_degenerate_rational(numerator, denominator):
        return 0
    count = 0
    for p in primes_below(X):
        if denominator % p == 0:
            continue
        lam = numerator * pow(denominator, -1, p) % p
        if lam in (0, 1) or delta_of(lam, p) == 0:
            continue
        if lam in _superspecial_set(p):
            count += 1
    return count


@dataclass(frozen=True)
class AverageRun:
    X: int
    N: int
    mode: str
    total: int
    normalized: float
    predicted: float
    ratio: float

    CSV_HEADER = "mode,X,N,total,normalized,predicted,ratio"

    def to_csv_row(self) -> str:
        return (
            f"{self.mode},{self.X},{self.N},{self.total},"
            f"{self.normalized:.6f},{self.predicted:.6f},{self.ratio:.6f}"
        )

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "X": self.X,
            "N": self.N,
            "total": self.total,
            "normalized": round(self.normalized, 6),
            "predicted": round(self.predicted, 6),
            "ratio": round(self.ratio, 6),
        }


def _count_integers_in_window(N: int, residue: int, p: int) -> int:
    """#{lambda in [-N, N] : lambda = residue (mod p)} for 0 <= residue < p."""
    return (N - residue) // p + (N + residue) // p + 1


def _floor_sum(n: int, a: int, b: int, m: int) -> int:
    """sum_{i=0}^{n-1} floor((a*i + b) / m), exactly (handles negative b)."""
    total = 0
    if b < 0:
        shift = (-b + m - 1) // m
        total -= n * shift
        b += shift * m
    while True:
        if a >= m:
            total += (n - 1) * n // 2 * (a // m)
            a %= m
        if b >= m:
            total += n * (b // m)
            b %= m
        y_max = a * n + b
        if y_max < m:
            return total
        n, b, m, a = y_max // m, y_max % m, a, m


def _count_residue_band(R: int, s: int, p: int, lo_shift: int) -> int:
    """#{r in [1, R] : (s*r mod p) + lo_shift >= p}  (a cyclic band count)."""
    return _floor_sum(R, s, s + lo_shift, p) - _floor_sum(R, s, s, p)


@lru_cache(maxsize=4)
def _mertens_table(N: int) -> tuple[int, ...]:
    mu = [0] * (N + 1)
    mu[1] = 1
    primes = []
    is_comp = [False] * (N + 1)
    smallest = [0] * (N + 1)
    for n in range(2, N + 1):
        if not is_comp[n]:
            primes.append(n)
            mu[n] = -1
            smallest[n] = n
        for q in primes:
            if q * n > N or q > smallest[n]:
                break
            is_comp[q * n] = True
            smallest[q * n] = q
            mu[q * n] = 0 if n % q == 0 else -mu[n]
    out = [0] * (N + 1)
    acc = 0
    for n in range(1, N + 1):
        acc += mu[n]
        out[n] = acc
    return tuple(out)


def _mertens_coprime(x: int, p: int, table) -> int:
    """sum of mu(d) over d <= x with p not dividing d."""
    total = 0
    while x >= 1:
        total += table[x]
        x //= p
    return total


def _rational_line_count(M: int, p: int, residues) -> int:
    """#{(a, b) : 1 <= a <= M, |b| <= M, p !| a, b = s*a (mod p), s in residues}.

    No coprimality here; the caller handles gcd by Moebius inversion.
    """
    q, m = divmod(M, p)
    n_a = M - q  # a-values coprime-to-p in [1, M]
    total = len(residues) * n_a * 2 * q
    multiples = M // p  # r in [1, M] with p | r, always landing in the low band
    for s in residues:
        low = _floor_sum(M, s, s, p) - _floor_sum(M, s, s - (m + 1), p)
        high = _count_residue_band(M, s, p, m)
        total += (low - multiples) + high
    return total


def window_sum(X: int, N: int, mode: str = "integer") -> AverageRun:
    """Exact swapped-order window total with the predicted comparison.

    integer mode counts lambda in [-N, N]; rational mode counts each
    rational of height at most N once (reduced b/a, a >= 1).
    """
    if mode not in ("integer", "rational"):
        raise ValueError(f"unknown mode {mode!r}")
    if X > MAX_X_BUDGET or N > MAX_N_BUDGET:
        cost = f"~{X}^3/(36 ln {X}) field ops for the per-prime scans"
        raise BudgetError(
            f"X={X}, N={N} exceeds the desk budget "
            f"(X <= {MAX_X_BUDGET}, N <= {MAX_N_BUDGET}); estimated cost {cost}"
        )
    total = 0
    if mode == "integer":
        for p in primes_below(X):
            for s in _superspecial_set(p):
                total += _count_integers_in_window(N, s, p)
        normalized = total / N
        predicted = INTEGER_WINDOW_CONSTANT * math.sqrt(X) / math.log(X)
    else:
        table = _mertens_table(N)
        for p in primes_below(X):
            residues = tuple(sorted(_superspecial_set(p)))
            if not residues:
                continue
            d = 1
            while d <= N:
                v = N // d
                d_hi = N // v
                weight = _mertens_coprime(d_hi, p, table) - _mertens_coprime(d - 1, p, table)
                if weight:
                    total += weight * _rational_line_count(v, p, residues)
                d = d_hi + 1
        normalized = total / (N * N)
        predicted = RATIONAL_HEIGHT_CONSTANT * math.sqrt(X) / math.log(X)
    return AverageRun(X, N, mode, total, normalized, predicted, normalized / predicted)


def window_sum_bruteforce(X: int, N: int, mode: str = "integer") -> int:
    """Direct double loop over (lambda, p); the exactness oracle."""
    total = 0
    if mode == "integer":
        for lam in range(-N, N + 1):
            total += phi_lambda(lam, 1, X)
    else:
        for a in range(1, N + 1):
            for b in range(-N, N + 1):
                if math.gcd(a, abs(b)) == 1:
                    total += phi_lambda(b, a, X)
    return total


def default_window(X: int) -> int:
    """N = ceil(X^1.1), honoring the N > X regime of the asymptotic averages."""
    return math.ceil(X**1.1)


def convergence_table(X_list, N_rule=None, mode: str = "integer") -> list[AverageRun]:
    """One AverageRun per X, ascending, sharing the per-prime scan cache."""
    if N_rule is None:
        N_rule = default_window
    return [window_sum(X, N_rule(X), mode) for X in sorted(X_list)]
