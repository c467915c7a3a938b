"""Legendre-form elliptic curves over F_p and F_{p^2}.

E_t : y^2 = x(x-1)(x-t) with t in the quadratic extension.  Provides the
j-invariant, chord-tangent group law, naive point counts (these double as
an independent oracle), the Deuring-polynomial supersingularity test and
the roots of the level-3 division polynomial.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from .fields import (
    QuadExtElement,
    check_modulus,
    smallest_nonresidue,
    sqrt_fp2,
)

POINT_COUNT_BOUND_DEG1 = 2_000_000
POINT_COUNT_BOUND_DEG2 = 2_000
PSI3_SCAN_BOUND = 500


def _as_fp2(v, p: int) -> QuadExtElement:
    if isinstance(v, QuadExtElement):
        if v.p != p:
            raise ValueError("mixed moduli")
        return v
    return QuadExtElement(int(v), 0, p)


class CurvePoint:
    """A point on a cubic y^2 = f(x): either infinity or affine (x, y)."""

    __slots__ = ("x", "y")

    def __init__(self, x: QuadExtElement | None, y: QuadExtElement | None):
        if (x is None) != (y is None):
            raise ValueError("affine points need both coordinates")
        self.x = x
        self.y = y

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.is_infinity:
            return hash(None)
        return hash((self.x, self.y))

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(infinity)"
        return f"CurvePoint({self.x!r}, {self.y!r})"


INFINITY = CurvePoint(None, None)


class CubicCurve:
    """y^2 = x^3 + a2 x^2 + a4 x + a6 with coefficients in F_{p^2}."""

    def __init__(self, a2, a4, a6, p: int):
        check_modulus(p)
        self.p = p
        self.a2 = _as_fp2(a2, p)
        self.a4 = _as_fp2(a4, p)
        self.a6 = _as_fp2(a6, p)

    def rhs(self, x: QuadExtElement) -> QuadExtElement:
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def contains(self, pt: CurvePoint) -> bool:
        if pt.is_infinity:
            return True
        return pt.y * pt.y == self.rhs(pt.x)

    def point(self, x, y) -> CurvePoint:
        pt = CurvePoint(_as_fp2(x, self.p), _as_fp2(y, self.p))
        if not self.contains(pt):
            raise ValueError(f"({x}, {y}) is not on the curve")
        return pt

    def neg(self, pt: CurvePoint) -> CurvePoint:
        if pt.is_infinity:
            return pt
        return CurvePoint(pt.x, -pt.y)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if P.y == -Q.y:
                return INFINITY
            # tangent
            num = (3 * P.x + 2 * self.a2) * P.x + self.a4
            slope = num / (2 * P.y)
        else:
            slope = (Q.y - P.y) / (Q.x - P.x)
        x3 = slope * slope - self.a2 - P.x - Q.x
        y3 = slope * (P.x - x3) - P.y
        return CurvePoint(x3, y3)

    def scalar_mul(self, n: int, P: CurvePoint) -> CurvePoint:
        if n < 0:
            return self.scalar_mul(-n, self.neg(P))
        acc = INFINITY
        add = P
        while n:
            if n & 1:
                acc = self.add(acc, add)
            add = self.add(add, add)
            n >>= 1
        return acc

    def random_point(self, rng: random.Random) -> CurvePoint:
        """Uniform-enough sampling: random x until the cubic value is a square."""
        p = self.p
        while True:
            x = QuadExtElement(rng.randrange(p), rng.randrange(p), p)
            v = self.rhs(x)
            y = sqrt_fp2(v)
            if y is not None:
                if not rng.randrange(2):
                    y = -y
                return CurvePoint(x, y)


class LegendreCurve(CubicCurve):
    """y^2 = x(x-1)(x-t), nonsingular iff t is not 0 or 1."""

    def __init__(self, t, p: int):
        t = _as_fp2(t, p)
        if t == 0 or t == 1:
            raise ValueError(f"singular Legendre parameter t={t!r}")
        super().__init__(-(t + 1), t, 0, p)
        self.t = t

    def __repr__(self):
        return f"LegendreCurve(t={self.t!r}, p={self.p})"


def j_invariant(c: LegendreCurve) -> QuadExtElement:
    """j(E_t) = 2^8 (t^2 - t + 1)^3 / (t^2 (t - 1)^2)."""
    t = c.t
    num = 256 * (t * t - t + 1) ** 3
    den = (t * (t - 1)) ** 2
    return num / den


def group_law(P: CurvePoint, Q: CurvePoint, c: CubicCurve) -> CurvePoint:
    """Chord-tangent addition; off-curve inputs are rejected."""
    if not (c.contains(P) and c.contains(Q)):
        raise ValueError("point not on curve")
    return c.add(P, Q)


def scalar_mul(n: int, P: CurvePoint, c: CubicCurve) -> CurvePoint:
    if not c.contains(P):
        raise ValueError("point not on curve")
    return c.scalar_mul(n, P)


# ---------------------------------------------------------------------------
# point counting by exhaustive enumeration


def count_points(c: LegendreCurve, extension_degree: int = 1, bound: int | None = None) -> int:
    """Exact number of points over F_p or F_{p^2}, including infinity.

    Enumerates x and tests quadratic residuosity of the cubic value, so it
    is also usable as an oracle against the Deuring-polynomial test.
    """
    p = c.p
    if extension_degree == 1:
        if bound is None:
            bound = POINT_COUNT_BOUND_DEG1
        if p > bound:
            raise ValueError(f"p={p} above enumeration bound {bound}")
        if not c.t.in_base_field():
            raise ValueError("degree-1 count needs t in F_p")
        return _count_fp(c.t.a, p)
    if extension_degree == 2:
        if bound is None:
            bound = POINT_COUNT_BOUND_DEG2
        if p > bound:
            raise ValueError(f"p={p} above enumeration bound {bound}")
        return _count_fp2(c.t.a, c.t.b, p)
    raise ValueError("extension_degree must be 1 or 2")


def _square_table(p: int) -> np.ndarray:
    tab = np.zeros(p, dtype=bool)
    x = np.arange(p, dtype=np.int64)
    tab[(x * x) % p] = True
    return tab


def _count_fp(t: int, p: int) -> int:
    x = np.arange(p, dtype=np.int64)
    f = (x * ((x * (x - (1 + t))) % p + t)) % p
    is_sq = _square_table(p)
    zero = int(np.count_nonzero(f == 0))
    on = int(np.count_nonzero(is_sq[f] & (f != 0)))
    return 1 + zero + 2 * on


def _count_fp2(ta: int, tb: int, p: int) -> int:
    n = smallest_nonresidue(p)
    a = np.repeat(np.arange(p, dtype=np.int64), p)
    b = np.tile(np.arange(p, dtype=np.int64), p)

    def mul(ua, ub, va, vb):
        return (ua * va + ub * vb % p * n) % p, (ua * vb + ub * va) % p

    # f = x * (x - 1) * (x - t)
    fa, fb = mul(a, b, (a - 1) % p, b)
    fa, fb = mul(fa, fb, (a - ta) % p, (b - tb) % p)
    norm = (fa * fa - n * ((fb * fb) % p)) % p
    is_sq = _square_table(p)
    zero = int(np.count_nonzero((fa == 0) & (fb == 0)))
    on = int(np.count_nonzero(is_sq[norm])) - zero
    return 1 + zero + 2 * on


def count_points_weil(c: LegendreCurve) -> int:
    """#E(F_{p^2}) from the degree-1 count: (p+1)^2 - a^2, a = p+1-#E(F_p)."""
    p = c.p
    a = p + 1 - count_points(c, 1)
    return (p + 1) ** 2 - a * a


# ---------------------------------------------------------------------------
# supersingularity via the Deuring polynomial


@lru_cache(maxsize=512)
def deuring_coefficients(p: int) -> tuple[int, ...]:
    """Coefficients of H_p(t) = sum_k C((p-1)/2, k)^2 t^k, reduced mod p."""
    check_modulus(p)
    m = (p - 1) // 2
    inv = [0, 1]
    for k in range(2, m + 1):
        inv.append(-(p // k) * inv[p % k] % p)
    coeffs = [1] * (m + 1)
    binom = 1
    for k in range(1, m + 1):
        binom = binom * ((m - k + 1) % p) % p * inv[k] % p
        coeffs[k] = binom * binom % p
    return tuple(coeffs)


def is_supersingular(c: LegendreCurve) -> bool:
    """True iff H_p(t) = 0 in F_{p^2}."""
    p = c.p
    n = c.t.nonresidue
    coeffs = deuring_coefficients(p)
    ta, tb = c.t.a, c.t.b
    acc_a, acc_b = 0, 0
    for k in range(len(coeffs) - 1, -1, -1):
        acc_a, acc_b = (
            (acc_a * ta + acc_b * tb % p * n + coeffs[k]) % p,
            (acc_a * tb + acc_b * ta) % p,
        )
    return acc_a == 0 and acc_b == 0


# ---------------------------------------------------------------------------
# level-3 division polynomial


def psi3_coefficients(lam: QuadExtElement) -> list[QuadExtElement]:
    """Coefficients (ascending) of 3x^4 - 4(1+L)x^3 + 6Lx^2 - L^2 for L = lam."""
    p = lam.p
    c0 = -(lam * lam)
    c2 = 6 * lam
    c3 = -4 * (1 + lam)
    zero = QuadExtElement(0, 0, p)
    return [c0, zero, c2, c3, QuadExtElement(3, 0, p)]


def psi3_eval(lam: QuadExtElement, x: QuadExtElement) -> QuadExtElement:
    acc = QuadExtElement(0, 0, lam.p)
    for c in reversed(psi3_coefficients(lam)):
        acc = acc * x + c
    return acc


def psi3_roots(lam: QuadExtElement, seed: int = 1) -> list[QuadExtElement]:
    """All roots in F_{p^2} of the level-3 division polynomial of E_lam.

    Exhaustive scan for p <= 500; above that the F_{p^2}-rational part is
    split off with gcd(psi3, x^(p^2) - x) and factored by random splitting.
    """
    if lam == 0 or lam == 1:
        raise ValueError("singular Legendre parameter")
    p = lam.p
    if p <= PSI3_SCAN_BOUND:
        roots = []
        n = lam.nonresidue
        for a in range(p):
            for b in range(p):
                x = QuadExtElement(a, b, p, n)
                if psi3_eval(lam, x).is_zero():
                    roots.append(x)
        return sorted(roots, key=lambda r: (r.a, r.b))
    roots = _poly_fp2_roots(psi3_coefficients(lam), p, seed)
    return sorted(roots, key=lambda r: (r.a, r.b))


# dense polynomials over F_{p^2}: lists of QuadExtElement, ascending degree


def _poly_trim(f):
    while f and f[-1].is_zero():
        f.pop()
    return f


def _poly_mul(f, g, p):
    n = smallest_nonresidue(p)
    out = [QuadExtElement(0, 0, p, n) for _ in range(len(f) + len(g) - 1)]
    for i, fi in enumerate(f):
        if fi.is_zero():
            continue
        for j, gj in enumerate(g):
            out[i + j] = out[i + j] + fi * gj
    return _poly_trim(out)


def _poly_mod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv_lead = g[-1].inverse()
    while len(f) - 1 >= dg and f:
        if f[-1].is_zero():
            f.pop()
            continue
        q = f[-1] * inv_lead
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = f[shift + i] - q * gi
        f.pop()
    return _poly_trim(f)


def _poly_powmod(base, e: int, mod, p):
    n = smallest_nonresidue(p)
    result = [QuadExtElement(1, 0, p, n)]
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), mod, p)
        base = _poly_mod(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _poly_gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, _poly_mod(f, g, p)
    if f:
        inv = f[-1].inverse()
        f = [c * inv for c in f]
    return f


def _poly_fp2_roots(f, p: int, seed: int) -> list[QuadExtElement]:
    """Roots in F_{p^2} of f, by gcd with x^(p^2) - x and random splitting."""
    n = smallest_nonresidue(p)
    one = QuadExtElement(1, 0, p, n)
    zero = QuadExtElement(0, 0, p, n)
    xpoly = [zero, one]
    xq = _poly_powmod(xpoly, p * p, f, p)
    # gcd(f, x^(p^2) - x): product of the distinct linear factors of f
    diff = list(xq) + [zero] * max(0, 2 - len(xq))
    diff[1] = diff[1] - one
    g = _poly_gcd(f, _poly_trim(diff), p)
    rng = random.Random(seed)
    roots: list[QuadExtElement] = []
    stack = [g]
    while stack:
        h = stack.pop()
        if len(h) <= 1:
            continue
        if len(h) == 2:
            roots.append(-h[0] / h[1])
            continue
        # Cantor-Zassenhaus split on a product of distinct linear factors
        r = QuadExtElement(rng.randrange(p), rng.randrange(p), p, n)
        probe = _poly_powmod([r, one], (p * p - 1) // 2, h, p)
        probe = list(probe) + [zero] * max(0, 1 - len(probe))
        probe[0] = probe[0] - one
        d = _poly_gcd(_poly_trim(probe), h, p)
        if 0 < len(d) - 1 < len(h) - 1:
            stack.append(d)
            stack.append(_poly_div_exact(h, d, p))
        else:
            stack.append(h)
    return roots


def _poly_div_exact(f, g, p):
    n = smallest_nonresidue(p)
    f = list(f)
    out = [QuadExtElement(0, 0, p, n) for _ in range(len(f) - len(g) + 1)]
    inv_lead = g[-1].inverse()
    while len(f) >= len(g) and f:
        if f[-1].is_zero():
            f.pop()
            continue
        q = f[-1] * inv_lead
        shift = len(f) - len(g)
        out[shift] = q
        for i, gi in enumerate(g):
            f[shift + i] = f[shift + i] - q * gi
        f.pop()
    return _poly_trim(out)
