"""The genus-2 family side: Lambda pairs, orbits, and the count psi_p.

A member of the family is indexed by lambda in F_p minus {0, 1} and the
roots of lambda^2 - lambda + 1 (those parameters are singular).  The member
is superspecial exactly when the associated Legendre curve with parameter
Lambda^-(lambda) = (1-lambda)(lambda - sqrt(delta))^2 is supersingular; the
partner Lambda^+ then is too.  The scan classifies one representative per
S3-orbit and stamps the rest, with the Deuring-polynomial evaluation
vectorized across representatives.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .classno import class_number
from .curves import LegendreCurve, deuring_coefficients, is_supersingular
from .fields import FieldElement, QuadExtElement, check_modulus, sqrt_in_fp2

VECTOR_MODULUS_BOUND = 1 << 30  # keeps the int64 Horner kernel overflow-free

PSI_CSV_HEADER = "p,class,psi,h_p,h_3p,ok"


def congruence_class(p: int) -> str:
    if p % 4 == 1:
        return "1mod4"
    return "7mod12" if p % 12 == 7 else "11mod12"


def delta_of(lam: int, p: int) -> int:
    return (lam * lam - lam + 1) % p


def is_admissible(lam: int, p: int) -> bool:
    lam %= p
    return lam not in (0, 1) and delta_of(lam, p) != 0


def orbit(lam: int | FieldElement, p: int | None = None) -> frozenset[int]:
    """The S3-orbit {lam, 1/lam, 1-lam, 1/(1-lam), lam/(lam-1), (lam-1)/lam}."""
    if isinstance(lam, FieldElement):
        lam, p = lam.value, lam.p
    lam %= p
    if lam in (0, 1):
        raise ValueError(f"lambda={lam} is singular")
    inv = pow(lam, -1, p)
    inv1m = pow(1 - lam, -1, p)
    return frozenset(
        (
            lam,
            inv,
            (1 - lam) % p,
            inv1m % p,
            lam * pow(lam - 1, -1, p) % p,
            (lam - 1) * inv % p,
        )
    )


@dataclass(frozen=True)
class LambdaRecord:
    """One family member: lambda, its discriminant data and the Lambda pair."""

    lam: int
    p: int
    delta: int
    sqrt_delta: QuadExtElement
    lambda_minus: QuadExtElement
    lambda_plus: QuadExtElement
    superspecial: bool


def lambda_record(lam: int | FieldElement, p: int | None = None) -> LambdaRecord:
    """Build the record; the supersingularity test runs on E_{Lambda^-} only."""
    if isinstance(lam, FieldElement):
        lam, p = lam.value, lam.p
    check_modulus(p)
    lam %= p
    if lam in (0, 1):
        raise ValueError(f"lambda={lam} gives a singular member")
    delta = delta_of(lam, p)
    if delta == 0:
        raise ValueError(f"lambda={lam} has delta = 0 (singular member)")
    s = sqrt_in_fp2(FieldElement(delta, p))
    lam_e = QuadExtElement(lam, 0, p)
    minus = (1 - lam_e) * (lam_e - s) ** 2
    plus = (1 - lam_e) * (lam_e + s) ** 2
    ss = is_supersingular(LegendreCurve(minus, p))
    return LambdaRecord(lam, p, delta, s, minus, plus, ss)


@dataclass(frozen=True)
class PsiReport:
    """Per-prime summary of the superspecial scan."""

    p: int
    congruence: str
    psi: int
    lambdas: tuple[int, ...]
    h_p: int
    h_3p: int
    closed_form_ok: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "p": self.p,
                "class": self.congruence,
                "psi": self.psi,
                "h_p": self.h_p,
                "h_3p": self.h_3p,
                "ok": self.closed_form_ok,
                "lambdas": list(self.lambdas),
            },
            separators=(",", ":"),
        )

    def to_csv_row(self) -> str:
        return (
            f"{self.p},{self.congruence},{self.psi},{self.h_p},"
            f"{self.h_3p},{str(self.closed_form_ok).lower()}"
        )


def _pow_mod_vec(base: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            out = out * b % p
        b = b * b % p
        e >>= 1
    return out


def _sqrt_table(p: int) -> np.ndarray:
    """table[v] = the smaller square root of v, or -1 for non-residues."""
    table = np.full(p, -1, dtype=np.int64)
    x = np.arange((p + 1) // 2, dtype=np.int64)
    table[(x * x) % p] = x
    return table


_SCAN_CACHE: dict[int, tuple[int, ...]] = {}


def seed_scan_cache(entries) -> None:
    """Install precomputed superspecial sets (e.g. from worker processes)."""
    for p, lambdas in entries:
        _SCAN_CACHE[p] = tuple(lambdas)


def superspecial_lambdas(p: int) -> tuple[int, ...]:
    """All lambda in F_p with a superspecial member, by orbit-stamped scan."""
    cached = _SCAN_CACHE.get(p)
    if cached is not None:
        return cached
    result = _orbit_scan(p, -1)
    _SCAN_CACHE[p] = result
    return result


def _orbit_scan(p: int, eps: int) -> tuple[int, ...]:
    """Classify every orbit through the Lambda^eps branch (eps = -1 or +1).

    The two branches must agree member-by-member (a supersingular partner
    forces the other); the +1 branch exists so tests can compare them.
    """
    check_modulus(p)
    if p >= VECTOR_MODULUS_BOUND:
        raise ValueError(f"p={p} above the vector kernel bound")
    lam = np.arange(2, p, dtype=np.int64)
    delta = (lam * lam - lam + 1) % p
    lam = lam[delta != 0]
    if lam.size == 0:
        return ()
    # orbit representative = minimum of the six members
    inv_all = _pow_mod_vec(np.arange(p, dtype=np.int64), p - 2, p)
    members = np.stack(
        [
            lam,
            inv_all[lam],
            (1 - lam) % p,
            inv_all[(1 - lam) % p],
            lam * inv_all[(lam - 1) % p] % p,
            (lam - 1) % p * inv_all[lam] % p,
        ]
    )
    rep = members.min(axis=0)
    reps = np.unique(rep)
    delta_r = (reps * reps - reps + 1) % p
    n = int(smallest_nonresidue_int(p))
    chi = _pow_mod_vec(delta_r, (p - 1) // 2, p)
    residue = chi == 1
    table = _sqrt_table(p)
    root = np.where(residue, table[delta_r], table[delta_r * inv_all[n] % p])
    # Lambda^eps = (1-lam)((lam^2+delta) + 2*eps*lam*sqrt(delta)); the sqrt
    # part stays rational for residues and carries the w-component otherwise
    one_m = (1 - reps) % p
    base = (reps * reps + delta_r) % p
    cross = eps * 2 * reps % p * root % p
    la = np.where(residue, one_m * ((base + cross) % p) % p, one_m * base % p)
    lb = np.where(residue, 0, (one_m * cross) % p)

    coeffs = np.array(deuring_coefficients(p), dtype=np.int64)
    acc_a = np.zeros_like(la)
    acc_b = np.zeros_like(lb)
    for k in range(len(coeffs) - 1, -1, -1):
        acc_a, acc_b = (
            (acc_a * la % p + acc_b * lb % p * n + coeffs[k]) % p,
            (acc_a * lb + acc_b * la) % p,
        )
    ss = (acc_a == 0) & (acc_b == 0)
    out: set[int] = set()
    for rep_value in reps[ss]:
        out.update(orbit(int(rep_value), p))
    return tuple(sorted(out))


def smallest_nonresidue_int(p: int) -> int:
    from .fields import smallest_nonresidue

    return smallest_nonresidue(p)


def psi_p_bruteforce(p: int) -> tuple[int, ...]:
    """Pure-python per-lambda scan, no orbit shortcut; oracle for the kernel."""
    out = []
    for lam in range(2, p):
        if delta_of(lam, p) == 0:
            continue
        if lambda_record(lam, p).superspecial:
            out.append(lam)
    return tuple(out)


def psi_closed_form(p: int) -> int:
    """The predicted count by congruence class: (3/2)h(-3p), 0, or 3h(-p)."""
    cls = congruence_class(p)
    if cls == "1mod4":
        h = class_number(3 * p)
        if (3 * h) % 2:
            raise ArithmeticError(f"h(-3p) odd at p={p}")
        return 3 * h // 2
    if cls == "7mod12":
        return 0
    return 3 * class_number(p)


def psi_p(p: int) -> PsiReport:
    """Scan all lambda, count superspecial members, attach the verdict."""
    lambdas = superspecial_lambdas(p)
    psi = len(lambdas)
    # -p and -3p are only discriminants in the congruence classes the closed
    # form uses them in; the other rows report the field discriminant instead
    h_p = class_number(p) if p % 4 == 3 else class_number(4 * p)
    h_3p = class_number(3 * p) if p % 4 == 1 else class_number(12 * p)
    ok = psi == psi_closed_form(p)
    return PsiReport(p, congruence_class(p), psi, lambdas, h_p, h_3p, ok)


# ---------------------------------------------------------------------------
# the 3-torsion correspondence polynomials of the p = 11 mod 12 branch

_HALVES = {
    "f": (
        # coefficients of f(a, b^2): (a-power, b2-power, numerator, denominator)
        (9, 0, -3, 1), (8, 0, 14, 1), (7, 0, -34, 1), (6, 0, 50, 1),
        (5, 0, -42, 1), (4, 1, 21, 1), (4, 0, 18, 1), (3, 1, -32, 1),
        (3, 0, -3, 1), (2, 1, 11, 1), (1, 1, 2, 1), (0, 1, -1, 1),
    ),
    "g": (
        (8, 0, 1, 1), (7, 0, -4, 1), (6, 0, 2, 1), (5, 0, 8, 1),
        (4, 0, -12, 1), (3, 1, 20, 1), (3, 0, 6, 1), (2, 1, -30, 1),
        (2, 0, -1, 1), (1, 1, 14, 1), (0, 1, -2, 1),
    ),
    "h": (
        (9, 0, -3, 1), (8, 0, 27, 2), (7, 0, -22, 1), (6, 0, 14, 1),
        (5, 0, 1, 1), (4, 1, -39, 2), (4, 0, -6, 1), (3, 1, 39, 1),
        (3, 0, 3, 1), (2, 1, -61, 2), (2, 0, -1, 2), (1, 1, 11, 1),
        (0, 1, -3, 2),
    ),
}


def fgh_eval(a: int | FieldElement, b2: int | FieldElement, p: int | None = None):
    """The three correspondence polynomials evaluated at (a, b^2) in F_p."""
    if isinstance(a, FieldElement):
        a, p = a.value, a.p
    if isinstance(b2, FieldElement):
        b2 = b2.value
    a %= p
    b2 %= p
    out = []
    for name in ("f", "g", "h"):
        acc = 0
        for pa, pb, num, den in _HALVES[name]:
            term = num * pow(a, pa, p) % p * pow(b2, pb, p) % p
            if den != 1:
                term = term * pow(den, -1, p) % p
            acc = (acc + term) % p
        out.append(FieldElement(acc, p))
    return tuple(out)


def lambda_from_torsion(t: int | FieldElement, a: int | FieldElement, p: int | None = None) -> FieldElement:
    """lambda = f/g for a 3-torsion abscissa a of E_t; g = 0 cannot happen."""
    if isinstance(t, FieldElement):
        t, p = t.value, t.p
    if isinstance(a, FieldElement):
        a = a.value
    a %= p
    t %= p
    quartic = (3 * pow(a, 4, p) - 4 * (1 + t) * pow(a, 3, p) + 6 * t * a * a - t * t) % p
    if quartic:
        raise ValueError("a is not a 3-torsion abscissa of E_t")
    b2 = a * (a - 1) % p * (a - t) % p
    f, g, _ = fgh_eval(a, b2, p)
    if g.is_zero():
        raise ArithmeticError(
            "g(a, b^2) = 0: would force a^2 - a + 1/3 = 0, impossible for a in F_p"
        )
    return f / g


def torsion_from_lambda(lam: int, eps: int, sqrt_delta: FieldElement) -> FieldElement:
    """The inverse map: a = (1 + lam + 2 eps sqrt(delta)) / 3, in F_p."""
    p = sqrt_delta.p
    return (FieldElement(1 + lam, p) + 2 * eps * sqrt_delta) / 3
