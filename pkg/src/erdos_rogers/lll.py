"""Log-domain evaluation of the Local Lemma weights and sufficient inequalities.

Every quantity is a monomial in ``ln q`` and ``ln ln q`` times a rational
constant, except for the exponent ``H = 64 s beta q ln q`` of the
``q**(64 s beta q)`` dependency counts, which overflows any float long
before q gets interesting.  Sides are therefore kept as symbolic
:class:`LogTerm` records, differences are formed coefficient-wise (so the
H terms cancel exactly) and only then evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .numtheory import primes_between

# e^{-2x} <= 1 - x holds on [0, X_RELAX]; X_RELAX ~ 0.7968
X_RELAX = 0.79
NAMES = ("A1", "A2", "A3", "B1", "B2", "B3")


class BadRange(ValueError):
    pass


class EmptyRange(ValueError):
    pass


class LllOverflow(OverflowError):
    pass


@dataclass(frozen=True)
class LogTerm:
    """ln(const) + ell*lnln(q) + big*ln(q) + lnell*ln(lnln(q)) + extra."""

    const: Fraction = Fraction(1)
    ell: Fraction = Fraction(0)
    big: Fraction = Fraction(0)
    lnell: Fraction = Fraction(0)
    extra: float = 0.0

    def __sub__(self, other: "LogTerm") -> "LogTerm":
        return LogTerm(
            self.const / other.const,
            self.ell - other.ell,
            self.big - other.big,
            self.lnell - other.lnell,
            self.extra - other.extra,
        )

    def evaluate(self, ln_q: float, lnln_q: float) -> float:
        total = math.log(self.const) if self.const != 1 else 0.0
        if self.ell:
            total += float(self.ell) * lnln_q
        if self.big:
            total += float(self.big) * ln_q
        if self.lnell:
            total += float(self.lnell) * math.log(lnln_q)
        return total + self.extra


@dataclass(frozen=True)
class LllParams:
    q: int
    s: int
    ln_q: float
    lnln_q: float
    ln_alpha: float
    ln_beta: float
    ln_gamma_sp: float
    ln_m: float
    ln_x: float
    ln_huge: float  # ln(64 s beta q ln q)
    ln_dAA: float
    ln_dBA: float

    @property
    def huge(self) -> float:
        """64 s beta q ln q, i.e. ln q**(64 s beta q)."""
        if self.ln_huge > 709.0:
            raise LllOverflow(f"ln(1/y) ~ e^{self.ln_huge:.1f} exceeds the float range")
        return math.exp(self.ln_huge)

    @property
    def ln_inv_y(self) -> float:
        return 4 * self.s**2 * self.lnln_q + self.huge

    @property
    def ln_dAB(self) -> float:
        return self.huge

    @property
    def ln_dBB(self) -> float:
        return self.huge

    @property
    def x(self) -> float:
        return math.exp(self.ln_x)

    def two_y_dAB(self) -> float:
        """2 y d_AB with the q**(64 s beta q) factors cancelled: 2 (ln q)^(-4 s^2)."""
        return math.exp(_two_y_d(self.s).evaluate(self.ln_q, self.lnln_q))


def compute_params(q: int, s: int) -> LllParams:
    if q < 3 or s < 3:
        raise BadRange(f"need q >= 3 and s >= 3, got q={q}, s={s}")
    L = math.log(q)
    ell = math.log(L)
    ln_alpha = 2 * ell
    ln_beta = 4 * s * s * ell
    ln_m = ln_alpha + 2 * ln_beta + L - math.log(16)
    d_core = s * math.log(6) + (2 * s - 2) * ln_alpha
    return LllParams(
        q=q,
        s=s,
        ln_q=L,
        lnln_q=ell,
        ln_alpha=ln_alpha,
        ln_beta=ln_beta,
        ln_gamma_sp=8 * ell,
        ln_m=ln_m,
        ln_x=-2 * s * s * ln_alpha,
        ln_huge=math.log(64 * s) + ln_beta + L + ell,
        ln_dAA=math.log(comb(s + 1, 2)) + d_core,
        ln_dBA=ln_m + math.log(comb(s, 2)) + d_core,
    )


def _two_y_d(s: int) -> LogTerm:
    # 2 y d_AB = 2 (ln q)^{-4s^2}: the q^{64 s beta q} factors cancel
    return LogTerm(Fraction(2), ell=Fraction(-4 * s * s))


@lru_cache(maxsize=None)
def _sides(s: int) -> dict[str, tuple[LogTerm, LogTerm]]:
    """Symbolic (ln LHS, ln RHS) per inequality, except B1's non-monomial tail."""
    s2 = s * s
    c_s1, c_s = comb(s + 1, 2), comb(s, 2)
    a_lhs = Fraction(2 * s2, 2 * s2 + 2 * s) * c_s1 * 8  # times ln ln q
    a23_lhs = Fraction(s, 2 * s2 + 2 * s) * c_s1 * 8
    six_s = Fraction(6**s)
    # ln m = 2l + 8 s^2 l + ln q - ln 16; ln(1/3 m gamma^{-C(s,2)})
    b_lhs = LogTerm(Fraction(1, 48), ell=Fraction(2 + 8 * s2 - 8 * c_s), big=Fraction(1))
    return {
        "A1": (LogTerm(a_lhs, lnell=Fraction(1)), LogTerm(Fraction(4 * s2), lnell=Fraction(1))),
        "A2": (
            LogTerm(a23_lhs, lnell=Fraction(1)),
            LogTerm(2 * c_s1 * six_s, ell=Fraction(-4 * s2 + 4 * s - 4)),
        ),
        "A3": (LogTerm(a23_lhs, lnell=Fraction(1)), _two_y_d(s)),
        # ln(1/y) = H + 4 s^2 l; ln H = ln(64 s) + (4 s^2 + 1) l + ln q
        "B1": (b_lhs, LogTerm(Fraction(64 * s), ell=Fraction(4 * s2 + 1), big=Fraction(1))),
        "B2": (
            b_lhs,
            LogTerm(Fraction(2 * c_s) * six_s / 16, ell=Fraction(4 * s2 + 4 * s - 2), big=Fraction(1)),
        ),
        "B3": (b_lhs, _two_y_d(s)),
    }


@dataclass(frozen=True)
class Margin:
    name: str
    ln_lhs: float
    ln_rhs: float
    margin: float  # ln_lhs - ln_rhs, formed before evaluation

    @property
    def ok(self) -> bool:
        return self.margin >= 0


@dataclass(frozen=True)
class MarginReport:
    q: int
    s: int
    margins: dict[str, Margin]
    relaxation_ok: bool

    @property
    def all_satisfied(self) -> bool:
        return self.relaxation_ok and all(m.ok for m in self.margins.values())

    def failing(self) -> list[str]:
        return [n for n, m in self.margins.items() if not m.ok]

    def table(self) -> list[dict]:
        return [
            {"name": m.name, "ln_lhs": m.ln_lhs, "ln_rhs": m.ln_rhs, "margin": m.margin, "ok": m.ok}
            for m in self.margins.values()
        ]


def check_inequalities(params: LllParams) -> MarginReport:
    L, ell = params.ln_q, params.lnln_q
    s = params.s
    out = {}
    for name, (lhs, rhs) in _sides(s).items():
        if name == "B1":
            # ln(H + 4 s^2 l) = ln H + log1p(4 s^2 l / H)
            tail = math.log1p(math.exp(math.log(4 * s * s * ell) - params.ln_huge))
            rhs = LogTerm(rhs.const, rhs.ell, rhs.big, rhs.lnell, tail)
        out[name] = Margin(name, lhs.evaluate(L, ell), rhs.evaluate(L, ell), (lhs - rhs).evaluate(L, ell))
    x_ok = params.ln_x <= math.log(X_RELAX)
    # ln(1/y) > H > 0 and y <= X_RELAX needs ln(1/y) >= -ln X_RELAX
    y_ok = params.ln_huge > 709.0 or 4 * s * s * ell + math.exp(params.ln_huge) >= -math.log(X_RELAX)
    return MarginReport(params.q, s, out, x_ok and y_ok)


@dataclass
class ScanResult:
    s: int
    q_min: int
    q_max: int
    q0: int | None
    first_satisfied: dict[str, int | None] = field(default_factory=dict)
    blocking: list[str] = field(default_factory=list)
    report: MarginReport | None = None


def scan_threshold(s: int, q_min: int, q_max: int) -> ScanResult:
    """Smallest prime q in [q_min, q_max] at which all six inequalities hold."""
    if not 3 <= q_min <= q_max:
        raise BadRange(f"need 3 <= q_min <= q_max, got {q_min}, {q_max}")
    primes = primes_between(q_min, q_max)
    if not primes:
        raise EmptyRange(f"no prime in [{q_min}, {q_max}]")
    first: dict[str, int | None] = {n: None for n in NAMES}
    rep = None
    for q in primes:
        rep = check_inequalities(compute_params(q, s))
        for n, m in rep.margins.items():
            if m.ok and first[n] is None:
                first[n] = q
        if rep.all_satisfied:
            return ScanResult(s, q_min, q_max, q, first, [], rep)
    return ScanResult(s, q_min, q_max, None, first, rep.failing(), rep)
