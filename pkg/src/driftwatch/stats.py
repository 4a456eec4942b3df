"""Statistical tests for version comparison.

Everything is computed from first principles on top of math.lgamma and
math.erf: the regularized incomplete beta function (continued fraction,
modified Lentz iteration) gives the Student-t tail probability for the
Welch test, and the error function gives the normal tail for the pooled
two-proportion z-test. Continued-fraction convergence is far below the
1e-6 p-value accuracy the callers rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .errors import SemanticError

# Sentinel standing in for an infinite statistic in JSON documents.
INF_SENTINEL = 1e308

_MAX_ITERATIONS = 300
_EPS = 3e-16
_FPMIN = 1e-300


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str  # "welch_t" | "two_proportion_z"
    df: Optional[float] = None  # absent for the proportion test

    def to_doc(self) -> dict[str, Any]:
        doc = {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "method": self.method,
        }
        if self.df is not None:
            doc["df"] = self.df
        return doc


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    return h  # converged enough for p-value purposes even at the cap


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b) for a, b > 0."""
    if a <= 0.0 or b <= 0.0:
        raise SemanticError("incomplete beta requires positive shape parameters")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    # Use the continued fraction on whichever side converges fast.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for T ~ Student-t with df degrees of freedom."""
    if df <= 0.0:
        raise SemanticError("degrees of freedom must be positive")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return reg_inc_beta(df / 2.0, 0.5, x)


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def sample_variance(values: Sequence[float], mu: float) -> float:
    return math.fsum((v - mu) ** 2 for v in values) / (len(values) - 1)


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Two-sided Welch t-test: no equal-variance assumption.

    t = (mean_a - mean_b) / sqrt(va/na + vb/nb), with Welch-Satterthwaite
    degrees of freedom. When both samples have zero variance the statistic
    degenerates: p = 1 for equal means, p = 0 otherwise (statistic is the
    +/-1e308 sentinel).
    """
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise SemanticError(f"welch_t_test needs >= 2 samples per side, got {na} and {nb}")
    ma, mb = mean(a), mean(b)
    va, vb = sample_variance(a, ma), sample_variance(b, mb)

    if va == 0.0 and vb == 0.0:
        if ma == mb:
            return TestResult(statistic=0.0, p_value=1.0, method="welch_t", df=float(na + nb - 2))
        statistic = INF_SENTINEL if ma > mb else -INF_SENTINEL
        return TestResult(statistic=statistic, p_value=0.0, method="welch_t", df=float(na + nb - 2))

    sa2 = va / na
    sb2 = vb / nb
    se2 = sa2 + sb2
    t = (ma - mb) / math.sqrt(se2)
    # Welch-Satterthwaite in normalized form: the shares u = sa2/se2 and
    # 1-u are O(1), so df never underflows even for subnormal variances.
    u = sa2 / se2
    w = sb2 / se2
    df = 1.0 / (u * u / (na - 1) + w * w / (nb - 1))
    if not math.isfinite(t):
        t = INF_SENTINEL if t > 0 else -INF_SENTINEL
    return TestResult(
        statistic=t,
        p_value=student_t_two_sided_p(t, df),
        method="welch_t",
        df=df,
    )


def two_proportion_test(
    successes_a: int, trials_a: int, successes_b: int, trials_b: int
) -> TestResult:
    """Two-sided pooled two-proportion z-test.

    Degenerate pooled rates (0 or 1, i.e. no variance under the null) give
    z = 0, p = 1.
    """
    for successes, trials, side in (
        (successes_a, trials_a, "a"),
        (successes_b, trials_b, "b"),
    ):
        if trials < 1:
            raise SemanticError(f"two_proportion_test side {side} has zero trials")
        if not 0 <= successes <= trials:
            raise SemanticError(
                f"two_proportion_test side {side}: successes {successes} outside [0, {trials}]"
            )
    pooled = (successes_a + successes_b) / (trials_a + trials_b)
    if pooled <= 0.0 or pooled >= 1.0:
        return TestResult(statistic=0.0, p_value=1.0, method="two_proportion_z")
    pa = successes_a / trials_a
    pb = successes_b / trials_b
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / trials_a + 1.0 / trials_b))
    z = (pa - pb) / se
    p = 2.0 * (1.0 - normal_cdf(abs(z)))
    return TestResult(statistic=z, p_value=p, method="two_proportion_z")
