"""Gamma and Riemann zeta functions on the real line.

Both are needed at double precision for the limits of the slowly varying
part of the covariance and for the variance of the infinite superposition.
"""

import math

__all__ = ["special_gamma", "special_zeta"]

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# B_{2j} / (2j)! for j = 1..10
_BERNOULLI_OVER_FACT = (
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
)


def _lanczos(x: float) -> float:
    # valid for x >= 0.5
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * acc * math.exp((x + 0.5) * math.log(t) - t)


def special_gamma(x: float) -> float:
    """Euler's gamma function for ``x > 0``.

    Uses the Lanczos approximation for ``x >= 0.5`` and the reflection
    formula below that. Integer arguments up to 171 are returned exactly
    as factorials.

    Raises
    ------
    ValueError
        If ``x <= 0`` or ``x`` is not finite.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"special_gamma requires x > 0, got {x!r}")
    if x == int(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    if x > 171.6:
        raise OverflowError("special_gamma overflows for x > 171.6")
    return _lanczos(x)


def special_zeta(s: float, terms: int = 20) -> float:
    """Riemann zeta function for real ``s > 1``.

    Direct summation of the first ``terms - 1`` terms followed by an
    Euler-Maclaurin correction for the remainder.
    """
    s = float(s)
    if not math.isfinite(s) or s <= 1.0:
        raise ValueError(f"special_zeta requires s > 1, got {s!r}")
    n = terms
    head = math.fsum(k ** -s for k in range(1, n))
    tail = n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** -s
    # rising factorial s(s+1)...(s+2j-2) times n^{-s-2j+1}
    rising = s
    power = n ** (-s - 1.0)
    for j, coef in enumerate(_BERNOULLI_OVER_FACT, start=1):
        term = coef * rising * power
        tail += term
        if abs(term) < 1e-17 * abs(head):
            break
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= n * n
    return head + tail
