"""Pure-Python hypergeometric kernels.

This is the reference implementation and the fallback used when the compiled
``_ckernels`` extension is not available. Every branch here has a twin in
``_ckernels.pyx``; keep them in step.

Only real arguments are supported. The evaluation strategy is:

* direct power series with a term-ratio recurrence while ``|x| < 0.9``;
* ``2F1``: Pfaff transformation for ``-9 <= x <= -0.9`` (argument mapped into
  ``[0.47, 0.9]``) and the ``1/x`` connection formula below ``-9``;
* ``1F1``: Kummer's transformation for ``-50 < x <= -0.9`` and the
  large-argument expansion for ``x <= -50``;
* when a series sums terms much larger than its result, it is re-summed in
  extended precision with :mod:`decimal`.
"""

import math
from decimal import Decimal, localcontext

import numpy as np

from .errors import ConvergenceError, DomainError

MAX_TERMS = 10_000
REL_TOL = 1e-16
STREAK = 3
TRANSFORM_AT = 0.9
PFAFF_LIMIT = 9.0
ASYMPTOTIC_AT = 50.0
# re-sum in Decimal when max|term| / |sum| exceeds this
CANCELLATION_LIMIT = 1e4


def _is_nonpositive_int(v):
    return v <= 0 and v == math.floor(v)


def rgamma(x):
    """1/Gamma(x) for any real x, zero at the poles."""
    if _is_nonpositive_int(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _series_decimal(a_params, b_params, x, digits):
    with localcontext() as ctx:
        ctx.prec = digits
        a_d = [Decimal(v) for v in a_params]
        b_d = [Decimal(v) for v in b_params]
        x_d = Decimal(x)
        term = Decimal(1)
        total = Decimal(1)
        tiny = Decimal(10) ** (-(digits - 2))
        small = 0
        for n in range(MAX_TERMS):
            num = x_d
            for a in a_d:
                num *= a + n
            den = Decimal(n + 1)
            for b in b_d:
                den *= b + n
            term = term * num / den
            total += term
            if term == 0:
                break
            if abs(term) <= tiny * abs(total):
                small += 1
                if small >= STREAK:
                    break
            else:
                small = 0
        else:
            raise ConvergenceError(
                "extended-precision series did not converge",
                terms=MAX_TERMS, partial_sum=float(total), x=x,
            )
        return float(total)


def series_pfq(a_params, b_params, x):
    """Sum the generalized hypergeometric series at real ``x``.

    Raises :class:`ConvergenceError` after ``MAX_TERMS`` terms.
    """
    term = 1.0
    total = 1.0
    biggest = 1.0
    small = 0
    for n in range(MAX_TERMS):
        ratio = x / (n + 1)
        for a in a_params:
            ratio *= a + n
        for b in b_params:
            ratio /= b + n
        term *= ratio
        total += term
        mag = abs(term)
        if mag > biggest:
            biggest = mag
        if term == 0.0:
            break
        if not math.isfinite(total):
            raise ConvergenceError(
                "series overflowed", terms=n + 1, x=x,
                a=tuple(a_params), b=tuple(b_params),
            )
        if mag < REL_TOL * abs(total):
            small += 1
            if small >= STREAK:
                break
        else:
            small = 0
    else:
        raise ConvergenceError(
            "hypergeometric series did not converge",
            terms=MAX_TERMS, partial_sum=total, x=x,
            a=tuple(a_params), b=tuple(b_params),
        )
    if total == 0.0 or biggest / abs(total) > CANCELLATION_LIMIT:
        lost = int(math.log10(biggest / abs(total))) + 1 if total else 40
        return _series_decimal(a_params, b_params, x, 30 + lost)
    return total


def hyp2f1(a, b, c, x):
    if _is_nonpositive_int(c):
        raise DomainError(f"2F1 undefined for c={c}")
    if x >= 1.0:
        raise DomainError(f"2F1 requires x < 1, got {x}")
    if x == 0.0:
        return 1.0
    if abs(x) < TRANSFORM_AT or x > 0.0:
        return series_pfq((a, b), (c,), x)
    if x >= -PFAFF_LIMIT:
        return _hyp2f1_pfaff(a, b, c, x)
    d = b - a
    if d == math.floor(d):
        # connection formula is singular for integer b - a
        return _hyp2f1_pfaff(a, b, c, x)
    return _hyp2f1_inverse(a, b, c, x)


def _hyp2f1_pfaff(a, b, c, x):
    w = x / (x - 1.0)
    # put the transformation on the parameter that keeps the series shortest
    if abs(a) <= abs(b) or _is_nonpositive_int(c - a):
        return (1.0 - x) ** (-a) * series_pfq((a, c - b), (c,), w)
    return (1.0 - x) ** (-b) * series_pfq((c - a, b), (c,), w)


def _hyp2f1_inverse(a, b, c, x):
    y = -x
    inv = 1.0 / x
    gc = math.gamma(c)
    first = 0.0
    coef = gc * math.gamma(b - a) * rgamma(b) * rgamma(c - a)
    if coef != 0.0:
        first = coef * y ** (-a) * series_pfq((a, a - c + 1.0), (a - b + 1.0,), inv)
    second = 0.0
    coef = gc * math.gamma(a - b) * rgamma(a) * rgamma(c - b)
    if coef != 0.0:
        second = coef * y ** (-b) * series_pfq((b, b - c + 1.0), (b - a + 1.0,), inv)
    return first + second


def hyp1f1(a, b, x):
    if _is_nonpositive_int(b):
        raise DomainError(f"1F1 undefined for b={b}")
    if x == 0.0:
        return 1.0
    if a == b:
        return math.exp(x)
    if x > -TRANSFORM_AT:
        return series_pfq((a,), (b,), x)
    y = -x
    if y >= ASYMPTOTIC_AT:
        value = _hyp1f1_asymptotic(a, b, y)
        if value is not None:
            return value
    if y > 700.0:
        raise ConvergenceError("1F1 argument out of range", a=a, b=b, x=x)
    return math.exp(x) * series_pfq((b - a,), (b,), y)


def _hyp1f1_asymptotic(a, b, y):
    """Large-y expansion of 1F1(a; b; -y); None if it does not settle."""
    coef = math.gamma(b) * rgamma(b - a)
    if coef == 0.0:
        return None
    term = 1.0
    total = 1.0
    prev = math.inf
    c = a - b + 1.0
    for s in range(200):
        term *= (a + s) * (c + s) / ((s + 1) * y)
        mag = abs(term)
        if mag == 0.0:
            break
        if mag > prev:
            # divergent tail starts here
            if prev > 1e-15 * abs(total):
                return None
            break
        total += term
        prev = mag
        if mag < REL_TOL * abs(total):
            break
    return coef * y ** (-a) * total


def hyp1f2(a, b1, b2, x):
    if _is_nonpositive_int(b1) or _is_nonpositive_int(b2):
        raise DomainError(f"1F2 undefined for b=({b1}, {b2})")
    if x == 0.0:
        return 1.0
    return series_pfq((a,), (b1, b2), x)


def hyp1f1_array(a, b, x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    flat_in = x.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = hyp1f1(a, b, float(flat_in[i]))
    return out


def hyp2f1_array(a, b, c, x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    flat_in = x.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = hyp2f1(a, b, c, float(flat_in[i]))
    return out
