# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_pykernels``.

Same branches, same constants, same fallbacks. The rare cancellation rescue
calls back into the Python extended-precision summation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs, floor, isfinite, pow, tgamma, INFINITY

from . import _pykernels
from .errors import ConvergenceError, DomainError

cnp.import_array()

cdef int MAX_TERMS = 10000
cdef double REL_TOL = 1e-16
cdef int STREAK = 3
cdef double TRANSFORM_AT = 0.9
cdef double PFAFF_LIMIT = 9.0
cdef double ASYMPTOTIC_AT = 50.0
cdef double CANCELLATION_LIMIT = 1e4


cdef inline bint _nonpos_int(double v) nogil:
    return v <= 0.0 and v == floor(v)


cdef inline double _rgamma(double x) nogil:
    if _nonpos_int(x):
        return 0.0
    return 1.0 / tgamma(x)


# status: 0 ok, 1 not converged, 2 overflow, 3 needs extended precision
cdef double _series(double* a, int p, double* b, int q, double x, int* status) nogil:
    cdef double term = 1.0, total = 1.0, biggest = 1.0, ratio, mag
    cdef int n, k, small = 0
    status[0] = 0
    for n in range(MAX_TERMS):
        ratio = x / (n + 1)
        for k in range(p):
            ratio *= a[k] + n
        for k in range(q):
            ratio /= b[k] + n
        term *= ratio
        total += term
        mag = fabs(term)
        if mag > biggest:
            biggest = mag
        if term == 0.0:
            break
        if not isfinite(total):
            status[0] = 2
            return total
        if mag < REL_TOL * fabs(total):
            small += 1
            if small >= STREAK:
                break
        else:
            small = 0
    else:
        status[0] = 1
        return total
    if total == 0.0 or biggest / fabs(total) > CANCELLATION_LIMIT:
        status[0] = 3
    return total


cdef double _checked(double* a, int p, double* b, int q, double x) except? -1e300:
    cdef int status
    cdef double total = _series(a, p, b, q, x, &status)
    if status == 0:
        return total
    a_t = tuple(a[k] for k in range(p))
    b_t = tuple(b[k] for k in range(q))
    if status == 3:
        # the Python path re-detects the cancellation and re-sums in Decimal
        return _pykernels.series_pfq(a_t, b_t, x)
    if status == 2:
        raise ConvergenceError("series overflowed", x=x, a=a_t, b=b_t)
    raise ConvergenceError(
        "hypergeometric series did not converge",
        terms=MAX_TERMS, partial_sum=total, x=x, a=a_t, b=b_t,
    )


cdef double _hyp1f1_asymptotic(double a, double b, double y, bint* ok) nogil:
    cdef double coef = tgamma(b) * _rgamma(b - a)
    cdef double term = 1.0, total = 1.0, prev = INFINITY, mag
    cdef double c = a - b + 1.0
    cdef int s
    ok[0] = False
    if coef == 0.0:
        return 0.0
    for s in range(200):
        term *= (a + s) * (c + s) / ((s + 1) * y)
        mag = fabs(term)
        if mag == 0.0:
            break
        if mag > prev:
            if prev > 1e-15 * fabs(total):
                return 0.0
            break
        total += term
        prev = mag
        if mag < REL_TOL * fabs(total):
            break
    ok[0] = True
    return coef * pow(y, -a) * total


cdef double c_hyp1f1(double a, double b, double x) except? -1e300:
    cdef double pa[1]
    cdef double pb[1]
    cdef double y, value
    cdef bint ok
    if _nonpos_int(b):
        raise DomainError(f"1F1 undefined for b={b}")
    if x == 0.0:
        return 1.0
    if a == b:
        return exp(x)
    pb[0] = b
    if x > -TRANSFORM_AT:
        pa[0] = a
        return _checked(pa, 1, pb, 1, x)
    y = -x
    if y >= ASYMPTOTIC_AT:
        value = _hyp1f1_asymptotic(a, b, y, &ok)
        if ok:
            return value
    if y > 700.0:
        raise ConvergenceError("1F1 argument out of range", a=a, b=b, x=x)
    pa[0] = b - a
    return exp(x) * _checked(pa, 1, pb, 1, y)


cdef double _pfaff(double a, double b, double c, double x) except? -1e300:
    cdef double w = x / (x - 1.0)
    cdef double pa[2]
    cdef double pb[1]
    pb[0] = c
    if fabs(a) <= fabs(b) or _nonpos_int(c - a):
        pa[0] = a
        pa[1] = c - b
        return pow(1.0 - x, -a) * _checked(pa, 2, pb, 1, w)
    pa[0] = c - a
    pa[1] = b
    return pow(1.0 - x, -b) * _checked(pa, 2, pb, 1, w)


cdef double _inverse(double a, double b, double c, double x) except? -1e300:
    cdef double y = -x, inv = 1.0 / x
    cdef double gc = tgamma(c)
    cdef double first = 0.0, second = 0.0, coef
    cdef double pa[2]
    cdef double pb[1]
    coef = gc * tgamma(b - a) * _rgamma(b) * _rgamma(c - a)
    if coef != 0.0:
        pa[0] = a
        pa[1] = a - c + 1.0
        pb[0] = a - b + 1.0
        first = coef * pow(y, -a) * _checked(pa, 2, pb, 1, inv)
    coef = gc * tgamma(a - b) * _rgamma(a) * _rgamma(c - b)
    if coef != 0.0:
        pa[0] = b
        pa[1] = b - c + 1.0
        pb[0] = b - a + 1.0
        second = coef * pow(y, -b) * _checked(pa, 2, pb, 1, inv)
    return first + second


cdef double c_hyp2f1(double a, double b, double c, double x) except? -1e300:
    cdef double pa[2]
    cdef double pb[1]
    cdef double d
    if _nonpos_int(c):
        raise DomainError(f"2F1 undefined for c={c}")
    if x >= 1.0:
        raise DomainError(f"2F1 requires x < 1, got {x}")
    if x == 0.0:
        return 1.0
    if fabs(x) < TRANSFORM_AT or x > 0.0:
        pa[0] = a
        pa[1] = b
        pb[0] = c
        return _checked(pa, 2, pb, 1, x)
    if x >= -PFAFF_LIMIT:
        return _pfaff(a, b, c, x)
    d = b - a
    if d == floor(d):
        return _pfaff(a, b, c, x)
    return _inverse(a, b, c, x)


def hyp1f1(double a, double b, double x):
    return c_hyp1f1(a, b, x)


def hyp2f1(double a, double b, double c, double x):
    return c_hyp2f1(a, b, c, x)


def hyp1f2(double a, double b1, double b2, double x):
    cdef double pa[1]
    cdef double pb[2]
    if _nonpos_int(b1) or _nonpos_int(b2):
        raise DomainError(f"1F2 undefined for b=({b1}, {b2})")
    if x == 0.0:
        return 1.0
    pa[0] = a
    pb[0] = b1
    pb[1] = b2
    return _checked(pa, 1, pb, 2, x)


def hyp1f1_array(double a, double b, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] src = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dst = np.empty_like(src)
    cdef Py_ssize_t i
    for i in range(src.shape[0]):
        dst[i] = c_hyp1f1(a, b, src[i])
    return dst.reshape(np.shape(x))


def hyp2f1_array(double a, double b, double c, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] src = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dst = np.empty_like(src)
    cdef Py_ssize_t i
    for i in range(src.shape[0]):
        dst[i] = c_hyp2f1(a, b, c, src[i])
    return dst.reshape(np.shape(x))
