# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernels_py.

Signatures, semantics, and error messages match the pure backend exactly;
the test suite diffs the two on random inputs.  See _kernels_py for the
shared conventions.
"""

SINGULAR_EPS = 1e-13

cdef double _EPS = 1e-13


cpdef double complex theta(double complex x, double complex p, int nfac):
    """Truncated theta product; exactly 1 - x when p == 0."""
    if p == 0:
        return 1.0 - x
    cdef double complex acc = 1.0
    cdef double complex pj = 1.0
    cdef double complex pj1
    cdef double complex inv = 1.0 / x
    cdef int j
    for j in range(nfac):
        pj1 = pj * p
        acc = acc * (1.0 - pj * x) * (1.0 - pj1 * inv)
        pj = pj1
    return acc


cpdef double complex qpoch(double complex a, double complex q, int k):
    """(a; q)_k for k >= 0."""
    cdef double complex acc = 1.0
    cdef double complex aj = a
    cdef int j
    for j in range(k):
        acc = acc * (1.0 - aj)
        aj = aj * q
    return acc


cpdef double complex epoch(double complex a, double complex q, double complex p,
                           int k, int nfac):
    """(a; q, p)_k = prod_{j<k} theta(a q^j; p) for k >= 0."""
    if p == 0:
        return qpoch(a, q, k)
    cdef double complex acc = 1.0
    cdef double complex aj = a
    cdef int j
    for j in range(k):
        acc = acc * theta(aj, p, nfac)
        aj = aj * q
    return acc


cpdef double complex vwp_sum(double complex a, tuple bs, double complex q,
                             double complex p, double complex z, int n, int nfac):
    """Terminating very-well-poised sum with leading parameter a.

    The well-poised factor is evaluated per term rather than chained, so a
    theta zero at an intermediate k kills that term without poisoning the
    recurrence.
    """
    cdef double complex th_a = theta(a, p, nfac)
    if abs(th_a) < _EPS:
        raise ZeroDivisionError("well-poised leading factor theta(a) vanishes")
    cdef list dens = [q]
    cdef double complex bv
    for b in bs:
        bv = b
        if bv == 0:
            raise ZeroDivisionError("well-poised parameter b = 0")
        dens.append(a * q / bv)
    cdef double complex total = 0.0
    cdef double complex run = 1.0
    cdef double complex qk = 1.0
    cdef double complex aq2k = a
    cdef double complex num, den, f
    cdef int k
    for k in range(n + 1):
        total = total + run * theta(aq2k, p, nfac) / th_a
        if k == n:
            break
        num = theta(a * qk, p, nfac)
        for b in bs:
            bv = b
            num = num * theta(bv * qk, p, nfac)
        den = 1.0
        for d in dens:
            f = theta(<double complex> d * qk, p, nfac)
            if abs(f) < _EPS:
                raise ZeroDivisionError(
                    f"denominator Pochhammer factor vanishes at term {k + 1}"
                )
            den = den * f
        run = run * z * num / den
        qk = qk * q
        aq2k = aq2k * q * q
    return total


cpdef double complex phi_sum(tuple top, tuple bottom, double complex q,
                             double complex z, int n, int corr):
    """Terminating basic hypergeometric sum; zero bottom entries are legal."""
    cdef double complex total = 0.0
    cdef double complex run = 1.0
    cdef double complex qk = 1.0
    cdef double complex num, den, f, fac, g, tv
    cdef int k, j
    for k in range(n + 1):
        total = total + run
        if k == n:
            break
        num = 1.0
        for t in top:
            tv = t
            num = num * (1.0 - tv * qk)
        den = 1.0 - q * qk
        if abs(den) < _EPS:
            raise ZeroDivisionError(f"(q;q) factor vanishes at term {k + 1}")
        for b in bottom:
            tv = b
            f = 1.0 - tv * qk
            if abs(f) < _EPS:
                raise ZeroDivisionError(
                    f"denominator Pochhammer factor vanishes at term {k + 1}"
                )
            den = den * f
        fac = z
        if corr > 0:
            g = -qk
            for j in range(corr):
                fac = fac * g
        elif corr < 0:
            g = -qk
            for j in range(-corr):
                fac = fac / g
        run = run * num / den * fac
        qk = qk * q
    return total


cpdef double complex f_sum(tuple top, tuple bottom, double complex x, int n):
    """Terminating ordinary hypergeometric sum."""
    cdef double complex total = 0.0
    cdef double complex run = 1.0
    cdef double complex num, den, f, tv
    cdef int k
    for k in range(n + 1):
        total = total + run
        if k == n:
            break
        num = 1.0
        for t in top:
            tv = t
            num = num * (tv + k)
        den = k + 1.0
        for b in bottom:
            tv = b
            f = tv + k
            if abs(f) < _EPS:
                raise ZeroDivisionError(
                    f"denominator rising factorial vanishes at term {k + 1}"
                )
            den = den * f
        run = run * num / den * x
    return total
