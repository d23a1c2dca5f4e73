"""Pure-Python scalar kernels.

These are the hot inner loops: truncated theta products, q-Pochhammer
loops, and the terminating sums every higher-level formula reduces to.
`_kernels_cy` is a Cython twin with identical signatures and semantics;
`backend` selects one at import time and the test suite compares them.

Conventions shared by both backends:

- all inputs are assumed finite and pre-validated by the wrappers in
  `scalar`/`series`; the kernels only guard against divisions that the
  wrappers cannot see ahead of time,
- a (numerically) vanishing denominator factor raises ZeroDivisionError
  with a short description; wrappers translate that into
  SingularParameterError,
- every sum runs the term recurrence forward (O(n) factor updates per
  term), never recomputing Pochhammers from scratch.
"""

from __future__ import annotations

# magnitude below which a denominator factor counts as an exact zero
SINGULAR_EPS = 1e-13


def theta(x: complex, p: complex, nfac: int) -> complex:
    """Truncated theta product; exactly 1 - x when p == 0.

    prod_{j=0}^{nfac-1} (1 - p**j * x) * (1 - p**(j+1) / x)
    """
    if p == 0:
        return 1.0 - x
    acc = 1.0 + 0.0j
    pj = 1.0 + 0.0j
    inv = 1.0 / x
    for _ in range(nfac):
        pj1 = pj * p
        acc *= (1.0 - pj * x) * (1.0 - pj1 * inv)
        pj = pj1
    return acc


def qpoch(a: complex, q: complex, k: int) -> complex:
    """(a; q)_k for k >= 0."""
    acc = 1.0 + 0.0j
    aj = a + 0.0j
    for _ in range(k):
        acc *= 1.0 - aj
        aj *= q
    return acc


def epoch(a: complex, q: complex, p: complex, k: int, nfac: int) -> complex:
    """(a; q, p)_k = prod_{j<k} theta(a q^j; p) for k >= 0."""
    if p == 0:
        return qpoch(a, q, k)
    acc = 1.0 + 0.0j
    aj = a + 0.0j
    for _ in range(k):
        acc *= theta(aj, p, nfac)
        aj *= q
    return acc


def vwp_sum(
    a: complex,
    bs: tuple,
    q: complex,
    p: complex,
    z: complex,
    n: int,
    nfac: int,
) -> complex:
    """Terminating very-well-poised sum with leading parameter a.

    sum_{k=0}^{n}  theta(a q^{2k}; p) / theta(a; p)
                   * (a, bs...; q, p)_k / (q, a q / bs...; q, p)_k * z^k

    At p == 0 this is the classical very-well-poised series of length
    len(bs) + 3 over len(bs) + 2; at p != 0 (with z == q) the elliptic one.
    The well-poised factor is evaluated per term rather than chained, so a
    theta zero at an intermediate k kills that term without poisoning the
    recurrence.
    """
    th_a = theta(a, p, nfac)
    if abs(th_a) < SINGULAR_EPS:
        raise ZeroDivisionError("well-poised leading factor theta(a) vanishes")
    dens = [q]
    for b in bs:
        if b == 0:
            raise ZeroDivisionError("well-poised parameter b = 0")
        dens.append(a * q / b)
    total = 0.0 + 0.0j
    run = 1.0 + 0.0j  # z^k * (a,bs;q,p)_k / (q,aq/bs;q,p)_k
    qk = 1.0 + 0.0j
    aq2k = a + 0.0j
    for k in range(n + 1):
        total += run * theta(aq2k, p, nfac) / th_a
        if k == n:
            break
        num = theta(a * qk, p, nfac)
        for b in bs:
            num *= theta(b * qk, p, nfac)
        den = 1.0 + 0.0j
        for d in dens:
            f = theta(d * qk, p, nfac)
            if abs(f) < SINGULAR_EPS:
                raise ZeroDivisionError(
                    f"denominator Pochhammer factor vanishes at term {k + 1}"
                )
            den *= f
        run *= z * num / den
        qk *= q
        aq2k *= q * q
    return total


def phi_sum(
    top: tuple, bottom: tuple, q: complex, z: complex, n: int, corr: int
) -> complex:
    """Terminating basic hypergeometric sum.

    sum_{k=0}^{n} (top; q)_k / ((q; q)_k (bottom; q)_k)
                  * ((-1)^k q^binom(k,2))^corr * z^k

    with corr = 1 + len(bottom) - len(top).  Zero entries in `bottom` are
    legal ((0; q)_k == 1).
    """
    total = 0.0 + 0.0j
    run = 1.0 + 0.0j
    qk = 1.0 + 0.0j
    for k in range(n + 1):
        total += run
        if k == n:
            break
        num = 1.0 + 0.0j
        for t in top:
            num *= 1.0 - t * qk
        den = 1.0 - q * qk
        if abs(den) < SINGULAR_EPS:
            raise ZeroDivisionError(f"(q;q) factor vanishes at term {k + 1}")
        for b in bottom:
            f = 1.0 - b * qk
            if abs(f) < SINGULAR_EPS:
                raise ZeroDivisionError(
                    f"denominator Pochhammer factor vanishes at term {k + 1}"
                )
            den *= f
        fac = z
        if corr > 0:
            g = -qk
            for _ in range(corr):
                fac *= g
        elif corr < 0:
            g = -qk
            for _ in range(-corr):
                fac /= g
        run *= num / den * fac
        qk *= q
    return total


def f_sum(top: tuple, bottom: tuple, x: complex, n: int) -> complex:
    """Terminating ordinary hypergeometric sum.

    sum_{k=0}^{n} (top)_k / ((bottom)_k k!) * x^k
    """
    total = 0.0 + 0.0j
    run = 1.0 + 0.0j
    for k in range(n + 1):
        total += run
        if k == n:
            break
        num = 1.0 + 0.0j
        for t in top:
            num *= t + k
        den = k + 1.0
        for b in bottom:
            f = b + k
            if abs(f) < SINGULAR_EPS:
                raise ZeroDivisionError(
                    f"denominator rising factorial vanishes at term {k + 1}"
                )
            den *= f
        run *= num / den * x
    return total
