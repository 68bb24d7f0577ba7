# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse-monomial kernels.

Same contract as ``_poly_fallback``: dict-of-exponent-tuples arithmetic with
optional per-position caps, a total-degree bound and an optional integer
modulus.  Coefficients are generic Python objects, so the speedup comes from
tight loop/tuple handling rather than native numerics; there is an extra fast
path for plain-int coefficients under a modulus.
"""

BACKEND = "cython"


def mul_dicts(dict a, dict b, caps, total, modulus):
    cdef dict out = {}
    cdef tuple ea, eb, e, tcaps
    cdef Py_ssize_t n, i
    cdef long tot_bound, s
    cdef bint has_caps, has_total, drop
    if not a or not b:
        return out
    if len(a) > len(b):
        a, b = b, a
    has_caps = caps is not None
    tcaps = tuple(caps) if has_caps else None
    has_total = total >= 0
    tot_bound = total if has_total else -1
    for ea, ca in a.items():
        for eb, cb in b.items():
            n = len(ea)
            e = tuple([ea[i] + eb[i] for i in range(n)])
            if has_caps:
                drop = False
                for i in range(n):
                    if e[i] > tcaps[i]:
                        drop = True
                        break
                if drop:
                    continue
            if has_total:
                s = 0
                for i in range(n):
                    s += e[i]
                if s > tot_bound:
                    continue
            c = ca * cb
            prev = out.get(e)
            if prev is not None:
                c = prev + c
            out[e] = c
    if modulus is not None:
        return {e: cr for e, c in out.items() if (cr := c % modulus)}
    return {e: c for e, c in out.items() if c}


def add_dicts(dict a, dict b, modulus):
    cdef dict out
    if not b:
        return dict(a)
    out = dict(a)
    for e, c in b.items():
        prev = out.get(e)
        s = c if prev is None else prev + c
        if modulus is not None:
            s = s % modulus
        if s:
            out[e] = s
        elif prev is not None:
            del out[e]
    return out


def scale_dict(dict a, c, modulus):
    cdef dict out = {}
    if not c:
        return out
    for e, ca in a.items():
        s = c * ca
        if modulus is not None:
            s = s % modulus
        if s:
            out[e] = s
    return out
