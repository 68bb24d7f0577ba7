"""Pure-Python sparse-monomial kernels.

These are the hot inner loops shared by ring-element and truncated-series
arithmetic: multiply-accumulate over dicts mapping exponent tuples to
coefficients.  Coefficients are arbitrary Python objects supporting +, * and
truth-testing (int, Fraction, or ring elements); an optional integer modulus
reduces integer coefficients in place.

The compiled twin in ``_poly_kernel.pyx`` implements the same contract; the
selector in ``_kernel`` picks whichever is available.
"""

BACKEND = "python"


def mul_dicts(a, b, caps, total, modulus):
    """Return the product of two exponent->coefficient dicts.

    caps   -- per-position inclusive exponent bounds (tuple) or None
    total  -- inclusive total-degree bound, negative for unbounded
    modulus-- reduce integer coefficients modulo this, or None
    """
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if caps is not None:
                drop = False
                for x, cap in zip(e, caps):
                    if x > cap:
                        drop = True
                        break
                if drop:
                    continue
            if total >= 0 and sum(e) > total:
                continue
            c = ca * cb
            prev = out.get(e)
            if prev is not None:
                c = prev + c
            out[e] = c
    if modulus is not None:
        return {e: cr for e, c in out.items() if (cr := c % modulus)}
    return {e: c for e, c in out.items() if c}


def add_dicts(a, b, modulus):
    """Return the sum of two exponent->coefficient dicts."""
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


def scale_dict(a, c, modulus):
    """Return ``c * a`` for a scalar coefficient c."""
    if not c:
        return {}
    out = {}
    for e, ca in a.items():
        s = c * ca
        if modulus is not None:
            s = s % modulus
        if s:
            out[e] = s
    return out
