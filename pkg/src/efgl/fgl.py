"""One-dimensional formal group laws at finite truncation.

A formal group law here is a two-variable truncated series F(z1, z2) over an
exact coefficient ring, together with machine checks of the axioms: F is
unital, commutative, and associative through the stated total degree.  The
module provides the standard examples (additive, multiplicative, a chord
construction on a Weierstrass cubic, p-typical laws of a given height), the
family of integer multiplication series [n], formal inverses, logarithms and
exponentials where the coefficients permit, strict isomorphisms, and a JSON
interchange format.
"""

import json
from fractions import Fraction

from efgl.rings import (RingElement, RingError, RingSpec, coeff_into,
                        ring_map)
from efgl.series import SeriesError, TruncatedSeries

FGL_VARS = ("z1", "z2")


class FGLError(ValueError):
    """Invalid formal-group-law construction or input."""


def embed_univariate(f, position, svars=FGL_VARS, caps=None, total_cap=None):
    """Place a univariate series into one slot of a multivariate frame."""
    if len(f.svars) != 1:
        raise SeriesError("embed_univariate needs a univariate series")
    svars = tuple(svars)
    n = len(svars)
    caps = f.caps * n if caps is None else caps
    if isinstance(caps, int):
        caps = (caps,) * n
    out = TruncatedSeries(f.ring, svars, caps, total_cap)
    for (k,), c in f.terms.items():
        e = [0] * n
        e[position] = k
        if out._keeps(tuple(e)):
            out.terms[tuple(e)] = c
    return out


def restrict_to_variable(F, position, name="z"):
    """Set all but one variable of a multivariate series to zero."""
    out = TruncatedSeries(F.ring, (name,), (F.caps[position],),
                          F.total_cap)
    for e, c in F.terms.items():
        if any(x for i, x in enumerate(e) if i != position):
            continue
        out.terms[(e[position],)] = c
    return out


class FormalGroupLaw:
    """F(z1, z2) truncated at total degree ``cap`` (inclusive)."""

    def __init__(self, ring, F, cap, name=None):
        if F.svars != FGL_VARS:
            raise FGLError("a formal group law uses variables %r"
                           % (FGL_VARS,))
        self.ring = ring
        self.cap = int(cap)
        self.F = F.truncate((self.cap, self.cap), self.cap)
        self.name = name
        self._n_cache = None

    # -- frames -----------------------------------------------------------

    def _z(self, position):
        return TruncatedSeries.variable(self.ring, FGL_VARS[position],
                                        FGL_VARS, self.cap, self.cap)

    def _zero_series(self):
        return TruncatedSeries.zero(self.ring, FGL_VARS, self.cap, self.cap)

    def univariate(self, name="z", cap=None):
        return TruncatedSeries.variable(
            self.ring, name, (name,), self.cap if cap is None else cap)

    # -- evaluation -------------------------------------------------------

    def apply(self, a, b):
        """F(a, b) for two series on a common frame with no constant term."""
        return self.F.subs({"z1": a, "z2": b})

    def sum_list(self, parts):
        """Formal sum of several series via repeated application of F."""
        if not parts:
            raise FGLError("empty formal sum")
        acc = parts[0]
        for p in parts[1:]:
            acc = self.apply(acc, p)
        return acc

    # -- axioms -----------------------------------------------------------

    def check_axioms(self, associativity_cap=None):
        """Return a list of (check-name, passed, witness-string) triples.

        The associativity check runs in a three-variable frame truncated at
        the law's own cap (or a lower one, for speed, if given).
        """
        results = []
        z = self.univariate()
        zero_u = TruncatedSeries.zero(self.ring, ("z",), self.cap)
        left_unit = self.F.subs({"z1": z, "z2": zero_u})
        results.append(_verdict("left-unit", left_unit - z))
        right_unit = self.F.subs({"z1": zero_u, "z2": z})
        results.append(_verdict("right-unit", right_unit - z))

        swapped = TruncatedSeries(self.ring, FGL_VARS, self.F.caps,
                                  self.F.total_cap,
                                  {(j, i): c
                                   for (i, j), c in self.F.terms.items()})
        results.append(_verdict("commutativity", self.F - swapped))

        cap3 = self.cap if associativity_cap is None else associativity_cap
        tri = ("z1", "z2", "z3")
        t1 = TruncatedSeries.variable(self.ring, "z1", tri, cap3, cap3)
        t2 = TruncatedSeries.variable(self.ring, "z2", tri, cap3, cap3)
        t3 = TruncatedSeries.variable(self.ring, "z3", tri, cap3, cap3)
        lhs = self.F.subs({"z1": self.F.subs({"z1": t1, "z2": t2}),
                           "z2": t3})
        rhs = self.F.subs({"z1": t1,
                           "z2": self.F.subs({"z1": t2, "z2": t3})})
        results.append(_verdict("associativity", lhs - rhs))
        return results

    def is_group_law(self):
        return all(ok for _, ok, _ in self.check_axioms())

    # -- multiplication series -------------------------------------------

    def formal_inverse(self):
        """The series i(z) with F(z, i(z)) = 0 through the cap."""
        z = self.univariate()
        iota = -z
        for _ in range(self.cap + 1):
            err = self.F.subs({"z1": z, "z2": iota})
            if err.is_zero():
                break
            iota = iota - err
        return iota

    def n_series(self, n):
        """[n](z), the n-fold formal sum of z (n may be negative)."""
        if self._n_cache is None:
            zero_u = TruncatedSeries.zero(self.ring, ("z",), self.cap)
            self._n_cache = {0: zero_u, 1: self.univariate()}
        cache = self._n_cache
        if n in cache:
            return cache[n]
        if n < 0:
            iota = cache.get(-1)
            if iota is None:
                iota = cache[-1] = self.formal_inverse()
            pos = self.n_series(-n)
            cache[n] = iota.subs({"z": pos}) if n != -1 else iota
            return cache[n]
        prev = self.n_series(n - 1)
        cache[n] = self.F.subs({"z1": prev, "z2": cache[1]})
        return cache[n]

    # -- logarithm / exponential ------------------------------------------

    def log_series(self):
        """The strict logarithm; needs all positive integers invertible."""
        dF = self.F.derivative("z2")
        omega = restrict_to_variable(dF, 0)       # dF/dz2 at (z, 0)
        inv = omega.inverse()
        return inv.integrate("z")

    def exp_series(self):
        return self.log_series().reverse()

    def log_coefficients(self, upto=None):
        """Coefficients m_n with log(z) = sum m_n z^{n+1}, n = 0..upto."""
        log = self.log_series()
        upto = self.cap - 1 if upto is None else upto
        return [log.coefficient((n + 1,)) for n in range(upto + 1)]

    # -- isomorphisms ------------------------------------------------------

    def strict_isomorphism(self, theta, name=None):
        """Transport the law along z -> theta(z) (theta strict: z + ...).

        Returns the law G with G(theta(a), theta(b)) = theta(F(a, b)), i.e.
        G = theta o F(theta^{-1} z1, theta^{-1} z2).
        """
        if theta.constant_term() or \
                theta.coefficient((1,)) != theta.ring.one:
            raise FGLError("a strict isomorphism is z + O(z^2)")
        inv = theta.reverse()
        g1 = embed_univariate(inv, 0, FGL_VARS, self.cap, self.cap)
        g2 = embed_univariate(inv, 1, FGL_VARS, self.cap, self.cap)
        inner = self.F.subs({"z1": g1, "z2": g2})
        G = theta.subs({theta.svars[0]: inner})
        return FormalGroupLaw(self.ring, G, self.cap, name=name)

    def map_coefficients(self, fn, ring=None):
        target = self.ring if ring is None else ring
        return FormalGroupLaw(target, self.F.map_coefficients(fn, target),
                              self.cap, name=self.name)

    # -- serialization -----------------------------------------------------

    def to_dict(self):
        terms = []
        for e in sorted(self.F.terms, key=lambda t: (sum(t), t)):
            terms.append({"e": list(e),
                          "c": self.ring.format_data(self.F.terms[e].data)})
        return {"ring": self.ring.to_dict(), "cap": self.cap,
                "terms": terms}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, obj, name=None):
        if not isinstance(obj, dict):
            raise FGLError("formal group law description must be an object")
        for key in ("ring", "cap", "terms"):
            if key not in obj:
                raise FGLError("missing %r in formal group law" % key)
        ring = RingSpec.from_dict(obj["ring"])
        cap = int(obj["cap"])
        F = TruncatedSeries(ring, FGL_VARS, cap, cap)
        for entry in obj["terms"]:
            e = tuple(int(x) for x in entry["e"])
            if len(e) != 2:
                raise FGLError("bad exponent %r" % (entry["e"],))
            c = ring.element(entry["c"])
            if c:
                F.terms[e] = c
        return cls(ring, F, cap, name=name)

    @classmethod
    def from_json(cls, text, name=None):
        return cls.from_dict(json.loads(text), name=name)

    def __repr__(self):
        label = self.name or "formal group law"
        return "<%s over %r, cap %d>" % (label, self.ring, self.cap)


def _verdict(name, residual):
    if residual.is_zero():
        return (name, True, "")
    offending = sorted(residual.terms, key=lambda t: (sum(t), t))[0]
    return (name, False, "residual %s at degree %r"
            % (residual.terms[offending], offending))


# --------------------------------------------------------------------------
# standard examples
# --------------------------------------------------------------------------

def additive_fgl(ring=None, cap=10):
    ring = RingSpec("Z") if ring is None else ring
    F = TruncatedSeries(ring, FGL_VARS, cap, cap,
                        {(1, 0): ring.one, (0, 1): ring.one})
    return FormalGroupLaw(ring, F, cap, name="additive")


def multiplicative_fgl(ring=None, cap=10):
    """F = z1 + z2 + z1*z2, so 1 + F = (1+z1)(1+z2)."""
    ring = RingSpec("Z") if ring is None else ring
    F = TruncatedSeries(ring, FGL_VARS, cap, cap,
                        {(1, 0): ring.one, (0, 1): ring.one,
                         (1, 1): ring.one})
    return FormalGroupLaw(ring, F, cap, name="multiplicative")


def weierstrass_ring():
    """Z[1/6][g2, g3] with the usual weights."""
    return RingSpec("Z", [("g2", 4), ("g3", 6)], invert=["6"])


def weierstrass_chart_series(ring=None, cap=10, g2=None, g3=None):
    """The second chart coordinate on the cubic  u = 4x^3 - g2 x u^2 - g3 u^3.

    Solved by fixed-point iteration as a series u(x) = 4x^3 + O(x^7); this is
    the expansion at the origin of the chart in which the group law below is
    computed.  g2, g3 default to the like-named ring variables but may be any
    ring elements (e.g. specialised curve parameters).
    """
    ring = weierstrass_ring() if ring is None else ring
    g2 = ring.var("g2") if g2 is None else ring.element(g2)
    g3 = ring.var("g3") if g3 is None else ring.element(g3)
    x = TruncatedSeries.variable(ring, "x", ("x",), cap)
    u = TruncatedSeries.zero(ring, ("x",), cap)
    cube = x * x * x * 4
    for _ in range(cap + 1):
        nxt = cube - (u * u * x) * g2 - (u * u * u) * g3
        if nxt == u:
            break
        u = nxt
    return u


def weierstrass_fgl(ring=None, cap=10, g2=None, g3=None):
    """Chord group law on the cubic in the chart at the origin.

    The line through (x1, u(x1)) and (x2, u(x2)) meets the cubic in a third
    point whose first coordinate is  x1 + x2 - S  with
    S = mu*lambda*(2 g2 + 3 g3 lambda) / (4 - g2 lambda^2 - g3 lambda^3);
    negating gives  F = x1 + x2 - S  since inversion is (x, u) -> (-x, -u).
    lambda is the finite difference (u(x2) - u(x1)) / (x2 - x1), computed
    termwise (no division), and mu = u(x1) - lambda*x1.
    """
    ring = weierstrass_ring() if ring is None else ring
    g2 = ring.var("g2") if g2 is None else ring.element(g2)
    g3 = ring.var("g3") if g3 is None else ring.element(g3)
    u = weierstrass_chart_series(ring, cap, g2, g3)

    frame = dict(caps=(cap, cap), total_cap=cap)
    lam = TruncatedSeries(ring, FGL_VARS, frame["caps"], cap)
    for (k,), c in u.terms.items():
        # (z2^k - z1^k) / (z2 - z1) = sum_{i+j=k-1} z1^i z2^j
        for i in range(k):
            e = (i, k - 1 - i)
            if not lam._keeps(e):
                continue
            prev = lam.terms.get(e)
            lam.terms[e] = c if prev is None else prev + c
        lam.terms = {e: c for e, c in lam.terms.items() if c}
    u1 = embed_univariate(u, 0, FGL_VARS, cap, cap)
    z1 = TruncatedSeries.variable(ring, "z1", FGL_VARS, cap, cap)
    z2 = TruncatedSeries.variable(ring, "z2", FGL_VARS, cap, cap)
    mu = u1 - lam * z1
    lam2 = lam * lam
    lam3 = lam2 * lam
    numer = (mu * lam) * ((lam * g3) * 3 + g2 * 2)
    denom_const = ring.from_int(4)
    denom = TruncatedSeries.constant(ring, denom_const, FGL_VARS,
                                     frame["caps"], cap) \
        - lam2 * g2 - lam3 * g3
    S = numer * denom.inverse()
    F = z1 + z2 - S
    return FormalGroupLaw(ring, F, cap, name="weierstrass-chord")


def weierstrass_chart_checks(chart_cap=10, axiom_cap=8):
    """Chart-equation residual and the full axiom suite of the chord law.

    Verifies that the chart series solves  u = 4x^3 - g2 x u^2 - g3 u^3
    exactly at the stated cap, that its expansion starts
    4x^3 - 16 g2 x^7 - 64 g3 x^9 with nothing in between, and that the
    chord construction passes every group-law axiom over the symbolic
    base Z[1/6][g2, g3].
    """
    checks = []
    ring = weierstrass_ring()
    g2 = ring.var("g2")
    g3 = ring.var("g3")
    u = weierstrass_chart_series(ring, chart_cap)
    x = TruncatedSeries.variable(ring, "x", ("x",), chart_cap)
    resid = u - (x * x * x * 4 - (u * u * x) * g2 - (u * u * u) * g3)
    checks.append(("chart-equation", resid.is_zero(),
                   "u - (4x^3 - g2 x u^2 - g3 u^3) = 0 at cap %d"
                   % chart_cap))
    want = {3: ring.from_int(4), 7: g2 * (-16), 9: g3 * (-64)}
    ok_lead = all((u.coefficient((k,)) - want.get(k, ring.zero)).is_zero()
                  for k in range(chart_cap + 1))
    checks.append(("chart-leading-terms", ok_lead,
                   "u = 4x^3 - 16 g2 x^7 - 64 g3 x^9 + O(x^%d)"
                   % (chart_cap + 1)))
    F = weierstrass_fgl(ring, axiom_cap)
    for name, ok, detail in F.check_axioms():
        checks.append(("chord-%s" % name, ok, detail))
    return checks


def honda_log(p, h, cap, ring=None):
    """log(z) = sum_i z^{p^(h i)} / p^i over the rationals."""
    ring = RingSpec("Q") if ring is None else ring
    out = TruncatedSeries.zero(ring, ("z",), cap)
    k = 1
    i = 0
    while k <= cap:
        out.terms[(k,)] = ring.element(Fraction(1, p ** i))
        k *= p ** h
        i += 1
    return out


def honda_fgl(p, h, cap, target="Z"):
    """The p-typical law of height h with integral coefficients.

    Built over Q from its logarithm, then verified integral and recast over
    the requested base ("Z", "Q", or "Zmod:<m>").  Raises FGLError if any
    coefficient fails to be integral (which would falsify the construction).
    """
    if p < 2 or h < 1:
        raise FGLError("need a prime p >= 2 and height h >= 1")
    Q = RingSpec("Q")
    log = honda_log(p, h, cap, Q)
    exp = log.reverse()
    l1 = embed_univariate(log, 0, FGL_VARS, cap, cap)
    l2 = embed_univariate(log, 1, FGL_VARS, cap, cap)
    F = exp.subs({"z": l1 + l2})
    if target == "Q":
        return FormalGroupLaw(Q, F, cap, name="p-typical p=%d h=%d" % (p, h))
    for e, c in F.terms.items():
        (ee, cc), = c.data.items() if c.data else (((), 0),)
        if c.data and Fraction(cc).denominator != 1:
            raise FGLError("height-%d law has non-integral coefficient "
                           "%s at %r" % (h, cc, e))
    ring = RingSpec(target)
    law = FormalGroupLaw(
        ring,
        F.map_coefficients(
            lambda c: _const_into(ring, c), ring), cap,
        name="p-typical p=%d h=%d" % (p, h))
    return law


def _const_into(ring, c):
    """Carry a constant ring element into another constant-capable ring."""
    if not c.data:
        return ring.zero
    (e, cc), = c.data.items()
    if any(e):
        raise RingError("expected a constant, got %s" % c)
    return RingElement(ring, {(0,) * ring.nvars: coeff_into(ring, cc)}
                       if coeff_into(ring, cc) else {})


def to_rational_coefficients(fgl, rational_ring=None):
    """Recast a law over Z[...] / Z[1/N][...] with the same variables over Q."""
    src = fgl.ring
    if rational_ring is None:
        rational_ring = RingSpec("Q", list(zip(src.var_names, src.weights)))
    images = {n: rational_ring.var(n) for n in src.var_names}
    phi = ring_map(src, rational_ring, images)
    return fgl.map_coefficients(phi, rational_ring)


def cp_coefficients(fgl, upto):
    """The sequence (n+1) * m_n for n = 0..upto, from the logarithm.

    Over any law with rational-coefficient access these are the images of the
    degree-n projective-space classes under the classifying map from the
    bordism ring; for n+1 prime they may serve as polynomial generators in
    that degree.
    """
    ms = fgl.log_coefficients(upto)
    return [m * (n + 1) for n, m in enumerate(ms)]
