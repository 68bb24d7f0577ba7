"""Multivariate truncated power series over the exact rings.

A :class:`TruncatedSeries` keeps, for a fixed tuple of series variables, the
coefficients (ring elements) of all monomials below the truncation bounds:
a per-variable inclusive cap and an optional inclusive total-degree cap.
Arithmetic between two series is performed at the componentwise minimum of
their bounds; equality likewise compares only up to the shared bounds.

Composition requires the substituted series to have zero constant term, so
that every coefficient below the bound is determined; compositional reversion
is computed order by order and cross-checkable against the Lagrange-inversion
formula (:func:`lagrange_reverse`).
"""

from fractions import Fraction

from efgl._kernel import mul_dicts
from efgl.rings import RingElement, RingError

_BIG = 1 << 30


class SeriesError(ValueError):
    """Inconsistent series operands or unsupported operation."""


def _as_caps(svars, caps):
    if isinstance(caps, int):
        return (caps,) * len(svars)
    caps = tuple(int(c) for c in caps)
    if len(caps) != len(svars):
        raise SeriesError("need one cap per series variable")
    return caps


class TruncatedSeries:
    """A truncated formal power series with exact coefficients."""

    __slots__ = ("ring", "svars", "caps", "total_cap", "terms")

    def __init__(self, ring, svars, caps=10, total_cap=None, terms=None):
        self.ring = ring
        self.svars = tuple(svars)
        self.caps = _as_caps(self.svars, caps)
        self.total_cap = None if total_cap is None else int(total_cap)
        self.terms = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != len(self.svars):
                    raise SeriesError("bad exponent length %r" % (e,))
                if any(x < 0 for x in e):
                    raise SeriesError("negative exponent %r" % (e,))
                if not self._keeps(e):
                    continue
                c = ring.element(c)
                if c:
                    self.terms[e] = c

    def _keeps(self, e):
        if any(x > cap for x, cap in zip(e, self.caps)):
            return False
        return self.total_cap is None or sum(e) <= self.total_cap

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ring, svars, caps=10, total_cap=None):
        return cls(ring, svars, caps, total_cap)

    @classmethod
    def constant(cls, ring, value, svars, caps=10, total_cap=None):
        zero = (0,) * len(tuple(svars))
        return cls(ring, svars, caps, total_cap, {zero: value})

    @classmethod
    def variable(cls, ring, name, svars, caps=10, total_cap=None):
        svars = tuple(svars)
        if name not in svars:
            raise SeriesError("%r is not among the series variables" % name)
        e = [0] * len(svars)
        e[svars.index(name)] = 1
        return cls(ring, svars, caps, total_cap, {tuple(e): ring.one})

    def _new(self, terms, caps=None, total_cap="keep"):
        out = TruncatedSeries.__new__(TruncatedSeries)
        out.ring = self.ring
        out.svars = self.svars
        out.caps = self.caps if caps is None else caps
        out.total_cap = self.total_cap if total_cap == "keep" else total_cap
        out.terms = terms
        return out

    # -- bounds -----------------------------------------------------------

    def _join_bounds(self, other):
        if self.svars != other.svars:
            raise SeriesError("series variables differ: %r vs %r"
                              % (self.svars, other.svars))
        if self.ring is not other.ring and self.ring != other.ring:
            raise SeriesError("series live over different rings")
        caps = tuple(min(a, b) for a, b in zip(self.caps, other.caps))
        if self.total_cap is None:
            total = other.total_cap
        elif other.total_cap is None:
            total = self.total_cap
        else:
            total = min(self.total_cap, other.total_cap)
        return caps, total

    def truncate(self, caps=None, total_cap="keep"):
        caps = self.caps if caps is None else _as_caps(self.svars, caps)
        total = self.total_cap if total_cap == "keep" else total_cap
        out = self._new({}, caps, total)
        for e, c in self.terms.items():
            if out._keeps(e):
                out.terms[e] = c
        return out

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction, RingElement)):
            return TruncatedSeries.constant(self.ring, other, self.svars,
                                            self.caps, self.total_cap)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        caps, total = self._join_bounds(o)
        out = self._new({}, caps, total)
        for src in (self.terms, o.terms):
            for e, c in src.items():
                if not out._keeps(e):
                    continue
                prev = out.terms.get(e)
                s = c if prev is None else prev + c
                if s:
                    out.terms[e] = s
                elif prev is not None:
                    del out.terms[e]
        return out

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            c = self.ring.element(other)
            return self._new({e: v for e, cc in self.terms.items()
                              if (v := cc * c)})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        caps, total = self._join_bounds(o)
        terms = mul_dicts(self.terms, o.terms, caps,
                          -1 if total is None else total, None)
        return self._new(terms, caps, total)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = TruncatedSeries.constant(self.ring, 1, self.svars,
                                          self.caps, self.total_cap)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            c = self.ring.element(other)
            return self._new({e: cc / c for e, cc in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    # -- predicates / access ----------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def coefficient(self, e):
        """Coefficient of the monomial with exponent tuple e."""
        e = tuple(int(x) for x in e)
        return self.terms.get(e, self.ring.zero)

    def constant_term(self):
        return self.coefficient((0,) * len(self.svars))

    def order(self):
        """Total degree of the lowest nonzero term (None if zero)."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    # -- composition ------------------------------------------------------

    def subs(self, mapping):
        """Substitute a series for every variable.

        mapping: dict from variable name to TruncatedSeries on a common
        variable frame.  Substituted series must have zero constant term.
        """
        if set(mapping) != set(self.svars):
            raise SeriesError("substitution must cover exactly the "
                              "variables %r" % (self.svars,))
        targets = [mapping[v] for v in self.svars]
        frame = targets[0]
        for t in targets[1:]:
            if t.svars != frame.svars:
                raise SeriesError("substituted series must share a frame")
        for t in targets:
            if t.constant_term():
                raise SeriesError("substituted series must vanish at zero")
        caps = frame.caps
        total = frame.total_cap
        for t in targets[1:]:
            caps = tuple(min(a, b) for a, b in zip(caps, t.caps))
            if t.total_cap is not None:
                total = t.total_cap if total is None else min(total,
                                                              t.total_cap)
        out = TruncatedSeries(frame.ring, frame.svars, caps, total)
        pows = [{0: TruncatedSeries.constant(frame.ring, 1, frame.svars,
                                             caps, total)} for _ in targets]

        def power(i, k):
            memo = pows[i]
            if k in memo:
                return memo[k]
            half = power(i, k // 2)
            res = half * half
            if k % 2:
                res = res * targets[i]
            memo[k] = res
            return res

        for e, c in self.terms.items():
            piece = None
            for i, x in enumerate(e):
                if x == 0:
                    continue
                p = power(i, x)
                piece = p if piece is None else piece * p
            if piece is None:
                piece = TruncatedSeries.constant(frame.ring, 1, frame.svars,
                                                 caps, total)
            out = out + piece * c
        return out

    def compose(self, inner):
        """Univariate composition self(inner)."""
        if len(self.svars) != 1:
            raise SeriesError("compose needs a univariate series")
        return self.subs({self.svars[0]: inner})

    # -- reversion and inversion ------------------------------------------

    def reverse(self):
        """Compositional inverse of a univariate series z*(unit) + O(z^2)."""
        if len(self.svars) != 1:
            raise SeriesError("reversion needs a univariate series")
        if self.constant_term():
            raise SeriesError("reversion needs zero constant term")
        a1 = self.coefficient((1,))
        a1_inv = a1.try_inverse() if a1 else None
        if a1_inv is None:
            raise SeriesError("reversion needs a unit linear coefficient")
        cap = self.caps[0] if self.total_cap is None \
            else min(self.caps[0], self.total_cap)
        z = TruncatedSeries.variable(self.ring, self.svars[0], self.svars,
                                     self.caps, self.total_cap)
        tail = self._new({e: c for e, c in self.terms.items() if e[0] >= 2})
        g = z * a1_inv
        for _ in range(cap):
            nxt = (z - tail.subs({self.svars[0]: g})) * a1_inv
            if nxt == g:
                break
            g = nxt
        return g

    def inverse(self):
        """Multiplicative inverse of a series with unit constant term."""
        c0 = self.constant_term()
        inv0 = c0.try_inverse() if c0 else None
        if inv0 is None:
            raise SeriesError("multiplicative inverse needs a unit "
                              "constant term")
        one = TruncatedSeries.constant(self.ring, 1, self.svars,
                                       self.caps, self.total_cap)
        h = one - self * inv0
        bound = self.total_cap if self.total_cap is not None \
            else sum(self.caps)
        out = one
        power = one
        for _ in range(bound):
            power = power * h
            if power.is_zero():
                break
            out = out + power
        return out * inv0

    # -- calculus ---------------------------------------------------------

    def derivative(self, name):
        i = self.svars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ee = e[:i] + (e[i] - 1,) + e[i + 1:]
            v = c * e[i]
            if v:
                out[ee] = out[ee] + v if ee in out else v
        return self._new({e: c for e, c in out.items() if c})

    def integrate(self, name):
        """Antiderivative with zero constant term; top-cap terms fall away."""
        i = self.svars.index(name)
        out = {}
        for e, c in self.terms.items():
            ee = e[:i] + (e[i] + 1,) + e[i + 1:]
            if not self._keeps(ee):
                continue
            out[ee] = c / (e[i] + 1)
        return self._new(out)

    # -- coefficient maps -------------------------------------------------

    def map_coefficients(self, fn, ring=None):
        """Apply fn to every coefficient, optionally landing in a new ring."""
        target = self.ring if ring is None else ring
        out = TruncatedSeries(target, self.svars, self.caps, self.total_cap)
        for e, c in self.terms.items():
            v = fn(c)
            v = target.element(v)
            if v:
                out.terms[e] = v
        return out

    # -- display ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        order = sorted(self.terms,
                       key=lambda t: (sum(t), tuple(-x for x in t)))
        for e in order:
            c = self.terms[e]
            mono = []
            for v, x in zip(self.svars, e):
                if x == 0:
                    continue
                mono.append(v if x == 1 else "%s^%d" % (v, x))
            mstr = "*".join(mono)
            cstr = str(c)
            plain = not any(ch in cstr[1:] for ch in "+-")
            neg = False
            if plain and cstr.startswith("-"):
                neg = True
                cstr = cstr[1:]
            elif not plain:
                cstr = "(" + cstr + ")"
            if mstr:
                body = mstr if cstr == "1" else "%s*%s" % (cstr, mstr)
            else:
                body = cstr
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        caps = ",".join(str(c) for c in self.caps)
        return "<series in (%s) caps [%s]: %s>" % (
            ", ".join(self.svars), caps, self)


def lagrange_reverse(f):
    """Compositional inverse by the Lagrange inversion formula.

    Independent of :meth:`TruncatedSeries.reverse`; needs all positive
    integers invertible in the coefficient ring.  g_n = [z^{n-1}] (z/f)^n / n.
    """
    if len(f.svars) != 1:
        raise SeriesError("reversion needs a univariate series")
    if f.constant_term():
        raise SeriesError("reversion needs zero constant term")
    name = f.svars[0]
    cap = f.caps[0] if f.total_cap is None else min(f.caps[0], f.total_cap)
    shifted = f._new({(e[0] - 1,): c for e, c in f.terms.items()
                      if e[0] >= 1})
    base = shifted.inverse()       # (z/f) as a series with unit constant
    out = TruncatedSeries.zero(f.ring, f.svars, f.caps, f.total_cap)
    power = TruncatedSeries.constant(f.ring, 1, f.svars, f.caps, f.total_cap)
    for n in range(1, cap + 1):
        power = power * base
        coeff = power.coefficient((n - 1,)) / n
        if coeff:
            out.terms[(n,)] = coeff
    return out


def geometric_sum(h, bound=None):
    """1 + h + h^2 + ... for a series h with zero constant term."""
    if h.constant_term():
        raise SeriesError("geometric sum needs zero constant term")
    one = TruncatedSeries.constant(h.ring, 1, h.svars, h.caps, h.total_cap)
    if bound is None:
        bound = h.total_cap if h.total_cap is not None else sum(h.caps)
    out = one
    power = one
    for _ in range(bound):
        power = power * h
        if power.is_zero():
            break
        out = out + power
    return out
