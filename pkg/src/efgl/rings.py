"""Finitely presented commutative rings with exact, decidable normal forms.

A ring is described by a :class:`RingSpec`: a base ring (integers, rationals,
or integers mod m), a list of named weighted variables, an optional list of
inverted elements, an optional list of relations, or a finite product of such
descriptions.  Depending on the presentation, elements are normalised by one
of four strategies:

* ``free``      -- polynomial / Laurent-polynomial rings, possibly localized
                   away from declared constants or polynomials,
* ``quotient``  -- relations that are monic (up to a unit constant) in
                   distinct variables become rewrite rules,
* ``subdirect`` -- a single relation whose expression factors into coprime
                   pieces is handled through the injective embedding into the
                   product of the one-factor quotients,
* ``product``   -- declared finite products, normalised componentwise, with
                   the complete family of orthogonal idempotents available.

Division succeeds exactly when the quotient stays inside the presented ring:
by recognisable units (unit constants, monomials in invertible variables),
by declared inverted elements, and by exact polynomial division.  Anything
else raises :class:`RingDivisionError` rather than approximating.
"""

from fractions import Fraction
from math import gcd

from efgl._kernel import add_dicts, mul_dicts, scale_dict


class RingError(ValueError):
    """Malformed ring description or unsupported construction."""


class RingParseError(RingError):
    """An expression string could not be parsed."""


class RingDivisionError(ArithmeticError):
    """Requested quotient does not exist inside the presented ring."""


# --------------------------------------------------------------------------
# expression parsing
# --------------------------------------------------------------------------

def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j])))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif text.startswith("**", i):
            tokens.append(("op", "^"))
            i += 2
        elif ch in "+-*/^()":
            tokens.append(("op", ch))
            i += 1
        else:
            raise RingParseError("unexpected character %r in %r" % (ch, text))
    tokens.append(("end", None))
    return tokens


class _Parser:
    """Recursive-descent parser for ring expressions.

    The usual precedence ladder: ``+ -`` below ``* /`` below ``^`` (``**``
    also accepted), with unary minus and parentheses.  Produces nested tuples
    ("num", n), ("var", s), ("neg", a), (op, a, b), ("pow", a, n).
    """

    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise RingParseError("expected %r in %r" % (op, self.text))

    def parse(self):
        node = self.sum()
        if self.peek()[0] != "end":
            raise RingParseError("trailing input in %r" % self.text)
        return node

    def sum(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            node = self.term()
            if val == "-":
                node = ("neg", node)
        else:
            node = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = ("add" if val == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.power()
                node = ("mul" if val == "*" else "div", node, rhs)
            else:
                return node

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            neg = False
            kind, val = self.peek()
            if kind == "op" and val == "-":
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "num":
                raise RingParseError(
                    "exponent must be an integer literal in %r" % self.text)
            return ("pow", base, -val if neg else val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("num", val)
        if kind == "name":
            return ("var", val)
        if kind == "op" and val == "(":
            node = self.sum()
            self.expect_op(")")
            return node
        if kind == "op" and val == "-":
            return ("neg", self.atom())
        raise RingParseError("unexpected token %r in %r" % (val, self.text))


def parse_expression(text):
    """Parse an expression string into an AST of nested tuples."""
    return _Parser(text).parse()


def _int_fold(ast):
    """Constant-fold an AST over the integers, or return None."""
    kind = ast[0]
    if kind == "num":
        return ast[1]
    if kind == "neg":
        v = _int_fold(ast[1])
        return None if v is None else -v
    if kind in ("add", "sub", "mul"):
        a, b = _int_fold(ast[1]), _int_fold(ast[2])
        if a is None or b is None:
            return None
        return a + b if kind == "add" else a - b if kind == "sub" else a * b
    if kind == "pow":
        a = _int_fold(ast[1])
        if a is None or ast[2] < 0:
            return None
        return a ** ast[2]
    return None


def _small_factor(n):
    """Prime factor list of a positive integer (trial division)."""
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _grlex(e):
    return (sum(e), e)


def _product_factors(ast):
    """Flatten a parse tree into multiplicative factors."""
    if ast[0] == "mul":
        return _product_factors(ast[1]) + _product_factors(ast[2])
    if ast[0] == "pow" and ast[2] > 1:
        return _product_factors(ast[1]) * ast[2]
    if ast[0] == "neg":
        inner = _product_factors(ast[1])
        if len(inner) > 1:
            return [("neg", inner[0])] + inner[1:]
    return [ast]


# --------------------------------------------------------------------------
# ring specification
# --------------------------------------------------------------------------

class RingSpec:
    """A finitely presented commutative ring.

    Parameters
    ----------
    base : "Z", "Q", or "Zmod:<m>"
    variables : sequence of names or (name, weight) pairs
    invert : expression strings declared invertible
    relations : expression strings set to zero
    product : sequence of RingSpec / spec dicts for a product ring
    """

    def __init__(self, base="Z", variables=(), invert=(), relations=(),
                 product=None, name=None):
        self.name = name
        self._set_base(base)
        self._set_variables(variables)
        self.invert_exprs = [str(t) for t in invert]
        self.relation_exprs = [str(t) for t in relations]

        if product is not None:
            if invert or relations or variables:
                raise RingError("a product ring is described only by its "
                                "components")
            comps = []
            for entry in product:
                if isinstance(entry, RingSpec):
                    comps.append(entry)
                elif isinstance(entry, dict):
                    comps.append(RingSpec.from_dict(entry))
                else:
                    raise RingError("bad product component %r" % (entry,))
            if not comps:
                raise RingError("empty product ring")
            self.kind = "product"
            self.components = comps
            return

        # -- classify inverted elements, fixing the coefficient domain ----
        self.inv_primes = set()
        deferred = []
        for text in self.invert_exprs:
            ast = parse_expression(text)
            n = _int_fold(ast)
            if n is not None:
                if self.base_kind == "mod":
                    if gcd(n % self.modulus, self.modulus) != 1:
                        raise RingError(
                            "%d is not invertible mod %d" % (n, self.modulus))
                    continue
                if n == 0:
                    raise RingError("cannot invert zero")
                self.inv_primes.update(_small_factor(abs(n)))
            else:
                deferred.append(ast)

        if self.base_kind == "Q":
            self.domain = "frac"
        elif self.base_kind == "mod":
            self.domain = "mod"
        elif self.inv_primes:
            self.domain = "frac"
        else:
            self.domain = "int"

        self.laurent = set()
        self.inv_polys = []
        for ast in deferred:
            data = self._raw_payload(ast)
            if len(data) == 1:
                (e, c), = data.items()
                if sum(e) == 1 and 1 in e and c in (1, -1):
                    self.laurent.add(e.index(1))
                    continue
            self.inv_polys.append(data)

        self.bound = {}
        if not self.relation_exprs:
            self.kind = "free"
            return

        asts = [parse_expression(t) for t in self.relation_exprs]
        if len(asts) == 1:
            factors = _product_factors(asts[0])
            if len(factors) > 1:
                self.kind = "subdirect"
                self._build_subdirect(factors)
                return
        self.kind = "quotient"
        self._build_quotient(asts)

    def _set_base(self, base):
        self.base = base
        if base == "Z":
            self.base_kind, self.modulus = "Z", None
        elif base == "Q":
            self.base_kind, self.modulus = "Q", None
        elif isinstance(base, str) and base.startswith("Zmod:"):
            try:
                m = int(base[5:])
            except ValueError:
                raise RingError("bad modulus in base %r" % base)
            if m < 2:
                raise RingError("modulus must be at least 2")
            self.base_kind, self.modulus = "mod", m
        else:
            raise RingError("unknown base ring %r" % (base,))

    def _set_variables(self, variables):
        self.var_names = []
        self.weights = []
        for v in variables:
            if isinstance(v, str):
                nm, wt = v, 0
            else:
                nm, wt = v
            if not nm or not (nm[0].isalpha() or nm[0] == "_"):
                raise RingError("bad variable name %r" % (nm,))
            if nm in self.var_names:
                raise RingError("duplicate variable %r" % (nm,))
            self.var_names.append(nm)
            self.weights.append(int(wt))
        self.nvars = len(self.var_names)
        self.var_index = {nm: i for i, nm in enumerate(self.var_names)}

    # -- coefficient helpers ----------------------------------------------

    def _one_coeff(self):
        return Fraction(1) if self.domain == "frac" else 1

    def _lift_coeff(self, n):
        if self.domain == "frac":
            return Fraction(n)
        if self.domain == "mod":
            return n % self.modulus
        return n

    def _denominator_ok(self, n):
        n = abs(int(n))
        if n == 0:
            return False
        for p in self.inv_primes:
            while n % p == 0:
                n //= p
        return n == 1

    def _coeff_is_unit(self, c):
        if self.domain == "mod":
            return gcd(int(c) % self.modulus, self.modulus) == 1
        if self.domain == "frac":
            if c == 0:
                return False
            if self.base_kind == "Q":
                return True
            f = Fraction(c)
            return self._denominator_ok(f.numerator)
        return c in (1, -1)

    def _coeff_inverse(self, c):
        if self.domain == "mod":
            try:
                return pow(int(c), -1, self.modulus)
            except ValueError:
                raise RingDivisionError(
                    "%r is not invertible mod %d" % (c, self.modulus))
        if self.domain == "frac":
            if c == 0:
                raise RingDivisionError("division by zero")
            inv = 1 / Fraction(c)
            if self.base_kind == "Z" and not self._denominator_ok(
                    inv.denominator):
                raise RingDivisionError(
                    "constant %s is not inverted in this ring" % (c,))
            return inv
        if c in (1, -1):
            return c
        raise RingDivisionError(
            "constant %s is not a unit over the integers" % (c,))

    def _coeff_div(self, a, b):
        """Exact coefficient quotient, or None."""
        if self.domain == "mod":
            try:
                return (int(a) * pow(int(b), -1, self.modulus)) % self.modulus
            except ValueError:
                return None
        if self.domain == "frac":
            if b == 0:
                return None
            q = Fraction(a) / Fraction(b)
            if self.base_kind == "Z" and not self._denominator_ok(
                    q.denominator):
                return None
            return q
        if b == 0 or a % b:
            return None
        return a // b

    # -- raw polynomial evaluation (no reduction) -------------------------

    def _raw_payload(self, ast):
        kind = ast[0]
        if kind == "num":
            c = self._lift_coeff(ast[1])
            return {(0,) * self.nvars: c} if c else {}
        if kind == "var":
            i = self.var_index.get(ast[1])
            if i is None:
                raise RingParseError("unknown variable %r" % (ast[1],))
            e = [0] * self.nvars
            e[i] = 1
            return {tuple(e): self._one_coeff()}
        if kind == "neg":
            return scale_dict(self._raw_payload(ast[1]),
                              self._lift_coeff(-1), self.modulus)
        if kind == "add":
            return add_dicts(self._raw_payload(ast[1]),
                             self._raw_payload(ast[2]), self.modulus)
        if kind == "sub":
            rhs = scale_dict(self._raw_payload(ast[2]),
                             self._lift_coeff(-1), self.modulus)
            return add_dicts(self._raw_payload(ast[1]), rhs, self.modulus)
        if kind == "mul":
            return mul_dicts(self._raw_payload(ast[1]),
                             self._raw_payload(ast[2]), None, -1, self.modulus)
        if kind == "pow":
            if ast[2] < 0:
                raise RingError(
                    "negative exponents are not allowed in presentations")
            out = {(0,) * self.nvars: self._one_coeff()}
            base = self._raw_payload(ast[1])
            for _ in range(ast[2]):
                out = mul_dicts(out, base, None, -1, self.modulus)
            return out
        if kind == "div":
            raise RingError("division is not allowed in presentations")
        raise RingError("bad AST node %r" % (kind,))

    # -- quotient construction --------------------------------------------

    def _monic_rule(self, data):
        """If data is monic in some unbound variable, return (vi, deg, tail)."""
        for vi in range(self.nvars):
            if vi in self.laurent or vi in self.bound:
                continue
            deg = max((e[vi] for e in data), default=0)
            if deg == 0:
                continue
            lead = [(e, c) for e, c in data.items() if e[vi] == deg]
            if len(lead) != 1:
                continue
            e, c = lead[0]
            if any(x for j, x in enumerate(e) if j != vi):
                continue
            if not self._coeff_is_unit(c):
                continue
            inv = self._coeff_inverse(c)
            tail = {ee: cc for ee, cc in data.items() if ee != e}
            scl = self._lift_coeff(-1) * inv
            if self.domain == "mod":
                scl = scl % self.modulus
            return vi, deg, scale_dict(tail, scl, self.modulus)
        return None

    def _build_quotient(self, asts):
        for ast, text in zip(asts, self.relation_exprs):
            data = self._raw_payload(ast)
            rule = self._monic_rule(data)
            if rule is None:
                raise RingError(
                    "relation %r is not monic (up to a unit constant) in "
                    "any free variable" % text)
            vi, deg, tail = rule
            self.bound[vi] = (deg, tail)
        for vi, (deg, tail) in self.bound.items():
            for e in tail:
                for vj, (dj, _) in self.bound.items():
                    if vj != vi and e[vj] >= dj:
                        raise RingError(
                            "relation tails may not contain other bound "
                            "variables at full degree")

    # -- subdirect construction -------------------------------------------

    def _build_subdirect(self, factor_asts):
        groups = {}    # vi -> grouped payload for monic factors
        locals_ = []   # (position, vi, monomial payload)
        order = []     # ("monic", vi) / ("local", vi) first-appearance order
        for ast in factor_asts:
            data = self._raw_payload(ast)
            info = self._classify_factor(data)
            if info[0] == "monic":
                vi = info[1]
                if vi in groups:
                    groups[vi] = mul_dicts(groups[vi], info[2], None, -1,
                                           self.modulus)
                else:
                    groups[vi] = info[2]
                    order.append(("monic", vi))
            else:
                vi = info[1]
                if any(k == "local" and v == vi for k, v in order):
                    raise RingError(
                        "variable %r eliminated twice" % self.var_names[vi])
                locals_.append((vi, info[2]))
                order.append(("local", vi))
        comps, maps = [], []
        for kind, vi in order:
            if kind == "monic":
                spec = RingSpec.__new__(RingSpec)
                spec._init_component(self, vi, groups[vi])
                comps.append(spec)
                maps.append([_var_payload(spec, j)
                             for j in range(self.nvars)])
            else:
                mono = next(m for v, m in locals_ if v == vi)
                spec, images = self._localization_component(vi, mono)
                comps.append(spec)
                maps.append(images)
        self.components = comps
        self.comp_maps = maps

    def _classify_factor(self, data):
        if not data:
            raise RingError("zero factor in relation")
        probe = self._monic_rule_any(data)
        if probe is not None:
            return ("monic",) + probe
        if len(data) == 2:
            zero = (0,) * self.nvars
            if zero in data:
                c0 = data[zero]
                (e, c), = ((ee, cc) for ee, cc in data.items() if ee != zero)
                if c0 == self._lift_coeff(-1):
                    c0 = self._lift_coeff(1)
                    c = -c if self.domain != "mod" else (-c) % self.modulus
                if c0 == self._lift_coeff(1):
                    cc = -c if self.domain != "mod" else (-c) % self.modulus
                    for vi in reversed(range(self.nvars)):
                        if e[vi] == 1 and vi not in self.laurent:
                            rest = list(e)
                            rest[vi] = 0
                            return ("local", vi, {tuple(rest): cc})
        raise RingError(
            "relation factor is neither monic in a variable nor of the "
            "shape 1 - v*monomial")

    def _monic_rule_any(self, data):
        """Like _monic_rule but returns (vi, data) without rewriting."""
        for vi in range(self.nvars):
            if vi in self.laurent:
                continue
            deg = max(e[vi] for e in data)
            if deg == 0:
                continue
            lead = [(e, c) for e, c in data.items() if e[vi] == deg]
            if len(lead) == 1:
                e, c = lead[0]
                if not any(x for j, x in enumerate(e) if j != vi):
                    if self._coeff_is_unit(c):
                        return (vi, data)
        return None

    def _init_component(self, parent, vi, data):
        """Quotient component of a subdirect ring, same variable list."""
        self.name = None
        self.base = parent.base
        self.base_kind = parent.base_kind
        self.modulus = parent.modulus
        self.var_names = list(parent.var_names)
        self.weights = list(parent.weights)
        self.nvars = parent.nvars
        self.var_index = dict(parent.var_index)
        self.invert_exprs = list(parent.invert_exprs)
        self.relation_exprs = []
        self.inv_primes = set(parent.inv_primes)
        self.inv_polys = [dict(p) for p in parent.inv_polys]
        self.laurent = set(parent.laurent)
        self.domain = parent.domain
        self.kind = "quotient"
        self.bound = {}
        rule = self._monic_rule(data)
        if rule is None or rule[0] != vi:
            raise RingError("grouped factor lost monicity")
        self.bound[vi] = (rule[1], rule[2])

    def _localization_component(self, vi, mono):
        """Component for a factor 1 - v*m: v becomes the inverse of m."""
        (e_m, c_m), = mono.items()
        keep = [j for j in range(self.nvars) if j != vi]
        spec = RingSpec.__new__(RingSpec)
        spec.name = None
        spec.base = self.base
        spec.base_kind = self.base_kind
        spec.modulus = self.modulus
        spec.var_names = [self.var_names[j] for j in keep]
        spec.weights = [self.weights[j] for j in keep]
        spec.nvars = len(keep)
        spec.var_index = {nm: i for i, nm in enumerate(spec.var_names)}
        spec.invert_exprs = []
        spec.relation_exprs = []
        spec.inv_primes = set(self.inv_primes)
        spec.inv_polys = []
        spec.laurent = set()
        spec.domain = self.domain
        spec.kind = "free"
        spec.bound = {}
        for i, j in enumerate(keep):
            if j in self.laurent or e_m[j]:
                spec.laurent.add(i)
        if self.base_kind == "Z" and not self._coeff_is_unit(c_m):
            spec.domain = "frac"
            spec.inv_primes.update(_small_factor(abs(int(c_m))))
        images = []
        for j in range(self.nvars):
            if j == vi:
                e = tuple(-e_m[k] for k in keep)
                images.append(
                    {e: spec._coeff_inverse(spec._lift_coeff(c_m)
                                            if spec.domain != self.domain
                                            else c_m)})
            else:
                images.append(_var_payload(spec, keep.index(j)))
        return spec, images

    # -- element construction ---------------------------------------------

    @property
    def zero(self):
        return RingElement(self, self._zero_data())

    @property
    def one(self):
        return RingElement(self, self._one_data())

    def _zero_data(self):
        if self.kind == "product":
            return tuple(c.zero for c in self.components)
        if self.kind == "subdirect":
            return tuple(c.zero for c in self.components)
        return {}

    def _one_data(self):
        if self.kind in ("product", "subdirect"):
            return tuple(c.one for c in self.components)
        return {(0,) * self.nvars: self._one_coeff()}

    def from_int(self, n):
        if self.kind in ("product", "subdirect"):
            return RingElement(self, tuple(c.from_int(n)
                                           for c in self.components))
        c = self._lift_coeff(n)
        return RingElement(self, {(0,) * self.nvars: c} if c else {})

    def element(self, source):
        """Build an element from an expression string, AST, or number."""
        if isinstance(source, RingElement):
            if source.ring is not self and source.ring != self:
                raise RingError("element belongs to a different ring")
            return source
        if isinstance(source, int):
            return self.from_int(source)
        if isinstance(source, Fraction):
            return self.from_int(source.numerator) / source.denominator
        ast = parse_expression(source) if isinstance(source, str) else source
        return self._eval_ast(ast)

    def var(self, name):
        return self.element(("var", name))

    def _eval_ast(self, ast):
        kind = ast[0]
        if kind == "num":
            return self.from_int(ast[1])
        if kind == "var":
            if self.kind == "product":
                raise RingError(
                    "a product ring has no global variables; address its "
                    "components through the idempotents")
            if ast[1] not in self.var_index:
                raise RingParseError("unknown variable %r" % (ast[1],))
            vi = self.var_index[ast[1]]
            if self.kind == "subdirect":
                return RingElement(self, tuple(
                    RingElement(comp, comp._normalize(dict(images[vi])))
                    for comp, images in zip(self.components, self.comp_maps)))
            e = [0] * self.nvars
            e[vi] = 1
            return RingElement(self,
                               self._normalize({tuple(e): self._one_coeff()}))
        if kind == "neg":
            return -self._eval_ast(ast[1])
        if kind == "add":
            return self._eval_ast(ast[1]) + self._eval_ast(ast[2])
        if kind == "sub":
            return self._eval_ast(ast[1]) - self._eval_ast(ast[2])
        if kind == "mul":
            return self._eval_ast(ast[1]) * self._eval_ast(ast[2])
        if kind == "div":
            return self._eval_ast(ast[1]) / self._eval_ast(ast[2])
        if kind == "pow":
            return self._eval_ast(ast[1]) ** ast[2]
        raise RingError("bad AST node %r" % (kind,))

    # -- normalisation ----------------------------------------------------

    def _normalize(self, data):
        if not self.bound:
            return data
        out = {}
        stack = list(data.items())
        while stack:
            e, c = stack.pop()
            if not c:
                continue
            hit = None
            for vi, (deg, tail) in self.bound.items():
                if e[vi] >= deg:
                    hit = (vi, deg, tail)
                    break
            if hit is None:
                prev = out.get(e)
                s = c if prev is None else prev + c
                if self.domain == "mod":
                    s = s % self.modulus
                if s:
                    out[e] = s
                elif prev is not None:
                    del out[e]
                continue
            vi, deg, tail = hit
            base = list(e)
            base[vi] -= deg
            for et, ct in tail.items():
                prod = c * ct
                if self.domain == "mod":
                    prod = prod % self.modulus
                stack.append((tuple(b + t for b, t in zip(base, et)), prod))
        return out

    # -- payload arithmetic -----------------------------------------------

    def _add(self, a, b):
        if self.kind in ("product", "subdirect"):
            return tuple(x + y for x, y in zip(a, b))
        return add_dicts(a, b, self.modulus)

    def _neg(self, a):
        if self.kind in ("product", "subdirect"):
            return tuple(-x for x in a)
        return scale_dict(a, self._lift_coeff(-1), self.modulus)

    def _mul(self, a, b):
        if self.kind in ("product", "subdirect"):
            return tuple(x * y for x, y in zip(a, b))
        return self._normalize(mul_dicts(a, b, None, -1, self.modulus))

    def _is_zero(self, a):
        if self.kind in ("product", "subdirect"):
            return all(x.is_zero() for x in a)
        return not a

    # -- division ---------------------------------------------------------

    def _div(self, a, b):
        if self.kind in ("product", "subdirect"):
            return tuple(x / y for x, y in zip(a, b))
        if not b:
            raise RingDivisionError("division by zero")
        if not a:
            return {}
        if len(b) == 1:
            out = self._div_single(a, b)
            if out is not None:
                return out
        out = self._exact_div(a, b)
        if out is not None:
            return out
        out = self._div_by_inverted(a, b)
        if out is not None:
            return out
        raise RingDivisionError(
            "quotient does not exist in the presented ring "
            "(divisor %s)" % self.format_data(b))

    def _div_single(self, a, b):
        """Divide by a one-term divisor when every term shifts legally."""
        (eb, cb), = b.items()
        out = {}
        for e, c in a.items():
            q = self._coeff_div(c, cb)
            if q is None:
                return None
            ee = tuple(x - y for x, y in zip(e, eb))
            bad = [i for i, x in enumerate(ee)
                   if x < 0 and i not in self.laurent]
            if not bad:
                out = add_dicts(out, {ee: q}, self.modulus)
                continue
            extra = self._one_data()
            ok = True
            for i in bad:
                inv = self._bound_inverse(i)
                if inv is None:
                    ok = False
                    break
                extra = self._mul(extra, self._pow_data(inv, -ee[i]))
            if not ok:
                return None
            ee = tuple(max(x, 0) if i in bad else x
                       for i, x in enumerate(ee))
            out = add_dicts(out, self._mul({ee: q}, extra), self.modulus)
        return self._normalize(out)

    def _bound_inverse(self, vi):
        """Inverse of a bound variable v (v^d = unit-monomial tail)."""
        cache = getattr(self, "_bound_inv_cache", None)
        if cache is None:
            cache = self._bound_inv_cache = {}
        if vi in cache:
            return cache[vi]
        info = self.bound.get(vi)
        result = None
        if info is not None:
            deg, tail = info
            if len(tail) == 1:
                (et, ct), = tail.items()
                inv_tail = self._try_invert_monomial(et, ct)
                if inv_tail is not None:
                    e = [0] * self.nvars
                    e[vi] = deg - 1
                    result = self._mul({tuple(e): self._one_coeff()},
                                       inv_tail)
        cache[vi] = result
        return result

    def _try_invert_monomial(self, e, c):
        try:
            ci = self._coeff_inverse(c)
        except RingDivisionError:
            return None
        ee = []
        extra = None
        for i, x in enumerate(e):
            if x == 0 or i in self.laurent:
                ee.append(-x)
                continue
            if i in self.bound:
                inv = self._bound_inverse(i)
                if inv is None:
                    return None
                part = self._pow_data(inv, x)
                extra = part if extra is None else self._mul(extra, part)
                ee.append(0)
                continue
            return None
        out = {tuple(ee): ci}
        if extra is not None:
            out = self._mul(out, extra)
        return self._normalize(out)

    def _pow_data(self, a, n):
        out = self._one_data()
        for _ in range(n):
            out = self._mul(out, a)
        return out

    def _exact_div(self, a, b):
        """Attempt exact polynomial division; return a quotient dict or None.

        Sound but not complete in quotient rings: a returned quotient always
        satisfies a == q*b, a None may just mean the search gave up.
        """
        shift = None
        if self.laurent:
            mins = [min(e[i] for e in b) for i in range(self.nvars)]
            if any(m and i in self.laurent for i, m in enumerate(mins)):
                shift = tuple(m if i in self.laurent else 0
                              for i, m in enumerate(mins))
                b = {tuple(x - s for x, s in zip(e, shift)): c
                     for e, c in b.items()}
        eb = max(b, key=_grlex)
        cb = b[eb]
        rem = dict(a)
        quo = {}
        fuel = 8 * (len(a) + 2) * (len(b) + 2) + 64
        while rem:
            fuel -= 1
            if fuel < 0:
                return None
            er = max(rem, key=_grlex)
            cr = rem[er]
            q = self._coeff_div(cr, cb)
            if q is None:
                return None
            ee = tuple(x - y for x, y in zip(er, eb))
            if any(x < 0 for i, x in enumerate(ee) if i not in self.laurent):
                return None
            quo[ee] = q
            neg = scale_dict(mul_dicts({ee: q}, b, None, -1, self.modulus),
                             self._lift_coeff(-1), self.modulus)
            rem = add_dicts(rem, neg, self.modulus)
        if shift is not None:
            quo = {tuple(x + s for x, s in zip(e, shift)): c
                   for e, c in quo.items()}
        return self._normalize(quo) if self.bound else quo

    def _div_by_inverted(self, a, b):
        """Divide via a declared inverted polynomial: b = unit * p^k."""
        for p in self.inv_polys:
            work = dict(b)
            k = 0
            while True:
                nxt = self._exact_div(work, p)
                if nxt is None:
                    break
                work = nxt
                k += 1
            if k == 0:
                continue
            if len(work) != 1:
                continue
            (e, c), = work.items()
            inv_rest = self._try_invert_monomial(e, c)
            if inv_rest is None:
                continue
            num = self._mul(a, inv_rest)
            ok = True
            for _ in range(k):
                num = self._exact_div(num, p)
                if num is None:
                    ok = False
                    break
            if ok:
                return num
        return None

    # -- units ------------------------------------------------------------

    def try_inverse_data(self, a):
        if self.kind in ("product", "subdirect"):
            out = []
            for x in a:
                inv = x.ring.try_inverse_data(x.data)
                if inv is None:
                    return None
                out.append(RingElement(x.ring, inv))
            return tuple(out)
        if not a:
            return None
        if len(a) == 1:
            (e, c), = a.items()
            return self._try_invert_monomial(e, c)
        return None

    def is_unit_data(self, a):
        if self.kind in ("product", "subdirect"):
            return all(x.ring.is_unit_data(x.data) for x in a)
        if not a:
            return False
        if self.try_inverse_data(a) is not None:
            return True
        if len(a) > 1 and self.inv_polys:
            work = dict(a)
            progressed = True
            while progressed and len(work) > 1:
                progressed = False
                for p in self.inv_polys:
                    nxt = self._exact_div(work, p)
                    if nxt is not None:
                        work = nxt
                        progressed = True
                        break
            if len(work) == 1:
                (e, c), = work.items()
                return self._try_invert_monomial(e, c) is not None
        if self.bound:
            return self._norm_is_unit(a)
        return False

    def _norm_is_unit(self, a):
        """Unit test via the determinant of the multiplication matrix.

        The quotient is a free module over the sub-ring of unbound variables
        with basis the reduced monomials in the bound variables; an element
        is a unit iff that determinant is a unit in the sub-ring.
        """
        bound = sorted(self.bound)
        degs = [self.bound[v][0] for v in bound]
        basis = [()]
        for d in degs:
            basis = [b + (k,) for b in basis for k in range(d)]
        idx = {b: j for j, b in enumerate(basis)}
        n = len(basis)
        mat = [[{} for _ in range(n)] for _ in range(n)]
        for col, bvec in enumerate(basis):
            e = [0] * self.nvars
            for v, k in zip(bound, bvec):
                e[v] = k
            prod = self._mul({tuple(e): self._one_coeff()}, a)
            for ee, c in prod.items():
                key = tuple(ee[v] for v in bound)
                rest = tuple(0 if i in self.bound else x
                             for i, x in enumerate(ee))
                mat[idx[key]][col] = add_dicts(mat[idx[key]][col],
                                               {rest: c}, self.modulus)
        det = _bareiss_det(self, mat)
        if det is None:
            raise RingError("unit test failed: determinant not computable "
                            "in this presentation")
        if not det:
            return False
        if len(det) == 1:
            (e, c), = det.items()
            return self._try_invert_monomial(e, c) is not None
        if self.inv_polys:
            work = dict(det)
            progressed = True
            while progressed and len(work) > 1:
                progressed = False
                for p in self.inv_polys:
                    nxt = self._exact_div(work, p)
                    if nxt is not None:
                        work = nxt
                        progressed = True
                        break
            if len(work) == 1:
                (e, c), = work.items()
                return self._try_invert_monomial(e, c) is not None
        return False

    # -- formatting -------------------------------------------------------

    def format_coeff(self, c):
        if self.domain == "frac":
            f = Fraction(c)
            if f.denominator == 1:
                return str(f.numerator)
            return "%d/%d" % (f.numerator, f.denominator)
        return str(c)

    def format_data(self, data):
        if self.kind in ("product", "subdirect"):
            return "(" + ", ".join(str(x) for x in data) + ")"
        if not data:
            return "0"
        pieces = []
        for e in sorted(data, key=_grlex, reverse=True):
            c = data[e]
            mono = []
            for i, x in enumerate(e):
                if x == 0:
                    continue
                if x == 1:
                    mono.append(self.var_names[i])
                else:
                    mono.append("%s^%d" % (self.var_names[i], x))
            mstr = "*".join(mono)
            cstr = self.format_coeff(c)
            neg = cstr.startswith("-")
            if neg:
                cstr = cstr[1:]
            if mstr:
                body = mstr if cstr == "1" else "%s*%s" % (cstr, mstr)
            else:
                body = cstr
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    # -- idempotents / components -----------------------------------------

    def idempotents(self):
        """The complete orthogonal idempotent family of a product ring."""
        if self.kind != "product":
            return [self.one]
        out = []
        for i, comp in enumerate(self.components):
            out.append(RingElement(self, tuple(
                c.one if j == i else c.zero
                for j, c in enumerate(self.components))))
        return out

    def component_embed(self, i, value):
        """The element supported on component i only (product rings)."""
        if self.kind != "product":
            raise RingError("component_embed needs a product ring")
        val = self.components[i].element(value)
        return RingElement(self, tuple(
            val if j == i else c.zero
            for j, c in enumerate(self.components)))

    def product_split(self, elt):
        """Tuple of component elements of a product-ring element."""
        if self.kind != "product":
            raise RingError("product_split needs a product ring")
        return tuple(self.element(elt).data)

    def subdirect_parts(self, elt):
        """Tuple of component images of a subdirect-ring element."""
        if self.kind != "subdirect":
            raise RingError("subdirect_parts needs a subdirect ring")
        return tuple(self.element(elt).data)

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        if self.kind == "product":
            return {"base": self.base,
                    "product": [c.to_dict() for c in self.components]}
        out = {"base": self.base,
               "vars": [{"name": n, "weight": w}
                        for n, w in zip(self.var_names, self.weights)]}
        if self.invert_exprs:
            out["invert"] = list(self.invert_exprs)
        if self.relation_exprs:
            out["relations"] = list(self.relation_exprs)
        return out

    @classmethod
    def from_dict(cls, obj):
        if not isinstance(obj, dict):
            raise RingError("ring description must be a JSON object")
        base = obj.get("base", "Z")
        variables = []
        for entry in obj.get("vars", []):
            if isinstance(entry, str):
                variables.append((entry, 0))
            elif isinstance(entry, dict):
                if "name" not in entry:
                    raise RingError("variable entry missing 'name'")
                variables.append((entry["name"], entry.get("weight", 0)))
            else:
                raise RingError("bad variable entry %r" % (entry,))
        return cls(base=base, variables=variables,
                   invert=obj.get("invert", ()),
                   relations=obj.get("relations", ()),
                   product=obj.get("product"), name=obj.get("name"))

    # -- identity ---------------------------------------------------------

    def _signature(self):
        sig = getattr(self, "_sig_cache", None)
        if sig is not None:
            return sig
        if self.kind == "product":
            sig = ("product", tuple(c._signature() for c in self.components))
        elif self.kind == "subdirect":
            sig = ("subdirect", self.base, tuple(self.var_names),
                   tuple(c._signature() for c in self.components))
        else:
            rules = tuple(sorted(
                (vi, deg, tuple(sorted((e, _sig_coeff(c))
                                       for e, c in tail.items())))
                for vi, (deg, tail) in self.bound.items()))
            polys = tuple(sorted(
                tuple(sorted((e, _sig_coeff(c)) for e, c in p.items()))
                for p in self.inv_polys))
            sig = (self.base, tuple(self.var_names), self.domain,
                   tuple(sorted(self.laurent)),
                   tuple(sorted(self.inv_primes)), polys, rules)
        self._sig_cache = sig
        return sig

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RingSpec):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        return hash(self._signature())

    def __repr__(self):
        if self.kind == "product":
            return "RingSpec(product of %d components)" % len(self.components)
        bits = [str(self.base)]
        if self.var_names:
            bits.append("[" + ",".join(self.var_names) + "]")
        if self.relation_exprs:
            bits.append("/(" + "; ".join(self.relation_exprs) + ")")
        elif self.kind != "free":
            bits.append("/(%d rules)" % len(self.bound))
        return "RingSpec(%s)" % "".join(bits)


def _sig_coeff(c):
    if isinstance(c, int):
        return (c, 1)
    f = Fraction(c)
    return (f.numerator, f.denominator)


def _var_payload(spec, idx):
    e = [0] * spec.nvars
    e[idx] = 1
    return {tuple(e): spec._one_coeff()}


def _bareiss_det(spec, mat):
    """Fraction-free determinant of a matrix of payload dicts, or None."""
    n = len(mat)
    if n == 0:
        return spec._one_data()
    m = [[dict(x) for x in row] for row in mat]
    sign = 1
    prev = None
    minus = spec._lift_coeff(-1)
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return {}
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                hi = mul_dicts(m[i][j], m[k][k], None, -1, spec.modulus)
                lo = mul_dicts(m[i][k], m[k][j], None, -1, spec.modulus)
                num = add_dicts(hi, scale_dict(lo, minus, spec.modulus),
                                spec.modulus)
                if prev is not None and num:
                    num = spec._exact_div(num, prev)
                    if num is None:
                        return None
                m[i][j] = num
        prev = m[k][k]
    det = m[n - 1][n - 1]
    if sign < 0:
        det = scale_dict(det, minus, spec.modulus)
    return det


def coeff_into(dst, c):
    """Carry an int/Fraction coefficient into the domain of dst."""
    if dst.domain == "frac":
        return Fraction(c)
    f = Fraction(c)
    if dst.domain == "mod":
        num = f.numerator % dst.modulus
        den = f.denominator % dst.modulus
        try:
            return (num * pow(den, -1, dst.modulus)) % dst.modulus
        except ValueError:
            raise RingError("denominator %d is not invertible mod %d"
                            % (f.denominator, dst.modulus))
    if f.denominator != 1:
        raise RingError("coefficient %s is not integral" % (c,))
    return f.numerator


def ring_map(src, dst, images, coeff_fn=None):
    """A ring homomorphism src -> dst given by variable images.

    images: dict from source variable name to an element (or expression)
    of dst.  Every source variable must be covered.  coeff_fn optionally
    post-processes each scalar coefficient (default: carry it across).
    Returns a callable on elements of src.
    """
    if src.kind in ("product", "subdirect"):
        raise RingError("ring_map acts on single-component rings; map the "
                        "components separately")
    imgs = []
    for name in src.var_names:
        if name not in images:
            raise RingError("no image for variable %r" % name)
        imgs.append(dst.element(images[name]))

    def apply(elt):
        data = src.element(elt).data
        total = dst.zero
        for e, c in data.items():
            if coeff_fn is not None:
                term = dst.element(coeff_fn(c))
            else:
                term = RingElement(dst, {(0,) * dst.nvars:
                                         coeff_into(dst, c)}
                                   if coeff_into(dst, c) else {})
            for i, x in enumerate(e):
                if x:
                    term = term * imgs[i] ** x
            total = total + term
        return total

    return apply


# --------------------------------------------------------------------------
# elements
# --------------------------------------------------------------------------

class RingElement:
    """An element of a :class:`RingSpec`, stored in normal form.

    Supports +, -, *, /, ** with automatic lifting of ints and Fractions.
    Elements are unhashable; equality is exact (normal-form comparison).
    """

    __slots__ = ("ring", "data")

    def __init__(self, ring, data):
        self.ring = ring
        self.data = data

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            return None
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, Fraction):
            return self.ring.element(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._add(self.data, o.data))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, self.ring._neg(self.data))

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
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._mul(self.data, o.data))

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._div(self.data, o.data))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def is_zero(self):
        return self.ring._is_zero(self.data)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return eq
        return not eq

    __hash__ = None

    def is_unit(self):
        return self.ring.is_unit_data(self.data)

    def try_inverse(self):
        inv = self.ring.try_inverse_data(self.data)
        if inv is None:
            return None
        return RingElement(self.ring, inv)

    def inverse(self):
        inv = self.try_inverse()
        if inv is None:
            raise RingDivisionError("%s has no recognisable inverse" % self)
        return inv

    def __str__(self):
        return self.ring.format_data(self.data)

    def __repr__(self):
        return "<%s>" % self.ring.format_data(self.data)
