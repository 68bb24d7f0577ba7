"""Exact linear algebra over Z/m and over the rationals.

Over Z/m the canonical object is the Howell form of a row module: an
echelon basis, closed under the annihilator operation, with pivots dividing
m and entries above each pivot reduced.  Two row sets generate the same
module over Z/m iff their Howell forms are identical, and membership of a
vector is decided by complete reduction.  This is the workhorse for modules
over Z/p^nu, where Gaussian elimination alone is not canonical.

Over Q a plain fraction-free-enough Gaussian elimination provides rank,
solving, and kernels.  A small toolkit for univariate polynomials with
Fraction coefficients (lists, lowest degree first) supports determinant and
gcd computations for module presentations over Q[u].
"""

from fractions import Fraction
from math import gcd


def xgcd(a, b):
    """Extended gcd: returns (g, x, y) with x*a + y*b = g."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _unit_for(a, m):
    """A unit u mod m with u*a = gcd(a, m) mod m."""
    d = gcd(a, m)
    c = (a // d) % m
    step = m // d
    e = 0
    while gcd(c + e * step, m) != 1:
        e += 1
    u = (c + e * step) % m
    return pow(u, -1, m)


class HowellForm:
    """Canonical basis of a row module over Z/m."""

    def __init__(self, rows, m, width=None, track=False):
        self.m = m
        if width is None:
            if not rows:
                raise ValueError("need an explicit width for no rows")
            width = len(rows[0])
        self.width = width
        self.track = track
        nrows = len(rows)
        work = []
        for i, r in enumerate(rows):
            if len(r) != width:
                raise ValueError("ragged matrix")
            row = [x % m for x in r]
            if track:
                row += [1 if j == i else 0 for j in range(nrows)]
            work.append(row)
        self.rows = []          # basis rows (with history tail if tracked)
        self.pivots = []        # (column, value) per basis row
        self.kernel_rows = []   # history parts of rows that reduced to zero
        stack = work
        while stack:
            self._insert(stack.pop(), stack)
        self._reduce_upper()
        order = sorted(range(len(self.rows)),
                       key=lambda i: self.pivots[i][0])
        self.rows = [self.rows[i] for i in order]
        self.pivots = [self.pivots[i] for i in order]

    def _first_col(self, row):
        for j in range(self.width):
            if row[j]:
                return j
        return None

    def _insert(self, row, stack):
        m = self.m
        while True:
            j = self._first_col(row)
            if j is None:
                if self.track and any(row[self.width:]):
                    self.kernel_rows.append(row[self.width:])
                return
            hit = None
            for idx, (col, _val) in enumerate(self.pivots):
                if col == j:
                    hit = idx
                    break
            if hit is None:
                u = _unit_for(row[j], m)
                row = [(u * x) % m for x in row]
                d = row[j]
                self.rows.append(row)
                self.pivots.append((j, d))
                ann = m // gcd(d, m)
                if ann % m:
                    extra = [(ann * x) % m for x in row]
                    if any(extra[:self.width]):
                        stack.append(extra)
                    elif self.track and any(extra[self.width:]):
                        self.kernel_rows.append(extra[self.width:])
                return
            base = self.rows[hit]
            d = base[j]
            b = row[j]
            if b % d == 0:
                q = b // d
                row = [(x - q * y) % m for x, y in zip(row, base)]
                continue
            g, xc, yc = xgcd(d, b)
            comb = [(xc * x + yc * y) % m for x, y in zip(base, row)]
            leftover = [((b // g) * x - (d // g) * y) % m
                        for x, y in zip(base, row)]
            u = _unit_for(comb[j], m)
            comb = [(u * x) % m for x in comb]
            self.rows[hit] = comb
            self.pivots[hit] = (j, comb[j])
            ann = m // gcd(comb[j], m)
            if ann % m:
                extra = [(ann * x) % m for x in comb]
                if any(extra[:self.width]):
                    stack.append(extra)
                elif self.track and any(extra[self.width:]):
                    self.kernel_rows.append(extra[self.width:])
            row = leftover

    def _reduce_upper(self):
        m = self.m
        order = sorted(range(len(self.rows)),
                       key=lambda i: self.pivots[i][0])
        for pos in range(len(order)):
            i = order[pos]
            for pos2 in range(pos + 1, len(order)):
                k = order[pos2]
                col, d = self.pivots[k]
                q = self.rows[i][col] // d
                if q:
                    self.rows[i] = [(x - q * y) % m
                                    for x, y in zip(self.rows[i],
                                                    self.rows[k])]

    def reduce(self, vec, with_certificate=False):
        """Fully reduce a vector; returns residual (and combination)."""
        m = self.m
        v = [x % m for x in vec]
        cert = [0] * len(self.rows)
        for idx in range(len(self.rows)):
            col, d = self.pivots[idx]
            q = v[col] // d
            if q:
                v = [(x - q * y) % m
                     for x, y in zip(v, self.rows[idx][:self.width])]
                cert[idx] = q % m
        if with_certificate:
            return v, cert
        return v

    def contains(self, vec):
        return not any(self.reduce(vec))

    def basis_matrix(self):
        return [r[:self.width] for r in self.rows]

    def history_matrix(self):
        if not self.track:
            raise ValueError("construct with track=True for history")
        return [r[self.width:] for r in self.rows]

    def size(self):
        """Number of elements of the row module: product of m/pivot."""
        total = 1
        for _col, d in self.pivots:
            total *= self.m // d
        return total


def zmod_module_size(howell):
    """|row module| = product over pivots of (m / pivot)."""
    total = 1
    for _col, d in howell.pivots:
        assert howell.m % d == 0
        total *= howell.m // d
    return total


def zmod_kernel(rows, m, width=None):
    """Generators of {x : x * rows = 0} over Z/m (left kernel)."""
    hf = HowellForm(rows, m, width=width, track=True)
    gens = list(hf.kernel_rows)
    return gens


def zmod_solve(rows, target, m, width=None):
    """Find x with x * rows = target over Z/m, or None."""
    hf = HowellForm(rows, m, width=width, track=True)
    residual, cert = hf.reduce(target, with_certificate=True)
    if any(residual):
        return None
    n = len(rows)
    out = [0] * n
    hist = hf.history_matrix()
    for coeff, h in zip(cert, hist):
        for i in range(n):
            out[i] = (out[i] + coeff * h[i]) % m
    return out


# --------------------------------------------------------------------------
# rational elimination
# --------------------------------------------------------------------------

def q_echelon(rows):
    """Reduced row echelon form over Q; returns (rref, pivot_columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def q_rank(rows):
    return len(q_echelon(rows)[0])


def q_solve(rows, target):
    """x with x * rows = target over Q, or None (least patterns, exact)."""
    n = len(rows)
    if n == 0:
        return None if any(Fraction(t) for t in target) else []
    width = len(rows[0])
    aug = [[Fraction(rows[i][j]) for j in range(width)]
           + [Fraction(1 if k == i else 0) for k in range(n)]
           for i in range(n)]
    red, _ = q_echelon(aug)
    v = [Fraction(t) for t in target]
    cert = [Fraction(0)] * n
    for row in red:
        lead = None
        for j in range(width):
            if row[j]:
                lead = j
                break
        if lead is None:
            continue
        f = v[lead] / row[lead]
        if f:
            v = [x - f * y for x, y in zip(v, row[:width])]
            for k in range(n):
                cert[k] += f * row[width + k]
    if any(v):
        return None
    return cert


# --------------------------------------------------------------------------
# univariate polynomials over Q (lists, lowest degree first)
# --------------------------------------------------------------------------

def u_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def u_deg(p):
    return len(p) - 1 if p else -1


def u_add(p, q):
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return u_trim(out)


def u_scale(p, c):
    c = Fraction(c)
    return u_trim([x * c for x in p])


def u_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return u_trim(out)


def u_divmod(p, q):
    """Polynomial division over Q; returns (quotient, remainder)."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(x) for x in p]
    quo = [Fraction(0)] * max(1, len(rem) - len(q) + 1)
    dq = u_deg(q)
    lead = q[-1]
    while u_deg(rem) >= dq:
        shift = u_deg(rem) - dq
        f = rem[-1] / lead
        quo[shift] += f
        for i, c in enumerate(q):
            rem[shift + i] -= f * c
        u_trim(rem)
    return u_trim(quo), rem


def u_gcd(p, q):
    a, b = [Fraction(x) for x in p], [Fraction(x) for x in q]
    u_trim(a)
    u_trim(b)
    while b:
        _, r = u_divmod(a, b)
        a, b = b, r
    if a:
        a = u_scale(a, 1 / a[-1])
    return a


def u_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * Fraction(x) + c
    return acc


def u_from_payload(data, var_index=0):
    """Univariate list from a payload dict supported on one variable."""
    out = []
    for e, c in data.items():
        k = e[var_index]
        if any(x for i, x in enumerate(e) if i != var_index):
            raise ValueError("payload is not univariate")
        while len(out) <= k:
            out.append(Fraction(0))
        out[k] += Fraction(c)
    return u_trim(out)


def u_det(mat):
    """Determinant of a small matrix of univariate polynomials (cofactor)."""
    n = len(mat)
    if n == 1:
        return list(mat[0][0])
    if n == 2:
        return u_add(u_mul(mat[0][0], mat[1][1]),
                     u_scale(u_mul(mat[0][1], mat[1][0]), -1))
    total = []
    for j in range(n):
        minor = [[mat[i][k] for k in range(n) if k != j]
                 for i in range(1, n)]
        term = u_mul(mat[0][j], u_det(minor))
        if j % 2:
            term = u_scale(term, -1)
        total = u_add(total, term)
    return total


def u_adjugate3(mat):
    """Adjugate of a 3x3 polynomial matrix: adj * mat = det * identity."""
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rs = [r for r in range(3) if r != i]
            cs = [c for c in range(3) if c != j]
            minor = u_add(
                u_mul(mat[rs[0]][cs[0]], mat[rs[1]][cs[1]]),
                u_scale(u_mul(mat[rs[0]][cs[1]], mat[rs[1]][cs[0]]), -1))
            cof[i][j] = u_scale(minor, -1) if (i + j) % 2 else minor
    return [[cof[j][i] for j in range(3)] for i in range(3)]
