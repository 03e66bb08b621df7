"""Independent reference computations used to cross-check the engine.

Everything in this file is deliberately written without importing the
package under test. The routines favour the most literal possible
method (untracked gcd reduction, determinantal divisors, exhaustive
enumeration, textbook finite-field arithmetic) over speed, so that an
engine bug and an oracle bug are unlikely to coincide.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd, prod


# ---------------------------------------------------------------------------
# Smith diagonal by plain gcd reduction (no transforms, first-nonzero pivot)


def snf_diagonal_oracle(mat):
    """Diagonal of the Smith form of an integer matrix, as a list.

    Classic gcd reduction: drag a nonzero entry to the corner, run Euclid
    sweeps on its row and column until both are clear, patch divisibility
    violations by folding the offending row into the corner row, recurse
    on the trailing block. Returns min(rows, cols) entries, zeros included.
    """
    work = [list(row) for row in mat]
    nrows = len(work)
    ncols = len(work[0]) if nrows else 0
    diag = []
    top = 0
    while top < nrows and top < ncols:
        pivot_pos = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                if work[i][j] != 0:
                    pivot_pos = (i, j)
                    break
            if pivot_pos:
                break
        if pivot_pos is None:
            break
        i0, j0 = pivot_pos
        work[top], work[i0] = work[i0], work[top]
        for row in work:
            row[top], row[j0] = row[j0], row[top]
        while True:
            # Euclid sweep on the pivot column.
            for i in range(top + 1, nrows):
                while work[i][top] != 0:
                    q = work[i][top] // work[top][top]
                    for j in range(ncols):
                        work[i][j] -= q * work[top][j]
                    if work[i][top] != 0:
                        work[top], work[i] = work[i], work[top]
            # Euclid sweep on the pivot row.
            row_clear = True
            for j in range(top + 1, ncols):
                while work[top][j] != 0:
                    q = work[top][j] // work[top][top]
                    for i in range(nrows):
                        work[i][j] -= q * work[i][top]
                    if work[top][j] != 0:
                        for i in range(nrows):
                            work[i][top], work[i][j] = work[i][j], work[i][top]
                        row_clear = False
            if not row_clear or any(
                work[i][top] != 0 for i in range(top + 1, nrows)
            ):
                continue
            offender = None
            for i in range(top + 1, nrows):
                for j in range(top + 1, ncols):
                    if work[i][j] % work[top][top] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(ncols):
                work[top][j] += work[offender][j]
        diag.append(abs(work[top][top]))
        top += 1
    diag.extend([0] * (min(nrows, ncols) - len(diag)))
    return diag


def determinantal_divisors_oracle(mat):
    """Invariant factors via gcds of k x k minors. No elimination at all.

    d_k = D_k / D_{k-1} with D_k the gcd of all k x k minors (D_0 = 1).
    Returns the same shape as snf_diagonal_oracle.
    """
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    n = min(nrows, ncols)
    out = []
    prev = 1
    for k in range(1, n + 1):
        g = 0
        for rows in itertools.combinations(range(nrows), k):
            for cols in itertools.combinations(range(ncols), k):
                sub = [[mat[i][j] for j in cols] for i in rows]
                g = gcd(g, _det(sub))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            out.extend([0] * (n - k + 1))
            return out
        out.append(g // prev)
        prev = g
    return out


def _det(mat):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(mat)
    if n == 0:
        return 1
    work = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if work[k][k] == 0:
            pivot_row = next(
                (i for i in range(k + 1, n) if work[i][k] != 0), None
            )
            if pivot_row is None:
                return 0
            work[k], work[pivot_row] = work[pivot_row], work[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = (
                    work[i][j] * work[k][k] - work[i][k] * work[k][j]
                ) // prev
            work[i][k] = 0
        prev = work[k][k]
    return sign * work[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Structure of a finite abelian group given as an explicit element set


def abelian_invariants_from_elements(elements, add, zero):
    """Invariant-factor chain of a finite abelian group, by counting.

    ``elements`` is the full element list, ``add`` the binary operation,
    ``zero`` the identity. Works prime by prime: #{x : p^j x = 0} equals
    p^(sum_i min(j, e_i)), which pins down the exponent partition at p.
    """

    def times(n, x):
        acc = zero
        base = x
        while n:
            if n & 1:
                acc = add(acc, base)
            base = add(base, base)
            n >>= 1
        return acc

    order = len(elements)
    if order == 1:
        return []
    per_prime = {}
    for p in _prime_factors(order):
        target = _p_part(order, p)
        logs = [0]  # log_p of #{x : p^j x = 0}, starting at j = 0
        while p ** logs[-1] < target:
            j = len(logs)
            killed = sum(1 for x in elements if times(p**j, x) == zero)
            logs.append(_int_log(killed, p))
        # factors with exponent >= j: logs[j] - logs[j-1]
        ge_counts = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        factors = []
        for j in range(len(ge_counts), 0, -1):
            above = ge_counts[j] if j < len(ge_counts) else 0
            factors.extend([p**j] * (ge_counts[j - 1] - above))
        per_prime[p] = sorted(factors, reverse=True)
    width = max(len(v) for v in per_prime.values())
    chain = []
    for slot in range(width):
        d = 1
        for factors in per_prime.values():
            if slot < len(factors):
                d *= factors[slot]
        chain.append(d)
    chain.reverse()
    return chain


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _p_part(n, p):
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def _int_log(n, p):
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# Small finite fields with literal polynomial arithmetic


class FiniteField:
    """F_{p^s} as F_p[x] mod a monic irreducible polynomial.

    Elements are coefficient tuples of length s (constant term first).
    Slow and obvious on purpose; used for enumeration cross-checks only.
    """

    def __init__(self, p, s=1):
        self.p = p
        self.s = s
        self.size = p**s
        self.modulus = self._find_irreducible(p, s)
        self.zero = (0,) * s
        one = [0] * s
        one[0] = 1
        self.one = tuple(one)

    @staticmethod
    def _find_irreducible(p, s):
        if s == 1:
            return (0, 1)
        # Monic degree-s polynomials, constant term first, leading coeff 1.
        for tail in itertools.product(range(p), repeat=s):
            poly = tuple(tail) + (1,)
            if poly[0] == 0:
                continue
            if FiniteField._is_irreducible(poly, p, s):
                return poly
        raise AssertionError("no irreducible polynomial found")

    @staticmethod
    def _is_irreducible(poly, p, s):
        # Trial division by all monic polynomials of degree 1..s//2.
        for d in range(1, s // 2 + 1):
            for tail in itertools.product(range(p), repeat=d):
                divisor = tuple(tail) + (1,)
                if FiniteField._poly_mod(poly, divisor, p) == ():
                    return False
        return True

    @staticmethod
    def _poly_mod(a, b, p):
        # Remainder of a mod b over F_p; b is monic. () means zero.
        a = [c % p for c in a]
        b = [c % p for c in b]
        deg_b = len(b) - 1
        while True:
            while a and a[-1] == 0:
                a.pop()
            if len(a) - 1 < deg_b or not a:
                break
            lead = a[-1]
            shift = len(a) - 1 - deg_b
            for i, coeff in enumerate(b):
                a[shift + i] = (a[shift + i] - lead * coeff) % p
        return tuple(a)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        raw = [0] * (2 * self.s - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    raw[i + j] = (raw[i + j] + x * y) % self.p
        # Reduce mod the irreducible polynomial.
        for k in range(len(raw) - 1, self.s - 1, -1):
            coeff = raw[k]
            if coeff:
                raw[k] = 0
                for i in range(self.s):
                    raw[k - self.s + i] = (
                        raw[k - self.s + i] - coeff * self.modulus[i]
                    ) % self.p
        return tuple(raw[: self.s])

    def pow(self, a, n):
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.s):
            yield coeffs

    def units(self):
        for x in self.elements():
            if x != self.zero:
                yield x


@lru_cache(maxsize=None)
def _field(p, s):
    return FiniteField(p, s)


def _unit_generator(field):
    """A verified generator of the multiplicative group of the field.

    The order claim is checked honestly: a candidate g passes only when
    g ** (n / ell) != 1 for every prime ell dividing n = |units|.  Unit
    groups of finite fields are cyclic, so the scan terminates.
    """
    n = field.size - 1
    primes = _prime_factors(n)
    for g in field.units():
        if all(field.pow(g, n // ell) != field.one for ell in primes):
            return g
    raise AssertionError("no multiplicative generator found")


def _crt_pair(a1, n1, a2, n2):
    # x = a1 mod n1 and x = a2 mod n2, for coprime moduli.
    lift = ((a2 - a1) * pow(n1, -1, n2)) % n2
    return a1 + n1 * lift, n1 * n2


def norm_one_group_oracle(p, s):
    """Elements of F_{p^s} with norm 1 down to F_p, and their invariants."""
    field = _field(p, s)
    norm_exp = (field.size - 1) // (p - 1)
    members = [x for x in field.units() if field.pow(x, norm_exp) == field.one]
    invariants = abelian_invariants_from_elements(
        members, field.mul, field.one
    )
    return members, invariants


def lang_kernel_field_oracle(sigma, q_char, q_exp, k):
    """Fixed points of the q-twisted Frobenius on a split torus, in F_{q^k}.

    sigma: r x r integer matrix of finite order k; the twisted Frobenius
    acts on tuples v of units of F_{q^k} (q = q_char**q_exp) by
    F(v)_i = prod_j v_j ** (q * sigma[i][j]). Returns the invariant-factor
    chain of the fixed-point group.

    Writing units as powers of a generator g (whose order is verified
    element by element, see _unit_generator), a tuple g**a is fixed exactly
    when (q*sigma - 1) a = 0 mod |units|. Those congruences are solved by
    brute force prime power by prime power and stitched together with the
    Chinese remainder theorem; every stitched candidate is then checked
    literally in the field before it counts, so a bug here can only lose
    completeness, never invent fixed points -- and completeness follows
    from cyclicity of the unit group plus the verified generator order.
    """
    r = len(sigma)
    q = q_char**q_exp
    field = _field(q_char, q_exp * k)
    n_units = field.size - 1
    gen = _unit_generator(field)

    parts = []
    for ell in _prime_factors(n_units):
        modulus = _p_part(n_units, ell)
        solutions = [
            a
            for a in itertools.product(range(modulus), repeat=r)
            if all(
                (q * sum(sigma[i][j] * a[j] for j in range(r)) - a[i]) % modulus
                == 0
                for i in range(r)
            )
        ]
        parts.append((modulus, solutions))

    def twist(vec):
        out = []
        for i in range(r):
            acc = field.one
            for j in range(r):
                e = q * sigma[i][j]
                term = field.pow(vec[j], e % n_units if n_units > 1 else 0)
                acc = field.mul(acc, term)
            out.append(acc)
        return tuple(out)

    fixed = []
    for combo in itertools.product(*(sols for _, sols in parts)):
        exponents = []
        for j in range(r):
            x, mod = 0, 1
            for (modulus, _), sol in zip(parts, combo):
                x, mod = _crt_pair(x, mod, sol[j], modulus)
            exponents.append(x % n_units)
        vec = tuple(field.pow(gen, e) for e in exponents)
        if twist(vec) != vec:
            raise AssertionError(
                "congruence candidate failed literal field verification"
            )
        fixed.append(vec)

    def add(u, v):
        return tuple(field.mul(a, b) for a, b in zip(u, v))

    one = tuple(field.one for _ in range(r))
    return abelian_invariants_from_elements(fixed, add, one)
