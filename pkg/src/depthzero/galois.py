"""Finite groups as multiplication tables, plus local Galois data.

Elements are indices 0..n-1 into the table. Everything is validated at
construction (full associativity check; tables stay small, order <= ~24,
so the cubic cost is irrelevant). Cosets and double cosets use a fixed
smallest-index tie-break so that every downstream computation involving
representative choices is reproducible.

The :class:`LocalGaloisDatum` models the inertia and wild-inertia chain
of a local field at finite level: a group with two nested normal
subgroups, a Frobenius coset generator, and the tame q-power relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

from depthzero.abelian import FinAbGroup


class GroupError(ValueError):
    """The given table or subset violates a group law."""


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``table[i][j]`` is the index of the product (i-th element) * (j-th
    element). Group laws are verified eagerly so invalid tables never
    circulate.
    """

    table: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.table)
        for row in self.table:
            if len(row) != n:
                raise GroupError("table is not square")
            for x in row:
                if not isinstance(x, int) or not 0 <= x < n:
                    raise GroupError(f"entry {x!r} out of range")
        if n == 0:
            raise GroupError("empty table")
        ident = None
        for e in range(n):
            if all(self.table[e][j] == j and self.table[j][e] == j for j in range(n)):
                ident = e
                break
        if ident is None:
            raise GroupError("no identity element")
        for i in range(n):
            if not any(self.table[i][j] == ident for j in range(n)):
                raise GroupError(f"element {i} has no inverse")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]]:
                        raise GroupError(
                            f"associativity fails at ({i}, {j}, {k})"
                        )

    @classmethod
    def from_table(cls, rows, name=""):
        return cls(tuple(tuple(r) for r in rows), name=name)

    @classmethod
    def cyclic(cls, n):
        return cls.from_table(
            [[(i + j) % n for j in range(n)] for i in range(n)], name=f"C{n}"
        )

    @classmethod
    def from_permutations(cls, perms, name=""):
        """Group generated by composition of the given full list of perms.

        ``perms`` must already be closed under composition; indices follow
        the list order.
        """
        perms = [tuple(p) for p in perms]
        lookup = {p: i for i, p in enumerate(perms)}
        rows = []
        for a in perms:
            row = []
            for b in perms:
                composed = tuple(a[b[k]] for k in range(len(a)))
                if composed not in lookup:
                    raise GroupError("permutation list is not closed")
                row.append(lookup[composed])
            rows.append(row)
        return cls.from_table(rows, name=name)

    @property
    def order(self):
        return len(self.table)

    @cached_property
    def identity(self):
        n = self.order
        for e in range(n):
            if all(self.table[e][j] == j for j in range(n)):
                return e
        raise GroupError("no identity element")  # unreachable after validation

    @cached_property
    def inverse_table(self):
        e = self.identity
        inv = [0] * self.order
        for i in range(self.order):
            inv[i] = next(j for j in range(self.order) if self.table[i][j] == e)
        return tuple(inv)

    def mul(self, i, j):
        return self.table[i][j]

    def inv(self, i):
        return self.inverse_table[i]

    def conj(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def element_order(self, i):
        e = self.identity
        k, acc = 1, i
        while acc != e:
            acc = self.mul(acc, i)
            k += 1
        return k

    def is_abelian(self):
        return all(
            self.table[i][j] == self.table[j][i]
            for i in range(self.order)
            for j in range(i)
        )

    def elements(self):
        return range(self.order)

    def generated_by(self, seeds):
        """Smallest subgroup containing ``seeds``, as a sorted tuple."""
        closure = {self.identity}
        gens = set(seeds) | {self.inv(s) for s in seeds}
        pending = list(gens - closure)
        closure |= gens
        while pending:
            x = pending.pop()
            for y in list(closure):
                for z in (self.mul(x, y), self.mul(y, x)):
                    if z not in closure:
                        closure.add(z)
                        pending.append(z)
        return tuple(sorted(closure))

    def is_subgroup(self, subset):
        sub = set(subset)
        if self.identity not in sub:
            return False
        return all(
            self.mul(a, b) in sub and self.inv(a) in sub for a in sub for b in sub
        )

    def is_normal(self, subset):
        if not self.is_subgroup(subset):
            return False
        sub = set(subset)
        return all(
            self.conj(g, x) in sub for g in range(self.order) for x in sub
        )

    def subgroups(self):
        """All subgroups, each a sorted index tuple, ordered by (size, tuple)."""
        found = {(self.identity,)}
        frontier = [(self.identity,)]
        while frontier:
            base = frontier.pop()
            for g in range(self.order):
                if g in base:
                    continue
                bigger = self.generated_by(set(base) | {g})
                if bigger not in found:
                    found.add(bigger)
                    frontier.append(bigger)
        return sorted(found, key=lambda s: (len(s), s))

    def subgroup_as_group(self, subset):
        """The subgroup as a standalone group plus its embedding list."""
        if not self.is_subgroup(subset):
            raise GroupError(f"{tuple(subset)} is not a subgroup")
        embed = tuple(sorted(subset))
        pos = {g: i for i, g in enumerate(embed)}
        rows = [[pos[self.mul(a, b)] for b in embed] for a in embed]
        return FiniteGroup.from_table(rows), embed

    def abelian_invariants(self):
        """Invariant-factor decomposition, for abelian groups only.

        Counts solutions of p^j * x = 0 per prime; those counts pin the
        number of cyclic p-power factors of each exponent.
        """
        if not self.is_abelian():
            raise GroupError("group is not abelian")
        n = self.order
        orders = [self.element_order(x) for x in range(n)]
        all_factors = []
        for p in _prime_divisors(n):
            target = _p_part(n, p)
            logs = [0]
            while p ** logs[-1] < target:
                j = len(logs)
                killed = sum(1 for o in orders if p**j % o == 0)
                logs.append(_int_log(killed, p))
            at_least = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)]
            for height, cnt in enumerate(at_least, start=1):
                above = at_least[height] if height < len(at_least) else 0
                all_factors.extend([p**height] * (cnt - above))
        return FinAbGroup.from_divisors(all_factors)

    def direct_product(self, other):
        """Product group; index of (a, b) is a * other.order + b."""
        n2 = other.order
        rows = []
        for a in range(self.order):
            for b in range(n2):
                row = []
                for c in range(self.order):
                    for d in range(n2):
                        row.append(self.mul(a, c) * n2 + other.mul(b, d))
                rows.append(row)
        label = ""
        if self.name and other.name:
            label = f"{self.name} x {other.name}"
        return FiniteGroup.from_table(rows, name=label)


def _prime_divisors(n):
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
# Cosets, double cosets, quotients


def coset_reps(group: FiniteGroup, subgroup) -> list:
    """Left-coset representatives gH, smallest index per coset, ascending.

    >>> coset_reps(FiniteGroup.cyclic(4), (0, 2))
    [0, 1]
    """
    if not group.is_subgroup(subgroup):
        raise GroupError(f"{tuple(subgroup)} is not a subgroup")
    sub = sorted(subgroup)
    seen = set()
    reps = []
    for g in range(group.order):
        if g in seen:
            continue
        reps.append(g)
        for h in sub:
            seen.add(group.mul(g, h))
    return reps


def coset_of(group: FiniteGroup, subgroup, g) -> tuple:
    """The left coset gH as a sorted tuple."""
    return tuple(sorted(group.mul(g, h) for h in subgroup))


def coset_rep_of(group: FiniteGroup, subgroup, g) -> int:
    """Smallest element of gH; consistent with :func:`coset_reps`."""
    return min(group.mul(g, h) for h in subgroup)


def double_cosets(group: FiniteGroup, h1, h2) -> list:
    """Partition of the group into H1-g-H2 blocks (sorted tuples)."""
    for h in (h1, h2):
        if not group.is_subgroup(h):
            raise GroupError(f"{tuple(h)} is not a subgroup")
    seen = set()
    blocks = []
    for g in range(group.order):
        if g in seen:
            continue
        block = sorted(
            {group.mul(group.mul(a, g), b) for a in h1 for b in h2}
        )
        blocks.append(tuple(block))
        seen.update(block)
    return blocks


@dataclass(frozen=True)
class QuotientGroup:
    group: FiniteGroup
    projection: tuple  # projection[i] = quotient index of element i
    sections: tuple  # smallest preimage per quotient element


def quotient_group(group: FiniteGroup, normal) -> QuotientGroup:
    """G/N with its projection; N must be normal."""
    if not group.is_normal(normal):
        raise GroupError(f"{tuple(normal)} is not a normal subgroup")
    reps = coset_reps(group, normal)
    index_of = {}
    for qi, r in enumerate(reps):
        for h in normal:
            index_of[group.mul(r, h)] = qi
    rows = [
        [index_of[group.mul(a, b)] for b in reps]
        for a in reps
    ]
    label = f"{group.name}/N" if group.name else ""
    return QuotientGroup(
        group=FiniteGroup.from_table(rows, name=label),
        projection=tuple(index_of[g] for g in range(group.order)),
        sections=tuple(reps),
    )


def is_cyclic(group: FiniteGroup) -> bool:
    return any(group.element_order(g) == group.order for g in group.elements())


# ---------------------------------------------------------------------------
# Local Galois data


@dataclass(frozen=True)
class LocalGaloisDatum:
    """Finite-level model of a local Galois group with its filtration.

    ``gamma`` plays the Galois group of some finite extension; ``inertia``
    and ``wild`` are the images of inertia and wild inertia; ``frob`` is
    any element projecting to a generator of the unramified quotient.
    ``p`` is the residue characteristic and ``q`` the residue field size.
    Use :func:`validate_local_datum` to check the structural axioms.
    """

    gamma: FiniteGroup
    inertia: tuple
    wild: tuple
    frob: int
    p: int
    q: int

    def tame_quotient(self):
        """inertia/wild as a standalone group with bookkeeping."""
        inertia_group, embed = self.gamma.subgroup_as_group(self.inertia)
        pos = {g: i for i, g in enumerate(embed)}
        wild_local = tuple(sorted(pos[w] for w in self.wild))
        return inertia_group, embed, quotient_group(inertia_group, wild_local)


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple  # of (name, passed, detail)

    @property
    def ok(self):
        return all(passed for _, passed, _ in self.checks)

    def failures(self):
        return [name for name, passed, _ in self.checks if not passed]

    def __str__(self):
        lines = []
        for name, passed, detail in self.checks:
            mark = "pass" if passed else "FAIL"
            lines.append(f"[{mark}] {name}: {detail}")
        return "\n".join(lines)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _is_power_of(n, p):
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def validate_local_datum(datum: LocalGaloisDatum) -> ValidationReport:
    """Check every structural axiom; never raises, reports each by name.

    The q-power relation is the essential one: conjugation by Frobenius
    on the tame quotient inertia/wild must equal raising to the q-th
    power.
    """
    g = datum.gamma
    checks = []

    def record(name, passed, detail):
        checks.append((name, bool(passed), detail))
        return passed

    record("p_prime", _is_prime(datum.p), f"p = {datum.p}")
    record("q_at_least_2", datum.q >= 2, f"q = {datum.q}")
    record(
        "frob_in_range",
        0 <= datum.frob < g.order,
        f"frob index {datum.frob}",
    )

    inertia_ok = record(
        "inertia_subgroup",
        g.is_subgroup(datum.inertia),
        f"inertia = {tuple(datum.inertia)}",
    )
    wild_ok = record(
        "wild_subgroup",
        g.is_subgroup(datum.wild) and set(datum.wild) <= set(datum.inertia),
        f"wild = {tuple(datum.wild)}",
    )
    if not (inertia_ok and wild_ok):
        return ValidationReport(checks=tuple(checks))

    record("wild_normal", g.is_normal(datum.wild), "wild must be normal in gamma")
    record(
        "inertia_normal", g.is_normal(datum.inertia), "inertia must be normal in gamma"
    )
    record(
        "wild_order_p_power",
        _is_power_of(len(datum.wild), datum.p),
        f"|wild| = {len(datum.wild)}",
    )
    tame_index = len(datum.inertia) // len(datum.wild)
    record(
        "tame_index_prime_to_p",
        gcd(tame_index, datum.p) == 1,
        f"[inertia : wild] = {tame_index}",
    )

    if not (g.is_normal(datum.inertia) and g.is_normal(datum.wild)):
        return ValidationReport(checks=tuple(checks))

    unram = quotient_group(g, datum.inertia)
    frob_image = unram.projection[datum.frob]
    gen_ok = is_cyclic(unram.group) and unram.group.element_order(
        frob_image
    ) == unram.group.order
    record(
        "unramified_quotient_cyclic_frob_generates",
        gen_ok,
        f"gamma/inertia order {unram.group.order}",
    )

    inertia_group, embed, tame = datum.tame_quotient()
    record(
        "tame_quotient_cyclic",
        is_cyclic(tame.group),
        f"inertia/wild order {tame.group.order}",
    )

    # Frobenius conjugation on inertia/wild must be the q-power map.
    pos = {gg: i for i, gg in enumerate(embed)}
    qpow_ok = True
    for s in datum.inertia:
        conj = g.conj(datum.frob, s)
        lhs = tame.projection[pos[conj]]
        cls = tame.projection[pos[s]]
        rhs = tame.group.identity
        for _ in range(datum.q):
            rhs = tame.group.mul(rhs, cls)
        if lhs != rhs:
            qpow_ok = False
            break
    record(
        "frob_conjugation_is_q_power",
        qpow_ok,
        f"q = {datum.q} on tame quotient",
    )
    return ValidationReport(checks=tuple(checks))


# ---------------------------------------------------------------------------
# Built-in catalog


def _klein_four():
    # (Z/2)^2 with bitwise-xor indices.
    return FiniteGroup.from_table(
        [[i ^ j for j in range(4)] for i in range(4)], name="V4"
    )


def _symmetric_3():
    perms = sorted(itertools.permutations(range(3)))
    return FiniteGroup.from_permutations(perms, name="S3")


def _dihedral_8():
    # Symmetries of the square as permutations of its corners.
    rot = (1, 2, 3, 0)
    flip = (1, 0, 3, 2)

    def compose(a, b):
        return tuple(a[b[k]] for k in range(4))

    elems = [tuple(range(4))]
    frontier = [tuple(range(4))]
    while frontier:
        x = frontier.pop()
        for gen in (rot, flip):
            y = compose(gen, x)
            if y not in elems:
                elems.append(y)
                frontier.append(y)
    elems.sort()
    return FiniteGroup.from_permutations(elems, name="D4")


def _quaternion_8():
    # Indices: 1, -1, i, -i, j, -j, k, -k.
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    basic = {"1": (1, "1"), "i": (1, "i"), "j": (1, "j"), "k": (1, "k")}

    def unit_mul(a, b):
        # quaternion unit products with sign
        tbl = {
            ("1", "1"): (1, "1"),
            ("1", "i"): (1, "i"),
            ("1", "j"): (1, "j"),
            ("1", "k"): (1, "k"),
            ("i", "1"): (1, "i"),
            ("j", "1"): (1, "j"),
            ("k", "1"): (1, "k"),
            ("i", "i"): (-1, "1"),
            ("j", "j"): (-1, "1"),
            ("k", "k"): (-1, "1"),
            ("i", "j"): (1, "k"),
            ("j", "i"): (-1, "k"),
            ("j", "k"): (1, "i"),
            ("k", "j"): (-1, "i"),
            ("k", "i"): (1, "j"),
            ("i", "k"): (-1, "j"),
        }
        return tbl[(a, b)]

    def parse(s):
        if s.startswith("-"):
            return -1, s[1:]
        return 1, s

    def index_of(sign, unit):
        s = unit if sign == 1 else "-" + unit
        return names.index(s)

    rows = []
    for a in names:
        row = []
        sa, ua = parse(a)
        for b in names:
            sb, ub = parse(b)
            sp, up = unit_mul(ua, ub)
            row.append(index_of(sa * sb * sp, up))
        rows.append(row)
    return FiniteGroup.from_table(rows, name="Q8")


def catalog():
    """Built-in groups keyed by name; covers every order up to 8 plus C12."""
    groups = [FiniteGroup.cyclic(1)]
    groups[0] = FiniteGroup.from_table(groups[0].table, name="C1")
    groups.extend(FiniteGroup.cyclic(n) for n in range(2, 9))
    groups.append(FiniteGroup.cyclic(12))
    groups.append(_klein_four())
    groups.append(_symmetric_3())
    groups.append(_dihedral_8())
    groups.append(_quaternion_8())
    return {g.name: g for g in groups}


def tame_model_group(e, n, q):
    """Metacyclic group <s, F | s^e = F^n = 1, F s F^-1 = s^q>.

    Element s^i F^j has index i*n + j. Requires q^n = 1 mod e so the
    presentation closes. This is the finite-level model of a tamely
    ramified Galois group: s spans the inertia image, F the Frobenius.
    """
    if e < 1 or n < 1:
        raise GroupError("both cyclic factors need positive order")
    if pow(q, n, e) != 1 % e:
        raise GroupError(f"q^n = {q}^{n} is not 1 mod {e}")
    rows = []
    for i1 in range(e):
        for j1 in range(n):
            row = []
            for i2 in range(e):
                for j2 in range(n):
                    i = (i1 + i2 * pow(q, j1, e)) % e
                    j = (j1 + j2) % n
                    row.append(i * n + j)
            rows.append(row)
    return FiniteGroup.from_table(rows, name=f"Tame({e},{n},q={q})")


def tame_local_datum(e, n, q, p) -> LocalGaloisDatum:
    """Local datum on the tame model group: full inertia s, trivial wild."""
    g = tame_model_group(e, n, q)
    inertia = tuple(sorted(i * n for i in range(e)))
    return LocalGaloisDatum(
        gamma=g, inertia=inertia, wild=(g.identity,), frob=1 if n > 1 else 0,
        p=p, q=q,
    )
