"""Degree-zero and degree-one group cohomology at the cocycle level.

Cocycles are stored as explicit tables over a subgroup of an ambient
group, with values in a :class:`~depthzero.gmodule.GammaModule` whose
coefficients are either finite or a lattice. The main engine solves the
normalized cocycle conditions by exact integer linear algebra; an
exhaustive enumeration route over finite coefficients exists purely for
cross-validation, and the two must agree.

Transfer (corestriction) is implemented twice on purpose, once through
the double-coset expression and once through the normalized expression
that is available when the subgroup is normal; both are checked to give
cohomologous results by the test suite, and the compatibility of
transfer with the coset-averaging map is a first-class verification
(:func:`verify_transfer_compatibility`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from depthzero.abelian import (
    FinAbGroup,
    IntMatrix,
    QuotientData,
    integer_kernel,
    kernel_mod_lattice,
    lattice_quotient,
    solve_integer,
    vec_add,
    vec_scale,
    vec_sub,
    vec_zero,
)
from depthzero.galois import FiniteGroup, coset_reps
from depthzero.gmodule import (
    GammaModule,
    ModuleMap,
    ShortExactSeq,
    invariants,
    mod_m_reduction,
)


class CohomologyError(ValueError):
    """Input outside the supported coefficient or subgroup shapes."""


class CapExceeded(CohomologyError):
    """A configurable size cap was hit; raise it explicitly to proceed."""


def _check_coefficients(module: GammaModule):
    g = module.underlying_group()
    if g.free_rank and g.torsion:
        raise CohomologyError(
            "coefficients must be finite or free, not mixed: " + str(g)
        )


def generating_set(group: FiniteGroup, domain) -> list:
    """Small deterministic generating set of a subgroup (greedy, ascending)."""
    target = set(domain)
    gens = []
    closure = {group.identity}
    for g in sorted(target):
        if g in closure:
            continue
        gens.append(g)
        closure = set(group.generated_by(gens))
        if closure == target:
            break
    if closure != target:
        raise CohomologyError(f"{tuple(domain)} is not a subgroup")
    return gens


# ---------------------------------------------------------------------------
# Cocycles


@dataclass(frozen=True)
class Cocycle1:
    """A 1-cocycle z on a subgroup of the module's acting group.

    ``domain`` is a sorted tuple of ambient element indices forming a
    subgroup; ``table[i]`` is the value at ``domain[i]``. Entries are
    canonicalized on construction, the normalization z(e) = 0 and the
    cocycle identity z(gh) = z(g) + g.z(h) are verified.
    """

    module: GammaModule
    domain: tuple
    table: tuple

    def __post_init__(self):
        group = self.module.group
        dom = tuple(sorted(self.domain))
        if dom != tuple(self.domain):
            object.__setattr__(self, "domain", dom)
        if not group.is_subgroup(dom):
            raise CohomologyError(f"{dom} is not a subgroup")
        if len(self.table) != len(dom):
            raise CohomologyError("table length does not match the domain")
        pres = self.module.presentation
        canon = tuple(
            pres.element_from_key(pres.reduce(tuple(v))) for v in self.table
        )
        object.__setattr__(self, "table", canon)
        pos = {g: i for i, g in enumerate(dom)}
        e = group.identity
        if any(x != 0 for x in canon[pos[e]]):
            raise CohomologyError("z(identity) must vanish")
        for a in dom:
            za = canon[pos[a]]
            act = self.module.action[a]
            for b in dom:
                expected = vec_add(za, act.apply(canon[pos[b]]))
                got = canon[pos[group.mul(a, b)]]
                if not pres.contains_in_lattice(vec_sub(got, expected)):
                    raise CohomologyError(
                        f"cocycle identity fails at pair ({a}, {b})"
                    )

    def value(self, g):
        return self.table[self.domain.index(g)]

    def __add__(self, other):
        self._compatible(other)
        return Cocycle1(
            module=self.module,
            domain=self.domain,
            table=tuple(vec_add(a, b) for a, b in zip(self.table, other.table)),
        )

    def __sub__(self, other):
        self._compatible(other)
        return Cocycle1(
            module=self.module,
            domain=self.domain,
            table=tuple(vec_sub(a, b) for a, b in zip(self.table, other.table)),
        )

    def scale(self, c):
        return Cocycle1(
            module=self.module,
            domain=self.domain,
            table=tuple(vec_scale(c, v) for v in self.table),
        )

    def _compatible(self, other):
        if self.module is not other.module and self.module != other.module:
            raise CohomologyError("cocycles live over different modules")
        if self.domain != other.domain:
            raise CohomologyError("cocycles live over different domains")

    def is_identically_zero(self):
        return all(all(x == 0 for x in v) for v in self.table)


def cocycle_zero(module: GammaModule, domain=None) -> Cocycle1:
    dom = tuple(sorted(domain)) if domain is not None else tuple(
        range(module.group.order)
    )
    return Cocycle1(
        module=module, domain=dom, table=tuple(vec_zero(module.rank) for _ in dom)
    )


def coboundary(module: GammaModule, vector, domain=None) -> Cocycle1:
    """d0 of a module element: g maps to (g - 1) applied to the element."""
    dom = tuple(sorted(domain)) if domain is not None else tuple(
        range(module.group.order)
    )
    vector = tuple(vector)
    table = tuple(
        vec_sub(module.action[g].apply(vector), vector) for g in dom
    )
    return Cocycle1(module=module, domain=dom, table=table)


# ---------------------------------------------------------------------------
# The linear H^1 engine


def _nonidentity(module, domain):
    e = module.group.identity
    return tuple(g for g in domain if g != e)


def _flatten(module, domain, table_by_element):
    nonid = _nonidentity(module, domain)
    out = []
    for g in nonid:
        out.extend(table_by_element[g])
    return tuple(out)


def _cocycle_condition_matrix(module: GammaModule, domain):
    """Rows enforcing z(sh) - z(s) - s.z(h) = 0 for s in a generating set.

    Conditions with the first argument restricted to generators imply the
    full cocycle identity (standard cochain induction), which keeps the
    system small.
    """
    group = module.group
    rank = module.rank
    nonid = _nonidentity(module, domain)
    slot = {g: i for i, g in enumerate(nonid)}
    n_vars = len(nonid) * rank
    gens = generating_set(group, domain)
    rows = []
    for s in gens:
        act = module.action[s]
        for h in nonid:
            block = [[0] * n_vars for _ in range(rank)]

            def add_matrix(target_g, mat, sign, block=block):
                if target_g == group.identity:
                    return
                base = slot[target_g] * rank
                for r in range(rank):
                    for c in range(rank):
                        block[r][base + c] += sign * mat.entry(r, c)

            ident = IntMatrix.identity(rank)
            add_matrix(group.mul(s, h), ident, 1)
            add_matrix(s, ident, -1)
            add_matrix(h, act, -1)
            rows.extend(block)
    if rows:
        return IntMatrix.from_rows(rows), nonid
    return IntMatrix.zeros(0, n_vars), nonid


def _slot_relation_vectors(module, nonid):
    """Relation lattice copied into each variable slot."""
    rank = module.rank
    n_vars = len(nonid) * rank
    out = []
    for i in range(len(nonid)):
        for rel in module.presentation.relation_vectors():
            v = [0] * n_vars
            v[i * rank : (i + 1) * rank] = list(rel)
            out.append(tuple(v))
    return out


def _cocycle_lattice(module: GammaModule, domain):
    cond, nonid = _cocycle_condition_matrix(module, domain)
    if cond.rows == 0:
        n_vars = cond.cols
        gens = [
            tuple(1 if i == j else 0 for i in range(n_vars)) for j in range(n_vars)
        ]
        return gens, nonid
    return kernel_mod_lattice(cond, module.relations), nonid


def _coboundary_generators(module: GammaModule, nonid):
    rank = module.rank
    gens = []
    for j in range(rank):
        basis_vec = tuple(1 if i == j else 0 for i in range(rank))
        flat = []
        for g in nonid:
            flat.extend(
                vec_sub(module.action[g].apply(basis_vec), basis_vec)
            )
        gens.append(tuple(flat))
    gens.extend(_slot_relation_vectors(module, nonid))
    return gens


class H1Result:
    """First cohomology of a subgroup with coefficients in a module.

    ``group`` is the canonical finite abelian group; ``representatives``
    hold one cocycle per canonical generator, and :meth:`class_of` maps
    any cocycle on the same domain to its coordinate tuple (divisor
    ``divisors[i]`` reduces coordinate i).
    """

    def __init__(self, module, domain, quotient: QuotientData, nonid):
        self.module = module
        self.domain = domain
        self._quotient = quotient
        self._nonid = nonid
        self.group = quotient.group
        self.divisors = quotient.divisors
        if any(d == 0 for d in self.divisors):
            raise CohomologyError(
                "expected a finite cohomology group; coefficients invalid"
            )
        self.representatives = tuple(
            self._cocycle_from_flat(v) for v in quotient.generators
        )

    def _cocycle_from_flat(self, flat):
        rank = self.module.rank
        table_by_element = {self.module.group.identity: vec_zero(rank)}
        for i, g in enumerate(self._nonid):
            table_by_element[g] = tuple(flat[i * rank : (i + 1) * rank])
        table = tuple(table_by_element[g] for g in self.domain)
        return Cocycle1(module=self.module, domain=self.domain, table=table)

    def class_of(self, z: Cocycle1):
        if z.domain != self.domain:
            raise CohomologyError("cocycle domain does not match")
        table_by_element = dict(zip(z.domain, z.table))
        flat = _flatten(self.module, self.domain, table_by_element)
        return self._quotient.class_coord(flat)

    def zero(self) -> Cocycle1:
        return cocycle_zero(self.module, self.domain)

    def cocycle_from_coords(self, coords) -> Cocycle1:
        if len(coords) != len(self.representatives):
            raise CohomologyError("coordinate length mismatch")
        out = self.zero()
        for c, rep in zip(coords, self.representatives):
            if c:
                out = out + rep.scale(c)
        return out

    def all_classes(self):
        """Yield (coords, representative cocycle) for every class."""
        ranges = [range(d) for d in self.divisors]
        for coords in itertools.product(*ranges):
            yield coords, self.cocycle_from_coords(coords)

    def same_class(self, z1: Cocycle1, z2: Cocycle1) -> bool:
        return self.class_of(z1) == self.class_of(z2)

    def is_coboundary(self, z: Cocycle1) -> bool:
        return all(c == 0 for c in self.class_of(z))


def h1(group: FiniteGroup, module: GammaModule, subgroup=None) -> H1Result:
    """H^1 by exact linear algebra over the integers.

    Coefficients must be finite or free. The returned result computes
    classes of arbitrary cocycles on the same domain.

    >>> from depthzero.galois import FiniteGroup
    >>> from depthzero.gmodule import GammaModule
    >>> from depthzero.abelian import IntMatrix, Presentation
    >>> c2 = FiniteGroup.cyclic(2)
    >>> m = GammaModule(group=c2, presentation=Presentation.free(1),
    ...                 action=(IntMatrix.identity(1), IntMatrix.from_rows([[-1]])))
    >>> h1(c2, m).group
    FinAbGroup(free_rank=0, torsion=(2,))
    """
    if group.table != module.group.table:
        raise CohomologyError("module is not over the given group")
    _check_coefficients(module)
    domain = (
        tuple(sorted(subgroup)) if subgroup is not None else tuple(range(group.order))
    )
    lattice_gens, nonid = _cocycle_lattice(module, domain)
    n_vars = len(nonid) * module.rank
    cob = [v for v in _coboundary_generators(module, nonid) if any(v)]
    quotient = lattice_quotient(n_vars, lattice_gens, cob)
    return H1Result(module=module, domain=domain, quotient=quotient, nonid=nonid)


def h0(module: GammaModule, subgroup=None) -> QuotientData:
    """Invariants of the module under a subgroup (H^0)."""
    return invariants(module, subgroup)


# ---------------------------------------------------------------------------
# Exhaustive enumeration, used as an independent cross-check


@dataclass(frozen=True)
class EnumeratedH1:
    """H^1 computed by brute force over finite coefficients."""

    group: FinAbGroup
    cocycle_count: int
    coboundary_count: int
    class_keys: tuple  # sorted canonical class keys
    module: GammaModule = field(compare=False)
    domain: tuple = field(compare=False)
    _coboundaries: tuple = field(compare=False, repr=False)

    def class_key(self, z: Cocycle1):
        """Canonical key: lexicographically least table in z + coboundaries."""
        pres = self.module.presentation
        vecs = tuple(
            pres.element_from_key(pres.reduce(tuple(v))) for v in z.table
        )
        return min(
            tuple(pres.reduce(vec_add(a, b)) for a, b in zip(vecs, cb))
            for cb in self._coboundaries
        )


def h1_enumerated(
    group: FiniteGroup, module: GammaModule, subgroup=None, cap=200_000
) -> EnumeratedH1:
    """Enumerate every cocycle table literally; finite coefficients only.

    Independent of the linear engine: candidate tables are generated by
    propagating generator values and verified against the full identity.
    """
    if group.table != module.group.table:
        raise CohomologyError("module is not over the given group")
    under = module.underlying_group()
    if not under.is_finite():
        raise CohomologyError("enumeration needs finite coefficients")
    domain = (
        tuple(sorted(subgroup)) if subgroup is not None else tuple(range(group.order))
    )
    pos = {g: i for i, g in enumerate(domain)}
    e = group.identity
    gens = generating_set(group, domain)
    elements = [tuple(v) for v in module.elements()]
    if len(elements) ** max(len(gens), 1) > cap:
        raise CapExceeded(
            f"{len(elements)}^{len(gens)} candidate tables exceed the cap {cap}"
        )

    # Build each domain element as (previous element, generator) pairs.
    build_order = []
    known = {e}
    frontier = [e]
    parents = {}
    while frontier:
        g = frontier.pop(0)
        for s in gens:
            gs = group.mul(g, s)
            if gs not in known:
                known.add(gs)
                parents[gs] = (g, s)
                build_order.append(gs)
                frontier.append(gs)
    if known != set(domain):
        raise CohomologyError("generators do not span the domain")

    pres = module.presentation
    rank = module.rank

    def canon(v):
        return pres.element_from_key(pres.reduce(v))

    zero = canon(vec_zero(rank))
    cocycles = []
    for assignment in itertools.product(elements, repeat=len(gens)):
        values = {e: zero}
        for s, v in zip(gens, assignment):
            values[s] = canon(v)
        ok = True
        for g in build_order:
            prev, s = parents[g]
            if g in values:
                candidate = canon(
                    vec_add(values[prev], module.action[prev].apply(values[s]))
                )
                if candidate != values[g]:
                    ok = False
                    break
            else:
                values[g] = canon(
                    vec_add(values[prev], module.action[prev].apply(values[s]))
                )
        if not ok:
            continue
        for a in domain:
            act = module.action[a]
            va = values[a]
            for b in domain:
                if canon(vec_add(va, act.apply(values[b]))) != values[
                    group.mul(a, b)
                ]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            cocycles.append(tuple(values[g] for g in domain))

    coboundaries = sorted(
        {
            tuple(canon(vec_sub(module.action[g].apply(m), m)) for g in domain)
            for m in elements
        }
    )
    keyed = {}
    for table in cocycles:
        key = min(
            tuple(
                pres.reduce(vec_add(a, b)) for a, b in zip(table, cb)
            )
            for cb in coboundaries
        )
        keyed.setdefault(key, table)
    class_keys = sorted(keyed)

    # Read the group structure off the class addition table.
    index = {k: i for i, k in enumerate(class_keys)}

    def class_index_of_table(table):
        key = min(
            tuple(pres.reduce(vec_add(a, b)) for a, b in zip(table, cb))
            for cb in coboundaries
        )
        return index[key]

    if len(class_keys) == 1:
        structure = FinAbGroup.trivial()
    else:
        rows = []
        for k1 in class_keys:
            t1 = keyed[k1]
            row = []
            for k2 in class_keys:
                t2 = keyed[k2]
                summed = tuple(vec_add(a, b) for a, b in zip(t1, t2))
                row.append(class_index_of_table(summed))
            rows.append(row)
        structure = FiniteGroup.from_table(rows).abelian_invariants()

    return EnumeratedH1(
        group=structure,
        cocycle_count=len(cocycles),
        coboundary_count=len(coboundaries),
        class_keys=tuple(class_keys),
        module=module,
        domain=domain,
        _coboundaries=tuple(
            tuple(tuple(v) for v in cb) for cb in coboundaries
        ),
    )


# ---------------------------------------------------------------------------
# Closed form for cyclic groups


def h1_cyclic_closed_form(module: GammaModule, subgroup=None) -> FinAbGroup:
    """ker(norm)/im(generator - 1) for a cyclic (sub)group.

    The Tate-style closed form; used as an independent check of the
    linear engine on cyclic inputs.
    """
    group = module.group
    domain = (
        tuple(sorted(subgroup)) if subgroup is not None else tuple(range(group.order))
    )
    sub_elems = list(domain)
    gen = None
    for g in sub_elems:
        if group.generated_by([g]) == tuple(sorted(domain)):
            gen = g
            break
    if gen is None:
        raise CohomologyError("subgroup is not cyclic")
    rank = module.rank
    norm = IntMatrix.zeros(rank, rank)
    acc = group.identity
    for _ in range(len(sub_elems)):
        norm = norm + module.action[acc]
        acc = group.mul(acc, gen)
    kernel = kernel_mod_lattice(norm, module.relations)
    diff = module.action[gen] - IntMatrix.identity(rank)
    image_gens = [diff.column(j) for j in range(rank)]
    image_gens.extend(module.presentation.relation_vectors())
    return lattice_quotient(rank, kernel, image_gens).group


# ---------------------------------------------------------------------------
# H^2 with lattice coefficients and the torus-coefficient H^1


def h2_lattice(group: FiniteGroup, module: GammaModule, cap=12) -> FinAbGroup:
    """H^2(G, L) for a lattice L by normalized 2-cochain linear algebra."""
    if group.table != module.group.table:
        raise CohomologyError("module is not over the given group")
    if not module.is_free():
        raise CohomologyError("lattice coefficients required")
    if group.order > cap:
        raise CapExceeded(
            f"group order {group.order} exceeds the cap {cap}; pass a larger cap"
        )
    rank = module.rank
    e = group.identity
    nonid = tuple(g for g in group.elements() if g != e)
    pairs = [(a, b) for a in nonid for b in nonid]
    slot = {p: i for i, p in enumerate(pairs)}
    n_vars = len(pairs) * rank
    gens = generating_set(group, tuple(range(group.order)))

    rows = []
    ident = IntMatrix.identity(rank)
    for g in gens:
        act = module.action[g]
        for h in nonid:
            gh = group.mul(g, h)
            for k in nonid:
                hk = group.mul(h, k)
                block = [[0] * n_vars for _ in range(rank)]

                def add(pair, mat, sign, block=block):
                    if pair[0] == e or pair[1] == e:
                        return
                    base = slot[pair] * rank
                    for r in range(rank):
                        for c in range(rank):
                            block[r][base + c] += sign * mat.entry(r, c)

                add((h, k), act, 1)
                add((gh, k), ident, -1)
                add((g, hk), ident, 1)
                add((g, h), ident, -1)
                rows.extend(block)
    cond = (
        IntMatrix.from_rows(rows) if rows else IntMatrix.zeros(0, n_vars)
    )
    two_cocycles = integer_kernel(cond)

    cob = []
    for g in nonid:
        for j in range(rank):
            flat = [0] * n_vars
            for (a, b), s in slot.items():
                base = s * rank
                if b == g:
                    col = module.action[a].column(j)
                    for r in range(rank):
                        flat[base + r] += col[r]
                if group.mul(a, b) == g:
                    flat[base + j] -= 1
                if a == g:
                    flat[base + j] += 1
            cob.append(tuple(flat))
    return lattice_quotient(n_vars, two_cocycles, cob).group


def h1_torus_coeffs(group: FiniteGroup, module: GammaModule, cap=12) -> H1Result:
    """H^1 with coefficients in the dual torus of a lattice module.

    Computed two independent ways, which must agree: the integral
    H^2(G, L) route (divisible coefficients shift degree), and the
    finite-coefficient route H^1(G, L/m) modulo the image of the
    integral classes, with m = |G|. The returned result carries the
    finite-route representatives.
    """
    if not module.is_free():
        raise CohomologyError("lattice coefficients required")
    if group.order > cap:
        raise CapExceeded(
            f"group order {group.order} exceeds the cap {cap}; pass a larger cap"
        )
    via_h2 = h2_lattice(group, module, cap=cap)

    m = group.order
    domain = tuple(range(group.order))
    if m == 1:
        quotient = lattice_quotient(0, [], [])
        result = H1Result(
            module=module, domain=domain, quotient=quotient, nonid=()
        )
        if via_h2 != result.group:
            raise CohomologyError(
                f"independent routes disagree: {via_h2} vs {result.group}"
            )
        return result
    reduced = mod_m_reduction(module, m)
    finite_gens, nonid = _cocycle_lattice(reduced, domain)
    n_vars = len(nonid) * module.rank
    cob = _coboundary_generators(reduced, nonid)
    integral_gens, _ = _cocycle_lattice(module, domain)
    quotient = lattice_quotient(n_vars, finite_gens, cob + integral_gens)
    result = H1Result(module=reduced, domain=domain, quotient=quotient, nonid=nonid)
    if via_h2 != result.group:
        raise CohomologyError(
            f"independent routes disagree: H^2 route {via_h2}, "
            f"finite route {result.group}"
        )
    return result


# ---------------------------------------------------------------------------
# Restriction, corestriction, conjugation, averaging


def restriction(z: Cocycle1, subgroup) -> Cocycle1:
    """Restrict a cocycle to a smaller subgroup of its domain."""
    sub = tuple(sorted(subgroup))
    if not set(sub) <= set(z.domain):
        raise CohomologyError("restriction target is not inside the domain")
    table = tuple(z.value(g) for g in sub)
    return Cocycle1(module=z.module, domain=sub, table=table)


def map_coefficients(f: ModuleMap, z: Cocycle1) -> Cocycle1:
    """Push a cocycle forward along an equivariant coefficient map."""
    if f.source.group.table != z.module.group.table:
        raise CohomologyError("map and cocycle live over different groups")
    if f.source.presentation != z.module.presentation or f.source.action != z.module.action:
        raise CohomologyError("cocycle coefficients are not the map's source")
    table = tuple(f.matrix.apply(v) for v in z.table)
    return Cocycle1(module=f.target, domain=z.domain, table=table)


def _subgroup_coset_reps(group, ambient, subgroup):
    """Reps of ambient/subgroup, smallest-index, for ambient <= G."""
    seen = set()
    reps = []
    for g in ambient:
        if g in seen:
            continue
        reps.append(g)
        for h in subgroup:
            seen.add(group.mul(g, h))
    return reps


def corestriction(
    z: Cocycle1, into=None, method="double_coset"
) -> Cocycle1:
    """Transfer a cocycle from its domain up to a larger subgroup.

    ``method`` picks between the double-coset expression (always
    available) and the normalized expression (domain must be normal in
    the target). Both produce the same class; the test suite insists.
    """
    module = z.module
    group = module.group
    target = (
        tuple(sorted(into)) if into is not None else tuple(range(group.order))
    )
    if not set(z.domain) <= set(target):
        raise CohomologyError("target must contain the cocycle's domain")
    if not group.is_subgroup(target):
        raise CohomologyError(f"{target} is not a subgroup")
    sub = set(z.domain)
    reps = _subgroup_coset_reps(group, target, z.domain)

    table = []
    if method == "double_coset":
        for w in target:
            total = vec_zero(module.rank)
            for g1 in reps:
                inv_g1 = group.inv(g1)
                for g2 in reps:
                    arg = group.mul(group.mul(inv_g1, w), g2)
                    if arg in sub:
                        total = vec_add(
                            total, module.action[g1].apply(z.value(arg))
                        )
            table.append(total)
    elif method == "normalized":
        if not all(
            group.conj(t, h) in sub for t in target for h in sub
        ):
            raise CohomologyError(
                "normalized corestriction needs a normal domain"
            )
        rep_of = {}
        for r in reps:
            for h in z.domain:
                rep_of[group.mul(r, h)] = r
        for w in target:
            g4 = next(r for r in reps if group.mul(w, r) in sub)
            total = vec_zero(module.rank)
            for g3 in reps:
                t = rep_of[group.mul(g4, g3)]
                arg = group.mul(group.mul(group.inv(g3), w), t)
                total = vec_add(total, module.action[g3].apply(z.value(arg)))
            table.append(total)
    else:
        raise CohomologyError(f"unknown corestriction method {method!r}")
    return Cocycle1(module=module, domain=target, table=tuple(table))


def conjugate_cocycle(z: Cocycle1, gamma) -> Cocycle1:
    """gamma-conjugate: w maps to gamma.z(gamma^-1 w gamma).

    Requires gamma to normalize the domain.
    """
    group = z.module.group
    inv = group.inv(gamma)
    sub = set(z.domain)
    if any(group.conj(gamma, h) not in sub for h in sub):
        raise CohomologyError("element does not normalize the domain")
    act = z.module.action[gamma]
    table = tuple(
        act.apply(z.value(group.mul(group.mul(inv, w), gamma))) for w in z.domain
    )
    return Cocycle1(module=z.module, domain=z.domain, table=table)


def coset_average(z: Cocycle1, over) -> Cocycle1:
    """Average of conjugates over cosets of ``over`` in the full group.

    The cocycle's domain must be normal in the ambient group and sit
    inside ``over``. This is the map that lifts a norm on coinvariants
    to the cocycle level.
    """
    module = z.module
    group = module.group
    mid = tuple(sorted(over))
    if not group.is_subgroup(mid):
        raise CohomologyError(f"{mid} is not a subgroup")
    if not set(z.domain) <= set(mid):
        raise CohomologyError("domain must sit inside the averaging subgroup")
    if not group.is_normal(z.domain):
        raise CohomologyError("domain must be normal in the ambient group")
    reps = coset_reps(group, mid)
    table = []
    for w in z.domain:
        total = vec_zero(module.rank)
        for r in reps:
            arg = group.mul(group.mul(group.inv(r), w), r)
            total = vec_add(total, module.action[r].apply(z.value(arg)))
        table.append(total)
    return Cocycle1(module=module, domain=z.domain, table=tuple(table))


# ---------------------------------------------------------------------------
# Connecting homomorphism in degree zero


@dataclass(frozen=True)
class Delta0:
    """delta: H^0(G, C) -> H^1(G, A) for a short exact sequence A-B-C."""

    ses: ShortExactSeq

    def of(self, c_vector) -> Cocycle1:
        left = self.ses.left
        right = self.ses.right
        b_mod = left.target
        a_mod = left.source
        c_mod = right.target
        group = b_mod.group
        c_vector = tuple(c_vector)
        for g in range(group.order):
            moved = vec_sub(c_mod.action[g].apply(c_vector), c_vector)
            if not c_mod.presentation.contains_in_lattice(moved):
                raise CohomologyError(
                    f"{c_vector} is not invariant (moved by element {g})"
                )
        b_vec = _solve_mod_lattice(
            right.matrix, c_mod.presentation.relations, c_vector
        )
        if b_vec is None:
            raise CohomologyError(f"{tuple(c_vector)} has no preimage")
        table = []
        for g in range(group.order):
            diff = vec_sub(b_mod.action[g].apply(b_vec), b_vec)
            a_vec = _solve_mod_lattice(
                left.matrix, b_mod.presentation.relations, diff
            )
            if a_vec is None:
                raise CohomologyError(
                    "lift difference escapes the image; sequence not exact?"
                )
            table.append(a_vec)
        return Cocycle1(
            module=a_mod, domain=tuple(range(group.order)), table=tuple(table)
        )


def _solve_mod_lattice(matrix: IntMatrix, relations: IntMatrix, target):
    """Solve matrix @ x = target modulo the row span of ``relations``."""
    if relations.rows == 0:
        sol = solve_integer(matrix, target)
        return None if sol is None else sol[: matrix.cols]
    cols = [matrix.column(j) for j in range(matrix.cols)]
    cols.extend(
        relations.row(i) for i in range(relations.rows)
    )
    wide = IntMatrix.from_rows(cols).transpose()
    sol = solve_integer(wide, target)
    return None if sol is None else sol[: matrix.cols]


def connecting_delta0(ses: ShortExactSeq) -> Delta0:
    """The lifting-and-differencing connecting map; input must be exact."""
    return Delta0(ses=ses)


# ---------------------------------------------------------------------------
# Transfer compatibility report


@dataclass(frozen=True)
class TransferReport:
    """Outcome of the transfer-vs-averaging compatibility check."""

    cases: int
    counterexamples: tuple

    @property
    def ok(self):
        return not self.counterexamples

    def __str__(self):
        if self.ok:
            return f"transfer compatibility holds on all {self.cases} classes"
        lines = [
            f"transfer compatibility FAILED on "
            f"{len(self.counterexamples)} of {self.cases} classes"
        ]
        for coords, table, lhs, rhs in self.counterexamples:
            lines.append(
                f"  class {coords}: cocycle table {table} "
                f"averaged-then-transferred {lhs} differs from "
                f"transferred-then-restricted {rhs}"
            )
        return "\n".join(lines)


def verify_transfer_compatibility(
    group: FiniteGroup, he, hk, module: GammaModule
) -> TransferReport:
    """Check cor after averaging equals restriction after cor, classwise.

    For every class z on the inner subgroup the two routes to the middle
    subgroup's cohomology must agree. Counterexample tables are reported
    verbatim.
    """
    he = tuple(sorted(he))
    hk = tuple(sorted(hk))
    if not group.is_subgroup(he) or not group.is_subgroup(hk):
        raise CohomologyError("both handles must be subgroups")
    if not set(hk) <= set(he):
        raise CohomologyError("inner subgroup must sit inside the middle one")
    if not group.is_normal(hk):
        raise CohomologyError("inner subgroup must be normal")
    under = module.underlying_group()
    if not under.is_finite():
        raise CohomologyError("finite coefficients required")

    inner = h1(group, module, subgroup=hk)
    middle = h1(group, module, subgroup=he)
    counterexamples = []
    cases = 0
    for coords, z in inner.all_classes():
        cases += 1
        averaged = coset_average(z, he)
        lhs = corestriction(averaged, into=he)
        rhs = restriction(corestriction(z, into=None), he)
        lhs_class = middle.class_of(lhs)
        rhs_class = middle.class_of(rhs)
        if lhs_class != rhs_class:
            counterexamples.append((coords, z.table, lhs_class, rhs_class))
    return TransferReport(cases=cases, counterexamples=tuple(counterexamples))
