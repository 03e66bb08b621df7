"""Parsing and validation of structured input documents.

One JSON document describes everything a command can consume: a finite
group by its multiplication table, named subgroups, a local Galois
datum, a module with per-element action matrices, a root datum, an
archimedean character datum, and free-form task parameters. Parsing
either returns a fully validated :class:`InputDocument` or raises
:class:`DocumentError` carrying every schema error found, each named by
the violated invariant and located by a dotted path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from depthzero.abelian import IntMatrix, Presentation
from depthzero.galois import (
    FiniteGroup,
    GroupError,
    LocalGaloisDatum,
    validate_local_datum,
)
from depthzero.gmodule import GammaModule, ModuleError
from depthzero.langlands import (
    ArchimedeanCharDatum,
    ArchimedeanError,
    RootDatumError,
    RootDatumGamma,
)

_SECTIONS = (
    "group",
    "subgroups",
    "local_datum",
    "module",
    "root_datum",
    "archimedean",
    "task",
)

# Validator check names whose CLI-facing spelling is not just the
# hyphenated form.
_CHECK_NAMES = {"wild_order_p_power": "wild-inertia-order"}


def invariant_name(check: str) -> str:
    """CLI-facing name of a local-datum validation check."""
    return _CHECK_NAMES.get(check, check.replace("_", "-"))


@dataclass(frozen=True)
class SchemaError:
    location: str  # dotted path of the offending section or field
    invariant: str  # name of the violated invariant
    detail: str

    def __str__(self):
        return f"{self.location}: [{self.invariant}] {self.detail}"


class DocumentError(ValueError):
    """Parsing failed; carries every schema error that was collected."""

    def __init__(self, errors):
        self.errors = tuple(errors)
        super().__init__("; ".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class InputDocument:
    group: object = None
    subgroups: dict = field(default_factory=dict)
    local_datum: object = None
    module: object = None
    root_datum: object = None
    archimedean: object = None
    task: dict = field(default_factory=dict)

    def require(self, *names):
        """Raise unless every named section was present in the document."""
        for name in names:
            value = getattr(self, name)
            if value is None or (name == "subgroups" and not value):
                raise DocumentError(
                    [
                        SchemaError(
                            name,
                            "missing-section",
                            f"this command needs the '{name}' section",
                        )
                    ]
                )
        return self

    def echo(self) -> dict:
        """Canonical summary of the parsed content, for the report.

        Built from the validated objects, never from the raw text, so
        two documents that parse to the same thing (for example with
        sections in a different order) echo identically.
        """
        out = {}
        if self.group is not None:
            out["group"] = {
                "order": self.group.order,
                "identity": self.group.identity,
            }
        if self.subgroups:
            out["subgroups"] = {
                name: list(elems) for name, elems in sorted(self.subgroups.items())
            }
        if self.local_datum is not None:
            d = self.local_datum
            out["local_datum"] = {
                "inertia": list(d.inertia),
                "wild": list(d.wild),
                "frobenius": d.frob,
                "p": d.p,
                "q": d.q,
            }
        if self.module is not None:
            out["module"] = {
                "rank": self.module.rank,
                "relations": self.module.presentation.relation_vectors(),
            }
        if self.root_datum is not None:
            out["root_datum"] = {
                "rank": self.root_datum.x_star.rank,
                "roots": len(self.root_datum.roots),
            }
        if self.archimedean is not None:
            out["archimedean"] = {"rank": self.archimedean.rank}
        if self.task:
            out["task"] = dict(sorted(self.task.items()))
        return out


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _get_int(raw, key, location, errors, required=True):
    if key not in raw:
        if required:
            errors.append(
                SchemaError(f"{location}.{key}", "missing-field", "field is required")
            )
        return None
    value = raw[key]
    if not _is_int(value):
        errors.append(
            SchemaError(
                f"{location}.{key}",
                "integer-field",
                f"expected an integer, got {value!r}",
            )
        )
        return None
    return value


def _int_matrix(value, location, errors):
    if (
        not isinstance(value, list)
        or not value
        or any(
            not isinstance(row, list) or any(not _is_int(x) for x in row)
            for row in value
        )
    ):
        errors.append(
            SchemaError(
                location, "matrix-shape", "expected a non-empty array of integer rows"
            )
        )
        return None
    try:
        return IntMatrix.from_rows(value)
    except ValueError as exc:
        errors.append(SchemaError(location, "matrix-shape", str(exc)))
        return None


def _index_list(value, location, errors, order):
    if not isinstance(value, list) or any(not _is_int(x) for x in value):
        errors.append(
            SchemaError(location, "index-list", "expected an array of element indices")
        )
        return None
    bad = [x for x in value if not 0 <= x < order]
    if bad:
        errors.append(
            SchemaError(
                location, "element-range", f"indices {bad} outside 0..{order - 1}"
            )
        )
        return None
    return tuple(sorted(set(value)))


def _parse_group(raw, errors):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        errors.append(SchemaError("group", "section-shape", "must be an object"))
        return None
    table = raw.get("table")
    if table is None:
        errors.append(
            SchemaError("group.table", "missing-field", "field is required")
        )
        return None
    try:
        group = FiniteGroup.from_table(table, name=str(raw.get("name", "G")))
    except (GroupError, TypeError) as exc:
        msg = str(exc)
        if "associativity" in msg:
            invariant = "group-associativity"
        elif "identity" in msg or "inverse" in msg:
            invariant = "group-axioms"
        else:
            invariant = "group-table"
        errors.append(SchemaError("group.table", invariant, msg))
        return None
    declared_order = _get_int(raw, "order", "group", errors, required=False)
    if declared_order is not None and declared_order != group.order:
        errors.append(
            SchemaError(
                "group.order",
                "group-order",
                f"declared {declared_order}, table has {group.order} elements",
            )
        )
    declared_identity = _get_int(raw, "identity", "group", errors, required=False)
    if declared_identity is not None and declared_identity != group.identity:
        errors.append(
            SchemaError(
                "group.identity",
                "group-identity",
                f"declared {declared_identity}, table identity is {group.identity}",
            )
        )
    return group


def _parse_subgroups(raw, group, errors):
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        errors.append(SchemaError("subgroups", "section-shape", "must be an object"))
        return {}
    if group is None:
        errors.append(
            SchemaError(
                "subgroups", "missing-group", "subgroups need a group section"
            )
        )
        return {}
    out = {}
    for name, value in raw.items():
        location = f"subgroups.{name}"
        elems = _index_list(value, location, errors, group.order)
        if elems is None:
            continue
        if not group.is_subgroup(elems):
            errors.append(
                SchemaError(
                    location,
                    "subgroup-closed",
                    f"{elems} is not closed under multiplication and inverse",
                )
            )
            continue
        out[str(name)] = elems
    return out


def _parse_local_datum(raw, group, errors):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        errors.append(SchemaError("local_datum", "section-shape", "must be an object"))
        return None
    if group is None:
        errors.append(
            SchemaError(
                "local_datum", "missing-group", "a local datum needs a group section"
            )
        )
        return None
    inertia = _index_list(
        raw.get("inertia", []), "local_datum.inertia", errors, group.order
    )
    wild = _index_list(raw.get("wild", []), "local_datum.wild", errors, group.order)
    frob = _get_int(raw, "frobenius", "local_datum", errors)
    p = _get_int(raw, "p", "local_datum", errors)
    q = _get_int(raw, "q", "local_datum", errors)
    if None in (inertia, wild, frob, p, q):
        return None
    datum = LocalGaloisDatum(
        gamma=group, inertia=inertia, wild=wild, frob=frob, p=p, q=q
    )
    if not 0 <= frob < group.order:
        # The full validator indexes into the unramified quotient by
        # this element, so an out-of-range value must stop here.
        errors.append(
            SchemaError(
                "local_datum.frobenius",
                "frob-in-range",
                f"index {frob} outside 0..{group.order - 1}",
            )
        )
        return None
    report = validate_local_datum(datum)
    ok = True
    for check, passed, detail in report.checks:
        if not passed:
            ok = False
            errors.append(
                SchemaError("local_datum", invariant_name(check), detail)
            )
    return datum if ok else None


def _parse_module(raw, group, errors, location="module"):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        errors.append(SchemaError(location, "section-shape", "must be an object"))
        return None
    if group is None:
        errors.append(
            SchemaError(location, "missing-group", "a module needs a group section")
        )
        return None
    source = raw.get("presentation") if isinstance(raw.get("presentation"), dict) else raw
    rank = _get_int(source, "rank", location, errors)
    if rank is None or rank < 0:
        if rank is not None:
            errors.append(
                SchemaError(f"{location}.rank", "rank-nonnegative", f"rank {rank}")
            )
        return None
    relations = source.get("relations", [])
    if not isinstance(relations, list):
        errors.append(
            SchemaError(
                f"{location}.relations", "matrix-shape", "expected an array of rows"
            )
        )
        return None
    try:
        presentation = Presentation.from_relation_rows(
            rank, [list(r) for r in relations]
        )
    except (ValueError, TypeError) as exc:
        errors.append(SchemaError(f"{location}.relations", "matrix-shape", str(exc)))
        return None
    action = raw.get("action")
    if not isinstance(action, list) or len(action) != group.order:
        errors.append(
            SchemaError(
                f"{location}.action",
                "action-shape",
                f"need one matrix per group element ({group.order})",
            )
        )
        return None
    mats = []
    for g, entry in enumerate(action):
        mat = _int_matrix(entry, f"{location}.action[{g}]", errors)
        if mat is None:
            return None
        mats.append(mat)
    try:
        return GammaModule(
            group=group,
            presentation=presentation,
            action=tuple(mats),
            name=str(raw.get("name", "M")),
        )
    except ModuleError as exc:
        errors.append(SchemaError(f"{location}.action", "module-action", str(exc)))
        return None


def _parse_root_datum(raw, group, errors):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        errors.append(SchemaError("root_datum", "section-shape", "must be an object"))
        return None
    x_star = _parse_module(
        raw.get("x_star"), group, errors, location="root_datum.x_star"
    )
    x_costar = _parse_module(
        raw.get("x_costar"), group, errors, location="root_datum.x_costar"
    )
    pairing = _int_matrix(raw.get("pairing"), "root_datum.pairing", errors)
    roots = raw.get("roots")
    coroots = raw.get("coroots")

    def vectors(value, key):
        if not isinstance(value, list) or any(
            not isinstance(v, list) or any(not _is_int(x) for x in v) for v in value
        ):
            errors.append(
                SchemaError(
                    f"root_datum.{key}",
                    "vector-list",
                    "expected an array of integer vectors",
                )
            )
            return None
        return tuple(tuple(v) for v in value)

    roots = vectors(roots, "roots")
    coroots = vectors(coroots, "coroots")
    if None in (x_star, x_costar, pairing, roots, coroots):
        return None
    try:
        return RootDatumGamma(
            x_star=x_star,
            x_costar=x_costar,
            roots=roots,
            coroots=coroots,
            pairing=pairing,
        )
    except RootDatumError as exc:
        errors.append(SchemaError("root_datum", "root-datum", str(exc)))
        return None


def _complex_entry(value, location, errors):
    if _is_int(value) or isinstance(value, float):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(_is_int(x) or isinstance(x, float) for x in value)
    ):
        return complex(value[0], value[1])
    errors.append(
        SchemaError(
            location,
            "complex-entry",
            f"expected a number or a [real, imaginary] pair, got {value!r}",
        )
    )
    return None


def _complex_vector(raw, key, errors, location="archimedean"):
    value = raw.get(key)
    if not isinstance(value, list):
        errors.append(
            SchemaError(f"{location}.{key}", "vector-list", "expected an array")
        )
        return None
    out = []
    for i, entry in enumerate(value):
        z = _complex_entry(entry, f"{location}.{key}[{i}]", errors)
        if z is None:
            return None
        out.append(z)
    return tuple(out)


def _parse_archimedean(raw, errors):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        errors.append(
            SchemaError("archimedean", "section-shape", "must be an object")
        )
        return None
    sigma = _int_matrix(raw.get("sigma"), "archimedean.sigma", errors)
    mu = _complex_vector(raw, "mu", errors)
    nu = _complex_vector(raw, "nu", errors)
    h = _complex_vector(raw, "h", errors) if "h" in raw else ()
    if None in (sigma, mu, nu, h):
        return None
    if h == ():
        h = tuple(0j for _ in mu)
    try:
        return ArchimedeanCharDatum(sigma=sigma, mu=mu, nu=nu, h=h)
    except ArchimedeanError as exc:
        errors.append(SchemaError("archimedean", "archimedean-datum", str(exc)))
        return None


def parse_input(text: str) -> InputDocument:
    """Parse and validate one document; raise DocumentError on any problem."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError([SchemaError("document", "json-syntax", str(exc))])
    if not isinstance(raw, dict):
        raise DocumentError(
            [SchemaError("document", "document-shape", "top level must be an object")]
        )
    errors = []
    for key in raw:
        if key not in _SECTIONS:
            errors.append(
                SchemaError(
                    str(key),
                    "unknown-section",
                    f"known sections: {', '.join(_SECTIONS)}",
                )
            )
    group = _parse_group(raw.get("group"), errors)
    if "group" in raw and group is None:
        # The group failed for its own reasons; suppress the cascade of
        # "needs a group" errors the dependent sections would add.
        subgroups, local_datum, module, root_datum = {}, None, None, None
    else:
        subgroups = _parse_subgroups(raw.get("subgroups"), group, errors)
        local_datum = _parse_local_datum(raw.get("local_datum"), group, errors)
        module = _parse_module(raw.get("module"), group, errors)
        root_datum = _parse_root_datum(raw.get("root_datum"), group, errors)
    archimedean = _parse_archimedean(raw.get("archimedean"), errors)
    task = raw.get("task", {})
    if not isinstance(task, dict):
        errors.append(SchemaError("task", "section-shape", "must be an object"))
        task = {}
    if errors:
        raise DocumentError(errors)
    return InputDocument(
        group=group,
        subgroups=subgroups,
        local_datum=local_datum,
        module=module,
        root_datum=root_datum,
        archimedean=archimedean,
        task=task,
    )
