"""JSON wire format: schemas, readers and canonical writers."""

from __future__ import annotations

import json

import jsonschema

from .abelian import AbelianGroup
from .errors import InputError, SchemaViolation
from .groupoid import build_groupoid, make_map
from .groups import build_group
from .site import build_site, make_presheaf
from .twogroupoid import build_two_groupoid

_STR = {"type": "string"}
_STRS = {"type": "array", "items": _STR}
_TRIPLES = {"type": "array", "items": {"type": "array", "items": _STR,
                                       "minItems": 3, "maxItems": 3}}
_CELLS = {"type": "array", "items": {
    "type": "object", "required": ["id", "src", "tgt"], "additionalProperties": False,
    "properties": {"id": _STR, "src": _STR, "tgt": _STR}}}
_LABEL_MAP = {"type": "object", "additionalProperties": _STR}

GROUP = {
    "type": "object", "required": ["elements", "table"], "additionalProperties": False,
    "properties": {"elements": _STRS, "name": _STR,
                   "table": {"type": "array",
                             "items": {"type": "array", "items": {"type": "integer"}}}},
}
GROUPOID = {
    "type": "object", "required": ["objects", "morphisms", "compose", "inverses"],
    "additionalProperties": False,
    "properties": {"objects": _STRS, "morphisms": _CELLS, "compose": _TRIPLES,
                   "inverses": _LABEL_MAP, "name": _STR},
}
TWO_GROUPOID = {
    "type": "object",
    "required": ["objects", "morphisms", "compose", "inverses", "twoCells", "vcompose",
                 "hcompose"],
    "additionalProperties": False,
    "properties": dict(GROUPOID["properties"], twoCells=_CELLS, vcompose=_TRIPLES,
                       hcompose=_TRIPLES),
}
GROUPOID_MAP = {
    "type": "object", "required": ["source", "target", "objects", "morphisms"],
    "additionalProperties": False,
    "properties": {"source": GROUPOID, "target": GROUPOID, "objects": _LABEL_MAP,
                   "morphisms": _LABEL_MAP},
}
SITE = {
    "type": "object", "required": ["objects", "arrows", "compose", "covers"],
    "additionalProperties": False,
    "properties": {
        "objects": _STRS, "arrows": _CELLS, "compose": _TRIPLES, "name": _STR,
        "covers": {"type": "array", "items": {
            "type": "object", "required": ["target", "family"], "additionalProperties": False,
            "properties": {"target": _STR, "family": _STRS}}}},
}
PRESHEAF = {
    "type": "object", "required": ["kind", "values", "restrictions"],
    "additionalProperties": False,
    "properties": {"kind": {"enum": ["set", "group", "groupoid"]},
                   "values": {"type": "object"}, "restrictions": {"type": "object"}},
}
ABELIAN = {
    "type": "object", "required": ["abelian"], "additionalProperties": False,
    "properties": {"abelian": {"type": "array",
                               "items": {"type": "integer", "minimum": 0}}},
}
COEFFICIENTS = {"oneOf": [GROUP, ABELIAN]}


def validate(data, schema, what="input"):
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as err:
        path = "/" + "/".join(str(p) for p in err.absolute_path)
        raise SchemaViolation(f"{what} does not match its schema at {path}: {err.message}",
                              witness=path) from None


def dumps(data):
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror}", witness=str(path)) from None
    except json.JSONDecodeError as err:
        raise SchemaViolation(f"{path} is not valid JSON: {err.msg} at line {err.lineno}",
                              witness=f"line {err.lineno}") from None


# -- groups -----------------------------------------------------------------------

def group_to_json(g):
    out = {"elements": list(g.elements), "table": [list(r) for r in g.table]}
    if g.name:
        out["name"] = g.name
    return out


def group_from_json(data):
    validate(data, GROUP, "group")
    return build_group(data["elements"], data["table"], data.get("name", ""))


# -- groupoids --------------------------------------------------------------------

def groupoid_to_json(g):
    m = g.morphisms
    out = {
        "objects": list(g.objects),
        "morphisms": [{"id": m[i], "src": g.objects[g.src[i]], "tgt": g.objects[g.tgt[i]]}
                      for i in range(len(m))],
        "compose": [[m[a], m[b], m[c]] for (a, b), c in sorted(g.comp.items())],
        "inverses": {m[i]: m[j] for i, j in enumerate(g.inverses)},
    }
    if g.name:
        out["name"] = g.name
    return out


def groupoid_from_json(data):
    validate(data, GROUPOID, "groupoid")
    return _groupoid(data)


def _groupoid(data):
    return build_groupoid(data["objects"],
                          [(c["id"], c["src"], c["tgt"]) for c in data["morphisms"]],
                          data["compose"], data["inverses"], name=data.get("name", ""))


def groupoid_map_to_json(f):
    return {"source": groupoid_to_json(f.source), "target": groupoid_to_json(f.target),
            "objects": {f.source.objects[x]: f.target.objects[y] for x, y in enumerate(f.obj)},
            "morphisms": {f.source.morphisms[x]: f.target.morphisms[y]
                          for x, y in enumerate(f.mor)}}


def groupoid_map_from_json(data):
    validate(data, GROUPOID_MAP, "groupoid map")
    a, b = _groupoid(data["source"]), _groupoid(data["target"])
    return _labelled_map(a, b, data["objects"], data["morphisms"])


def _labelled_map(a, b, objs, mors):
    opos = {o: i for i, o in enumerate(b.objects)}
    mpos = {m: i for i, m in enumerate(b.morphisms)}
    try:
        obj = [opos[objs[o]] for o in a.objects]
        mor = [mpos[mors[m]] for m in a.morphisms]
    except KeyError as err:
        raise InputError(f"map is missing or misnames {err.args[0]!r}",
                         witness=err.args[0]) from None
    return make_map(a, b, obj, mor)


# -- 2-groupoids ------------------------------------------------------------------

def two_groupoid_to_json(t):
    one, two = t.one, t.two
    out = {
        "objects": list(t.zero),
        "morphisms": [{"id": one[i], "src": t.zero[t.one_src[i]], "tgt": t.zero[t.one_tgt[i]]}
                      for i in range(len(one))],
        "compose": [[one[a], one[b], one[c]] for (a, b), c in sorted(t.hcomp1.items())],
        "inverses": {one[i]: one[j] for i, j in enumerate(t.one_groupoid.inverses)},
        "twoCells": [{"id": two[i], "src": one[t.two_src[i]], "tgt": one[t.two_tgt[i]]}
                     for i in range(len(two))],
        "vcompose": [[two[a], two[b], two[c]] for (a, b), c in sorted(t.vcomp.items())],
        "hcompose": [[two[a], two[b], two[c]] for (a, b), c in sorted(t.hcomp2.items())],
    }
    if t.name:
        out["name"] = t.name
    return out


def two_groupoid_from_json(data):
    validate(data, TWO_GROUPOID, "2-groupoid")
    t = build_two_groupoid(data["objects"],
                           [(c["id"], c["src"], c["tgt"]) for c in data["morphisms"]],
                           data["compose"],
                           [(c["id"], c["src"], c["tgt"]) for c in data["twoCells"]],
                           data["vcompose"], data["hcompose"], name=data.get("name", ""))
    inv = t.one_groupoid.inverses
    given = data["inverses"]
    for i, j in enumerate(inv):
        if given.get(t.one[i], t.one[j]) != t.one[j]:
            raise InputError(f"declared inverse of {t.one[i]!r} is wrong", witness=t.one[i])
    return t


# -- sites and presheaves ---------------------------------------------------------

def site_to_json(s):
    ident = set(s.identities)
    a = s.arrows
    out = {
        "objects": list(s.objects),
        "arrows": [{"id": a[i], "src": s.objects[s.src[i]], "tgt": s.objects[s.tgt[i]]}
                   for i in range(len(a)) if i not in ident],
        "compose": [[a[g], a[f], a[h]] for (g, f), h in sorted(s.comp.items())
                    if g not in ident and f not in ident],
        "covers": [{"target": s.objects[t], "family": [a[x] for x in fam]}
                   for t in range(len(s.objects)) for fam in s.covers[t]],
    }
    if s.name:
        out["name"] = s.name
    return out


def site_from_json(data):
    validate(data, SITE, "site")
    return build_site(data["objects"], [(c["id"], c["src"], c["tgt"]) for c in data["arrows"]],
                      data["compose"], [(c["target"], c["family"]) for c in data["covers"]],
                      name=data.get("name", ""))


def presheaf_to_json(p):
    s = p.site
    ident = set(s.identities)
    values, restrictions = {}, {}
    for o, v in enumerate(p.values):
        if p.kind == "set":
            values[s.objects[o]] = list(v)
        elif p.kind == "group":
            values[s.objects[o]] = group_to_json(v)
        else:
            values[s.objects[o]] = groupoid_to_json(v)
    for a, r in enumerate(p.restrict):
        if a in ident:
            continue
        src, tgt = p.values[s.src[a]], p.values[s.tgt[a]]
        if p.kind == "set":
            restrictions[s.arrows[a]] = {tgt[x]: src[y] for x, y in enumerate(r)}
        elif p.kind == "group":
            restrictions[s.arrows[a]] = {tgt.elements[x]: src.elements[y]
                                         for x, y in enumerate(r)}
        else:
            restrictions[s.arrows[a]] = {
                "objects": {tgt.objects[x]: src.objects[y] for x, y in enumerate(r.obj)},
                "morphisms": {tgt.morphisms[x]: src.morphisms[y] for x, y in enumerate(r.mor)}}
    return {"kind": p.kind, "values": values, "restrictions": restrictions}


def presheaf_from_json(site, data):
    validate(data, PRESHEAF, "presheaf")
    kind = data["kind"]
    vals = data["values"]
    missing = [o for o in site.objects if o not in vals]
    if missing:
        raise SchemaViolation(f"presheaf has no value at {missing[0]!r}",
                              witness=f"/values/{missing[0]}")
    values = []
    for o in site.objects:
        v = vals[o]
        if kind == "set":
            validate(v, _STRS, f"value at {o}")
            if len(set(v)) != len(v):
                raise InputError(f"value at {o!r} repeats a label", witness=o)
            values.append(tuple(v))
        elif kind == "group":
            values.append(group_from_json(v))
        else:
            values.append(groupoid_from_json(v))
    restrict = []
    rs = data["restrictions"]
    for a, label in enumerate(site.arrows):
        s, t = site.src[a], site.tgt[a]
        if a in site.identities:
            restrict.append(_identity_restriction(kind, values[s]))
            continue
        if label not in rs:
            raise SchemaViolation(f"presheaf has no restriction along {label!r}",
                                  witness=f"/restrictions/{label}")
        r = rs[label]
        try:
            if kind == "set":
                pos = {x: i for i, x in enumerate(values[s])}
                restrict.append(tuple(pos[r[x]] for x in values[t]))
            elif kind == "group":
                pos = {x: i for i, x in enumerate(values[s].elements)}
                restrict.append(tuple(pos[r[x]] for x in values[t].elements))
            else:
                validate(r, {"type": "object", "required": ["objects", "morphisms"],
                             "properties": {"objects": _LABEL_MAP, "morphisms": _LABEL_MAP}},
                         f"restriction along {label}")
                restrict.append(_labelled_map(values[t], values[s], r["objects"],
                                              r["morphisms"]))
        except KeyError as err:
            raise InputError(f"restriction along {label!r} misnames {err.args[0]!r}",
                             witness=[label, err.args[0]]) from None
    return make_presheaf(site, kind, values, restrict)


def _identity_restriction(kind, value):
    from .groupoid import identity_map
    if kind == "groupoid":
        return identity_map(value)
    n = len(value)
    return tuple(range(n))


# -- coefficients -----------------------------------------------------------------

def coefficients_from_json(data):
    """Either a finite group table or ``{"abelian": [orders]}`` with 0 for Z."""
    validate(data, COEFFICIENTS, "coefficients")
    if "abelian" in data:
        orders = [o for o in data["abelian"] if o != 1]
        return AbelianGroup(tuple(orders))
    return group_from_json(data)


def abelian_to_json(a):
    return {"abelian": list(a.orders)}

