"""Command-line front end: ``cocat <command> [flags]``.

Reports are canonical JSON on stdout.  Exit codes: 0 all checks pass,
1 a check failed, 2 malformed input, 3 input violating an algebraic law.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import serialize as ser
from .errors import AlgebraicError, CocatError, InputError


@dataclass
class RunManifest:
    command: str
    inputs: dict = field(default_factory=dict)       # flag -> sha256 of the file bytes
    parameters: dict = field(default_factory=dict)
    output_digest: str = ""
    wall_seconds: float = 0.0

    def to_json(self):
        d = asdict(self)
        return {"command": d["command"], "inputs": d["inputs"], "parameters": d["parameters"],
                "outputDigest": d["output_digest"], "wallSeconds": round(d["wall_seconds"], 3)}


def sha256_bytes(b):
    return hashlib.sha256(b).hexdigest()


class _Inputs:
    """Loads input files and remembers their digests for the manifest."""

    def __init__(self):
        self.digests = {}

    def load(self, flag, path):
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as err:
            raise InputError(f"cannot read {path}: {err.strerror}", witness=str(path)) from None
        self.digests[flag] = sha256_bytes(raw)
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            raise ser.SchemaViolation(f"{path} is not valid UTF-8 JSON: {err}",
                                      witness=f"{flag}:/") from None


# -- commands ------------------------------------------------------------------

def cmd_classify_extensions(args, inp):
    from .extension import compare_with_oracle
    h = ser.group_from_json(inp.load("h", args.h))
    k = ser.group_from_json(inp.load("k", args.k))
    r = compare_with_oracle(h, k, args.bound)
    report = {"classes": r.classes, "middles": list(r.middles), "oracle": r.oracle,
              "oracleAgrees": r.matched}
    return report, r.matched


def _torsor_json(a):
    site = a.site
    return {"sections": ser.presheaf_to_json(a.space)["values"],
            "action": {site.objects[o]: [list(row) for row in t] for o, t in enumerate(a.act)}}


def cmd_torsors(args, inp):
    from .torsor import torsor_report
    site = ser.site_from_json(inp.load("site", args.site))
    g = ser.group_from_json(inp.load("group", args.group))
    r = torsor_report(site, g)
    ok = r.agree and r.roundtrip_torsors and r.roundtrip_cocycles
    report = {"classes": r.torsors, "representatives": [_torsor_json(a) for a in r.representatives],
              "cechH1": r.cech, "cocycleComponents": r.cocycle_components,
              "roundTrips": r.roundtrip_torsors and r.roundtrip_cocycles, "agree": r.agree}
    return report, ok


def cmd_cech(args, inp):
    from .cech import cech_report
    site = ser.site_from_json(inp.load("site", args.site))
    coeff = ser.coefficients_from_json(inp.load("coeff", args.coeff))
    return cech_report(site, coeff, args.degree), True


def cmd_cocycle_pi0(args, inp):
    from .cocycle import check_bijection
    x = ser.groupoid_from_json(inp.load("x", args.x))
    y = ser.groupoid_from_json(inp.load("y", args.y))
    r = check_bijection(x, y, args.bound)
    report = {"classes": r.classes, "components": r.components, "bijection": r.bijection,
              "phiConstant": r.phi_constant, "psiSection": r.psi_section,
              "witnesses": r.witnesses}
    return report, r.bijection


def cmd_weq(args, inp):
    from .groupoid import is_weak_equivalence
    f = ser.groupoid_map_from_json(inp.load("map", args.map))
    c = is_weak_equivalence(f)
    report = {"weq": c.weq, "pi0": list(c.pi0_map)}
    if not c.weq:
        report["failure"] = c.failure
        report["witness"] = _plain(c.witness)
    return report, c.weq


def cmd_accept(args, inp):
    from .acceptance import AcceptanceConfig, run_all
    results = run_all(AcceptanceConfig())
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {"criteria": [{"index": r.index, "name": r.name, "passed": r.passed,
                            "details": r.details} for r in results],
              "passed": all(r.passed for r in results)}
    return report, report["passed"]


COMMANDS = {
    "classify-extensions": cmd_classify_extensions,
    "torsors": cmd_torsors,
    "cech": cmd_cech,
    "cocycle-pi0": cmd_cocycle_pi0,
    "weq": cmd_weq,
    "accept": cmd_accept,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--manifest", metavar="PATH", help="write a run manifest here")
    p = argparse.ArgumentParser(prog="cocat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("classify-extensions", parents=[common])
    s.add_argument("--h", required=True)
    s.add_argument("--k", required=True)
    s.add_argument("--bound", type=int)
    s = sub.add_parser("torsors", parents=[common])
    s.add_argument("--site", required=True)
    s.add_argument("--group", required=True)
    s = sub.add_parser("cech", parents=[common])
    s.add_argument("--site", required=True)
    s.add_argument("--coeff", required=True)
    s.add_argument("--degree", type=int, required=True)
    s = sub.add_parser("cocycle-pi0", parents=[common])
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--bound", type=int)
    s = sub.add_parser("weq", parents=[common])
    s.add_argument("--map", required=True)
    sub.add_parser("accept", parents=[common])
    return p


# -- rendering -----------------------------------------------------------------

def _plain(x):
    """JSON-safe copy; unknown objects become their string form."""
    return json.loads(json.dumps(x, default=str))


def _cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v).lower() if isinstance(v, bool) else str(v)


def render_table(report):
    """Scalars as key/value rows; lists of flat records as their own tables."""
    out = []
    scalars = [(k, v) for k, v in sorted(report.items()) if not isinstance(v, list)]
    if scalars:
        w = max(len(k) for k, _ in scalars)
        out.extend(f"{k.ljust(w)}  {_cell(v)}" for k, v in scalars)
    for k, v in sorted(report.items()):
        if not isinstance(v, list):
            continue
        out.append("")
        out.append(f"{k}:")
        if v and all(isinstance(r, dict) for r in v):
            cols = sorted({c for r in v for c in r})
            rows = [[_cell(r.get(c, "")) for c in cols] for r in v]
            widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
            out.append("  ".join(c.ljust(wd) for c, wd in zip(cols, widths)).rstrip())
            out.append("  ".join("-" * wd for wd in widths))
            out.extend("  ".join(x.ljust(wd) for x, wd in zip(r, widths)).rstrip() for r in rows)
        else:
            out.extend(f"  {_cell(x)}" for x in v)
    return "\n".join(out) + "\n"


def _error_report(err):
    kind = "algebraic" if isinstance(err, AlgebraicError) else "input"
    return {"error": kind, "type": type(err).__name__, "message": str(err),
            "witness": _plain(err.witness)}


def main(argv=None):
    args = build_parser().parse_args(argv)
    inp = _Inputs()
    t0 = time.perf_counter()
    try:
        report, ok = COMMANDS[args.command](args, inp)
        code = 0 if ok else 1
    except AlgebraicError as err:
        report, code = _error_report(err), 3
    except CocatError as err:
        report, code = _error_report(err), 2
    text = ser.dumps(_plain(report))
    sys.stdout.write(text if args.format == "json" else render_table(report))
    sys.stdout.flush()
    if "error" in report:
        print(f"cocat: {report['message']}", file=sys.stderr)
    if args.manifest:
        params = {k: v for k, v in sorted(vars(args).items())
                  if k not in ("command", "manifest", "format") and k not in inp.digests}
        m = RunManifest(args.command, dict(sorted(inp.digests.items())), params,
                        sha256_bytes(text.encode("utf-8")), time.perf_counter() - t0)
        with open(args.manifest, "w", encoding="utf-8") as fh:
            fh.write(ser.dumps(m.to_json()))
    return code


if __name__ == "__main__":
    sys.exit(main())
