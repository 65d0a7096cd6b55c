"""Deterministic report documents and their text/JSON rendering."""

import json


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    return str(obj)


def new_report(command, **fields):
    rep = {"command": command, "status": "pass"}
    rep.update(fields)
    return rep


def add_verdict(rep, verdict):
    rep.setdefault("checks", []).append(verdict.as_dict())
    if not verdict.ok and rep["status"] == "pass":
        rep["status"] = "fail"
    return verdict.ok


def render(rep, fmt="text"):
    rep = _clean(rep)
    if fmt == "machine":
        return json.dumps(rep, sort_keys=True, indent=2) + "\n"
    return "\n".join(_text(rep)) + "\n"


def _group(g):
    s = f"rank {g['rank']}"
    if g.get("torsion"):
        s += " torsion " + " ".join(str(t) for t in g["torsion"])
    return s


def _text(rep):
    out = [f"{rep['command']}: {rep['status'].upper()}"]
    for key in sorted(k for k in rep if k not in ("command", "status", "checks", "homology", "comparison",
                                                   "trees", "splits", "listing", "error")):
        out.append(f"  {key}: {json.dumps(rep[key], sort_keys=True)}")
    if "error" in rep:
        out.append(f"  error: {rep['error']}")
    for c in rep.get("checks", []):
        line = f"  [{c['status']}] {c['check']}"
        if c.get("stats"):
            line += " (" + ", ".join(f"{k}={v}" for k, v in sorted(c["stats"].items())) + ")"
        out.append(line)
        if c.get("counterexample"):
            out.append("      counterexample: " + json.dumps(c["counterexample"], sort_keys=True))
    if "homology" in rep:
        out.append("  homology:")
        for row in rep["homology"]:
            out.append(f"    degree {row['degree']}: {_group(row)}")
    if "comparison" in rep:
        cmp_ = rep["comparison"]
        deg = lambda d: d[0] if isinstance(d, list) and len(d) == 1 else d
        out.append(f"  telescope vs colimit: {'equal' if cmp_['equal'] else 'not equal'}")
        for row in cmp_["degrees"]:
            out.append(
                f"    degree {deg(row['degree'])}: telescope {_group(row['telescope'])}; "
                f"colimit {_group(row['colimit'])}; {'equal' if row['equal'] else 'differ'}"
            )
    if "trees" in rep:
        t = rep["trees"]
        out.append(f"  count: {t['count']}")
        for k, v in sorted(t["by_internal_edges"].items(), key=lambda kv: int(kv[0])):
            out.append(f"    internal edges {k}: {v}")
        for k, v in sorted(t.get("by_dimension", {}).items(), key=lambda kv: int(kv[0])):
            out.append(f"    dimension {k}: {v}")
    if "splits" in rep:
        out.append("  codimension-one splits:")
        for r in rep["splits"]:
            out.append(f"    d+={r['d_plus']} d-={r['d_minus']}: {r['count']} trees (formula {r['formula']})")
    for row in rep.get("listing", []):
        out.append(f"    {row['tree']}  dim {row['dimension']}")
    return out
