"""Analysis report assembly (JSON schema "coxhi/1") and human rendering."""

from __future__ import annotations

import time

from . import classify, hindex
from .core import INFINITY, CoxeterSystem, betti, names_of_mask

SCHEMA = "coxhi/1"


def _subset(sys, mask):
    return names_of_mask(sys, mask)


def _h_value(h):
    return "infinity" if h == INFINITY else h


def _certificate(sys, node):
    if node is None:
        return None
    return {
        "subset": _subset(sys, node.subset),
        "level": node.level,
        "kind": node.kind,
        "children": [_certificate(sys, c) for c in node.children],
    }


def build_report(sys: CoxeterSystem, max_rank=None, trace=False,
                 timing=False) -> dict:
    """Full analysis document.  Deterministic for fixed input and flags;
    the timing block is opt-in since it would break byte-identical output.
    """
    t0 = time.perf_counter()
    ana = hindex.analysis(sys, max_rank)
    lam = ana.lambda_analysis()
    n_ends = classify.ends(sys, max_rank)
    cert = ana.thickness_certificate()
    peripherals = ana.peripheral_structure()
    div = ana.divergence_report()
    hyperbolic = ana.is_hyperbolic()

    hist = {}
    for label, count in sorted(sys.label_histogram().items(),
                               key=lambda kv: (kv[0] == INFINITY, kv[0])):
        hist["inf" if label == INFINITY else str(label)] = count

    doc = {
        "schema": SCHEMA,
        "system": {
            "rank": sys.rank,
            "names": list(sys.names),
            "labels": hist,
        },
        "ends": _h_value(n_ends),
        "betti": betti(sys),
        "hyperbolic": hyperbolic,
        "omega": [
            {"subset": _subset(sys, w.subset), "a": _subset(sys, w.a),
             "b": _subset(sys, w.b), "case": w.case}
            for w in lam.omega
        ],
        "psi": [
            {"subset": _subset(sys, s.subset), "a": _subset(sys, s.a),
             "k": _subset(sys, s.k)}
            for s in lam.psi
        ],
        "lambda": {
            "levels": [[_subset(sys, m) for m in level] for level in lam.levels],
            "stabilized_at": lam.stabilized_at,
        },
        "h": _h_value(lam.h),
        "thickness_certificate": _certificate(sys, cert),
        "peripherals": (None if peripherals is None
                        else [_subset(sys, p) for p in peripherals]),
        "divergence": {
            "one_ended": div.one_ended,
            "classification": div.label,
            "thickness_order_upper_bound": div.thickness_order_upper_bound,
            "conjectural_exact_degree": div.conjectural_exact_degree,
        },
    }
    if trace:
        doc["lambda"]["classes"] = [
            [{"members": [_subset(sys, m) for m in c.members],
              "union": _subset(sys, c.union)} for c in level_classes]
            for level_classes in lam.classes
        ]
    if timing:
        doc["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    return doc


def _fmt_set(names):
    return "{%s}" % ",".join(names)


def render_human(sys: CoxeterSystem, doc: dict, trace=False):
    """Figure-style text rendering: one block per Lambda level with the
    equivalence classes bracketed."""
    lines = []
    info = doc["system"]
    lines.append("system: rank %d  generators %s"
                 % (info["rank"], " ".join(info["names"])))
    lines.append("labels: %s" % "  ".join(
        "%s x%d" % (lab, cnt) for lab, cnt in info["labels"].items()))
    lines.append("ends: %s   betti: %d   hyperbolic: %s"
                 % (doc["ends"], doc["betti"],
                    "yes" if doc["hyperbolic"] else "no"))
    lines.append("")
    lines.append("wide subsets Omega(S):")
    if not doc["omega"]:
        lines.append("  (none)")
    for w in doc["omega"]:
        lines.append("  %s = %s x %s  [%s]"
                     % (_fmt_set(w["subset"]), _fmt_set(w["a"]),
                        _fmt_set(w["b"]), w["case"]))
    lines.append("slab subsets Psi(S):")
    if not doc["psi"]:
        lines.append("  (none)")
    for s in doc["psi"]:
        lines.append("  %s = %s x %s"
                     % (_fmt_set(s["subset"]), _fmt_set(s["a"]),
                        _fmt_set(s["k"])))
    lines.append("")
    classes = doc["lambda"].get("classes")
    for i, level in enumerate(doc["lambda"]["levels"]):
        if classes is not None and i < len(classes):
            blocks = " ".join(
                "[ %s ]" % "  ".join(_fmt_set(m) for m in c["members"])
                for c in classes[i])
        else:
            blocks = " ".join(_fmt_set(m) for m in level)
        lines.append("Lambda_%d: %s" % (i, blocks))
    if doc["lambda"]["stabilized_at"] is not None:
        lines.append("stabilized at level %d" % doc["lambda"]["stabilized_at"])
    lines.append("h = %s" % doc["h"])
    cert = doc["thickness_certificate"]
    if cert is not None:
        lines.append("thickness certificate (strongly thick of order <= h):")
        _render_cert(cert, lines, "  ")
    if doc["peripherals"] is not None:
        if doc["peripherals"]:
            lines.append("peripheral subsets (relatively hyperbolic):")
            for p in doc["peripherals"]:
                lines.append("  %s" % _fmt_set(p))
        else:
            lines.append("peripheral subsets: none (hyperbolic)")
    d = doc["divergence"]
    extra = []
    if d["thickness_order_upper_bound"] is not None:
        extra.append("strongly thick of order <= %d"
                     % d["thickness_order_upper_bound"])
    if d["conjectural_exact_degree"] is not None:
        extra.append("conjectural exact degree %d"
                     % d["conjectural_exact_degree"])
    lines.append("divergence: %s%s"
                 % (d["classification"],
                    ("  (" + "; ".join(extra) + ")") if extra else ""))
    if "timing" in doc:
        lines.append("time: %.3fs" % doc["timing"]["seconds"])
    return "\n".join(lines)


def _render_cert(node, lines, indent):
    lines.append("%s%s  level %d  [%s]"
                 % (indent, _fmt_set(node["subset"]), node["level"],
                    node["kind"]))
    for child in node["children"]:
        _render_cert(child, lines, indent + "  ")
