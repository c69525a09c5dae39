"""
Verification reports.

A report is a plain dictionary built from a :class:`~hiord.verifier.Verdict`;
the text and JSON renderings show the same content. The JSON layout is
versioned by :data:`SCHEMA_VERSION`.
"""

from __future__ import annotations

import json

from hiord.lang.printer import format_assertion, format_rule
from hiord.lang.terms import format_indicator

__all__ = (
    "SCHEMA_VERSION",
    "build_report",
    "render_json",
    "render_text",
    "render_matrix",
)

SCHEMA_VERSION = 1


def _span(span):
    if span is None or not getattr(span, "line", 0):
        return None
    return str(span)


def _message(message):
    return {"id": message.id, "message": message.msg, "hint": message.hint}


def build_report(verdict, name=""):
    """
    Report of a verdict.

    Args:
    ----
        verdict (hiord.verifier.Verdict): The verification result.
        name (str): Program name shown in the report.

    Returns:
    -------
        dict: ``version``, ``program``, ``exit_code``, ``assertions``,
        ``conformance``, ``inferred``, ``generated`` and ``warnings``.

    """
    assertions = [
        {
            "pred": s.pred[0],
            "arity": s.pred[1],
            "kind": "calls" if s.label.endswith("#calls") else "success",
            "label": s.label,
            "status": s.status.value,
            "reason": s.reason,
            "span": _span(s.span),
            "provenance": s.provenance.value,
        }
        for s in verdict.statuses
    ]
    first = {(m.prop, m.pred, m.strong): m.iteration for m in verdict.memberships}
    conformance = []
    for prop in sorted(verdict.tables):
        for row in verdict.tables[prop].rows:
            conformance.append(
                {
                    "pred": row.pred[0],
                    "arity": row.pred[1],
                    "property": prop,
                    "verdict": row.verdict.value,
                    "conditions": {
                        c.label: c.verdict.value for c in (row.calls, *row.successes)
                    },
                    "basis": [
                        line for c in (row.calls, *row.successes) for line in c.basis
                    ],
                    "witness": str(row.witness) if row.witness else None,
                    "culprits": [format_rule(rule) for rule in row.culprits],
                    "provenance": row.provenance.value,
                    "since": first.get((prop, row.pred, True))
                    or first.get((prop, row.pred, False)),
                }
            )
    carriers = {c for pair in verdict.program.carriers.values() for c in pair}
    generated = [
        format_rule(rule)
        for rule in verdict.program.rules
        if rule.head.pred in carriers
    ]
    generated += [format_rule(rule) for rule in verdict.generated]
    return {
        "version": SCHEMA_VERSION,
        "program": name or verdict.program.name,
        "exit_code": verdict.exit_code,
        "iterations": verdict.iterations,
        "assertions": assertions,
        "conformance": conformance,
        "inferred": [
            format_assertion(a)
            for _, a in sorted(verdict.inferred.items(), key=lambda kv: kv[0])
        ],
        "generated": generated,
        "warnings": [_message(m) for m in verdict.diagnostics],
    }


def render_json(report):
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def render_text(report, style=None):
    """
    Human-readable rendering of a report.

    ``style`` is a Django ``color_style()``; statuses are printed plain when
    it is omitted.
    """

    def paint(status, text):
        if style is None:
            return text
        return {
            "checked": style.SUCCESS,
            "false": style.ERROR,
            "check": style.WARNING,
            "yes": style.SUCCESS,
            "no": style.ERROR,
            "maybe": style.WARNING,
        }.get(status, str)(text)

    lines = [f"program {report['program']}"]
    if report["assertions"]:
        lines.append("assertions:")
        width = max(len(a["label"]) for a in report["assertions"])
        for a in report["assertions"]:
            where = f" [{a['span']}]" if a["span"] else ""
            lines.append(
                f"  {a['label']:<{width}}  {paint(a['status'], a['status']):<7}  "
                f"{a['reason']}{where}"
            )
    if report["conformance"]:
        lines.append("conformance:")
        for c in report["conformance"]:
            pred = format_indicator((c["pred"], c["arity"]))
            since = f" (iteration {c['since']})" if c["since"] else ""
            lines.append(
                f"  {pred} to {c['property']}: "
                f"{paint(c['verdict'], c['verdict'])}{since}"
            )
            if c["witness"]:
                lines.append(f"    witness: {c['witness']}")
            for culprit in c["culprits"]:
                lines.append(f"    culprit: {culprit}")
    if report["inferred"]:
        lines.append("inferred:")
        lines.extend(f"  {a}" for a in report["inferred"])
    if report["generated"]:
        lines.append("generated:")
        lines.extend(f"  {r}" for r in report["generated"])
    if report["warnings"]:
        lines.append("warnings:")
        for w in report["warnings"]:
            lines.append(f"  {w['id']}: {w['message']}")
    lines.append(f"exit code {report['exit_code']}")
    return "\n".join(lines) + "\n"


def render_matrix(tables):
    """
    Conformance matrix of each property.

    One row per predicate and one column per anonymous condition, followed by
    the abstract values compared.
    """
    lines = []
    for prop in sorted(tables):
        table = tables[prop]
        lines.append(f"{prop}:")
        if not table.rows:
            lines.append("  (no candidate predicates)")
            continue
        first = table.rows[0]
        columns = ["calls", *(s.label.rsplit("#", 1)[-1] for s in first.successes)]
        columns.append("property")
        preds = [format_indicator(row.pred) for row in table.rows]
        width = max(len(p) for p in [*preds, "pred"])

        def line(head, cells, width=width):
            padded = [f"{head:<{width}}", *(f"{c:<9}" for c in cells)]
            return ("  " + "  ".join(padded)).rstrip()

        lines.append(line("pred", columns))
        for pred, row in zip(preds, table.rows):
            cells = [row.calls.verdict.value]
            cells += [s.verdict.value for s in row.successes]
            cells.append(row.verdict.value)
            lines.append(line(pred, cells))
        for pred, row in zip(preds, table.rows):
            for condition in (row.calls, *row.successes):
                for basis in condition.basis:
                    lines.append(f"  {pred} {condition.label}: {basis}")
    return "\n".join(lines) + ("\n" if lines else "")
