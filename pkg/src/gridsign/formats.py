"""JSON file formats for sign assignments and canonical report bytes."""

from __future__ import annotations

import json

from .errors import MalformedInput
from .signs import CONVENTIONS, GaugeFunction, SignAssignment, VerificationReport


def emit_report(result: dict) -> bytes:
    """Canonical bytes: sorted keys, two-space indent, LF endings, UTF-8."""
    return (json.dumps(result, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def signs_to_json(s: SignAssignment) -> dict:
    rects = [
        {"state": [v + 1 for v in state], "sw": list(sw), "w": w, "h": h, "sign": value}
        for (state, sw, w, h), value in sorted(s.values.items())
    ]
    return {"n": s.n, "convention": s.convention, "rects": rects}


def _int(v, what):
    if not isinstance(v, int) or isinstance(v, bool):
        raise MalformedInput(f"{what} must be an integer, got {v!r}")
    return v


def parse_signs(text: str) -> SignAssignment:
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedInput(f"sign file is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or set(data) != {"n", "convention", "rects"}:
        raise MalformedInput("sign file must have exactly the keys n, convention, rects")
    n = _int(data["n"], "n")
    if n < 1:
        raise MalformedInput("n must be positive")
    convention = data["convention"]
    if convention not in CONVENTIONS:
        raise MalformedInput(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    if not isinstance(data["rects"], list):
        raise MalformedInput("rects must be a list")
    values = {}
    for item in data["rects"]:
        if not isinstance(item, dict) or set(item) != {"state", "sw", "w", "h", "sign"}:
            raise MalformedInput(f"bad rectangle entry {item!r}")
        state = item["state"]
        if not isinstance(state, list) or sorted(_int(v, "state entry") for v in state) != list(range(1, n + 1)):
            raise MalformedInput(f"state {state!r} is not a permutation of 1..{n}")
        sw = item["sw"]
        if not isinstance(sw, list) or len(sw) != 2:
            raise MalformedInput(f"sw must be a [col, row] pair, got {sw!r}")
        sw = (_int(sw[0], "sw"), _int(sw[1], "sw"))
        w, h = _int(item["w"], "w"), _int(item["h"], "h")
        if item["sign"] not in (1, -1) or isinstance(item["sign"], bool):
            raise MalformedInput(f"sign must be 1 or -1, got {item['sign']!r}")
        key = (tuple(v - 1 for v in state), sw, w, h)
        if key in values:
            raise MalformedInput(f"duplicate rectangle {item!r}")
        values[key] = item["sign"]
    return SignAssignment(n, values, convention)


def gauge_to_json(f: GaugeFunction) -> list[dict]:
    return [{"state": [v + 1 for v in s], "value": v} for s, v in f.values.items()]


def rect_key_to_json(key) -> dict:
    state, sw, w, h = key
    return {"state": [v + 1 for v in state], "sw": list(sw), "w": w, "h": h}


def verification_to_json(report: VerificationReport) -> dict:
    counts: dict[str, int] = {}
    for v in report.violations:
        counts[v.kind] = counts.get(v.kind, 0) + 1
    return {
        "convention": report.convention,
        "pass": report.ok,
        "violation_counts": counts,
        "violations": [
            {
                "kind": v.kind,
                "state": [c + 1 for c in v.state],
                "end": [c + 1 for c in v.end],
                "index": v.index,
                "rects": [rect_key_to_json(k) for k in v.rects],
                "product": v.product,
                "expected": v.expected,
            }
            for v in report.violations
        ],
    }
