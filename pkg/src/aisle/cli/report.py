"""Reports and their two renderings. Both renderings read the same dict."""

import json
from dataclasses import dataclass, field

from .. import __version__

SCHEMA = "1"


@dataclass
class Report:
    command: str
    data: dict
    verdict: object = None  # None for non-query commands
    timing: float = None  # seconds, human output only (keeps Json deterministic)
    args: list = field(default_factory=list)

    def payload(self):
        out = {"schema": SCHEMA, "command": self.command, "engine": f"aisle {__version__}"}
        out.update(self.data)
        if self.verdict is not None:
            out["verdict"] = self.verdict
        return out


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, float) and v == float("inf"):
        return "inf"
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return str(v)


def to_json(payload):
    return json.dumps(_jsonable(payload), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _human_value(v, indent=0):
    pad = "  " * indent
    if isinstance(v, dict):
        lines = []
        for k, x in v.items():
            if isinstance(x, (dict, list)) and x:
                lines.append(f"{pad}{k}:")
                lines.extend(_human_value(x, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(x)}")
        return lines
    if isinstance(v, list):
        lines = []
        for x in v:
            if isinstance(x, dict):
                inner = _human_value(x, indent + 1)
                if inner:
                    inner[0] = pad + "- " + inner[0].lstrip()
                lines.extend(inner)
            else:
                lines.append(f"{pad}- {_scalar(x)}")
        return lines
    return [pad + _scalar(v)]


def _scalar(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "-"
    if isinstance(x, (list, dict)):
        return "[]" if isinstance(x, list) else "{}"
    return str(_jsonable(x))


def to_human(report):
    data = report.data
    lines = []
    if report.command == "gb":
        lines.append(f"order: {data['order']}")
        lines.extend(data["basis"])
    elif report.command == "print":
        lines.append(data["session"].rstrip("\n"))
    elif report.command == "verify":
        lines.append(f"suite {data['suite']} seed {data['seed']}: "
                     f"{data['passed']}/{data['cases']} passed")
        for s in data.get("suites", []):
            lines.append(f"  {s['suite']}: {s['passed']}/{s['cases']} passed")
        for f in data["failures"]:
            lines.append(f"FAIL {f['suite']} case {f['case']}: {f['message']}")
            for k, v in sorted(f.get("counterexample", {}).items()):
                lines.append(f"    {k}: {_scalar(v)}")
    else:
        if report.verdict is not None:
            lines.append(f"verdict: {_scalar(report.verdict)}")
        lines.extend(_human_value(_jsonable(data)))
    if report.timing is not None:
        lines.append(f"({report.timing:.3f} s)")
    return "\n".join(lines) + "\n"


def emit(report, fmt="human"):
    if fmt == "json":
        return to_json(report.payload()).encode("utf-8")
    return to_human(report).encode("utf-8")


def error_payload(exc, command=None):
    out = {"schema": SCHEMA, "engine": f"aisle {__version__}", "error": exc.to_dict()}
    if command:
        out["command"] = command
    return out
