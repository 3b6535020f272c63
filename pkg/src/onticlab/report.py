"""CSV / JSON serialization of battery results."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields

COLUMNS = ("check", "model", "N", "n", "estimate", "exact", "z_score", "overlap_count", "seed", "pass")


@dataclass(frozen=True)
class ReportRow:
    check: str
    model: str
    N: int | None = None
    n: int | None = None
    estimate: float | None = None
    exact: float | None = None
    z_score: float | None = None
    overlap_count: int | None = None
    seed: int | None = None
    passed: bool = False
    # ordering key inside a (check, model) group; not serialized
    index: int = field(default=0, compare=False)

    def __post_init__(self):
        # numpy scalars leak in from the batteries; keep rows JSON-native
        for name in ("N", "n", "overlap_count", "seed"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, int(v))
        for name in ("estimate", "exact", "z_score"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, float(v))
        object.__setattr__(self, "passed", bool(self.passed))

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "model": self.model,
            "N": self.N,
            "n": self.n,
            "estimate": self.estimate,
            "exact": self.exact,
            "z_score": self.z_score,
            "overlap_count": self.overlap_count,
            "seed": self.seed,
            "pass": self.passed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ReportRow:
        return cls(
            check=d["check"],
            model=d["model"],
            N=d.get("N"),
            n=d.get("n"),
            estimate=_float_or_none(d.get("estimate")),
            exact=_float_or_none(d.get("exact")),
            z_score=_float_or_none(d.get("z_score")),
            overlap_count=d.get("overlap_count"),
            seed=d.get("seed"),
            passed=bool(d["pass"]),
        )


def _float_or_none(x):
    if x is None:
        return None
    return float(x)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def sort_rows(rows) -> list[ReportRow]:
    return sorted(rows, key=lambda r: (r.check, r.model, r.index))


def _json_number(x):
    # JSON has no inf/nan
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def emit_report(rows, fmt: str = "csv", extra: dict | None = None) -> bytes:
    """Serialize rows (already ordered) to UTF-8 bytes with a trailing newline.

    ``extra`` adds top-level keys to the JSON document (ignored for CSV).
    """
    rows = list(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in rows:
            d = r.as_dict()
            writer.writerow([_cell(d[c]) for c in COLUMNS])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        doc = dict(extra or {})
        doc["rows"] = [{k: _json_number(v) for k, v in r.as_dict().items()} for r in rows]
        return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


def parse_csv(data: bytes) -> list[ReportRow]:
    reader = csv.DictReader(io.StringIO(data.decode("utf-8")))
    out = []
    for rec in reader:
        d = {k: (None if v == "" else v) for k, v in rec.items()}
        out.append(ReportRow(
            check=d["check"],
            model=d["model"],
            N=None if d["N"] is None else int(d["N"]),
            n=None if d["n"] is None else int(d["n"]),
            estimate=_float_or_none(d["estimate"]),
            exact=_float_or_none(d["exact"]),
            z_score=_float_or_none(d["z_score"]),
            overlap_count=None if d["overlap_count"] is None else int(d["overlap_count"]),
            seed=None if d["seed"] is None else int(d["seed"]),
            passed=d["pass"] == "true",
        ))
    return out


def parse_json(data: bytes) -> tuple[list[ReportRow], dict]:
    doc = json.loads(data.decode("utf-8"))
    rows = [ReportRow.from_dict(d) for d in doc.pop("rows")]
    return rows, doc


def row_fields() -> tuple[str, ...]:
    return tuple(f.name for f in fields(ReportRow) if f.name != "index")
