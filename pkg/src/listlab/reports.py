"""Report envelopes: versioned JSON with a canonical byte region, plus CSV.

Every emitted report is {"schema": 1, "command": ..., "params": ...,
"results": ..., "meta": ...}. The canonical bytes cover everything except
"meta" (wall-clock time and similar non-reproducible fields live there), with
keys sorted and compact separators, so determinism checks can hash them.
"""

from __future__ import annotations

import csv
import io
import json
import sys

SCHEMA_VERSION = 1

# fixed column sets for every command with a CSV form
REPO_CSV_COLUMNS = {
    "oracle profile": ["list_size", "standard_radius", "average_radius"],
    "bounds table": [
        "q", "eps", "regime", "sampled_rate", "rs_rate", "johnson_rate",
        "capacity", "capacity_small_eps", "beats_johnson",
    ],
    "chain build": [
        "level", "lam_size", "coords", "pl_sum", "q_bound", "retries",
        "step_distance", "width_rhs", "holder_lhs", "holder_rhs",
    ],
    "experiment beyond-johnson": [
        "seed_index", "distance", "johnson_radius", "johnson_clamped",
        "standard_radii", "average_radii", "beyond_at",
    ],
}


def build_report(command: str, params: dict, results: dict, meta: dict | None = None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "results": results,
        "meta": meta or {},
    }


def canonical_bytes(report: dict) -> bytes:
    """The hashed region: the report without its meta block, key-sorted."""
    trimmed = {k: v for k, v in report.items() if k != "meta"}
    return json.dumps(trimmed, sort_keys=True, separators=(",", ":")).encode()


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
