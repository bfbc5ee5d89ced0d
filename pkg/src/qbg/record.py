"""Game record files (`.qbg`): JSON lines, one header, one line per ply.

The header carries the config and an optional setup position (problem and
regression positions); plies carry move notation, injected captures, and the
post-move state hash. Replaying a record reproduces the final superposition
byte-identically.
"""

from __future__ import annotations

import json
from pathlib import Path

from .board import Color, parse_point
from .engine import GameRecord, MatchConfig, Outcome, PlyEntry
from .errors import QbgError
from .fir import Status, Witness
from .state import Superposition, deserialize, serialize
from .weiqi import CaptureApproach, CaptureReport

RECORD_VERSION = 1


def _captures_to_json(report: CaptureReport | None) -> dict | None:
    if report is None:
        return None
    obj: dict = {"approach": report.approach.value}
    if report.entries:
        obj["entries"] = [[c.value, p.label()] for p, c in report.entries]
    if report.per_branch:
        obj["per_branch"] = [[h, c.value, p.label()] for h, p, c in report.per_branch]
    return obj


def _captures_from_json(obj: dict | None) -> CaptureReport | None:
    if obj is None:
        return None
    entries = tuple(
        (parse_point(p), Color(c)) for c, p in obj.get("entries", [])
    )
    per_branch = tuple(
        (h, parse_point(p), Color(c)) for h, c, p in obj.get("per_branch", [])
    )
    return CaptureReport(CaptureApproach(obj["approach"]), entries, per_branch)


def _outcome_from_json(obj: dict) -> Outcome:
    witness = None
    if obj.get("witness"):
        witness = Witness(
            obj["witness"]["branch"],
            tuple(parse_point(p) for p in obj["witness"]["line"]),
        )
    return Outcome(Status(obj["status"]), obj.get("reason", ""), witness)


def record_lines(record: GameRecord, extra_header: dict | None = None) -> list[str]:
    header: dict = {"v": RECORD_VERSION, "kind": "header", "config": record.config.to_json()}
    if record.setup is not None:
        header["setup"] = json.loads(serialize(record.setup))
        header["setup_to_move"] = record.setup_to_move.value
    if extra_header:
        header.update(extra_header)
    lines = [json.dumps(header, separators=(",", ":"))]
    for entry in record.plies:
        obj: dict = {
            "v": RECORD_VERSION,
            "kind": "ply",
            "ply": entry.ply,
            "player": entry.player.value,
            "move": entry.move_text,
            "captures": _captures_to_json(entry.captures),
            "state_hash": entry.state_hash,
        }
        if entry.note:
            obj["note"] = entry.note
        lines.append(json.dumps(obj, separators=(",", ":")))
    if record.outcome.status is not Status.ONGOING:
        obj = {"v": RECORD_VERSION, "kind": "outcome", **record.outcome.to_json()}
        lines.append(json.dumps(obj, separators=(",", ":")))
    return lines


def parse_record(text: str) -> tuple[GameRecord, dict]:
    """Parse `.qbg` content; returns the record and any extra header fields."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise QbgError("empty record")
    header = json.loads(lines[0])
    if header.get("kind") != "header":
        raise QbgError("record must start with a header line")
    config = MatchConfig.from_json(header["config"])
    setup: Superposition | None = None
    setup_to_move = Color.BLACK
    if header.get("setup") is not None:
        setup = deserialize(json.dumps(header["setup"]))
        setup_to_move = Color(header.get("setup_to_move", "b"))
    record = GameRecord(config, setup=setup, setup_to_move=setup_to_move)
    extra = {
        k: v
        for k, v in header.items()
        if k not in ("v", "kind", "config", "setup", "setup_to_move")
    }
    for line in lines[1:]:
        obj = json.loads(line)
        kind = obj.get("kind")
        if kind == "ply":
            record.plies.append(
                PlyEntry(
                    int(obj["ply"]),
                    Color(obj["player"]),
                    obj["move"],
                    _captures_from_json(obj.get("captures")),
                    obj["state_hash"],
                    obj.get("note", ""),
                )
            )
        elif kind == "outcome":
            record.outcome = _outcome_from_json(obj)
        else:
            raise QbgError(f"unknown record line kind {kind!r}")
    return record, extra


def write_record(path: str | Path, record: GameRecord, extra_header: dict | None = None) -> None:
    Path(path).write_text("\n".join(record_lines(record, extra_header)) + "\n", encoding="utf-8")


def read_record(path: str | Path) -> tuple[GameRecord, dict]:
    return parse_record(Path(path).read_text(encoding="utf-8"))


def append_ply(path: str | Path, record: GameRecord, entry: PlyEntry) -> None:
    """Append one ply line to an existing record file (service persistence)."""
    lines = record_lines(GameRecord(record.config, plies=[entry]))
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(lines[1] + "\n")
