"""Match session service: create matches, submit moves, query state, and
push per-match events.

Endpoints (all payloads carry a schema version field "v"):
  POST /matches                   -> {match_id, black_token, white_token}
  GET  /matches/{id}/state        -> state, marginals, term_count, to_move, ...
  POST /matches/{id}/moves        -> accepted summary | rejection code
  GET  /matches/{id}/legal        -> enumerated candidate moves (capped)
  WS   /matches/{id}/events       -> {ply, move, state_hash, term_count, outcome}

A move is accepted only with the token of the side to move. Matches persist
as append-only `.qbg` files under DATA_DIR and are rebuilt by replay on
startup. Moves per match are serialized by a lock; reads see immutable
snapshots.
"""

from __future__ import annotations

import asyncio
import json
import os
import secrets
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel, Field

from .board import Color
from .engine import Match, MatchConfig, PlyEntry, replay
from .errors import MoveRejected, NotationError, QbgError
from .fir import Status
from .moves import format_move, parse_move
from .record import parse_record, record_lines, write_record
from .state import marginals, serialize

API_VERSION = 1


class CreateMatchBody(BaseModel):
    game: str = "fir"
    board_size: int = 0
    j_limit: int = Field(default=8, ge=1)
    capture_approach: str = "broadcast"
    p2_budget: int = Field(default=6, ge=1)
    max_moves: int = 0
    seed: int = 0


class MoveBody(BaseModel):
    token: str
    move: str


@dataclass
class Session:
    match_id: str
    match: Match
    tokens: dict[str, str]  # color value -> token
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    events: list[dict] = field(default_factory=list)
    changed: asyncio.Condition = field(default_factory=asyncio.Condition)
    path: Path | None = None


def _state_payload(session: Session) -> dict:
    match = session.match
    margins = marginals(match.state)
    return {
        "v": API_VERSION,
        "match_id": session.match_id,
        "game": match.config.game.value,
        "board_size": match.config.board_size,
        "j_limit": match.config.j_limit,
        "state": json.loads(serialize(match.state)),
        "marginals": [[round(x, 12) for x in row] for row in margins.tolist()],
        "term_count": match.state.term_count(),
        "to_move": match.to_move.value,
        "ply": match.ply,
        "outcome": match.record.outcome.to_json(),
        "game_wise_allowed": match.game_wise_allowed,
        "state_hash": match.state_digest(),
    }


def _event_payload(session: Session, entry: PlyEntry) -> dict:
    return {
        "v": API_VERSION,
        "ply": entry.ply,
        "player": entry.player.value,
        "move": entry.move_text,
        "state_hash": entry.state_hash,
        "term_count": session.match.state.term_count(),
        "outcome": session.match.record.outcome.to_json(),
        "game_wise_allowed": session.match.game_wise_allowed,
    }


def create_app(data_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="qbg match service")
    sessions: dict[str, Session] = {}
    directory = Path(data_dir) if data_dir else None
    if directory:
        directory.mkdir(parents=True, exist_ok=True)

    def _persist_full(session: Session) -> None:
        if session.path is None:
            return
        lines = record_lines(
            session.match.record,
            extra_header={"match_id": session.match_id, "tokens": session.tokens},
        )
        session.path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    def _load_existing() -> None:
        if not directory:
            return
        for path in sorted(directory.glob("*.qbg")):
            try:
                record, extra = parse_record(path.read_text(encoding="utf-8"))
                match = replay(record)
            except QbgError:
                continue
            match_id = extra.get("match_id", path.stem)
            tokens = extra.get("tokens") or {
                "b": secrets.token_hex(8),
                "w": secrets.token_hex(8),
            }
            session = Session(match_id, match, tokens, path=path)
            for entry in match.record.plies:
                session.events.append(_event_payload(session, entry))
            sessions[match_id] = session

    _load_existing()

    def _session(match_id: str) -> Session:
        session = sessions.get(match_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown match")
        return session

    @app.post("/matches", status_code=201)
    async def create_match(body: CreateMatchBody):
        try:
            config = MatchConfig.from_json(body.model_dump()).resolved()
            match = Match(config)
        except (ValueError, QbgError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        match_id = uuid.uuid4().hex[:12]
        tokens = {"b": secrets.token_hex(8), "w": secrets.token_hex(8)}
        session = Session(match_id, match, tokens)
        if directory:
            session.path = directory / f"{match_id}.qbg"
            _persist_full(session)
        sessions[match_id] = session
        return {
            "v": API_VERSION,
            "match_id": match_id,
            "black_token": tokens["b"],
            "white_token": tokens["w"],
        }

    @app.get("/matches/{match_id}/state")
    async def get_state(match_id: str):
        return _state_payload(_session(match_id))

    @app.get("/matches/{match_id}/legal")
    async def list_legal(match_id: str, species: str | None = None, cap: int = 64):
        session = _session(match_id)
        known = (None, "classical", "superposition", "counter", "entangled", "game_wise", "pass")
        if species not in known:
            raise HTTPException(status_code=422, detail=f"unknown species {species!r}")
        moves = session.match.legal_moves(species=species, cap=cap)
        return {
            "v": API_VERSION,
            "to_move": session.match.to_move.value,
            "moves": [format_move(m) for m in moves],
        }

    @app.post("/matches/{match_id}/moves")
    async def post_move(match_id: str, body: MoveBody):
        session = _session(match_id)
        async with session.lock:
            match = session.match
            expected = session.tokens[match.to_move.value]
            if body.token != expected:
                return _rejection(409, "WrongTurn", "token does not own the move")
            try:
                move = parse_move(body.move, default_color=match.to_move)
            except NotationError as exc:
                return _rejection(422, "InvalidMoveGeometry", str(exc))
            try:
                entry = match.submit(move)
            except MoveRejected as exc:
                return _rejection(409, exc.reason.value, str(exc))
            if session.path is not None:
                _persist_full(session)
            event = _event_payload(session, entry)
            session.events.append(event)
            async with session.changed:
                session.changed.notify_all()
        return {
            "v": API_VERSION,
            "accepted": True,
            "ply": entry.ply,
            "move": entry.move_text,
            "captures": None
            if entry.captures is None
            else [[c.value, p.label()] for p, c in entry.captures.entries]
            + [[c.value, p.label(), h] for h, p, c in entry.captures.per_branch],
            "state_hash": entry.state_hash,
            "term_count": match.state.term_count(),
            "to_move": match.to_move.value,
            "outcome": match.record.outcome.to_json(),
            "game_wise_allowed": match.game_wise_allowed,
        }

    @app.websocket("/matches/{match_id}/events")
    async def events(ws: WebSocket, match_id: str):
        session = sessions.get(match_id)
        if session is None:
            await ws.close(code=4404)
            return
        await ws.accept()
        sent = 0
        try:
            while True:
                while sent < len(session.events):
                    await ws.send_json(session.events[sent])
                    sent += 1
                if session.match.record.outcome.status is not Status.ONGOING:
                    break
                async with session.changed:
                    try:
                        await asyncio.wait_for(session.changed.wait(), timeout=30.0)
                    except asyncio.TimeoutError:
                        pass
        except WebSocketDisconnect:
            return
        await ws.close()

    return app


def _rejection(status_code: int, code: str, message: str):
    from fastapi.responses import JSONResponse

    return JSONResponse(
        status_code=status_code,
        content={"v": API_VERSION, "accepted": False, "code": code, "message": message},
    )


def main(bind: str | None = None, data_dir: str | None = None) -> None:
    """Run the service with uvicorn; BIND_ADDR and DATA_DIR env respected."""
    import uvicorn

    bind = bind or os.environ.get("BIND_ADDR", "127.0.0.1:8000")
    data_dir = data_dir or os.environ.get("DATA_DIR") or None
    host, _, port = bind.rpartition(":")
    uvicorn.run(create_app(data_dir), host=host or "127.0.0.1", port=int(port))
