"""Operator CLI: terminal play, bot self-play, replay verification, oracle
checks, and serving the match API.

Exit codes: 0 success, 2 validation failure, 3 verification failure.
"""

from __future__ import annotations

import random
import sys
from collections import Counter
from pathlib import Path

import click

from .board import Color, Point
from .engine import Match, MatchConfig, play_match, replay
from .errors import MoveRejected, NotationError, QbgError, ReplayMismatch
from .fir import Status
from .moves import GameKind, parse_move
from .oracle import run_oracle_trials
from .record import read_record, write_record
from .state import Superposition, marginals
from .weiqi import CaptureApproach

_CAPTURE_CHOICES = {
    "broadcast": CaptureApproach.BROADCAST,
    "remove-everywhere": CaptureApproach.REMOVE_EVERYWHERE,
    "per-branch": CaptureApproach.PER_BRANCH,
}


def _config_options(fn):
    fn = click.option("--game", type=click.Choice(["fir", "weiqi"]), default="fir")(fn)
    fn = click.option("--size", type=int, default=0, help="board size (0 = game default)")(fn)
    fn = click.option("--j-limit", type=int, default=8)(fn)
    fn = click.option("--capture", type=click.Choice(sorted(_CAPTURE_CHOICES)), default="broadcast")(fn)
    fn = click.option("--p2-budget", type=int, default=6)(fn)
    fn = click.option("--max-moves", type=int, default=0)(fn)
    fn = click.option("--seed", type=int, default=0)(fn)
    return fn


def _build_config(game, size, j_limit, capture, p2_budget, max_moves, seed) -> MatchConfig:
    return MatchConfig(
        game=GameKind(game),
        board_size=size,
        j_limit=j_limit,
        capture_approach=_CAPTURE_CHOICES[capture],
        p2_budget=p2_budget,
        max_moves=max_moves,
        seed=seed,
    ).resolved()


_CELL_CHARS = {0: "●", 1: "·", 2: "○"}


def _render_board(board) -> str:
    lines = []
    for row in range(board.rows - 1, -1, -1):
        cells = " ".join(
            _CELL_CHARS[board.cells[row * board.cols + col]] for col in range(board.cols)
        )
        lines.append(f"{row + 1:>2} {cells}")
    letters = "   " + " ".join("ABCDEFGHIJKLMNOPQRS"[: board.cols])
    lines.append(letters)
    return "\n".join(lines)


def _render_match(match: Match) -> str:
    parts = []
    margins = marginals(match.state)
    board = match.board_template()
    parts.append(
        f"ply {match.ply}  to move: {match.to_move.value}  branches: {match.state.term_count()}"
        f"  game-wise: {'yes' if match.game_wise_allowed else 'no'}"
    )
    for i, (amp, b) in enumerate(match.state.branch_boards()):
        parts.append(f"-- branch {i}  amplitude {amp.real:+.6f}{amp.imag:+.6f}j")
        parts.append(_render_board(b))
    uncertain = [
        f"{board.point(i).label()}:{row[0]:.2f}/{row[2]:.2f}"
        for i, row in enumerate(margins)
        if 1e-9 < row[1] < 1 - 1e-9 or (0 < row[0] < 1) or (0 < row[2] < 1)
    ]
    if uncertain and match.state.term_count() > 1:
        parts.append("marginals p(black)/p(white): " + "  ".join(uncertain))
    return "\n".join(parts)


@click.group()
def main():
    """Quantum board games: superposed gomoku and weiqi."""


@main.command()
@_config_options
@click.option("--black", type=click.Choice(["human", "random", "greedy"]), default="human")
@click.option("--white", type=click.Choice(["human", "random", "greedy"]), default="human")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the .qbg record on exit")
def play(game, size, j_limit, capture, p2_budget, max_moves, seed, black, white, out):
    """Interactive terminal match (human and/or bot players)."""
    try:
        config = _build_config(game, size, j_limit, capture, p2_budget, max_moves, seed)
    except ValueError as exc:
        click.echo(f"invalid config: {exc}", err=True)
        sys.exit(2)
    match = Match(config)
    rng = random.Random(seed)
    players = {Color.BLACK: black, Color.WHITE: white}
    click.echo(_render_match(match))
    while match.outcome.status is Status.ONGOING:
        kind = players[match.to_move]
        if kind == "human":
            text = click.prompt(f"{match.to_move.value}>", default="", show_default=False)
            if not text.strip():
                continue
            if text.strip() in ("quit", "exit"):
                break
            try:
                move = parse_move(text, default_color=match.to_move)
            except NotationError as exc:
                click.echo(f"  ? {exc}")
                continue
            try:
                match.submit(move)
            except MoveRejected as exc:
                click.echo(f"  rejected: {exc.reason.value} ({exc})")
                continue
        else:
            move = match.bot_move(kind, rng)
            entry = match.submit(move)
            click.echo(f"{entry.player.value} plays {entry.move_text}")
        click.echo(_render_match(match))
    click.echo(f"outcome: {match.outcome.status.value} {match.outcome.reason}")
    if out:
        write_record(out, match.record)
        click.echo(f"record written to {out}")


@main.command()
@_config_options
@click.option("--count", type=int, default=10)
@click.option("--policy", type=click.Choice(["random", "greedy"]), default="random")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None)
def selfplay(game, size, j_limit, capture, p2_budget, max_moves, seed, count, policy, out_dir):
    """Batch bot self-play; prints an outcome tally."""
    try:
        config = _build_config(game, size, j_limit, capture, p2_budget, max_moves, seed)
    except ValueError as exc:
        click.echo(f"invalid config: {exc}", err=True)
        sys.exit(2)
    tally: Counter = Counter()
    plies = 0
    for i in range(count):
        match = play_match(config, policy, policy, seed=seed + i)
        tally[match.outcome.status.value + ("/" + match.outcome.reason if match.outcome.reason else "")] += 1
        plies += match.ply
        if out_dir:
            Path(out_dir).mkdir(parents=True, exist_ok=True)
            write_record(Path(out_dir) / f"match_{seed + i:05d}.qbg", match.record)
    click.echo(f"matches: {count}")
    for key in sorted(tally):
        click.echo(f"  {key}: {tally[key]}")
    if count:
        click.echo(f"  mean plies: {plies / count:.1f}")


@main.command(name="replay")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def replay_cmd(file):
    """Replay a .qbg record and verify every state hash."""
    try:
        record, _ = read_record(file)
        match = replay(record)
    except ReplayMismatch as exc:
        click.echo(f"FAIL: {exc}", err=True)
        sys.exit(3)
    except QbgError as exc:
        click.echo(f"invalid record: {exc}", err=True)
        sys.exit(2)
    click.echo(_render_match(match))
    click.echo(f"OK, state hash matches ({match.state_digest()[:16]}...)")


@main.command(name="oracle-check")
@click.option("--cols", type=int, default=3)
@click.option("--rows", type=int, default=3)
@click.option("--trials", type=int, default=50)
@click.option("--moves", type=int, default=8)
@click.option("--seed", type=int, default=0)
@click.option("--inject-fault", is_flag=True, help="corrupt the oracle once to prove detection")
def oracle_check(cols, rows, trials, moves, seed, inject_fault):
    """Dense-vs-sparse equivalence and interference count on random play."""
    if cols * rows > 12:
        click.echo("board exceeds the 12-point dense oracle cap", err=True)
        sys.exit(2)
    report = run_oracle_trials(cols, rows, trials, moves, seed, inject_fault)
    click.echo(
        f"trials: {report.trials}  moves: {report.moves}  "
        f"min fidelity: {report.min_fidelity:.12f}  merges: {report.merge_count}"
    )
    if not report.ok or report.merge_count:
        click.echo("MISMATCH detected", err=True)
        sys.exit(3)
    click.echo("all trials within tolerance; no interference")


@main.command()
@click.option("--bind", default=None, help="host:port (default BIND_ADDR or 127.0.0.1:8000)")
@click.option("--data-dir", default=None, help="record directory (default DATA_DIR)")
def serve(bind, data_dir):
    """Run the match service."""
    from .service import main as service_main

    service_main(bind, data_dir)


if __name__ == "__main__":
    main()
