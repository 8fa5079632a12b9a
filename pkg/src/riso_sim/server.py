"""Interactive session server.

Speaks newline-delimited JSON over TCP.  Each connection gets an isolated
session: its own world, controller, and episode accounting.  The server ticks
every session at a fixed wall-clock interval, applies the most recent human
input exactly once, and streams state (plus belief, for the shared
controller) back to the client.  See docs/protocol.md for the wire schema.
"""

from __future__ import annotations

import asyncio
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

from .control import Belief, RationalityModel, controller_step
from .scenario import ScenarioError, load_scenario, resolve_scenario, validate_scenario
from .world import (
    EPISODE_TIMEOUT_STEPS,
    WORKSPACE_MAX,
    WORKSPACE_MIN,
    ActionTwist,
    EpisodeResult,
    ObjectStatus,
    StepRecord,
    WorldState,
    episode_result,
)

log = logging.getLogger("riso_sim.server")

DEFAULT_PORT = 8901
# Periodic frames are dropped (not queued) once a client falls this far behind.
WRITE_BUFFER_LIMIT = 64 * 1024

CONTROLLERS = ("autonomous", "human", "shared")

EPISODE_LOG_HEADER = (
    "controller,seed,target,success,human_input_steps,"
    "trajectory_length,wall_steps,grasp_type\n"
)


def _state_frame(world: WorldState) -> dict[str, Any]:
    g = world.gripper
    return {
        "type": "state_frame",
        "time": world.time,
        "ee_pose": list(world.ee_pose),
        "gripper": {
            "aperture": g.aperture,
            "max_aperture": g.max_aperture,
            "pads": [p.value for p in g.pads],
            "pose": list(g.pose),
            "pad_offsets": [list(off) for off in g.pad_offsets],
        },
        "objects": [
            {
                "id": obj.object_id,
                "position": list(obj.position),
                "status": obj.status.value,
                "contact_radius": obj.surface.contact_radius,
                "height": obj.surface.height,
                "mass": obj.surface.mass,
            }
            for obj in world.objects.values()
        ],
        "held": [
            {"object_id": b.object_id, "grasp": b.grasp.wire_tag}
            for b in g.bindings
        ],
        "bin": {"min": list(world.bin_min), "max": list(world.bin_max)},
        "workspace": {"min": list(WORKSPACE_MIN), "max": list(WORKSPACE_MAX)},
    }


def _belief_frame(belief: Belief) -> dict[str, Any]:
    return {
        "type": "belief_frame",
        "entries": [
            [oid, grasp.wire_tag, float(p)]
            for (oid, grasp), p in zip(belief.entries, belief.probs)
        ],
    }


def _episode_end_frame(result: EpisodeResult, target: Optional[str]) -> dict[str, Any]:
    grasp = result.grasp_type_used
    return {
        "type": "episode_end",
        "result": {
            "success": result.success,
            "human_input_steps": result.human_input_steps,
            "trajectory_length": result.trajectory_length,
            "wall_steps": result.wall_steps,
            "grasp_type_used": grasp.wire_tag if grasp is not None else None,
            "target": target,
        },
    }


def _error_frame(code: str, detail: str) -> dict[str, Any]:
    return {"type": "error", "code": code, "detail": detail}


@dataclass
class Session:
    """One client's world plus episode bookkeeping.

    The episode target is the first object the gripper binds; the episode
    ends when that object lands in the bin or drops, or on timeout.
    """

    scenario_doc: Mapping[str, Any]
    controller: str
    seed: int
    model: RationalityModel
    world: WorldState = field(init=False)
    belief: Optional[Belief] = field(init=False)
    pending: ActionTwist = field(init=False)
    log: list[StepRecord] = field(init=False)
    target: Optional[str] = field(init=False)
    finished: bool = field(init=False)

    def __post_init__(self) -> None:
        self.reset(self.seed)

    def reset(self, seed: int) -> None:
        self.seed = seed
        self.world = load_scenario(self.scenario_doc, seed=seed)
        self.belief = Belief.uniform(self.world) if self.controller == "shared" else None
        self.pending = ActionTwist()
        self.log = []
        self.target = None
        self.finished = False

    def apply_input(self, twist: ActionTwist) -> None:
        self.pending = twist  # last writer before a tick wins

    def tick(self) -> list[dict[str, Any]]:
        """Advance one step; returns the frames to emit."""
        if self.finished:
            return []
        a_h = self.pending
        self.pending = ActionTwist()  # each input is applied to exactly one tick
        prev = self.world.ee_pose
        self.world, self.belief, _ = controller_step(
            self.world, a_h, self.controller, self.belief, self.model
        )
        bindings = self.world.gripper.bindings
        if self.target is None and bindings:
            self.target = bindings[0].object_id
        held_grasp = next(
            (b.grasp for b in bindings if b.object_id == self.target), None
        )
        self.log.append(
            StepRecord(
                ee_pose=self.world.ee_pose,
                moved=math.dist(prev, self.world.ee_pose),
                human_active=a_h.is_active,
                target_grasp=held_grasp,
            )
        )
        frames = [_state_frame(self.world)]
        if self.belief is not None:
            frames.append(_belief_frame(self.belief))
        result = self._maybe_finish()
        if result is not None:
            frames.append(_episode_end_frame(result, self.target))
        return frames

    def _maybe_finish(self) -> Optional[EpisodeResult]:
        if self.target is not None:
            status = self.world.objects[self.target].status
            if status in (ObjectStatus.IN_BIN, ObjectStatus.DROPPED):
                self.finished = True
                return episode_result(self.world, self.log, self.target)
        if len(self.log) >= EPISODE_TIMEOUT_STEPS:
            self.finished = True
            if self.target is not None:
                return episode_result(self.world, self.log, self.target)
            return EpisodeResult(
                success=False,
                human_input_steps=sum(1 for r in self.log if r.human_active),
                trajectory_length=sum(r.moved for r in self.log),
                wall_steps=len(self.log),
                grasp_type_used=None,
            )
        return None


class SessionServer:
    """TCP front end: one Session per connection, fixed-rate ticking."""

    def __init__(
        self,
        scenario: str | Mapping[str, Any] = "household15",
        controller: str = "shared",
        seed: int = 0,
        tick_interval: float = 0.05,
        log_path: Optional[str] = None,
        model: Optional[RationalityModel] = None,
    ) -> None:
        if controller not in CONTROLLERS:
            raise ValueError(f"unknown controller {controller!r}")
        doc = resolve_scenario(scenario)
        problems = validate_scenario(doc)
        if problems:
            raise ScenarioError("; ".join(problems))
        self.scenario_doc = doc
        self.controller = controller
        self.base_seed = seed
        self.tick_interval = tick_interval
        self.log_path = log_path
        self.model = model if model is not None else RationalityModel()
        self._session_count = 0

    async def start(self, port: int = DEFAULT_PORT, host: str = "127.0.0.1") -> asyncio.Server:
        server = await asyncio.start_server(self._handle, host, port)
        addr = server.sockets[0].getsockname()
        log.info("listening on %s:%d", addr[0], addr[1])
        return server

    async def run(self, port: int = DEFAULT_PORT, host: str = "127.0.0.1") -> None:
        server = await self.start(port, host)
        async with server:
            await server.serve_forever()

    async def _handle(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        session = Session(
            scenario_doc=self.scenario_doc,
            controller=self.controller,
            seed=self.base_seed + self._session_count,
            model=self.model,
        )
        self._session_count += 1
        ticker = asyncio.ensure_future(self._ticker(session, writer))
        try:
            await self._read_loop(session, reader, writer)
        except ConnectionResetError:
            pass
        finally:
            ticker.cancel()
            try:
                await ticker
            except asyncio.CancelledError:
                pass
            writer.close()
            try:
                await writer.wait_closed()
            except (ConnectionResetError, BrokenPipeError):
                pass

    async def _ticker(self, session: Session, writer: asyncio.StreamWriter) -> None:
        while True:
            await asyncio.sleep(self.tick_interval)
            was_finished = session.finished
            frames = session.tick()
            if not was_finished and session.finished:
                self._append_episode_log(session, frames[-1])
            self._send(writer, frames)

    async def _read_loop(
        self,
        session: Session,
        reader: asyncio.StreamReader,
        writer: asyncio.StreamWriter,
    ) -> None:
        while True:
            line = await reader.readline()
            if not line:
                return  # client disconnected
            if not line.strip():
                continue
            try:
                msg = json.loads(line)
            except ValueError as exc:
                self._send(writer, [_error_frame("bad_json", str(exc))])
                continue
            if not isinstance(msg, dict):
                self._send(writer, [_error_frame("bad_message", "expected an object")])
                continue
            self._dispatch(session, msg, writer)

    def _dispatch(self, session: Session, msg: dict, writer: asyncio.StreamWriter) -> None:
        kind = msg.get("type")
        if kind == "human_action":
            try:
                v = (
                    float(msg.get("vx", 0.0)),
                    float(msg.get("vy", 0.0)),
                    float(msg.get("vz", 0.0)),
                )
                twist = ActionTwist(v, msg.get("grasp_cmd"))
            except (TypeError, ValueError) as exc:
                self._send(writer, [_error_frame("bad_action", str(exc))])
                return
            session.apply_input(twist)
        elif kind == "reset":
            seed = msg.get("seed", session.seed)
            if not isinstance(seed, int):
                self._send(writer, [_error_frame("bad_reset", "seed must be an integer")])
                return
            session.reset(seed)
        elif kind == "hello":
            self._handle_hello(session, msg, writer)
        else:
            self._send(writer, [_error_frame("unknown_type", f"unknown type {kind!r}")])

    def _handle_hello(self, session: Session, msg: dict, writer: asyncio.StreamWriter) -> None:
        controller = msg.get("controller", session.controller)
        if controller not in CONTROLLERS:
            self._send(writer, [_error_frame("bad_controller", f"unknown controller {controller!r}")])
            return
        doc = session.scenario_doc
        if "scenario" in msg:
            try:
                doc = resolve_scenario(msg["scenario"])
            except ScenarioError as exc:
                self._send(writer, [_error_frame("bad_scenario", str(exc))])
                return
            problems = validate_scenario(doc)
            if problems:
                self._send(writer, [_error_frame("bad_scenario", "; ".join(problems))])
                return
        session.scenario_doc = doc
        session.controller = controller
        session.reset(session.seed)

    def _send(self, writer: asyncio.StreamWriter, frames: list[dict[str, Any]]) -> None:
        if writer.is_closing():
            return
        transport = writer.transport
        for frame in frames:
            droppable = frame["type"] in ("state_frame", "belief_frame")
            if droppable and transport.get_write_buffer_size() > WRITE_BUFFER_LIMIT:
                continue
            writer.write(json.dumps(frame, separators=(",", ":")).encode() + b"\n")

    def _append_episode_log(self, session: Session, end_frame: dict[str, Any]) -> None:
        if self.log_path is None:
            return
        path = Path(self.log_path)
        r = end_frame["result"]
        row = (
            f"{session.controller},{session.seed},{r['target'] or ''},"
            f"{r['success']},{r['human_input_steps']},{r['trajectory_length']!r},"
            f"{r['wall_steps']},{r['grasp_type_used'] or ''}\n"
        )
        if not path.exists():
            path.write_text(EPISODE_LOG_HEADER + row)
        else:
            with path.open("a") as fh:
                fh.write(row)


def serve(
    port: int = DEFAULT_PORT,
    scenario: str | Mapping[str, Any] = "household15",
    controller: str = "shared",
    seed: int = 0,
    log_path: Optional[str] = None,
) -> None:
    """Blocking entry point used by the CLI."""
    server = SessionServer(
        scenario=scenario, controller=controller, seed=seed, log_path=log_path
    )
    try:
        asyncio.run(server.run(port))
    except KeyboardInterrupt:
        pass
