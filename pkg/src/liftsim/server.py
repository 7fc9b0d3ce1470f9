"""WebSocket wire protocol: one driver steers a session, any number watch.

Messages are UTF-8 JSON envelopes {type, session, seq, payload}. The engine
never reads the wall clock; in paced mode a server task steps each session
at its timestep using the driver's latest control (last writer wins within
a tick), in lockstep mode the session advances exactly once per control
message, which makes transport tests deterministic.
"""
from __future__ import annotations

import asyncio
import json
import math
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from . import __version__
from .capacity import LoadChart
from .crane import CraneSpec, CraneState
from .errors import LiftSimError, NoPath, SnapError
from .paths import LiftPath, check_path
from .planner import LatticeSpec, plan_path
from .scene import Scene
from .session import ControlInput, Session, TelemetryFrame

DRIVER_TAKEN = "DRIVER_TAKEN"


@dataclass
class _LiveSession:
    engine: Session
    driver: WebSocket | None = None
    watchers: list[WebSocket] = field(default_factory=list)
    latest_control: ControlInput = ControlInput()
    task: asyncio.Task | None = None

    def subscribers(self) -> list[WebSocket]:
        subs = list(self.watchers)
        if self.driver is not None:
            subs.append(self.driver)
        return subs


def _envelope(msg_type: str, session: str | None, seq: int, payload) -> str:
    return json.dumps(
        {"type": msg_type, "session": session, "seq": seq, "payload": payload}
    )


def _frame_payload(frame: TelemetryFrame) -> dict:
    return frame.to_json()


def create_app(
    scene: Scene,
    spec: CraneSpec,
    chart: LoadChart,
    dt: float = 1.0 / 30.0,
    paced: bool = True,
    static_dir: str | None = None,
) -> FastAPI:
    """Build the service; one scene/crane/chart per server, many sessions."""
    app = FastAPI(title="liftsim", version=__version__)
    sessions: dict[str, _LiveSession] = {}

    async def broadcast_frame(live: _LiveSession, frame: TelemetryFrame) -> None:
        text = _envelope("frame", live.engine.id, frame.tick, _frame_payload(frame))
        for ws in live.subscribers():
            try:
                await ws.send_text(text)
            except Exception:
                pass  # dropped subscriber; cleaned up on its disconnect

    async def pace_loop(live: _LiveSession) -> None:
        try:
            while not live.engine.closed:
                await asyncio.sleep(live.engine.dt)
                frame = live.engine.step(live.latest_control)
                await broadcast_frame(live, frame)
        except asyncio.CancelledError:
            pass

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        joined: list[tuple[_LiveSession, str]] = []
        try:
            while True:
                try:
                    msg = json.loads(await ws.receive_text())
                except json.JSONDecodeError:
                    await ws.send_text(
                        _envelope("error", None, 0, {"code": "BAD_JSON", "message": "invalid JSON"})
                    )
                    continue
                msg_type = msg.get("type")
                seq = int(msg.get("seq", 0))
                payload = msg.get("payload") or {}
                sid = msg.get("session")

                if msg_type == "hello":
                    await ws.send_text(
                        _envelope("hello", None, seq, {"server": "liftsim", "version": __version__})
                    )

                elif msg_type == "create_session":
                    req_dt = float(payload.get("dt", dt))
                    engine = Session(scene, spec, chart, req_dt)
                    live = _LiveSession(engine=engine)
                    sessions[engine.id] = live
                    if paced:
                        live.task = asyncio.create_task(pace_loop(live))
                    await ws.send_text(
                        _envelope(
                            "session_created",
                            engine.id,
                            seq,
                            {"dt": engine.dt, "tick": engine.tick},
                        )
                    )

                elif msg_type == "join":
                    live = sessions.get(sid)
                    if live is None:
                        await ws.send_text(
                            _envelope("error", sid, seq, {"code": "NO_SESSION", "message": f"unknown session {sid!r}"})
                        )
                        continue
                    role = payload.get("role", "watcher")
                    if role == "driver":
                        if live.driver is not None:
                            await ws.send_text(
                                _envelope("error", sid, seq, {"code": DRIVER_TAKEN, "message": "session already has a driver"})
                            )
                            continue
                        live.driver = ws
                    else:
                        role = "watcher"
                        live.watchers.append(ws)
                    joined.append((live, role))
                    await ws.send_text(
                        _envelope("joined", sid, seq, {"role": role})
                    )
                    await ws.send_text(
                        _envelope("frame", sid, live.engine.last_frame.tick, _frame_payload(live.engine.last_frame))
                    )

                elif msg_type == "control":
                    live = sessions.get(sid)
                    if live is None or live.driver is not ws:
                        await ws.send_text(
                            _envelope("error", sid, seq, {"code": "NOT_DRIVER", "message": "control requires the driver role"})
                        )
                        continue
                    control = ControlInput.from_json(payload)
                    live.latest_control = control
                    if not paced:
                        frame = live.engine.step(control)
                        await broadcast_frame(live, frame)

                elif msg_type == "full_clearance_request":
                    live = sessions.get(sid)
                    if live is None:
                        await ws.send_text(
                            _envelope("error", sid, seq, {"code": "NO_SESSION", "message": f"unknown session {sid!r}"})
                        )
                        continue
                    records = live.engine.full_clearance()
                    await ws.send_text(
                        _envelope(
                            "full_clearance_response",
                            sid,
                            seq,
                            {"tick": live.engine.tick, "records": [r.to_json() for r in records]},
                        )
                    )

                elif msg_type == "check_path":
                    try:
                        path = LiftPath.from_json(payload["path"])
                        resolution = float(payload.get("resolution", 0.25))
                        result = check_path(scene, spec, chart, path, resolution)
                        await ws.send_text(
                            _envelope("check_path_result", sid, seq, result.to_json())
                        )
                    except LiftSimError as exc:
                        await ws.send_text(
                            _envelope("error", sid, seq, {"code": type(exc).__name__, "message": str(exc)})
                        )

                elif msg_type == "plan_path":
                    try:
                        start = _resolve_state(payload.get("from", "pick"), scene)
                        goal = _resolve_state(payload.get("to", "set"), scene)
                        lattice = _resolve_lattice(payload.get("lattice"), spec)
                        path = plan_path(scene, spec, chart, start, goal, lattice)
                        await ws.send_text(
                            _envelope("plan_path_result", sid, seq, path.to_json())
                        )
                    except (NoPath, SnapError, LiftSimError) as exc:
                        await ws.send_text(
                            _envelope("error", sid, seq, {"code": type(exc).__name__, "message": str(exc)})
                        )

                elif msg_type == "scene_request":
                    from .scene import scene_to_document

                    await ws.send_text(
                        _envelope(
                            "scene_response",
                            sid,
                            seq,
                            {
                                "scene": scene_to_document(scene),
                                "crane": _crane_payload(spec),
                            },
                        )
                    )

                else:
                    await ws.send_text(
                        _envelope("error", sid, seq, {"code": "BAD_TYPE", "message": f"unknown message type {msg_type!r}"})
                    )
        except WebSocketDisconnect:
            pass
        finally:
            for live, role in joined:
                if role == "driver" and live.driver is ws:
                    live.driver = None
                elif ws in live.watchers:
                    live.watchers.remove(ws)

    @app.get("/healthz")
    async def healthz():
        return {"ok": True, "sessions": len(sessions)}

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="client")

    app.state.sessions = sessions
    return app


def _crane_payload(spec: CraneSpec) -> dict:
    from .crane import crane_spec_to_document

    return crane_spec_to_document(spec)


def _resolve_state(ref, scene: Scene) -> CraneState:
    if ref == "pick":
        return scene.pick_state
    if ref == "set":
        return scene.set_state
    return CraneState.from_json(ref)


def _resolve_lattice(doc, spec: CraneSpec) -> LatticeSpec:
    if doc:
        return LatticeSpec.from_json(doc)
    return LatticeSpec(
        steps={
            "swing": math.radians(5.0),
            "luff": math.radians(2.0),
            "hoist": 1.0,
        }
    )


def serve(
    scene: Scene,
    spec: CraneSpec,
    chart: LoadChart,
    host: str = "127.0.0.1",
    port: int = 8710,
    dt: float = 1.0 / 30.0,
    paced: bool = True,
    static_dir: str | None = None,
) -> None:
    """Run the service until interrupted; raises BindError when the port is taken."""
    import socket

    import uvicorn

    from .errors import BindError

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise BindError(f"cannot bind {host}:{port}: {exc}") from exc
    finally:
        probe.close()

    app = create_app(scene, spec, chart, dt=dt, paced=paced, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
