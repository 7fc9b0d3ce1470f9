"""Command line interface: check, plan, serve, replay.

Exit codes: 0 = valid/solved, 2 = violations or no path, 1 = error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .capacity import load_chart_csv
from .crane import CraneState, load_crane_spec
from .errors import LiftSimError, NoPath
from .paths import LiftPath, check_path, load_path_file
from .planner import LatticeSpec, plan_path, snap_to_lattice
from .scene import load_scene_file
from .session import SessionRecord, frame_stream_bytes, replay


def _add_site_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scene", required=True, help="scene JSON file")
    parser.add_argument("--crane", required=True, help="crane spec JSON file")
    parser.add_argument("--chart", required=True, help="load chart CSV file")


def _load_site(args):
    scene = load_scene_file(args.scene)
    spec = load_crane_spec(args.crane)
    chart = load_chart_csv(args.chart)
    return scene, spec, chart


def _state_ref(ref: str, scene) -> CraneState:
    if ref == "pick":
        return scene.pick_state
    if ref == "set":
        return scene.set_state
    with open(ref, "r", encoding="utf-8") as fh:
        return CraneState.from_json(json.load(fh))


def _default_lattice() -> LatticeSpec:
    return LatticeSpec(
        steps={"swing": math.radians(5.0), "luff": math.radians(2.0), "hoist": 1.0}
    )


def cmd_check(args) -> int:
    scene, spec, chart = _load_site(args)
    path = load_path_file(args.path)
    result = check_path(scene, spec, chart, path, resolution=args.resolution)
    print(json.dumps(result.to_json(), indent=2))
    return 0 if result.valid else 2


def cmd_plan(args) -> int:
    scene, spec, chart = _load_site(args)
    start = _state_ref(args.from_ref, scene)
    goal = _state_ref(args.to_ref, scene)
    if args.lattice:
        with open(args.lattice, "r", encoding="utf-8") as fh:
            lattice = LatticeSpec.from_json(json.load(fh))
    else:
        lattice = _default_lattice()
    for label, state in (("start", start), ("goal", goal)):
        _, snap = snap_to_lattice(state, lattice)
        if snap > 0:
            print(f"{label} snapped to lattice by {snap:.6g}", file=sys.stderr)
    try:
        path = plan_path(scene, spec, chart, start, goal, lattice)
    except NoPath as exc:
        print(json.dumps({"no_path": True, "reason": str(exc)}, indent=2))
        return 2
    doc = path.to_json()
    print(json.dumps(doc, indent=2))
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2), encoding="utf-8")
        print(f"path written to {args.out}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    scene, spec, chart = _load_site(args)
    print(
        f"liftsim serving on ws://{args.host}:{args.port}/ws "
        f"(dt={args.dt:.4f}s, {'paced' if not args.lockstep else 'lockstep'})",
        file=sys.stderr,
    )
    serve(
        scene,
        spec,
        chart,
        host=args.host,
        port=args.port,
        dt=args.dt,
        paced=not args.lockstep,
        static_dir=args.static,
    )
    return 0


def cmd_replay(args) -> int:
    scene, spec, chart = _load_site(args)
    with open(args.record, "r", encoding="utf-8") as fh:
        record = SessionRecord.from_json(json.load(fh))
    frames = list(replay(record, scene, spec, chart))
    data = frame_stream_bytes(frames) + b"\n"
    if args.out:
        Path(args.out).write_bytes(data)
        print(f"{len(frames)} frames written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(data)
    return 0


def cmd_demo(args) -> int:
    from .demo import write_demo

    paths = write_demo(args.dir)
    for name, p in paths.items():
        print(f"{name}: {p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liftsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a lift path for violations")
    _add_site_args(p)
    p.add_argument("--path", required=True, help="path JSON file")
    p.add_argument("--resolution", type=float, default=0.25, help="sampling resolution (m)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("plan", help="plan a lift path on the lattice")
    _add_site_args(p)
    p.add_argument("--from", dest="from_ref", default="pick", help="'pick', 'set', or state JSON file")
    p.add_argument("--to", dest="to_ref", default="set", help="'pick', 'set', or state JSON file")
    p.add_argument("--lattice", help="lattice spec JSON file")
    p.add_argument("--out", help="write the planned path JSON here")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("serve", help="run the WebSocket telemetry server")
    _add_site_args(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8710)
    p.add_argument("--dt", type=float, default=1.0 / 30.0, help="timestep seconds")
    p.add_argument("--lockstep", action="store_true", help="step only on control messages")
    p.add_argument("--static", help="static directory for the browser client")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", help="re-run a session record to telemetry JSONL")
    _add_site_args(p)
    p.add_argument("--record", required=True, help="session record JSON file")
    p.add_argument("--out", help="output JSONL file (default stdout)")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("demo", help="write the bundled demo site files")
    p.add_argument("dir", nargs="?", default="assets/demo")
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LiftSimError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
