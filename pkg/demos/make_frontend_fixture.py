"""Record a swing session and write thinned frames for the frontend tests.

Run:  python demos/make_frontend_fixture.py
Writes frontend/tests/fixtures/swing_replay.json
"""
import json
from pathlib import Path

from liftsim import ControlInput, Session
from liftsim.demo import demo_chart, demo_crane, demo_scene
from liftsim.scene import scene_to_document

scene = demo_scene()
session = Session(scene, demo_crane(), demo_chart(), dt=1 / 20)

frames = [session.last_frame]
for _ in range(300):  # hoist clear of the tank
    frames.append(session.step(ControlInput(hoist=-1.0)))
for _ in range(393):  # quarter-turn swing
    frames.append(session.step(ControlInput(swing=1.0)))

thinned = [f.to_json() for f in frames[::10]]
out = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"
out.mkdir(parents=True, exist_ok=True)
doc = {
    "dt": session.dt,
    "scene": scene_to_document(scene),
    "frames": thinned,
}
(out / "swing_replay.json").write_text(json.dumps(doc), encoding="utf-8")
print(f"wrote {out / 'swing_replay.json'} ({len(thinned)} frames)")
