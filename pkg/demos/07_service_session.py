"""
The HTTP session service
========================

One session = one environment behind a JSON API. This demo starts the
service on a local port, creates a session on a generated task, steps it
with a bbox selection and a painted (run-length) mask, and reads the
recorded trace back.

The same API is what the web UI and the remote-env client consume.
"""

import json
import threading
import time
import urllib.request

import uvicorn

from arcgrid.service import ServiceConfig, create_app

PORT = 8807
BASE = f"http://127.0.0.1:{PORT}"


def call(method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(BASE + path, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


server = uvicorn.Server(uvicorn.Config(create_app(ServiceConfig()), port=PORT,
                                       log_level="warning"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)

doc = call("POST", "/v1/sessions", {
    "dataset": "generated", "task_id": "gen-5x5-c4-s1",
    "preset": "o2arc", "expose_answer": True,
})
sid = doc["session_id"]
print("session", sid)
print("grid:", doc["observation"]["grid"])

step = call("POST", f"/v1/sessions/{sid}/step", {
    "operation": 7, "selection": {"bbox": [0, 0, 1, 1]},
})
print("after Color7 over (0,0)-(1,1):", step["observation"]["grid"][:2])

step = call("POST", f"/v1/sessions/{sid}/step", {
    "operation": 3,
    "selection": {"mask": {"dims": [5, 5], "runs": [12, 1, 12]}},  # center cell
})
print("after Color3 at the center:  ", step["observation"]["grid"][2])

trace = call("GET", f"/v1/sessions/{sid}/trace")
print("trace kinds:", [r["kind"] for r in trace])

server.should_exit = True
thread.join(timeout=5)
