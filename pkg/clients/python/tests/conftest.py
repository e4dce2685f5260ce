import json
import socket
import threading
import time

import pytest
import uvicorn

from arcgrid.service import ServiceConfig, create_app


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture(scope="session")
def service(tmp_path_factory):
    root = tmp_path_factory.mktemp("arc")
    (root / "training").mkdir()
    (root / "evaluation").mkdir()
    identity = {
        "train": [{"input": [[1, 2], [3, 4]], "output": [[1, 2], [3, 4]]}],
        "test": [{"input": [[5, 6], [7, 8]], "output": [[5, 6], [7, 8]]}],
    }
    (root / "training" / "identity.json").write_text(json.dumps(identity))

    port = free_port()
    config = ServiceConfig(data_roots={"arc": root})
    server = uvicorn.Server(uvicorn.Config(
        create_app(config), host="127.0.0.1", port=port, log_level="warning"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("service did not start")
        time.sleep(0.02)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)
