import threading
import time

import pytest
import uvicorn

from modelserver.app import create_app
from modelserver.config import ServerConfig


class RunningServer:
    """uvicorn in a daemon thread on an ephemeral port."""

    def __init__(self, config: ServerConfig):
        app = create_app(config)
        self._uv = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0,
                                                 log_level="warning"))
        self._thread = threading.Thread(target=self._uv.run, daemon=True)

    def start(self) -> "RunningServer":
        self._thread.start()
        deadline = time.time() + 10
        while not self._uv.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        return self

    @property
    def endpoint(self) -> str:
        sock = self._uv.servers[0].sockets[0]
        return f"http://127.0.0.1:{sock.getsockname()[1]}"

    def stop(self) -> None:
        self._uv.should_exit = True
        self._thread.join(timeout=5)


HERMETIC = ServerConfig(embedding_model="hash:64", generation_model="lead:2",
                        max_text_chars=500, max_context_words=60)


@pytest.fixture(scope="session")
def server():
    running = RunningServer(HERMETIC).start()
    yield running
    running.stop()


@pytest.fixture(scope="session")
def endpoint(server):
    return server.endpoint
