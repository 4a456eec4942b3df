import json
import random
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from driftwatch.config import load_config
from driftwatch.store import Store


@pytest.fixture
def cfg():
    return load_config(None)


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path / "store")


class StubWebhook:
    """In-process HTTP endpoint that records POSTs and scripts its replies."""

    def __init__(self):
        self.requests: list[dict] = []
        self.status_script: list[int] = []  # pop-from-front; 200 when empty
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length") or 0)
                body = self.rfile.read(length)
                outer.requests.append(
                    {
                        "path": self.path,
                        "content_type": self.headers.get("Content-Type"),
                        "body": json.loads(body) if body else None,
                    }
                )
                status = outer.status_script.pop(0) if outer.status_script else 200
                self.send_response(status)
                self.send_header("Content-Length", "2")
                self.end_headers()
                self.wfile.write(b"{}")

            def log_message(self, *args):
                pass

        self.server = HTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def url(self) -> str:
        host, port = self.server.server_address
        return f"http://{host}:{port}/hook"

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def webhook():
    stub = StubWebhook()
    yield stub
    stub.close()


def random_table_csv(rng: random.Random, rows: int = 60) -> bytes:
    """Synthetic dataset with numeric, categorical, and text columns."""
    lines = ["num,cat,txt"]
    for _ in range(rows):
        num = "" if rng.random() < 0.05 else f"{rng.gauss(50, 10):.4f}"
        cat = rng.choice(["red", "green", "blue"])
        txt = "" if rng.random() < 0.1 else f"free-text-{rng.randrange(10**6)}"
        lines.append(f"{num},{cat},{txt}")
    return ("\n".join(lines) + "\n").encode()
