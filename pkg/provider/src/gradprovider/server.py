"""Single-threaded request loop for the line protocol.

One JSON object per line in, one per line out. A malformed request gets an
`ok: false` response and the loop continues; `shutdown` gets `ok: true`
and stops it. Request ids must strictly increase within one connection.
"""

from __future__ import annotations

import json
import socket
import sys

import numpy as np


class ProviderServer:
    def __init__(self, model):
        self.model = model
        self._last_id = 0

    def reset_connection(self) -> None:
        self._last_id = 0

    def _error(self, rid, message: str) -> dict:
        return {"id": rid, "ok": False, "error": message}

    def _parse_batch(self, req: dict) -> np.ndarray:
        shape = req.get("shape")
        if shape is not None and tuple(int(d) for d in shape) != tuple(self.model.input_shape):
            raise ValueError(
                f"request shape {shape} does not match model shape "
                f"{list(self.model.input_shape)}"
            )
        inputs = req.get("inputs")
        if not isinstance(inputs, list) or not inputs:
            raise ValueError("inputs must be a non-empty list of rows")
        X = np.array(inputs, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.model.input_size:
            raise ValueError(
                f"input rows must have {self.model.input_size} values"
            )
        if not np.all(np.isfinite(X)):
            raise ValueError("inputs contain non-finite values")
        return X

    def _parse_target(self, req: dict) -> int:
        target = req.get("target")
        if not isinstance(target, int) or isinstance(target, bool):
            raise ValueError("target must be an integer")
        if not 0 <= target < self.model.num_classes:
            raise ValueError(
                f"target {target} out of range for {self.model.num_classes} classes"
            )
        return target

    def handle_line(self, line: str) -> tuple[str, bool]:
        """(response line, continue_serving) for one raw request line."""
        try:
            req = json.loads(line)
        except json.JSONDecodeError as exc:
            return json.dumps(self._error(None, f"request is not valid JSON: {exc}")), True
        if not isinstance(req, dict):
            return json.dumps(self._error(None, "request must be a JSON object")), True
        rid = req.get("id")
        if not isinstance(rid, int) or isinstance(rid, bool):
            return json.dumps(self._error(None, "request id must be an integer")), True
        if rid <= self._last_id:
            return (
                json.dumps(self._error(
                    rid, f"request id {rid} must exceed previous id {self._last_id}"
                )),
                True,
            )
        self._last_id = rid
        op = req.get("op")
        if op == "meta":
            resp = {
                "id": rid,
                "ok": True,
                "meta": {
                    "name": self.model.name,
                    "shape": [int(d) for d in self.model.input_shape],
                    "classes": int(self.model.num_classes),
                },
            }
            return json.dumps(resp), True
        if op == "shutdown":
            return json.dumps({"id": rid, "ok": True}), False
        if op not in ("forward", "grad"):
            return json.dumps(self._error(rid, f"unknown op {op!r}")), True
        try:
            X = self._parse_batch(req)
            target = self._parse_target(req)
            if op == "forward":
                probs = self.model.forward_batch(X, target)
                payload = {"probs": [float(p) for p in probs]}
            else:
                grads = self.model.grad_batch(X, target)
                payload = {"grads": [[float(g) for g in row] for row in grads]}
        except ValueError as exc:
            return json.dumps(self._error(rid, str(exc))), True
        return json.dumps({"id": rid, "ok": True, **payload}), True

    def serve_stream(self, rfile, wfile) -> bool:
        """Serve one connection; True when stopped by a shutdown request."""
        self.reset_connection()
        for line in rfile:
            if not line.strip():
                continue
            response, keep_going = self.handle_line(line)
            wfile.write(response + "\n")
            wfile.flush()
            if not keep_going:
                return True
        return False


def serve_stdio(server: ProviderServer) -> int:
    server.serve_stream(sys.stdin, sys.stdout)
    return 0


def serve_tcp(server: ProviderServer, port: int, host: str = "127.0.0.1") -> int:
    srv = socket.create_server((host, port))
    bound = srv.getsockname()[1]
    print(f"listening on {host}:{bound}", file=sys.stderr, flush=True)
    try:
        while True:
            conn, _ = srv.accept()
            with conn:
                rfile = conn.makefile("r", encoding="utf-8")
                wfile = conn.makefile("w", encoding="utf-8")
                if server.serve_stream(rfile, wfile):
                    return 0
    finally:
        srv.close()


def serve(model, tcp_port=None) -> int:
    """Run until shutdown; stdio by default, TCP when a port is given."""
    server = ProviderServer(model)
    if tcp_port is None:
        return serve_stdio(server)
    return serve_tcp(server, tcp_port)
