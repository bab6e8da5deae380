"""Client for external gradient providers speaking the line protocol.

One UTF-8 JSON object per line; requests carry strictly increasing ids and
the client keeps exactly one request in flight per connection. See
PROTOCOL.md for the wire contract and golden traces.
"""

from __future__ import annotations

import json
import os
import select
import shlex
import socket
import subprocess
import time

import numpy as np

from .errors import ProtocolError, ProviderError, TransportError
from .models import DifferentiableModel

DEFAULT_TIMEOUT = 30.0


class _LineChannel:
    """Blocking line-oriented channel with a receive deadline."""

    def send_line(self, line: str) -> None:
        raise NotImplementedError

    def recv_line(self, timeout: float) -> str:
        raise NotImplementedError

    def close(self) -> None:
        raise NotImplementedError


class StdioTransport(_LineChannel):
    """Child process served over its standard streams."""

    def __init__(self, argv: list[str]):
        try:
            self.proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                bufsize=0,
            )
        except OSError as exc:
            raise TransportError(f"cannot start provider {argv!r}: {exc}") from exc
        self._buf = b""

    def send_line(self, line: str) -> None:
        if self.proc.poll() is not None:
            raise TransportError("provider process has exited")
        try:
            self.proc.stdin.write(line.encode("utf-8") + b"\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise TransportError(f"provider pipe closed: {exc}") from exc

    def recv_line(self, timeout: float) -> str:
        fd = self.proc.stdout.fileno()
        deadline = time.monotonic() + timeout
        while b"\n" not in self._buf:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise TransportError(f"provider did not answer within {timeout} s")
            ready, _, _ = select.select([fd], [], [], remaining)
            if not ready:
                continue
            chunk = os.read(fd, 65536)
            if not chunk:
                raise TransportError("provider closed its output stream")
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line.decode("utf-8")

    def close(self) -> None:
        for stream in (self.proc.stdin, self.proc.stdout):
            try:
                stream.close()
            except OSError:
                pass
        try:
            self.proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            self.proc.wait()


class TcpTransport(_LineChannel):
    """Persistent provider behind a TCP endpoint."""

    def __init__(self, host: str, port: int, connect_timeout: float = DEFAULT_TIMEOUT):
        try:
            self.sock = socket.create_connection((host, port), timeout=connect_timeout)
        except OSError as exc:
            raise TransportError(f"cannot connect to {host}:{port}: {exc}") from exc
        self._buf = b""

    def send_line(self, line: str) -> None:
        try:
            self.sock.sendall(line.encode("utf-8") + b"\n")
        except OSError as exc:
            raise TransportError(f"send failed: {exc}") from exc

    def recv_line(self, timeout: float) -> str:
        deadline = time.monotonic() + timeout
        while b"\n" not in self._buf:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise TransportError(f"provider did not answer within {timeout} s")
            self.sock.settimeout(remaining)
            try:
                chunk = self.sock.recv(65536)
            except socket.timeout:
                continue
            except OSError as exc:
                raise TransportError(f"receive failed: {exc}") from exc
            if not chunk:
                raise TransportError("provider closed the connection")
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line.decode("utf-8")

    def close(self) -> None:
        try:
            self.sock.close()
        except OSError:
            pass


def _parse_endpoint(endpoint) -> _LineChannel:
    if isinstance(endpoint, (list, tuple)):
        return StdioTransport(list(endpoint))
    spec = str(endpoint)
    if spec.startswith("tcp:"):
        rest = spec[4:]
        host, sep, port = rest.rpartition(":")
        if not sep or not port.isdigit():
            raise TransportError(f"bad TCP endpoint {spec!r}; expected tcp:host:port")
        return TcpTransport(host or "127.0.0.1", int(port))
    if spec.startswith("stdio:"):
        spec = spec[6:]
    argv = shlex.split(spec)
    if not argv:
        raise TransportError("empty provider command")
    return StdioTransport(argv)


class RemoteModel(DifferentiableModel):
    """DifferentiableModel served by an external process over the protocol."""

    def __init__(self, transport: _LineChannel, timeout: float = DEFAULT_TIMEOUT):
        self.transport = transport
        self.timeout = timeout
        self._next_id = 1
        meta = self._request({"op": "meta"}).get("meta")
        if not isinstance(meta, dict):
            raise ProtocolError("meta response lacks a meta object")
        try:
            shape = tuple(int(d) for d in meta["shape"])
            classes = int(meta["classes"])
        except (KeyError, TypeError, ValueError):
            raise ProtocolError(f"malformed meta payload: {meta!r}") from None
        if not shape or any(d < 1 for d in shape) or classes < 1:
            raise ProtocolError(f"invalid meta shape/classes: {meta!r}")
        self.input_shape = shape
        self.num_classes = classes
        self.name = str(meta.get("name", ""))

    @classmethod
    def connect(cls, endpoint, timeout: float = DEFAULT_TIMEOUT) -> "RemoteModel":
        """endpoint: argv list, 'stdio:<command line>', or 'tcp:host:port'."""
        return cls(_parse_endpoint(endpoint), timeout=timeout)

    def _request(self, fields: dict) -> dict:
        req_id = self._next_id
        self._next_id += 1
        payload = {"op": fields.pop("op"), "id": req_id, **fields}
        self.transport.send_line(json.dumps(payload))
        line = self.transport.recv_line(self.timeout)
        try:
            resp = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"provider sent invalid JSON: {exc}") from None
        if not isinstance(resp, dict):
            raise ProtocolError("provider response is not an object")
        if resp.get("id") != req_id:
            raise ProtocolError(
                f"response id {resp.get('id')!r} does not echo request id {req_id}"
            )
        if not resp.get("ok"):
            raise ProviderError(str(resp.get("error") or "provider reported an error"))
        return resp

    def _input_payload(self, X: np.ndarray) -> dict:
        return {
            "inputs": [[float(v) for v in row] for row in np.asarray(X, dtype=np.float64)],
            "shape": list(self.input_shape),
        }

    def forward_array(self, X: np.ndarray, target: int) -> np.ndarray:
        resp = self._request({"op": "forward", "target": int(target), **self._input_payload(X)})
        probs = resp.get("probs")
        if not isinstance(probs, list) or len(probs) != len(X):
            raise ProtocolError("probs payload missing or of wrong length")
        arr = np.array(probs, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ProtocolError("probs payload contains non-finite values")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ProtocolError("probs payload leaves [0, 1]")
        return arr

    def grad_array(self, X: np.ndarray, target: int) -> np.ndarray:
        resp = self._request({"op": "grad", "target": int(target), **self._input_payload(X)})
        grads = resp.get("grads")
        if not isinstance(grads, list) or len(grads) != len(X):
            raise ProtocolError("grads payload missing or of wrong length")
        size = int(np.prod(self.input_shape))
        try:
            arr = np.array(grads, dtype=np.float64)
        except ValueError:
            raise ProtocolError("grads payload is ragged") from None
        if arr.ndim != 2 or arr.shape[1] != size:
            raise ProtocolError(
                f"grads rows must have {size} values, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ProtocolError("grads payload contains non-finite values")
        return arr

    def shutdown(self) -> None:
        """Best-effort clean stop; transport errors during shutdown are ignored."""
        try:
            self._request({"op": "shutdown"})
        except (TransportError, ProviderError):
            pass

    def close(self) -> None:
        self.shutdown()
        self.transport.close()

    def __enter__(self) -> "RemoteModel":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
