"""Remote-provider bridge: transports, validation, and golden traces.

A stub provider (tests/provider_stub.py) speaks the line protocol over
stdio; fault modes drive each client-side validation branch. The golden
files under golden/ pin the exact wire exchange of a fixed two-run job.
"""

import json
import socket
import sys
import threading
from pathlib import Path

import numpy as np
import pytest

from igsched import (
    LogisticScalar,
    PathSpec,
    ProtocolError,
    ProviderError,
    RemoteModel,
    TargetSpec,
    Tensor,
    TransportError,
    nonuniform_ig,
    uniform_ig,
)
from igsched.remote import StdioTransport

from provider_stub import serve_lines

STUB = str(Path(__file__).with_name("provider_stub.py"))
GOLDEN = Path(__file__).resolve().parent.parent / "golden"

# Local twin of the stub's model and the fixed golden job results.
GOLDEN_UNIFORM_PHI = (0.24521943813328495, -0.12260971906664248)
GOLDEN_NONUNIFORM_PHI = (0.24499366840453016, -0.12249683420226508)


def _argv(mode: str = "ok") -> list:
    return [sys.executable, STUB, mode]


def _path2() -> PathSpec:
    return PathSpec(
        input=Tensor(np.array([1.0, 0.5])),
        baseline=Tensor(np.zeros(2)),
        target=TargetSpec(1),
    )


class RecordingTransport(StdioTransport):
    def __init__(self, argv):
        super().__init__(argv)
        self.sent = []

    def send_line(self, line):
        self.sent.append(line)
        super().send_line(line)


class ReplayTransport:
    """Asserts each outgoing line against a script and plays back answers."""

    def __init__(self, requests, responses):
        self.requests = list(requests)
        self.responses = list(responses)
        self.cursor = 0

    def send_line(self, line):
        assert line == self.requests[self.cursor]

    def recv_line(self, timeout):
        line = self.responses[self.cursor]
        self.cursor += 1
        return line

    def close(self):
        pass


def test_meta_handshake():
    with RemoteModel.connect(_argv()) as model:
        assert model.input_shape == (2,)
        assert model.num_classes == 2
        assert model.name == "stub-logistic"


def test_forward_and_grad_match_local_twin():
    local = LogisticScalar([1.0, -1.0])
    X = np.array([[0.0, 0.0], [1.0, 0.5], [0.3, 0.9]])
    with RemoteModel.connect(_argv()) as model:
        for target in (0, 1):
            np.testing.assert_array_equal(
                model.forward_array(X, target), local.forward_array(X, target)
            )
            np.testing.assert_array_equal(
                model.grad_array(X, target), local.grad_array(X, target)
            )


def test_attribution_through_bridge_matches_local():
    local = LogisticScalar([1.0, -1.0])
    path = _path2()
    with RemoteModel.connect(_argv()) as model:
        ru = uniform_ig(model, path, 2)
        rn = nonuniform_ig(model, path, 4, 2)
    np.testing.assert_array_equal(ru.phi.data, uniform_ig(local, path, 2).phi.data)
    np.testing.assert_array_equal(rn.phi.data, nonuniform_ig(local, path, 4, 2).phi.data)


def test_request_ids_strictly_increase_and_lines_are_newline_free():
    transport = RecordingTransport(_argv())
    model = RemoteModel(transport)
    X = np.array([[0.1, 0.2]])
    model.forward_array(X, 1)
    model.grad_array(X, 1)
    model.close()
    ids = [json.loads(line)["id"] for line in transport.sent]
    assert ids == [1, 2, 3, 4]
    assert all("\n" not in line for line in transport.sent)


def test_provider_error_carries_message():
    with RemoteModel.connect(_argv("refuse")) as model:
        with pytest.raises(ProviderError, match="refused by stub"):
            model.forward_array(np.array([[0.0, 0.0]]), 1)


@pytest.mark.parametrize("mode,complaint", [
    ("garbage", "invalid JSON"),
    ("bad-probs", r"leaves \[0, 1\]"),
    ("nan-grads", "non-finite"),
    ("ragged-grads", "ragged|rows must have"),
    ("wrong-id", "does not echo"),
])
def test_protocol_violations_are_rejected(mode, complaint):
    transport = StdioTransport(_argv(mode))
    model = RemoteModel(transport)
    X = np.array([[0.25, 0.5]])
    with pytest.raises(ProtocolError, match=complaint):
        model.grad_array(X, 1)
        model.forward_array(X, 1)
    transport.proc.kill()
    transport.proc.wait()


def test_timeout_raises_transport_error():
    transport = StdioTransport(_argv("slow"))
    model = RemoteModel(transport, timeout=0.3)
    with pytest.raises(TransportError, match="did not answer within"):
        model.forward_array(np.array([[0.0, 0.0]]), 1)
    transport.proc.kill()
    transport.proc.wait()


def test_dead_provider_raises_transport_error():
    model = RemoteModel(StdioTransport(_argv("die")))
    with pytest.raises(TransportError, match="closed its output stream"):
        model.forward_array(np.array([[0.0, 0.0]]), 1)
    # Later calls fail too; the exact complaint depends on reap timing.
    with pytest.raises(TransportError):
        model.forward_array(np.array([[0.0, 0.0]]), 1)
    model.transport.close()


def test_unlaunchable_provider_raises_transport_error():
    with pytest.raises(TransportError, match="cannot start provider"):
        RemoteModel.connect(["/nonexistent/provider-binary"])


def test_bad_endpoint_specs():
    with pytest.raises(TransportError, match="expected tcp:host:port"):
        RemoteModel.connect("tcp:no-port-here")
    with pytest.raises(TransportError, match="empty provider command"):
        RemoteModel.connect("stdio:")


def test_tcp_transport_round_trip():
    srv = socket.create_server(("127.0.0.1", 0))
    port = srv.getsockname()[1]

    def serve_one():
        conn, _ = srv.accept()
        with conn:
            serve_lines(conn.makefile("r", encoding="utf-8"),
                        conn.makefile("w", encoding="utf-8"))

    thread = threading.Thread(target=serve_one, daemon=True)
    thread.start()
    local = LogisticScalar([1.0, -1.0])
    X = np.array([[0.7, 0.1]])
    with RemoteModel.connect(f"tcp:127.0.0.1:{port}") as model:
        assert model.name == "stub-logistic"
        np.testing.assert_array_equal(
            model.forward_array(X, 1), local.forward_array(X, 1)
        )
    thread.join(timeout=5)
    srv.close()


def test_tcp_connection_refused():
    srv = socket.create_server(("127.0.0.1", 0))
    port = srv.getsockname()[1]
    srv.close()
    with pytest.raises(TransportError, match="cannot connect"):
        RemoteModel.connect(f"tcp:127.0.0.1:{port}")


def test_shutdown_exits_provider_cleanly():
    transport = StdioTransport(_argv())
    model = RemoteModel(transport)
    model.close()
    assert transport.proc.returncode == 0


def test_golden_request_trace_is_reproduced():
    expected = (GOLDEN / "requests.jsonl").read_text().splitlines()
    transport = RecordingTransport(_argv())
    model = RemoteModel(transport)
    path = _path2()
    uniform_ig(model, path, 2)
    nonuniform_ig(model, path, 4, 2)
    model.close()
    assert transport.sent == expected


def test_golden_response_trace_drives_engine_to_frozen_result():
    requests = (GOLDEN / "requests.jsonl").read_text().splitlines()
    responses = (GOLDEN / "responses.jsonl").read_text().splitlines()
    assert len(requests) == len(responses)
    transport = ReplayTransport(requests, responses)
    model = RemoteModel(transport)
    path = _path2()
    ru = uniform_ig(model, path, 2)
    rn = nonuniform_ig(model, path, 4, 2)
    model.close()
    assert transport.cursor == len(responses)
    assert tuple(float(v) for v in ru.phi.data) == GOLDEN_UNIFORM_PHI
    assert tuple(float(v) for v in rn.phi.data) == GOLDEN_NONUNIFORM_PHI
