"""Reference gradient provider for the line-delimited attribution protocol.

Serves forward-pass probabilities and input gradients for either a
mirrored builtin model loaded from a text weights file or a user-supplied
model object, over stdio or TCP. The wire contract lives in the engine
repository's PROTOCOL.md; this package has no dependency on the engine.
"""

from .models import (
    AffineMirror,
    LinearSoftmaxMirror,
    LogisticMirror,
    MirroredModel,
    MLP2Mirror,
    SharpSigmoidMirror,
)
from .server import ProviderServer, serve
from .weights import WeightsError, load_weights

__version__ = "0.1.0"

__all__ = [
    "AffineMirror",
    "LinearSoftmaxMirror",
    "LogisticMirror",
    "MLP2Mirror",
    "MirroredModel",
    "ProviderServer",
    "SharpSigmoidMirror",
    "WeightsError",
    "load_weights",
    "serve",
    "__version__",
]
