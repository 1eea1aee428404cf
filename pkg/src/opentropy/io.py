"""Channel JSON files and CSV emission.

Channel file (schema 1)::

    {"schema": 1, "dim_in": 2, "dim_out": 2, "label": "identity2",
     "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}

``kraus`` is a list of operators, each a list of rows, each row a list of
``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import math
from typing import IO, Iterable

import numpy as np

from .channel import KrausChannel, validate
from .errors import DimensionMismatch, OpentropyError

SCHEMA_VERSION = 1
LN2 = math.log(2.0)


class ChannelFileError(OpentropyError):
    pass


def channel_to_dict(ch: KrausChannel) -> dict:
    ops = [
        [[[float(z.real), float(z.imag)] for z in row] for row in op]
        for op in ch.operators
    ]
    out = {"schema": SCHEMA_VERSION, "dim_in": ch.dim_in, "dim_out": ch.dim_out, "kraus": ops}
    if ch.label:
        out["label"] = ch.label
    return out


def channel_from_dict(data: dict, tol: float = 1e-9) -> KrausChannel:
    """Build and validate a channel; raises :class:`ChannelFileError` or a validation error."""
    if not isinstance(data, dict):
        raise ChannelFileError("channel file must contain a JSON object")
    schema = data.get("schema")
    if schema != SCHEMA_VERSION:
        raise ChannelFileError(f"unsupported schema version {schema!r}")
    try:
        dim_in = int(data["dim_in"])
        dim_out = int(data["dim_out"])
        kraus = data["kraus"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ChannelFileError(f"missing or malformed field: {exc}") from None
    try:
        arr = np.asarray(kraus, dtype=float)
    except (TypeError, ValueError):
        raise ChannelFileError("kraus entries must be [re, im] number pairs") from None
    if arr.ndim != 4 or arr.shape[-1] != 2 or arr.shape[0] == 0:
        raise ChannelFileError(f"kraus must have shape (m, dim_out, dim_in, 2), got {arr.shape}")
    if arr.shape[1:3] != (dim_out, dim_in):
        raise DimensionMismatch(
            f"operators are {arr.shape[1]}x{arr.shape[2]}, header says {dim_out}x{dim_in}"
        )
    if not np.all(np.isfinite(arr)):
        raise ChannelFileError("kraus entries must be finite")
    ch = KrausChannel(arr[..., 0] + 1j * arr[..., 1], label=str(data.get("label", "")))
    validate(ch, tol)
    return ch


def write_channel(ch: KrausChannel, fh: IO[str]) -> None:
    json.dump(channel_to_dict(ch), fh, indent=1)
    fh.write("\n")


def read_channel(path: str, tol: float = 1e-9) -> KrausChannel:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ChannelFileError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise ChannelFileError(f"{path}: {exc.strerror}") from None
    return channel_from_dict(data, tol)


def fmt(x: float) -> str:
    """Shortest round-trip decimal for a float."""
    return repr(float(x))


def log_divisor(base: str) -> float:
    """Entropies in nats are divided by this on output: 1 for base e, ln 2 for bits."""
    if base == "e":
        return 1.0
    if base == "2":
        return LN2
    raise ValueError(f"log base must be 'e' or '2', got {base!r}")


def write_points_csv(fh: IO[str], s: Iterable[float], s_tilde: Iterable[float],
                     tags: Iterable[str], divisor: float = 1.0) -> None:
    """Rows ``index,S,Stilde,tag``, entropies divided by ``divisor``."""
    fh.write("index,S,Stilde,tag\n")
    for i, (a, b, t) in enumerate(zip(s, s_tilde, tags)):
        fh.write(f"{i},{fmt(a / divisor)},{fmt(b / divisor)},{t}\n")
