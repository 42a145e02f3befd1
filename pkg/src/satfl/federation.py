"""Server/client model state and aggregation rules.

The asynchronous rule applies each satellite's delta scaled by its data
share the moment the upload completes; the synchronous baseline waits for
one update from every satellite before averaging.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ServerState:
    """Ground-station side of the federation: global model and bookkeeping."""

    params: np.ndarray
    weights: dict[int, float]          # satellite id -> D_k / D
    epoch: int = 0
    last_upload: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        total = sum(self.weights.values())
        if self.weights and abs(total - 1.0) > 1e-9:
            raise ValueError(f"aggregation weights must sum to 1, got {total}")


@dataclass
class ClientState:
    """Satellite-side training pipeline state."""

    satellite_id: int
    local_count: int = 0
    cached_global: np.ndarray | None = None
    download_time_s: float | None = None
    download_epoch: int | None = None
    pending_update: np.ndarray | None = None
    prev_upload: np.ndarray | None = None


@dataclass(frozen=True)
class UpdateMessage:
    """One completed local update arriving at the ground station."""

    satellite_id: int
    prev_params: np.ndarray
    new_params: np.ndarray
    download_time_s: float
    download_epoch: int


@dataclass(frozen=True)
class StalenessRecord:
    satellite_id: int
    upload_time_s: float
    time_staleness_s: float
    epoch_staleness: int


def fedsat_aggregate(server: ServerState, msg: UpdateMessage) -> ServerState:
    """Asynchronous update: w <- w - alpha_k * (prev - new); epoch += 1.

    On a satellite's first upload, prev_params is the global model it first
    downloaded, which makes the single-satellite case reduce to plain
    sequential SGD.
    """
    if msg.satellite_id not in server.weights:
        raise ValueError(f"satellite {msg.satellite_id} is not registered")
    if msg.prev_params.shape != server.params.shape:
        raise ValueError("update dimension does not match the global model")
    alpha = server.weights[msg.satellite_id]
    server.params = server.params - alpha * (msg.prev_params - msg.new_params)
    server.epoch += 1
    server.last_upload[msg.satellite_id] = msg.new_params
    return server


def fedavg_sync_aggregate(
    server: ServerState, updates: dict[int, np.ndarray]
) -> ServerState:
    """Synchronous round: weighted average of one update per satellite."""
    missing = set(server.weights) - set(updates)
    if missing:
        raise ValueError(
            f"synchronous aggregation requires all satellites; missing {sorted(missing)}"
        )
    new = np.zeros_like(server.params)
    for k, alpha in server.weights.items():
        if updates[k].shape != server.params.shape:
            raise ValueError("update dimension does not match the global model")
        new += alpha * updates[k]
    server.params = new
    server.epoch += 1
    for k in server.weights:
        server.last_upload[k] = updates[k]
    return server


def record_staleness(
    msg: UpdateMessage, now_s: float, server: ServerState
) -> StalenessRecord:
    """Age of the model the update was computed from, in time and epochs."""
    return StalenessRecord(
        satellite_id=msg.satellite_id,
        upload_time_s=now_s,
        time_staleness_s=now_s - msg.download_time_s,
        epoch_staleness=server.epoch - msg.download_epoch,
    )
