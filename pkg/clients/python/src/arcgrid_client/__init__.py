"""Thin remote-environment client for the arcgrid session service.

A handle mirrors the conventional reset/step interface: reset returns
(observation, info) and step returns (observation, reward, terminated,
truncated, info), with observations being the service's JSON documents.
All grid semantics live on the server; the client only moves bytes.
"""

from .remote_env import (
    EpisodeOverError,
    IllegalActionError,
    RemoteEnvHandle,
    RemoteServiceError,
    sample_bbox_action,
)

__all__ = [
    "EpisodeOverError",
    "IllegalActionError",
    "RemoteEnvHandle",
    "RemoteServiceError",
    "sample_bbox_action",
]
