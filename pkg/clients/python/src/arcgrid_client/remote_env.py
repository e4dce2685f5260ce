"""Remote environment handle over the session service HTTP API."""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np
import requests


class RemoteServiceError(Exception):
    """The service rejected a request (carries the HTTP status)."""

    def __init__(self, status: int, message: str):
        self.status = status
        super().__init__(f"HTTP {status}: {message}")


class EpisodeOverError(RemoteServiceError):
    """step() was called after the episode terminated or truncated (409)."""


class IllegalActionError(RemoteServiceError):
    """The operation or selection was rejected by the service (422)."""


BBoxAction = tuple[int, int, int, int, int]  # (r0, c0, r1, c1, operation)


def sample_bbox_action(rng: np.random.Generator, dims: Sequence[int],
                       allowed_ops: Sequence[int]) -> BBoxAction:
    """Uniform random 5-tuple over a grid of the given dims.

    Matches the sampling used by the server-side rollout tooling so
    fixed-seed runs agree across components.
    """
    h, w = dims
    r0, r1 = (int(v) for v in rng.integers(0, h, size=2))
    c0, c1 = (int(v) for v in rng.integers(0, w, size=2))
    op = allowed_ops[int(rng.integers(len(allowed_ops)))]
    return (r0, c0, r1, c1, int(op))


def _encode_mask(mask: np.ndarray) -> dict:
    """Run-length encode a boolean mask (zeros-first alternating runs)."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    flat = mask.ravel().astype(np.int8)
    boundaries = np.flatnonzero(np.diff(flat)) + 1
    runs = np.diff(np.concatenate(([0], boundaries, [flat.size]))).tolist()
    if flat[0] == 1:
        runs = [0] + runs
    return {"dims": [h, w], "runs": runs}


class RemoteEnvHandle:
    """One handle = one service session.

    Session options (dataset, split, task_id, preset, adaptation,
    pair_index, seed, expose_answer, reward_mode, max_steps) are given at
    construction; reset() creates the session lazily and starts new
    episodes on the same task afterwards.
    """

    def __init__(self, base_url: str, *, http: requests.Session | None = None,
                 timeout: float = 30.0, **session_options: Any):
        self.base_url = base_url.rstrip("/")
        self.options = session_options
        self.session_id: str | None = None
        self.observation: dict | None = None
        self.timeout = timeout
        self._http = http or requests.Session()

    # -- plumbing ---------------------------------------------------------

    def _raise_for(self, resp: requests.Response) -> None:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        if resp.status_code == 409:
            raise EpisodeOverError(resp.status_code, detail)
        if resp.status_code == 422:
            raise IllegalActionError(resp.status_code, detail)
        raise RemoteServiceError(resp.status_code, detail)

    def _post(self, path: str, body: dict) -> dict:
        resp = self._http.post(self.base_url + path, json=body, timeout=self.timeout)
        if resp.status_code >= 400:
            self._raise_for(resp)
        return resp.json()

    def _get(self, path: str, params: dict | None = None) -> Any:
        resp = self._http.get(self.base_url + path, params=params, timeout=self.timeout)
        if resp.status_code >= 400:
            self._raise_for(resp)
        return resp.json()

    # -- the conventional env surface --------------------------------------

    def reset(self, **overrides: Any) -> tuple[dict, dict]:
        """Create the session (first call) or start a new episode.

        Returns (observation, info); info carries the session id.
        """
        if self.session_id is None:
            doc = self._post("/v1/sessions", {**self.options, **overrides})
            self.session_id = doc["session_id"]
        else:
            body = {k: overrides[k] for k in ("adaptation", "pair_index", "seed")
                    if k in overrides}
            doc = self._post(f"/v1/sessions/{self.session_id}/reset", body)
        self.observation = doc["observation"]
        return self.observation, {"session_id": self.session_id}

    def step(self, action) -> tuple[dict, float, bool, bool, dict]:
        """Apply one action; returns (obs, reward, terminated, truncated, info).

        Accepts a 5-tuple (r0, c0, r1, c1, op), an (op, mask) pair with a
        boolean numpy mask (or None), or a ready request document.
        """
        if self.session_id is None:
            raise EpisodeOverError(409, "reset() must be called before step()")
        body = self._action_document(action)
        doc = self._post(f"/v1/sessions/{self.session_id}/step", body)
        self.observation = doc["observation"]
        return (
            doc["observation"],
            float(doc["reward"]),
            bool(doc["terminated"]),
            bool(doc["truncated"]),
            doc.get("info", {}),
        )

    @staticmethod
    def _action_document(action) -> dict:
        if isinstance(action, dict):
            return action
        if isinstance(action, (tuple, list)) and len(action) == 5:
            r0, c0, r1, c1, op = (int(v) for v in action)
            return {"operation": op, "selection": {"bbox": [r0, c0, r1, c1]}}
        if isinstance(action, (tuple, list)) and len(action) == 2:
            op, mask = action
            selection = None if mask is None else {"mask": _encode_mask(mask)}
            return {"operation": int(op), "selection": selection}
        raise ValueError(f"unsupported action form: {action!r}")

    # -- extras --------------------------------------------------------------

    def state(self) -> dict:
        """The current observation document from GET /state."""
        if self.session_id is None:
            raise EpisodeOverError(409, "no session yet")
        self.observation = self._get(f"/v1/sessions/{self.session_id}/state")
        return self.observation

    def trace(self) -> list[dict]:
        if self.session_id is None:
            return []
        return self._get(f"/v1/sessions/{self.session_id}/trace")

    def grid_dims(self) -> tuple[int, int]:
        if self.observation is None:
            raise EpisodeOverError(409, "reset() must be called first")
        h, w = self.observation["grid_dim"]
        return int(h), int(w)

    def allowed_ops(self) -> list[int]:
        presets = self._get("/v1/presets")
        name = self.options.get("preset", "o2arc")
        return list(presets[name]["allowed_ops"])

    def close(self) -> None:
        self._http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
