"""Batch proposal: one exploit slot, two Thompson-incumbent EI slots, one
explore slot.

The first iteration has no preference data, so the batch is four points of a
scrambled Sobol sequence.  Afterwards each slot maximizes its own acquisition
over the unit cube with a random multistart plus coordinate-grid refinement.
Everything is driven by an explicit seed, so proposals are reproducible.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr
from scipy.stats import qmc

from ..mesh.core import ReductionParams
from .model import PreferenceModel, predict_many

SLOT_ROLES = ("exploit", "thompson_ei", "thompson_ei", "explore")

_SEED_STRIDE = 100003


def iteration_seed(session_seed: int, iteration: int) -> int:
    """Derive the proposal seed for one iteration of a session."""
    return (session_seed * _SEED_STRIDE + iteration) % (2 ** 31)


_N_START = 256
_REFINE_PASSES = 2
_REFINE_GRID = 33
_MIN_SEPARATION = 1e-3
_DIM = 9


def _expected_improvement(mean, var, incumbent):
    sd = np.sqrt(np.maximum(var, 1e-18))
    gap = mean - incumbent
    z = gap / sd
    pdf = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    return gap * ndtr(z) + sd * pdf


def _refine(x0: np.ndarray, objective) -> np.ndarray:
    """Cyclic coordinate search on a fixed grid; deterministic."""
    x = x0.copy()
    grid = np.linspace(0.0, 1.0, _REFINE_GRID)
    for _ in range(_REFINE_PASSES):
        for dim in range(_DIM):
            trials = np.repeat(x[None, :], _REFINE_GRID, axis=0)
            trials[:, dim] = grid
            values = objective(trials)
            best = int(np.argmax(values))
            current = float(objective(x[None, :])[0])
            if values[best] > current:
                x = trials[best]
    return x


def _maximize(objective, rng: np.random.Generator,
              anchors: np.ndarray | None = None) -> np.ndarray:
    starts = rng.random((_N_START, _DIM))
    if anchors is not None and len(anchors):
        # observed inputs are the best-informed starts; without them the
        # multistart only sees the smooth global trend of the posterior,
        # whose maximizer sits at a cube corner far from the data
        starts = np.vstack([starts, anchors])
    values = objective(starts)
    best = starts[int(np.argmax(values))]
    return _refine(best, objective)


def propose_batch(model: PreferenceModel, seed: int, batch_size: int = 4) -> list[ReductionParams]:
    """Propose the next batch of parameter sets (see SLOT_ROLES)."""
    if batch_size != len(SLOT_ROLES):
        raise ValueError(f"batch size is fixed at {len(SLOT_ROLES)}")
    if model.n_inputs == 0:
        sampler = qmc.Sobol(d=_DIM, scramble=True, seed=seed)
        pts = sampler.random(batch_size)
        while _too_close(pts):
            pts = np.concatenate([pts, sampler.random(1)])[-batch_size:]
        return [ReductionParams.from_array(np.clip(p, 0.0, 1.0)) for p in pts]

    rng = np.random.default_rng(seed)

    def mean_only(pts):
        mean, _ = predict_many(model, pts)
        return mean

    def var_only(pts):
        _, var = predict_many(model, pts)
        return var

    chosen: list[np.ndarray] = []
    chosen.append(_maximize(mean_only, rng, anchors=model.x))

    for _ in range(2):
        draw = model.f_mode + model.sigma_chol @ rng.standard_normal(model.n_inputs)
        incumbent = float(draw.max())

        def ei(pts, incumbent=incumbent):
            mean, var = predict_many(model, pts)
            return _expected_improvement(mean, var, incumbent)

        chosen.append(_maximize(ei, rng, anchors=model.x))

    chosen.append(_maximize(var_only, rng))

    # duplicates collapse the batch's information; re-draw offenders randomly
    for idx in range(1, len(chosen)):
        guard = 0
        while any(np.max(np.abs(chosen[idx] - chosen[k])) <= _MIN_SEPARATION
                  for k in range(idx)):
            chosen[idx] = rng.random(_DIM)
            guard += 1
            if guard > 100:
                raise RuntimeError("could not separate batch proposals")

    return [ReductionParams.from_array(np.clip(p, 0.0, 1.0)) for p in chosen]


def _too_close(pts: np.ndarray) -> bool:
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.max(np.abs(pts[i] - pts[j])) <= _MIN_SEPARATION:
                return True
    return False
