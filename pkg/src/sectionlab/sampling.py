"""Sampling of random hyperplane sections of convex bodies.

Isotropic uniformly random (IUR) sections are drawn by rejection: the
body is centered at its centroid, enclosed in a sphere of radius R, a
direction is drawn uniformly on the sphere and an offset uniformly on
(0, R); proposals whose plane misses the body are rejected.  Accepted
section volumes are distributed like the volume of an IUR section.

Fixed-orientation (FUR) sections skip rejection: for a fixed direction
the offset is uniform on the body's support interval.

Proposals are sharded over ``workers`` independent substreams and merged
in stream order, so results are reproducible for a fixed worker count
regardless of execution schedule.  Each proposal consumes exactly ``dim``
uniforms from its stream, which makes the draws independent of the
internal batch size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import EmptySample
from .geometry import (
    ConvexBody,
    section_volumes,
    support_interval,
    translate_body,
    validate_body,
    _check_direction,
)
from .rng import RngStream

_BATCH = 1 << 15


@dataclass
class SectionSample:
    """A seeded batch of section volumes with acceptance bookkeeping."""

    values: np.ndarray
    n_proposed: int
    n_accepted: int
    seed: int
    body_label: str
    dim: int
    workers: int = 1

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.n_accepted != len(self.values):
            raise ValueError("n_accepted must equal len(values)")
        if self.n_accepted > self.n_proposed:
            raise ValueError("cannot accept more than proposed")
        if (self.values < 0).any():
            raise ValueError("section volumes must be nonnegative")

    @property
    def has_zero_values(self) -> bool:
        """True when a degenerate (grazing) section produced a 0 volume."""
        return bool((self.values == 0.0).any())


def sample_direction(dim: int, rng: RngStream) -> np.ndarray:
    """One isotropic unit vector; see ``sample_directions``."""
    gen = rng.generator()
    return _directions_from_uniforms(gen.random((1, dim)))[0]


def _directions_from_uniforms(u: np.ndarray) -> np.ndarray:
    """Map uniform rows to isotropic directions.

    2D: angle 2*pi*u0.  3D: longitude 2*pi*u0 and cosine of the polar
    angle uniform on (-1, 1) from u1, the standard area-preserving
    construction.
    """
    dim = u.shape[1]
    phi = 2.0 * np.pi * u[:, 0]
    if dim == 2:
        return np.column_stack([np.cos(phi), np.sin(phi)])
    x = 2.0 * u[:, 1] - 1.0
    sin_om = np.sqrt(np.maximum(1.0 - x * x, 0.0))
    return np.column_stack([sin_om * np.cos(phi), sin_om * np.sin(phi), x])


def sample_directions(dim: int, size: int, rng: RngStream) -> np.ndarray:
    """(size, dim) isotropic unit vectors from one stream."""
    if dim not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    gen = rng.generator()
    return _directions_from_uniforms(gen.random((size, dim)))


def enclosing_radius(body: ConvexBody) -> float:
    """Radius of the centroid-centered ball enclosing the body."""
    if body.kind == "ball":
        return float(body.radius)
    d = body.vertices - body.centroid
    return float(np.sqrt((d * d).sum(axis=1).max()))


def sample_iur_sections(body: ConvexBody, size: int, rng: RngStream,
                        workers: int = 1, batch_size: int = _BATCH
                        ) -> SectionSample:
    """Exactly ``size`` i.i.d. IUR section volumes of ``body``.

    The body is recentered at its centroid and enclosed in the smallest
    centroid-centered sphere before rejection sampling.  Worker ``w``
    draws its quota from substream ``rng.derive(w)``; accepted values are
    concatenated in worker order.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    validate_body(body)
    centered = translate_body(body, -body.centroid)
    radius = enclosing_radius(centered)

    quotas = [size // workers + (1 if w < size % workers else 0)
              for w in range(workers)]
    chunks, proposed = [], 0
    for w, quota in enumerate(quotas):
        if quota == 0:
            continue
        vals, nprop = _worker_draws(centered, radius, quota,
                                    rng.derive(w), batch_size)
        chunks.append(vals)
        proposed += nprop
    return SectionSample(
        values=np.concatenate(chunks),
        n_proposed=proposed,
        n_accepted=size,
        seed=rng.seed,
        body_label=body.label,
        dim=body.dim,
        workers=workers,
    )


def _worker_draws(body, radius, quota, stream, batch_size):
    gen = stream.generator()
    dim = body.dim
    got, nprop = 0, 0
    parts = []
    while got < quota:
        u = gen.random((batch_size, dim))
        thetas = _directions_from_uniforms(u)
        offsets = radius * u[:, dim - 1]
        if body.kind == "ball":
            hits = offsets <= body.radius  # always true: radius == R
        else:
            d = body.vertices @ thetas.T
            hits = (offsets >= d.min(axis=0)) & (offsets <= d.max(axis=0))
        csum = np.cumsum(hits)
        if csum[-1] >= quota - got:
            # stop at the proposal delivering the last needed acceptance
            last = int(np.searchsorted(csum, quota - got))
            hits[last + 1:] = False
            nprop += last + 1
        else:
            nprop += batch_size
        idx = np.nonzero(hits)[0]
        if idx.size:
            parts.append(section_volumes(body, thetas[idx], offsets[idx]))
            got += idx.size
    return np.concatenate(parts), nprop


def sample_fur_sections(body: ConvexBody, theta, size: int,
                        rng: RngStream) -> SectionSample:
    """Fixed-orientation sections: offset uniform on the support interval."""
    if size < 1:
        raise ValueError("size must be >= 1")
    theta = _check_direction(theta)
    validate_body(body)
    sup = support_interval(body, theta)
    gen = rng.generator()
    offsets = sup.a + sup.width * gen.random(size)
    thetas = np.broadcast_to(theta, (size, body.dim))
    values = section_volumes(body, thetas, offsets)
    return SectionSample(values=values, n_proposed=size, n_accepted=size,
                         seed=rng.seed, body_label=body.label, dim=body.dim)


def acceptance_estimate(sample: SectionSample) -> float:
    """Fraction of proposals accepted; estimates mean width / (2 R)."""
    if sample.n_proposed <= 0:
        raise EmptySample("sample contains no proposals")
    return sample.n_accepted / sample.n_proposed


# ---------------------------------------------------------------------------
# Sample files


def save_sample_csv(sample: SectionSample, path, config: dict | None = None
                    ) -> None:
    """One value per line, metadata as leading comment lines."""
    with open(path, "w") as fh:
        fh.write(f"# body_label: {sample.body_label}\n")
        fh.write(f"# dim: {sample.dim}\n")
        fh.write(f"# seed: {sample.seed}\n")
        fh.write(f"# n_proposed: {sample.n_proposed}\n")
        fh.write(f"# n_accepted: {sample.n_accepted}\n")
        fh.write(f"# workers: {sample.workers}\n")
        if config is not None:
            fh.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
        for v in sample.values:
            fh.write(f"{float(v)!r}\n")


def load_sample_csv(path) -> SectionSample:
    meta, values = {}, []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition(":")
                meta[key.strip()] = val.strip()
            else:
                values.append(float(line))
    return SectionSample(
        values=np.array(values),
        n_proposed=int(meta["n_proposed"]),
        n_accepted=int(meta["n_accepted"]),
        seed=int(meta["seed"]),
        body_label=meta.get("body_label", "body"),
        dim=int(meta["dim"]),
        workers=int(meta.get("workers", 1)),
    )


def save_sample_json(sample: SectionSample, path, config: dict | None = None
                     ) -> None:
    payload = {
        "values": sample.values.tolist(),
        "n_proposed": sample.n_proposed,
        "n_accepted": sample.n_accepted,
        "seed": sample.seed,
        "body_label": sample.body_label,
        "dim": sample.dim,
        "workers": sample.workers,
    }
    if config is not None:
        payload["config"] = config
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_sample_json(path) -> SectionSample:
    with open(path) as fh:
        payload = json.load(fh)
    return SectionSample(
        values=np.array(payload["values"], dtype=float),
        n_proposed=payload["n_proposed"],
        n_accepted=payload["n_accepted"],
        seed=payload["seed"],
        body_label=payload["body_label"],
        dim=payload["dim"],
        workers=payload.get("workers", 1),
    )
