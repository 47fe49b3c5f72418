"""
sequences.py

Seeded stream generators. Every random draw comes from numpy's Philox
counter-based generator keyed by (seed, stream id): uniforms take the top 53
bits of each raw 64-bit word, Gaussians are their inverse normal CDF. Streams
are therefore bit-reproducible on any platform.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.random import Philox
from scipy.special import ndtri

from ell1reg.config import FLOAT_FORMAT
from ell1reg.core import Round
from ell1reg.errors import DimensionError

logger = logging.getLogger("ell1reg")

# Stream ids keep independent draws apart under a single seed
_INPUTS, _OBSERVATIONS, _NOISE, _SUPPORT, _SIGNS, _WEIGHTS = range(6)

GENERATOR_KINDS = ("uniform", "sparse", "sinusoidal", "alternating", "file")


@dataclass(frozen=True)
class StreamConfig:
    d: int
    T: int
    X: float = 1.0
    Y: float = 1.0
    seed: int = 0
    kind: str = "uniform"

    def __post_init__(self):
        if self.d < 1 or self.T < 1:
            raise DimensionError(f"Need d >= 1 and T >= 1, got d={self.d}, T={self.T}")
        if self.X < 0 or self.Y < 0:
            raise ValueError(f"Bounds must be nonnegative, got X={self.X}, Y={self.Y}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"Seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"Unknown generator {self.kind!r}; choose from {', '.join(GENERATOR_KINDS)}")


def _bit_generator(seed: int, stream: int) -> Philox:
    return Philox(key=np.array([seed, stream], dtype=np.uint64))


def philox_uniforms(seed: int, size, stream: int = 0) -> np.ndarray:
    """Uniforms on the open interval (0, 1), 53 bits each"""
    count = int(np.prod(size))
    raw = _bit_generator(seed, stream).random_raw(count)
    uniforms = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
    return uniforms.reshape(size)


def philox_normals(seed: int, size, stream: int = 0) -> np.ndarray:
    """Standard normals by inverse CDF of `philox_uniforms`"""
    return ndtri(philox_uniforms(seed, size, stream))


def _symmetric(seed: int, size, stream: int, radius: float) -> np.ndarray:
    # + 0.0 turns the -0.0 of a zero radius into 0.0
    return radius * (2.0 * philox_uniforms(seed, size, stream) - 1.0) + 0.0


def _to_rounds(inputs: np.ndarray, observations: np.ndarray) -> List[Round]:
    return [Round(x, float(y)) for x, y in zip(inputs, observations)]


def gen_uniform_bounded(cfg: StreamConfig) -> List[Round]:
    """x entries uniform on [-X, X], y uniform on [-Y, Y]"""
    inputs = _symmetric(cfg.seed, (cfg.T, cfg.d), _INPUTS, cfg.X)
    observations = _symmetric(cfg.seed, cfg.T, _OBSERVATIONS, cfg.Y)
    return _to_rounds(inputs, observations)


def gen_sparse_linear(cfg: StreamConfig, sparsity: int, noise: float, U: float = 1.0) -> Tuple[List[Round], np.ndarray]:
    """y_t = [u*.x_t + noise eps_t]_Y with a `sparsity`-sparse u*, ||u*||_1 = U"""
    if not 1 <= sparsity <= cfg.d:
        raise ValueError(f"Sparsity must lie in [1, {cfg.d}], got {sparsity}")
    if noise < 0 or U <= 0:
        raise ValueError(f"Need noise >= 0 and U > 0, got noise={noise}, U={U}")

    support = np.argsort(philox_uniforms(cfg.seed, cfg.d, _SUPPORT), kind="stable")[:sparsity]
    signs = np.where(philox_uniforms(cfg.seed, sparsity, _SIGNS) < 0.5, -1.0, 1.0)
    weights = philox_uniforms(cfg.seed, sparsity, _WEIGHTS)
    u_star = np.zeros(cfg.d)
    u_star[support] = U * signs * weights / weights.sum()

    inputs = _symmetric(cfg.seed, (cfg.T, cfg.d), _INPUTS, cfg.X)
    clean = inputs @ u_star
    observations = np.clip(clean + noise * philox_normals(cfg.seed, cfg.T, _NOISE), -cfg.Y, cfg.Y)
    logger.debug(f"sparse stream: support {sorted(support.tolist())}, ||u*||_1={np.abs(u_star).sum():.6g}")
    return _to_rounds(inputs, observations), u_star


def gen_sinusoidal_model(cfg: StreamConfig, u, gamma: float, sigma: float) -> List[Round]:
    """x_t = (gamma sqrt2 sin(j X_t))_j with X_t uniform on [-pi, pi]; y_t = u.x_t + sigma eps_t"""
    u = np.asarray(u, dtype=float)
    if u.shape != (cfg.d,):
        raise DimensionError(f"Weight vector has shape {u.shape}, expected ({cfg.d},)")
    if np.abs(u).sum() > 1.0 + 1e-12:
        raise ValueError(f"Weight vector must satisfy ||u||_1 <= 1, got {np.abs(u).sum():.6g}")
    if gamma <= 0 or sigma < 0:
        raise ValueError(f"Need gamma > 0 and sigma >= 0, got gamma={gamma}, sigma={sigma}")

    angles = math.pi * (2.0 * philox_uniforms(cfg.seed, cfg.T, _INPUTS) - 1.0)
    frequencies = np.arange(1, cfg.d + 1)
    inputs = gamma * math.sqrt(2.0) * np.sin(np.outer(angles, frequencies))
    observations = inputs @ u + sigma * philox_normals(cfg.seed, cfg.T, _NOISE)
    return _to_rounds(inputs, observations)


def gen_alternating_sign(cfg: StreamConfig) -> List[Round]:
    """x_t = (-1)^(t-1) X 1 flips every round; y_t = (-1)^floor((t-1)/2) Y flips every other round"""
    t = np.arange(cfg.T)
    x_sign = np.where(t % 2 == 0, 1.0, -1.0)
    y_sign = np.where((t // 2) % 2 == 0, 1.0, -1.0)
    inputs = np.outer(x_sign * cfg.X, np.ones(cfg.d)) + 0.0
    return _to_rounds(inputs, y_sign * cfg.Y + 0.0)


def write_stream_csv(rounds: Sequence[Round], path) -> Path:
    """Dump a stream as `t,y,x_1..x_d` with 17 significant digits"""
    path = Path(path)
    if len(rounds) == 0:
        raise ValueError("Stream is empty")
    d = rounds[0].d
    frame = pd.DataFrame(np.vstack([r.x for r in rounds]), columns=[f"x_{j}" for j in range(1, d + 1)])
    frame.insert(0, "y", [r.y for r in rounds])
    frame.insert(0, "t", np.arange(1, len(rounds) + 1))
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Wrote {len(rounds)} rounds (d={d}) to {path}")
    return path


def read_stream_csv(path) -> List[Round]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Stream file not found: {path}")
    frame = pd.read_csv(path, float_precision="round_trip")
    x_columns = [column for column in frame.columns if column.startswith("x_")]
    expected = ["t", "y"] + [f"x_{j}" for j in range(1, len(x_columns) + 1)]
    if list(frame.columns) != expected or not x_columns:
        raise DimensionError(f"{path}: header must be t,y,x_1..x_d, got {','.join(frame.columns)}")
    logger.info(f"Read {len(frame)} rounds (d={len(x_columns)}) from {path}")
    return _to_rounds(frame[x_columns].to_numpy(dtype=float), frame["y"].to_numpy(dtype=float))


def generate_stream(
    cfg: StreamConfig,
    sparsity: Optional[int] = None,
    noise: float = 0.0,
    U: float = 1.0,
    u=None,
    gamma: float = 1.0,
    sigma: float = 0.0,
    path=None,
) -> List[Round]:
    """Dispatch on `cfg.kind`; `file` streams ignore every other field"""
    if cfg.kind == "uniform":
        return gen_uniform_bounded(cfg)
    if cfg.kind == "sparse":
        rounds, _ = gen_sparse_linear(cfg, sparsity or min(3, cfg.d), noise, U)
        return rounds
    if cfg.kind == "sinusoidal":
        weights = np.zeros(cfg.d) if u is None else np.asarray(u, dtype=float)
        if u is None:
            weights[0] = 1.0
        return gen_sinusoidal_model(cfg, weights, gamma, sigma)
    if cfg.kind == "alternating":
        return gen_alternating_sign(cfg)
    if path is None:
        raise ValueError("A file stream needs a path")
    return read_stream_csv(path)
