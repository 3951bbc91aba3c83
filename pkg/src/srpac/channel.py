"""BPSK over AWGN and the Eb/N0 bookkeeping.

Unit-energy BPSK: a rate-``R`` code at ``Eb/N0`` sees noise variance
``1 / (2 R Eb/N0)`` per real dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def ebn0_to_sigma2(ebn0_db: float, rate: float) -> float:
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate {rate} outside (0, 1]")
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    rate: float
    seed: int = 0

    @property
    def noise_variance(self) -> float:
        return ebn0_to_sigma2(self.ebn0_db, self.rate)


def bpsk_modulate(c) -> np.ndarray:
    """``s = 1 - 2c``."""
    return 1.0 - 2.0 * np.asarray(c, dtype=np.float64)


def awgn(s, params, rng: np.random.Generator) -> np.ndarray:
    """Add zero-mean Gaussian noise; ``params`` is ChannelParams or a variance."""
    var = params.noise_variance if isinstance(params, ChannelParams) else float(params)
    if not var > 0.0:
        raise ValueError(f"noise variance must be positive, got {var}")
    s = np.asarray(s, dtype=np.float64)
    return s + np.sqrt(var) * rng.standard_normal(s.shape)


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent Philox stream addressed by ``(seed, *key)``.

    Streams never overlap and do not depend on the order in which they are
    created, so work can be split across workers freely.
    """
    ss = np.random.SeedSequence(int(seed) & ((1 << 64) - 1), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def llr(y, sigma2: float) -> np.ndarray:
    return 2.0 * np.asarray(y, dtype=np.float64) / sigma2
