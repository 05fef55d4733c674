"""Random-telegraph fluctuator realizations.

A single fluctuator produces a vector field b(t) = (b_x(t), b_y(t), b_z(t))
whose components jump between +amplitude and -amplitude at Poisson-distributed
switching times with mean interval tau. In ``IN_PHASE`` mode one sign process
drives all three components (the fluctuator flips as a whole); in
``INDEPENDENT`` mode each component carries its own sign process.

Realizations are stored as event lists (initial sign plus ordered switch
times), which makes piecewise-constant propagation and phase integrals exact.
Random streams are counter-based (Philox) and keyed by
``(seed, realization_index)`` so serial and parallel runs generate identical
ensembles.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError, TimeRangeError


class CorrelationMode(Enum):
    IN_PHASE = "in_phase"
    INDEPENDENT = "independent"


COMPONENTS = ("x", "y", "z")


@dataclass(frozen=True)
class FluctuatorConfig:
    """Static fluctuator parameters, in angular-frequency units.

    Parameters
    ----------
    b_x, b_y, b_z:
        Field amplitudes (non-negative; the sign lives in the realization).
    tau:
        Mean time between successive switchings.
    mode:
        Whether all components share one sign process or switch independently.
    """

    b_x: float
    b_y: float
    b_z: float
    tau: float
    mode: CorrelationMode = CorrelationMode.IN_PHASE

    def __post_init__(self):
        if not (self.tau > 0 and np.isfinite(self.tau)):
            raise ParameterError(f"tau must be positive and finite, got {self.tau}")
        for name in ("b_x", "b_y", "b_z"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ParameterError(f"{name} must be finite and non-negative, got {v}")

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.b_x, self.b_y, self.b_z])


@dataclass(frozen=True)
class SignChannel:
    """One telegraph sign process: initial sign and ordered switch times.

    The sign at time t is ``initial_sign * (-1)**(number of switch times <= t)``.
    """

    initial_sign: int
    switch_times: np.ndarray
    t_max: float

    def __post_init__(self):
        if self.initial_sign not in (-1, 1):
            raise ParameterError("initial_sign must be +1 or -1")
        st = np.asarray(self.switch_times, dtype=float)
        if st.ndim != 1:
            raise ParameterError("switch_times must be one-dimensional")
        if st.size and (np.any(np.diff(st) <= 0) or st[0] <= 0 or st[-1] >= self.t_max):
            raise ParameterError("switch_times must be strictly increasing inside (0, t_max)")
        object.__setattr__(self, "switch_times", st)

    def sign_at(self, t):
        """Sign of the process at time(s) t (right-continuous at switches)."""
        flips = np.searchsorted(self.switch_times, t, side="right")
        return self.initial_sign * (-1.0) ** flips

    def signed_time(self, t):
        """Exact integral of the sign process from 0 to t (vectorized)."""
        t = np.asarray(t, dtype=float)
        ev = np.concatenate(([0.0], self.switch_times))
        seg_sign = self.initial_sign * (-1.0) ** np.arange(ev.size)
        seg_len = np.diff(np.concatenate((ev, [self.t_max])))
        cum = np.concatenate(([0.0], np.cumsum(seg_sign * seg_len)))
        k = np.searchsorted(ev, t, side="right") - 1
        return cum[k] + seg_sign[k] * (t - ev[k])


@dataclass(frozen=True)
class NoiseRealization:
    """One sampled trajectory of the fluctuator over [0, t_max].

    ``channels`` holds one SignChannel in IN_PHASE mode (shared by all
    components) and three (x, y, z) in INDEPENDENT mode.
    """

    t_max: float
    mode: CorrelationMode
    channels: tuple

    def channel_for(self, component: str) -> SignChannel:
        if self.mode is CorrelationMode.IN_PHASE:
            return self.channels[0]
        return self.channels[COMPONENTS.index(component)]


def realization_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for realization ``index`` of ensemble ``seed``."""
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _sample_switch_times(rng: np.random.Generator, tau: float, t_max: float) -> np.ndarray:
    if t_max == 0.0:
        return np.empty(0)
    chunks = []
    t_last = 0.0
    block = max(16, int(t_max / tau * 1.5) + 8)
    while True:
        cum = t_last + np.cumsum(rng.standard_exponential(block) * tau)
        inside = cum[cum < t_max]
        chunks.append(inside)
        if inside.size < cum.size:
            break
        t_last = cum[-1]
    return np.concatenate(chunks)


def sample_realization(cfg: FluctuatorConfig, t_max: float,
                       rng: np.random.Generator) -> NoiseRealization:
    """Draw one realization: equiprobable initial sign(s), exponential intervals.

    Inter-switch intervals are i.i.d. exponential with mean ``cfg.tau``; the
    switch count over [0, t_max] is then Poisson with mean t_max/tau.
    """
    if t_max < 0:
        raise ParameterError(f"t_max must be >= 0, got {t_max}")
    n_channels = 1 if cfg.mode is CorrelationMode.IN_PHASE else 3
    channels = []
    for _ in range(n_channels):
        s0 = 1 if rng.integers(0, 2) == 0 else -1
        channels.append(SignChannel(s0, _sample_switch_times(rng, cfg.tau, t_max), t_max))
    return NoiseRealization(t_max=t_max, mode=cfg.mode, channels=tuple(channels))


def field_at(real: NoiseRealization, cfg: FluctuatorConfig, t):
    """Field vector (b_x(t), b_y(t), b_z(t)); t may be a scalar or an array.

    Returns shape (3,) for scalar t and (3, len(t)) for array t.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > real.t_max):
        raise TimeRangeError(f"t outside [0, {real.t_max}]")
    signs = np.stack([real.channel_for(c).sign_at(t_arr) for c in COMPONENTS])
    out = cfg.amplitudes.reshape(3, *([1] * t_arr.ndim)) * signs
    return out if t_arr.ndim else out.reshape(3)


def integrate_bz(real: NoiseRealization, cfg: FluctuatorConfig,
                 t1: float, t2: float) -> float:
    """Exact phase integral of b_z(t) over [t1, t2] (no quadrature error)."""
    if not (0 <= t1 <= t2 <= real.t_max):
        raise TimeRangeError(f"need 0 <= t1 <= t2 <= {real.t_max}, got ({t1}, {t2})")
    ch = real.channel_for("z")
    return cfg.b_z * float(ch.signed_time(t2) - ch.signed_time(t1))


def switch_table(real: NoiseRealization):
    """Rows (channel, t_switch) for CSV dumps, one row per switching event."""
    rows = []
    names = ("shared",) if real.mode is CorrelationMode.IN_PHASE else COMPONENTS
    for name, ch in zip(names, real.channels):
        for t in ch.switch_times:
            rows.append((name, t))
    return rows


# ---------------------------------------------------------------------------
# Batched access for Monte Carlo inner loops.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealizationBatch:
    """Padded event arrays for a contiguous block of realizations.

    ``event_times`` has shape (n, K+2): column 0 is t=0, then the switch
    times, padded with t_max; the final column is always t_max. Segment k
    spans [event_times[:, k], event_times[:, k+1]); padding segments have
    zero length. Sign arrays give the segment sign per channel and repeat
    their last value over the padding.
    """

    t_max: float
    event_times: np.ndarray
    sign_x: np.ndarray
    sign_y: np.ndarray
    sign_z: np.ndarray
    first_index: int

    @property
    def n(self) -> int:
        return self.event_times.shape[0]

    @property
    def n_segments(self) -> int:
        return self.event_times.shape[1] - 1

    def segment_of(self, t: float) -> np.ndarray:
        """Index of the segment containing time t, per realization."""
        return np.sum(self.event_times <= t, axis=1) - 1

    def z_cumulative(self) -> np.ndarray:
        """Cumulative signed-time integral of the z sign at each event time."""
        seg_len = np.diff(self.event_times, axis=1)
        cum = np.cumsum(self.sign_z[:, :-1] * seg_len, axis=1)
        return np.concatenate([np.zeros((self.n, 1)), cum], axis=1)


def sample_realization_batch(cfg: FluctuatorConfig, t_max: float, seed: int,
                             first_index: int, count: int) -> RealizationBatch:
    """Sample ``count`` realizations (streams keyed by global seed + index)."""
    reals = [sample_realization(cfg, t_max, realization_stream(seed, first_index + i))
             for i in range(count)]
    in_phase = cfg.mode is CorrelationMode.IN_PHASE

    def channel_events(real, comp):
        ch = real.channel_for(comp)
        return ch.switch_times, ch.initial_sign

    k_max = 0
    merged = []
    for real in reals:
        if in_phase:
            sw = real.channels[0].switch_times
            tags = np.zeros(sw.size, dtype=np.int8)
        else:
            parts, tags_parts = [], []
            for ci, comp in enumerate(COMPONENTS):
                swc, _ = channel_events(real, comp)
                parts.append(swc)
                tags_parts.append(np.full(swc.size, ci, dtype=np.int8))
            sw = np.concatenate(parts)
            tags = np.concatenate(tags_parts)
            order = np.argsort(sw, kind="stable")
            sw, tags = sw[order], tags[order]
        merged.append((sw, tags, real))
        k_max = max(k_max, sw.size)

    n = len(reals)
    ev = np.full((n, k_max + 2), t_max, dtype=float)
    ev[:, 0] = 0.0
    signs = {c: np.empty((n, k_max + 1)) for c in COMPONENTS}
    for i, (sw, tags, real) in enumerate(merged):
        m = sw.size
        ev[i, 1:m + 1] = sw
        for ci, comp in enumerate(COMPONENTS):
            s0 = real.channel_for(comp).initial_sign
            if in_phase:
                flips = np.ones(m, dtype=np.int8)
            else:
                flips = (tags == ci).astype(np.int8)
            seg = s0 * (-1.0) ** np.concatenate(([0], np.cumsum(flips)))
            signs[comp][i, :m + 1] = seg
            signs[comp][i, m + 1:] = seg[-1]
    return RealizationBatch(t_max=t_max, event_times=ev, sign_x=signs["x"],
                            sign_y=signs["y"], sign_z=signs["z"],
                            first_index=first_index)
