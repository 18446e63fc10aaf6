"""Monte Carlo link simulator.

Protocol per frame (block fading): channels h0, h1, h2 ~ CN(0,1) drawn once,
L differentially encoded symbols transmitted, destination detects L-1 bits by
differential correlation -- two-hop branch only (TH), direct branch only
(DIRECT_ONLY), or the variance-weighted sum of both (LC, with the two-hop
branch weighted by the average equivalent noise, since instantaneous CSI is
unavailable under differential detection).

Energy harvesting modes:
  IEH  relay transmit power P0*eta*theta*|h1|^2 / d1^alpha (instantaneous CSI);
  AEH  same with |h1|^2 replaced by its mean 1 (gain is channel independent);
  CON  no harvesting: full received signal to the information path (phi = 1)
       and relay power relay_power_factor * P0.

Randomness: one Philox4x64 stream per run, keyed by the 64-bit seed. Every
frame owns a fixed, disjoint block of raw 64-bit outputs (rounded up to a
multiple of 4 = one Philox counter tick), located at frame_index *
blocks_per_frame counter blocks and reached in O(1) via Philox.advance. All
variates are derived from those raws as uniforms u = (raw >> 11 + 0.5) * 2^-53,
with Gaussians via the inverse normal CDF. Results are therefore bit-identical
however frames are batched or parallelized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.special import ndtri

from .model import Scheme, SystemParams, ValidationError

__all__ = [
    "EhMode",
    "McConfig",
    "McResult",
    "diff_encode",
    "simulate_frame",
    "run_monte_carlo",
    "sample_two_hop_gains",
    "raws_per_frame",
]


class EhMode(str, Enum):
    IEH = "IEH"
    AEH = "AEH"
    CON = "CON"


_U64_MAX = 2 ** 64 - 1


@dataclass(frozen=True)
class McConfig:
    """One Monte Carlo run description.

    frames independent channel realizations of symbols_per_frame symbols each
    (1 reference + L-1 data bits). min_errors > 0 stops after the first frame
    whose cumulative error count reaches it (frame-granular, so results do not
    depend on batching).
    """

    params: SystemParams
    scheme: Scheme = Scheme.TH
    eh_mode: EhMode = EhMode.IEH
    frames: int = 10_000
    symbols_per_frame: int = 64
    seed: int = 1
    min_errors: int = 0
    relay_power_factor: float = 1.0  # CON relay power as a fraction of P0

    def __post_init__(self):
        if self.frames < 1:
            raise ValidationError(f"frames: must be >= 1, got {self.frames}")
        if self.symbols_per_frame < 2:
            raise ValidationError(
                f"symbols_per_frame: need >= 2 (reference + data), got "
                f"{self.symbols_per_frame}")
        if not 0 <= self.seed <= _U64_MAX:
            raise ValidationError(f"seed: must fit in 64 bits, got {self.seed}")
        if self.min_errors < 0:
            raise ValidationError(f"min_errors: must be >= 0, got {self.min_errors}")
        if not self.relay_power_factor > 0:
            raise ValidationError(
                f"relay_power_factor: must be > 0, got {self.relay_power_factor}")

    def replace(self, **kw) -> "McConfig":
        return replace(self, **kw)


@dataclass(frozen=True)
class McResult:
    ber: float
    errors: int
    bits: int
    ci95_halfwidth: float
    seed: int


@dataclass(frozen=True)
class _LinkBudget:
    """Per-mode constants of the frame kernel."""

    n0: float
    n1_eff: float
    n2: float
    phi_eff: float
    a0: float        # direct-path signal amplitude
    a1: float        # relay-input signal amplitude
    g2: float        # squared relay gain (per unit |h1|^2 for IEH)
    gain_follows_x: bool
    d2_att: float    # d2^(-alpha/2)
    nc_av: float


def _link_budget(p: SystemParams, eh_mode: EhMode, relay_power_factor: float) -> _LinkBudget:
    n0 = p.n0a + p.n0c
    n2 = p.n2a + p.n2c
    if eh_mode is EhMode.CON:
        phi_eff = 1.0
        n1_eff = p.n1a + p.n1c
        g2 = relay_power_factor * p.p0 / (n1_eff + p.d1 ** (-p.alpha) * p.p0)
        gain_follows_x = False
    else:
        phi_eff = 1.0 - p.theta
        n1_eff = phi_eff * p.n1a + p.n1c
        g2 = p.p0 * p.eta * p.theta / (p.d1 ** p.alpha * n1_eff + p.p0 * phi_eff)
        gain_follows_x = eh_mode is EhMode.IEH
    a0 = math.sqrt(p.p0 * p.d0 ** (-p.alpha))
    a1 = math.sqrt(p.p0 * phi_eff * p.d1 ** (-p.alpha))
    d2_att = p.d2 ** (-0.5 * p.alpha)
    nc_av = n2 + g2 * p.d2 ** (-p.alpha) * n1_eff
    return _LinkBudget(n0=n0, n1_eff=n1_eff, n2=n2, phi_eff=phi_eff, a0=a0,
                       a1=a1, g2=g2, gain_follows_x=gain_follows_x,
                       d2_att=d2_att, nc_av=nc_av)


def raws_per_frame(symbols_per_frame: int) -> int:
    """Raw 64-bit outputs reserved per frame: 6 channel + (L-1) bit +
    8L noise variates, rounded up to a whole Philox counter block."""
    need = 9 * symbols_per_frame + 5
    return 4 * ((need + 3) // 4)


def diff_encode(bits) -> np.ndarray:
    """Differential encoding s[0] = 1, s[n] = s[n-1]*d[n] for bits in {+1,-1}.

    Accepts a length L-1 vector or an (F, L-1) batch; returns length L or
    (F, L) symbol arrays."""
    d = np.asarray(bits, dtype=float)
    if not np.all(np.abs(d) == 1.0):
        raise ValidationError("bits: entries must be +1 or -1")
    squeeze = d.ndim == 1
    d = np.atleast_2d(d)
    s = np.empty((d.shape[0], d.shape[1] + 1))
    s[:, 0] = 1.0
    np.cumprod(d, axis=1, out=s[:, 1:])
    return s[0] if squeeze else s


def _uniforms(raws: np.ndarray) -> np.ndarray:
    # (raw >> 11 + 1/2) * 2^-53: open-interval uniforms, exactly half below 0.5
    return ((raws >> np.uint64(11)).astype(np.float64) + 0.5) * (2.0 ** -53)


def _detect_block(u: np.ndarray, L: int, lb: _LinkBudget,
                  n1a: float, n1c: float, lc_weighting: str = "average"):
    """Per-frame error counts (F, 3) for (TH, LC, DIRECT_ONLY).

    lc_weighting="instantaneous" weights the two-hop branch by its true
    conditional noise variance instead of the average one; the protocol
    cannot do this (no CSI under differential detection) but it is the
    assumption behind the ideal-weight error kernel, so tests use it to
    cross-validate simulator against analysis."""
    ch = ndtri(u[:, 0:6])
    h0 = (ch[:, 0] + 1j * ch[:, 1]) * math.sqrt(0.5)
    h1 = (ch[:, 2] + 1j * ch[:, 3]) * math.sqrt(0.5)
    h2 = (ch[:, 4] + 1j * ch[:, 5]) * math.sqrt(0.5)
    d = np.where(u[:, 6:L + 5] < 0.5, 1.0, -1.0)
    nn = ndtri(u[:, L + 5:])

    def cnoise(i, var):
        re = nn[:, 2 * i * L:(2 * i + 1) * L]
        im = nn[:, (2 * i + 1) * L:(2 * i + 2) * L]
        return (re + 1j * im) * math.sqrt(0.5 * var)

    w0 = cnoise(0, lb.n0)
    w1a = cnoise(1, n1a)
    w1c = cnoise(2, n1c)
    w2 = cnoise(3, lb.n2)

    s = diff_encode(d)
    y0 = lb.a0 * h0[:, None] * s + w0
    w1 = math.sqrt(lb.phi_eff) * w1a + w1c
    y1 = lb.a1 * h1[:, None] * s + w1
    if lb.gain_follows_x:
        gain = np.sqrt(lb.g2 * (h1.real ** 2 + h1.imag ** 2))
    else:
        gain = np.full(h1.shape, math.sqrt(lb.g2))
    yc = gain[:, None] * lb.d2_att * h2[:, None] * y1 + w2

    st_d = (y0[:, 1:] * np.conj(y0[:, :-1])).real
    st_th = (yc[:, 1:] * np.conj(yc[:, :-1])).real
    if lc_weighting == "average":
        st_lc = st_d / lb.n0 + st_th / lb.nc_av
    else:
        xg = h1.real ** 2 + h1.imag ** 2
        yg = h2.real ** 2 + h2.imag ** 2
        nc_inst = lb.n2 + (lb.g2 * xg if lb.gain_follows_x else lb.g2) \
            * yg * lb.d2_att ** 2 * lb.n1_eff
        st_lc = st_d / lb.n0 + st_th / nc_inst[:, None]

    err = np.empty((u.shape[0], 3), dtype=np.int64)
    err[:, 0] = np.sum(np.where(st_th >= 0.0, 1.0, -1.0) != d, axis=1)
    err[:, 1] = np.sum(np.where(st_lc >= 0.0, 1.0, -1.0) != d, axis=1)
    err[:, 2] = np.sum(np.where(st_d >= 0.0, 1.0, -1.0) != d, axis=1)
    return err


_SCHEME_COL = {Scheme.TH: 0, Scheme.LC: 1, Scheme.DIRECT_ONLY: 2}


def simulate_frame(cfg: McConfig, rng_stream) -> int:
    """Error count of one frame for cfg.scheme.

    rng_stream is a numpy BitGenerator positioned at the frame's counter
    offset (frame_index * raws_per_frame(L) / 4 Philox blocks)."""
    L = cfg.symbols_per_frame
    raws = rng_stream.random_raw(raws_per_frame(L))[:9 * L + 5]
    u = _uniforms(np.asarray(raws, dtype=np.uint64))[None, :]
    lb = _link_budget(cfg.params, cfg.eh_mode, cfg.relay_power_factor)
    err = _detect_block(u, L, lb, cfg.params.n1a, cfg.params.n1c)
    return int(err[0, _SCHEME_COL[cfg.scheme]])


def _frame_stream(seed: int, frame_index: int, L: int) -> np.random.Philox:
    ph = np.random.Philox(key=seed)
    ph.advance(frame_index * (raws_per_frame(L) // 4))
    return ph


def run_monte_carlo(cfg: McConfig, *, block_frames: int = 4096,
                    _lc_weighting: str = "average") -> McResult:
    """Aggregate simulate_frame over cfg.frames reproducible substreams.

    Covers all three energy-harvesting modes (the AEH and CON baselines are
    selected by cfg.eh_mode). The per-frame substream layout makes the result
    independent of block_frames.
    """
    L = cfg.symbols_per_frame
    rpf = raws_per_frame(L)
    ncols = 9 * L + 5
    lb = _link_budget(cfg.params, cfg.eh_mode, cfg.relay_power_factor)
    col = _SCHEME_COL[cfg.scheme]
    errors = 0
    frames_done = 0
    stop = False
    for f0 in range(0, cfg.frames, block_frames):
        nf = min(block_frames, cfg.frames - f0)
        ph = _frame_stream(cfg.seed, f0, L)
        raws = ph.random_raw(nf * rpf).reshape(nf, rpf)[:, :ncols]
        u = _uniforms(raws)
        err = _detect_block(u, L, lb, cfg.params.n1a, cfg.params.n1c,
                            _lc_weighting)[:, col]
        if cfg.min_errors > 0:
            cum = errors + np.cumsum(err)
            hit = np.nonzero(cum >= cfg.min_errors)[0]
            if hit.size:
                k = int(hit[0])
                errors = int(cum[k])
                frames_done += k + 1
                stop = True
                break
        errors += int(err.sum())
        frames_done += nf
        if stop:
            break
    bits = frames_done * (L - 1)
    ber = errors / bits
    ci = 1.96 * math.sqrt(ber * (1.0 - ber) / bits)
    return McResult(ber=ber, errors=errors, bits=bits, ci95_halfwidth=ci,
                    seed=cfg.seed)


def sample_two_hop_gains(params: SystemParams, frames: int, seed: int,
                         symbols_per_frame: int = 64):
    """(X, Y) = (|h1|^2, |h2|^2) exactly as run_monte_carlo would draw them
    for the same seed and frame length (same counter offsets, first raws of
    each frame)."""
    L = symbols_per_frame
    bpf = raws_per_frame(L) // 4
    ph = np.random.Philox(key=seed)
    x = np.empty(frames)
    y = np.empty(frames)
    pos = 0  # stream position in counter blocks
    for f in range(frames):
        ph.advance(f * bpf - pos)
        raws = ph.random_raw(6)
        pos = f * bpf + 2  # ceil(6/4) blocks consumed
        ch = ndtri(_uniforms(np.asarray(raws, dtype=np.uint64)))
        x[f] = 0.5 * (ch[2] ** 2 + ch[3] ** 2)
        y[f] = 0.5 * (ch[4] ** 2 + ch[5] ** 2)
    return x, y
