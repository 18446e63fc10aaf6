"""System parameters and derived constants.

Everything downstream (analytic engine and Monte Carlo simulator) is driven by
an immutable :class:`SystemParams` plus the :class:`DerivedConstants` computed
from it. All powers and noise variances are linear (watts); distances in
meters; dB conversion happens only at the CLI boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from enum import Enum

import numpy as np

__all__ = [
    "Scheme",
    "SystemParams",
    "DerivedConstants",
    "ValidationError",
    "DegenerateSplitError",
    "derive_constants",
    "two_hop_snr",
    "reference_params",
    "db_to_linear",
    "linear_to_db",
    "PARAM_KEYS",
]


class ValidationError(ValueError):
    """A parameter failed validation; the message names the offending field."""


class DegenerateSplitError(ValidationError):
    """Power split theta in {0, 1}: the analytic constants divide by eta*theta*phi."""


class Scheme(str, Enum):
    """Detection scheme at the destination."""

    TH = "TH"                    # two-hop branch only
    LC = "LC"                    # linear combining of direct + two-hop
    DIRECT_ONLY = "DIRECT_ONLY"  # direct branch only


@dataclass(frozen=True)
class SystemParams:
    """Physical configuration of the three-node relay link.

    Attributes:
        p0: source transmit power (W), > 0.
        eta: energy conversion efficiency, in (0, 1].
        theta: power-splitting ratio routed to energy harvesting, in [0, 1].
        alpha: path-loss exponent, > 0.
        d0, d1, d2: source-destination, source-relay, relay-destination
            distances (m), > 0.
        n0a, n0c: antenna / conversion noise variances at the destination in
            phase I; n1a, n1c likewise at the relay; n2a, n2c at the
            destination in phase II. All >= 0 with positive totals.
    """

    p0: float
    eta: float
    theta: float
    alpha: float
    d0: float
    d1: float
    d2: float
    n0a: float
    n0c: float
    n1a: float
    n1c: float
    n2a: float
    n2c: float

    def __post_init__(self):
        for name in ("p0", "eta", "theta", "alpha", "d0", "d1", "d2",
                     "n0a", "n0c", "n1a", "n1c", "n2a", "n2c"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ValidationError(f"{name}: expected a number, got {v!r}")
            if not math.isfinite(v):
                raise ValidationError(f"{name}: must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.p0 <= 0:
            raise ValidationError(f"p0: must be > 0, got {self.p0}")
        if not 0 < self.eta <= 1:
            raise ValidationError(f"eta: must be in (0, 1], got {self.eta}")
        if not 0 <= self.theta <= 1:
            raise ValidationError(f"theta: must be in [0, 1], got {self.theta}")
        if self.alpha <= 0:
            raise ValidationError(f"alpha: must be > 0, got {self.alpha}")
        for name in ("d0", "d1", "d2"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name}: must be > 0, got {getattr(self, name)}")
        for name in ("n0a", "n0c", "n1a", "n1c", "n2a", "n2c"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name}: must be >= 0, got {getattr(self, name)}")
        # total noise per receiver must be positive
        if self.n0a + self.n0c <= 0:
            raise ValidationError("n0a+n0c: total phase-I destination noise must be > 0")
        if (1.0 - self.theta) * self.n1a + self.n1c <= 0:
            raise ValidationError("n1a/n1c: total relay IP noise must be > 0")
        if self.n2a + self.n2c <= 0:
            raise ValidationError("n2a+n2c: total phase-II destination noise must be > 0")

    def replace(self, **kw) -> "SystemParams":
        return replace(self, **kw)

    def to_mapping(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_mapping(cls, mapping: dict) -> "SystemParams":
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ValidationError(f"unknown config key(s): {sorted(unknown)}")
        missing = known - set(mapping)
        if missing:
            raise ValidationError(f"missing config key(s): {sorted(missing)}")
        return cls(**mapping)


#: Config-file keys, one-to-one with SystemParams fields.
PARAM_KEYS = tuple(f.name for f in fields(SystemParams))


@dataclass(frozen=True)
class DerivedConstants:
    """Constants shared by the analytic engine and the simulator.

    phi = 1 - theta; n_tot* are total complex noise variances; k1..k3 compose
    the two-hop SNR k1*X^2*Y/(k3 + k2*X*Y); j1 > 0 and j2 < -1 parameterize the
    asymptotic closed forms; gbar0 is the average direct-link SNR and nc_av the
    average equivalent two-hop noise used by the linear combiner.
    """

    params: SystemParams
    phi: float
    n_tot0: float
    n_tot1: float
    n_tot2: float
    k1: float
    k2: float
    k3: float
    j1: float
    j2: float
    gbar0: float
    nc_av: float


def derive_constants(params: SystemParams) -> DerivedConstants:
    """Compute every derived constant from validated parameters.

    Raises:
        DegenerateSplitError: if theta is exactly 0 or 1 (the analytic
            constants divide by eta*theta*phi).
    """
    if params.theta == 0.0 or params.theta == 1.0:
        raise DegenerateSplitError(
            f"theta: degenerate power split {params.theta}; analytic constants "
            "require theta in (0, 1)")
    p0, eta, theta, alpha = params.p0, params.eta, params.theta, params.alpha
    phi = 1.0 - theta
    d1a = params.d1 ** alpha
    d2a = params.d2 ** alpha
    n0 = params.n0a + params.n0c
    n1 = phi * params.n1a + params.n1c
    n2 = params.n2a + params.n2c
    k1 = p0 * p0 * eta * theta * phi / d1a
    k2 = n1 * p0 * eta * theta
    k3 = d2a * n2 * (d1a * n1 + p0 * phi)
    gbar0 = p0 * params.d0 ** (-alpha) / n0
    j1 = d1a * k3 / (4.0 * p0 * p0 * eta * theta * phi)
    j2 = -1.0 - d1a * n1 / (p0 * phi)
    nc_av = n2 + n1 * p0 * eta * theta / (d2a * (d1a * n1 + p0 * phi))
    return DerivedConstants(
        params=params, phi=phi, n_tot0=n0, n_tot1=n1, n_tot2=n2,
        k1=k1, k2=k2, k3=k3, j1=j1, j2=j2, gbar0=gbar0, nc_av=nc_av)


def two_hop_snr(c: DerivedConstants, x, y):
    """Instantaneous two-hop SNR k1*x^2*y / (k3 + k2*x*y) for channel power
    gains x = |h1|^2, y = |h2|^2. Accepts scalars or numpy arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = c.k1 * x * x * y / (c.k3 + c.k2 * x * y)
    return float(out) if out.ndim == 0 else out


def reference_params(p0: float = 10.0, *, eta: float = 0.7, theta: float = 0.5,
                     alpha: float = 2.0, d0: float = 1.0, d1: float = 1.0,
                     d2: float = 1.0, noise: float = 0.5) -> SystemParams:
    """Benchmark configuration used throughout the docs and tests: unit
    distances, eta=0.7, theta=0.5, alpha=2 and every antenna/conversion noise
    variance equal to `noise` (default 1/2)."""
    return SystemParams(p0=p0, eta=eta, theta=theta, alpha=alpha,
                        d0=d0, d1=d1, d2=d2,
                        n0a=noise, n0c=noise, n1a=noise, n1c=noise,
                        n2a=noise, n2c=noise)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)
