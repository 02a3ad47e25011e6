"""Scenario configuration: all scalar parameters of the two-cell network.

Internal representation is SI-linear (watts, radians, linear SINR).  The
JSON scenario format additionally accepts powers in dBW/dBm via key
suffixes; conversion happens once at load time.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path


def db2lin(x_db: float) -> float:
    """dB -> linear ratio."""
    return 10.0 ** (x_db / 10.0)


def lin2db(x: float, floor_db: float = -120.0) -> float:
    """Linear ratio -> dB, floored so zero stays finite."""
    if x <= 0.0:
        return floor_db
    return max(10.0 * math.log10(x), floor_db)


def dbm2watt(x_dbm: float) -> float:
    return db2lin(x_dbm - 30.0)


def dbw2watt(x_dbw: float) -> float:
    return db2lin(x_dbw)


@dataclass
class RicianParams:
    """Per-path fading parameters of the LoS + scattered-component model.

    k_factor splits power between the deterministic LoS term and the
    scattered sum; directivity is the (constant) antenna element pattern,
    kept as an overridable stub.  Node geometry is drawn inside an annulus
    [r_min, cell_radius] with elevation angles uniform in
    [theta_min, theta_max].
    """

    k_factor: float = 10.0
    directivity: float = 1.0
    cell_radius: float = 120.0
    r_min: float = 10.0
    theta_min: float = math.pi / 4
    theta_max: float = 3 * math.pi / 4


@dataclass
class SystemConfig:
    """Scenario scalars for one network realization.

    Antenna counts are uniform planar arrays: M1 = M11 x M12 at the ISAC
    transmitter, M2 = M21 x M22 at the multicast transmitter.  e_h / e_g
    are *relative* eavesdropper CSI uncertainty levels (error-ball radius
    divided by the norm of the estimated channel); the absolute radii are
    derived per channel draw.
    """

    M11: int = 2
    M12: int = 2
    M21: int = 2
    M22: int = 2
    N: int = 2

    sigma2: float = 1e-3          # noise power, W
    P1_max: float = 3.0           # ISAC transmit budget, W
    P2_max: float = 3.0           # multicast transmit budget, W
    P0: float = 1.0               # circuit power, W

    gamma_th: float = 0.5         # sensing-decode SINR threshold, linear
    I_S: float = 0.5              # security-rate threshold, bit/s/Hz
    I_c: float = 0.5              # common-stream rate threshold, bit/s/Hz
    I_p: float = 0.5              # private-stream rate threshold, bit/s/Hz

    kappa2: float = 1.0           # mean-square radar cross section
    e_h: float = 0.05             # relative CSI error bound, BS1-Eve link
    e_g: float = 0.05             # relative CSI error bound, BS2-Eve link

    T: int = 4                    # scattered path count
    eta: float = 2 * math.pi / (3e8 / 18e9)   # phase constant 2*pi/lambda, rad/m
    l_x: float = (3e8 / 18e9) / 2             # horizontal feed spacing, m
    l_y: float = (3e8 / 18e9) / 2             # vertical feed spacing, m

    rician: RicianParams = field(default_factory=RicianParams)
    rng_seed: int = 0

    @property
    def M1(self) -> int:
        return self.M11 * self.M12

    @property
    def M2(self) -> int:
        return self.M21 * self.M22

    @property
    def wavelength(self) -> float:
        return 2 * math.pi / self.eta

    def validate(self) -> None:
        """Raise ValueError on any violated invariant."""
        if min(self.M11, self.M12, self.M21, self.M22) < 1:
            raise ValueError("antenna grid factors must be >= 1")
        if self.N < 1:
            raise ValueError("need at least one multicast user")
        for name in ("sigma2", "P1_max", "P2_max", "P0", "kappa2", "gamma_th"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        for name in ("I_S", "I_c", "I_p", "e_h", "e_g"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.T < 0:
            raise ValueError("scattered path count must be >= 0")
        if self.eta <= 0 or self.l_x <= 0 or self.l_y <= 0:
            raise ValueError("array geometry parameters must be positive")
        if not (0 <= self.rician.theta_min < self.rician.theta_max <= math.pi):
            raise ValueError("elevation range must satisfy 0 <= lo < hi <= pi")

    def replace(self, **kwargs) -> "SystemConfig":
        """Copy with selected fields overridden (nested rician allowed)."""
        data = asdict(self)
        rician = data.pop("rician")
        rician.update(kwargs.pop("rician", {}))
        data.update(kwargs)
        return SystemConfig(rician=RicianParams(**rician), **data)

    # -- JSON scenario format -------------------------------------------

    _POWER_KEYS = ("sigma2", "P1_max", "P2_max", "P0")

    def to_json(self, path: str | Path | None = None) -> str:
        data = asdict(self)
        text = json.dumps(data, indent=2, sort_keys=True)
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_json(cls, source: str | Path) -> "SystemConfig":
        """Load a scenario file.

        Power-like keys (sigma2, P1_max, P2_max, P0) may carry a _dBW or
        _dBm suffix instead of the plain linear-watt key; suffixed and
        plain forms are mutually exclusive per field.
        """
        p = Path(source)
        text = p.read_text() if p.exists() else str(source)
        raw = json.loads(text)
        data: dict = {}
        for key, value in raw.items():
            base = key
            for suffix, conv in (("_dBW", dbw2watt), ("_dBm", dbm2watt)):
                if key.endswith(suffix):
                    base = key[: -len(suffix)]
                    if base not in cls._POWER_KEYS:
                        raise ValueError(f"dB suffix not allowed on {base!r}")
                    value = conv(float(value))
            if base in data:
                raise ValueError(f"duplicate scenario key {base!r}")
            data[base] = value
        rician = RicianParams(**data.pop("rician", {}))
        cfg = cls(rician=rician, **data)
        cfg.validate()
        return cfg
