"""Closed-form performance evaluation for one (channels, beamformers) pair.

All SINRs are linear; rates are bit/s/Hz.  Every helper accepts either a
beamforming vector w (gain |h^H w|^2) or its positive-semidefinite lift W
(gain Re h^H W h), so the same formulas audit both extracted solutions
and relaxed matrix iterates.

Eavesdropper-side quantities can be evaluated in two views: 'true' uses
the actual eavesdropper channels (audit view), 'estimated' uses the
transmitters' CSI estimates (optimizer view).
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet
from .config import SystemConfig

LOG2 = math.log(2.0)


def gain(h: np.ndarray, b: np.ndarray) -> float:
    """|h^H b|^2 for a vector b, or Re(h^H B h) for a PSD matrix B."""
    if b.ndim == 1:
        return float(abs(np.vdot(h, b)) ** 2)
    return float(np.real(np.conj(h) @ b @ h))


def beam_power(b: np.ndarray) -> float:
    """||b||^2 for a vector, trace for a matrix lift."""
    if b.ndim == 1:
        return float(np.real(np.vdot(b, b)))
    return float(np.real(np.trace(b)))


def rate(sinr: float) -> float:
    return math.log2(1.0 + max(sinr, 0.0))


@dataclass
class BeamformerSet:
    """Receive filter plus the four transmit beams.

    a is always a vector; the transmit entries may be vectors or their
    matrix lifts (see module docstring).
    """

    a: np.ndarray
    w_bo: np.ndarray
    w_ta: np.ndarray
    o_c: np.ndarray
    o_users: list[np.ndarray]

    @property
    def p1(self) -> float:
        return beam_power(self.w_bo) + beam_power(self.w_ta)

    @property
    def p2(self) -> float:
        return beam_power(self.o_c) + sum(beam_power(o) for o in self.o_users)

    def validate(self, cfg: SystemConfig, tol: float = 1e-6) -> None:
        if np.linalg.norm(self.a) == 0.0:
            raise ValueError("receive filter must be nonzero")
        if self.p1 > cfg.P1_max * (1 + tol) + tol:
            raise ValueError("ISAC transmit power exceeds budget")
        if self.p2 > cfg.P2_max * (1 + tol) + tol:
            raise ValueError("multicast transmit power exceeds budget")


def _eve_channels(ch: ChannelSet, view: str):
    if view == "true":
        return ch.h_e, ch.g_e
    if view == "estimated":
        return ch.h_es, ch.g_es
    raise ValueError(f"unknown eavesdropper view {view!r}")


def _bs2_interference(g: np.ndarray, bf: BeamformerSet) -> float:
    return gain(g, bf.o_c) + sum(gain(g, o) for o in bf.o_users)


def sinr_bob_sensing(ch: ChannelSet, bf: BeamformerSet, sigma2: float) -> float:
    """Sensing-stream SINR at the legitimate user (decoded first)."""
    num = gain(ch.h_bo, bf.w_ta)
    den = gain(ch.h_bo, bf.w_bo) + _bs2_interference(ch.g_bo, bf) + sigma2
    return num / den


def sinr_bob_comm(ch: ChannelSet, bf: BeamformerSet, sigma2: float) -> float:
    """Communication SINR at the legitimate user after the sensing beam
    has been cancelled; its denominator intentionally has no w_ta term."""
    num = gain(ch.h_bo, bf.w_bo)
    den = _bs2_interference(ch.g_bo, bf) + sigma2
    return num / den


def sinr_eve_sensing(ch: ChannelSet, bf: BeamformerSet, sigma2: float,
                     view: str = "true") -> float:
    h_e, g_e = _eve_channels(ch, view)
    num = gain(h_e, bf.w_ta)
    den = gain(h_e, bf.w_bo) + _bs2_interference(g_e, bf) + sigma2
    return num / den


def sinr_eve_comm(ch: ChannelSet, bf: BeamformerSet, sigma2: float,
                  view: str = "true") -> float:
    """Eavesdropping SINR; the sensing beam stays in the denominator
    because the eavesdropper cannot decode and cancel it."""
    h_e, g_e = _eve_channels(ch, view)
    num = gain(h_e, bf.w_bo)
    den = gain(h_e, bf.w_ta) + _bs2_interference(g_e, bf) + sigma2
    return num / den


def sinr_rsma(ch: ChannelSet, bf: BeamformerSet, sigma2: float, n: int):
    """Common- and private-stream SINRs at user n (0-based).

    The common stream is decoded first, so all N private beams plus both
    ISAC beams interfere; after cancelling it, the private stream sees
    the other users' private beams plus both ISAC beams.
    """
    if not 0 <= n < ch.n_users:
        raise IndexError(f"user index {n} out of range")
    g = ch.g_users[n]
    h = ch.h_users[n]
    isac = gain(h, bf.w_bo) + gain(h, bf.w_ta)
    private_all = sum(gain(g, o) for o in bf.o_users)
    own = gain(g, bf.o_users[n])
    gamma_c = gain(g, bf.o_c) / (private_all + isac + sigma2)
    gamma_n = own / (private_all - own + isac + sigma2)
    return gamma_c, gamma_n


def echo_scnr(ch: ChannelSet, bf: BeamformerSet, kappa2: float,
              sigma2: float) -> float:
    """Echo signal-to-clutter-plus-noise ratio at the sensing receiver.

    kappa2 a^H Hta (Wbo + Wta) Hta a / (2 sigma2 a^H a) with
    Hta = h_ta h_ta^H; clutter is modelled as an extra noise-power sigma2,
    hence the 2 sigma2.  Invariant to rescaling of a.
    """
    a = bf.a
    norm_a2 = float(np.real(np.vdot(a, a)))
    if norm_a2 == 0.0:
        raise ValueError("receive filter must be nonzero")
    ah = np.vdot(a, ch.h_ta)                # a^H h_ta
    inner = gain(ch.h_ta, bf.w_bo) + gain(ch.h_ta, bf.w_ta)
    return kappa2 * abs(ah) ** 2 * inner / (2 * sigma2 * norm_a2)


# column layout of the flat CSV row; per-user fields are numbered
_SCALAR_COLUMNS = [
    "gamma_bo_ta", "gamma_bo_bo", "gamma_e_ta", "gamma_e_bo", "gamma_b1",
    "gamma_c", "R_bo", "R_e", "R_S", "R_c", "P1", "P2", "P_sum", "SEE",
]


@dataclass
class Metrics:
    gamma_bo_ta: float
    gamma_bo_bo: float
    gamma_e_ta: float
    gamma_e_bo: float
    gamma_b1: float
    gamma_c_users: list[float]
    gamma_users: list[float]
    R_bo: float
    R_e: float
    R_S: float
    R_c: float
    R_users: list[float]
    P1: float
    P2: float
    P_sum: float
    SEE: float

    @property
    def gamma_c(self) -> float:
        """System common-stream SINR: the worst user must still decode."""
        return min(self.gamma_c_users)

    def csv_columns(self) -> list[str]:
        n = len(self.gamma_users)
        return (_SCALAR_COLUMNS
                + [f"gamma_c_user{i}" for i in range(n)]
                + [f"gamma_user{i}" for i in range(n)]
                + [f"R_user{i}" for i in range(n)])

    def csv_row(self) -> list[float]:
        head = [self.gamma_bo_ta, self.gamma_bo_bo, self.gamma_e_ta,
                self.gamma_e_bo, self.gamma_b1, self.gamma_c,
                self.R_bo, self.R_e, self.R_S, self.R_c,
                self.P1, self.P2, self.P_sum, self.SEE]
        return head + self.gamma_c_users + self.gamma_users + self.R_users

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.csv_columns()) + "\n")
        buf.write(",".join(repr(v) for v in self.csv_row()) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(dict(zip(self.csv_columns(), self.csv_row())),
                          indent=2)


def evaluate(ch: ChannelSet, bf: BeamformerSet, cfg: SystemConfig,
             view: str = "true") -> Metrics:
    """Fill every metric for one operating point.

    The security rate is clamped at zero and the efficiency divides it by
    the total consumed power P1 + P2 + P0 recomputed from the beams.
    """
    s2 = cfg.sigma2
    g_bo_ta = sinr_bob_sensing(ch, bf, s2)
    g_bo_bo = sinr_bob_comm(ch, bf, s2)
    g_e_ta = sinr_eve_sensing(ch, bf, s2, view)
    g_e_bo = sinr_eve_comm(ch, bf, s2, view)
    g_b1 = echo_scnr(ch, bf, cfg.kappa2, s2)
    gamma_c_users = []
    gamma_users = []
    for n in range(ch.n_users):
        gc, gn = sinr_rsma(ch, bf, s2, n)
        gamma_c_users.append(gc)
        gamma_users.append(gn)
    r_bo = rate(g_bo_bo)
    r_e = rate(g_e_bo)
    r_s = max(0.0, r_bo - r_e)
    r_c = rate(min(gamma_c_users))
    r_users = [rate(g) for g in gamma_users]
    p1 = bf.p1
    p2 = bf.p2
    p_sum = p1 + p2 + cfg.P0
    return Metrics(
        gamma_bo_ta=g_bo_ta, gamma_bo_bo=g_bo_bo,
        gamma_e_ta=g_e_ta, gamma_e_bo=g_e_bo, gamma_b1=g_b1,
        gamma_c_users=gamma_c_users, gamma_users=gamma_users,
        R_bo=r_bo, R_e=r_e, R_S=r_s, R_c=r_c, R_users=r_users,
        P1=p1, P2=p2, P_sum=p_sum, SEE=r_s / p_sum,
    )


@dataclass
class ConstraintCheck:
    name: str
    residual: float       # negative = satisfied with slack
    strict: bool = False

    @property
    def satisfied(self) -> bool:
        return self.residual < 0.0 if self.strict else self.residual <= 0.0

    def satisfied_within(self, tol: float) -> bool:
        return self.residual <= tol


@dataclass
class FeasibilityReport:
    checks: list[ConstraintCheck] = field(default_factory=list)

    def __getitem__(self, name: str) -> ConstraintCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_satisfied(self) -> bool:
        return all(c.satisfied for c in self.checks)

    def max_residual(self) -> float:
        return max(c.residual for c in self.checks)

    def violations(self, tol: float = 0.0) -> list[ConstraintCheck]:
        return [c for c in self.checks if not c.satisfied_within(tol)]


def check_feasibility(ch: ChannelSet, bf: BeamformerSet, cfg: SystemConfig,
                      use_estimated_eve: bool = False) -> FeasibilityReport:
    """Signed residual for every constraint of the joint design problem.

    use_estimated_eve switches the eavesdropper-side constraints to the
    transmitters' CSI estimates (the optimizer's view); the default
    audits against the true channels.
    """
    view = "estimated" if use_estimated_eve else "true"
    m = evaluate(ch, bf, cfg, view=view)
    h_e, _ = _eve_channels(ch, view)
    checks = [
        ConstraintCheck("p1_power", m.P1 - cfg.P1_max),
        ConstraintCheck("p2_power", m.P2 - cfg.P2_max),
        ConstraintCheck("security_rate", cfg.I_S - m.R_S),
        ConstraintCheck("common_rate", cfg.I_c - m.R_c),
        ConstraintCheck("private_rate", cfg.I_p - min(m.R_users)),
        ConstraintCheck("order_bob",
                        gain(ch.h_bo, bf.w_bo) - gain(ch.h_bo, bf.w_ta)),
        ConstraintCheck("order_eve",
                        gain(h_e, bf.w_bo) - gain(h_e, bf.w_ta)),
        ConstraintCheck("sic_bob", cfg.gamma_th - m.gamma_bo_ta),
        ConstraintCheck("sic_eve_blocked", m.gamma_e_ta - cfg.gamma_th,
                        strict=True),
        ConstraintCheck("echo_snr", cfg.gamma_th - m.gamma_b1),
    ]
    return FeasibilityReport(checks)
