"""Steering vectors, LoS-plus-scattered channel draws, and the bounded
eavesdropper CSI error model.

A planar-array channel is the sum of a deterministic line-of-sight term
and T single-bounce scattered terms,

    h = sqrt(rho0) * a0 * u(theta0, phi0)
        + (1/sqrt(T)) * sum_t sqrt(rho_t) * a_t * u(theta_t, phi_t),

where u(theta, phi) = u_h(theta, phi) kron u_e(theta, phi) and the path
amplitudes a_t fold in path loss.  The eavesdropper's true channel is the
estimate plus an error vector whose 2-norm is bounded by a known radius.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig


def steering_pair(theta: float, phi: float, m11: int, m12: int,
                  eta: float, l_x: float, l_y: float):
    """Horizontal and vertical steering vectors of an m11 x m12 array.

    Entry k of the horizontal vector has phase
    eta*l_x*sin(theta)*cos(phi)*(k - (m11-1)/2); the vertical vector uses
    eta*l_y*cos(theta)*(k - (m12-1)/2).  Indices run symmetrically about
    the array center, so every entry has unit modulus and the vectors are
    conjugate-symmetric about their midpoints.
    """
    if m11 < 1 or m12 < 1:
        raise ValueError("array factors must be >= 1")
    kh = np.arange(m11) - (m11 - 1) / 2.0
    kv = np.arange(m12) - (m12 - 1) / 2.0
    u_h = np.exp(1j * eta * l_x * math.sin(theta) * math.cos(phi) * kh)
    u_e = np.exp(1j * eta * l_y * math.cos(theta) * kv)
    return u_h, u_e


def steering_vector(theta: float, phi: float, m11: int, m12: int,
                    eta: float, l_x: float, l_y: float) -> np.ndarray:
    """Full array response u_h kron u_e, length m11*m12."""
    u_h, u_e = steering_pair(theta, phi, m11, m12, eta, l_x, l_y)
    return np.kron(u_h, u_e)


@dataclass
class PathSet:
    """One channel's path parameters: index 0 is the LoS term."""

    gains: np.ndarray      # complex amplitudes a_t, length T+1
    thetas: np.ndarray     # elevation angles, length T+1
    phis: np.ndarray       # azimuth angles, length T+1
    rhos: np.ndarray       # per-path directivity values, length T+1


@dataclass
class ArrayGeometry:
    m11: int
    m12: int
    eta: float
    l_x: float
    l_y: float

    @property
    def size(self) -> int:
        return self.m11 * self.m12

    def response(self, theta: float, phi: float) -> np.ndarray:
        return steering_vector(theta, phi, self.m11, self.m12,
                               self.eta, self.l_x, self.l_y)


def sample_channel(paths: PathSet, geom: ArrayGeometry) -> np.ndarray:
    """Combine path parameters into one channel vector.

    The scattered sum is scaled by 1/sqrt(T); with T = 0 only the LoS
    term remains.  Output is linear in every gain.
    """
    if np.any(paths.rhos < 0):
        raise ValueError("directivity values must be nonnegative")
    t_count = len(paths.gains) - 1
    h = math.sqrt(paths.rhos[0]) * paths.gains[0] * geom.response(
        paths.thetas[0], paths.phis[0])
    if t_count > 0:
        acc = np.zeros(geom.size, dtype=complex)
        for t in range(1, t_count + 1):
            acc += math.sqrt(paths.rhos[t]) * paths.gains[t] * geom.response(
                paths.thetas[t], paths.phis[t])
        h = h + acc / math.sqrt(t_count)
    return h


def perturb_csi(h_es: np.ndarray, e_bound: float,
                rng: np.random.Generator) -> np.ndarray:
    """Draw a CSI error vector uniformly on the closed e_bound-ball.

    Direction uniform on the complex sphere, radius e_bound * U^(1/2M)
    (2M real dimensions), so the draw is uniform over the ball volume.
    """
    if e_bound < 0:
        raise ValueError("error radius must be nonnegative")
    m = len(h_es)
    if e_bound == 0.0:
        return np.zeros(m, dtype=complex)
    direction = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    direction /= np.linalg.norm(direction)
    radius = e_bound * rng.uniform() ** (1.0 / (2 * m))
    return radius * direction


def csi_matrix_bound(e: float) -> float:
    """Worst-case 2-norm bound on the rank-3 CSI error matrix.

    The error matrix h_es h_er^H + h_er h_es^H + h_er h_er^H has 2-norm
    at most e^2 + 2 e ||h_er||; substituting the ball radius for ||h_er||
    gives the uncertainty-independent bound 3 e^2.
    """
    if e < 0:
        raise ValueError("error radius must be nonnegative")
    return 3.0 * e * e


@dataclass
class CsiUncertainty:
    """Operator-norm bounds on the two eavesdropper CSI error matrices."""

    e_h_UB: float
    e_g_UB: float

    @classmethod
    def from_radii(cls, e_h_abs: float, e_g_abs: float) -> "CsiUncertainty":
        return cls(csi_matrix_bound(e_h_abs), csi_matrix_bound(e_g_abs))


@dataclass
class ChannelSet:
    """Every channel vector of one network realization.

    BS1-side vectors have length M1, BS2-side length M2.  h_es/g_es are
    the transmitters' estimates of the eavesdropper links, h_er/g_er the
    true (norm-bounded) estimation errors; the true links are the sums.
    angles maps node labels ('bob', 'eve', 'target', 'clutter', 'user0',
    ...) to their LoS (theta, phi, distance) triples.
    """

    h_bo: np.ndarray
    h_ta: np.ndarray
    h_cl: np.ndarray
    h_users: list[np.ndarray]
    g_bo: np.ndarray
    g_users: list[np.ndarray]
    h_es: np.ndarray
    h_er: np.ndarray
    g_es: np.ndarray
    g_er: np.ndarray
    e_h_abs: float
    e_g_abs: float
    angles: dict = field(default_factory=dict)

    @property
    def h_e(self) -> np.ndarray:
        return self.h_es + self.h_er

    @property
    def g_e(self) -> np.ndarray:
        return self.g_es + self.g_er

    @property
    def n_users(self) -> int:
        return len(self.h_users)

    @property
    def uncertainty(self) -> CsiUncertainty:
        return CsiUncertainty.from_radii(self.e_h_abs, self.e_g_abs)

    def validate(self) -> None:
        vectors = [self.h_bo, self.h_ta, self.h_cl, self.h_es, self.h_er,
                   self.g_bo, self.g_es, self.g_er,
                   *self.h_users, *self.g_users]
        if not all(np.all(np.isfinite(v.view(float))) for v in vectors):
            raise ValueError("channel vectors must be finite")
        if np.linalg.norm(self.h_er) > self.e_h_abs * (1 + 1e-12) + 1e-300:
            raise ValueError("h_er exceeds its error-ball radius")
        if np.linalg.norm(self.g_er) > self.e_g_abs * (1 + 1e-12) + 1e-300:
            raise ValueError("g_er exceeds its error-ball radius")

    def scaled(self, factor: float) -> "ChannelSet":
        """Copy with every channel (and error radius) multiplied by factor.

        Used to renormalize noise: (h, sigma2) and (factor*h,
        factor^2*sigma2) describe the same communication SINRs.
        """
        return ChannelSet(
            h_bo=factor * self.h_bo, h_ta=factor * self.h_ta,
            h_cl=factor * self.h_cl,
            h_users=[factor * h for h in self.h_users],
            g_bo=factor * self.g_bo,
            g_users=[factor * g for g in self.g_users],
            h_es=factor * self.h_es, h_er=factor * self.h_er,
            g_es=factor * self.g_es, g_er=factor * self.g_er,
            e_h_abs=factor * self.e_h_abs, e_g_abs=factor * self.e_g_abs,
            angles=dict(self.angles),
        )


def bs1_geometry(cfg: SystemConfig) -> ArrayGeometry:
    return ArrayGeometry(cfg.M11, cfg.M12, cfg.eta, cfg.l_x, cfg.l_y)


def bs2_geometry(cfg: SystemConfig) -> ArrayGeometry:
    return ArrayGeometry(cfg.M21, cfg.M22, cfg.eta, cfg.l_x, cfg.l_y)


def _draw_node(cfg: SystemConfig, rng: np.random.Generator):
    """Node placement: distance sqrt-uniform on the annulus, angles uniform."""
    rp = cfg.rician
    d = math.sqrt(rng.uniform(rp.r_min ** 2, rp.cell_radius ** 2))
    theta = rng.uniform(rp.theta_min, rp.theta_max)
    phi = rng.uniform(0.0, 2 * math.pi)
    return theta, phi, d


def _path_loss(cfg: SystemConfig, d: float) -> float:
    """Free-space power gain (lambda / 4 pi d)^2 at the carrier."""
    lam = cfg.wavelength
    return (lam / (4 * math.pi * d)) ** 2


def draw_paths(cfg: SystemConfig, node: tuple, rng: np.random.Generator) -> PathSet:
    """Draw path parameters for one link toward the given node.

    The LoS amplitude has fixed magnitude sqrt(PL * K/(K+1)) with a random
    phase; scattered amplitudes are i.i.d. complex Gaussian with total
    scattered power PL/(K+1).  Path loss is folded into the amplitudes.
    """
    theta0, phi0, d = node
    rp = cfg.rician
    pl = _path_loss(cfg, d)
    k = rp.k_factor
    t = cfg.T
    gains = np.zeros(t + 1, dtype=complex)
    gains[0] = math.sqrt(pl * k / (k + 1)) * np.exp(1j * rng.uniform(0, 2 * math.pi))
    thetas = np.empty(t + 1)
    phis = np.empty(t + 1)
    thetas[0], phis[0] = theta0, phi0
    if t > 0:
        scat = math.sqrt(pl / (k + 1) / 2)
        gains[1:] = scat * (rng.standard_normal(t) + 1j * rng.standard_normal(t))
        thetas[1:] = rng.uniform(rp.theta_min, rp.theta_max, size=t)
        phis[1:] = rng.uniform(0.0, 2 * math.pi, size=t)
    rhos = np.full(t + 1, rp.directivity)
    return PathSet(gains=gains, thetas=thetas, phis=phis, rhos=rhos)


def draw_channel(cfg: SystemConfig, geom: ArrayGeometry, node: tuple,
                 rng: np.random.Generator) -> np.ndarray:
    return sample_channel(draw_paths(cfg, node, rng), geom)


def build_channel_set(cfg: SystemConfig, rng: np.random.Generator) -> ChannelSet:
    """Draw one full network realization.

    The eavesdropper links are generated as estimate-first: the fading
    draw is the *estimated* channel, the true channel adds an error drawn
    uniformly on the ball of radius e_h*||h_es|| (resp. e_g*||g_es||).
    """
    g1 = bs1_geometry(cfg)
    g2 = bs2_geometry(cfg)

    nodes = {name: _draw_node(cfg, rng)
             for name in ("bob", "eve", "target", "clutter")}
    for n in range(cfg.N):
        nodes[f"user{n}"] = _draw_node(cfg, rng)

    h_bo = draw_channel(cfg, g1, nodes["bob"], rng)
    h_ta = draw_channel(cfg, g1, nodes["target"], rng)
    h_cl = draw_channel(cfg, g1, nodes["clutter"], rng)
    h_es = draw_channel(cfg, g1, nodes["eve"], rng)
    h_users = [draw_channel(cfg, g1, nodes[f"user{n}"], rng) for n in range(cfg.N)]

    g_bo = draw_channel(cfg, g2, nodes["bob"], rng)
    g_es = draw_channel(cfg, g2, nodes["eve"], rng)
    g_users = [draw_channel(cfg, g2, nodes[f"user{n}"], rng) for n in range(cfg.N)]

    e_h_abs = cfg.e_h * np.linalg.norm(h_es)
    e_g_abs = cfg.e_g * np.linalg.norm(g_es)
    h_er = perturb_csi(h_es, e_h_abs, rng)
    g_er = perturb_csi(g_es, e_g_abs, rng)

    ch = ChannelSet(
        h_bo=h_bo, h_ta=h_ta, h_cl=h_cl, h_users=h_users,
        g_bo=g_bo, g_users=g_users,
        h_es=h_es, h_er=h_er, g_es=g_es, g_er=g_er,
        e_h_abs=float(e_h_abs), e_g_abs=float(e_g_abs),
        angles=nodes,
    )
    ch.validate()
    return ch
