"""Cone algebra for the interior-point solver.

The slack/dual vectors live in a product of nonnegative-orthant,
second-order, and (real symmetric, svec-packed) semidefinite cones.
Each cone carries its Nesterov-Todd scaling, computed from the current
primal-dual pair, under which both scaled variables coincide with the
scaled point lambda.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

SQRT2 = math.sqrt(2.0)
_TRIU: dict[int, tuple] = {}


def _triu(n: int):
    if n not in _TRIU:
        iu, ju = np.triu_indices(n)
        _TRIU[n] = (iu, ju, iu != ju)
    return _TRIU[n]


def svec(S: np.ndarray) -> np.ndarray:
    iu, ju, off = _triu(S.shape[0])
    out = S[iu, ju].astype(float).copy()
    out[off] *= SQRT2
    return out


def smat(v: np.ndarray, n: int) -> np.ndarray:
    iu, ju, off = _triu(n)
    vals = np.asarray(v, dtype=float).copy()
    vals[off] /= SQRT2
    S = np.zeros((n, n))
    S[iu, ju] = vals
    S[ju, iu] = vals
    return S


def _smat_batch(U: np.ndarray, n: int) -> np.ndarray:
    """Columns of U (svec coords) -> stacked symmetric matrices (k, n, n)."""
    iu, ju, off = _triu(n)
    vals = U.T.copy()
    vals[:, off] /= SQRT2
    mats = np.zeros((U.shape[1], n, n))
    mats[:, iu, ju] = vals
    mats[:, ju, iu] = vals
    return mats


def _svec_batch(mats: np.ndarray) -> np.ndarray:
    """(k, n, n) symmetric stacks -> svec columns (n(n+1)/2, k)."""
    n = mats.shape[1]
    iu, ju, off = _triu(n)
    vals = mats[:, iu, ju].copy()
    vals[:, off] *= SQRT2
    return vals.T


@dataclass
class ConeDims:
    nonneg: int
    socs: list[int]
    psds: list[int]     # embedded matrix sides

    @property
    def total(self) -> int:
        return (self.nonneg + sum(self.socs)
                + sum(n * (n + 1) // 2 for n in self.psds))

    @property
    def degree(self) -> int:
        """Jordan-algebra rank: 1 per orthant entry, 2 per second-order
        cone, matrix side per semidefinite block."""
        return self.nonneg + 2 * len(self.socs) + sum(self.psds)


def _soc_resid(v: np.ndarray) -> float:
    return v[0] - np.linalg.norm(v[1:])


class ConeWorkspace:
    """Slot layout, identity element, NT scalings, and Jordan operations."""

    def __init__(self, dims: ConeDims):
        self.dims = dims
        self.slices: list[tuple[str, slice, int]] = []
        pos = 0
        if dims.nonneg:
            self.slices.append(("l", slice(0, dims.nonneg), dims.nonneg))
            pos = dims.nonneg
        for q in dims.socs:
            self.slices.append(("q", slice(pos, pos + q), q))
            pos += q
        for n in dims.psds:
            ln = n * (n + 1) // 2
            self.slices.append(("s", slice(pos, pos + ln), n))
            pos += ln
        assert pos == dims.total
        self._scal: list[dict] = []

    # -- basic elements ---------------------------------------------------

    def identity(self) -> np.ndarray:
        e = np.zeros(self.dims.total)
        for kind, sl, n in self.slices:
            if kind == "l":
                e[sl] = 1.0
            elif kind == "q":
                e[sl.start] = 1.0
            else:
                e[sl] = svec(np.eye(n))
        return e

    def min_eig(self, v: np.ndarray) -> float:
        """Smallest cone 'eigenvalue'; positive iff strictly interior."""
        worst = math.inf
        for kind, sl, n in self.slices:
            blk = v[sl]
            if kind == "l":
                worst = min(worst, blk.min() if len(blk) else math.inf)
            elif kind == "q":
                worst = min(worst, _soc_resid(blk))
            else:
                worst = min(worst, float(sla.eigvalsh(smat(blk, n)).min()))
        return worst

    # -- Nesterov-Todd scaling ---------------------------------------------

    def update_scaling(self, s: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Compute per-cone scalings from a strictly interior pair and
        return the scaled point lambda (= W^{-T} s = W z)."""
        self._scal = []
        lam = np.empty_like(s)
        for kind, sl, n in self.slices:
            sb, zb = s[sl], z[sl]
            if kind == "l":
                w = np.sqrt(sb / zb)
                lam[sl] = np.sqrt(sb * zb)
                self._scal.append({"w": w})
            elif kind == "q":
                j_s = sb[0] ** 2 - sb[1:] @ sb[1:]
                j_z = zb[0] ** 2 - zb[1:] @ zb[1:]
                sbar = sb / math.sqrt(j_s)
                zbar = zb / math.sqrt(j_z)
                gamma = math.sqrt((1.0 + sbar @ zbar) / 2.0)
                wbar = (sbar + _jmul(zbar)) / (2.0 * gamma)
                # Jordan square root of the scaling point: W = beta P(v)
                v = wbar.copy()
                v[0] += 1.0
                v /= math.sqrt(2.0 * (1.0 + wbar[0]))
                beta = (j_s / j_z) ** 0.25
                sc = {"v": v, "beta": beta}
                self._scal.append(sc)
                lam[sl] = self._scale_slot_arr(sc, "q", zb[:, None],
                                               "W")[:, 0]
            else:
                S = smat(sb, n)
                Z = smat(zb, n)
                Ls = _chol(S)
                Lz = _chol(Z)
                U, sig, Vt = np.linalg.svd(Lz.T @ Ls)
                R = Ls @ Vt.T / np.sqrt(sig)
                Rinv = (U / np.sqrt(sig)).T @ Lz.T
                self._scal.append({"R": R, "Rinv": Rinv})
                lam[sl] = svec(np.diag(sig))
        return lam

    # -- scaling application -------------------------------------------------

    @staticmethod
    def _scale_slot_arr(sc: dict, kind: str, U: np.ndarray, mode: str):
        """Apply one cone's scaling to every column of U (slot_len x k).

        mode in {'W', 'WT', 'Winv', 'WinvT'}; orthant and second-order
        scalings are symmetric so W = W^T there.
        """
        if kind == "l":
            w = sc["w"]
            fac = w if mode in ("W", "WT") else 1.0 / w
            return U * fac[:, None]
        if kind == "q":
            v, beta = sc["v"], sc["beta"]
            if mode in ("W", "WT"):
                out = 2.0 * np.outer(v, v @ U) - _jmul_arr(U)
                return beta * out
            jv = _jmul(v)
            out = 2.0 * np.outer(jv, jv @ U) - _jmul_arr(U)
            return out / beta
        n = sc["R"].shape[0]
        if mode == "W":
            L, Rt = sc["R"].T, sc["R"]
        elif mode == "WT":
            L, Rt = sc["R"], sc["R"].T
        elif mode == "WinvT":
            L, Rt = sc["Rinv"], sc["Rinv"].T
        else:
            L, Rt = sc["Rinv"].T, sc["Rinv"]
        mats = _smat_batch(U, n)
        res = np.matmul(np.matmul(L, mats), Rt)
        res = (res + np.transpose(res, (0, 2, 1))) / 2
        return _svec_batch(res)

    def scale_slot(self, idx: int, U: np.ndarray, mode: str) -> np.ndarray:
        kind, _, _ = self.slices[idx]
        return self._scale_slot_arr(self._scal[idx], kind, U, mode)

    def _apply(self, u: np.ndarray, mode: str) -> np.ndarray:
        single = u.ndim == 1
        U = u[:, None] if single else u
        out = np.empty_like(U)
        for idx, (kind, sl, n) in enumerate(self.slices):
            out[sl] = self._scale_slot_arr(self._scal[idx], kind, U[sl], mode)
        return out[:, 0] if single else out

    def apply_W(self, u):
        return self._apply(u, "W")

    def apply_WT(self, u):
        return self._apply(u, "WT")

    def apply_Winv(self, u):
        return self._apply(u, "Winv")

    def apply_WinvT(self, u):
        return self._apply(u, "WinvT")

    # -- Jordan products ----------------------------------------------------

    def circ(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        out = np.empty_like(u)
        for kind, sl, n in self.slices:
            ub, vb = u[sl], v[sl]
            if kind == "l":
                out[sl] = ub * vb
            elif kind == "q":
                head = ub @ vb
                tail = ub[0] * vb[1:] + vb[0] * ub[1:]
                out[sl] = np.concatenate(([head], tail))
            else:
                A, B = smat(ub, n), smat(vb, n)
                out[sl] = svec((A @ B + B @ A) / 2.0)
        return out

    def circ_solve(self, lam: np.ndarray, d: np.ndarray) -> np.ndarray:
        """Solve lam o x = d blockwise."""
        out = np.empty_like(d)
        for kind, sl, n in self.slices:
            lb, db = lam[sl], d[sl]
            if kind == "l":
                out[sl] = db / lb
            elif kind == "q":
                a = lb[0] ** 2 - lb[1:] @ lb[1:]
                x0 = (lb[0] * db[0] - lb[1:] @ db[1:]) / a
                xt = (db[1:] - x0 * lb[1:]) / lb[0]
                out[sl] = np.concatenate(([x0], xt))
            else:
                L, D = smat(lb, n), smat(db, n)
                evals, V = np.linalg.eigh(L)
                Dt = V.T @ D @ V
                denom = (evals[:, None] + evals[None, :]) / 2.0
                out[sl] = svec(V @ (Dt / denom) @ V.T)
        return out

    # -- step lengths -------------------------------------------------------

    def max_step(self, v: np.ndarray, dv: np.ndarray) -> float:
        """Largest alpha with v + alpha dv in the cone (v strictly interior)."""
        alpha = math.inf
        for kind, sl, n in self.slices:
            vb, db = v[sl], dv[sl]
            if kind == "l":
                neg = db < 0
                if np.any(neg):
                    alpha = min(alpha, float((-vb[neg] / db[neg]).min()))
            elif kind == "q":
                alpha = min(alpha, _soc_max_step(vb, db))
            else:
                V = smat(vb, n)
                L = _chol(V)
                M = sla.solve_triangular(L, smat(db, n), lower=True)
                M = sla.solve_triangular(L, M.T, lower=True)
                lo = float(sla.eigvalsh((M + M.T) / 2.0).min())
                if lo < 0:
                    alpha = min(alpha, -1.0 / lo)
        return alpha


def _jmul(u: np.ndarray) -> np.ndarray:
    out = -u.copy()
    out[0] = u[0]
    return out


def _jmul_arr(U: np.ndarray) -> np.ndarray:
    out = -U.copy()
    out[0] = U[0]
    return out


def _chol(M: np.ndarray) -> np.ndarray:
    """Cholesky with escalating jitter; interior iterates may graze the
    boundary numerically."""
    scale = max(float(np.abs(M).max()), 1e-300)
    for jitter in (0.0, 1e-14, 1e-12, 1e-10, 1e-8):
        try:
            return sla.cholesky(M + jitter * scale * np.eye(M.shape[0]),
                                lower=True)
        except sla.LinAlgError:
            continue
    # final fallback: eigenvalue clip
    w, V = np.linalg.eigh((M + M.T) / 2.0)
    w = np.clip(w, 1e-12 * scale, None)
    return sla.cholesky((V * w) @ V.T, lower=True)


def _soc_max_step(v: np.ndarray, d: np.ndarray) -> float:
    """Largest alpha keeping v + alpha d inside the second-order cone."""
    a = d[0] ** 2 - d[1:] @ d[1:]
    b = 2.0 * (v[0] * d[0] - v[1:] @ d[1:])
    c = v[0] ** 2 - v[1:] @ v[1:]
    roots = []
    if abs(a) > 1e-300:
        disc = b * b - 4 * a * c
        if disc >= 0:
            r = math.sqrt(disc)
            roots += [(-b - r) / (2 * a), (-b + r) / (2 * a)]
    elif abs(b) > 1e-300:
        roots.append(-c / b)
    if d[0] < 0:
        roots.append(-v[0] / d[0])
    pos = [r for r in roots if r > 0]
    return min(pos) if pos else math.inf
