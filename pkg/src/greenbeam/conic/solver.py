"""Primal-dual path-following interior-point solver.

The program is canonicalized to

    minimize    c^T x
    subject to  G x + s = h,   s in K,
                A x = b,

with K a product of orthant, second-order, and semidefinite cones
(Hermitian blocks enter through their real symmetric embedding).  Search
directions use Nesterov-Todd scaling with Mehrotra predictor-corrector
steps.  The reduced KKT system is factored densely; the normal matrix
G^T W^{-1} W^{-T} G is accumulated slot-by-slot, exploiting that a cone
slot coming from a variable-block membership only touches that block's
coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .cones import ConeDims, ConeWorkspace
from .program import ConicProgram, LinExpr, coords_to_herm, embed_map

STATUS_OPTIMAL = "optimal"
STATUS_MAXITER = "max-iterations"
STATUS_INFEASIBLE = "infeasible-suspected"


@dataclass
class ConicSolution:
    status: str
    objective: float
    primal: dict[str, np.ndarray]
    max_residual: float
    gap: float
    iterations: int

    def value(self, name: str):
        return self.primal[name]

    def scalar(self, name: str, index: int = 0) -> float:
        v = self.primal[name]
        return float(np.atleast_1d(v)[index])


@dataclass
class _Canonical:
    c: np.ndarray
    G: np.ndarray
    h: np.ndarray
    A: np.ndarray
    b: np.ndarray
    dims: ConeDims
    offsets: dict[str, tuple[int, int]]      # block -> (start, n_coords)
    obj_const: float
    row_groups: list[tuple[str, slice]] = field(default_factory=list)
    # per cone slot (aligned with ConeWorkspace.slices): (col_start, col_len)
    # when the slot is a variable-block membership, None when dense
    supports: list = field(default_factory=list)


def _expr_row(offsets, n, e: LinExpr):
    row = np.zeros(n)
    for bname, coeff in e.terms.items():
        start, length = offsets[bname]
        row[start:start + length] += coeff
    return row, e.const


def canonicalize(prog: ConicProgram) -> _Canonical:
    offsets = {}
    pos = 0
    for name in prog.order:
        blk = prog.blocks[name]
        offsets[name] = (pos, blk.n_coords)
        pos += blk.n_coords
    n = pos

    ineq_rows, ineq_h = [], []          # orthant part of G
    soc_groups = []                     # (rows, consts, support)
    psd_groups = []                     # (rows, consts, side, support)

    for name in prog.order:
        blk = prog.blocks[name]
        start, length = offsets[name]
        if blk.kind == "nonneg":
            for k in range(length):
                row = np.zeros(n)
                row[start + k] = -1.0
                ineq_rows.append(row)
                ineq_h.append(0.0)
        elif blk.kind == "soc":
            rows = np.zeros((length, n))
            rows[:, start:start + length] = -np.eye(length)
            soc_groups.append((rows, np.zeros(length), (start, length)))
        elif blk.kind == "psd":
            E = embed_map(blk.dim)
            rows = np.zeros((E.shape[0], n))
            rows[:, start:start + length] = -E
            psd_groups.append((rows, np.zeros(E.shape[0]), 2 * blk.dim,
                               (start, length)))

    eq_rows, eq_b = [], []
    for con in prog.constraints:
        if con.kind == "eq":
            row, const = _expr_row(offsets, n, con.exprs[0])
            eq_rows.append(row)
            eq_b.append(-const)
        elif con.kind == "ineq":                     # expr <= 0
            row, const = _expr_row(offsets, n, con.exprs[0])
            ineq_rows.append(row)
            ineq_h.append(-const)
        else:                                        # ||entries|| <= bound
            rows, consts = [], []
            for e in con.exprs:
                row, const = _expr_row(offsets, n, e)
                rows.append(-row)
                consts.append(const)
            soc_groups.append((np.vstack(rows), np.asarray(consts), None))

    c = np.zeros(n)
    row, obj_const = _expr_row(offsets, n, prog.objective)
    c -= row                                         # maximize -> minimize

    g_parts, h_parts, row_groups, supports = [], [], [], []
    pos_r = 0
    if ineq_rows:
        g_parts.append(np.vstack(ineq_rows))
        h_parts.append(np.asarray(ineq_h))
        row_groups.append(("l", slice(0, len(ineq_rows))))
        supports.append(None)
        pos_r = len(ineq_rows)
    socs = []
    for rows, consts, supp in soc_groups:
        g_parts.append(rows)
        h_parts.append(consts)
        socs.append(rows.shape[0])
        row_groups.append(("q", slice(pos_r, pos_r + rows.shape[0])))
        supports.append(supp)
        pos_r += rows.shape[0]
    psds = []
    for rows, consts, side, supp in psd_groups:
        g_parts.append(rows)
        h_parts.append(consts)
        psds.append(side)
        row_groups.append(("s", slice(pos_r, pos_r + rows.shape[0])))
        supports.append(supp)
        pos_r += rows.shape[0]

    G = np.vstack(g_parts) if g_parts else np.zeros((0, n))
    h = np.concatenate(h_parts) if h_parts else np.zeros(0)
    A = np.vstack(eq_rows) if eq_rows else np.zeros((0, n))
    b = np.asarray(eq_b) if eq_rows else np.zeros(0)
    dims = ConeDims(nonneg=len(ineq_rows), socs=socs, psds=psds)
    return _Canonical(c, G, h, A, b, dims, offsets, obj_const, row_groups,
                      supports)


def _equilibrate(can: _Canonical):
    """Uniform per-cone-slot row scaling of [G|h]; per-row on the orthant
    and equality parts.  Scaling a whole cone slot by one positive factor
    preserves membership."""
    G, h = can.G, can.h
    for kind, sl in can.row_groups:
        if kind == "l":
            for i in range(sl.start, sl.stop):
                r = max(np.abs(G[i]).max(), abs(h[i]), 1e-300)
                G[i] /= r
                h[i] /= r
        else:
            blk = max(np.abs(G[sl]).max() if G[sl].size else 0.0,
                      np.abs(h[sl]).max() if h[sl].size else 0.0)
            if blk > 0:
                G[sl] /= blk
                h[sl] /= blk
    for i in range(can.A.shape[0]):
        r = max(np.abs(can.A[i]).max(), abs(can.b[i]), 1e-300)
        can.A[i] /= r
        can.b[i] /= r


def _assemble_normal(can: _Canonical, cone: ConeWorkspace, scaled: bool):
    """H = G^T Phi G accumulated per slot; membership slots touch only
    their own block columns."""
    n = can.G.shape[1]
    H = np.zeros((n, n))
    dense = []
    for idx, (kind, sl, _) in enumerate(cone.slices):
        supp = can.supports[idx]
        if supp is not None:
            c0, cl = supp
            sub = can.G[sl, c0:c0 + cl]
            if scaled:
                sub = cone.scale_slot(idx, sub, "WinvT")
            H[c0:c0 + cl, c0:c0 + cl] += sub.T @ sub
        else:
            sub = can.G[sl]
            if scaled:
                sub = cone.scale_slot(idx, sub, "WinvT")
            dense.append(sub)
    if dense:
        D = np.vstack(dense)
        H += D.T @ D
    return H


class _KKT:
    """Regularized dense factorization of [[H, A^T], [A, -reg I]]."""

    def __init__(self, H, A, reg=1e-10):
        n, p = H.shape[0], A.shape[0]
        K = np.zeros((n + p, n + p))
        scale = max(1.0, float(np.abs(H).max()) if H.size else 1.0)
        K[:n, :n] = H + reg * scale * np.eye(n)
        K[:n, n:] = A.T
        K[n:, :n] = A
        K[n:, n:] = -reg * scale * np.eye(p)
        self.n, self.p = n, p
        self.K0 = np.zeros_like(K)
        self.K0[:n, :n] = H
        self.K0[:n, n:] = A.T
        self.K0[n:, :n] = A
        self.lu = sla.lu_factor(K)

    def solve(self, r1, r2):
        rhs = np.concatenate([r1, r2])
        sol = sla.lu_solve(self.lu, rhs)
        # one refinement step against the unregularized system
        resid = rhs - self.K0 @ sol
        sol += sla.lu_solve(self.lu, resid)
        return sol[:self.n], sol[self.n:]


def solve(prog: ConicProgram, feas_tol: float = 1e-7, gap_tol: float = 1e-7,
          max_iter: int = 100) -> ConicSolution:
    """Solve a (maximization) conic program to the requested tolerances."""
    diags = prog.validate()
    if diags:
        raise ValueError("ill-posed program: " + "; ".join(diags))

    can = canonicalize(prog)
    _equilibrate(can)
    c, G, h, A, b = can.c, can.G, can.h, can.A, can.b
    if can.dims.total == 0:
        raise ValueError("program has no conic structure to solve over")

    cone = ConeWorkspace(can.dims)
    e = cone.identity()
    nu = can.dims.degree

    # -- initialization (scaling = identity) ------------------------------
    kkt0 = _KKT(_assemble_normal(can, cone, scaled=False), A)
    x, _ = kkt0.solve(G.T @ h, b)
    s_hat = h - G @ x
    mineig = cone.min_eig(s_hat)
    s = s_hat if mineig > 1e-8 else s_hat + (1.0 + abs(mineig)) * e

    xd, y = kkt0.solve(-c, np.zeros(len(b)))
    z_hat = G @ xd
    mineig = cone.min_eig(z_hat)
    z = z_hat if mineig > 1e-8 else z_hat + (1.0 + abs(mineig)) * e

    best = None
    best_merit = math.inf
    stall = 0
    status = STATUS_MAXITER
    iters_used = max_iter

    norm_b = 1.0 + np.linalg.norm(b)
    norm_h = 1.0 + np.linalg.norm(h)
    norm_c = 1.0 + np.linalg.norm(c)

    for it in range(max_iter):
        rx = c + A.T @ y + G.T @ z
        ry = A @ x - b
        rz = G @ x + s - h
        gap = float(s @ z)
        pcost = float(c @ x)
        dcost = -float(b @ y) - float(h @ z)

        pres = max(np.linalg.norm(ry) / norm_b, np.linalg.norm(rz) / norm_h)
        dres = np.linalg.norm(rx) / norm_c
        relgap = abs(pcost - dcost) / max(1.0, abs(pcost))
        merit = pres + dres + relgap

        if merit < best_merit - 1e-16:
            best_merit = merit
            best = (x.copy(), s.copy(), y.copy(), z.copy(), gap, it)
            stall = 0
        else:
            stall += 1

        if pres <= feas_tol and dres <= feas_tol and relgap <= gap_tol:
            status = STATUS_OPTIMAL
            iters_used = it
            best = (x.copy(), s.copy(), y.copy(), z.copy(), gap, it)
            break

        if stall >= 15:
            if pres > 1e3 * feas_tol and relgap < 1e2 * gap_tol:
                status = STATUS_INFEASIBLE
            iters_used = it
            break

        mu = gap / nu
        lam = cone.update_scaling(s, z)
        kkt = _KKT(_assemble_normal(can, cone, scaled=True), A)

        def direction(g_comb):
            u = cone.apply_Winv(cone.apply_WinvT(rz) + g_comb)
            dx, dy = kkt.solve(-rx - G.T @ u, -ry)
            dz = cone.apply_Winv(cone.apply_WinvT(G @ dx + rz) + g_comb)
            ds = -rz - G @ dx
            return dx, dy, dz, ds

        # predictor
        dx_a, dy_a, dz_a, ds_a = direction(-lam)
        if not all(np.all(np.isfinite(v)) for v in (dx_a, dz_a, ds_a)):
            iters_used = it
            break
        alpha_aff = min(1.0, cone.max_step(s, ds_a), cone.max_step(z, dz_a))
        gap_aff = float((s + alpha_aff * ds_a) @ (z + alpha_aff * dz_a))
        sigma = min(1.0, max(0.0, gap_aff / gap)) ** 3

        # corrector
        eta = cone.circ(cone.apply_WinvT(ds_a), cone.apply_W(dz_a))
        g_comb = -lam + cone.circ_solve(lam, sigma * mu * e - eta)
        dx, dy, dz, ds = direction(g_comb)
        if not all(np.all(np.isfinite(v)) for v in (dx, dz, ds)):
            iters_used = it
            break

        alpha = min(1.0, 0.99 * min(cone.max_step(s, ds),
                                    cone.max_step(z, dz)))
        if alpha <= 1e-13:
            iters_used = it
            if pres > 1e3 * feas_tol:
                status = STATUS_INFEASIBLE
            break

        x += alpha * dx
        y += alpha * dy
        s += alpha * ds
        z += alpha * dz
    else:
        iters_used = max_iter

    if best is None:
        best = (x, s, y, z, float(s @ z), max_iter)
    xb, sb, yb, zb, gapb, _ = best

    primal = {}
    for name in prog.order:
        blk = prog.blocks[name]
        start, length = can.offsets[name]
        coords = xb[start:start + length]
        if blk.kind == "psd":
            primal[name] = coords_to_herm(coords, blk.dim)
        else:
            primal[name] = coords.copy()

    objective = float(-can.c @ xb) + can.obj_const
    max_resid = _primal_residual(can, cone, xb)
    return ConicSolution(status=status, objective=objective, primal=primal,
                         max_residual=max_resid, gap=gapb,
                         iterations=iters_used)


def _primal_residual(can: _Canonical, cone: ConeWorkspace, x: np.ndarray) -> float:
    """Max violation over equalities and cone memberships of the returned
    point (slack recomputed as h - Gx)."""
    res = 0.0
    if can.A.shape[0]:
        res = float(np.abs(can.A @ x - can.b).max())
    slack = can.h - can.G @ x
    interior = cone.min_eig(slack)
    if interior < 0:
        res = max(res, -interior)
    return res
