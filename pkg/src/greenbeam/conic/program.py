"""Conic program container.

Variables live in typed blocks: free scalars, nonnegative scalars,
second-order-cone vectors, and Hermitian positive-semidefinite matrices.
Hermitian blocks are parameterized by d^2 real coordinates (diagonal
entries, then sqrt(2)-scaled real/imag parts of the upper triangle) so
that Tr(C X) is an exact real dot product of coordinate vectors.

The objective and all constraints are real-linear over the coordinates;
second-order-cone constraints bound the norm of a stack of affine
expressions by another affine expression.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

SQRT2 = math.sqrt(2.0)


def herm_coords(C: np.ndarray) -> np.ndarray:
    """Coordinate vector of a Hermitian matrix: ⟨coords(A), coords(B)⟩ = Tr(AB)."""
    d = C.shape[0]
    out = np.empty(d * d)
    out[:d] = np.real(np.diag(C))
    k = d
    for i in range(d):
        for j in range(i + 1, d):
            out[k] = SQRT2 * C[i, j].real
            out[k + 1] = SQRT2 * C[i, j].imag
            k += 2
    return out


def coords_to_herm(x: np.ndarray, d: int) -> np.ndarray:
    """Inverse of herm_coords."""
    X = np.zeros((d, d), dtype=complex)
    X[np.diag_indices(d)] = x[:d]
    k = d
    for i in range(d):
        for j in range(i + 1, d):
            v = (x[k] + 1j * x[k + 1]) / SQRT2
            X[i, j] = v
            X[j, i] = v.conjugate()
            k += 2
    return X


def herm_parts(A: np.ndarray):
    """Hermitian matrices H1, H2 with Tr(A X) = Tr(H1 X) + i Tr(H2 X)
    for every Hermitian X."""
    return (A + A.conj().T) / 2, (A - A.conj().T) / (2j)


def svec_indices(n: int):
    """Upper-triangle (row-major) index pairs for the symmetric vectorization."""
    iu = np.triu_indices(n)
    return iu


def svec(S: np.ndarray) -> np.ndarray:
    """Symmetric vectorization with sqrt(2) off-diagonal scaling."""
    n = S.shape[0]
    iu, ju = np.triu_indices(n)
    out = S[iu, ju].astype(float).copy()
    out[iu != ju] *= SQRT2
    return out


def smat(v: np.ndarray, n: int) -> np.ndarray:
    S = np.zeros((n, n))
    iu, ju = np.triu_indices(n)
    vals = v.copy()
    vals[iu != ju] /= SQRT2
    S[iu, ju] = vals
    S[ju, iu] = vals
    return S


def embed(X: np.ndarray) -> np.ndarray:
    """Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix.

    Round-trips exactly: the blocks are plain copies of Re(X) and Im(X),
    and the eigenvalues of the embedding are those of X with doubled
    multiplicity, so positive semidefiniteness is preserved both ways.
    """
    re, im = X.real, X.imag
    return np.block([[re, -im], [im, re]])


def unembed(M: np.ndarray) -> np.ndarray:
    d = M.shape[0] // 2
    return M[:d, :d] + 1j * M[d:, :d]


_EMBED_MAPS: dict[int, np.ndarray] = {}


def embed_map(d: int) -> np.ndarray:
    """Matrix mapping Hermitian coordinates (length d^2) to svec of the
    2d x 2d real embedding."""
    if d not in _EMBED_MAPS:
        cols = []
        for k in range(d * d):
            e = np.zeros(d * d)
            e[k] = 1.0
            cols.append(svec(embed(coords_to_herm(e, d))))
        _EMBED_MAPS[d] = np.column_stack(cols)
    return _EMBED_MAPS[d]


BLOCK_KINDS = ("free", "nonneg", "soc", "psd")


@dataclass
class VarBlock:
    name: str
    kind: str
    dim: int            # matrix side for psd, vector length otherwise

    @property
    def n_coords(self) -> int:
        return self.dim * self.dim if self.kind == "psd" else self.dim


@dataclass
class LinExpr:
    """Real affine expression over variable-block coordinates."""

    terms: dict[str, np.ndarray] = field(default_factory=dict)
    const: float = 0.0

    def copy(self) -> "LinExpr":
        return LinExpr({k: v.copy() for k, v in self.terms.items()}, self.const)

    def _merge(self, other: "LinExpr", sign: float) -> "LinExpr":
        out = self.copy()
        out.const += sign * other.const
        for k, v in other.terms.items():
            if k in out.terms:
                out.terms[k] = out.terms[k] + sign * v
            else:
                out.terms[k] = sign * v
        return out

    def __add__(self, other):
        if isinstance(other, LinExpr):
            return self._merge(other, 1.0)
        return LinExpr({k: v.copy() for k, v in self.terms.items()},
                       self.const + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, LinExpr):
            return self._merge(other, -1.0)
        return self + (-float(other))

    def __rsub__(self, other):
        return (self * -1.0) + float(other)

    def __mul__(self, c):
        c = float(c)
        return LinExpr({k: c * v for k, v in self.terms.items()}, c * self.const)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


@dataclass
class Constraint:
    kind: str                   # "eq" | "ineq" (expr <= 0) | "soc"
    exprs: list[LinExpr]        # soc: [bound, entry1, ...]; else [expr]
    name: str = ""


class ConicProgram:
    """Builder for one conic optimization instance (maximization)."""

    def __init__(self):
        self.blocks: dict[str, VarBlock] = {}
        self.order: list[str] = []
        self.objective: LinExpr = LinExpr()
        self.constraints: list[Constraint] = []

    # -- variable declaration -------------------------------------------

    def _add_block(self, name: str, kind: str, dim: int) -> str:
        if name in self.blocks:
            raise ValueError(f"duplicate block {name!r}")
        if dim < 1:
            raise ValueError("block dimension must be positive")
        self.blocks[name] = VarBlock(name, kind, dim)
        self.order.append(name)
        return name

    def add_free(self, name: str, dim: int = 1) -> str:
        return self._add_block(name, "free", dim)

    def add_nonneg(self, name: str, dim: int = 1) -> str:
        return self._add_block(name, "nonneg", dim)

    def add_soc(self, name: str, dim: int) -> str:
        if dim < 2:
            raise ValueError("second-order cone needs dimension >= 2")
        return self._add_block(name, "soc", dim)

    def add_psd(self, name: str, dim: int) -> str:
        return self._add_block(name, "psd", dim)

    # -- expression helpers ---------------------------------------------

    def var(self, name: str, index: int = 0) -> LinExpr:
        """Scalar entry of a free/nonneg/soc block."""
        blk = self.blocks[name]
        if blk.kind == "psd":
            raise ValueError("use trace() for matrix blocks")
        coeff = np.zeros(blk.n_coords)
        coeff[index] = 1.0
        return LinExpr({name: coeff})

    def trace(self, name: str, C: np.ndarray) -> LinExpr:
        """Re Tr(C X) for a psd block; C is stored as given and should be
        Hermitian (validate() reports otherwise)."""
        blk = self.blocks[name]
        if blk.kind != "psd":
            raise ValueError(f"{name!r} is not a matrix block")
        C = np.asarray(C, dtype=complex)
        if C.shape != (blk.dim, blk.dim):
            raise ValueError("coefficient shape mismatch")
        return LinExpr({name: herm_coords((C + C.conj().T) / 2)})

    def trace_complex(self, name: str, A: np.ndarray):
        """(Re Tr(A X), Im Tr(A X)) as two real expressions; A arbitrary."""
        h_re, h_im = herm_parts(np.asarray(A, dtype=complex))
        return self.trace(name, h_re), self.trace(name, h_im)

    def block_trace(self, name: str) -> LinExpr:
        blk = self.blocks[name]
        return self.trace(name, np.eye(blk.dim))

    # -- objective / constraints ----------------------------------------

    def maximize(self, expr: LinExpr) -> None:
        self.objective = expr.copy()

    def add_eq(self, lhs: LinExpr, rhs=0.0, name: str = "") -> None:
        rhs = rhs if isinstance(rhs, LinExpr) else LinExpr(const=float(rhs))
        self.constraints.append(Constraint("eq", [lhs - rhs], name))

    def add_le(self, lhs, rhs, name: str = "") -> None:
        lhs = lhs if isinstance(lhs, LinExpr) else LinExpr(const=float(lhs))
        rhs = rhs if isinstance(rhs, LinExpr) else LinExpr(const=float(rhs))
        self.constraints.append(Constraint("ineq", [lhs - rhs], name))

    def add_ge(self, lhs, rhs, name: str = "") -> None:
        self.add_le(rhs, lhs, name)

    def add_soc_le(self, entries: list[LinExpr], bound: LinExpr,
                   name: str = "") -> None:
        """||(entries)||_2 <= bound."""
        if len(entries) < 1:
            raise ValueError("second-order constraint needs entries")
        self.constraints.append(Constraint("soc", [bound, *entries], name))

    # -- structural checks ----------------------------------------------

    def _expr_diagnostics(self, expr: LinExpr, where: str) -> list[str]:
        out = []
        for bname, coeff in expr.terms.items():
            if bname not in self.blocks:
                out.append(f"{where}: references undeclared block {bname!r}")
                continue
            blk = self.blocks[bname]
            if coeff.shape != (blk.n_coords,):
                out.append(f"{where}: coefficient length mismatch on {bname!r}")
            elif not np.all(np.isfinite(coeff)):
                out.append(f"{where}: non-finite coefficient on {bname!r}")
            elif blk.kind == "psd":
                C = coords_to_herm(coeff, blk.dim)
                if np.linalg.norm(C - C.conj().T) > 1e-12 * max(
                        1.0, np.linalg.norm(C)):
                    out.append(f"{where}: non-Hermitian coefficient on {bname!r}")
        if not math.isfinite(expr.const):
            out.append(f"{where}: non-finite constant")
        return out

    def validate(self) -> list[str]:
        """Structural diagnostics; empty list means well-formed."""
        diags = []
        if not self.blocks:
            diags.append("program: empty variable set")
        diags += self._expr_diagnostics(self.objective, "objective")
        for k, con in enumerate(self.constraints):
            label = con.name or f"constraint[{k}]"
            if con.kind == "soc" and len(con.exprs) < 2:
                diags.append(f"{label}: second-order constraint without entries")
            for e in con.exprs:
                diags += self._expr_diagnostics(e, label)
        return diags

    # -- debug dump -------------------------------------------------------

    def to_json(self) -> str:
        """Documented debug dump: blocks, objective, constraints.

        Coefficient vectors are real coordinate arrays (see module
        docstring for the Hermitian coordinate layout).
        """
        def expr_obj(e: LinExpr):
            return {"const": e.const,
                    "terms": {k: v.tolist() for k, v in e.terms.items()}}

        data = {
            "blocks": [{"name": b.name, "kind": b.kind, "dim": b.dim}
                       for b in (self.blocks[n] for n in self.order)],
            "objective": expr_obj(self.objective),
            "constraints": [
                {"kind": c.kind, "name": c.name,
                 "exprs": [expr_obj(e) for e in c.exprs]}
                for c in self.constraints],
        }
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ConicProgram":
        data = json.loads(text)
        prog = cls()
        for b in data["blocks"]:
            prog._add_block(b["name"], b["kind"], b["dim"])

        def expr_from(obj):
            return LinExpr({k: np.asarray(v, dtype=float)
                            for k, v in obj["terms"].items()},
                           float(obj["const"]))

        prog.objective = expr_from(data["objective"])
        for c in data["constraints"]:
            prog.constraints.append(
                Constraint(c["kind"], [expr_from(e) for e in c["exprs"]],
                           c.get("name", "")))
        return prog
