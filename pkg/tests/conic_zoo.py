"""Hand-constructed conic programs with independently known optima.

Each entry builds a maximization program and reports its true optimal
value, established analytically (LP vertices, norm geometry, eigenvalue
arguments) or via the brute-force oracles in the accompanying tests.
"""
import numpy as np

from greenbeam.conic import ConicProgram


def _p01():
    """max -x s.t. x >= 1: tightest point of the orthant shift."""
    p = ConicProgram()
    p.add_nonneg("x")
    x = p.var("x")
    p.add_ge(x, 1.0)
    p.maximize(-x)
    return p, -1.0


def _p02():
    p = ConicProgram()
    p.add_nonneg("x")
    p.add_nonneg("y")
    x, y = p.var("x"), p.var("y")
    p.add_le(x + y, 4.0)
    p.add_le(x, 2.0)
    p.maximize(3.0 * x + 2.0 * y)
    return p, 10.0


def _p03():
    p = ConicProgram()
    p.add_nonneg("x")
    p.add_nonneg("y")
    x, y = p.var("x"), p.var("y")
    p.add_ge(x + 2.0 * y, 3.0)
    p.add_ge(2.0 * x + y, 3.0)
    p.maximize(-(x + y))
    return p, -2.0


def _p04():
    p = ConicProgram()
    p.add_nonneg("x")
    p.add_nonneg("y")
    x, y = p.var("x"), p.var("y")
    p.add_eq(x + y, 1.0)
    p.add_le(x, 1.0)
    p.maximize(x - y)
    return p, 1.0


def _p05():
    """Free variable bounded only through redundant inequalities."""
    p = ConicProgram()
    p.add_free("x")
    x = p.var("x")
    p.add_le(x, 5.0)
    p.add_le(x, 5.0)
    p.maximize(x)
    return p, 5.0


def _p06():
    p = ConicProgram()
    p.add_nonneg("x", 2)
    x1, x2 = p.var("x", 0), p.var("x", 1)
    p.add_le(x1, 1.0)
    p.add_le(x2, 1.0)
    p.add_le(x1 + x2, 1.5)
    p.maximize(2.0 * x1 + x2)
    return p, 2.5


def _p07():
    """max t with ||(0.6, 0.8)|| <= t <= 1: pinned at the cone boundary."""
    p = ConicProgram()
    p.add_free("t")
    t = p.var("t")
    c6 = ConicProgram()  # noqa: F841  (keep builder style uniform)
    from greenbeam.conic.program import LinExpr
    p.add_soc_le([LinExpr(const=0.6), LinExpr(const=0.8)], t)
    p.add_le(t, 1.0)
    p.maximize(t)
    return p, 1.0


def _p08():
    """Distance minimization: the residual norm contracts to zero."""
    p = ConicProgram()
    p.add_free("x", 2)
    p.add_nonneg("t")
    t = p.var("t")
    x1, x2 = p.var("x", 0), p.var("x", 1)
    p.add_soc_le([x1 - 3.0, x2 - 4.0], t)
    p.maximize(-t)
    return p, 0.0


def _p09():
    p = ConicProgram()
    p.add_free("x", 2)
    p.add_free("t")
    x1, x2, t = p.var("x", 0), p.var("x", 1), p.var("t")
    p.add_soc_le([x1, x2], t)
    p.add_le(t, np.sqrt(2.0))
    p.maximize(x1 + x2)
    return p, 2.0


def _p10():
    p = ConicProgram()
    p.add_free("x")
    p.add_nonneg("r")
    x, r = p.var("x"), p.var("r")
    p.add_soc_le([x - 1.0, r], 1.0 + 0.0 * x)
    p.maximize(r)
    return p, 1.0


def _p11():
    """Epigraph of a square via the standard rotated-cone identity:
    t >= x^2 at x = 1.5 gives min t = 2.25."""
    p = ConicProgram()
    p.add_free("t")
    t = p.var("t")
    x = 1.5
    p.add_soc_le([2.0 * x + 0.0 * t, t - 1.0], t + 1.0)
    p.maximize(-t)
    return p, -2.25


def _p12():
    p = ConicProgram()
    p.add_soc("u", 3)
    u1, u2, u3 = p.var("u", 0), p.var("u", 1), p.var("u", 2)
    p.add_le(u1, 2.0)
    p.add_eq(u3, 0.0)
    p.maximize(u2)
    return p, 2.0


def _p13():
    """min Tr(diag(1,2,3) X), Tr X = 1: all weight on the smallest
    eigenvalue (grid-verified over diagonal X in the tests)."""
    p = ConicProgram()
    p.add_psd("X", 3)
    obj = p.trace("X", np.diag([1.0, 2.0, 3.0]))
    p.add_eq(p.block_trace("X"), 1.0)
    p.maximize(-obj)
    return p, -1.0


def _p14():
    H = np.array([[1.0, 0.5], [0.5, 0.0]])
    p = ConicProgram()
    p.add_psd("X", 2)
    p.add_eq(p.block_trace("X"), 1.0)
    p.maximize(p.trace("X", H))
    return p, (1.0 + np.sqrt(2.0)) / 2.0


def _p15():
    """Complex Hermitian objective: eigenvalues 1 and 3."""
    H = np.array([[2.0, 1j], [-1j, 2.0]])
    p = ConicProgram()
    p.add_psd("X", 2)
    p.add_eq(p.block_trace("X"), 1.0)
    p.maximize(p.trace("X", H))
    return p, 3.0


def _p16():
    """Entry-pinned shift: X = diag(-1, 2) + t I must be PSD, min t."""
    p = ConicProgram()
    p.add_psd("X", 2)
    p.add_free("t")
    t = p.var("t")
    e00 = np.zeros((2, 2)); e00[0, 0] = 1.0
    e11 = np.zeros((2, 2)); e11[1, 1] = 1.0
    off_re = np.zeros((2, 2), dtype=complex)
    off_re[0, 1] = off_re[1, 0] = 0.5
    off_im = np.zeros((2, 2), dtype=complex)
    off_im[0, 1] = 0.5j; off_im[1, 0] = -0.5j
    p.add_eq(p.trace("X", e00) - t, -1.0)
    p.add_eq(p.trace("X", e11) - t, 2.0)
    p.add_eq(p.trace("X", off_re), 0.0)
    p.add_eq(p.trace("X", off_im), 0.0)
    p.maximize(-t)
    return p, -1.0


def _p17():
    p = ConicProgram()
    p.add_psd("X", 2)
    p.add_le(p.block_trace("X"), 1.0)
    p.maximize(p.trace("X", np.ones((2, 2))))
    return p, 2.0


def _p18():
    """Budget split between a matrix and a scalar: the eigenvalue-3
    direction dominates the scalar's unit reward, so the whole budget
    goes to X = 2 e2 e2^T."""
    p = ConicProgram()
    p.add_psd("X", 2)
    p.add_nonneg("y")
    y = p.var("y")
    p.add_le(p.block_trace("X") + y, 2.0)
    p.add_le(y, 0.5)
    p.maximize(p.trace("X", np.diag([1.0, 3.0])) + y)
    return p, 6.0


def _p19():
    p = ConicProgram()
    p.add_psd("X", 2)
    p.add_free("t")
    t = p.var("t")
    tr = p.block_trace("X")
    from greenbeam.conic.program import LinExpr
    p.add_soc_le([tr, LinExpr(const=1.0)], t)
    p.add_le(t, np.sqrt(2.0))
    p.maximize(p.trace("X", np.diag([1.0, 2.0])))
    return p, 2.0


def _p20():
    """Seeded random Hermitian objective; optimum is its top eigenvalue."""
    rng = np.random.default_rng(321)
    B = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    H = (B + B.conj().T) / 2
    p = ConicProgram()
    p.add_psd("X", 4)
    p.add_eq(p.block_trace("X"), 1.0)
    p.maximize(p.trace("X", H))
    return p, float(np.linalg.eigvalsh(H).max())


ZOO = [
    ("orthant_shift", _p01), ("lp_two_vars", _p02), ("lp_covering", _p03),
    ("lp_simplex_edge", _p04), ("free_var_cap", _p05), ("lp_budget", _p06),
    ("soc_pinned", _p07), ("soc_projection", _p08), ("soc_linear_max", _p09),
    ("soc_disk_height", _p10), ("soc_square_epigraph", _p11),
    ("soc_block_var", _p12), ("sdp_min_diag", _p13), ("sdp_rayleigh", _p14),
    ("sdp_complex_rayleigh", _p15), ("sdp_shift", _p16), ("sdp_budget", _p17),
    ("sdp_mixed_lp", _p18), ("sdp_soc_mixed", _p19), ("sdp_random_eig", _p20),
]
