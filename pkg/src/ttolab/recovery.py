"""Recovering the (phi_plus, phi_minus) symbol pair from kernel actions.

A truncated Toeplitz operator is determined by its action on reproducing
kernels.  Two constructive routes are implemented: the resolvent route,
which reads phi_minus off a family of differences of shifted conjugated
kernel actions and then reconstructs phi_plus through the conjugation,
and the k_0 route, which solves a 2x2 system fed by the actions on the
kernel and difference quotient at the origin.  Both produce a pair
normalized by a vanishing condition on phi_minus.
"""

from __future__ import annotations

import numpy as np

from .circle import CircleFunction, lp_norm
from .errors import (DegenerateMu, InconsistentOracle, SymbolsDiffer,
                     UnsupportedVariant)
from .modelspace import ModelFunction, ModelSpace
from .operators import (BoundarySymbol, PairSymbol, SampleSet, TTOperator,
                        build, rho_r)


class KernelActionOracle:
    """Access to lambda -> A k_lambda (and optionally A k~_0) for an unknown A."""

    def __init__(self, space: ModelSpace, action, dq0_action: ModelFunction | None = None,
                 sample_points=None):
        self.space = space
        self._action = action
        self._dq0 = dq0_action
        self.sample_points = sample_points

    @classmethod
    def from_operator(cls, op: TTOperator) -> "KernelActionOracle":
        space = op.space

        def act(lam):
            return op.apply(space.kernel(lam))

        return cls(space, act, dq0_action=op.apply(space.difference_quotient(0.0)))

    @classmethod
    def from_table(cls, space: ModelSpace, rows) -> "KernelActionOracle":
        """rows: iterable of (lambda, coefficient vector) pairs (exact mode)."""
        table = {complex(lam): space.from_coeffs(c) for lam, c in rows}

        def act(lam):
            key = complex(lam)
            if key not in table:
                raise KeyError(f"kernel action at {key} not in table")
            return table[key]

        return cls(space, act, sample_points=np.array(sorted(table, key=lambda z: (z.real, z.imag))))

    def act(self, lam) -> ModelFunction:
        return self._action(lam)

    @property
    def dq0_action(self) -> ModelFunction:
        if self._dq0 is None:
            raise UnsupportedVariant("oracle does not provide the k~_0 action")
        return self._dq0


class RecoveredSymbol:
    """Result of a recovery: the pair, its gauge point, and diagnostics."""

    __slots__ = ("phi_plus", "phi_minus", "mu", "residual", "rho_ratio")

    def __init__(self, phi_plus, phi_minus, mu, residual, rho_ratio):
        self.phi_plus = phi_plus
        self.phi_minus = phi_minus
        self.mu = mu
        self.residual = residual
        self.rho_ratio = rho_ratio

    def pair(self) -> PairSymbol:
        return PairSymbol(self.phi_plus, self.phi_minus)


# ---------------------------------------------------------------------------
# elementary pieces

def shift_resolvent(f: CircleFunction, lam: complex) -> CircleFunction:
    """(I - lam S*)^{-1} S* f = (f - f(lam))/(z - lam) for analytic f.

    Computed by coefficient-domain synthetic division (top-down recurrence),
    which handles the removable singularity exactly.
    """
    co = f.coeffs
    n = f.grid.n
    neg = np.max(np.abs(co[f.grid.freqs < 0])) if n > 1 else 0.0
    if neg > 1e-10:
        raise ValueError("shift_resolvent needs analytic input")
    half = n // 2
    c = co[:half]
    g = np.zeros(half, dtype=complex)
    acc = 0.0 + 0.0j
    for k in range(half - 1, 0, -1):
        acc = c[k] + lam * acc
        g[k - 1] = acc
    out = np.zeros(n, dtype=complex)
    out[:half] = g
    res = CircleFunction(f.grid, np.fft.ifft(out) * n)
    res._coeffs = out
    return res


def _resolvent_kernel_action(space: ModelSpace, af: ModelFunction, lam) -> ModelFunction:
    """(I - lam S*) omega(A k_lam) in K_Theta coefficients."""
    w = space.omega(af)
    shifted = space.backward_shift(w)
    return w - lam * shifted


def f_lambda_mu(oracle: KernelActionOracle, lam, mu) -> ModelFunction:
    """(I-lam S*) omega(A k_lam) - (I-mu S*) omega(A k_mu); antisymmetric."""
    space = oracle.space
    a = _resolvent_kernel_action(space, oracle.act(lam), lam)
    b = _resolvent_kernel_action(space, oracle.act(mu), mu)
    return a - b


def default_mu(space: ModelSpace) -> complex:
    """Coarse-grid maximizer of |Theta(mu)| * dist(mu, zeros of Theta)."""
    radii = np.array([0.0, 0.15, 0.3, 0.45, 0.6, 0.75])
    th = np.exp(2j * np.pi * np.arange(16) / 16)
    cand = np.unique((radii[:, None] * th[None, :]).ravel())
    zs = np.array([z.value for z in space.theta.zeros()]) if space.theta.zeros() else None
    tv = np.abs(space.theta.eval(cand))
    if zs is not None and len(zs):
        dist = np.min(np.abs(cand[:, None] - zs[None, :]), axis=1)
    else:
        dist = np.ones_like(tv)
    return complex(cand[int(np.argmax(tv * dist))])


def _lambda_grid(space: ModelSpace, factor: int = 4):
    """factor*N interior points spread over four dyadic rings."""
    N = space.dim
    rings = 1.0 - 0.5 ** np.arange(1, factor + 1)
    pts = []
    for j, r in enumerate(rings):
        ang = 2.0 * np.pi * (np.arange(N) + j / float(factor)) / N
        pts.append(r * np.exp(1j * ang))
    return np.concatenate(pts)


# ---------------------------------------------------------------------------
# recovery routes

def recover(oracle: KernelActionOracle, mu: complex | None = None,
            grid_factor: int = 4, residual_tol: float = 1e-6) -> RecoveredSymbol:
    """Recover the pair with phi_minus(mu) = 0 from kernel actions alone.

    phi_minus is evaluated pointwise on a lambda grid of grid_factor*N
    spread points, least-squares fitted to the basis, and phi_plus is then
    produced through the conjugation.  The rebuild residual against the
    oracle is reported; an oracle inconsistent with every truncated
    Toeplitz operator is rejected.
    """
    space = oracle.space
    if space.mode != "exact":
        raise UnsupportedVariant("recovery operates on exact model spaces")
    if mu is None:
        mu = default_mu(space)
    theta_mu = complex(space.theta.eval(mu))
    if abs(theta_mu) < 1e-8:
        raise DegenerateMu(f"|Theta(mu)| = {abs(theta_mu):.2e} at mu = {mu}")
    theta0 = complex(space.theta.eval(0.0))
    denom = theta_mu * (np.conj(theta0) * theta_mu - 1.0)

    psi_base = _resolvent_kernel_action(space, oracle.act(mu), mu)
    k_mu = space.kernel(mu)

    lams = oracle.sample_points if oracle.sample_points is not None \
        else _lambda_grid(space, grid_factor)
    lams = np.asarray(lams, dtype=complex)
    I = np.eye(space.dim)
    vals = np.empty(len(lams), dtype=complex)
    resolvent_mu = np.linalg.inv(I - mu * space.sstar_matrix)
    for i, lam in enumerate(lams):
        F = _resolvent_kernel_action(space, oracle.act(lam), lam) - psi_base
        x = ModelFunction(space, coeffs=resolvent_mu @ F.coeffs)
        xs = x.as_circle().samples
        g = (space.grid.points - mu) * xs
        val = np.vdot(k_mu.as_circle().samples, g) / space.grid.n
        vals[i] = val / denom
    E = space._tm_eval(lams)
    minus_coeffs, *_ = np.linalg.lstsq(E, vals, rcond=None)
    phi_minus = ModelFunction(space, coeffs=minus_coeffs)

    psi_plus = psi_base + theta_mu * space.backward_shift(phi_minus)
    phi_plus = space.omega(psi_plus)

    rebuilt = build(space, PairSymbol(phi_plus, phi_minus))
    resid = _oracle_residual(oracle, rebuilt)
    if resid > residual_tol:
        raise InconsistentOracle(f"rebuild residual {resid:.2e} > {residual_tol:.0e}")
    ratio = _rho_ratio(space, phi_plus, phi_minus, rebuilt)
    return RecoveredSymbol(phi_plus, phi_minus, mu, resid, ratio)


def _antilinear_block(M):
    """Real 2Nx2N block of the antilinear map c -> M conj(c)."""
    return np.block([[M.real, M.imag], [M.imag, -M.real]])


def recover_via_k0(oracle: KernelActionOracle,
                   residual_tol: float = 1e-6) -> RecoveredSymbol:
    """Recovery from the actions on k_0 and k~_0 alone.

    The two kernel-action identities at the origin read, for the pair
    normalized by phi_minus(0) = 0,

        A k_0        = phi_plus - conj(Theta(0)) z omega(phi_minus),
        omega(A k~_0) = phi_minus + conj(phi_plus(0)) 1
                        - conj(Theta(0)) z omega(phi_plus),

    which is an affine system in the coefficient pair (antilinear in each
    unknown through the conjugation, hence solved in real form).  It is
    uniquely solvable: the coupling has operator norm at most |Theta(0)|
    times a contraction, mirroring the positivity of the determinant in
    the scalar case.  For Theta(0) = 0 it collapses to phi_plus = A k_0.
    """
    space = oracle.space
    if space.mode != "exact":
        raise UnsupportedVariant("recovery operates on exact model spaces")
    ak0 = oracle.act(0.0)
    akt0 = oracle.dq0_action
    k0 = space.kernel(0.0)
    theta0 = complex(space.theta.eval(0.0))
    N = space.dim

    a = ak0.coeffs
    b = space.omega(akt0).coeffs
    W = space.omega_matrix
    # ZP: coefficients of P_Theta(z e_j)
    pts = space.grid.points
    ZP = space.basis_samples.conj().T @ (pts[:, None] * space.basis_samples) / space.grid.n
    G = np.conj(theta0) * (ZP @ W)
    E0 = space._tm_eval([0.0])[0]
    Mk = np.outer(k0.coeffs, np.conj(E0))

    I2 = np.eye(2 * N)
    top = np.hstack([I2, -_antilinear_block(G)])
    bottom = np.hstack([_antilinear_block(Mk - G), I2])
    rhs = np.concatenate([a.real, a.imag, b.real, b.imag])
    sol = np.linalg.solve(np.vstack([top, bottom]), rhs)
    c_plus = sol[:N] + 1j * sol[N:2 * N]
    c_minus = sol[2 * N:3 * N] + 1j * sol[3 * N:]
    phi_plus = ModelFunction(space, coeffs=c_plus)
    phi_minus = ModelFunction(space, coeffs=c_minus)
    # spend the gauge (c k_0, -conj(c) k_0) on phi_minus(0) = 0
    cbar = phi_minus.eval(0.0) / k0.eval(0.0)
    phi_plus = phi_plus + np.conj(cbar) * k0
    phi_minus = phi_minus - cbar * k0

    rebuilt = build(space, PairSymbol(phi_plus, phi_minus))
    resid = _oracle_residual(oracle, rebuilt)
    if resid > residual_tol:
        raise InconsistentOracle(f"rebuild residual {resid:.2e} > {residual_tol:.0e}")
    ratio = _rho_ratio(space, phi_plus, phi_minus, rebuilt)
    return RecoveredSymbol(phi_plus, phi_minus, 0.0, resid, ratio)


def _oracle_residual(oracle: KernelActionOracle, rebuilt: TTOperator) -> float:
    space = oracle.space
    probes = (oracle.sample_points[:8] if oracle.sample_points is not None
              else np.array([0.0, 0.31, -0.52 + 0.2j, 0.11 - 0.6j, 0.77j]))
    worst = 0.0
    for lam in probes:
        k = space.kernel(lam)
        diff = oracle.act(lam) - rebuilt.apply(k)
        worst = max(worst, diff.norm() / max(k.norm(), 1.0))
    return worst


def _rho_ratio(space, phi_plus, phi_minus, op) -> float:
    """Measured constant of the norm bound max(||phi+-||_2) <= C rho_r."""
    rr = rho_r(op, SampleSet.default(space))
    if rr == 0.0:
        return 0.0
    return max(phi_plus.norm(), phi_minus.norm()) / rr


# ---------------------------------------------------------------------------
# rank-one symbols

def rank_one_symbol(space: ModelSpace, pt) -> BoundarySymbol:
    """The explicit symbol Theta conj(z k_pt^{Theta^2}) of k~_pt (x) k_pt."""
    w, boundary = space._point(pt)
    th = space.theta_samples
    if boundary:
        tv = space._boundary_theta(w)
    else:
        tv = complex(space.theta.eval(w))
    k2 = (1.0 - np.conj(tv * tv) * th * th) / (1.0 - np.conj(w) * space.grid.points)
    phi = th * np.conj(space.grid.points * k2)
    return BoundarySymbol(CircleFunction(space.grid, phi))


def symbol_lp_bound_check(space: ModelSpace, phi: CircleFunction,
                          psi: CircleFunction, p: float,
                          same_tol: float = 1e-8):
    """Return (||phi||_p, ||psi||_p + ||phi||_2) for two symbols of one operator.

    Raises SymbolsDiffer when the two builds disagree beyond tolerance.
    The ratio lhs/rhs is the empirical constant of the comparison bound.
    """
    a = build(space, BoundarySymbol(phi))
    b = build(space, BoundarySymbol(psi))
    scale = max(1.0, float(np.linalg.norm(a.matrix)))
    if float(np.linalg.norm(a.matrix - b.matrix)) > same_tol * scale:
        raise SymbolsDiffer("the two symbols build different operators")
    lhs = lp_norm(phi.on_grid(space.grid), p)
    rhs = lp_norm(psi.on_grid(space.grid), p) + lp_norm(phi.on_grid(space.grid), 2)
    return lhs, rhs
