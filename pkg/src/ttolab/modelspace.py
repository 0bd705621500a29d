"""Model spaces K_Theta and their elements.

Finite Blaschke products (no singular part, degree <= 512, not a family
truncation) get an exact orthonormal Takenaka-Malmquist basis; everything
else is represented by truncated Fourier data on a boundary grid.  In
exact mode all kernel and conjugation operations reduce to closed-form
evaluations and small dense matrices, so they are spectrally accurate for
any interior point, including points far closer to the circle than the
grid resolves.
"""

from __future__ import annotations

import math

import numpy as np

from .circle import BoundaryGrid, CircleFunction, DEFAULT_GRID, riesz_plus
from .errors import (BoundaryPointNotNormalizable, NoAngularDerivative,
                     UnsupportedVariant)
from .inner import (BoundaryPoint, InnerFunction, has_angular_derivative,
                    one_minus_mod_sq)

EXACT_DEGREE_CAP = 512


def _next_pow2(m: int) -> int:
    n = 16
    while n < m:
        n *= 2
    return n


class ModelSpace:
    """K_Theta together with a computational representation."""

    def __init__(self, theta: InnerFunction, n: int | None = None,
                 mode: str | None = None):
        self.theta = theta
        if mode is None:
            mode = ("exact" if theta.is_finite_blaschke()
                    and theta.degree() <= EXACT_DEGREE_CAP else "truncated")
        if mode == "exact" and not theta.is_finite_blaschke():
            raise UnsupportedVariant("exact mode needs a finite Blaschke product")
        self.mode = mode
        if n is None:
            n = DEFAULT_GRID
            if mode == "exact":
                dmin = min(z.delta for z in theta.zeros())
                if dmin < 0.05:
                    n = min(2 ** 16, _next_pow2(int(96.0 / dmin)))
                n = max(n, _next_pow2(8 * theta.degree()))
        self.grid = BoundaryGrid(n)
        self.theta_samples = theta.boundary_samples(self.grid)
        if mode == "exact":
            self._init_exact()

    # -- exact-mode internals -------------------------------------------

    def _init_exact(self):
        zeros = []
        for z in self.theta.zeros():
            zeros.extend([z.value] * z.mult)
        self.zeros = np.asarray(zeros, dtype=complex)
        self.dim = len(zeros)
        pts = self.grid.points
        self.basis_samples = self._tm_eval(pts)  # (n, N)
        n = self.grid.n
        # omega in basis coordinates: omega(sum c_j e_j) = W conj(c)
        omega_samples = (np.conj(pts[:, None] * self.basis_samples)
                         * self.theta_samples[:, None])
        self.omega_matrix = self.basis_samples.conj().T @ omega_samples / n
        # backward shift S* restricted to K_Theta
        e0 = self._tm_eval(np.zeros(1))[0]  # e_j(0)
        sstar = (self.basis_samples - e0[None, :]) * np.conj(pts)[:, None]
        self.sstar_matrix = self.basis_samples.conj().T @ sstar / n

    def _tm_eval(self, w):
        """Takenaka-Malmquist basis functions evaluated at points w (vectorized).

        e_j(w) = sqrt(1-|a_j|^2)/(1 - conj(a_j) w) * prod_{i<j} (w-a_i)/(1-conj(a_i) w)
        """
        w = np.asarray(w, dtype=complex).ravel()
        N = self.dim if hasattr(self, "dim") else len(self.zeros)
        a = self.zeros
        out = np.empty((len(w), N), dtype=complex)
        prefix = np.ones(len(w), dtype=complex)
        for j in range(N):
            aj = a[j]
            out[:, j] = (math.sqrt(1.0 - abs(aj) ** 2)
                         / (1.0 - np.conj(aj) * w)) * prefix
            prefix = prefix * (w - aj) / (1.0 - np.conj(aj) * w)
        return out

    # -- constructors of elements ----------------------------------------

    def from_coeffs(self, c) -> "ModelFunction":
        if self.mode != "exact":
            raise UnsupportedVariant("coefficient vectors need exact mode")
        return ModelFunction(self, coeffs=np.asarray(c, dtype=complex))

    def from_circle(self, f: CircleFunction) -> "ModelFunction":
        return self.project(f)

    def zero(self) -> "ModelFunction":
        if self.mode == "exact":
            return ModelFunction(self, coeffs=np.zeros(self.dim, dtype=complex))
        return ModelFunction(self, circle=CircleFunction(
            self.grid, np.zeros(self.grid.n, dtype=complex)))

    # -- core operations ---------------------------------------------------

    def project(self, f) -> "ModelFunction":
        """Orthogonal projection P_Theta = P_+ - Theta P_+ conj(Theta) applied to f."""
        if isinstance(f, ModelFunction):
            if f.space is self:
                return f
            f = f.as_circle()
        if f.grid is not self.grid:
            f = f.on_grid(self.grid)
        if self.mode == "exact":
            c = self.basis_samples.conj().T @ f.samples / self.grid.n
            return ModelFunction(self, coeffs=c)
        plus = riesz_plus(f)
        inner_part = riesz_plus(CircleFunction(
            self.grid, np.conj(self.theta_samples) * f.samples))
        samples = plus.samples - self.theta_samples * inner_part.samples
        return ModelFunction(self, circle=CircleFunction(self.grid, samples))

    def theta_at(self, z):
        return self.theta.eval(z)

    def _point(self, pt):
        """Normalize a kernel point; returns (value, is_boundary)."""
        if isinstance(pt, BoundaryPoint):
            return pt.value, True
        z = complex(pt)
        if abs(z) > 1.0 - 1e-12:
            if abs(abs(z) - 1.0) > 1e-12:
                raise ValueError("kernel points must satisfy |z| < 1 or |z| = 1")
            return z / abs(z), True
        return z, False

    def kernel(self, pt) -> "ModelFunction":
        """Reproducing kernel k_pt(z) = (1 - conj(Theta(pt)) Theta(z))/(1 - conj(pt) z)."""
        w, boundary = self._point(pt)
        if boundary:
            cert = has_angular_derivative(self.theta, w)
            if not cert:
                raise NoAngularDerivative(
                    f"no angular-derivative certificate at {w} ({cert.verdict})")
        if self.mode == "exact":
            return ModelFunction(self, coeffs=np.conj(self._tm_eval([w])[0]))
        tv = self.theta.eval(w) if not boundary else self._boundary_theta(w)
        samples = ((1.0 - np.conj(tv) * self.theta_samples)
                   / (1.0 - np.conj(w) * self.grid.points))
        return ModelFunction(self, circle=CircleFunction(self.grid, samples))

    def _boundary_theta(self, w):
        return complex(self.theta.eval(np.asarray([w]))[0])

    def normalized_kernel(self, pt) -> "ModelFunction":
        """h_pt = sqrt((1-|pt|^2)/(1-|Theta(pt)|^2)) k_pt; unit norm at interior points."""
        w, boundary = self._point(pt)
        if boundary:
            raise BoundaryPointNotNormalizable("|Theta| = 1 on the boundary")
        scale = math.sqrt((1.0 - abs(w)) * (1.0 + abs(w))
                          / one_minus_mod_sq(self.theta, w))
        return scale * self.kernel(w)

    def omega(self, f):
        """Conjugation (omega f)(zeta) = conj(zeta f(zeta)) Theta(zeta); same kind out."""
        if isinstance(f, ModelFunction):
            if self.mode == "exact" and f.coeffs is not None:
                return ModelFunction(self, coeffs=self.omega_matrix @ np.conj(f.coeffs))
            g = self.omega(f.as_circle())
            return ModelFunction(self, circle=g)
        samples = np.conj(self.grid.points * f.samples) * self.theta_samples
        return CircleFunction(self.grid, samples)

    def difference_quotient(self, pt, normalized: bool = False) -> "ModelFunction":
        """k~_pt(z) = (Theta(z) - Theta(pt))/(z - pt) = omega(k_pt)."""
        w, boundary = self._point(pt)
        out = self.omega(self.kernel(pt))
        if normalized:
            if boundary:
                raise BoundaryPointNotNormalizable("|Theta| = 1 on the boundary")
            out = math.sqrt((1.0 - abs(w)) * (1.0 + abs(w))
                            / one_minus_mod_sq(self.theta, w)) * out
        return out

    def backward_shift(self, f: "ModelFunction") -> "ModelFunction":
        """S* f = (f - f(0))/z, which leaves K_Theta invariant."""
        if self.mode == "exact" and f.coeffs is not None:
            return ModelFunction(self, coeffs=self.sstar_matrix @ f.coeffs)
        g = f.as_circle()
        value = complex(np.mean(g.samples))  # zeroth Fourier coefficient
        samples = (g.samples - value) * np.conj(self.grid.points)
        return ModelFunction(self, circle=CircleFunction(self.grid, samples))

    def gram_residual(self) -> float:
        """Max deviation of the basis Gram matrix from the identity (exact mode)."""
        g = self.basis_samples.conj().T @ self.basis_samples / self.grid.n
        return float(np.max(np.abs(g - np.eye(self.dim))))


def projection_residual(theta: InnerFunction, sampler, n: int = DEFAULT_GRID,
                        tol: float = 1e-8, max_n: int = 2 ** 16):
    """Grid-doubling Cauchy residual of a truncated-mode projection.

    ``sampler(grid)`` produces the boundary data on any grid; the
    projection is computed on n and doublings until the L^2 difference of
    consecutive results (compared on the coarse grid) drops below tol.
    Returns (ModelFunction on the final grid, achieved residual, n).
    """
    space = ModelSpace(theta, n=n, mode="truncated")
    cur = space.project(sampler(space.grid))
    resid = float("inf")
    while 2 * space.grid.n <= max_n:
        bigger = ModelSpace(theta, n=2 * space.grid.n, mode="truncated")
        nxt = bigger.project(sampler(bigger.grid))
        down = nxt.as_circle().on_grid(space.grid)
        diff = down.samples - cur.as_circle().samples
        resid = float(np.sqrt(np.mean(np.abs(diff) ** 2))
                      / max(1.0, cur.norm()))
        space, cur = bigger, nxt
        if resid <= tol:
            break
    return cur, resid, space.grid.n


def tm_basis(theta: InnerFunction, n: int | None = None) -> list[CircleFunction]:
    """Orthonormal Takenaka-Malmquist basis of K_Theta as boundary functions."""
    space = ModelSpace(theta, n=n, mode="exact")
    return [CircleFunction(space.grid, space.basis_samples[:, j])
            for j in range(space.dim)]


class ModelFunction:
    """An element of K_Theta: basis coefficients (exact) or grid samples."""

    __slots__ = ("space", "coeffs", "circle")

    def __init__(self, space: ModelSpace, coeffs=None, circle=None):
        if (coeffs is None) == (circle is None):
            raise ValueError("exactly one of coeffs/circle must be given")
        self.space = space
        self.coeffs = None if coeffs is None else np.asarray(coeffs, dtype=complex)
        self.circle = circle

    # -- representations ---------------------------------------------------

    def as_circle(self) -> CircleFunction:
        if self.circle is not None:
            return self.circle
        return CircleFunction(self.space.grid,
                              self.space.basis_samples @ self.coeffs)

    def samples(self):
        return self.as_circle().samples

    def eval(self, w):
        """Value at an interior point (reproducing evaluation)."""
        if self.coeffs is not None:
            return complex(self.space._tm_eval([w])[0] @ self.coeffs)
        k = self.space.kernel(w)
        return self.inner(k)

    def __call__(self, w):
        return self.eval(w)

    # -- Hilbert-space operations ------------------------------------------

    def inner(self, other: "ModelFunction") -> complex:
        if self.coeffs is not None and other.coeffs is not None:
            return complex(np.vdot(other.coeffs, self.coeffs))
        a, b = self.samples(), other.samples()
        return complex(np.vdot(b, a) / self.space.grid.n)

    def norm(self) -> float:
        if self.coeffs is not None:
            return float(np.linalg.norm(self.coeffs))
        return float(np.sqrt(np.mean(np.abs(self.samples()) ** 2)))

    def __add__(self, other):
        if self.coeffs is not None and other.coeffs is not None:
            return ModelFunction(self.space, coeffs=self.coeffs + other.coeffs)
        return ModelFunction(self.space,
                             circle=self.as_circle() + other.as_circle())

    def __sub__(self, other):
        if self.coeffs is not None and other.coeffs is not None:
            return ModelFunction(self.space, coeffs=self.coeffs - other.coeffs)
        return ModelFunction(self.space,
                             circle=self.as_circle() - other.as_circle())

    def __mul__(self, scalar):
        if self.coeffs is not None:
            return ModelFunction(self.space, coeffs=scalar * self.coeffs)
        return ModelFunction(self.space, circle=scalar * self.as_circle())

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self


def kernel_norm2_boundary(theta: InnerFunction, zeta) -> float:
    """||k_zeta||_2^2 = |Theta'(zeta)| from the Ahern-Clark certificate."""
    cert = has_angular_derivative(theta, zeta)
    if not cert:
        raise NoAngularDerivative(f"verdict {cert.verdict}")
    return cert.value


def product_into(space_big: ModelSpace, f1: ModelFunction, f2: ModelFunction,
                 with_z: bool = False) -> ModelFunction:
    """Project f1*f2 (or z f1 f2) onto a larger model space, returning the projection.

    Used to exercise the product and nesting lemmas: for f1 in K_Theta1 and
    bounded f2 in K_Theta2 the product already lies in K_{Theta1 Theta2},
    so the projection residual is a pure quadrature defect.
    """
    grid = space_big.grid
    a = f1.as_circle().on_grid(grid).samples
    b = f2.as_circle().on_grid(grid).samples
    prod = a * b
    if with_z:
        prod = grid.points * prod
    return space_big.project(CircleFunction(grid, prod))
