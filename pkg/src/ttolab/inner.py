"""Symbolic inner functions on the unit disk.

Supported variants: z^N, finite Blaschke products, atomic singular inner
functions, finite products of these, and fractional powers of singular
factors.  Blaschke zeros are stored as (delta, angle) with delta = 1 - |a|
so that zeros exponentially close to the circle (the counterexample
families need 1 - |a| far below machine epsilon) keep full precision in
the Ahern-Clark sums.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import AtomAtPoint, UndefinedBoundaryValue, UnsupportedVariant

_MATCH_TOL = 1e-12


class BoundaryPoint:
    """A point e^{i angle} of the unit circle, kept as an exact angle."""

    __slots__ = ("angle",)

    def __init__(self, angle: float):
        self.angle = float(angle) % (2.0 * math.pi)

    @property
    def value(self) -> complex:
        return cmath.exp(1j * self.angle)

    def __repr__(self):
        return f"BoundaryPoint(angle={self.angle!r})"


class BlaschkeZero:
    """A zero a = (1 - delta) e^{i angle} with multiplicity."""

    __slots__ = ("delta", "angle", "mult")

    def __init__(self, delta: float, angle: float, mult: int = 1):
        if not 0 < delta <= 1:
            raise ValueError("zero must lie strictly inside the disk")
        if mult < 1:
            raise ValueError("multiplicity must be >= 1")
        self.delta = float(delta)
        self.angle = float(angle) % (2.0 * math.pi)
        self.mult = int(mult)

    @classmethod
    def from_complex(cls, a: complex, mult: int = 1):
        a = complex(a)
        return cls(1.0 - abs(a), cmath.phase(a), mult)

    @property
    def value(self) -> complex:
        return (1.0 - self.delta) * cmath.exp(1j * self.angle)

    def dist2_to_boundary_angle(self, t: float) -> float:
        """|e^{it} - a|^2 computed stably from (delta, angle)."""
        s = math.sin(0.5 * (t - self.angle))
        return self.delta * self.delta + 4.0 * (1.0 - self.delta) * s * s

    def one_minus_mod2(self) -> float:
        """1 - |a|^2 = delta (2 - delta), exact in delta."""
        return self.delta * (2.0 - self.delta)


class Atom:
    """A point mass of the singular measure: mass c > 0 at e^{i angle}."""

    __slots__ = ("angle", "mass")

    def __init__(self, angle: float, mass: float):
        if mass <= 0:
            raise ValueError("atom mass must be positive")
        self.angle = float(angle) % (2.0 * math.pi)
        self.mass = float(mass)

    def dist2_to_boundary_angle(self, t: float) -> float:
        s = math.sin(0.5 * (t - self.angle))
        return 4.0 * s * s


class InnerFunction:
    """Base class.  Instances are immutable and evaluate via ``__call__``."""

    truncated = False  # True when the spec is a truncation of an infinite family

    def __call__(self, z):
        return self.eval(z)

    # combinatorial data -------------------------------------------------

    def zeros(self) -> list[BlaschkeZero]:
        return []

    def atoms(self) -> list[Atom]:
        return []

    def degree(self) -> int:
        return sum(z.mult for z in self.zeros())

    def has_singular_part(self) -> bool:
        return bool(self.atoms())

    def is_finite_blaschke(self) -> bool:
        return not self.has_singular_part() and not self.truncated

    # evaluation ---------------------------------------------------------

    def eval(self, z):
        """Evaluate at interior points or admissible boundary points.

        Raises UndefinedBoundaryValue for boundary points sitting on a
        singular atom (within matching tolerance).
        """
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        on_t = np.abs(np.abs(z) - 1.0) < 1e-13
        if np.any(on_t):
            t = np.angle(z[on_t])
            for atom in self.atoms():
                d = np.abs(np.exp(1j * t) - np.exp(1j * atom.angle))
                if np.any(d < 1e-9):
                    raise UndefinedBoundaryValue(
                        f"boundary evaluation at a singular atom (angle {atom.angle})")
        w = self._eval_impl(z)
        return complex(w[0]) if scalar else w

    def _eval_impl(self, z):
        raise NotImplementedError

    def boundary_samples(self, grid):
        """Samples on a BoundaryGrid.

        At grid points that coincide with singular atoms the radial limit 0
        is used; everywhere else the value is the defining formula, which is
        unimodular on the circle.  Samples are cached per grid (specs are
        immutable).
        """
        return self.samples_at(grid, 1.0)

    def samples_at(self, grid, radius: float = 1.0):
        """Samples on the circle of the given radius over the grid angles."""
        cache = self.__dict__.setdefault("_sample_cache", {})
        key = (grid.n, float(radius))
        if key not in cache:
            z = grid.points if radius == 1.0 else radius * grid.points
            cache[key] = self._eval_impl(z)
        return cache[key]

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        raise NotImplementedError


class Monomial(InnerFunction):
    """Theta(z) = z^N, N >= 1."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("monomial degree must be >= 1 (nonconstant)")
        self.n = int(n)

    def zeros(self):
        return [BlaschkeZero(1.0, 0.0, self.n)]

    def _eval_impl(self, z):
        return z ** self.n

    def to_json(self):
        return {"type": "monomial", "degree": self.n}


class BlaschkeProduct(InnerFunction):
    """Finite Blaschke product with factors b_a(z) = (a - z)/(1 - conj(a) z)."""

    def __init__(self, zeros, truncated: bool = False):
        zs = []
        for item in zeros:
            if isinstance(item, BlaschkeZero):
                zs.append(item)
            elif isinstance(item, tuple) and len(item) == 2:
                zs.append(BlaschkeZero.from_complex(item[0], item[1]))
            else:
                zs.append(BlaschkeZero.from_complex(item))
        if not zs:
            raise ValueError("a Blaschke product needs at least one zero")
        self._zeros = zs
        self.truncated = bool(truncated)

    def zeros(self):
        return list(self._zeros)

    def _eval_impl(self, z):
        out = np.ones_like(z)
        for zero in self._zeros:
            a = zero.value
            out = out * (((a - z) / (1.0 - np.conj(a) * z)) ** zero.mult)
        return out

    def to_json(self):
        out = {"type": "blaschke",
               "zeros": [{"re": z.value.real, "im": z.value.imag, "mult": z.mult}
                         for z in self._zeros]}
        if self.truncated:
            out["truncated"] = True
        return out


class SingularAtomic(InnerFunction):
    """exp(sum_k c_k (z + zeta_k)/(z - zeta_k)) with atoms (zeta_k, c_k)."""

    def __init__(self, atoms, truncated: bool = False):
        ats = [a if isinstance(a, Atom) else Atom(*a) for a in atoms]
        if not ats:
            raise ValueError("a singular inner function needs at least one atom")
        self._atoms = ats
        self.truncated = bool(truncated)

    def atoms(self):
        return list(self._atoms)

    def total_mass(self) -> float:
        return sum(a.mass for a in self._atoms)

    def _eval_impl(self, z):
        expo = np.zeros_like(z)
        for atom in self._atoms:
            zeta = cmath.exp(1j * atom.angle)
            with np.errstate(divide="ignore", invalid="ignore"):
                expo = expo + atom.mass * (z + zeta) / (z - zeta)
        out = np.exp(expo)
        out[~np.isfinite(out)] = 0.0  # radial limit at the atoms themselves
        return out

    def to_json(self):
        out = {"type": "singular",
               "atoms": [{"angle": a.angle, "mass": a.mass} for a in self._atoms]}
        if self.truncated:
            out["truncated"] = True
        return out


class ProductInner(InnerFunction):
    """Product of inner functions."""

    def __init__(self, factors):
        factors = list(factors)
        if not factors:
            raise ValueError("empty product")
        self.factors = factors

    @property
    def truncated(self):
        return any(f.truncated for f in self.factors)

    def zeros(self):
        return [z for f in self.factors for z in f.zeros()]

    def atoms(self):
        return [a for f in self.factors for a in f.atoms()]

    def _eval_impl(self, z):
        out = np.ones_like(z)
        for f in self.factors:
            out = out * f._eval_impl(z)
        return out

    def to_json(self):
        return {"type": "product", "factors": [f.to_json() for f in self.factors]}


class PowerInner(SingularAtomic):
    """Fractional power Theta^s of an atomic singular inner function."""

    def __init__(self, base: SingularAtomic, s: float):
        if not isinstance(base, SingularAtomic):
            raise UnsupportedVariant("fractional powers exist only for singular factors")
        if not 0 < s <= 1:
            raise ValueError("exponent must lie in (0, 1]")
        super().__init__([Atom(a.angle, s * a.mass) for a in base.atoms()],
                         truncated=base.truncated)
        self.base = base
        self.s = float(s)

    def to_json(self):
        return {"type": "power", "base": self.base.to_json(), "s": self.s}


def power(theta: InnerFunction, s: float) -> InnerFunction:
    """Theta^s for atomic singular Theta; scales every atom mass by s."""
    if not isinstance(theta, SingularAtomic):
        raise UnsupportedVariant("fractional powers of Blaschke factors are not inner")
    if s == 1:
        return theta
    return PowerInner(theta if not isinstance(theta, PowerInner) else theta.base,
                      s if not isinstance(theta, PowerInner) else s * theta.s)


def square(theta: InnerFunction) -> InnerFunction:
    """Theta^2 as an explicit spec (zeros doubled / masses doubled)."""
    return ProductInner([theta, theta])


# -- JSON -----------------------------------------------------------------

def from_json(obj: dict) -> InnerFunction:
    kind = obj.get("type")
    if kind == "monomial":
        return Monomial(int(obj["degree"]))
    if kind == "blaschke":
        zeros = []
        for z in obj["zeros"]:
            mult = int(z.get("mult", 1))
            if "delta" in z:
                zeros.append(BlaschkeZero(float(z["delta"]), float(z["angle"]), mult))
            else:
                zeros.append(BlaschkeZero.from_complex(
                    complex(float(z["re"]), float(z["im"])), mult))
        return BlaschkeProduct(zeros, truncated=bool(obj.get("truncated", False)))
    if kind == "singular":
        return SingularAtomic([Atom(float(a["angle"]), float(a["mass"]))
                               for a in obj["atoms"]],
                              truncated=bool(obj.get("truncated", False)))
    if kind == "product":
        return ProductInner([from_json(f) for f in obj["factors"]])
    if kind == "power":
        base = from_json(obj["base"])
        return PowerInner(base, float(obj["s"]))
    raise ValueError(f"unknown inner-function type: {kind!r}")


# -- Ahern-Clark / Cohn sums ----------------------------------------------

def one_minus_mod_sq(theta: InnerFunction, lam) -> float:
    """1 - |Theta(lam)|^2 without cancellation, for lam inside the disk.

    Uses the exact Blaschke-factor identity
    1 - |b_a(lam)|^2 = (1-|lam|^2)(1-|a|^2)/|1 - conj(a) lam|^2
    in log space, plus the explicit exponent of singular factors.
    """
    lam = complex(lam)
    mod = abs(lam)
    if mod >= 1.0:
        return 0.0
    one_minus_lam2 = (1.0 - mod) * (1.0 + mod)
    log_mod_sq = 0.0
    for zero in theta.zeros():
        a = zero.value
        u = one_minus_lam2 * zero.one_minus_mod2() / abs(1.0 - np.conj(a) * lam) ** 2
        if u >= 1.0:
            return 1.0  # lam sits on a zero
        log_mod_sq += zero.mult * math.log1p(-u)
    for atom in theta.atoms():
        zeta = cmath.exp(1j * atom.angle)
        log_mod_sq += 2.0 * atom.mass * ((lam + zeta) / (lam - zeta)).real
    return -math.expm1(log_mod_sq)


def _boundary_angle(zeta) -> float:
    """Accept an angle (real), a BoundaryPoint, or a unimodular complex number."""
    if isinstance(zeta, BoundaryPoint):
        return zeta.angle
    if isinstance(zeta, (int, float)):
        return float(zeta)
    z = complex(zeta)
    if abs(abs(z) - 1.0) > 1e-10:
        raise ValueError("boundary point must have modulus one")
    return cmath.phase(z)


def cohn_terms(theta: InnerFunction, zeta, p: float):
    """Termwise Ahern-Clark data at e^{it}: Blaschke terms then atom terms.

    Blaschke term k: (1-|a_k|^2)/|zeta-a_k|^p, computed from (delta, angle).
    Atom term k: c_k/|zeta-zeta_k|^p.  Raises AtomAtPoint when zeta sits on
    an atom.
    """
    t = _boundary_angle(zeta)
    bl = []
    for zero in theta.zeros():
        d2 = zero.dist2_to_boundary_angle(t)
        term = zero.one_minus_mod2() / d2 ** (p / 2.0)
        bl.extend([term] * zero.mult)
    at = []
    for atom in theta.atoms():
        d2 = atom.dist2_to_boundary_angle(t)
        if d2 < _MATCH_TOL ** 2:
            raise AtomAtPoint(f"point at angle {t} coincides with atom at {atom.angle}")
        at.append(atom.mass / d2 ** (p / 2.0))
    return np.asarray(bl), np.asarray(at)


def cohn_sum(theta: InnerFunction, zeta, p: float, terms: int) -> float:
    """Partial Ahern-Clark sum with the first ``terms`` Blaschke zeros and atoms."""
    if terms < 1:
        raise ValueError("term count must be >= 1")
    bl, at = cohn_terms(theta, zeta, p)
    return float(bl[:terms].sum() + at[:terms].sum())


class AngularDerivative:
    """Verdict of the angular-derivative test."""

    __slots__ = ("verdict", "value")

    def __init__(self, verdict: str, value: float | None = None):
        self.verdict = verdict
        self.value = value

    def __bool__(self):
        return self.verdict == "yes"

    def __repr__(self):
        if self.verdict == "yes":
            return f"AngularDerivative(yes, |Theta'|={self.value:.6g})"
        return f"AngularDerivative({self.verdict})"


def has_angular_derivative(theta: InnerFunction, zeta, budget: int = 4096,
                           cauchy_tol: float = 1e-10) -> AngularDerivative:
    """Carathéodory angular-derivative test at a boundary point.

    For exact finite data the answer is yes, with |Theta'(zeta)| equal to
    the Blaschke p=2 sum plus twice the atomic p=2 sum.  For specs flagged
    ``truncated`` (stand-ins for infinite families) the verdict comes from
    sequence diagnostics: a Cauchy criterion on partial sums says yes, a
    positive termwise floor on the tail says no, anything else is
    inconclusive.
    """
    t = _boundary_angle(zeta)
    try:
        bl, at = cohn_terms(theta, t, 2.0)
    except AtomAtPoint:
        return AngularDerivative("no")
    value = float(bl.sum() + 2.0 * at.sum())
    if not theta.truncated:
        return AngularDerivative("yes", value)

    seq = np.concatenate([bl, at]) if at.size else bl
    seq = np.sort(seq)[::-1][:budget]  # positive terms; order-free sum
    k = len(seq)
    if k == 0:
        return AngularDerivative("yes", value)
    tail = seq[max(1, (3 * k) // 4):]
    if tail.sum() <= cauchy_tol:
        return AngularDerivative("yes", float(bl[:budget].sum() + 2.0 * at[:budget].sum()))
    if k >= 8 and tail.min() >= 1e-8:
        return AngularDerivative("no")
    return AngularDerivative("inconclusive")


# -- divisibility -----------------------------------------------------------

def _zero_multiset(theta: InnerFunction):
    out = []
    for z in theta.zeros():
        out.extend([z] * z.mult)
    return out


def _atom_masses(theta: InnerFunction):
    masses: dict[float, float] = {}
    for a in theta.atoms():
        for angle in masses:
            if abs(math.remainder(angle - a.angle, 2.0 * math.pi)) < _MATCH_TOL:
                masses[angle] += a.mass
                break
        else:
            masses[a.angle] = a.mass
    return masses


def divides(theta: InnerFunction, big: InnerFunction) -> bool:
    """True iff theta divides big (zero multiset and atom masses dominated)."""
    if isinstance(theta, PowerInner) and isinstance(big, PowerInner):
        a1 = {round(a.angle, 9) for a in theta.base.atoms()}
        a2 = {round(a.angle, 9) for a in big.base.atoms()}
        if a1 != a2:
            raise UnsupportedVariant("powers with non-matching bases")
    need = _zero_multiset(theta)
    have = _zero_multiset(big)
    used = [False] * len(have)
    for z in need:
        for i, w in enumerate(have):
            if used[i]:
                continue
            if (abs(z.delta - w.delta) < _MATCH_TOL
                    and abs(math.remainder(z.angle - w.angle, 2.0 * math.pi)) < _MATCH_TOL):
                used[i] = True
                break
        else:
            return False
    masses = _atom_masses(big)
    for angle, mass in _atom_masses(theta).items():
        for bangle, bmass in masses.items():
            if abs(math.remainder(angle - bangle, 2.0 * math.pi)) < _MATCH_TOL:
                if mass <= bmass + 1e-14:
                    break
                return False
        else:
            return False
    return True
