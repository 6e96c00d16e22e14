"""The worked flow geometries and their closed-orbit data.

Each model packages one equivariant flow: the translation flow on the line
(acted on by R or by Z), the rotation flow on the circle, the geodesic flow
on Euclidean space acted on by a crystallographic motion group, and the
geodesic flows on the 2- and 3-sphere frame bundles.  A model produces, for
a group element g and a window L, the delocalised length spectrum (the
times at which some orbit closes up to g) and per-length orbit data: the
sign of det(1-P), the holonomy trace, and the cutoff-primitive period with
the coset integral over conjugators already folded in.

Normalization conventions folded into the stored periods:
  * line/lattice/circle: period 1 (the cutoff integrates to 1);
  * Euclidean lattice: period a/k for a cyclic rotation factor of order k
    (one fundamental translation cell split across the rotation subgroup);
  * spheres: period 2*pi with the conjugation-orbit measure normalized to
    unit volume, which makes log R(sigma) carry the overall factor pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, NonConvergentError
from .rotations import (
    AxisRotation,
    adjoint_matrix_so,
    axis_and_kernel,
    rot2,
    rotation_about_last_axis,
    solve_transverse,
)
from .series import alpha_in_two_pi_i_z

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OrbitContribution:
    """One closed-up orbit at time l: sign of det(1-P), holonomy trace,
    and the folded cutoff-primitive period."""

    l: float
    sign: int
    holonomy: complex
    period: float

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise DomainError("sign must be +-1")
        if not self.period > 0:
            raise DomainError("period must be positive")
        if self.l == 0:
            raise DomainError("orbit length must be nonzero")

    @property
    def weight(self) -> complex:
        """sign * holonomy * period, the atom weight before negation."""
        return self.sign * self.holonomy * self.period


@dataclass(frozen=True)
class EuclideanElement:
    """Group element (a*l0*v0 + w_prime, r^m) of a Euclidean lattice model."""

    l0: int
    m: int = 1
    w_prime: np.ndarray | None = None

    def __post_init__(self):
        if int(self.l0) != self.l0:
            raise DomainError("l0 must be an integer")
        object.__setattr__(self, "l0", int(self.l0))


@dataclass(frozen=True)
class CutoffProfile:
    """A named nonnegative bump used to realise the cutoff function.

    The partition property (group translates summing/integrating to one) is
    enforced numerically by dividing by the computed translate sum, so any
    member of these families is admissible.
    """

    kind: str = "gaussian"
    width: float = 0.35
    radius: float = 1.2

    def __call__(self, dist2: np.ndarray) -> np.ndarray:
        d = np.sqrt(np.maximum(dist2, 0.0))
        if self.kind == "gaussian":
            return np.exp(-dist2 / (2.0 * self.width**2))
        if self.kind == "raised_cosine":
            out = np.zeros_like(d)
            inside = d < self.radius
            out[inside] = 0.5 * (1.0 + np.cos(math.pi * d[inside] / self.radius))
            return out
        if self.kind == "smoothed_indicator":
            out = np.ones_like(d)
            edge = self.radius - self.width
            ramp = (d > edge) & (d < self.radius)
            out[d >= self.radius] = 0.0
            out[ramp] = 0.5 * (1.0 + np.cos(math.pi * (d[ramp] - edge) / self.width))
            return out
        if self.kind == "constant":
            return np.ones_like(d)
        raise DomainError(f"unknown cutoff profile kind {self.kind!r}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature controls for cutoff-period integrals.

    ``step`` drives the midpoint rules on the line and circle, ``panel``
    the composite Gauss-Legendre rule along Euclidean orbits, ``radius``
    caps the lattice truncation and ``tol`` is the tail certificate target.
    """

    step: float = 1e-3
    panel: float = 0.12
    radius: float = 9.0
    tol: float = 1e-8


@dataclass(frozen=True)
class ModelDiagnostics:
    """Validation report: nondegeneracy witness and continuation flags."""

    nondegenerate: bool
    witness: str
    alpha_in_lattice: bool
    continuation_available: bool
    laplacian_kernel_nonzero: bool
    dense_powers_ok: bool | None = None
    dense_powers_detail: str = ""
    spectrum_collisions: int = 0


def _rational_proxy(ratio: float, max_q: int = 10**4, tol: float = 1e-12):
    """Best rational approximation diagnostic for the dense-powers proxy.

    Returns (ok, detail): ok is False when ratio admits p/q with q <= max_q
    and error < tol, which would put the group element uncomfortably close
    to finite order.
    """
    frac = Fraction(ratio).limit_denominator(max_q)
    err = abs(ratio - float(frac))
    ok = err >= tol
    return ok, f"|{ratio:.12g} - {frac.numerator}/{frac.denominator}| = {err:.3e}"


def _window_multiples(base: float, window: float) -> list[float]:
    """All values base + 2*pi*n with 0 < |value| <= window."""
    out = []
    n_min = math.floor((-window - base) / TWO_PI) - 1
    n_max = math.ceil((window - base) / TWO_PI) + 1
    for n in range(n_min, n_max + 1):
        val = base + TWO_PI * n
        if 0 < abs(val) <= window and abs(val) > 1e-12:
            out.append(val)
    return out


class FlowModel:
    """Base class; concrete models implement the orbit-data interface."""

    name = "abstract"
    infinite_spectrum = False

    def length_spectrum(self, g, window: float) -> list[float]:
        raise NotImplementedError

    def orbit_contributions(self, g, l: float) -> list[OrbitContribution]:
        raise NotImplementedError

    def validate(self, g) -> ModelDiagnostics:
        raise NotImplementedError

    def _require_in_spectrum(self, g, l: float) -> None:
        spectrum = self.length_spectrum(g, abs(l) + 1.0)
        if not any(abs(l - s) <= 1e-9 for s in spectrum):
            raise DomainError(f"l = {l} is not in the delocalised length spectrum")


@dataclass(frozen=True)
class LineModel(FlowModel):
    """Translation flow on the line, acted on by the whole line."""

    alpha: complex = 0j
    name = "line"

    def length_spectrum(self, g: float, window: float) -> list[float]:
        if window <= 0:
            raise DomainError("window must be positive")
        g = float(g)
        if g == 0.0:
            return []
        return [g] if abs(g) <= window else []

    def orbit_contributions(self, g: float, l: float) -> list[OrbitContribution]:
        self._require_in_spectrum(g, l)
        hol = complex(np.exp(self.alpha * float(g)))
        return [OrbitContribution(l=l, sign=1, holonomy=hol, period=1.0)]

    def validate(self, g=None) -> ModelDiagnostics:
        return ModelDiagnostics(
            nondegenerate=True,
            witness="transverse space is zero-dimensional",
            alpha_in_lattice=alpha_in_two_pi_i_z(complex(self.alpha)),
            continuation_available=True,
            laplacian_kernel_nonzero=False,
        )


@dataclass(frozen=True)
class IntegerLatticeModel(FlowModel):
    """Translation flow on the line, acted on by the integer lattice."""

    alpha: complex = 0j
    name = "lattice"

    def _check_g(self, g) -> int:
        if float(g) != int(g):
            raise DomainError(f"lattice group element must be an integer, got {g}")
        return int(g)

    def length_spectrum(self, g, window: float) -> list[float]:
        if window <= 0:
            raise DomainError("window must be positive")
        g = self._check_g(g)
        if g == 0:
            return []
        return [float(g)] if abs(g) <= window else []

    def orbit_contributions(self, g, l: float) -> list[OrbitContribution]:
        g = self._check_g(g)
        self._require_in_spectrum(g, l)
        hol = complex(np.exp(self.alpha * g))
        return [OrbitContribution(l=l, sign=1, holonomy=hol, period=1.0)]

    def validate(self, g=None) -> ModelDiagnostics:
        return ModelDiagnostics(
            nondegenerate=True,
            witness="transverse space is zero-dimensional",
            alpha_in_lattice=alpha_in_two_pi_i_z(complex(self.alpha)),
            continuation_available=True,
            laplacian_kernel_nonzero=False,
        )


@dataclass(frozen=True)
class CircleModel(FlowModel):
    """Rotation flow on the circle R/Z; class r0 = 0 is the identity class."""

    alpha: complex = 0j
    name = "circle"
    infinite_spectrum = True

    @staticmethod
    def _check_class(r0: float) -> float:
        r0 = float(r0)
        if not (0.0 <= r0 < 1.0):
            raise DomainError(f"circle class must lie in [0, 1), got {r0}")
        return r0

    def length_spectrum(self, r0, window: float) -> list[float]:
        if window <= 0:
            raise DomainError("window must be positive")
        r0 = self._check_class(r0)
        lo = math.floor(-window - r0)
        hi = math.ceil(window - r0)
        out = []
        for n in range(lo, hi + 1):
            val = n + r0
            if 0 < abs(val) <= window:
                out.append(val)
        return sorted(out)

    def orbit_contributions(self, r0, l: float) -> list[OrbitContribution]:
        r0 = self._check_class(r0)
        self._require_in_spectrum(r0, l)
        # l = n + r0 (or n itself for the identity class): holonomy e^{alpha*l}.
        hol = complex(np.exp(self.alpha * l))
        return [OrbitContribution(l=l, sign=1, holonomy=hol, period=1.0)]

    def validate(self, r0=0.0) -> ModelDiagnostics:
        in_lattice = alpha_in_two_pi_i_z(complex(self.alpha))
        return ModelDiagnostics(
            nondegenerate=True,
            witness="transverse space is zero-dimensional",
            alpha_in_lattice=in_lattice,
            continuation_available=not in_lattice,
            laplacian_kernel_nonzero=in_lattice,
        )


def _invariant_lattice_2d(order: int, spacing: float = 1.0) -> np.ndarray:
    """Generators (as rows) of a 2D lattice invariant under rotation by
    2*pi/order; only the crystallographic orders admit one."""
    if order in (1, 2):
        basis = np.array([[1.0, 0.0], [0.0, 1.0]])
    elif order == 4:
        basis = np.array([[1.0, 0.0], [0.0, 1.0]])
    elif order in (3, 6):
        basis = np.array([[1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])
    else:
        raise DomainError(
            f"no rotation-invariant plane lattice of order {order} "
            "(crystallographic restriction)"
        )
    return spacing * basis


@dataclass(frozen=True)
class EuclideanLatticeModel(FlowModel):
    """Geodesic flow on R^n x S^{n-1} under a crystallographic motion group.

    The group is (a Z v0 + Gamma') x <r> with r in SO(n) of finite order k,
    ker(r - I) = R v0, and Gamma' an r-invariant lattice transverse to v0.
    The connection parameter alpha_v0 is the component of the connection
    one-form along v0 (the transverse components must vanish for the
    connection to be invariant).
    """

    n: int = 3
    a: float = 1.0
    rotation: AxisRotation = None
    order: int = 3
    alpha_v0: complex = 0j
    lattice_spacing: float = 1.0
    name = "euclid"

    def __post_init__(self):
        if self.rotation is None:
            raise DomainError("EuclideanLatticeModel needs a rotation")
        if self.a <= 0:
            raise DomainError("translation spacing a must be positive")
        power = np.linalg.matrix_power(self.rotation.matrix, self.order)
        if np.max(np.abs(power - np.eye(self.n))) > 1e-10:
            raise DomainError(f"rotation is not of order {self.order} within 1e-10")
        # A degenerate rotation (no unique axis) may still be constructed so
        # that validate() can report it; orbit data then refuses to evaluate.

    def _axis(self) -> np.ndarray:
        if self.rotation.axis is None:
            raise DomainError(
                "rotation has no one-dimensional fixed axis; the flow is "
                "degenerate for this model (see validate())"
            )
        return self.rotation.axis

    @classmethod
    def from_angle(
        cls, n: int, a: float, theta: float, order: int, alpha_v0: complex = 0j
    ) -> "EuclideanLatticeModel":
        """Build the model from a rotation angle about the last axis.

        Finite order is structural, so an angle within 1e-6 of an exact
        multiple of 2*pi/order is quantized to it; decimal flag values like
        theta=2.0943951 then still produce an exact order-3 rotation.
        """
        if order < 1:
            raise DomainError("order must be a positive integer")
        exact = TWO_PI * round(theta * order / TWO_PI) / order
        if abs(theta - exact) <= 1e-6:
            theta = exact
        return cls(
            n=n,
            a=a,
            rotation=rotation_about_last_axis(n, theta),
            order=order,
            alpha_v0=complex(alpha_v0),
        )

    # -- group plumbing -----------------------------------------------------

    def _coerce(self, g) -> EuclideanElement:
        if isinstance(g, EuclideanElement):
            return g
        if isinstance(g, (int, float)):
            return EuclideanElement(l0=int(g))
        raise DomainError(f"cannot interpret {g!r} as a Euclidean group element")

    def _w_prime(self, g: EuclideanElement) -> np.ndarray:
        if g.w_prime is None:
            return np.zeros(self.n)
        w = np.asarray(g.w_prime, dtype=float)
        v0 = self._axis()
        if abs(float(w @ v0)) > 1e-10 * max(1.0, float(np.linalg.norm(w))):
            raise DomainError("w_prime must be orthogonal to the rotation axis")
        return w

    def translation_length(self, g) -> float:
        g = self._coerce(g)
        return self.a * g.l0

    def lattice_basis(self) -> np.ndarray:
        """Rows: generators of Gamma' embedded in the axis complement (n=3)."""
        if self.n != 3:
            raise DomainError("explicit transverse lattices are built for n = 3 only")
        plane = _invariant_lattice_2d(self.order, self.lattice_spacing)
        out = np.zeros((2, 3))
        out[:, :2] = plane
        return out

    def motion_matrix(self, g) -> tuple[np.ndarray, np.ndarray]:
        """(rotation matrix r^m, translation vector) of the group element."""
        g = self._coerce(g)
        rm = np.linalg.matrix_power(self.rotation.matrix, g.m)
        y = self.translation_length(g) * self._axis() + self._w_prime(g)
        return rm, y

    def conjugate_element(self, g, lam: int, gamma_coeffs, j: int) -> EuclideanElement:
        """h g h^{-1} for h = (a*lam*v0 + gamma', r^j), gamma' in Gamma'."""
        g = self._coerce(g)
        basis = self.lattice_basis()
        gamma = np.asarray(gamma_coeffs, dtype=float) @ basis
        rm = np.linalg.matrix_power(self.rotation.matrix, g.m)
        rj = np.linalg.matrix_power(self.rotation.matrix, j)
        new_w = gamma - rm @ gamma + rj @ self._w_prime(g)
        return EuclideanElement(l0=g.l0, m=g.m, w_prime=new_w)

    # -- orbit data ----------------------------------------------------------

    def length_spectrum(self, g, window: float) -> list[float]:
        if window <= 0:
            raise DomainError("window must be positive")
        g = self._coerce(g)
        if g.l0 == 0:
            raise DomainError("group element must translate along the axis (l0 != 0)")
        l = self.translation_length(g)
        return sorted(val for val in (-l, l) if abs(val) <= window)

    def orbit_contributions(self, g, l: float) -> list[OrbitContribution]:
        g = self._coerce(g)
        self._require_in_spectrum(g, l)
        hol = complex(np.exp(self.translation_length(g) * self.alpha_v0))
        return [
            OrbitContribution(l=l, sign=1, holonomy=hol, period=self.a / self.order)
        ]

    def validate(self, g=None) -> ModelDiagnostics:
        g = self._coerce(g if g is not None else EuclideanElement(l0=1))
        rm = np.linalg.matrix_power(self.rotation.matrix, g.m)
        try:
            kdim, _ = axis_and_kernel(rm)
        except DomainError as exc:
            return ModelDiagnostics(
                nondegenerate=False,
                witness=f"kernel classification failed: {exc}",
                alpha_in_lattice=alpha_in_two_pi_i_z(complex(self.alpha_v0)),
                continuation_available=True,
                laplacian_kernel_nonzero=False,
            )
        eigvals = np.linalg.eigvals(rm)
        gapv = sorted(abs(ev - 1.0) for ev in eigvals)[1] if kdim == 1 else 0.0
        return ModelDiagnostics(
            nondegenerate=(kdim == 1),
            witness=f"dim ker(r^m - I) = {kdim}; next eigenvalue gap {gapv:.3e}",
            alpha_in_lattice=alpha_in_two_pi_i_z(complex(self.alpha_v0)),
            continuation_available=True,
            laplacian_kernel_nonzero=False,
        )


@dataclass(frozen=True)
class Sphere2Model(FlowModel):
    """Geodesic flow on the frame bundle of the 2-sphere; the group element
    is a rotation angle theta.  Connection: trivial (the only invariant
    flat Hermitian one)."""

    name = "sphere2"
    infinite_spectrum = True
    alpha: complex = 0j  # kept for a uniform surface; must stay 0

    def __post_init__(self):
        if self.alpha != 0:
            raise DomainError(
                "sphere models admit only the trivial flat invariant connection"
            )

    def length_spectrum(self, theta, window: float) -> list[float]:
        if window <= 0:
            raise DomainError("window must be positive")
        theta = float(theta)
        vals = _window_multiples(theta, window) + _window_multiples(-theta, window)
        return sorted(_dedupe(vals)[0])

    def orbit_contributions(self, theta, l: float) -> list[OrbitContribution]:
        theta = float(theta)
        self._require_in_spectrum(theta, l)
        return [OrbitContribution(l=l, sign=1, holonomy=1.0 + 0j, period=TWO_PI)]

    def validate(self, theta=1.0) -> ModelDiagnostics:
        theta = float(theta)
        ad = adjoint_matrix_so(np.block([
            [rot2(theta), np.zeros((2, 1))],
            [np.zeros((1, 2)), np.ones((1, 1))],
        ]))
        kdim = int(np.sum(np.abs(np.linalg.eigvals(ad) - 1.0) <= 1e-8))
        ok, detail = _rational_proxy(theta / TWO_PI)
        return ModelDiagnostics(
            nondegenerate=(kdim == 1),
            witness=f"dim ker(Ad(g^-1) - 1) = {kdim} on so(3), expected 1",
            alpha_in_lattice=True,
            continuation_available=False,
            laplacian_kernel_nonzero=True,
            dense_powers_ok=ok,
            dense_powers_detail=detail,
        )


@dataclass(frozen=True)
class Sphere3Model(FlowModel):
    """Geodesic flow on the frame bundle of the 3-sphere; the group element
    is a pair of rotation angles (theta1, theta2)."""

    name = "sphere3"
    infinite_spectrum = True
    alpha: complex = 0j

    def __post_init__(self):
        if self.alpha != 0:
            raise DomainError(
                "sphere models admit only the trivial flat invariant connection"
            )

    @staticmethod
    def _angles(g) -> tuple[float, float]:
        t1, t2 = g
        return float(t1), float(t2)

    def family_values(self, g, window: float) -> tuple[list[float], list[float]]:
        t1, t2 = self._angles(g)
        fam1 = _window_multiples(t1, window) + _window_multiples(-t1, window)
        fam2 = _window_multiples(t2, window) + _window_multiples(-t2, window)
        return sorted(fam1), sorted(fam2)

    def length_spectrum(self, g, window: float) -> list[float]:
        if window <= 0:
            raise DomainError("window must be positive")
        fam1, fam2 = self.family_values(g, window)
        vals, _ = _dedupe(fam1 + fam2)
        return sorted(vals)

    def orbit_contributions(self, g, l: float) -> list[OrbitContribution]:
        fam1, fam2 = self.family_values(g, abs(l) + 1.0)
        out = []
        for fam in (fam1, fam2):
            if any(abs(l - v) <= 1e-10 for v in fam):
                out.append(
                    OrbitContribution(l=l, sign=1, holonomy=1.0 + 0j, period=TWO_PI)
                )
        if not out:
            raise DomainError(f"l = {l} is not in the delocalised length spectrum")
        return out

    def validate(self, g=(1.0, math.sqrt(2.0))) -> ModelDiagnostics:
        t1, t2 = self._angles(g)
        gm = np.zeros((4, 4))
        gm[:2, :2] = rot2(t1)
        gm[2:, 2:] = rot2(t2)
        ad = adjoint_matrix_so(gm)
        kdim = int(np.sum(np.abs(np.linalg.eigvals(ad) - 1.0) <= 1e-8))
        checks = []
        ok_all = True
        for label, ratio in (
            ("theta1", t1 / TWO_PI),
            ("theta2", t2 / TWO_PI),
            ("theta1-theta2", (t1 - t2) / TWO_PI),
            ("theta1+theta2", (t1 + t2) / TWO_PI),
        ):
            ok, detail = _rational_proxy(ratio)
            ok_all = ok_all and ok
            checks.append(f"{label}: {detail}")
        _, collisions = _dedupe(sum(self.family_values(g, 10.0 * TWO_PI), []))
        return ModelDiagnostics(
            nondegenerate=(kdim == 2),
            witness=(
                f"dim ker(Ad(g^-1) - 1) = {kdim} on so(4), expected 2 "
                "(the torus directions; one is quotiented by the isotropy)"
            ),
            alpha_in_lattice=True,
            continuation_available=False,
            laplacian_kernel_nonzero=True,
            dense_powers_ok=ok_all,
            dense_powers_detail="; ".join(checks),
            spectrum_collisions=collisions,
        )


def _dedupe(values: list[float], tol: float = 1e-10) -> tuple[list[float], int]:
    """Collapse values closer than tol; returns (unique values, collisions)."""
    out: list[float] = []
    collisions = 0
    for v in sorted(values):
        if out and abs(v - out[-1]) <= tol:
            collisions += 1
        else:
            out.append(v)
    return out, collisions


# ---------------------------------------------------------------------------
# Module-level operation surface
# ---------------------------------------------------------------------------

def length_spectrum(model: FlowModel, g, window: float) -> list[float]:
    """Delocalised length spectrum of the model at g, cut to 0 < |l| <= window."""
    return model.length_spectrum(g, window)


def orbit_contributions(model: FlowModel, g, l: float) -> list[OrbitContribution]:
    """Per-orbit (sign, holonomy, folded period) data at spectrum value l."""
    return model.orbit_contributions(g, l)


def validate_model(model: FlowModel, g=None) -> ModelDiagnostics:
    """Nondegeneracy and continuation diagnostics; reports, never gates."""
    if g is None:
        return model.validate()
    return model.validate(g)


# ---------------------------------------------------------------------------
# Numerical cutoff-primitive periods
# ---------------------------------------------------------------------------

def chi_primitive_period_numeric(
    model: FlowModel,
    g,
    orbit_id: int = 0,
    chi_profile: CutoffProfile | None = None,
    quad: QuadratureSpec | None = None,
) -> float:
    """Cutoff-primitive period by quadrature against a normalized profile.

    The profile is normalized by its computed group-translate sum (discrete
    groups) or integral (continuous groups), which enforces the partition
    property; the result must then be profile-independent up to quadrature
    error.  Expected values: 1 for the line, lattice and circle, a/k for
    the Euclidean lattice model, 2*pi for the spheres.
    """
    chi_profile = chi_profile or CutoffProfile()
    quad = quad or QuadratureSpec()

    if isinstance(model, LineModel):
        return _period_line(chi_profile, quad, lattice=False)
    if isinstance(model, IntegerLatticeModel):
        return _period_line(chi_profile, quad, lattice=True)
    if isinstance(model, CircleModel):
        return _period_circle(chi_profile, quad)
    if isinstance(model, EuclideanLatticeModel):
        return _period_euclidean(model, g, chi_profile, quad)
    if isinstance(model, (Sphere2Model, Sphere3Model)):
        # Compact group, constant cutoff: the period is the primitive period.
        steps = max(8, round(TWO_PI / quad.step))
        h = TWO_PI / steps
        t = h * (np.arange(steps) + 0.5)
        return float(np.sum(np.ones_like(t)) * h)
    raise DomainError(f"no cutoff-period rule for model {model!r}")


def _period_line(profile: CutoffProfile, quad: QuadratureSpec, lattice: bool) -> float:
    radius = quad.radius
    if profile.kind == "gaussian":
        tail = math.exp(-(radius**2) / (2.0 * profile.width**2))
        if tail > quad.tol:
            raise NonConvergentError(
                f"truncation radius {radius} cannot certify tail {tail:.3e} < {quad.tol}"
            )
    elif radius < profile.radius:
        raise NonConvergentError("truncation radius smaller than profile support")

    if lattice:
        # chi(x) = f(x) / sum_n f(x+n); integral over the line is then 1.
        xs = np.arange(-radius, radius, quad.step) + 0.5 * quad.step
        shifts = np.arange(-math.ceil(2 * radius), math.ceil(2 * radius) + 1)
        norm = profile((xs[None, :] + shifts[:, None]) ** 2).sum(axis=0)
        chi = profile(xs**2) / norm
        return float(np.sum(chi) * quad.step)
    # Continuous translations: the normalizer is the full integral, computed
    # on a deliberately different grid from the period quadrature.
    fine = quad.step / 3.0
    xs_norm = np.arange(-radius, radius, fine) + 0.5 * fine
    total = float(np.sum(profile(xs_norm**2)) * fine)
    xs = np.arange(-radius, radius, quad.step) + 0.5 * quad.step
    return float(np.sum(profile(xs**2) / total) * quad.step)


def _period_circle(profile: CutoffProfile, quad: QuadratureSpec) -> float:
    # chi on R/Z; normalizer is the circle integral of the profile.
    fine = quad.step / 3.0
    xs_norm = np.arange(0.0, 1.0, fine) + 0.5 * fine
    vals = profile(np.minimum(xs_norm, 1.0 - xs_norm) ** 2)
    total = float(np.sum(vals) * fine)
    xs = np.arange(0.0, 1.0, quad.step) + 0.5 * quad.step
    chi = profile(np.minimum(xs, 1.0 - xs) ** 2) / total
    return float(np.sum(chi) * quad.step)


def _profile_reach(profile: CutoffProfile, tol: float) -> float:
    """Radius beyond which the profile is certified below tol (0 outside)."""
    if profile.kind == "gaussian":
        return profile.width * math.sqrt(2.0 * math.log(1.0 / max(tol, 1e-300)))
    if profile.kind == "constant":
        raise DomainError("a constant profile has no decay on a noncompact group")
    return profile.radius


def _period_euclidean(
    model: EuclideanLatticeModel, g, profile: CutoffProfile, quad: QuadratureSpec
) -> float:
    """Coset-summed period over the transverse lattice, per the trace-formula
    normalization: sum over Gamma' of the line integral of chi along the
    closed-up geodesic through (w, v0), with (I - r) w = w_prime."""
    g = model._coerce(g)
    rm, _ = model.motion_matrix(g)
    v0 = model._axis()
    if not _kernel_dim_one(rm):
        raise DomainError("element rotation must have a one-dimensional kernel")
    # Basepoint of the closed-up geodesic: (I - r) w = w_prime.
    w = solve_transverse(AxisRotation(matrix=rm, axis=v0), model._w_prime(g))

    reach = _profile_reach(profile, quad.tol * 1e-4)
    if reach + float(np.linalg.norm(w)) > quad.radius:
        raise NonConvergentError(
            f"lattice truncation radius {quad.radius} cannot certify the "
            f"profile tail (needs {reach + float(np.linalg.norm(w)):.2f})"
        )

    basis = model.lattice_basis()
    span = int(math.ceil((reach + np.linalg.norm(w)) / model.lattice_spacing)) + 2
    coeffs = np.array(
        [(i, j) for i in range(-span, span + 1) for j in range(-span, span + 1)]
    )
    gamma_all = coeffs @ basis
    # Only cosets whose shifted orbit meets the profile support contribute.
    gamma_pts = gamma_all[np.linalg.norm(gamma_all + w, axis=1) <= reach + 1e-9]

    # Composite Gauss-Legendre in the flow parameter s.
    nodes, weights = np.polynomial.legendre.leggauss(12)
    panel = min(quad.panel, profile.width / 2.0)
    edges = np.arange(-reach, reach + panel, panel)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    s = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
    s_weights = (half[:, None] * weights[None, :]).ravel()

    pts = (
        w[None, None, :]
        + gamma_pts[:, None, :]
        + s[None, :, None] * v0[None, None, :]
    ).reshape(-1, 3)
    numer = profile(np.einsum("ij,ij->i", pts, pts))

    # Translate lattice Gamma = a Z v0 + Gamma' large enough to normalize at
    # every sample point: |t| <= max|x| + reach.
    r_eval = float(np.max(np.linalg.norm(pts, axis=1))) + reach + 1e-9
    axis_reach = int(math.ceil(r_eval / model.a)) + 1
    axis_shifts = model.a * np.arange(-axis_reach, axis_reach + 1)
    span_t = int(math.ceil(r_eval / model.lattice_spacing)) + 2
    coeffs_t = np.array(
        [(i, j) for i in range(-span_t, span_t + 1) for j in range(-span_t, span_t + 1)]
    )
    gamma_t = (coeffs_t @ basis)
    trans = (
        axis_shifts[:, None, None] * v0[None, None, :] + gamma_t[None, :, :]
    ).reshape(-1, 3)
    trans = trans[np.linalg.norm(trans, axis=1) <= r_eval]

    denom = np.zeros(pts.shape[0])
    for j in range(model.order):
        rotated = pts @ np.linalg.matrix_power(model.rotation.matrix, j).T
        for chunk in np.array_split(trans, max(1, len(trans) // 256)):
            diffs = rotated[:, None, :] + chunk[None, :, :]
            denom += profile(np.einsum("ijk,ijk->ij", diffs, diffs)).sum(axis=1)
    if np.any(denom <= 0):
        raise NonConvergentError("translate sum vanished inside the quadrature ball")

    chi = (numer / denom).reshape(len(gamma_pts), len(s))
    return float(np.sum(chi * s_weights[None, :]))


def _kernel_dim_one(m: np.ndarray) -> bool:
    kdim, _ = axis_and_kernel(m)
    return kdim == 1


# ---------------------------------------------------------------------------
# Plain-text model construction (shared with the CLI)
# ---------------------------------------------------------------------------

def parse_complex(text: str) -> complex:
    """Parse the a+bi parameter syntax (plain reals and bare 'i' included)."""
    cleaned = str(text).strip().replace(" ", "").replace("I", "i").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise DomainError(f"cannot parse complex number {text!r}") from exc


def model_from_params(name: str, params: dict) -> tuple[FlowModel, object]:
    """Build (model, group element) from a key=value parameter map.

    The schema is the one the CLI exposes: line/lattice take g and alpha,
    circle takes r0 and alpha, euclid takes n, a, theta, order, l0, m and
    alpha_v0, the spheres take theta resp. theta1/theta2.
    """
    def fget(key, default=None):
        if key not in params:
            if default is None:
                raise DomainError(f"model {name!r} requires parameter {key!r}")
            return default
        try:
            return float(params[key])
        except (TypeError, ValueError) as exc:
            raise DomainError(f"parameter {key!r} must be a real number") from exc

    if name == "line":
        return LineModel(alpha=parse_complex(params.get("alpha", "0"))), fget("g")
    if name == "lattice":
        g = fget("g")
        if g != int(g):
            raise DomainError("lattice group element g must be an integer")
        return IntegerLatticeModel(alpha=parse_complex(params.get("alpha", "0"))), int(g)
    if name == "circle":
        return CircleModel(alpha=parse_complex(params.get("alpha", "0"))), fget("r0")
    if name == "euclid":
        model = EuclideanLatticeModel.from_angle(
            n=int(fget("n", 3.0)),
            a=fget("a", 1.0),
            theta=fget("theta"),
            order=int(fget("order")),
            alpha_v0=parse_complex(params.get("alpha_v0", "0")),
        )
        l0 = fget("l0")
        if l0 != int(l0):
            raise DomainError("euclid parameter l0 must be an integer")
        return model, EuclideanElement(l0=int(l0), m=int(fget("m", 1.0)))
    if name == "sphere2":
        return Sphere2Model(), fget("theta")
    if name == "sphere3":
        return Sphere3Model(), (fget("theta1"), fget("theta2"))
    raise DomainError(
        f"unknown model {name!r}; choose line|lattice|circle|euclid|sphere2|sphere3"
    )
