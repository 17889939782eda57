"""Riemannian machinery on a single global chart.

A manifold is described by its dimension, a symmetric matrix of metric
expressions, and a sampling domain (a coordinate box minus optional
exclusion tubes around singular loci).  On top of that this module provides
Christoffel symbols, the Koszul pairing, covariant derivatives, gradients,
and fixed-step RK4 geodesic integration with energy-drift bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .expr import Expr, Const, is_zero, parse

RANK_RTOL = 1e-8
_MAX_SAMPLE_TRIES = 10_000


class GeometryError(Exception):
    pass


class SingularMetricError(GeometryError):
    def __init__(self, point):
        super().__init__(f"metric is singular at {np.asarray(point).tolist()}")
        self.point = np.asarray(point, dtype=float)


class DomainExitError(GeometryError):
    """Geodesic integration left the sampling domain.

    Carries the trajectory integrated so far, the first outside point, and
    the arc parameter at which the exit happened.
    """

    def __init__(self, trajectory, exit_point, s):
        super().__init__(
            f"trajectory left the sampling domain at s={s:.6g}, "
            f"point {np.asarray(exit_point).tolist()}"
        )
        self.trajectory = trajectory
        self.exit_point = np.asarray(exit_point, dtype=float)
        self.s = float(s)


@dataclass(frozen=True)
class ExclusionTube:
    """Excludes points where ``expr`` evaluates below ``radius``."""

    expr: Expr
    radius: float


@dataclass(frozen=True)
class SamplingDomain:
    intervals: tuple
    tubes: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def contains(self, point) -> bool:
        p = np.asarray(point, dtype=float)
        for i, (lo, hi) in enumerate(self.intervals):
            if not (lo <= p[i] <= hi):
                return False
        for tube in self.tubes:
            if tube.expr.eval(p) < tube.radius:
                return False
        return True

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw ``count`` points uniformly, rejecting excluded ones."""
        lo = np.array([iv[0] for iv in self.intervals])
        hi = np.array([iv[1] for iv in self.intervals])
        points = np.empty((count, self.dim))
        for k in range(count):
            for _ in range(_MAX_SAMPLE_TRIES):
                p = lo + (hi - lo) * rng.random(self.dim)
                if self.contains(p):
                    points[k] = p
                    break
            else:
                raise GeometryError(
                    "could not draw a sample point; exclusion tubes too large?"
                )
        return points


def box_domain(dim: int, lo: float, hi: float, tubes=()) -> SamplingDomain:
    return SamplingDomain(tuple((lo, hi) for _ in range(dim)), tuple(tubes))


class ManifoldSpec:
    """Chart dimension, metric expression matrix, and sampling domain."""

    def __init__(self, dim: int, metric, domain: SamplingDomain):
        if dim < 1:
            raise ValueError("dim must be positive")
        if len(metric) != dim or any(len(row) != dim for row in metric):
            raise ValueError(f"metric must be a {dim}x{dim} matrix of expressions")
        if domain.dim != dim:
            raise ValueError("sampling domain dimension mismatch")
        self.dim = dim
        self.metric = tuple(tuple(row) for row in metric)
        self.domain = domain
        # derivs[l][i][j] = d/dx_{l+1} of g_ij
        self._derivs = tuple(
            tuple(tuple(e.diff(l + 1) for e in row) for row in self.metric)
            for l in range(dim)
        )
        self.is_flat_constant = all(
            is_zero(e) for layer in self._derivs for row in layer for e in row
        )
        self._const_metric = None
        if all(isinstance(e, Const) for row in self.metric for e in row):
            self._const_metric = np.array(
                [[e.value for e in row] for row in self.metric]
            )

    def metric_at(self, point) -> np.ndarray:
        if self._const_metric is not None:
            return self._const_metric
        p = np.asarray(point, dtype=float)
        return np.array([[e.eval(p) for e in row] for row in self.metric])

    def metric_derivs_at(self, point) -> np.ndarray:
        """Array ``D[l, i, j] = d g_ij / d x_{l+1}`` at ``point``."""
        p = np.asarray(point, dtype=float)
        return np.array(
            [[[e.eval(p) for e in row] for row in layer] for layer in self._derivs]
        )

    def inverse_metric_at(self, point) -> np.ndarray:
        g = self.metric_at(point)
        _check_invertible(g, point)
        return np.linalg.inv(g)

    def validate(self, samples) -> None:
        """Check symmetry and positive definiteness at the given points."""
        for p in np.atleast_2d(np.asarray(samples, dtype=float)):
            g = self.metric_at(p)
            if not np.allclose(g, g.T, rtol=0.0, atol=1e-12 * max(1.0, abs(g).max())):
                raise GeometryError(f"metric not symmetric at {p.tolist()}")
            eigs = np.linalg.eigvalsh(0.5 * (g + g.T))
            if eigs.min() <= RANK_RTOL * max(abs(np.diag(g)).max(), 1e-300):
                raise GeometryError(f"metric not positive definite at {p.tolist()}")


def _check_invertible(g: np.ndarray, point) -> None:
    scale = max(abs(np.diag(g)).max(), 1e-300)
    smin = np.linalg.svd(g, compute_uv=False).min()
    if smin <= RANK_RTOL * scale:
        raise SingularMetricError(point)


class VectorField:
    """Field with one expression per coordinate component."""

    def __init__(self, components):
        self.components = tuple(components)
        self.dim = len(self.components)
        # jac[k][i] = d X^{k+1} / d x_{i+1}, built lazily
        self._jac = None

    @classmethod
    def constant(cls, values) -> "VectorField":
        return cls(tuple(Const(float(v)) for v in values))

    @classmethod
    def from_strings(cls, strings, dim: int) -> "VectorField":
        return cls(tuple(parse(s, dim) for s in strings))

    @classmethod
    def coordinate(cls, index: int, dim: int) -> "VectorField":
        """The coordinate frame field along ``x<index>``."""
        return cls.constant([1.0 if i == index - 1 else 0.0 for i in range(dim)])

    def at(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        return np.array([c.eval(p) for c in self.components])

    def jacobian_at(self, point) -> np.ndarray:
        """Array ``J[k, i] = d X^{k+1} / d x_{i+1}`` at ``point``."""
        if self._jac is None:
            self._jac = tuple(
                tuple(c.diff(i + 1) for i in range(self.dim)) for c in self.components
            )
        p = np.asarray(point, dtype=float)
        return np.array([[e.eval(p) for e in row] for row in self._jac])


def _field_value(X, point) -> np.ndarray:
    if isinstance(X, VectorField):
        return X.at(point)
    return np.asarray(X, dtype=float)


def metric_norm(g: np.ndarray, v: np.ndarray) -> float:
    """Norm of a tangent vector in the metric ``g`` at the anchoring point."""
    q = float(v @ g @ v)
    return float(np.sqrt(max(q, 0.0)))


def christoffel(M: ManifoldSpec, point) -> np.ndarray:
    """Connection coefficients ``G[k, i, j]`` of the Levi-Civita connection."""
    p = np.asarray(point, dtype=float)
    g = M.metric_at(p)
    _check_invertible(g, p)
    if M.is_flat_constant:
        return np.zeros((M.dim, M.dim, M.dim))
    ginv = np.linalg.inv(g)
    D = M.metric_derivs_at(p)  # D[l, i, j] = d_l g_ij
    # B[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    B = D + D.transpose(1, 0, 2) - D.transpose(1, 2, 0)
    return 0.5 * np.einsum("kl,ijl->kij", ginv, B)


def _pairing_value_and_grad(M: ManifoldSpec, X: VectorField, Y: VectorField, p):
    """Value and coordinate gradient of the scalar field g(X, Y) at ``p``."""
    g = M.metric_at(p)
    D = M.metric_derivs_at(p)
    xv, yv = X.at(p), Y.at(p)
    xj, yj = X.jacobian_at(p), Y.jacobian_at(p)
    value = float(xv @ g @ yv)
    grad = (
        np.einsum("lij,i,j->l", D, xv, yv)
        + np.einsum("ij,il,j->l", g, xj, yv)
        + np.einsum("ij,i,jl->l", g, xv, yj)
    )
    return value, grad


def _lie_bracket_at(X: VectorField, Y: VectorField, p) -> np.ndarray:
    xv, yv = X.at(p), Y.at(p)
    return Y.jacobian_at(p) @ xv - X.jacobian_at(p) @ yv


def koszul(M: ManifoldSpec, X: VectorField, Y: VectorField, Z: VectorField, point):
    """Value of the Koszul pairing, equal to ``2 g(nabla_X Y, Z)`` at ``point``."""
    p = np.asarray(point, dtype=float)
    g = M.metric_at(p)
    xv = X.at(p)
    yv = Y.at(p)
    zv = Z.at(p)
    _, d_yz = _pairing_value_and_grad(M, Y, Z, p)
    _, d_zx = _pairing_value_and_grad(M, Z, X, p)
    _, d_xy = _pairing_value_and_grad(M, X, Y, p)
    b_yz = _lie_bracket_at(Y, Z, p)
    b_xz = _lie_bracket_at(X, Z, p)
    b_xy = _lie_bracket_at(X, Y, p)
    return float(
        xv @ d_yz
        + yv @ d_zx
        - zv @ d_xy
        - b_yz @ g @ xv
        - b_xz @ g @ yv
        + b_xy @ g @ zv
    )


def covariant_derivative(M: ManifoldSpec, X, Y: VectorField, point) -> np.ndarray:
    """Components of ``(nabla_X Y)`` at ``point``.

    ``X`` may be a :class:`VectorField` or a plain tangent vector (the
    derivative is tensorial in the direction).  ``Y`` must be a field.
    """
    p = np.asarray(point, dtype=float)
    xv = _field_value(X, p)
    yv = Y.at(p)
    gamma = christoffel(M, p)
    return Y.jacobian_at(p) @ xv + np.einsum("kij,i,j->k", gamma, xv, yv)


def gradient(M: ManifoldSpec, f: Expr, point) -> np.ndarray:
    """Metric gradient: components ``g^{kj} d_j f`` at ``point``."""
    p = np.asarray(point, dtype=float)
    df = np.array([f.diff(i + 1).eval(p) for i in range(M.dim)])
    return M.inverse_metric_at(p) @ df


@dataclass
class GeodesicTrajectory:
    """Discretized curve: arc parameters, points, velocities, diagnostics."""

    s: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    step: float
    energies: np.ndarray = field(default=None)
    energy_drift: float = 0.0

    def __len__(self) -> int:
        return len(self.s)

    @classmethod
    def from_samples(cls, M: ManifoldSpec, s, points, velocities, step):
        """Wrap explicit samples (e.g. an analytic curve) with energy data."""
        s = np.asarray(s, dtype=float)
        points = np.asarray(points, dtype=float)
        velocities = np.asarray(velocities, dtype=float)
        energies = np.array(
            [v @ M.metric_at(p) @ v for p, v in zip(points, velocities)]
        )
        drift = float(abs(energies - energies[0]).max()) if len(energies) else 0.0
        return cls(s, points, velocities, float(step), energies, drift)


def geodesic_integrate(
    M: ManifoldSpec, p0, v0, length: float, step: float
) -> GeodesicTrajectory:
    """Classical fixed-step RK4 solution of the geodesic equation.

    Integrates ``round(length / step)`` steps of exactly ``step``.  Raises
    :class:`DomainExitError` (carrying the partial trajectory) if the curve
    leaves the sampling domain.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if length < 0.0:
        raise ValueError("length must be nonnegative")
    p0 = np.asarray(p0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if not M.domain.contains(p0):
        raise ValueError(f"initial point {p0.tolist()} outside sampling domain")

    def acceleration(x, v):
        gamma = christoffel(M, x)
        return -np.einsum("kij,i,j->k", gamma, v, v)

    n_steps = max(int(round(length / step)), 0)
    points = [p0]
    velocities = [v0]
    x, v = p0, v0
    for k in range(n_steps):
        k1x, k1v = v, acceleration(x, v)
        k2x, k2v = v + 0.5 * step * k1v, acceleration(x + 0.5 * step * k1x, v + 0.5 * step * k1v)
        k3x, k3v = v + 0.5 * step * k2v, acceleration(x + 0.5 * step * k2x, v + 0.5 * step * k2v)
        k4x, k4v = v + step * k3v, acceleration(x + step * k3x, v + step * k3v)
        x = x + (step / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + (step / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not M.domain.contains(x):
            partial = _finish_trajectory(M, points, velocities, step)
            raise DomainExitError(partial, x, (k + 1) * step)
        points.append(x)
        velocities.append(v)
    return _finish_trajectory(M, points, velocities, step)


def _finish_trajectory(M, points, velocities, step) -> GeodesicTrajectory:
    points = np.array(points)
    velocities = np.array(velocities)
    s = step * np.arange(len(points))
    energies = np.array([v @ M.metric_at(p) @ v for p, v in zip(points, velocities)])
    drift = float(abs(energies - energies[0]).max())
    return GeodesicTrajectory(s, points, velocities, float(step), energies, drift)


def sample_points(domain: SamplingDomain, count: int, seed) -> np.ndarray:
    """Seeded uniform samples from the domain (rejection sampling)."""
    rng = np.random.default_rng(seed)
    return domain.sample(rng, count)
