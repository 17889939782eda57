"""Submersion maps, vertical/horizontal splitting, and the O'Neill tensors.

The splitting at a point comes from a rank-revealing SVD of the map's
Jacobian: the vertical space is the null space, the horizontal space its
metric-orthogonal complement, both orthonormalized in the source metric
with a deterministic sign rule (largest-magnitude component positive).

The two fundamental tensors are evaluated from their defining formulas

    T_E F = H nabla_{VE}(VF) + V nabla_{VE}(HF)
    A_E F = H nabla_{HE}(VF) + V nabla_{HE}(HF)

where the projected fields VF, HF are realized by re-projecting at
displaced points (frames recomputed there) and differentiated with a
five-point stencil; both tensors are tensorial in their arguments, so
constant extensions of pointwise vectors are valid inputs.  Projections
only use the projector onto the span, never a basis-vector identification
across nearby points, which keeps the differentiation stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    ManifoldSpec,
    VectorField,
    _field_value,
    christoffel,
    covariant_derivative,
    metric_norm,
)
from .report import CheckReport

FD_STEP = 1e-5
RANK_RTOL = 1e-8


class SubmersionError(Exception):
    pass


class RankDeficiencyError(SubmersionError):
    def __init__(self, point, rank, expected):
        super().__init__(
            f"Jacobian rank {rank} (expected {expected}) at "
            f"{np.asarray(point).tolist()}"
        )
        self.point = np.asarray(point, dtype=float)
        self.rank = rank
        self.expected = expected


class SmoothMap:
    """Map between chart manifolds, one expression per target component."""

    def __init__(self, source: ManifoldSpec, target: ManifoldSpec, components):
        if target.dim >= source.dim:
            raise ValueError("target dimension must be smaller than source dimension")
        if len(components) != target.dim:
            raise ValueError("need one component expression per target coordinate")
        self.source = source
        self.target = target
        self.components = tuple(components)
        m, n = source.dim, target.dim
        self._jac = tuple(
            tuple(c.diff(i + 1) for i in range(m)) for c in self.components
        )
        self._hess = None  # built lazily; [a][i][j] = d_j d_i comp_a
        self._frame_cache = {}

    def map_point(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        return np.array([c.eval(p) for c in self.components])

    def jacobian_at(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        return np.array([[e.eval(p) for e in row] for row in self._jac])

    def jacobian_derivs_at(self, point) -> np.ndarray:
        """Array ``H[a, i, j] = d_j d_i (component a)`` at ``point``."""
        if self._hess is None:
            m = self.source.dim
            self._hess = tuple(
                tuple(tuple(e.diff(j + 1) for j in range(m)) for e in row)
                for row in self._jac
            )
        p = np.asarray(point, dtype=float)
        return np.array(
            [[[e.eval(p) for e in row] for row in layer] for layer in self._hess]
        )


def differential(F: SmoothMap, point) -> np.ndarray:
    """The pushforward matrix (target dim x source dim) at ``point``."""
    return F.jacobian_at(point)


@dataclass
class Frame:
    """Point-anchored orthonormal bases of the vertical/horizontal split."""

    point: np.ndarray
    metric: np.ndarray
    vertical: np.ndarray  # (m - n, m) rows, g-orthonormal
    horizontal: np.ndarray  # (n, m) rows, g-orthonormal

    def vertical_part(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        coeffs = self.vertical @ (self.metric @ v)
        return coeffs @ self.vertical

    def horizontal_part(self, v) -> np.ndarray:
        return np.asarray(v, dtype=float) - self.vertical_part(v)


def _fix_sign(row: np.ndarray) -> np.ndarray:
    # First component of largest magnitude made positive; the magnitude
    # comparison tolerates rounding so exact ties resolve deterministically.
    mags = np.abs(row)
    idx = int(np.argmax(mags >= (1.0 - 1e-9) * mags.max()))
    return -row if row[idx] < 0.0 else row


def _gram_schmidt_g(rows: np.ndarray, g: np.ndarray) -> np.ndarray:
    gram = rows @ g @ rows.T
    if abs(gram - np.eye(len(rows))).max() < 1e-13:
        return np.array([_fix_sign(u) for u in rows])
    out = []
    for row in rows:
        v = row.astype(float)
        for u in out:
            v = v - float(v @ g @ u) * u
        n = metric_norm(g, v)
        if n < 1e-12:
            raise SubmersionError("degenerate basis during orthonormalization")
        out.append(v / n)
    return np.array([_fix_sign(u) for u in out])


def _null_space_rows(A: np.ndarray, expected_rank: int, point) -> np.ndarray:
    _, s, vt = np.linalg.svd(A)
    smax = s[0] if len(s) else 0.0
    rank = int((s > RANK_RTOL * max(smax, 1e-300)).sum())
    if rank != expected_rank:
        raise RankDeficiencyError(point, rank, expected_rank)
    return vt[rank:]


def build_frame(F: SmoothMap, point) -> Frame:
    """Orthonormal vertical and horizontal bases at ``point``.

    Frames are memoized per map and exact point, since the stencil-based
    tensor evaluations revisit the same displaced points many times.
    """
    p = np.asarray(point, dtype=float)
    key = p.tobytes()
    cached = F._frame_cache.get(key)
    if cached is not None:
        return cached
    A = F.jacobian_at(p)
    g = F.source.metric_at(p)
    n = F.target.dim
    kernel = _null_space_rows(A, n, p)
    vertical = _gram_schmidt_g(kernel, g)
    # The g-orthocomplement of the kernel is the inverse-metric image of
    # the Jacobian row space.
    comp = np.linalg.solve(g, A.T).T
    horizontal = _gram_schmidt_g(comp, g)
    frame = Frame(point=p, metric=g, vertical=vertical, horizontal=horizontal)
    if len(F._frame_cache) >= 8192:
        F._frame_cache.clear()
    F._frame_cache[key] = frame
    return frame


def project(frame: Frame, v):
    """Metric-orthogonal (vertical, horizontal) decomposition of ``v``."""
    vert = frame.vertical_part(v)
    return vert, np.asarray(v, dtype=float) - vert


def check_submersion(F: SmoothMap, samples, tolerance: float = 1e-8) -> CheckReport:
    """Maximal rank plus horizontal-length preservation at each sample."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    residual = 0.0
    for p in samples:
        fr = build_frame(F, p)  # raises on rank deficiency
        A = F.jacobian_at(p)
        gn = F.target.metric_at(F.map_point(p))
        for X in fr.horizontal:
            pushed = A @ X
            residual = max(
                residual, abs(metric_norm(gn, pushed) - metric_norm(fr.metric, X))
            )
    return CheckReport.from_residual(
        "submersion-axioms", "def-submersion", len(samples), residual, tolerance
    )


def _directional_derivative(fn, p, u, h: float = FD_STEP) -> np.ndarray:
    """Five-point fourth-order directional derivative of a vector function.

    Differences are grouped before summing so that nearly-equal samples
    cancel exactly instead of leaving an ulp residue amplified by 1/h.
    """
    inner = fn(p + h * u) - fn(p - h * u)
    outer = fn(p - 2.0 * h * u) - fn(p + 2.0 * h * u)
    return (8.0 * inner + outer) / (12.0 * h)


def _covariant_projected(F, direction, Fld, p, gamma, part: str) -> np.ndarray:
    """``nabla_direction`` of the projected field q -> proj_q(Fld(q)).

    ``part`` selects the vertical or horizontal projection.  Returns the
    full covariant derivative vector at ``p``.
    """

    if part == "vertical":
        def fn(q):
            return build_frame(F, q).vertical_part(Fld.at(q))
    else:
        def fn(q):
            return build_frame(F, q).horizontal_part(Fld.at(q))

    d = _directional_derivative(fn, p, direction)
    w = fn(p)
    return d + np.einsum("kij,i,j->k", gamma, direction, w)


def _oneill(F: SmoothMap, E, Fld, point, kind: str, frame=None, gamma=None):
    p = np.asarray(point, dtype=float)
    fr = frame if frame is not None else build_frame(F, p)
    gamma = gamma if gamma is not None else christoffel(F.source, p)
    if not isinstance(Fld, VectorField):
        Fld = VectorField.constant(np.asarray(Fld, dtype=float))
    e = _field_value(E, p)
    u = fr.vertical_part(e) if kind == "T" else fr.horizontal_part(e)

    def vert(q):
        return build_frame(F, q).vertical_part(Fld.at(q))

    dvert = _directional_derivative(vert, p, u)
    fp = Fld.at(p)
    vfp = fr.vertical_part(fp)
    hfp = fp - vfp
    # Derivative of the horizontal projection = derivative of the field
    # minus the vertical piece; the field part is symbolic, hence exact.
    dfield = Fld.jacobian_at(p) @ u
    nabla_vf = dvert + np.einsum("kij,i,j->k", gamma, u, vfp)
    nabla_hf = (dfield - dvert) + np.einsum("kij,i,j->k", gamma, u, hfp)
    return fr.horizontal_part(nabla_vf) + fr.vertical_part(nabla_hf)


def tensor_T(F: SmoothMap, E, Fld, point, frame=None, gamma=None) -> np.ndarray:
    """Fiber-shape tensor: ``H nabla_{VE}(VF) + V nabla_{VE}(HF)`` at ``point``."""
    return _oneill(F, E, Fld, point, "T", frame, gamma)


def tensor_A(F: SmoothMap, E, Fld, point, frame=None, gamma=None) -> np.ndarray:
    """Horizontal-twist tensor: ``H nabla_{HE}(VF) + V nabla_{HE}(HF)``."""
    return _oneill(F, E, Fld, point, "A", frame, gamma)


def check_skew(
    F: SmoothMap,
    samples,
    tolerance: float = 1e-8,
    rng=None,
    pairs: int = 3,
) -> CheckReport:
    """Skew-symmetry of both tensors against random vector pairs."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    rng = rng if rng is not None else np.random.default_rng(0)
    residual = 0.0
    for p in samples:
        fr = build_frame(F, p)
        gamma = christoffel(F.source, p)
        g = fr.metric
        for _ in range(pairs):
            e = rng.standard_normal(F.source.dim)
            f = rng.standard_normal(F.source.dim)
            e /= metric_norm(g, e)
            f /= metric_norm(g, f)
            for U in fr.vertical:
                tu_e = tensor_T(F, U, e, p, fr, gamma)
                tu_f = tensor_T(F, U, f, p, fr, gamma)
                residual = max(
                    residual, abs(float(tu_e @ g @ f) + float(e @ g @ tu_f))
                )
            for X in fr.horizontal:
                ax_e = tensor_A(F, X, e, p, fr, gamma)
                ax_f = tensor_A(F, X, f, p, fr, gamma)
                residual = max(
                    residual, abs(float(ax_e @ g @ f) + float(e @ g @ ax_f))
                )
    return CheckReport.from_residual(
        "oneill-skew", "EQ2.14", len(samples), residual, tolerance
    )


def check_decompositions(
    F: SmoothMap, samples, tolerance: float = 1e-8
) -> CheckReport:
    """Consistency of T and A with the four split covariant derivatives.

    For frame vectors v, w (vertical) and x, y (horizontal), the covariant
    derivative of the projected field must decompose as

        nabla_v(w~) = T_v w + V nabla_v(w~)      (vertical, vertical)
        nabla_v(x~) = H nabla_v(x~) + T_v x      (vertical, horizontal)
        nabla_x(w~) = A_x w + V nabla_x(w~)      (horizontal, vertical)
        nabla_x(y~) = H nabla_x(y~) + A_x y      (horizontal, horizontal)

    where w~ denotes the re-projected extension of w.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    residual = 0.0
    for p in samples:
        fr = build_frame(F, p)
        gamma = christoffel(F.source, p)
        g = fr.metric
        v = fr.vertical[0]
        w = fr.vertical[-1]
        x = fr.horizontal[0]
        y = fr.horizontal[-1]
        wf = VectorField.constant(w)
        xf = VectorField.constant(x)
        yf = VectorField.constant(y)
        d_vw = _covariant_projected(F, v, wf, p, gamma, "vertical")
        residual = max(
            residual,
            metric_norm(g, fr.horizontal_part(d_vw) - tensor_T(F, v, w, p, fr, gamma)),
        )
        d_vx = _covariant_projected(F, v, xf, p, gamma, "horizontal")
        residual = max(
            residual,
            metric_norm(g, fr.vertical_part(d_vx) - tensor_T(F, v, x, p, fr, gamma)),
        )
        d_xw = _covariant_projected(F, x, wf, p, gamma, "vertical")
        residual = max(
            residual,
            metric_norm(g, fr.horizontal_part(d_xw) - tensor_A(F, x, w, p, fr, gamma)),
        )
        d_xy = _covariant_projected(F, x, yf, p, gamma, "horizontal")
        residual = max(
            residual,
            metric_norm(g, fr.vertical_part(d_xy) - tensor_A(F, x, y, p, fr, gamma)),
        )
    return CheckReport.from_residual(
        "oneill-decomposition", "EQ2.10-2.13", len(samples), residual, tolerance
    )


def second_fundamental_form(F: SmoothMap, E, Fld, point) -> np.ndarray:
    """Second fundamental form of the map, in target coordinates.

    ``nabla^N_E (push F) - push(nabla^M_E F)`` with the pullback connection
    on the first term; everything is assembled from symbolic derivatives of
    the map components, so no finite differencing is involved.
    """
    p = np.asarray(point, dtype=float)
    if not isinstance(Fld, VectorField):
        Fld = VectorField.constant(np.asarray(Fld, dtype=float))
    e = _field_value(E, p)
    jac = F.jacobian_at(p)
    hess = F.jacobian_derivs_at(p)  # [a, i, j] = d_j d_i comp_a
    fv = Fld.at(p)
    fj = Fld.jacobian_at(p)  # [i, j] = d_j F^i
    q = F.map_point(p)
    gamma_n = christoffel(F.target, q)
    # d_j of the pushed section s^a = jac[a, i] F^i
    ds = np.einsum("aij,i->aj", hess, fv) + jac @ fj
    pushed_e = jac @ e
    s_val = jac @ fv
    term1 = ds @ e + np.einsum("abc,b,c->a", gamma_n, pushed_e, s_val)
    term2 = jac @ covariant_derivative(F.source, e, Fld, p)
    return term1 - term2


def check_sff_vertical(F: SmoothMap, samples, tolerance: float = 1e-6) -> CheckReport:
    """Second fundamental form of the map against the fiber tensor.

    For vertical pairs the pushforward kills everything except the
    horizontal fiber shape: ``(nabla push)(V, W) = -push(T_V W)``.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    residual = 0.0
    for p in samples:
        fr = build_frame(F, p)
        gamma = christoffel(F.source, p)
        gn = F.target.metric_at(F.map_point(p))
        jac = F.jacobian_at(p)
        for vj in fr.vertical:
            for vk in fr.vertical:
                lhs = second_fundamental_form(F, vj, vk, p)
                rhs = -jac @ tensor_T(F, vj, vk, p, fr, gamma)
                residual = max(residual, metric_norm(gn, lhs - rhs))
    return CheckReport.from_residual(
        "map-second-fundamental-form", "EQ2.15", len(samples), residual, tolerance
    )


def fiber_character(
    F: SmoothMap, samples, tolerance: float = 1e-6
) -> CheckReport:
    """Mean curvature and umbilical / geodesic character of the fibers.

    Per sample: ``H`` is the average of ``T_V V`` over the vertical frame;
    the umbilical residual is ``max |T_{V_j} V_k - g(V_j, V_k) H|`` and the
    geodesic residual ``max |T_{V_j} V_k|``.  The verdict gates on
    umbilicity, with the totally-geodesic flag in the details.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    k = F.source.dim - F.target.dim
    if k == 0:
        raise SubmersionError("map has zero-dimensional fibers")
    umb_max = 0.0
    geo_max = 0.0
    mean_curvatures = []
    for p in samples:
        fr = build_frame(F, p)
        gamma = christoffel(F.source, p)
        g = fr.metric
        T = np.array(
            [
                [tensor_T(F, vj, vk, p, fr, gamma) for vk in fr.vertical]
                for vj in fr.vertical
            ]
        )
        # Mean (not summed) curvature over the vertical frame.
        H = np.mean([T[i, i] for i in range(k)], axis=0)
        mean_curvatures.append(H)
        for j in range(k):
            for l in range(k):
                gram = float(fr.vertical[j] @ g @ fr.vertical[l])
                umb_max = max(umb_max, metric_norm(g, T[j, l] - gram * H))
                geo_max = max(geo_max, metric_norm(g, T[j, l]))
    return CheckReport.from_residual(
        "fiber-character",
        "eq-7",
        len(samples),
        umb_max,
        tolerance,
        {
            "fiber_dim": k,
            "geodesic_residual": geo_max,
            "totally_geodesic": geo_max <= tolerance,
            "totally_umbilical": umb_max <= tolerance,
            "mean_curvature": [h.tolist() for h in mean_curvatures],
        },
    )
