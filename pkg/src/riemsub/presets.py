"""Bundled metric / complex-structure / map presets.

These are the fixtures referenced by name in scenario files and throughout
the test suite:

* ``euclidean-r4`` — flat metric on R^4 (generic ``euclidean`` works in any
  dimension);
* ``conformal-r2`` — ``exp(2*x1)`` times the flat metric on R^2, the
  smallest metric with nonzero connection coefficients;
* ``canonical-phi`` — the constant orthogonal complex structure on R^4
  sending e1 -> -e2, e2 -> e1, e3 -> -e4, e4 -> e3;
* ``twisted-phi`` — the canonical structure conjugated by a rotation of
  angle x1 in the (e2, e3)-plane: still orthogonal and squaring to -I, but
  not parallel, so it fails the symmetrized-derivative test at generic
  points (negative fixture);
* ``map-example-i`` — ((x1 + x2)/sqrt(2), x3, x4) to R^3;
* ``map-example-ii`` — (sqrt(x1^2 + x2^2), x3, x4) to R^3, singular on the
  x3x4-axis.
"""

from __future__ import annotations

from .expr import Const, parse
from .geometry import ManifoldSpec, SamplingDomain, box_domain


def _expr_matrix(rows, dim: int):
    return [[parse(s, dim) if isinstance(s, str) else s for s in row] for row in rows]


def _matmul(A, B):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for k in range(n):
                term = A[i][k] * B[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def euclidean_metric(dim: int):
    return [
        [Const(1.0) if i == j else Const(0.0) for j in range(dim)] for i in range(dim)
    ]


def euclidean_manifold(dim: int, domain: SamplingDomain | None = None) -> ManifoldSpec:
    if domain is None:
        domain = box_domain(dim, -2.0, 2.0)
    return ManifoldSpec(dim, euclidean_metric(dim), domain)


def conformal_metric_r2():
    e = parse("exp(2 * x1)", 2)
    return [[e, Const(0.0)], [Const(0.0), e]]


def conformal_r2(domain: SamplingDomain | None = None) -> ManifoldSpec:
    if domain is None:
        domain = box_domain(2, -1.5, 1.5)
    return ManifoldSpec(2, conformal_metric_r2(), domain)


def canonical_phi():
    """Constant block structure: column j holds the image of e_j."""
    rows = [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
    return [[Const(v) for v in row] for row in rows]


def twisted_phi():
    """Canonical structure conjugated by an x1-dependent (e2, e3) rotation."""
    c = parse("cos(x1)", 4)
    s = parse("sin(x1)", 4)
    one, zero = Const(1.0), Const(0.0)
    R = [
        [one, zero, zero, zero],
        [zero, c, -s, zero],
        [zero, s, c, zero],
        [zero, zero, zero, one],
    ]
    Rt = [[R[j][i] for j in range(4)] for i in range(4)]
    return _matmul(_matmul(R, canonical_phi()), Rt)


def map_example_i_components():
    return tuple(parse(s, 4) for s in ["(x1 + x2) / sqrt(2)", "x3", "x4"])


def map_example_ii_components():
    return tuple(parse(s, 4) for s in ["sqrt(x1^2 + x2^2)", "x3", "x4"])


# name -> (kind, one-line description)
CATALOG = {
    "euclidean": ("metric", "flat metric, any dimension"),
    "euclidean-r4": ("metric", "flat metric on R^4"),
    "conformal-r2": ("metric", "exp(2*x1) times the flat metric on R^2"),
    "canonical-phi": ("phi", "constant orthogonal complex structure on R^4"),
    "twisted-phi": (
        "phi",
        "canonical structure conjugated by an x1-rotation in (e2,e3); "
        "synthetic non-parallel negative fixture",
    ),
    "map-example-i": ("map", "((x1 + x2)/sqrt(2), x3, x4) onto R^3"),
    "map-example-ii": ("map", "(sqrt(x1^2 + x2^2), x3, x4) onto R^3"),
}


def metric_preset(name: str, dim: int):
    if name == "euclidean":
        return euclidean_metric(dim)
    if name == "euclidean-r4":
        if dim != 4:
            raise ValueError("euclidean-r4 requires dim 4")
        return euclidean_metric(4)
    if name == "conformal-r2":
        if dim != 2:
            raise ValueError("conformal-r2 requires dim 2")
        return conformal_metric_r2()
    raise ValueError(f"unknown metric preset {name!r}")


def phi_preset(name: str, dim: int):
    if dim != 4:
        raise ValueError(f"phi preset {name!r} requires dim 4")
    if name == "canonical-phi":
        return canonical_phi()
    if name == "twisted-phi":
        return twisted_phi()
    raise ValueError(f"unknown phi preset {name!r}")


def map_preset(name: str):
    if name == "map-example-i":
        return map_example_i_components()
    if name == "map-example-ii":
        return map_example_ii_components()
    raise ValueError(f"unknown map preset {name!r}")
