"""Cauchy kernel, contour meshes, and the quadrature expansion oracle.

A holomorphic function on a neighborhood of a product of ellipses can be
reconstructed inside from boundary samples:

    f(x) ~ sum_k theta_k * K(xi_k, x),   K(xi, x) = prod_i 1/(xi_i - x_i),

with theta_k = f(zeta_k) * dzeta_k / (2 pi i)^N from trapezoidal contour
quadrature.  On parametrized ellipses the integrand is periodic and
analytic, so the error decays geometrically in the node count; this makes
the expansion an independent, training-free reference for approximation
tests.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import PoleEncountered, SchemaError, SingularSystem

DEFAULT_RIDGE = 1e-15


@dataclass
class BoundaryMesh:
    """Per-dimension contour nodes and complex arc increments.

    nodes[i][j] is the j-th node on the boundary contour of dimension i;
    increments[i][j] the matching trapezoidal d(zeta).  A closed contour's
    increments sum to zero.
    """
    nodes: list        # list of complex arrays, one per dimension
    increments: list   # matching complex arrays

    @property
    def ndim(self) -> int:
        return len(self.nodes)


@dataclass
class KernelExpansion:
    xi: np.ndarray      # complex (k, N) boundary points
    theta: np.ndarray   # complex (k,) weights

    def __post_init__(self):
        self.xi = np.asarray(self.xi, dtype=complex)
        if self.xi.ndim == 1:
            self.xi = self.xi[:, None]
        self.theta = np.asarray(self.theta, dtype=complex)
        if len(self.xi) != len(self.theta):
            raise ValueError("points and weights differ in length")


def cauchy_kernel(xi, x) -> complex:
    """prod_i 1/(xi_i - x_i); raises PoleEncountered on a zero factor."""
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = xi - x
    if np.any(d == 0):
        raise PoleEncountered("kernel evaluated at one of its poles")
    return complex(np.prod(1.0 / d))


def ellipse_mesh(a: float, b: float, center: complex = 0j,
                 nodes: int = 64) -> BoundaryMesh:
    """Equal-parameter trapezoidal mesh of the ellipse a*cos t + i b*sin t."""
    if a <= 0 or b <= 0:
        raise ValueError("semi-axes must be positive")
    if nodes < 4:
        raise ValueError("need at least 4 nodes")
    t = 2 * np.pi * np.arange(nodes) / nodes
    zeta = center + a * np.cos(t) + 1j * b * np.sin(t)
    dzeta = (-a * np.sin(t) + 1j * b * np.cos(t)) * (2 * np.pi / nodes)
    return BoundaryMesh([zeta], [dzeta])


def product_mesh(*meshes: BoundaryMesh) -> BoundaryMesh:
    """Tensor product of one-dimensional meshes."""
    nodes, increments = [], []
    for m in meshes:
        nodes.extend(m.nodes)
        increments.extend(m.increments)
    return BoundaryMesh(nodes, increments)


def quadrature_expansion(f_boundary, mesh: BoundaryMesh) -> KernelExpansion:
    """Discretize the boundary integral of f against the Cauchy kernel.

    For each tensor-product node zeta_k the weight is
    f(zeta_k) * prod_i dzeta_k,i / (2 pi i)^N.  f_boundary receives a
    complex scalar for N=1 and a complex vector for N>1.
    """
    N = mesh.ndim
    scale = (2j * np.pi) ** N
    points, weights = [], []
    for combo in itertools.product(*(range(len(nd)) for nd in mesh.nodes)):
        zeta = np.array([mesh.nodes[i][j] for i, j in enumerate(combo)])
        dz = np.prod([mesh.increments[i][j] for i, j in enumerate(combo)])
        fval = f_boundary(zeta[0] if N == 1 else zeta)
        points.append(zeta)
        weights.append(complex(fval) * dz / scale)
    return KernelExpansion(np.array(points), np.array(weights))


def evaluate_expansion(exp: KernelExpansion, x) -> complex:
    """sum_k theta_k K(xi_k, x); an empty expansion evaluates to 0."""
    if len(exp.theta) == 0:
        return 0j
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = exp.xi - x[None, :]
    if np.any(d == 0):
        raise PoleEncountered("evaluation point coincides with a boundary point")
    return complex(np.sum(exp.theta * np.prod(1.0 / d, axis=1)))


def evaluate_expansion_grid(exp: KernelExpansion, xs) -> np.ndarray:
    """Vectorized evaluate_expansion over an (n,) or (n, N) array of points."""
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 1:
        xs = xs[:, None]
    d = exp.xi[None, :, :] - xs[:, None, :]
    if np.any(d == 0):
        raise PoleEncountered("evaluation point coincides with a boundary point")
    return (exp.theta[None, :] * np.prod(1.0 / d, axis=2)).sum(axis=1)


def fit_expansion_least_squares(samples, points, ridge: float = DEFAULT_RIDGE
                                ) -> KernelExpansion:
    """Weights minimizing sum_j |sum_k theta_k K(xi_k, x_j) - f_j|^2 + ridge*|theta|^2.

    Solved through the SVD of the design matrix (filter factors
    s/(s^2 + ridge)); Cauchy-kernel design matrices are too ill-conditioned
    for explicit normal equations.  samples is a sequence of (x, f(x)).
    """
    if len(samples) < 1:
        raise ValueError("need at least one sample")
    points = np.asarray(points, dtype=complex)
    if points.ndim == 1:
        points = points[:, None]
    if len(points) < 1:
        raise ValueError("need at least one boundary point")
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")

    xs = np.array([np.atleast_1d(np.asarray(s[0], dtype=float)) for s in samples])
    fs = np.array([complex(s[1]) for s in samples])
    d = points[None, :, :] - xs[:, None, :]
    if np.any(d == 0):
        raise PoleEncountered("a sample coincides with a boundary point")
    A = np.prod(1.0 / d, axis=2)

    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"SVD failed: {exc}") from None
    if ridge == 0 and np.any(s == 0):
        raise SingularSystem("design matrix is exactly rank-deficient with ridge 0")
    filt = s / (s * s + ridge)
    theta = Vh.conj().T @ (filt * (U.conj().T @ fs))
    if not np.all(np.isfinite(theta)):
        raise SingularSystem("regularized solve produced non-finite weights")
    return KernelExpansion(points, theta)


def save_expansion(exp: KernelExpansion, path) -> None:
    doc = {
        "version": 1,
        "xi_re": exp.xi.real.tolist(),
        "xi_im": exp.xi.imag.tolist(),
        "theta_re": exp.theta.real.tolist(),
        "theta_im": exp.theta.imag.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_expansion(path) -> KernelExpansion:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    for key in ("version", "xi_re", "xi_im", "theta_re", "theta_im"):
        if key not in doc:
            raise SchemaError(f"{path}: missing field {key!r}")
    if doc["version"] != 1:
        raise SchemaError(f"{path}: unsupported version {doc['version']!r}")
    xi = np.asarray(doc["xi_re"], dtype=float) + 1j * np.asarray(doc["xi_im"], dtype=float)
    theta = np.asarray(doc["theta_re"], dtype=float) + 1j * np.asarray(doc["theta_im"], dtype=float)
    if len(np.atleast_1d(theta)) != len(np.atleast_2d(xi)):
        raise SchemaError(f"{path}: xi and theta lengths differ")
    return KernelExpansion(xi, theta)
