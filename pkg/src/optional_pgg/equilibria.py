"""Stationary points, stability and pairwise invasion structure at mu = 0.

The selection-only dynamics has the three pure-strategy vertices, up to two
mixed edge equilibria with closed-form locations, and possibly one interior
coexistence point that is located numerically.  Stability is classified
from the eigenvalues of a finite-difference Jacobian of the dynamics
restricted to the simplex plane (coordinates x, y with z = 1 - x - y), so
the constraint direction never contributes a spurious eigenvalue.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._kernels import field_kernel, gap_kernel
from .game import GameParams, SimplexState

logger = logging.getLogger(__name__)

#: Eigenvalue real parts closer to zero than this are treated as zero.
EIGENVALUE_THRESHOLD = 1e-7
#: Edge endpoint growth rates closer to zero than this are flagged nonhyperbolic.
EDGE_RATE_THRESHOLD = 1e-10

KIND_VERTEX_C = "vertex_C"
KIND_VERTEX_D = "vertex_D"
KIND_VERTEX_N = "vertex_N"
KIND_EDGE_DN = "edge_DN"
KIND_EDGE_CN = "edge_CN"
KIND_INTERIOR = "interior"

EDGES = ("CD", "CN", "DN")


@dataclass(frozen=True)
class Equilibrium:
    """A fixed point of the selection-only dynamics."""

    location: SimplexState
    kind: str
    eigenvalues: tuple[complex, ...]
    stability: str


@dataclass(frozen=True)
class EdgeRoot:
    """Mixed equilibrium on a two-strategy edge, in edge coordinates."""

    s: float
    location: SimplexState
    stability: str


@dataclass(frozen=True)
class EdgeReport:
    """Sign structure of the dynamics restricted to one simplex edge."""

    edge: str
    endpoint_stability: tuple[tuple[str, str], tuple[str, str]]
    interior_root: EdgeRoot | None
    direction_summary: str


def _require_zero_mu(params: GameParams) -> None:
    if params.mu != 0.0:
        raise ValueError("equilibrium analysis requires mu = 0")


# ---------------------------------------------------------------------------
# Edge dynamics
# ---------------------------------------------------------------------------

def edge_dynamics(params: GameParams, edge: str, s: float) -> float:
    """Growth rate of the first-named strategy's share s along an edge.

    Edges are "CD" (s = cooperator share, no non-participants), "CN"
    (s = cooperator share, no defectors) and "DN" (s = defector share, no
    cooperators).
    """
    _require_zero_mu(params)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"edge coordinate must lie in [0, 1], got {s}")
    m, r = params.group_size, params.enhancement
    alpha, beta = params.alpha, params.beta
    if edge == "CD":
        return s * (1.0 - s) * (r / m - 1.0)
    if edge == "CN":
        rest = 1.0 - s
        return rest * (1.0 - rest ** (m - 1)) * (s * (r - 1.0 - alpha - beta) + beta)
    if edge == "DN":
        rest = 1.0 - s
        return rest * (1.0 - rest ** (m - 1)) * (beta - s * (alpha + beta))
    raise ValueError(f"unknown edge {edge!r}, expected one of {EDGES}")


def _edge_endpoint_rates(params: GameParams, edge: str) -> tuple[float, float]:
    """Linear growth rates at s = 0 and s = 1 (closed forms)."""
    m, r = params.group_size, params.enhancement
    alpha, beta = params.alpha, params.beta
    if edge == "CD":
        return r / m - 1.0, 1.0 - r / m
    if edge == "CN":
        return (m - 1.0) * beta, -(r - 1.0 - alpha)
    if edge == "DN":
        return (m - 1.0) * beta, alpha
    raise ValueError(f"unknown edge {edge!r}")


def _rate_label(lam: float) -> str:
    if abs(lam) < EDGE_RATE_THRESHOLD:
        return "nonhyperbolic"
    return "stable" if lam < 0 else "unstable"


def _edge_location(edge: str, s: float) -> SimplexState:
    if edge == "CD":
        return SimplexState(s, 1.0 - s, 0.0)
    if edge == "CN":
        return SimplexState(s, 0.0, 1.0 - s)
    return SimplexState(0.0, s, 1.0 - s)


def find_edge_root(params: GameParams, edge: str) -> EdgeRoot | None:
    """Locate an interior rest point of an edge by sign-change bracketing.

    Independent of the closed-form root locations: the rate function is
    scanned for a sign change and the root is refined by Brent's method.
    """
    _require_zero_mu(params)
    grid = np.linspace(1e-6, 1.0 - 1e-6, 201)
    values = [edge_dynamics(params, edge, s) for s in grid]
    bracket = None
    for left, right, v_left, v_right in zip(grid, grid[1:], values, values[1:]):
        if v_left == 0.0:
            continue
        if v_left * v_right < 0.0:
            bracket = (left, right)
            break
    if bracket is None:
        return None
    root = brentq(lambda s: edge_dynamics(params, edge, s), *bracket, xtol=1e-15, rtol=8.9e-16)
    delta = 1e-7
    slope = (edge_dynamics(params, edge, root + delta) - edge_dynamics(params, edge, root - delta)) / (2 * delta)
    return EdgeRoot(s=float(root), location=_edge_location(edge, float(root)), stability=_rate_label(slope))


def invasion_map(params: GameParams) -> tuple[EdgeReport, EdgeReport, EdgeReport]:
    """Qualitative invasion structure on the three edges."""
    _require_zero_mu(params)
    reports = []
    for edge in EDGES:
        lam0, lam1 = _edge_endpoint_rates(params, edge)
        label0, label1 = _rate_label(lam0), _rate_label(lam1)
        root = find_edge_root(params, edge)
        first, second = edge[0], edge[1]
        if label0 == "nonhyperbolic" or label1 == "nonhyperbolic":
            summary = "nonhyperbolic"
        elif lam0 > 0 and lam1 > 0:
            summary = "mixed_stable"
        elif lam0 < 0 and lam1 < 0:
            summary = "bistable"
        elif lam0 > 0 and lam1 < 0:
            summary = _DOMINANCE_LABEL[first]
        else:
            summary = _DOMINANCE_LABEL[second]
        reports.append(
            EdgeReport(
                edge=edge,
                endpoint_stability=((second, label0), (first, label1)),
                interior_root=root,
                direction_summary=summary,
            )
        )
    return tuple(reports)


_DOMINANCE_LABEL = {
    "C": "cooperation_dominant",
    "D": "defection_dominant",
    "N": "nonparticipation_dominant",
}


# ---------------------------------------------------------------------------
# Jacobian and stability
# ---------------------------------------------------------------------------

def _field_xy(params: GameParams, x: float, y: float) -> tuple[float, float]:
    """Selection field restricted to the simplex plane, z eliminated."""
    dx, dy, _ = field_kernel(
        params.group_size, params.enhancement, params.alpha, params.beta, 0.0,
        x, y, 1.0 - x - y,
    )
    return dx, dy


def jacobian(params: GameParams, state: SimplexState) -> tuple[np.ndarray, tuple[complex, complex]]:
    """Central finite-difference Jacobian in reduced (x, y) coordinates.

    Returns the 2x2 matrix together with its eigenvalues, ordered by
    descending real part.
    """
    _require_zero_mu(params)
    if abs(state.x + state.y + state.z - 1.0) > 1e-9 or min(state.x, state.y, state.z) < -1e-9:
        raise ValueError("state does not lie on the simplex")
    x, y = state.x, state.y
    jac = np.empty((2, 2))
    hx = 1e-6 * max(1.0, abs(x))
    hy = 1e-6 * max(1.0, abs(y))
    fx_p = _field_xy(params, x + hx, y)
    fx_m = _field_xy(params, x - hx, y)
    fy_p = _field_xy(params, x, y + hy)
    fy_m = _field_xy(params, x, y - hy)
    jac[0, 0] = (fx_p[0] - fx_m[0]) / (2 * hx)
    jac[1, 0] = (fx_p[1] - fx_m[1]) / (2 * hx)
    jac[0, 1] = (fy_p[0] - fy_m[0]) / (2 * hy)
    jac[1, 1] = (fy_p[1] - fy_m[1]) / (2 * hy)
    eigs = sorted(np.linalg.eigvals(jac), key=lambda v: (-v.real, v.imag))
    return jac, (complex(eigs[0]), complex(eigs[1]))


def stability_from_eigenvalues(eigenvalues, threshold: float = EIGENVALUE_THRESHOLD) -> str:
    """Map eigenvalue real parts to a stability label."""
    reals = [ev.real for ev in eigenvalues]
    if any(abs(re) < threshold for re in reals):
        return "nonhyperbolic"
    if all(re < 0 for re in reals):
        return "stable"
    if all(re > 0 for re in reals):
        return "unstable"
    return "saddle"


# ---------------------------------------------------------------------------
# Stationary point enumeration
# ---------------------------------------------------------------------------

def _gap_derivative(m: int, r: float, z: float) -> float:
    power_term = (r - 1.0) * (m - 1) * z ** (m - 2)
    geo_derivative = 0.0
    zpow = 1.0
    for k in range(1, m):
        geo_derivative += k * zpow
        zpow *= z
    return power_term - (r / m) * geo_derivative


_NEWTON_SEEDS = (
    (1 / 3, 1 / 3, 1 / 3),
    (2 / 3, 1 / 6, 1 / 6),
    (1 / 6, 2 / 3, 1 / 6),
    (1 / 6, 1 / 6, 2 / 3),
    (5 / 12, 5 / 12, 1 / 6),
    (5 / 12, 1 / 6, 5 / 12),
    (1 / 6, 5 / 12, 5 / 12),
)


def _interior_residual(params: GameParams, f: float, z: float) -> tuple[float, float]:
    """Equal-payoff conditions: zero payoff gap and zero abstention advantage."""
    m, r = params.group_size, params.enhancement
    gap = gap_kernel(m, r, z)
    advantage = params.alpha - (r - 1.0) * f - params.beta * z / (1.0 - z)
    return gap, advantage


def _newton_interior(params: GameParams, seed: tuple[float, float, float]) -> tuple[float, float] | None:
    m, r = params.group_size, params.enhancement
    x0, y0, z0 = seed
    f = x0 / (x0 + y0)
    z = z0
    lo, hi = 1e-10, 1.0 - 1e-10
    res = _interior_residual(params, f, z)
    norm = max(abs(res[0]), abs(res[1]))
    for _ in range(100):
        if norm < 1e-13:
            return f, z
        j00 = 0.0
        j01 = _gap_derivative(m, r, z)
        j10 = -(r - 1.0)
        j11 = -params.beta / (1.0 - z) ** 2
        det = j00 * j11 - j01 * j10
        if det == 0.0:
            return None
        step_f = (-res[0] * j11 + res[1] * j01) / det
        step_z = (-res[1] * j00 + res[0] * j10) / det
        scale = 1.0
        improved = False
        for _ in range(40):
            f_new = min(max(f + scale * step_f, lo), hi)
            z_new = min(max(z + scale * step_z, lo), hi)
            res_new = _interior_residual(params, f_new, z_new)
            norm_new = max(abs(res_new[0]), abs(res_new[1]))
            if norm_new < norm:
                f, z, res, norm = f_new, z_new, res_new, norm_new
                improved = True
                break
            scale *= 0.5
        if not improved:
            return None
    return (f, z) if norm < 1e-13 else None


def find_interior_equilibrium(params: GameParams) -> list[SimplexState]:
    """Interior coexistence points, by damped Newton from a seed stencil.

    Seeds are the barycenter and the midpoints from it toward each vertex
    and each edge midpoint; converged roots are deduplicated within 1e-8
    and kept only when strictly inside the simplex.  Seeds that fail to
    converge are logged and skipped.
    """
    _require_zero_mu(params)
    found: list[SimplexState] = []
    for seed in _NEWTON_SEEDS:
        solved = _newton_interior(params, seed)
        if solved is None:
            logger.debug("interior solve did not converge from seed %s", seed)
            continue
        f, z = solved
        x = f * (1.0 - z)
        y = (1.0 - f) * (1.0 - z)
        if min(x, y, z) < 1e-9:
            continue
        if any(
            max(abs(x - p.x), abs(y - p.y), abs(z - p.z)) < 1e-8
            for p in found
        ):
            continue
        found.append(SimplexState(x, y, z))
    return found


def _residual_norm(params: GameParams, state: SimplexState) -> float:
    rates = field_kernel(
        params.group_size, params.enhancement, params.alpha, params.beta, 0.0,
        state.x, state.y, state.z,
    )
    return max(abs(v) for v in rates)


def stationary_points(params: GameParams) -> list[Equilibrium]:
    """All rest points of the selection-only dynamics.

    The three vertices always exist; the mixed defector/non-participant
    point exists when alpha and beta share a sign; the mixed
    cooperator/non-participant point exists for beta < 0 with r > 2; an
    interior coexistence point is searched for numerically.
    """
    _require_zero_mu(params)
    alpha, beta, r = params.alpha, params.beta, params.enhancement
    candidates: list[tuple[SimplexState, str]] = [
        (SimplexState(1.0, 0.0, 0.0), KIND_VERTEX_C),
        (SimplexState(0.0, 1.0, 0.0), KIND_VERTEX_D),
        (SimplexState(0.0, 0.0, 1.0), KIND_VERTEX_N),
    ]
    if alpha * beta > 0.0:
        share_d = beta / (alpha + beta)
        candidates.append((SimplexState(0.0, share_d, 1.0 - share_d), KIND_EDGE_DN))
    if beta < 0.0 and r > 2.0:
        denom = 1.0 - r + alpha + beta
        share_c = beta / denom
        if 1e-12 < share_c < 1.0 - 1e-12:
            candidates.append((SimplexState(share_c, 0.0, 1.0 - share_c), KIND_EDGE_CN))
    for point in find_interior_equilibrium(params):
        candidates.append((point, KIND_INTERIOR))

    results = []
    for state, kind in candidates:
        residual = _residual_norm(params, state)
        if residual > 1e-9:
            logger.debug("dropping candidate %s with residual %.3g", kind, residual)
            continue
        _, eigenvalues = jacobian(params, state)
        results.append(
            Equilibrium(
                location=state,
                kind=kind,
                eigenvalues=eigenvalues,
                stability=stability_from_eigenvalues(eigenvalues),
            )
        )
    return results


# ---------------------------------------------------------------------------
# JSON export
# ---------------------------------------------------------------------------

def equilibrium_to_dict(eq: Equilibrium) -> dict:
    return {
        "location": [eq.location.x, eq.location.y, eq.location.z],
        "kind": eq.kind,
        "eigenvalues": [[ev.real, ev.imag] for ev in eq.eigenvalues],
        "stability": eq.stability,
    }


def edge_report_to_dict(report: EdgeReport) -> dict:
    root = report.interior_root
    return {
        "edge": report.edge,
        "label": report.direction_summary,
        "interior_root": None if root is None else {
            "s": root.s,
            "location": [root.location.x, root.location.y, root.location.z],
            "stability": root.stability,
        },
        "endpoints": {name: label for name, label in report.endpoint_stability},
    }
