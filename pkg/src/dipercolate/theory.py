"""Analytic predictions for percolation on directed random graphs.

Let U(x, y) = sum p[j,k] x^j y^k be the generating function of the degree
distribution, with normalized boundary derivatives

    U_minus(x) = mu^-1 sum_{j,k} k p[j,k] x^j,
    U_plus(y)  = mu^-1 sum_{j,k} j p[j,k] y^k.

Bond percolation with probability pi thins each degree binomially, which at
the generating-function level substitutes x -> 1 - pi + pi x.  The giant
strongly connected component emerges above pi_c = mu / mu_11, and its
fraction is

    c_bond(pi) = 1 - U_pi(x*, 1) - U_pi(1, y*) + U_pi(x*, y*),
    c_site(pi) = pi * c_bond(pi),

where U_pi(x, y) = U(1-pi+pi*x, 1-pi+pi*y) and x*, y* are the smallest fixed
points of x -> U_minus(1-pi+pi*x) and y -> U_plus(1-pi+pi*y).  Both maps are
nondecreasing and fix 1, so plain iteration from 0 converges monotonically to
the smallest fixed point; when the slope at 1 (= pi * mu_11 / mu) is at most
1 the smallest fixed point is 1 itself and the fraction is 0 (the closed
subcritical convention, applied at pi = pi_c as well).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import stats

from .degrees import DegreeDistribution
from .errors import PiOutOfRangeError, ZeroMeanDegreeError, ZeroMu11Error

__all__ = [
    "TheoryPrediction",
    "CriticalThreshold",
    "FixedPointResult",
    "pgf_eval",
    "u_minus",
    "u_plus",
    "bond_distribution",
    "site_distribution",
    "critical_threshold",
    "solve_fixed_point",
    "gscc_fraction",
]

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITERS = 10**6


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def _check_pi(pi: float) -> float:
    pi = float(pi)
    if not 0.0 < pi <= 1.0:
        raise PiOutOfRangeError(f"pi must lie in (0, 1], got {pi!r}")
    return pi


def _require_mu(dist: DegreeDistribution) -> float:
    mu = dist.mu
    if mu <= 0.0:
        raise ZeroMeanDegreeError("mean degree is zero")
    return mu


def pgf_eval(dist: DegreeDistribution, x: float, y: float) -> float:
    """Evaluate U(x, y) = sum p[j,k] x^j y^k for x, y in [0, 1]."""
    x = _check_unit_interval("x", x)
    y = _check_unit_interval("y", y)
    return float(np.sum(dist.ps * x**dist.js * y**dist.ks))


def u_minus(dist: DegreeDistribution, x: float) -> float:
    """U_minus(x) = mu^-1 sum k p[j,k] x^j (termwise d/dy of U at y = 1)."""
    x = _check_unit_interval("x", x)
    mu = _require_mu(dist)
    return float(np.sum(dist.ks * dist.ps * x**dist.js)) / mu


def u_plus(dist: DegreeDistribution, y: float) -> float:
    """U_plus(y) = mu^-1 sum j p[j,k] y^k (termwise d/dx of U at x = 1)."""
    y = _check_unit_interval("y", y)
    mu = _require_mu(dist)
    return float(np.sum(dist.js * dist.ps * y**dist.ks)) / mu


def bond_distribution(dist: DegreeDistribution, pi: float) -> DegreeDistribution:
    """Degree distribution after bond percolation (independent binomial thinning).

    p_bond[j,k] = sum_{d- >= j} sum_{d+ >= k} p[d-, d+] C(d-, j) C(d+, k)
                  pi^(j+k) (1-pi)^(d- - j + d+ - k)

    evaluated exactly over the stored support.  The output satisfies
    mu -> pi * mu and mu_11 -> pi^2 * mu_11.
    """
    pi = _check_pi(pi)
    if pi == 1.0:
        return dist
    table = np.zeros((dist.max_in + 1, dist.max_out + 1))
    rows: dict[int, np.ndarray] = {}

    def thin_row(d: int) -> np.ndarray:
        row = rows.get(d)
        if row is None:
            row = stats.binom.pmf(np.arange(d + 1), d, pi)
            rows[d] = row
        return row

    for j, k, p in zip(dist.js.tolist(), dist.ks.tolist(), dist.ps.tolist()):
        table[: j + 1, : k + 1] += p * np.outer(thin_row(j), thin_row(k))
    probs = {
        (j, k): table[j, k]
        for j in range(table.shape[0])
        for k in range(table.shape[1])
        if table[j, k] > 0.0
    }
    return DegreeDistribution(probs)


def site_distribution(dist: DegreeDistribution, pi: float) -> DegreeDistribution:
    """Degree distribution after site percolation.

    Equals pi times the bond table except at (0, 0), which absorbs the
    deleted vertices: p_site[0,0] = pi * p_bond[0,0] + 1 - pi.  The output
    satisfies mu -> pi^2 * mu and mu_11 -> pi^3 * mu_11.
    """
    pi = _check_pi(pi)
    bond = bond_distribution(dist, pi)
    if pi == 1.0:
        return bond
    probs = {jk: pi * p for jk, p in bond.support.items() if jk != (0, 0)}
    probs[(0, 0)] = pi * bond.support.get((0, 0), 0.0) + (1.0 - pi)
    return DegreeDistribution(probs)


class CriticalThreshold(NamedTuple):
    pi_c: float
    supercritical_possible: bool


def critical_threshold(dist: DegreeDistribution) -> CriticalThreshold:
    """pi_c = mu / mu_11, with a flag for whether any pi < 1 is supercritical.

    Raises
    ------
    ZeroMu11Error
        If mu_11 = 0: the threshold is undefined and no GSCC exists at any pi.
    """
    mu11 = dist.mu11
    if mu11 <= 0.0:
        raise ZeroMu11Error("mu_11 is zero; no GSCC at any pi")
    mu = _require_mu(dist)
    return CriticalThreshold(mu / mu11, mu11 > mu)


class FixedPointResult(NamedTuple):
    x: float
    iters: int
    residual: float


def solve_fixed_point(
    map_fn: Callable[[float], float],
    tol: float = FIXED_POINT_TOL,
    max_iters: int = FIXED_POINT_MAX_ITERS,
) -> FixedPointResult:
    """Smallest fixed point of a nondecreasing continuous map on [0, 1].

    Iterates x_{t+1} = map_fn(x_t) from x_0 = 0 until successive iterates
    differ by less than ``tol``.  Monotone maps make the iteration increase
    toward the smallest fixed point, so no acceleration is used.  If the
    iteration budget runs out the best iterate is returned with its residual
    rather than raising.
    """
    x = 0.0
    residual = 0.0
    for iters in range(1, max_iters + 1):
        nxt = map_fn(x)
        residual = abs(nxt - x)
        x = nxt
        if residual < tol:
            return FixedPointResult(x, iters, residual)
    return FixedPointResult(x, max_iters, residual)


@dataclass(frozen=True)
class TheoryPrediction:
    """Threshold, fixed points, and GSCC fractions for one (dist, pi, mode).

    ``solver_iters`` and ``solver_residual`` aggregate all fixed-point solves
    performed (total iterations, worst residual); large iteration counts
    signal critical slowing-down near pi_c.
    """

    pi: float
    pi_c: float
    x_star: float
    y_star: float
    c_bond: float
    c_site: float
    zeta: float
    solver_iters: int
    solver_residual: float

    def to_dict(self) -> dict:
        return {
            "pi": self.pi,
            "pi_c": self.pi_c,
            "x_star": self.x_star,
            "y_star": self.y_star,
            "c_bond": self.c_bond,
            "c_site": self.c_site,
            "zeta": self.zeta,
            "solver_iters": self.solver_iters,
            "solver_residual": self.solver_residual,
        }


def _gscc_terms(dist, pi, tol, max_iters):
    """Fixed points and component fraction for percolation probability ``pi``.

    Returns (x_star, y_star, c, iters, residual); c = 0 with fixed points 1
    whenever the slope of the percolated maps at 1, pi * mu_11 / mu, is <= 1.
    """
    slope = pi * dist.mu11 / dist.mu
    if slope <= 1.0:
        return 1.0, 1.0, 0.0, 0, 0.0
    rx = solve_fixed_point(lambda x: u_minus(dist, 1.0 - pi + pi * x), tol, max_iters)
    ry = solve_fixed_point(lambda y: u_plus(dist, 1.0 - pi + pi * y), tol, max_iters)

    def upi(x, y):
        return pgf_eval(dist, 1.0 - pi + pi * x, 1.0 - pi + pi * y)

    c = 1.0 - upi(rx.x, 1.0) - upi(1.0, ry.x) + upi(rx.x, ry.x)
    c = min(1.0, max(0.0, c))
    return rx.x, ry.x, c, rx.iters + ry.iters, max(rx.residual, ry.residual)


def gscc_fraction(
    dist: DegreeDistribution,
    pi: float | None = None,
    mode: str = "bond",
    tol: float = FIXED_POINT_TOL,
    max_iters: int = FIXED_POINT_MAX_ITERS,
) -> TheoryPrediction:
    """Predict the giant strongly connected component fraction.

    ``mode "bond"``/``"site"`` percolate with probability ``pi`` (both
    fractions are reported; they share fixed points, so c_site = pi * c_bond
    holds exactly).  ``mode "none"`` evaluates the unpercolated graph, i.e.
    pi is ignored and treated as 1; the headline value equals ``zeta``.

    Raises
    ------
    ZeroMeanDegreeError, ZeroMu11Error, PiOutOfRangeError
    """
    if mode not in ("bond", "site", "none"):
        raise ValueError(f"mode must be 'bond', 'site' or 'none', got {mode!r}")
    mu = _require_mu(dist)
    mu11 = dist.mu11
    if mu11 <= 0.0:
        raise ZeroMu11Error("mu_11 is zero; no GSCC at any pi")
    if mode == "none":
        pi_eff = 1.0
    elif pi is None:
        raise PiOutOfRangeError("pi is required for bond/site mode")
    else:
        pi_eff = _check_pi(pi)

    x_star, y_star, c_bond, iters, residual = _gscc_terms(dist, pi_eff, tol, max_iters)
    c_site = pi_eff * c_bond

    if pi_eff == 1.0:
        zeta = c_bond
    else:
        _, _, zeta, ziters, zresidual = _gscc_terms(dist, 1.0, tol, max_iters)
        iters += ziters
        residual = max(residual, zresidual)

    return TheoryPrediction(
        pi=pi_eff,
        pi_c=mu / mu11,
        x_star=x_star,
        y_star=y_star,
        c_bond=c_bond,
        c_site=c_site,
        zeta=zeta,
        solver_iters=iters,
        solver_residual=residual,
    )
