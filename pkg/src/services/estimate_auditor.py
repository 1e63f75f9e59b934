"""
Energy functionals, dissipation terms and the checks run on their history.

All integrals use the midpoint rule on interior cells (velocity terms on the
velocity unknowns). Cell gradients are averages of the two adjacent face
gradients. Divisions by n, c, c^3 and g(c) are floored at
AuditConstants.DIVISION_FLOOR and every floored cell is counted.
"""

from typing import Optional, Sequence

import numpy as np

from config.constants import AuditConstants
from logger import logger
from models.grid import INNER, ScalarField, VectorField, axis_slice
from models.params import ModelParams
from models.reports import CheckVerdict, CumulativeLedger, EnergyReport
from models.state import State
from services.grid_operators import cell_gradient
from utils.exceptions import DiagnosticOverflowError, PreconditionError
from utils.helpers import floored

FLOOR = AuditConstants.DIVISION_FLOOR


def _diagonal_neighbour(c: ScalarField, a: int, b: int, sa: int, sb: int) -> np.ndarray:
    """Interior block of c shifted by sa along axis a and sb along axis b."""
    idx = [INNER] * c.grid.dim
    idx[a] = slice(1 + sa, c.grid.cells[a] + 1 + sa)
    idx[b] = slice(1 + sb, c.grid.cells[b] + 1 + sb)
    return c.data[tuple(idx)]


def hessian_norm_sq(c: ScalarField) -> np.ndarray:
    """|D^2 c|^2 on interior cells from centered second differences (ghosts filled)."""
    grid = c.grid
    dim = grid.dim
    data = c.data
    center = data[grid.interior]
    total = np.zeros(grid.cells)
    for a in range(dim):
        plus = data[axis_slice(dim, a, slice(2, None), INNER)]
        minus = data[axis_slice(dim, a, slice(None, -2), INNER)]
        d_aa = (plus - 2.0 * center + minus) / grid.dx[a] ** 2
        total += d_aa * d_aa
        for b in range(a + 1, dim):
            d_ab = (
                _diagonal_neighbour(c, a, b, 1, 1)
                - _diagonal_neighbour(c, a, b, 1, -1)
                - _diagonal_neighbour(c, a, b, -1, 1)
                + _diagonal_neighbour(c, a, b, -1, -1)
            ) / (4.0 * grid.dx[a] * grid.dx[b])
            total += 2.0 * d_ab * d_ab
    return total


def velocity_gradient_sq(u: VectorField) -> float:
    """
    Sum of squared velocity differences, matching -<u, lap_h u> exactly.

    Differences across a wall between an unknown and its no-slip ghost carry
    half weight; differences along the normal direction reach the wall faces.
    """
    grid = u.grid
    dim = grid.dim
    total = 0.0
    for a in range(dim):
        comp = u.components[a]
        for b in range(dim):
            if b == a:
                rows = tuple(slice(None) if e == a else INNER for e in range(dim))
                diffs = np.diff(comp[rows], axis=a)
                total += float(np.sum(diffs * diffs)) / grid.dx[b] ** 2
                continue
            rows = [INNER] * dim
            rows[b] = slice(None)
            diffs = np.diff(comp[tuple(rows)], axis=b)
            weights = np.ones(diffs.shape[b])
            weights[0] = weights[-1] = 0.5
            shape = [1] * dim
            shape[b] = -1
            total += float(np.sum(weights.reshape(shape) * diffs * diffs)) / grid.dx[b] ** 2
    return total * grid.cell_volume


def energy_report(
    state: State, params: ModelParams, r: float = AuditConstants.DEFAULT_R
) -> EnergyReport:
    """
    Evaluate every functional and dissipation term at the state's time.

    Ghost layers must be filled.

    Raises:
        DiagnosticOverflowError: If any entry is not finite
    """
    grid = state.grid
    vol = grid.cell_volume
    p = params.p
    n = state.n.interior
    c = state.c.interior

    grad_n = cell_gradient(state.n)
    grad_c = cell_gradient(state.c)
    grad_n_sq = sum(g * g for g in grad_n)
    grad_c_sq = sum(g * g for g in grad_c)

    n_div, floored_n = floored(n, FLOOR)
    c_div, floored_c = floored(c, FLOOR)
    c3_div, floored_c3 = floored(c**3, FLOOR)
    g_div, floored_g = floored(params.sensitivity.g(c), FLOOR)

    abs_n = np.abs(n)
    nlogn = np.zeros_like(n)
    nonzero = abs_n > 0.0
    nlogn[nonzero] = n[nonzero] * np.log(abs_n[nonzero])

    grad_n_p = grad_n_sq ** (0.5 * p)
    cell_u = state.u.to_cells()
    speed = np.sqrt(sum(v * v for v in cell_u))

    entries = {
        "mass_n": float(n.sum() * vol),
        "min_n": float(n.min()),
        "max_n": float(n.max()),
        "max_c": float(c.max()),
        "e_nlogn": float(nlogn.sum() * vol),
        "e_psi": float(0.5 * np.sum(grad_c_sq / g_div) * vol),
        "e_kin": state.u.norm_squared(),
        "d_plap": float(
            np.sum((grad_n_sq + params.epsilon) ** (0.5 * (p - 2.0)) * grad_n_sq / n_div) * vol
        ),
        "d_plap_power": float(((p - 1.0) / p) ** p * np.sum(grad_n_p / n_div) * vol),
        "d_hess": float(np.sum(hessian_norm_sq(state.c) / c_div) * vol),
        "d_quart": float(np.sum(grad_c_sq * grad_c_sq / c3_div) * vol),
        "d_gradu": velocity_gradient_sq(state.u),
        "norm_u_103": float(np.sum(speed ** (10.0 / 3.0)) * vol),
        "norm_n_r": float(np.sum(abs_n**r) * vol),
        "grad_c_quartic": float(np.sum(grad_c_sq * grad_c_sq) * vol),
    }
    for term, value in entries.items():
        if not np.isfinite(value):
            raise DiagnosticOverflowError(term)

    floored_cells = floored_n + floored_c + floored_c3 + floored_g
    negative = int(np.count_nonzero(n < 0.0))
    if negative:
        logger.warning(f"{negative} cells with negative n at t={state.t:.6g} (min {entries['min_n']:.3e})")
    return EnergyReport(
        t=state.t, floored_cells=floored_cells, negative_n_cells=negative, **entries
    )


def plap_direct(n: ScalarField, p: float) -> float:
    """int |grad n|^p / n evaluated without the power substitution."""
    grad_sq = sum(g * g for g in cell_gradient(n))
    values, _ = floored(n.interior, FLOOR)
    return float(np.sum(grad_sq ** (0.5 * p) / values) * n.grid.cell_volume)


def plap_inequality_holds(
    report: EnergyReport, p: float, tol: float = AuditConstants.PLAP_INEQUALITY_TOL
) -> bool:
    """d_plap >= (p/(p-1))^p d_plap_power (1 - tol), valid for p >= 2 and eps >= 0."""
    return report.d_plap >= (p / (p - 1.0)) ** p * report.d_plap_power * (1.0 - tol)


def check_lemma31_decay(
    history: Sequence[EnergyReport], slack: float = AuditConstants.DECAY_SLACK
) -> CheckVerdict:
    """
    e_nlogn + e_psi must be nonincreasing across consecutive reports of a run
    without flow.

    Raises:
        PreconditionError: If fewer than 2 reports are given or the velocity is not zero
    """
    if len(history) < 2:
        raise PreconditionError("decay check needs at least 2 reports")
    if any(rep.e_kin != 0.0 for rep in history):
        raise PreconditionError("decay check requires a run with the flow disabled (u = 0)")
    values = [rep.decay_functional for rep in history]
    for k in range(1, len(values)):
        if values[k] > values[k - 1] + slack * (1.0 + abs(values[k - 1])):
            return CheckVerdict(
                name="energy_decay",
                passed=False,
                detail=f"increase {values[k] - values[k - 1]:.3e} at report {k} (t={history[k].t:.6g})",
                first_violation=k,
                measured=values[k] - values[k - 1],
            )
    return CheckVerdict(
        name="energy_decay",
        passed=True,
        detail=f"nonincreasing over {len(values)} reports",
        measured=values[-1] - values[0],
    )


def check_linear_growth(
    ledger: CumulativeLedger,
    window: float = AuditConstants.GROWTH_WINDOW,
    factor: float = AuditConstants.GROWTH_FACTOR,
    quantities: Optional[Sequence[str]] = None,
) -> dict[str, CheckVerdict]:
    """
    No super-linear growth of the cumulative integrals.

    For each quantity, sup r_Q over the trailing `window` fraction of the time
    range must not exceed factor times the median of r_Q over that window.
    The empirical constant C_hat = sup r_Q is reported as `measured`.

    Raises:
        PreconditionError: If the ledger holds fewer than 2 records
    """
    if len(ledger.times) < 2:
        raise PreconditionError("growth check needs at least 2 ledger records")
    times = np.asarray(ledger.times)
    t_start, t_end = times[0], times[-1]
    in_window = times >= t_end - window * (t_end - t_start)
    verdicts = {}
    for q in quantities or ledger.quantities:
        ratios = ledger.ratios(q)
        trailing = ratios[in_window]
        sup = float(trailing.max())
        median = float(np.median(trailing))
        c_hat = float(ratios.max())
        passed = sup == 0.0 or sup <= factor * median
        verdicts[q] = CheckVerdict(
            name=f"linear_growth[{q}]",
            passed=bool(passed),
            detail=f"window sup {sup:.6g} vs median {median:.6g}",
            measured=c_hat,
        )
    return verdicts


def check_mass_and_max(
    history: Sequence[EnergyReport],
    s0: Optional[float] = None,
    mass_rtol: float = AuditConstants.MASS_RTOL,
    max_rtol: float = AuditConstants.MAX_C_RTOL,
    min_n_tol: float = AuditConstants.MIN_N_MONITOR,
) -> CheckVerdict:
    """
    Mass conservation of n, the maximum principle for c and the monitored
    nonnegativity of n, over every report.

    Raises:
        PreconditionError: If fewer than 2 reports are given
    """
    if len(history) < 2:
        raise PreconditionError("mass/max check needs at least 2 reports")
    s0 = history[0].max_c if s0 is None else s0
    mass0 = history[0].mass_n
    for k, rep in enumerate(history):
        failures = []
        if abs(rep.mass_n - mass0) > mass_rtol * abs(mass0):
            failures.append(f"mass drift {abs(rep.mass_n - mass0) / max(abs(mass0), FLOOR):.3e}")
        if rep.max_c > s0 * (1.0 + max_rtol):
            failures.append(f"max c {rep.max_c!r} above s0 {s0!r}")
        if rep.min_n < -min_n_tol * max(rep.max_n, 0.0):
            failures.append(f"min n {rep.min_n:.3e}")
        if failures:
            return CheckVerdict(
                name="mass_and_max",
                passed=False,
                detail=f"report {k} (t={rep.t:.6g}): " + "; ".join(failures),
                first_violation=k,
            )
    drift = max(abs(rep.mass_n - mass0) for rep in history) / max(abs(mass0), FLOOR)
    return CheckVerdict(
        name="mass_and_max",
        passed=True,
        detail=f"relative mass drift {drift:.3e}",
        measured=drift,
    )
