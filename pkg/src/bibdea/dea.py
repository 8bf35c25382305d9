"""Input-oriented, constant-returns DEA with cost-efficiency decomposition.

Each DMU is scored against the frontier spanned by nonnegative combinations
of all DMUs in its SDS. Technical efficiency is the largest equi-proportional
input contraction that keeps the DMU's output attainable; cost efficiency is
the ratio of the cheapest feasible input plan to the DMU's actual cost; and
allocative efficiency is their quotient.
"""

from .model import (
    CLAMP_TOL,
    DEFAULT_COSTS,
    CostVector,
    EfficiencyScores,
    SdsDataset,
    staff_cost,
    validate_dataset,
)
from .simplex import OPTIMAL, LinearProgram, LpSolution, SolverError, solve_lp

# Intensity weights below this are reported as zero.
_WEIGHT_TOL = 1e-9


def _inputs(ds: SdsDataset) -> list[tuple[float, float, float]]:
    return [(d.fp_years, d.ap_years, d.rf_years) for d, _ in ds.members]


def _clamp_unit(value: float, what: str) -> float:
    if not -CLAMP_TOL <= value <= 1 + CLAMP_TOL:
        raise SolverError(f"{what} = {value} strays outside [0, 1]")
    return min(1.0, max(0.0, value))


def _solved(lp: LinearProgram, what: str) -> LpSolution:
    solution = solve_lp(lp)
    if solution.status != OPTIMAL:
        raise SolverError(f"{what}: envelopment program ended {solution.status}")
    return solution


def technical_efficiency(dmu0: int, ds: SdsDataset) -> tuple[float, dict[str, float]]:
    """Radial input-contraction score of ``ds.members[dmu0]`` and its peers.

    Variables are [theta, lambda_1..lambda_n]: minimize theta subject to the
    combined peers producing at least the DMU's output from at most theta
    times its inputs.
    """
    x = _inputs(ds)
    ss = ds.ss_values()
    n = len(ds)
    objective = [1.0] + [0.0] * n
    constraints = [tuple([0.0] + ss)]
    senses = [">="]
    rhs = [ss[dmu0]]
    for k in range(3):
        constraints.append(tuple([-x[dmu0][k]] + [x[j][k] for j in range(n)]))
        senses.append("<=")
        rhs.append(0.0)
    lp = LinearProgram(tuple(objective), tuple(constraints), tuple(senses), tuple(rhs))
    solution = _solved(lp, f"TE of {ds.members[dmu0][0].dmu_id}")
    te = _clamp_unit(solution.objective, "technical efficiency")
    weights = {
        ds.members[j][0].dmu_id: solution.x[1 + j]
        for j in range(n)
        if solution.x[1 + j] > _WEIGHT_TOL
    }
    return te, weights


def cost_efficiency(dmu0: int, ds: SdsDataset, costs: CostVector = DEFAULT_COSTS) -> float:
    """Minimum-cost-to-actual-cost ratio of ``ds.members[dmu0]``.

    Variables are [x_fp, x_ap, x_rf, lambda_1..lambda_n]: minimize the cost
    of a free input bundle that lets the peers cover the DMU's output.
    """
    x = _inputs(ds)
    ss = ds.ss_values()
    n = len(ds)
    price = (costs.fp_cost, costs.ap_cost, costs.rf_cost)
    objective = list(price) + [0.0] * n
    constraints = [tuple([0.0] * 3 + ss)]
    senses = [">="]
    rhs = [ss[dmu0]]
    for k in range(3):
        indicator = [0.0] * 3
        indicator[k] = -1.0
        constraints.append(tuple(indicator + [x[j][k] for j in range(n)]))
        senses.append("<=")
        rhs.append(0.0)
    lp = LinearProgram(tuple(objective), tuple(constraints), tuple(senses), tuple(rhs))
    solution = _solved(lp, f"CE of {ds.members[dmu0][0].dmu_id}")
    actual = staff_cost(ds.members[dmu0][0], costs)
    return _clamp_unit(solution.objective / actual, "cost efficiency")


def allocative_efficiency(te: float, ce: float) -> float:
    """CE / TE, with the nil-output convention that te = 0 maps to 0."""
    if ce > te + CLAMP_TOL:
        raise SolverError(f"cost efficiency {ce} exceeds technical efficiency {te}")
    if te == 0:
        return 0.0
    return min(1.0, ce / te)


def evaluate_sds(
    ds: SdsDataset, costs: CostVector = DEFAULT_COSTS
) -> dict[str, EfficiencyScores]:
    """Score every DMU of one SDS.

    DMUs with zero output score (0, 0, 0) by convention, without touching
    the solver; they stay in everyone else's reference set, where a
    zero-output column can never help and is therefore harmless.
    """
    validate_dataset(ds)
    scores: dict[str, EfficiencyScores] = {}
    for i, (dmu, ss) in enumerate(ds.members):
        if ss == 0:
            scores[dmu.dmu_id] = EfficiencyScores(te=0.0, ae=0.0, ce=0.0)
            continue
        try:
            te, weights = technical_efficiency(i, ds)
            ce = cost_efficiency(i, ds, costs)
            ae = allocative_efficiency(te, ce)
        except SolverError as exc:
            raise SolverError(f"{ds.sds_id}/{dmu.dmu_id}: {exc}") from exc
        # Store ce re-derived from the pair so the decomposition identity is
        # exact rather than within solver noise.
        scores[dmu.dmu_id] = EfficiencyScores(
            te=te, ae=ae, ce=te * ae, reference_weights=weights
        )
    return scores
