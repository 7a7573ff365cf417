"""Adaptive two-case bound under a data-dependent sigma_i rule."""
import math
from typing import List, Optional

from ..base.suite import CheckResult, Suite
from ..bounds import adaptive_bound, build_doubling_grid
from ..scenario import AdaptiveOptions
from ..verify import ConstantScenario, Target, TrialConfig, violation_rate


class AdaptiveSuite(Suite):
    """Frequency of {sum sigma_i^2 < B and ||S_n|| > bound} must have CP upper bound <= delta."""

    name = "adaptive"

    def __init__(self, options: Optional[AdaptiveOptions], trial: TrialConfig):
        super().__init__("Adaptive doubling-grid bound", options or AdaptiveOptions())
        self.trial = trial

    def _grid_checks(self, d: int) -> List[CheckResult]:
        opts: AdaptiveOptions = self.options
        grid = build_doubling_grid(opts.b, opts.B, d, opts.delta)
        expected = math.floor(math.log2(opts.B / opts.b)) + 1
        decreasing = all(a > b for a, b in zip(grid.theta_list, grid.theta_list[1:]))
        last = grid.psi[-1]
        shape_ok = grid.s == expected and last <= opts.B < 2 * last and decreasing
        # adaptive_bound must be nondecreasing on [0, B)
        levels = [opts.B * k / 64.0 for k in range(64)]
        values = [adaptive_bound(p, grid, opts.c).value or 0.0 for p in levels]
        monotone = all(a <= b for a, b in zip(values, values[1:]))
        return [
            CheckResult("adaptive/grid", shape_ok, 0.0 if shape_ok else -1.0,
                        {"expected_s": expected, **grid.to_dict()}),
            CheckResult("adaptive/monotone", monotone, 0.0 if monotone else -1.0,
                        {"levels": len(levels)}),
        ]

    def run_checks(self) -> List[CheckResult]:
        opts: AdaptiveOptions = self.options
        base = opts.base.to_spec()
        scenario = ConstantScenario(base=base, rule=opts.rule.to_rule(), n_values=(opts.n,),
                                    deltas=(opts.delta,), b=opts.b, B=opts.B)
        rate = violation_rate(Target.ADAPTIVE, scenario, opts.n, base.d, opts.delta, opts.c, self.trial)
        results = self._grid_checks(base.d)
        results.append(CheckResult(
            f"adaptive/violations/n={opts.n}/d={base.d}",
            rate.upper <= opts.delta,
            opts.delta - rate.upper,
            {"c": opts.c, "b": opts.b, "B": opts.B, **rate.to_dict()},
        ))
        return results
