"""Hoeffding-type bound: quantiles of ||S_n|| against c sqrt(sum sigma_i^2 log(2d/delta))."""
import logging
from typing import List, Optional

from ..base.suite import CheckResult, Suite
from ..martingale import AdaptiveRule
from ..scenario import HoeffdingOptions
from ..verify import ConstantScenario, Target, TrialConfig, estimate_constant

logger = logging.getLogger(__name__)


class HoeffdingSuite(Suite):
    """
    Estimates c_hat per (n, d) cell with unit-scale steps.

    Each cell passes when its (1 - delta) quantile stays under the bound with
    the configured c; the c_hat(max d) / c_hat(min d) ratio per n must stay
    below ``max_dimension_ratio``.
    """

    name = "hoeffding"

    def __init__(self, options: Optional[HoeffdingOptions], trial: TrialConfig):
        super().__init__("Hoeffding-type bound", options or HoeffdingOptions())
        self.trial = trial

    def run_checks(self) -> List[CheckResult]:
        opts: HoeffdingOptions = self.options
        base = opts.base.to_spec()
        scenario = ConstantScenario(
            base=base,
            rule=AdaptiveRule.constant(base.sigma),
            n_values=tuple(opts.n_values),
            d_values=tuple(opts.d_values),
            deltas=(opts.delta,),
        )
        estimate = estimate_constant(Target.HOEFFDING, scenario, self.trial)
        results = [
            CheckResult(
                f"hoeffding/n={cell.n}/d={cell.d}",
                cell.c_hat <= opts.c,
                opts.c - cell.c_hat,
                cell.to_dict(),
            )
            for cell in estimate.cells
        ]
        for key, ratio in estimate.dimension_ratios().items():
            if ratio > opts.max_dimension_ratio:
                logger.warning("hoeffding %s: dimension ratio %.4f exceeds %.4f",
                               key, ratio, opts.max_dimension_ratio)
            results.append(CheckResult(
                f"hoeffding/dimension-ratio/{key}",
                ratio <= opts.max_dimension_ratio,
                opts.max_dimension_ratio - ratio,
                {"ratio": ratio},
            ))
        return results
