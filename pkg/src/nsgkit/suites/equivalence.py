"""Equivalence of the tail, moment and super-exponential forms of sigma."""
from typing import List, Optional

from ..base.suite import CheckResult, Suite
from ..distributions import DistributionSpec
from ..scenario import EquivalenceOptions
from ..verify import TrialConfig, equivalence_report


class EquivalenceSuite(Suite):
    """Pairwise sigma ratios must lie inside the calibrated window."""

    name = "equivalence"

    def __init__(self, options: Optional[EquivalenceOptions], trial: TrialConfig):
        super().__init__("Equivalent nSG characterizations", options or EquivalenceOptions())
        self.trial = trial

    def run_checks(self) -> List[CheckResult]:
        opts: EquivalenceOptions = self.options
        results = []
        index = 0
        for family in opts.families:
            for d in opts.d_values:
                spec = DistributionSpec(family, d, opts.sigma)
                report = equivalence_report(spec, self.trial, window=tuple(opts.window),
                                            stream_index=index)
                index += 1
                results.append(CheckResult(
                    f"equivalence/{spec.family.value}/d={d}",
                    report.within_window,
                    report.margin(),
                    report.to_dict(),
                ))
        return results
