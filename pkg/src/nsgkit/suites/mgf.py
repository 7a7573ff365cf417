"""Dilation MGF domination: E exp(theta Y) <= exp(c theta^2 sigma^2) I."""
import logging
import math
from typing import List, Optional

from ..base.suite import CheckResult, Suite
from ..dilation import empirical_mgf, mgf_constant, scalar_dominates
from ..distributions import SeedStream, certificate
from ..scenario import MgfOptions
from ..verify import TrialConfig

logger = logging.getLogger(__name__)


class MgfSuite(Suite):
    """Measures the MGF constant per family and checks it against ``max_constant``."""

    name = "mgf"

    def __init__(self, options: Optional[MgfOptions], trial: TrialConfig):
        super().__init__("Matrix MGF domination", options or MgfOptions())
        self.trial = trial

    def _check(self, label: str, spec, stream, count) -> CheckResult:
        opts: MgfOptions = self.options
        c = mgf_constant(spec, opts.theta_grid, stream=stream, count=count)
        sigma = certificate(spec).sigma
        # the measured constant must reproduce domination at every grid theta
        consistent = all(
            scalar_dominates(empirical_mgf(spec, t, stream=stream, count=count),
                             math.exp(c * t * t * sigma * sigma))
            for t in opts.theta_grid
        )
        return CheckResult(
            name=label,
            passed=consistent and c <= opts.max_constant,
            margin=opts.max_constant - c,
            details={"c_hat": c, "sigma": sigma, "theta_grid": list(opts.theta_grid),
                     "consistent": consistent, "samples": count},
        )

    def run_checks(self) -> List[CheckResult]:
        opts: MgfOptions = self.options
        results = []
        for index, model in enumerate(opts.families):
            spec = model.to_spec()
            results.append(self._check(f"mgf/{spec.family.value}/d={spec.d}", spec,
                                       SeedStream(self.trial.seed, index), self.trial.trials))
        for index, model in enumerate(opts.exact):
            spec = model.to_spec()
            results.append(self._check(f"mgf/exact/{index}", spec, None, None))
        for r in results:
            logger.debug("%s: c_hat=%.6f", r.name, r.details["c_hat"])
        return results
