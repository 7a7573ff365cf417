"""Exact trace-exponential peeling: E tr exp(-c theta^2 S I + theta sum Y_i) <= d + 1."""
import logging
from typing import List, Optional

import numpy as np

from ..base.suite import CheckResult, Suite
from ..dilation import mgf_constant, peeling_check, peeling_check_paths
from ..distributions import DistributionSpec, SeedStream, finite_support_rademacher, symmetric_support
from ..martingale import AdaptiveRule, enumerate_paths
from ..scenario import PeelingOptions, RuleModel
from ..verify import TrialConfig

logger = logging.getLogger(__name__)


def random_step_support(rng: np.random.Generator, d: int, max_atoms: int) -> DistributionSpec:
    """A zero-mean symmetric support with at most ``max_atoms`` atoms of norm <= 1."""
    pairs = int(rng.integers(1, max_atoms // 2 + 1))
    vectors = rng.uniform(-1.0, 1.0, (pairs, d)) / np.sqrt(d)
    return symmetric_support(vectors, rng.dirichlet(np.ones(pairs)))


class PeelingSuite(Suite):
    """
    Runs the peeling bound on exactly enumerated martingales.

    Independent steps use random symmetric supports with c set to the largest
    per-step MGF constant at theta.  An adaptive rule over a Rademacher base is
    checked through full path enumeration.
    """

    name = "peeling"

    def __init__(self, options: Optional[PeelingOptions], trial: TrialConfig):
        super().__init__("Trace-exponential peeling", options or PeelingOptions())
        self.trial = trial

    def _independent(self, rng: np.random.Generator, d: int, theta: float) -> List[float]:
        opts: PeelingOptions = self.options
        margins = []
        for _ in range(opts.instances):
            steps = [random_step_support(rng, d, opts.max_atoms) for _ in range(opts.steps)]
            c = max((mgf_constant(s, [theta]) for s in steps), default=0.0)
            value = peeling_check(steps, theta, c, d=d)
            margins.append((d + 1) - value)
        return margins

    def _adaptive(self, d: int, theta: float) -> float:
        opts: PeelingOptions = self.options
        model = opts.rule or RuleModel(kind="DoubleOnThreshold", base=0.5, thresholds=[1.0])
        rule: AdaptiveRule = model.to_rule()
        base = finite_support_rademacher(d, 1.0)
        dist = enumerate_paths(rule, base, opts.steps)
        levels = sorted({float(s) for s in np.unique(dist.sigmas)}) or [1.0]
        c = mgf_constant(base, [theta * s for s in levels])
        value = peeling_check_paths(dist.paths(), theta, c)
        return (d + 1) - value

    def run_checks(self) -> List[CheckResult]:
        opts: PeelingOptions = self.options
        rng = SeedStream(self.trial.seed).generator()
        results = []
        for d in opts.dims:
            for theta in opts.thetas:
                margins = self._independent(rng, d, theta)
                worst = min(margins)
                results.append(CheckResult(
                    f"peeling/independent/d={d}/theta={theta:g}",
                    worst >= -opts.tolerance, worst + opts.tolerance,
                    {"working_dimension": d + 1, "instances": len(margins), "steps": opts.steps},
                ))
                margin = self._adaptive(d, theta)
                results.append(CheckResult(
                    f"peeling/adaptive/d={d}/theta={theta:g}",
                    margin >= -opts.tolerance, margin + opts.tolerance,
                    {"working_dimension": d + 1, "steps": opts.steps},
                ))
        logger.debug("peeling: %d checks", len(results))
        return results
