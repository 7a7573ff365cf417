"""Exact Lieb-inequality checks on random finite-support instances."""
from typing import List, Optional

import numpy as np

from ..base.suite import CheckResult, Suite
from ..dilation import lieb_check, random_lieb_instance
from ..distributions import SeedStream
from ..scenario import LiebOptions
from ..verify import TrialConfig


class LiebSuite(Suite):
    """tr exp(A + log E e^Y) - E tr exp(A + Y) >= -tolerance on every instance."""

    name = "lieb"

    def __init__(self, options: Optional[LiebOptions], trial: TrialConfig):
        super().__init__("Lieb trace inequality", options or LiebOptions())
        self.trial = trial

    def _result(self, name: str, slacks: List[float], **details) -> CheckResult:
        tol = self.options.tolerance
        worst = min(slacks)
        return CheckResult(name, worst >= -tol, worst + tol,
                           {"instances": len(slacks), "min_slack": worst, **details})

    def run_checks(self) -> List[CheckResult]:
        opts: LiebOptions = self.options
        rng = SeedStream(self.trial.seed).generator()
        random_slacks = []
        for _ in range(opts.instances):
            a, atoms = random_lieb_instance(rng, opts.max_dim, opts.max_atoms, opts.scale)
            random_slacks.append(lieb_check(a, atoms))

        a = np.array([[0.3, 0.1], [0.1, -0.2]])
        deterministic = lieb_check(a, [(np.zeros((2, 2)), 1.0)])
        flip = np.diag([1.0, -1.0])
        sign = lieb_check(np.zeros((2, 2)), [(flip, 0.5), (-flip, 0.5)])
        return [
            self._result("lieb/random", random_slacks, max_dim=opts.max_dim, max_atoms=opts.max_atoms),
            self._result("lieb/deterministic", [deterministic]),
            self._result("lieb/sign-flip", [sign]),
        ]
