"""1/2-cover construction and the norm-recovery sandwich."""
import logging
from typing import List, Optional

import numpy as np

from ..base.suite import CheckResult, Suite
from ..cover import build_half_cover, covering_radius, norms_via_cover
from ..distributions import SeedStream
from ..distributions.bounded import unit_directions
from ..scenario import CoverOptions
from ..verify import TrialConfig

logger = logging.getLogger(__name__)

_SANDWICH_TOL = 1e-12
# construction is certified on a denser sweep than the radius check samples
_CERTIFY_FACTOR = 10


class CoverSuite(Suite):
    """Size, separation, covering radius and ||x|| <= norm_via_cover(x) <= 2||x||."""

    name = "cover"

    def __init__(self, options: Optional[CoverOptions], trial: TrialConfig):
        super().__init__("Sphere covers", options or CoverOptions())
        self.trial = trial

    def run_checks(self) -> List[CheckResult]:
        opts: CoverOptions = self.options
        results = []
        for d in opts.dims:
            cover = build_half_cover(d, SeedStream(self.trial.seed, d),
                                     max_rejections=opts.max_rejections,
                                     certify_directions=_CERTIFY_FACTOR * opts.test_directions)
            # fresh test streams, independent of the construction
            rng = SeedStream(self.trial.seed, 1000 + d).generator()
            radius = covering_radius(cover, unit_directions(rng, opts.test_directions, d))
            xs = rng.normal(0.0, 1.0, (opts.norm_tests, d)) * rng.uniform(0.0, 10.0, (opts.norm_tests, 1))
            norms = np.linalg.norm(xs, axis=1)
            recovered = norms_via_cover(xs, cover)
            low = float(np.min(recovered - norms * (1.0 - _SANDWICH_TOL)))
            high = float(np.min(2.0 * norms * (1.0 + _SANDWICH_TOL) - recovered))
            size_bound = 5.0**d
            logger.info("cover d=%d: size %d, radius %.4f", d, cover.size, radius)
            results.extend([
                CheckResult(f"cover/size/d={d}", cover.size <= size_bound, size_bound - cover.size,
                            {"size": cover.size, "bound": size_bound}),
                CheckResult(f"cover/separation/d={d}", cover.min_separation() >= 0.5 - _SANDWICH_TOL,
                            min(cover.min_separation(), 2.0) - 0.5, {"size": cover.size}),
                CheckResult(f"cover/radius/d={d}", radius <= 0.5, 0.5 - radius,
                            {"radius": radius, "directions": opts.test_directions}),
                CheckResult(f"cover/sandwich/d={d}", low >= 0 and high >= 0, min(low, high),
                            {"tests": opts.norm_tests}),
            ])
        return results
