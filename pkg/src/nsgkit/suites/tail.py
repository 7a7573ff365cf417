"""Certificate soundness: empirical norm tails against the analytic nSG claim."""
import logging
from typing import List, Optional

from ..base.suite import CheckResult, Suite
from ..distributions import NsgCertificate, Provenance, certificate
from ..scenario import TailOptions
from ..verify import TrialConfig, certificate_tail_check, default_t_grid

logger = logging.getLogger(__name__)


class TailSuite(Suite):
    """
    Checks Pr(||X|| >= t) <= 2 exp(-t^2 / (2 (m sigma)^2)) on a threshold grid.

    The tail frequency's Clopper-Pearson upper bound must stay below the
    certified bound at every threshold.  ``certificate_scale`` rescales the
    certified sigma, which is how a deliberately wrong certificate is tested.
    """

    name = "tail"

    def __init__(self, options: Optional[TailOptions], trial: TrialConfig):
        super().__init__("Certificate tails", options or TailOptions())
        self.trial = trial

    def run_checks(self) -> List[CheckResult]:
        opts: TailOptions = self.options
        results = []
        for index, model in enumerate(opts.families):
            spec = model.to_spec()
            cert = certificate(spec)
            if opts.certificate_scale != 1.0:
                cert = NsgCertificate(cert.sigma * opts.certificate_scale,
                                      cert.constant_multiplier, Provenance.ASSERTED)
            grid = default_t_grid(spec, opts.t_points)
            checks = certificate_tail_check(spec, grid, self.trial, cert, stream_index=index)
            worst = min(checks, key=lambda c: c.margin)
            label = f"tail/{spec.family.value}/d={spec.d}"
            if not worst.passed:
                logger.warning("%s: tail bound violated at t=%.4g (upper %.3g > certified %.3g)",
                               label, worst.estimate.threshold, worst.estimate.upper, worst.certified)
            results.append(CheckResult(
                name=label,
                passed=all(c.passed for c in checks),
                margin=worst.margin,
                details={
                    "sigma": cert.sigma,
                    "multiplier": cert.constant_multiplier,
                    "provenance": cert.provenance.value,
                    "worst_threshold": worst.estimate.threshold,
                    "tails": [c.to_dict() for c in checks],
                },
            ))
        return results
