"""Suite class representing one named verification suite."""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class CheckResult:
    """Outcome of a single contract check.

    ``margin`` is signed slack: nonnegative when the contract holds.
    """
    name: str
    passed: bool
    margin: float
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "details": dict(self.details),
        }


class Suite(ABC):
    """
    Base class for a verification suite.

    Each suite (tail, mgf, lieb, peeling, ...) runs a group of related
    contract checks against the library and reports one CheckResult per check.
    """

    name: str = ""

    def __init__(self, title: str, options: Optional[Any] = None):
        """
        Initialize the suite.

        Args:
            title: Human-readable heading for reports
            options: Suite-specific options model, or None for defaults
        """
        self.title = title
        self.options = options
        self.results: Optional[List[CheckResult]] = None

    @abstractmethod
    def run_checks(self) -> List[CheckResult]:
        """
        Run every check in the suite.

        Returns:
            List of CheckResult, one per contract checked
        """

    def run(self) -> List[CheckResult]:
        if self.results is None:
            self.results = self.run_checks()
        return self.results

    def passed(self) -> bool:
        return all(r.passed for r in self.run())

    def min_margin(self) -> float:
        results = self.run()
        return min((r.margin for r in results), default=0.0)

    def render(self) -> Dict[str, Any]:
        """Summarize the suite as a JSON-ready dict."""
        results = self.run()
        return {
            "suite": self.name,
            "title": self.title,
            "passed": self.passed(),
            "min_margin": self.min_margin(),
            "checks": [r.to_dict() for r in results],
        }
