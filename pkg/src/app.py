"""Fuzz orchestration for the orthoforms property suites."""

import logging

from rich.progress import Progress

from src.config import GenConfig
from src.errors import UnknownSuite
from src.genfuzz import SUITES, SuiteReport, run_suite


class FuzzApp:
    """Runs one or all property suites and collects their reports.

    Attributes:
        cfg: The master generator configuration shared by every suite.
        suites: The suite names to run, in order.
    """

    def __init__(self, cfg: GenConfig, suite: str = "all"):
        """Initializes the FuzzApp.

        Args:
            cfg: The master generator configuration.
            suite: A suite name, or "all" for every registered suite.

        Raises:
            UnknownSuite: If the suite name is not registered.
        """
        if suite != "all" and suite not in SUITES:
            raise UnknownSuite(f"Unknown suite {suite!r}; known suites: {', '.join(SUITES)}")
        self.cfg = cfg
        self.suites = list(SUITES) if suite == "all" else [suite]

    def run(self, progress: Progress) -> list[SuiteReport]:
        """Runs the selected suites, one progress task per suite.

        Args:
            progress: A rich Progress object to update the UI with trial counts.

        Returns:
            The reports in suite order.
        """
        reports = []
        for name in self.suites:
            logging.info(f"Running suite {name} with seed {self.cfg.seed}")
            task = progress.add_task(name, total=self.cfg.trials or 1)
            report = run_suite(name, self.cfg, on_trial=lambda _: progress.update(task, advance=1))
            progress.update(task, completed=self.cfg.trials or 1)
            if not report.passed:
                logging.warning(f"Suite {name} failed")
            reports.append(report)
        return reports

    @staticmethod
    def summary(reports: list[SuiteReport]) -> dict:
        """The document emitted for a multi-suite run."""
        return {
            "status": "pass" if all(r.passed for r in reports) else "fail",
            "reports": [r.to_doc() for r in reports],
        }
