from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from importlib.metadata import PackageNotFoundError, version

logger = logging.getLogger(__name__)


class Check(ABC):
    """The base class for verification checks

    Configuration is passed to the constructor and recorded in :attr:`info`;
    all data the check needs is built inside :meth:`_compute`.
    """

    @abstractmethod
    def _compute(self) -> dict:
        """The compute methods of Check objects return a dictionary of measured figures.

        The dictionary must hold a boolean ``passed``; a failing check adds a
        ``counterexample`` entry where it has one.

        Raises:
            NotImplementedError

        Returns:
            dict: Dictionary of result names and values
        """
        raise NotImplementedError

    def compute(self) -> Results:
        """Run the check and wrap its output with the check configuration.

        Returns:
            Results: Object containing check results and associated metadata
        """
        res_dict = self._compute()
        if "passed" not in res_dict:
            raise KeyError(f"{self.__class__.__name__} returned no 'passed' entry")
        results = Results(results=res_dict, check_info=self.info)
        level = logging.INFO if results.passed else logging.WARNING
        logger.log(level, f"{self.__class__.__name__}: {'passed' if results.passed else 'FAILED'}")
        return results

    @property
    def info(self):
        """Dictionary with Check name and any parameters"""
        return {"name": self.__class__.__name__, **self.__dict__}


class Results:
    """The Results object collects the output of a check and its configuration

    Args:
        results (dict): Dictionary with check output, including ``passed``
        check_info (dict): Dictionary with check name and parameters
    """

    def __init__(self, results: dict, check_info: dict):
        self.results = results
        self.check_info = check_info

    @property
    def passed(self) -> bool:
        return bool(self.results["passed"])

    @property
    def version(self) -> str:
        """Return current derham-lab version"""
        try:
            return version("derham-lab")
        except PackageNotFoundError:
            return "uninstalled"

    def to_dict(self):
        """Returns the results with their version and check metadata as a dictionary

        Returns:
            dict: Dictionary of Results attributes
        """
        return {
            "version": self.version,
            "check": self.check_info,
            "results": self.results,
            "passed": self.passed,
        }
