"""Exact q-series engine for overpartition rank differences.

Truncated Laurent series with rational coefficients (:mod:`.pseries`),
infinite products (:mod:`.qprod`), bilateral Lambert sums (:mod:`.lambert`),
overpartition ranks (:mod:`.ranks`) and a catalog of checked identities
(:mod:`.registry`).
"""

from .pseries import QSeries, at_least
from .registry import catalog, verify, verify_all

__all__ = ["QSeries", "at_least", "catalog", "verify", "verify_all"]
__version__ = "0.1.0"
