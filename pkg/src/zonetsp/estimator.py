"""scikit-learn style wrapper around the zone sweep.

>>> import numpy as np
>>> X = np.array([[0, 0], [0, 10], [10, 10], [10, 0], [5, -3]])
>>> est = ZoneSweepTSP(zone_size=3).fit(X)
>>> est.length_
42
>>> est.fit_predict(X).tolist()
[0, 1, 2, 3, 4]
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .sweep import run_sweep
from .tsplib import METRICS, Instance, tour_length
from .zoning import auto_zone, load_zone_plan, rotate_instance

__all__ = ["ZoneSweepTSP", "check_coords"]


def check_coords(X) -> np.ndarray:
    """Validate a point set: finite floats, shape ``(n_samples, 2)``, at least one row."""
    X = check_array(X, dtype=np.float64, ensure_min_samples=1)
    if X.shape[1] != 2:
        raise ValueError(f"expected 2 coordinate columns, got {X.shape[1]}")
    return X


class ZoneSweepTSP(BaseEstimator):
    """Solve the TSP on a 2-D point set by lengthwise zone sweeping.

    Parameters
    ----------
    zone_size : int
        Target vertices per automatic zone (ignored when ``zones`` is given).
    zones : str or None
        Zone-config text; vertex ids are 1-based row numbers of ``X``.
    max_n : int or None
        Cap on boundary crossing counts for automatic zones.
    keep_ties : bool
        Retain every co-minimal candidate per boundary choice.
    metric : {"EUC_2D", "ATT"}
        TSPLIB rounding rule for edge weights.
    rotate : float
        Degrees to rotate the points before automatic zoning.
    n_jobs : int
        Worker processes for the per-zone search.

    Attributes
    ----------
    tour_ : ndarray of int
        Visiting order as 0-based row indices.
    length_ : int
        Integer tour length under ``metric``.
    plan_ : ZonePlan
    candidate_counts_ : tuple of int
    """

    def __init__(self, zone_size=4, zones=None, max_n=4, keep_ties=False, metric="EUC_2D",
                 rotate=0.0, n_jobs=1):
        self.zone_size = zone_size
        self.zones = zones
        self.max_n = max_n
        self.keep_ties = keep_ties
        self.metric = metric
        self.rotate = rotate
        self.n_jobs = n_jobs

    def _instance(self, X) -> Instance:
        metric = str(self.metric).upper()
        if metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        return Instance.from_coords(X, metric=metric, name="X")

    def fit(self, X, y=None):
        X = check_coords(X)
        inst = self._instance(X)
        if self.zones is not None:
            plan = load_zone_plan(self.zones, inst)
        else:
            size = min(int(self.zone_size), inst.dimension)
            plan = auto_zone(rotate_instance(inst, self.rotate), size, self.max_n)
        tour = run_sweep(inst, plan, keep_ties=self.keep_ties, workers=self.n_jobs)
        self.tour_ = np.asarray(tour.sequence, dtype=np.intp) - 1
        self.length_ = tour.length
        self.plan_ = plan
        self.candidate_counts_ = tour.candidate_counts
        self.n_features_in_ = X.shape[1]
        return self

    def fit_predict(self, X, y=None):
        """Fit, then return each row's position along the tour."""
        self.fit(X)
        rank = np.empty_like(self.tour_)
        rank[self.tour_] = np.arange(len(self.tour_))
        return rank

    def score(self, X, y=None):
        """Negative length of the fitted tour over ``X`` (higher is better)."""
        check_is_fitted(self, "tour_")
        X = check_coords(X)
        if X.shape[0] != len(self.tour_):
            raise ValueError(f"X has {X.shape[0]} rows, fitted tour has {len(self.tour_)}")
        return -tour_length(self._instance(X), [int(v) + 1 for v in self.tour_])
