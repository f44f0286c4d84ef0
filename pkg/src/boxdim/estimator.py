"""scikit-learn style wrappers around the mesh counters and the log-log fit.

>>> from boxdim import BoxCountingDimension, reference_prefractal, PrefractalSpec
>>> est = BoxCountingDimension(mesh="triangle", schedule="dyadic:2:6")
>>> est.fit(reference_prefractal(PrefractalSpec("sierpinski", 6))).dimension_  # doctest: +SKIP
1.55...
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .estimation import fit_loglog
from .mesh import CELL_MODES, DIAGONALS, MESHES, MeshSpec, count_mesh
from .validation import check_choice, check_deltas, check_geoset, check_geosets, check_offset

__all__ = ["MeshCounter", "BoxCountingDimension"]


class _MeshParams:
    def _check_params(self):
        check_choice("mesh", self.mesh, MESHES)
        check_choice("cell_mode", self.cell_mode, CELL_MODES)
        check_choice("diagonal", self.diagonal, DIAGONALS)
        if self.mode not in (None, "auto", "exact", "approx"):
            raise ValueError(f"mode must be None, 'auto', 'exact' or 'approx', got {self.mode!r}")
        return check_deltas(self.schedule), check_offset(self.offset)

    def _records(self, g, deltas, offset):
        return [count_mesh(g, MeshSpec(d, offset, self.cell_mode, self.diagonal), self.mesh,
                           mode=self.mode, n_jobs=self.n_jobs)
                for d in deltas]


class MeshCounter(_MeshParams, TransformerMixin, BaseEstimator):
    """Turn sets into rows of mesh counts, one column per delta.

    Parameters
    ----------
    mesh : {'square', 'triangle'}
    schedule : str, Schedule or sequence of deltas
        e.g. ``"dyadic:2:8"``; resolved to strictly decreasing deltas in ``fit``.
    cell_mode : {'closed', 'half-open'}
    diagonal : {'ne', 'nw'}
    offset : pair or 'X,Y' string
        Grid origin.
    mode : {None, 'exact', 'approx'}
        None picks exact arithmetic whenever all inputs are dyadic.
    n_jobs : int, optional
        Workers for the per-primitive scan (joblib semantics).
    """

    def __init__(self, mesh="triangle", schedule="dyadic:2:8", cell_mode="closed",
                 diagonal="ne", offset=(0, 0), mode=None, n_jobs=None):
        self.mesh = mesh
        self.schedule = schedule
        self.cell_mode = cell_mode
        self.diagonal = diagonal
        self.offset = offset
        self.mode = mode
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        self.deltas_, self.offset_ = self._check_params()
        self.n_features_out_ = len(self.deltas_)
        return self

    def transform(self, X):
        check_is_fitted(self, "deltas_")
        sets = check_geosets(X)
        return np.array([[r.count for r in self._records(g, self.deltas_, self.offset_)]
                         for g in sets], dtype=np.int64)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "deltas_")
        return np.array([f"{self.mesh}_{float(d):.17g}" for d in self.deltas_], dtype=object)


class BoxCountingDimension(_MeshParams, BaseEstimator):
    """Box-counting dimension of one set from a log-log least-squares fit.

    Parameters are those of :class:`MeshCounter`.

    Attributes
    ----------
    counts_ : list of CountRecord
    fit_ : FitResult
    dimension_ : float
        Fitted slope of ``log10(count)`` against ``-log10(delta)``.
    intercept_ : float
    r_squared_ : float
    """

    def __init__(self, mesh="triangle", schedule="dyadic:2:8", cell_mode="closed",
                 diagonal="ne", offset=(0, 0), mode=None, n_jobs=None):
        self.mesh = mesh
        self.schedule = schedule
        self.cell_mode = cell_mode
        self.diagonal = diagonal
        self.offset = offset
        self.mode = mode
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        deltas, offset = self._check_params()
        g = check_geoset(X)
        self.counts_ = self._records(g, deltas, offset)
        self.fit_ = fit_loglog(self.counts_)
        self.dimension_ = self.fit_.slope
        self.intercept_ = self.fit_.intercept
        self.r_squared_ = self.fit_.r_squared
        return self

    def predict(self, deltas):
        """Counts predicted by the fitted power law at ``deltas``."""
        check_is_fitted(self, "fit_")
        x = np.array([-math.log10(float(d)) for d in np.atleast_1d(deltas)])
        return 10.0 ** (self.intercept_ + self.dimension_ * x)

    def score(self, X=None, y=None):
        """R^2 of the fit (``X`` is ignored; the fit is per-set)."""
        check_is_fitted(self, "fit_")
        return self.r_squared_
