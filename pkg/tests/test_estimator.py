import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from boxdim import (BoxCountingDimension, Dyadic, EmptyInputError, MeshCounter, ValidationError,
                    bradley_stage, reference_prefractal, PrefractalSpec)
from boxdim.fracgeo import write_fracgeo

SIERPINSKI = reference_prefractal(PrefractalSpec("sierpinski", 6))
SQUARE = reference_prefractal(PrefractalSpec("filled-square"))


def test_params_round_trip_and_clone():
    est = BoxCountingDimension(mesh="square", schedule="dyadic:1:4", cell_mode="half-open")
    params = est.get_params()
    assert params["mesh"] == "square" and params["cell_mode"] == "half-open"
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    est.set_params(diagonal="nw")
    assert est.diagonal == "nw"


def test_counter_transform():
    mc = MeshCounter(mesh="square", schedule="dyadic:1:3").fit()
    X = mc.transform([SQUARE, SIERPINSKI])
    assert X.shape == (2, 3) and X.dtype == np.int64
    assert list(X[0]) == [16, 36, 100]
    names = mc.get_feature_names_out()
    assert list(names) == ["square_0.5", "square_0.25", "square_0.125"]
    assert (mc.fit_transform(SQUARE) == X[:1]).all()


def test_counter_accepts_paths_and_primitive_lists(tmp_path):
    path = tmp_path / "s.geo"
    write_fracgeo(SQUARE, path)
    mc = MeshCounter(mesh="triangle", schedule=[Dyadic(1, 1)]).fit()
    assert mc.transform(str(path))[0, 0] == 30
    assert mc.transform([[(0, 0), (1, 0), (1, 1), (0, 1)]])[0, 0] == 30


def test_dimension_fit_predict_score():
    est = BoxCountingDimension(schedule="dyadic:2:6").fit(SIERPINSKI)
    assert 1.4 < est.dimension_ < 1.7
    assert est.dimension_ == est.fit_.slope and est.score() == est.r_squared_
    assert len(est.counts_) == 5
    pred = est.predict([0.25, 0.125])
    assert pred.shape == (2,) and pred[1] > pred[0]
    expected = 10 ** (est.intercept_ + est.dimension_ * np.log10(8))
    assert pred[1] == pytest.approx(expected)


def test_parallel_estimator_matches_serial():
    g = bradley_stage(9)[0]
    a = BoxCountingDimension(schedule="dyadic:2:5").fit(g)
    b = BoxCountingDimension(schedule="dyadic:2:5", n_jobs=2).fit(g)
    assert [r.count for r in a.counts_] == [r.count for r in b.counts_]


def test_validation():
    with pytest.raises(NotFittedError):
        BoxCountingDimension().predict([0.5])
    with pytest.raises(NotFittedError):
        MeshCounter().transform(SQUARE)
    with pytest.raises(ValidationError):
        BoxCountingDimension(mesh="hex").fit(SQUARE)
    with pytest.raises(ValidationError):
        BoxCountingDimension(schedule=[0.25, 0.5]).fit(SQUARE)
    with pytest.raises(ValidationError):
        BoxCountingDimension(offset="1").fit(SQUARE)
    with pytest.raises(ValueError):
        BoxCountingDimension(mode="fuzzy").fit(SQUARE)
    with pytest.raises(EmptyInputError):
        BoxCountingDimension().fit([])
