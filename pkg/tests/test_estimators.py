import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from kspm.core import fixed_point
from kspm.estimators import IntervalTransducer, SandpileFixedPoint, WaveMatcher
from kspm.exceptions import InputError
from kspm.transducer import from_ab


def test_fixed_point_estimator():
    est = SandpileFixedPoint(D=4).fit([10, 200, 500])
    assert est.density_column_ == 6
    out = est.transform([0, 10, 123, 600])
    assert [c for c in out] == [fixed_point(4, n) for n in (0, 10, 123, 600)]
    assert est.get_params() == {"D": 4}
    assert clone(est).get_params() == {"D": 4}


def test_not_fitted_and_bad_input():
    with pytest.raises(NotFittedError):
        SandpileFixedPoint().transform([1])
    with pytest.raises(InputError):
        SandpileFixedPoint(D=1).fit([3])
    with pytest.raises(InputError):
        SandpileFixedPoint().fit([[1, 2]])
    with pytest.raises(InputError):
        SandpileFixedPoint().fit([-1])


def test_pipeline_to_wave_columns():
    pipe = make_pipeline(SandpileFixedPoint(D=3), WaveMatcher(D=3))
    i_N = pipe.fit_transform(np.arange(0, 60))
    assert i_N.dtype == np.int64 and i_N.shape == (60,)
    assert i_N[3] == 3


def test_transducer_estimator():
    est = IntervalTransducer(D=3, mode="figure-suppressed").fit()
    assert est.n_states_ == 7
    out = est.transform([from_ab("abaaaaab"), ()])
    assert out[0] == from_ab("abaab") and out[1] == ()
    est2 = IntervalTransducer(start=(2, 1)).fit()
    assert est2.transform([from_ab("aaaa")])[0] == from_ab("aba")
    with pytest.raises(InputError):
        IntervalTransducer(mode="x").fit()
