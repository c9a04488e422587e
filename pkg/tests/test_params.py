import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedts import (CtsParams, GammaMixParams, InvalidParameter,
                     MalformedParamsFile, MixedTsParams, StdCtsParams, as_cts,
                     cts_cumulant, from_kv, std_scale_C, to_kv, validate,
                     violations)
from oracles import mp_std_scale


def test_vfiax_column_is_valid(vfiax_params):
    assert validate(vfiax_params) is vfiax_params
    assert violations(vfiax_params) == []


def test_alpha_one_rejected():
    with pytest.raises(InvalidParameter) as exc:
        validate(StdCtsParams(alpha=1.0, lambda_plus=1.0, lambda_minus=1.0))
    assert any(v.name == "alpha" and "!= 1" in v.constraint for v in exc.value.violations)


def test_zero_tempering_rejected():
    p = CtsParams(alpha=0.5, lambda_plus=0.0, lambda_minus=1.0,
                  c_plus=1.0, c_minus=1.0, mu=0.0)
    with pytest.raises(InvalidParameter) as exc:
        validate(p)
    assert any(v.name == "lambda_plus" for v in exc.value.violations)


def test_all_violations_collected():
    p = MixedTsParams(mu0=0.0, mu=0.0, sigma=-1.0, a=0.0,
                      lambda_plus=-2.0, lambda_minus=1.0, alpha=3.0)
    names = {v.name for v in violations(p)}
    assert {"sigma", "a", "lambda_plus", "alpha"} <= names


def test_alpha_two_only_for_mixedts():
    validate(MixedTsParams(mu0=0, mu=0, sigma=1, a=1,
                           lambda_plus=1, lambda_minus=1, alpha=2.0))
    with pytest.raises(InvalidParameter):
        validate(StdCtsParams(alpha=2.0, lambda_plus=1, lambda_minus=1))
    with pytest.raises(InvalidParameter):
        validate(CtsParams(alpha=2.0, lambda_plus=1, lambda_minus=1,
                           c_plus=1, c_minus=1, mu=0))


def test_nonfinite_rejected():
    with pytest.raises(InvalidParameter):
        validate(GammaMixParams(a=math.nan, sigma2=1.0))


# Expected values frozen from the arbitrary-precision oracle mp_std_scale:
# 1/(2*Gamma(0.5)) and 1/(2*Gamma(1.5)).
def test_std_scale_values():
    c_15 = std_scale_C(StdCtsParams(alpha=1.5, lambda_plus=1.0, lambda_minus=1.0))
    c_05 = std_scale_C(StdCtsParams(alpha=0.5, lambda_plus=1.0, lambda_minus=1.0))
    assert c_15 == pytest.approx(0.2820947917738781, rel=1e-13)
    assert c_05 == pytest.approx(0.5641895835477563, rel=1e-13)
    assert c_15 == pytest.approx(mp_std_scale(1.5, 1.0, 1.0), rel=1e-13)
    assert c_05 == pytest.approx(mp_std_scale(0.5, 1.0, 1.0), rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(alpha=st.one_of(st.floats(0.1, 0.95), st.floats(1.05, 1.9)),
       lp=st.floats(0.2, 5.0), lm=st.floats(0.2, 5.0))
def test_std_scale_symmetric_in_tempering(alpha, lp, lm):
    a = std_scale_C(StdCtsParams(alpha=alpha, lambda_plus=lp, lambda_minus=lm))
    b = std_scale_C(StdCtsParams(alpha=alpha, lambda_plus=lm, lambda_minus=lp))
    assert a == pytest.approx(b, rel=1e-14)
    assert a > 0


@settings(max_examples=40, deadline=None)
@given(alpha=st.one_of(st.floats(0.1, 0.95), st.floats(1.05, 1.9)),
       lp=st.floats(0.3, 4.0), lm=st.floats(0.3, 4.0))
def test_standardized_law_has_zero_mean_unit_variance(alpha, lp, lm):
    cts = as_cts(StdCtsParams(alpha=alpha, lambda_plus=lp, lambda_minus=lm))
    assert abs(cts_cumulant(1, cts)) < 1e-10
    assert cts_cumulant(2, cts) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("params", [
    MixedTsParams(mu0=-0.0681, mu=0.0601, sigma=1.0530, a=1.1670,
                  lambda_plus=1.0280, lambda_minus=1.0311, alpha=1.4717),
    CtsParams(alpha=0.5, lambda_plus=2.0, lambda_minus=3.0,
              c_plus=0.1, c_minus=0.25, mu=-1.5),
    StdCtsParams(alpha=1.9, lambda_plus=0.1, lambda_minus=7.0),
    GammaMixParams(a=1.25, sigma2=0.3333333333333333),
])
def test_kv_round_trip(params):
    text = to_kv(params)
    assert from_kv(text) == params
    assert from_kv(text, cls=type(params)) == params


def test_kv_round_trip_preserves_awkward_doubles():
    p = GammaMixParams(a=0.1 + 0.2, sigma2=1e-17)
    assert from_kv(to_kv(p)) == p


def test_kv_malformed_line_reports_position():
    text = "a=1.0\nsigma2 0.5\n"
    with pytest.raises(MalformedParamsFile) as exc:
        from_kv(text)
    assert exc.value.lineno == 2
    assert "sigma2 0.5" in str(exc.value)


def test_kv_rejects_unknown_key_set():
    with pytest.raises(MalformedParamsFile):
        from_kv("foo=1\nbar=2\n")


def test_kv_ignores_comments_and_blanks():
    text = "# mixing law\n\na=2.0\nsigma2=0.25\n"
    assert from_kv(text) == GammaMixParams(a=2.0, sigma2=0.25)


def test_kv_duplicate_key():
    with pytest.raises(MalformedParamsFile):
        from_kv("a=1\na=2\nsigma2=1\n")
