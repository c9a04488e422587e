"""Mixed tempered stable distribution toolkit.

Characteristic exponents, closed-form moments, FFT density inversion,
sampling, histogram-MSE parameter estimation, a GARCH(1,1) quasi-maximum
likelihood filter, and a FastICA statistical-factor pipeline with
characteristic-function density reconstruction.
"""

__version__ = "0.1.0"

from .charfn import (CfGridSpec, cts_log_cf, gamma_log_mgf,
                     geostable_limit_log_cf, mixedts_log_cf,
                     scaled_stdcts_log_cf, stdcts_log_cf)
from .density import (DensityGrid, auto_grid_spec, invert_cf, mixedts_density,
                      quantile)
from .errors import (EmptyInput, EvaluationError, GridTooCoarse,
                     IcaNoConvergence, InvalidParameter, MalformedParamsFile,
                     NonHermitianCf, NonPositiveVariance, OutOfRange,
                     OutsideMgfDomain, RankDeficient, SeriesTooShort,
                     Violation, ZeroExpectedFrequency)
from .estimation import (FitOptions, FitResult, HistogramSpec, fit_measures,
                         fit_mixedts, fit_vg, format_fit_report,
                         histogram_spec_for, observed_counts,
                         theoretical_counts)
from .garch import (GarchFit, GarchParams, garch_filter,
                    garch_mixedts_pipeline, garch_qmle, simulate_garch)
from .ica import (FactorSplit, IcaModel, IcaPipelineResult, fastica,
                  ica_pipeline, jarque_bera, ols_exposures,
                  reconstruct_portfolio_density, split_factors)
from .moments import (MomentSet, cts_cumulant, mixedts_cumulants,
                      mixedts_gamma2_bracket_form, mixedts_moments,
                      stdcts_cumulant)
from .params import (CtsParams, GammaMixParams, MixedTsParams, StdCtsParams,
                     as_cts, from_kv, std_scale_C, to_kv, validate, violations)
from .sampling import SampleBatch, sample_mixedts, unconditional_inverse_cdf_sample

__all__ = [name for name in dir() if not name.startswith("_")]
