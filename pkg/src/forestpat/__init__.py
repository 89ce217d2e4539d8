"""Exact counting of pattern-avoiding rooted labeled forests and certified
lower bounds on their growth constants."""

from .errors import (AcceptanceRateError, CapExceededError, ForestPatError, InsufficientDataError,
                     IntegrityError, ParseError, UnsupportedFamilyError)
from .patterns import CLASSICAL, CONSECUTIVE, Pattern, PatternSet, classify, pattern_complement
from .forest import LabeledForest, avoids, contains, forest_complement, forest_profile
from .enumeration import FORESTS, TREES, count_avoiding, enumerate_forests, enumerate_stats
from .seqgen import (CountSequence, check_sandwich, closed_form_family, count_bruteforce,
                     depth_bounded, exp_transform, ingest_bfile, log_transform)
from .swlimit import (LimitBound, MethodNotApplicableError, a_coeffs, certified_r_upper, d_series,
                      family_ode_limit, fn_consistency, limit_lower_bound, ratio_diagnostic,
                      scriptF_class_check)
from .foreststat import (DiscretePMF, component_count_dist, component_size_profile, moments_report,
                         root_label_dist, sample_forests)
from .kernels import BACKEND

__version__ = "0.1.0"
