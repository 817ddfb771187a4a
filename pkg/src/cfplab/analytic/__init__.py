"""Analytic oracles: limit laws, finite-n exact formulas and free word moments."""

from .freeness import (
    FreeElement,
    FreeEvaluator,
    circfp_star_moment,
    free_word_moment,
    haar_unitary_moment,
    semicircle_moment,
    two_point_moment,
)
from .laws import (
    AnnulusLaw,
    FreePoissonLaw,
    SingularLaw,
    annulus_inside_fraction_finite,
    annulus_radial_moment_finite,
    annulus_radial_moment_limit,
    nu_c_density,
    nu_c_moment,
    nu_c_power_moment,
    quarter_circ_moment,
    singular_law_density,
    trace_formula,
)
from .words import Letter, Word, all_words, balanced_words, format_word, parse_word

__all__ = [
    "AnnulusLaw",
    "FreeElement",
    "FreeEvaluator",
    "FreePoissonLaw",
    "Letter",
    "SingularLaw",
    "Word",
    "all_words",
    "annulus_inside_fraction_finite",
    "annulus_radial_moment_finite",
    "annulus_radial_moment_limit",
    "balanced_words",
    "circfp_star_moment",
    "format_word",
    "free_word_moment",
    "haar_unitary_moment",
    "nu_c_density",
    "nu_c_moment",
    "nu_c_power_moment",
    "parse_word",
    "quarter_circ_moment",
    "semicircle_moment",
    "singular_law_density",
    "trace_formula",
    "two_point_moment",
]
