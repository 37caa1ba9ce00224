"""Las Vegas certificate finding on recursively composed functions."""

from .algorithm import (ALGORITHM_PRNG, RecursiveCertificate, RunResult, Transcript,
                        default_retries, run_Ak, verify_flat, verify_recursive)
from .cost import CostTable, exact_expected_cost
from .evaluators import (EVALUATORS, DirectionalNAND, Evaluator, GenericAmplified, NaiveMAJ3,
                         NoisyEvaluator, default_evaluator, majority_error, make_evaluator,
                         repetitions)
from .harness import GrowthReport, GrowthRow, growth_report, run_trial, transcript_for, trial_seeds
from .lazy import INPUT_PRNG, LazyComposedInput, sample_input

__all__ = [
    "ALGORITHM_PRNG", "INPUT_PRNG", "EVALUATORS", "CostTable", "DirectionalNAND", "Evaluator",
    "GenericAmplified", "GrowthReport", "GrowthRow", "LazyComposedInput", "NaiveMAJ3",
    "NoisyEvaluator", "RecursiveCertificate", "RunResult", "Transcript", "default_evaluator",
    "default_retries", "exact_expected_cost", "growth_report", "majority_error",
    "make_evaluator", "repetitions", "run_Ak", "run_trial", "sample_input", "transcript_for",
    "trial_seeds", "verify_flat", "verify_recursive",
]
