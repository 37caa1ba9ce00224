"""Monte-Carlo growth report for A_k.

Every trial gets its own pair of seeds (input, algorithm) spawned from the
master seed with numpy's SeedSequence, so trials are independent, can run in
any order, and each one is reproducible on its own.
"""

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import UnsupportedEvaluator
from ..measures.certificates import certificate_complexity
from .algorithm import ALGORITHM_PRNG, Transcript, default_retries, run_Ak, verify_recursive
from .cost import exact_expected_cost
from .evaluators import repetitions
from .lazy import INPUT_PRNG, LazyComposedInput

SEED_SPLITTER = "numpy.random.SeedSequence"


def trial_seeds(seed, k, trials):
    """(input seed, algorithm seed) for each trial at depth k."""
    children = np.random.SeedSequence([seed, k]).spawn(trials)
    return [tuple(int(s) for s in c.generate_state(2, np.uint64)) for c in children]


def root_values(f, trials):
    """Balanced root values: alternate 0 and 1 (constant f gives its one value)."""
    values = sorted(f.range)
    return [values[t % len(values)] for t in range(trials)]


def run_trial(f, k, evaluator, input_seed, algorithm_seed, b, generator="uniform",
              transcript=None):
    inp = LazyComposedInput(f, k, b, input_seed, generator)
    result = run_Ak(f, k, inp, evaluator, rng=random.Random(algorithm_seed),
                    transcript=transcript)
    ok = result.bot or verify_recursive(f, k, result.certificate, inp)
    return result, ok, inp


def _batch(args):
    f, k, evaluator, jobs, generator = args
    out = []
    for (si, sa), b in jobs:
        result, ok, _ = run_trial(f, k, evaluator, si, sa, b, generator)
        out.append((result.queries, result.bot, ok,
                    0 if result.bot else result.certificate.size))
    return out


@dataclass
class GrowthRow:
    k: int
    trials: int
    mean_q: Fraction
    mean_cost_cert: Fraction
    bot_rate: Fraction
    verified: int
    ratio: Fraction = None
    bound: Fraction = None

    @property
    def within_bound(self):
        return self.bound is None or self.mean_q <= self.bound


@dataclass
class GrowthReport:
    function: str
    evaluator: str
    seed: int
    generator: str
    rows: list = field(default_factory=list)

    def to_csv(self):
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["k", "trials", "mean_q", "bot_rate", "ratio"])
        for r in self.rows:
            w.writerow([r.k, r.trials, f"{float(r.mean_q):.6f}", f"{float(r.bot_rate):.6f}",
                        "" if r.ratio is None else f"{float(r.ratio):.6f}"])
        return out.getvalue()

    def to_json(self):
        def q(x):
            return None if x is None else f"{x.numerator}/{x.denominator}"
        return {"function": self.function, "evaluator": self.evaluator, "seed": self.seed,
                "generator": self.generator, "input_prng": INPUT_PRNG,
                "algorithm_prng": ALGORITHM_PRNG, "seed_splitter": SEED_SPLITTER,
                "rows": [{"k": r.k, "trials": r.trials, "mean_q": q(r.mean_q),
                          "mean_cost_cert": q(r.mean_cost_cert), "bot_rate": q(r.bot_rate),
                          "verified": r.verified, "ratio": q(r.ratio), "bound": q(r.bound),
                          "within_bound": r.within_bound} for r in self.rows]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _evaluator_cost(evaluator, f, level):
    """Worst-case expected cost of one evaluator call on a depth-``level`` subtree,
    or None when no exact model exists."""
    try:
        table = exact_expected_cost(evaluator, f, level)
    except UnsupportedEvaluator:
        return None
    return max(table.levels[level].values())


def growth_report(f, evaluator, k_range, trials, seed, generator="uniform", threads=1,
                  function_id=None):
    """Empirical query growth of A_k over ``k_range``.

    ``bound`` instantiates the recursion q_k <= n r E_{k-1} + C (1 + ceil(log2 C)) q_{k-1}
    with E the evaluator's exact worst-case expected cost (when known), r the
    amplification count, and q_{k-1} the measured mean of the previous row.
    """
    report = GrowthReport(function_id or repr(f), evaluator.name, seed, generator)
    if trials <= 0:
        return report
    c = certificate_complexity(f).C
    retries = default_retries(f)
    r = repetitions(evaluator.error_bound, Fraction(1, 4 * f.n))
    prev = None
    for k in k_range:
        jobs = list(zip(trial_seeds(seed, k, trials), root_values(f, trials)))
        if threads > 1:
            size = -(-len(jobs) // threads)
            chunks = [jobs[i:i + size] for i in range(0, len(jobs), size)]
            with ProcessPoolExecutor(threads) as pool:
                parts = pool.map(_batch, [(f, k, evaluator, ch, generator) for ch in chunks])
                results = [x for part in parts for x in part]
        else:
            results = _batch((f, k, evaluator, jobs, generator))
        total_q = sum(x[0] for x in results)
        row = GrowthRow(k, trials, Fraction(total_q, trials),
                        Fraction(total_q + sum(x[3] for x in results), trials),
                        Fraction(sum(x[1] for x in results), trials),
                        sum(x[2] for x in results))
        if prev is not None and prev.k == k - 1:
            if prev.mean_q:
                row.ratio = row.mean_q / prev.mean_q
            e = _evaluator_cost(evaluator, f, k - 1)
            if e is not None:
                row.bound = f.n * r * e + c * retries * prev.mean_q
        report.rows.append(row)
        prev = row
    return report


def transcript_for(f, k, evaluator, seed, trial=0, generator="uniform"):
    """JSON-lines transcript of one trial of ``growth_report(..., seed)`` at depth k."""
    si, sa = trial_seeds(seed, k, trial + 1)[trial]
    b = root_values(f, trial + 1)[trial]
    t = Transcript()
    t.add("config", function=repr(f), k=k, evaluator=evaluator.name, seed=seed, trial=trial,
          root=b, input_seed=si, algorithm_seed=sa, generator=generator)
    run_trial(f, k, evaluator, si, sa, b, generator, t)
    return t
