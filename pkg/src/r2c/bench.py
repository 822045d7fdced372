"""Monte Carlo harness: replicate a scenario, cluster it with every sieve
policy (and optionally the joint GMM), and score against the generating labels.

Replicate seeds come from ``SeedSequence([seed, setting, replicate])`` so the
rows are identical whatever the number of worker processes.
"""

from __future__ import annotations

import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .baseline import fit_gmm_joint
from .conquer import _select_sieve, encode_all, r2c_cluster, surviving_centers
from .errors import ConfigError, FitFailed
from .metrics import agreement_metrics
from .mixture1d import FitConfig
from .synthgen import ScenarioSpec, generate_scenario

COLUMNS = (
    "replicate", "n", "d", "policy", "ari", "ri", "ji", "fmi",
    "final_k", "baseline_ari", "baseline_k",
)
SUMMARY_COLUMNS = (
    "n", "d", "policy", "reps", "median_ari", "mean_ari", "mean_ri", "mean_ji",
    "mean_fmi", "modal_final_k", "share_modal_k", "median_baseline_ari", "modal_baseline_k",
)


@dataclass(frozen=True)
class BenchJob:
    scenario: str
    setting: int
    replicate: int
    n: int | None
    d: int | None
    theta: float
    seed: int
    policies: tuple
    fit_config: FitConfig
    baseline: bool


def replicate_seeds(seed, setting, replicate):
    """(data seed, fit seed) for one replicate."""
    state = np.random.SeedSequence([seed, setting, replicate]).generate_state(2, dtype=np.uint32)
    return int(state[0]), int(state[1])


def run_replicate(job):
    data_seed, fit_seed = replicate_seeds(job.seed, job.setting, job.replicate)
    spec = ScenarioSpec(job.scenario, n=job.n, d=job.d, theta=job.theta, seed=data_seed)
    sample = generate_scenario(spec)
    config = replace(job.fit_config, seed=fit_seed)
    _, report = r2c_cluster(sample.points, config, job.policies[0])

    base_ari, base_k = float("nan"), -1
    if job.baseline:
        try:
            model, base_labels, _ = fit_gmm_joint(sample.points, config.k_max, config)
        except FitFailed:
            pass
        else:
            base_ari = agreement_metrics(base_labels, sample.labels).ari
            base_k = model.k

    rows = []
    n, d = sample.points.shape
    for policy in job.policies:
        u, _ = _select_sieve(report.conquer_function, policy)
        result = surviving_centers(report.table, report.grid, u)
        labels = encode_all(sample.points, result)
        m = agreement_metrics(labels, sample.labels)
        rows.append((job.replicate, n, d, policy_label(policy), m.ari, m.ri, m.ji, m.fmi,
                     result.final_k, base_ari, base_k))
    return rows


def policy_label(policy):
    return f"fixed:{policy.u:g}" if policy.name == "fixed" else policy.name


def run_bench(scenario, settings, reps, policies, seed=0, theta=2.0, fit_config=None,
              baseline=True, threads=1):
    """Rows of per-replicate metrics, ordered by setting, replicate, policy.

    ``settings`` lists sample sizes (S1, S2) or dimensions (S3).
    """
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    if not policies:
        raise ConfigError("at least one policy is required")
    fit_config = fit_config or FitConfig()
    scenario = scenario.lower()
    jobs = []
    for setting, value in enumerate(settings):
        n, d = (None, int(value)) if scenario == "s3" else (int(value), None)
        for r in range(reps):
            jobs.append(BenchJob(scenario, setting, r, n, d, theta, seed, tuple(policies),
                                 fit_config, baseline))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run_replicate, jobs))
    else:
        chunks = [run_replicate(job) for job in jobs]
    return [row for chunk in chunks for row in chunk]


def _median(values):
    values = [v for v in values if v == v]
    return statistics.median(values) if values else float("nan")


def _mode(values):
    counts = Counter(values)
    top = max(counts.values())
    # ties resolved toward the smaller k
    return min(k for k, c in counts.items() if c == top), top / len(values)


def summarize(rows):
    groups = {}
    for row in rows:
        groups.setdefault((row[1], row[2], row[3]), []).append(row)
    out = []
    for (n, d, policy), grp in groups.items():
        ks = [r[8] for r in grp]
        modal, share = _mode(ks)
        base_ks = [r[10] for r in grp if r[10] >= 0]
        out.append((
            n, d, policy, len(grp),
            _median([r[4] for r in grp]),
            float(np.mean([r[4] for r in grp])),
            float(np.mean([r[5] for r in grp])),
            float(np.mean([r[6] for r in grp])),
            float(np.mean([r[7] for r in grp])),
            modal, share,
            _median([r[9] for r in grp]),
            _mode(base_ks)[0] if base_ks else -1,
        ))
    return out
