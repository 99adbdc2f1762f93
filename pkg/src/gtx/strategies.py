"""Budgeted label-collection strategies.

Two strategies share a labeling budget ``B`` (one unit per collected label;
assessment labels are charged elsewhere):

* Confidence threshold: visit examples in ascending id order; keep adding
  labels to the current example until the aggregate confidence reaches tau
  (inclusive) or the example holds ``kappa`` labels, then move on.  MV and
  WMV reach confidence 1.0 after a single label, so for them a fixed
  per-example label count substitutes for tau.
* Uncertainty sampling: give every example one label in id order, then
  repeatedly label the example whose aggregate is most uncertain, breaking
  exact ties toward the lowest example id, until the budget (or every
  labeler pool) is exhausted.

Both engines stop mid-example when the budget runs out and keep the partial
labels: they are paid for.  GTX stopping decisions are made in log-odds space
against ``log_odds(tau)`` so that a vote from a labeler whose estimate equals
tau exactly meets the threshold even in floating point; reported confidences
are the corresponding posterior probabilities.

The engines inline the arithmetic of :func:`gtx.simulation.select_labeler`
and :func:`gtx.simulation.elicit_label` (two uniform draws per label:
selection indexes the ascending list of unused labeler ids, then correctness
is compared against the labeler's true accuracy), consuming draws through a
block-buffered :class:`gtx.simulation.UniformStream`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Mapping, Sequence

import numpy as np

from .aggregators import AggregateLabel, Method
from .errors import ConfigError, MissingEstimate
from .model import ClassPrior, UNIFORM_PRIOR, log_odds
from .simulation import SimDataset, SimLabeler, UniformStream

__all__ = [
    "BudgetLedger",
    "CollectionOutcome",
    "LabelEvent",
    "ThresholdConfig",
    "run_confidence_threshold",
    "run_uncertainty_sampling",
]


@dataclass(frozen=True)
class ThresholdConfig:
    """Stopping rule for the confidence-threshold strategy.

    Exactly one of ``tau`` (stop at confidence >= tau, capped at ``kappa``
    labels) or ``fixed_count`` (collect exactly that many labels) must be
    set.  MV and WMV require ``fixed_count``.
    """

    tau: float | None
    kappa: int
    fixed_count: int | None = None

    def __post_init__(self):
        problems = []
        if self.kappa < 1:
            problems.append(f"kappa must be >= 1, got {self.kappa}")
        if self.tau is not None and not 0.5 < self.tau <= 1.0:
            problems.append(f"tau must be in (0.5, 1], got {self.tau}")
        if self.tau is None and self.fixed_count is None:
            problems.append("either tau or fixed_count must be set")
        if self.tau is not None and self.fixed_count is not None:
            problems.append("tau and fixed_count are mutually exclusive")
        if self.fixed_count is not None:
            if self.fixed_count < 1:
                problems.append(f"fixed_count must be >= 1, got {self.fixed_count}")
            elif self.kappa >= 1 and self.fixed_count > self.kappa:
                problems.append(
                    f"fixed_count ({self.fixed_count}) exceeds kappa ({self.kappa})"
                )
        if problems:
            raise ConfigError("; ".join(problems))


@dataclass
class BudgetLedger:
    """Tracks label spending: one unit per collected label."""

    total: int
    spent: int = 0
    per_example: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.total < 0:
            raise ConfigError(f"budget must be >= 0, got {self.total}")
        if self.spent < 0 or self.spent > self.total:
            raise ValueError("spent must lie in [0, total]")

    @property
    def remaining(self) -> int:
        return self.total - self.spent

    def charge(self, example_id: Hashable, n: int = 1) -> None:
        if n < 1:
            raise ValueError("charge at least one label")
        if self.spent + n > self.total:
            raise ValueError(f"charge of {n} exceeds remaining budget {self.remaining}")
        self.spent += n
        self.per_example[example_id] = self.per_example.get(example_id, 0) + n


@dataclass(frozen=True)
class LabelEvent:
    """One collected label plus the aggregate confidence right after it."""

    step: int
    example_id: int
    labeler_id: int
    value: int
    confidence: float


class CollectionOutcome:
    """Result of one collection run.

    ``aggregates`` maps example_id to the final :class:`AggregateLabel` for
    every example that received at least one label.  It is materialized
    lazily from compact parallel arrays so that large sweeps can skip the
    cost.  ``event_log`` is None when the run was made with
    ``record_events=False``; when present it holds one event per spent label
    in chronological order.  ``dynamics`` (uncertainty sampling only, opt-in)
    holds ``(labels_collected, error_rate, mae)`` triples recorded after
    every label from the moment full coverage is reached.
    """

    def __init__(self, method, ledger, example_ids, labels, confidences,
                 soft_p1s, labels_per_example, event_log=None, dynamics=None):
        self.method = method
        self.ledger = ledger
        self.example_ids = example_ids
        self.labels = labels
        self.confidences = confidences
        self.soft_p1s = soft_p1s
        self.labels_per_example = labels_per_example
        self.event_log = event_log
        self.dynamics = dynamics

    @property
    def n_labeled(self) -> int:
        return len(self.example_ids)

    @cached_property
    def aggregates(self) -> dict:
        return {
            ex: AggregateLabel(
                example_id=ex,
                method=self.method,
                label=self.labels[i],
                confidence=self.confidences[i],
                soft_p1=self.soft_p1s[i],
                n_labels=self.labels_per_example[i],
            )
            for i, ex in enumerate(self.example_ids)
        }


_MCODE = {Method.MV: 0, Method.WMV: 1, Method.SV: 2, Method.GTX: 3}


def _sorted_pool(labelers: Sequence[SimLabeler]):
    if not labelers:
        raise ConfigError("labeler pool is empty")
    pool = sorted(labelers, key=lambda lab: lab.labeler_id)
    ids = [lab.labeler_id for lab in pool]
    if len(set(ids)) != len(ids):
        raise ConfigError("labeler ids must be unique")
    return pool, ids


def _estimate_arrays(method, ids, estimates):
    """Per-labeler estimate values in id order, for the methods that need them."""
    if method is Method.MV:
        return None, None, None
    missing = [i for i in ids if i not in estimates]
    if missing:
        raise MissingEstimate(f"no accuracy estimate for labeler {missing[0]!r}")
    accs = [estimates[i].accuracy for i in ids]
    if method is Method.GTX:
        lw1 = [estimates[i].log_weight for i in ids]
        lw0 = [estimates[i].log_counterweight for i in ids]
        return accs, lw1, lw0
    return accs, None, None


def _prior_logs(prior: ClassPrior):
    lp0 = -math.inf if prior.p0 == 0.0 else math.log(prior.p0)
    lp1 = -math.inf if prior.p1 == 0.0 else math.log(prior.p1)
    return lp0, lp1


def _gtx_final(lp0, lp1, ll0, ll1):
    """Label/confidence/soft score, arithmetic-identical to model.posterior."""
    a0 = lp0 + ll0
    a1 = lp1 + ll1
    m = a0 if a0 >= a1 else a1
    e0 = math.exp(a0 - m)
    e1 = math.exp(a1 - m)
    z = e0 + e1
    p0 = e0 / z
    p1 = e1 / z
    if p0 >= p1:
        return 0, p0, p1
    return 1, p1, p1


def _check_budget(budget) -> int:
    if budget is None or budget < 0 or int(budget) != budget:
        raise ConfigError(f"budget must be a non-negative integer, got {budget!r}")
    return int(budget)


def run_confidence_threshold(
    dataset: SimDataset,
    labelers: Sequence[SimLabeler],
    estimates: Mapping[Hashable, "LabelerEstimate"] | None,
    config: ThresholdConfig,
    budget: int,
    method: Method,
    rng,
    *,
    prior: ClassPrior = UNIFORM_PRIOR,
    record_events: bool = True,
) -> CollectionOutcome:
    """Collect labels example-by-example until confidence or count says stop.

    Examples are visited in ascending id order; the run ends when the budget
    is spent or the dataset is exhausted.  At most the final example is cut
    mid-collection, and its partial labels are kept.  ``rng`` may be a numpy
    Generator or an already-positioned UniformStream.
    """
    method = Method(method)
    budget = _check_budget(budget)
    pool, ids = _sorted_pool(labelers)
    L = len(pool)
    if config.kappa > L:
        raise ConfigError(f"kappa ({config.kappa}) exceeds pool size ({L})")
    if method in (Method.MV, Method.WMV) and config.fixed_count is None:
        raise ConfigError(
            f"{method} reaches confidence 1.0 after one label; "
            "use fixed_count instead of tau"
        )
    acc_true = [lab.accuracy for lab in pool]
    est_acc, lw1, lw0 = _estimate_arrays(method, ids, estimates or {})
    lp0, lp1 = _prior_logs(prior)
    dprior = lp1 - lp0 if (lp0 > -math.inf and lp1 > -math.inf) else (
        math.inf if lp0 == -math.inf else -math.inf
    )
    tau = config.tau
    thr = None
    if tau is not None:
        thr = math.inf if tau == 1.0 else log_odds(tau)
    c_stop = config.fixed_count
    kap = config.kappa
    mc = _MCODE[method]
    stream = rng if isinstance(rng, UniformStream) else UniformStream(rng)
    truth = dataset.true_labels.tolist()
    n = dataset.n_examples

    events = [] if record_events else None
    ex_ids, f_label, f_conf, f_soft, f_k = [], [], [], [], []
    spent = 0

    for i in range(n):
        if spent >= budget:
            break
        yi = truth[i]
        unused = list(range(L))
        k = 0
        n1 = 0
        w1 = w0 = 0.0
        m1 = 0.0
        ll0 = ll1 = 0.0
        while spent < budget:
            u = stream.random()
            pos = unused.pop(int(u * len(unused)))
            u2 = stream.random()
            v = yi if u2 < acc_true[pos] else 1 - yi
            k += 1
            spent += 1
            if mc == 3:
                if v == 1:
                    ll1 += lw1[pos]
                    ll0 += lw0[pos]
                else:
                    ll1 += lw0[pos]
                    ll0 += lw1[pos]
            elif mc == 0:
                n1 += v
            elif mc == 1:
                if v == 1:
                    w1 += est_acc[pos]
                else:
                    w0 += est_acc[pos]
            else:
                m1 += est_acc[pos] if v == 1 else 1.0 - est_acc[pos]
            if events is not None:
                if mc == 3:
                    _, conf_now, _ = _gtx_final(lp0, lp1, ll0, ll1)
                elif mc == 0:
                    conf_now = (n1 if 2 * n1 >= k else k - n1) / k
                elif mc == 1:
                    conf_now = (w1 if w1 >= w0 else w0) / (w1 + w0)
                else:
                    m0 = k - m1
                    conf_now = (m1 if m1 >= m0 else m0) / k
                events.append(LabelEvent(spent, i, ids[pos], v, conf_now))
            if c_stop is not None:
                if k == c_stop:
                    break
            elif mc == 3:
                d = dprior + ll1 - ll0
                if d >= thr or -d >= thr:
                    break
            else:  # SV under tau
                m0 = k - m1
                if (m1 if m1 >= m0 else m0) / k >= tau:
                    break
            if k == kap:
                break
        # finalize example i
        if mc == 3:
            lab, conf, soft = _gtx_final(lp0, lp1, ll0, ll1)
        elif mc == 0:
            n0 = k - n1
            lab = 1 if n1 > n0 else 0
            conf = (n1 if lab == 1 else n0) / k
            soft = n1 / k
        elif mc == 1:
            tot = w0 + w1
            lab = 1 if w1 > w0 else 0
            conf = (w1 if lab == 1 else w0) / tot
            soft = w1 / tot
        else:
            m0 = k - m1
            lab = 1 if m1 > m0 else 0
            conf = (m1 if lab == 1 else m0) / k
            soft = m1 / k
        ex_ids.append(i)
        f_label.append(lab)
        f_conf.append(conf)
        f_soft.append(soft)
        f_k.append(k)

    ledger = BudgetLedger(
        total=budget, spent=spent, per_example=dict(zip(ex_ids, f_k))
    )
    return CollectionOutcome(
        method, ledger, ex_ids, f_label, f_conf, f_soft, f_k, event_log=events
    )


def run_uncertainty_sampling(
    dataset: SimDataset,
    labelers: Sequence[SimLabeler],
    estimates: Mapping[Hashable, "LabelerEstimate"] | None,
    budget: int,
    method: Method,
    rng,
    *,
    prior: ClassPrior = UNIFORM_PRIOR,
    record_events: bool = True,
    record_dynamics: bool = False,
) -> CollectionOutcome:
    """First pass in id order, then always label the most uncertain example.

    Uncertainty is 1 - aggregate confidence and is recomputed only for the
    example just labeled, so a lazy max-heap (stale entries skipped by a
    version counter) gives the exact argmax at every step.  Exact ties break
    toward the lowest example id.  The run ends when the budget is spent or
    every example has used all of its labelers.

    With ``record_dynamics=True`` the outcome carries dataset-wide
    ``(labels_collected, error_rate, mae)`` snapshots after every label,
    starting at the label that completes full coverage.
    """
    method = Method(method)
    budget = _check_budget(budget)
    pool, ids = _sorted_pool(labelers)
    L = len(pool)
    acc_true = [lab.accuracy for lab in pool]
    est_acc, lw1, lw0 = _estimate_arrays(method, ids, estimates or {})
    lp0, lp1 = _prior_logs(prior)
    mc = _MCODE[method]
    stream = rng if isinstance(rng, UniformStream) else UniformStream(rng)
    truth = dataset.true_labels.tolist()
    n = dataset.n_examples

    events = [] if record_events else None
    dynamics = [] if record_dynamics else None

    # per-example mutable state
    unused = [None] * n
    kcount = [0] * n
    s_n1 = [0] * n
    s_w1 = [0.0] * n
    s_w0 = [0.0] * n
    s_m1 = [0.0] * n
    s_ll0 = [0.0] * n
    s_ll1 = [0.0] * n
    cur_label = [0] * n
    cur_conf = [0.0] * n
    cur_soft = [0.0] * n
    versions = [0] * n
    spent = 0

    def add_label(i: int) -> None:
        """One select+elicit+update step for example i.  Two draws."""
        nonlocal spent
        yi = truth[i]
        un = unused[i]
        u = stream.random()
        pos = un.pop(int(u * len(un)))
        u2 = stream.random()
        v = yi if u2 < acc_true[pos] else 1 - yi
        k = kcount[i] + 1
        kcount[i] = k
        spent += 1
        if mc == 3:
            if v == 1:
                s_ll1[i] += lw1[pos]
                s_ll0[i] += lw0[pos]
            else:
                s_ll1[i] += lw0[pos]
                s_ll0[i] += lw1[pos]
            lab, conf, soft = _gtx_final(lp0, lp1, s_ll0[i], s_ll1[i])
        elif mc == 0:
            s_n1[i] += v
            n1 = s_n1[i]
            n0 = k - n1
            lab = 1 if n1 > n0 else 0
            conf = (n1 if lab == 1 else n0) / k
            soft = n1 / k
        elif mc == 1:
            if v == 1:
                s_w1[i] += est_acc[pos]
            else:
                s_w0[i] += est_acc[pos]
            w1, w0 = s_w1[i], s_w0[i]
            tot = w0 + w1
            lab = 1 if w1 > w0 else 0
            conf = (w1 if lab == 1 else w0) / tot
            soft = w1 / tot
        else:
            s_m1[i] += est_acc[pos] if v == 1 else 1.0 - est_acc[pos]
            m1 = s_m1[i]
            m0 = k - m1
            lab = 1 if m1 > m0 else 0
            conf = (m1 if lab == 1 else m0) / k
            soft = m1 / k
        cur_label[i] = lab
        cur_conf[i] = conf
        cur_soft[i] = soft
        if events is not None:
            events.append(LabelEvent(spent, i, ids[pos], v, conf))

    # first pass: one label per example, id order
    covered = 0
    for i in range(n):
        if spent >= budget:
            break
        unused[i] = list(range(L))
        add_label(i)
        covered += 1

    err_sum = 0
    mae_sum = 0.0
    track = dynamics is not None and covered == n
    if track:
        for i in range(n):
            err_sum += cur_label[i] != truth[i]
            mae_sum += abs(truth[i] - cur_soft[i])
        dynamics.append((spent, err_sum / n, mae_sum / n))

    if covered == n and spent < budget:
        heap = [(-(1.0 - cur_conf[i]), i, 0) for i in range(n) if unused[i]]
        heapq.heapify(heap)
        while spent < budget and heap:
            neg_u, i, ver = heapq.heappop(heap)
            if ver != versions[i]:
                continue  # stale priority
            if track:
                old_err = cur_label[i] != truth[i]
                old_mae = abs(truth[i] - cur_soft[i])
            add_label(i)
            versions[i] = ver + 1
            if unused[i]:
                heapq.heappush(heap, (-(1.0 - cur_conf[i]), i, ver + 1))
            if track:
                err_sum += (cur_label[i] != truth[i]) - old_err
                mae_sum += abs(truth[i] - cur_soft[i]) - old_mae
                dynamics.append((spent, err_sum / n, mae_sum / n))

    ex_ids = list(range(covered))
    ledger = BudgetLedger(
        total=budget,
        spent=spent,
        per_example={i: kcount[i] for i in ex_ids},
    )
    return CollectionOutcome(
        method,
        ledger,
        ex_ids,
        cur_label[:covered],
        cur_conf[:covered],
        cur_soft[:covered],
        kcount[:covered],
        event_log=events,
        dynamics=dynamics,
    )
