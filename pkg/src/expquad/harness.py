"""Convergence studies: local and global errors over a sequence of stepsizes."""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .integrators import IntegratorConfig, Stepper

# below this the numbers are roundoff, not truncation error
ERROR_FLOOR = 1e-13

CSV_HEADER = ("k", "local_err", "local_order", "global_err", "global_order", "wall_time_s")


@dataclass
class ConvergenceRecord:
    k: Fraction
    local_err: float
    global_err: float
    wall_time: float | None = None
    local_order: float | None = None
    global_order: float | None = None


def estimate_order(err_coarse, err_fine, ratio=2.0):
    """log(err_coarse / err_fine) / log(ratio); None when undefined."""
    if not (err_coarse > 0 and err_fine > 0) or ratio <= 1:
        return None
    return math.log(err_coarse / err_fine) / math.log(ratio)


def _order(prev_err, err, ratio):
    if prev_err < ERROR_FLOOR or err < ERROR_FLOOR:
        return None
    return estimate_order(prev_err, err, ratio)


def local_error(stepper, disc, prob, k, t0, steps):
    """max_n || P_h u(t_{n+1}) - step(P_h u(t_n)) || in the discrete norm."""
    worst = 0.0
    exact = disc.restrict(lambda x: prob.exact(x, t0))
    for n in range(steps):
        t = t0 + n * k
        nxt = disc.restrict(lambda x: prob.exact(x, t + k))
        worst = max(worst, disc.norm(nxt - stepper(exact, t, k)))
        exact = nxt
    return worst


def run_convergence(prob, disc, config, k_list, local=True):
    """One :class:`ConvergenceRecord` per stepsize, ordered by decreasing k.

    ``config`` supplies rule, approach, depth and interval; its own ``k`` is
    ignored.  Orders compare each record with the previous (coarser) one.
    """
    if not getattr(prob, "has_exact", False):
        raise ValueError(f"problem {prob.name!r} has no exact solution; cannot measure errors")
    ks = sorted((Fraction(k) for k in k_list), reverse=True)
    if not ks:
        raise ValueError("no step sizes given")
    depth = config.depth if config.approach == "corrected" else None
    stepper = Stepper(disc, prob, config.rule, config.approach, depth)
    records = []
    for kq in ks:
        k = float(kq)
        cfg = config.with_k(k)
        n = cfg.steps
        start = time.perf_counter()
        U = disc.restrict(prob.initial)
        for m in range(n):
            U = stepper(U, cfg.t0 + m * k, k)
        wall = time.perf_counter() - start
        ref = disc.restrict(lambda x: prob.exact(x, cfg.t0 + n * k))
        gerr = disc.norm(ref - U)
        lerr = local_error(stepper, disc, prob, k, cfg.t0, n) if local else float("nan")
        rec = ConvergenceRecord(kq, lerr, gerr, wall)
        if records:
            prev = records[-1]
            ratio = float(prev.k / kq)
            rec.global_order = _order(prev.global_err, gerr, ratio)
            if local:
                rec.local_order = _order(prev.local_err, lerr, ratio)
        records.append(rec)
    return records


def _fmt_err(x):
    return "" if x is None or not np.isfinite(x) else f"{x:.4e}"


def _fmt_order(x):
    return "" if x is None else f"{x:.3f}"


def record_rows(records, timing=True):
    for r in records:
        yield (
            str(r.k),
            _fmt_err(r.local_err),
            _fmt_order(r.local_order),
            _fmt_err(r.global_err),
            _fmt_order(r.global_order),
            f"{r.wall_time:.6f}" if timing and r.wall_time is not None else "",
        )


def emit_csv(records, destination, timing=True):
    """Write records as CSV to a path or an open text stream.

    With ``timing=False`` the wall-time column is left empty so that repeated
    runs produce identical files.
    """
    if not records:
        raise ValueError("no records to write")
    if hasattr(destination, "write"):
        _write(destination, records, timing)
        return
    path = Path(destination)
    try:
        with path.open("w", newline="") as fh:
            _write(fh, records, timing)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def _write(fh, records, timing):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(record_rows(records, timing))


def read_csv(path):
    """Load records written by :func:`emit_csv`."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            def num(key):
                return float(row[key]) if row[key] else None
            out.append(ConvergenceRecord(
                Fraction(row["k"]), num("local_err"), num("global_err"), num("wall_time_s"),
                num("local_order"), num("global_order"),
            ))
    return out


def make_config(rule, approach, p=None, t0=0.0, T=1.0, k=None):
    """Config template for :func:`run_convergence` (``k`` defaults to the whole interval)."""
    return IntegratorConfig(rule, approach, p, float(T - t0) if k is None else k, t0, T)
