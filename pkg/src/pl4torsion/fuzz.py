"""Seeded random Pachner walks checking the torsion ratio law and invariance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MoveRejected
from .torsion import RANK_TOL, InvariantResult, evaluate, log_predicted_ratio
from .triangulation import MOVE_KINDS, Realization, Triangulation, apply_move, move_candidates

DEFAULT_MIX = {"1-5": 2, "5-1": 2, "2-4": 2, "4-2": 2, "3-3": 1}
# New simplices must have |V| >= FUZZ_QUALITY * (longest edge)^4; thinner ones
# make the angle Jacobian too ill-conditioned for the rank test.
FUZZ_QUALITY = 1e-4


@dataclass
class FuzzStep:
    index: int
    kind: str | None
    arg: object = None
    status: str = "applied"
    tau_ratio: float = math.nan
    predicted_ratio: float = math.nan
    ratio_residual: float = math.nan
    invariant: float = math.nan
    invariant_drift: float = math.nan
    record: dict | None = None
    note: str = ""

    def as_dict(self) -> dict:
        arg = list(self.arg) if isinstance(self.arg, tuple) else self.arg
        out = {
            "index": self.index,
            "kind": self.kind,
            "arg": arg,
            "status": self.status,
        }
        if self.status == "applied":
            out.update(
                tau_ratio=self.tau_ratio,
                predicted_ratio=self.predicted_ratio,
                ratio_residual=self.ratio_residual,
                invariant=self.invariant,
                invariant_drift=self.invariant_drift,
                record=self.record,
            )
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class FuzzResult:
    seed: int
    initial: InvariantResult
    steps: list[FuzzStep] = field(default_factory=list)
    triangulation: Triangulation | None = None
    realization: Realization | None = None
    tol_ratio: float = 1e-7
    tol_inv: float = 1e-6

    @property
    def applied(self) -> list[FuzzStep]:
        return [s for s in self.steps if s.status == "applied"]

    @property
    def max_ratio_residual(self) -> float:
        return max((s.ratio_residual for s in self.applied), default=0.0)

    @property
    def max_invariant_drift(self) -> float:
        return max((s.invariant_drift for s in self.applied), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_ratio_residual <= self.tol_ratio and self.max_invariant_drift <= self.tol_inv


def _pick_move(t, r, rng, mix, min_quality):
    """Try kinds in weighted random order and candidates in shuffled order."""
    cands = move_candidates(t)
    kinds = [k for k in MOVE_KINDS if cands[k] and mix.get(k, 0) > 0]
    notes = []
    while kinds:
        w = np.array([mix[k] for k in kinds], dtype=float)
        kind = kinds[rng.choice(len(kinds), p=w / w.sum())]
        kinds.remove(kind)
        for j in rng.permutation(len(cands[kind])):
            arg = cands[kind][j]
            try:
                return kind, arg, apply_move(t, r, kind, arg, rng, min_quality=min_quality)
            except MoveRejected as exc:
                notes.append(f"{kind} {arg}: {exc}")
    return None, None, notes


def fuzz(
    t: Triangulation,
    r: Realization,
    moves: int,
    seed: int,
    mix: dict[str, float] | None = None,
    tol_ratio: float = 1e-7,
    tol_inv: float = 1e-6,
    rank_tol: float = RANK_TOL,
    min_quality: float = FUZZ_QUALITY,
) -> FuzzResult:
    mix = dict(DEFAULT_MIX if mix is None else mix)
    rng = np.random.default_rng(seed)
    current = evaluate(t, r, rank_tol=rank_tol)
    result = FuzzResult(seed, current, tol_ratio=tol_ratio, tol_inv=tol_inv)
    for i in range(moves):
        kind, arg, out = _pick_move(t, r, rng, mix, min_quality)
        if kind is None:
            result.steps.append(FuzzStep(i, None, status="skipped", note="no applicable move"))
            continue
        t2, r2, record = out
        after = evaluate(t2, r2, rank_tol=rank_tol)
        log_obs = after.torsion.log_abs_tau - current.torsion.log_abs_tau
        log_pred = log_predicted_ratio(record)
        result.steps.append(
            FuzzStep(
                i,
                kind,
                arg,
                tau_ratio=math.exp(log_obs),
                predicted_ratio=math.exp(log_pred),
                ratio_residual=abs(math.expm1(log_obs - log_pred)),
                invariant=after.value,
                invariant_drift=abs(math.expm1(after.log_value - result.initial.log_value)),
                record=record.as_dict(),
            )
        )
        t, r, current = t2, r2, after
    result.triangulation, result.realization = t, r
    return result
