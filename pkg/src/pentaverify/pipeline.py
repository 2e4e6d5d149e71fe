"""End-to-end verification: sample pentagons, group planes, classify every match."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import InvalidInput
from .geometry import GateCounter
from .homography import MatchVerdict, classify_matches, fit_group_homographies
from .matching import MatchSet, PentagonPair, partition, sample_all_blocks
from .planar import PlanarGroup, build_planar_groups, reject_inconsistent_pentagons

STATUS_OK = "ok"
STATUS_NO_PLANE = "no_plane_found"


@dataclass(frozen=True)
class Config:
    grid_n: int = 3
    cr_tau: float = 0.05
    trial_count: int = 1000
    per_block_pentagons: int = 1
    merge_m: int = 3
    merge_mixes: int = 5
    second_mixed_pentagon: bool = True
    pixel_threshold: float = 10.0
    orientation_check: bool = True
    seed: int = 0

    def __post_init__(self):
        def need(ok, msg):
            if not ok:
                raise InvalidInput(f"invalid config: {msg}")

        need(self.grid_n >= 1, f"grid_n={self.grid_n}")
        need(0 < self.cr_tau < 1, f"cr_tau={self.cr_tau}")
        need(self.trial_count >= 1, f"trial_count={self.trial_count}")
        need(self.per_block_pentagons >= 1, f"per_block_pentagons={self.per_block_pentagons}")
        need(1 <= self.merge_m <= 4, f"merge_m={self.merge_m}")
        need(self.merge_mixes >= 1, f"merge_mixes={self.merge_mixes}")
        need(self.pixel_threshold > 0, f"pixel_threshold={self.pixel_threshold}")
        need(0 <= self.seed < 2**64, f"seed={self.seed}")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class VerificationReport:
    config: Config
    status: str
    n_matches: int
    kept: tuple[PentagonPair, ...]
    rejected: tuple[PentagonPair, ...]
    groups: tuple[PlanarGroup, ...]
    verdicts: tuple[MatchVerdict, ...]
    gate_evaluations: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def correct_count(self) -> int:
        return sum(v.correct for v in self.verdicts)

    @property
    def incorrect_count(self) -> int:
        return len(self.verdicts) - self.correct_count

    @property
    def group_counts(self) -> dict[int, int]:
        counts = {g.id: 0 for g in self.groups}
        for v in self.verdicts:
            if v.correct:
                counts[v.group_id] += 1
        return counts

    def correct_mask(self) -> np.ndarray:
        return np.array([v.correct for v in self.verdicts], dtype=bool)


def run(ms: MatchSet, cfg: Config | None = None, workers: int = 1) -> VerificationReport:
    """Verify every match in ``ms``; deterministic for a given ``(ms, cfg)``."""
    if not isinstance(ms, MatchSet):
        raise InvalidInput(f"expected a MatchSet, got {type(ms).__name__}")
    cfg = cfg or Config()
    t0 = time.perf_counter()
    counter = GateCounter()

    gp = partition(ms, cfg.grid_n)
    pairs = sample_all_blocks(ms, gp, cfg.cr_tau, cfg.trial_count, cfg.per_block_pentagons,
                              cfg.seed, counter, cfg.orientation_check, workers)
    kept, rejected = reject_inconsistent_pentagons(pairs, gp)
    merge_rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(1,)))
    groups = build_planar_groups(kept, cfg.cr_tau, merge_rng, cfg.merge_mixes, cfg.merge_m,
                                 cfg.second_mixed_pentagon, counter, cfg.orientation_check)
    groups = fit_group_homographies(groups, ms)
    verdicts = classify_matches(ms, groups, cfg.pixel_threshold)

    return VerificationReport(
        config=cfg,
        status=STATUS_OK if groups else STATUS_NO_PLANE,
        n_matches=len(ms),
        kept=tuple(kept),
        rejected=tuple(rejected),
        groups=tuple(groups),
        verdicts=tuple(verdicts),
        gate_evaluations=counter.count,
        wall_time=time.perf_counter() - t0,
    )
