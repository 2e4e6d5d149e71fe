"""Two-view match verification from pentagon cross-ratios and per-plane homographies.

Typical use::

    from pentaverify import MatchSet, ImageExtent, Config, run
    report = run(match_set, Config(seed=1))
    report.correct_count, report.incorrect_count
"""

from .errors import (BoundsError, DegenerateConfiguration, InfeasibleSpec, InsufficientPoints,
                     InvalidInput, NumericalFailure, ParseError, PentaverifyError)
from .geometry import (GateCounter, Pentagon, apply_homography, cr_gate, cross_ratio,
                       pentagon_cross_ratios, pentagons_shape_match)
from .homography import (Homography, MatchVerdict, classify_matches, estimate_homography,
                         fit_group_homographies)
from .matching import (GridPartition, ImageExtent, MatchSet, PentagonPair, partition,
                       sample_all_blocks, sample_block_pentagon)
from .pipeline import Config, VerificationReport, run
from .planar import PlanarGroup, build_planar_groups, reject_inconsistent_pentagons, try_merge
from .render import render_report_svg
from .synth import (OUTLIER, LabeledMatchSet, PlaneSpec, SceneSpec, corner_scene, generate,
                    single_plane_scene)

__version__ = "0.1.0"
