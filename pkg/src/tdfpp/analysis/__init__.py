from .mixing import MixingSeries, mixing_diagnostic
from .shape import ShapeEstimate, ShapeResult, estimate_shape
from .speed import SpeedEstimate, estimate_speed, fekete_envelope
from .verify import HypothesisReport, verify_hypotheses

__all__ = [
    "MixingSeries", "mixing_diagnostic",
    "ShapeEstimate", "ShapeResult", "estimate_shape",
    "SpeedEstimate", "estimate_speed", "fekete_envelope",
    "HypothesisReport", "verify_hypotheses",
]
