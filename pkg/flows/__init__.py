from models.config import FlowConfig, FlowVariant

from .base_flow import BaseFlow, FlowResult
from .dynamics import clip_rows, drift, em_step
from .presampled_flow import PresampledFlow, run_dpswflow
from .resampling_flow import ResamplingFlow, run_dpswflow_r

FLOWS = {
    FlowVariant.RESAMPLING: ResamplingFlow,
    FlowVariant.PRESAMPLED: PresampledFlow,
}


def run_flow(target, config: FlowConfig) -> FlowResult:
    """
    Run whichever variant `config.variant` selects
    """
    return FLOWS[config.variant](target, config).run()


__all__ = [
    "BaseFlow",
    "FlowResult",
    "PresampledFlow",
    "ResamplingFlow",
    "clip_rows",
    "drift",
    "em_step",
    "run_dpswflow",
    "run_dpswflow_r",
    "run_flow",
]
