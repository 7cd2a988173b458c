from .pipeline_service import GseOutcome, GsePipelineService, PreparedRun, SweepOutcome

__all__ = ["GseOutcome", "GsePipelineService", "PreparedRun", "SweepOutcome"]
