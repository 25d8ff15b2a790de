from typing import Dict, List, Optional, TypedDict

from period_scope.models.period import PeriodEstimate
from period_scope.models.ramanujan import ComponentSet, Decomposition
from period_scope.models.signal import Signal


class AnalysisState(TypedDict):
    records: List[Signal]
    period: Optional[int]
    hidden_periods: Optional[List[int]]
    estimate: Optional[PeriodEstimate]
    decomposition: Optional[Decomposition]
    strengths: Optional[Dict[int, float]]
    components: Optional[ComponentSet]
