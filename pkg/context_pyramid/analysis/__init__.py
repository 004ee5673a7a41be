"""Static complexity accounting and receptive-field arithmetic"""

from .complexity import (
    BILINEAR_SAMPLE_MACS,
    ComplexityReport,
    NodeComplexity,
    complexity_report,
    count_macs,
    count_params,
    node_macs,
    node_params,
)
from .receptive_field import (
    RfSpec,
    cem_path_chain,
    cem_rf_growth,
    graph_receptive_fields,
    receptive_field,
)

# Parameters that the context and attention modules add to a ResNet-50 FPN
REFERENCE_PARAMETER_DELTA = 14_760_000

__all__ = [
    "BILINEAR_SAMPLE_MACS",
    "REFERENCE_PARAMETER_DELTA",
    "ComplexityReport",
    "NodeComplexity",
    "RfSpec",
    "cem_path_chain",
    "cem_rf_growth",
    "complexity_report",
    "count_macs",
    "count_params",
    "graph_receptive_fields",
    "node_macs",
    "node_params",
    "receptive_field",
]
