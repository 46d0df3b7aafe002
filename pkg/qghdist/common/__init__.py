from .config import (
    ENTRIES,
    BridgeKind,
    CoveringMethod,
    CoveringMetric,
    NormKind,
    Target,
)
from .exceptions import (
    AlgebraError,
    AmbientMismatchError,
    BridgeError,
    ConfigError,
    FockError,
    NetError,
    NoValidBridgeError,
    NormPropertyError,
    QGHDistError,
    SeparatingError,
)

__all__ = [
    "ENTRIES",
    "Target",
    "NormKind",
    "BridgeKind",
    "CoveringMethod",
    "CoveringMetric",
    "QGHDistError",
    "AlgebraError",
    "NormPropertyError",
    "SeparatingError",
    "NetError",
    "BridgeError",
    "NoValidBridgeError",
    "AmbientMismatchError",
    "FockError",
    "ConfigError",
]
