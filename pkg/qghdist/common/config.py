import enum


class Target(enum.Enum):
    positive_unit_ball_2x2 = "positive_unit_ball_2x2"  # X_M inside M_2(M)
    positive_unit_ball = "positive_unit_ball"
    unit_ball = "unit_ball"
    unit_sphere = "unit_sphere"

    @classmethod
    def has_value(cls, value):
        return value in cls._value2member_map_

    @property
    def positive(self) -> bool:
        return self in (Target.positive_unit_ball_2x2, Target.positive_unit_ball)


class NormKind(enum.Enum):
    kernel = "kernel"
    effros_marechal = "effros_marechal"
    weighted_entry = "weighted_entry"
    tabulated = "tabulated"
    lifted = "lifted"  # lift2 of another norm

    @classmethod
    def has_value(cls, value):
        return value in cls._value2member_map_


class BridgeKind(enum.Enum):
    sum = "sum"
    kernel = "kernel"
    iso = "iso"
    coupler = "coupler"
    composed = "composed"

    @classmethod
    def has_value(cls, value):
        return value in cls._value2member_map_


class CoveringMethod(enum.Enum):
    certified = "certified"
    empirical = "empirical"
    heuristic = "heuristic"


class CoveringMetric(enum.Enum):
    # 覆盖半径所用的度量
    operator = "operator"
    lipnorm = "lipnorm"


# 2x2 放大矩阵的四个位置
ENTRIES = ((0, 0), (0, 1), (1, 0), (1, 1))
