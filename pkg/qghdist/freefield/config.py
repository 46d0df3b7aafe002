import enum

# 默认截断：3 个动量模式、总粒子数不超过 4，Fock 空间维数为 35
DEFAULT_MOMENTA = (0.5, 1.0, 2.0)
DEFAULT_CUTOFF = 4
DEFAULT_BETA = 1.0
# 默认质量网格，逐步逼近基准质量 0
DEFAULT_MASSES = (0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0)
# 默认的 Weyl 生成元（模式系数）
DEFAULT_GENERATORS = ((0.6, 0.3, 0.1),)

# mass_sweep 输出表的列，顺序即 CSV 表头
SWEEP_COLUMNS = ["m_prime", "certified_bound", "net_sup", "qgh_upper"]
# contraction_profile 输出表的列
PROFILE_COLUMNS = ["mass", "max_entry", "vacuum_entry", "argmax"]


class CoefficientMap(enum.Enum):
    # 直接使用模式系数 f_k
    fixed = "fixed"
    # 使用 f_k / sqrt(2 ω_m(p_k))
    mass_dependent = "mass_dependent"

    @classmethod
    def has_value(cls, value):
        return value in cls._value2member_map_


class LipNormMode(enum.Enum):
    # 固定代数上的范数族 A ↦ ‖e^{-βH_m} A Ω‖
    transported = "transported"
    # 每个质量各自生成的代数上的同一公式
    intrinsic = "intrinsic"

    @classmethod
    def has_value(cls, value):
        return value in cls._value2member_map_
