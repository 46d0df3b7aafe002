from ..common.config import NormKind

# Effros–Maréchal 双重级数的默认截断项数
EM_TRUNCATION = 16
# 核范数要求 T 单射：奇异值下限
KERNEL_INJECTIVITY_TOL = 1e-12
# 范数性质（诱导线性映射满秩）的相对奇异值下限
RANK_TOL = 1e-10

# 可写成「线性特征 + 向量范数」的范数类型，及其所用的向量范数
FEATURE_REDUCERS = {
    NormKind.kernel: "l2",
    NormKind.effros_marechal: "l1",
    NormKind.tabulated: "linf",
}
