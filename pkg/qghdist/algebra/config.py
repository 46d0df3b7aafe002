# 正性判定的特征值容差
POSITIVITY_TOL = 1e-9
# 分离向量判定：x ↦ xΩ 的奇异值下限
SEPARATING_TOL = 1e-10
# 嵌入映射（幺正、保 * 、等距）的校验容差
EMBEDDING_TOL = 1e-10
# canonical_decomposition 允许的范数超出量
NORM_BOUND_TOL = 1e-12
# 生成代数时特征值聚类的相对容差
CLUSTER_TOL = 1e-8
# 生成代数分解结果的重构误差上限
RECONSTRUCTION_TOL = 1e-8
# 随机分解步骤的重试次数
DECOMPOSITION_TRIES = 3
