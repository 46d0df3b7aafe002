# 桥限制到两侧时与原范数的容差
RESTRICTION_TOL = 1e-10
# ψ 保范数、U 为等距的检验容差
ISOMETRY_TOL = 1e-10
# 复合桥接口处两侧范数一致的相对容差
JUNCTION_TOL = 1e-10
# 随机检验桥公理时的默认样本数
CHECK_SAMPLES = 100

# 耦合等距优化：目标函数求值次数上限、随机重启次数与坐标步长
COUPLER_BUDGET = 200
COUPLER_RESTARTS = 4
COUPLER_STEP = 0.5
COUPLER_MIN_STEP = 1e-3

# estimate_distance 候选桥表的列
CANDIDATE_COLUMNS = ["bridge", "hausdorff", "upper", "certified"]
# optimize_coupler 优化轨迹表的列
COUPLER_TRACE_COLUMNS = ["restart", "evaluation", "objective", "best"]
