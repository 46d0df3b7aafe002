# 每个目标集合默认的网点数
DEFAULT_NET_COUNT = 512
# 估计覆盖半径时默认的探针数
DEFAULT_PROBES = 256
# 探针默认使用 net.seed + PROBE_SEED_OFFSET 作为种子，与网点的随机流独立
PROBE_SEED_OFFSET = 1
# 网点隶属于目标集合的容差
MEMBERSHIP_TOL = 1e-9
# 网 JSON 文件必须包含的字段
NET_JSON_FIELDS = ("target", "seed", "block_dims", "blocks")
