import os
from pathlib import Path

HERE = Path(__file__).parent
# 结果文件默认存储目录
# 优先使用环境变量 QGHDIST_DATA_DIR 设置的路径，如未设置则使用默认路径
DATA_DIR = Path(os.environ.get('QGHDIST_DATA_DIR', HERE / "../data"))
# 并发任务数上限，默认为机器的核数
MAX_WORKERS = int(os.environ.get('QGHDIST_MAX_WORKERS', os.cpu_count() or 1))
# 命令行默认随机种子
DEFAULT_SEED = 1729
