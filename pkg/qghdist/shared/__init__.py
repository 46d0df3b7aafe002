from rich.console import Console

from ..config import MAX_WORKERS

# 诊断信息统一输出到标准错误
console = Console(stderr=True)
# 命令行的结果报告输出到标准输出
report_console = Console()

__all__ = ["console", "report_console", "MAX_WORKERS"]
