"""
命令行入口：``qghdist {dist,freefield,verify,net}``

退出码
------
- 0 : 成功
- 1 : verify 中有检验未通过
- 2 : 配置错误或其他输入错误
- 3 : 没有可用的候选桥
- 4 : Ω 不是配置代数的分离向量
"""
import argparse
from pathlib import Path
from typing import List, Optional

from rich.markup import escape
from rich.table import Table

from ..common.exceptions import NoValidBridgeError, QGHDistError, SeparatingError
from ..config import DATA_DIR, DEFAULT_SEED
from ..shared import console, report_console
from ..utils import dumps_json
from .commands import cmd_dist, cmd_freefield, cmd_net, cmd_verify, load_config
from .config import (
    EXIT_CONFIG_ERROR,
    EXIT_NO_BRIDGE,
    EXIT_NOT_SEPARATING,
    EXIT_OK,
    EXIT_VERIFY_FAILED,
    INJECTIONS,
    VerifyLevel,
)
from .suites import run_suites


def _global_flags(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--config", type=Path, default=default, help="JSON 配置文件")
    parser.add_argument("--seed", type=int, default=default, help="随机种子")
    parser.add_argument("--threads", type=int, default=default, help="并发任务数上限")
    parser.add_argument("--out", type=Path, default=default, help="结果文件目录")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qghdist", description="有限维 Lip-von Neumann 代数之间的对偶量子 Gromov-Hausdorff 距离"
    )
    _global_flags(parser, None)
    # 子命令之后也可以写全局参数
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dist", parents=[common], help="估计两个代数之间的距离")
    sub.add_parser("freefield", parents=[common], help="自由场质量连续性扫描")
    verify = sub.add_parser("verify", parents=[common], help="运行不变量检验组")
    verify.add_argument(
        "--level", choices=[v.value for v in VerifyLevel], default=VerifyLevel.quick.value
    )
    verify.add_argument("--inject", choices=INJECTIONS, default=None, help="注入故障")
    sub.add_parser("net", parents=[common], help="构造网并写出 JSON")
    return parser


def _verify(args: argparse.Namespace) -> int:
    seed = DEFAULT_SEED if args.seed is None else args.seed
    df = cmd_verify(seed, args.level, args.inject, progress=False)
    table = Table(title=f"verify ({args.level}, seed={seed})")
    for column in df.columns:
        table.add_column(column)
    for row in df.itertuples(index=False):
        table.add_row(*(str(v) for v in row))
    report_console.print(table)
    failed = df[df["passed"] < df["total"]]
    if failed.empty:
        return EXIT_OK
    for row in failed.itertuples(index=False):
        console.print(f"[red]检验组 {row.suite} 未通过: {row.failures}")
    return EXIT_VERIFY_FAILED


def _run(args: argparse.Namespace) -> int:
    out = DATA_DIR if args.out is None else args.out
    if args.command == "verify":
        return _verify(args)
    config = load_config(args.config, args.command)
    if args.command == "dist":
        estimate = cmd_dist(config, args.seed)
        print(dumps_json(estimate.to_dict()))
    elif args.command == "freefield":
        report = cmd_freefield(config, out, args.seed, args.threads, progress=False)
        best = max(report["rows"], key=lambda row: row["certified_bound"])
        print(f"max_bound={best['certified_bound']} at m_prime={best['m_prime']}")
    else:
        print(cmd_net(config, out, args.seed))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    命令行主函数

    Parameters
    ----------
    argv : List[str], optional
        命令行参数，默认取 ``sys.argv[1:]``

    Returns
    -------
    int
        退出码
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 的用法错误同样视为配置错误
        return EXIT_OK if e.code == 0 else EXIT_CONFIG_ERROR
    try:
        return _run(args)
    except NoValidBridgeError as e:
        console.print(f"[red]没有可用的候选桥: {escape(str(e))}")
        return EXIT_NO_BRIDGE
    except SeparatingError as e:
        console.print(f"[red]{escape(str(e))}")
        return EXIT_NOT_SEPARATING
    except QGHDistError as e:
        console.print(f"[red]{escape(str(e))}")
        return EXIT_CONFIG_ERROR


__all__ = [
    "main",
    "build_parser",
    "load_config",
    "cmd_dist",
    "cmd_freefield",
    "cmd_net",
    "cmd_verify",
    "run_suites",
]