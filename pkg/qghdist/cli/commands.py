import json
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, TypeVar, Union

import jsonschema
import numpy as np
import pandas as pd
from rich.markup import escape

from ..algebra import AlgebraIsomorphism, FiniteVNAlgebra
from ..common.config import Target
from ..common.exceptions import ConfigError, QGHDistError
from ..config import DEFAULT_SEED
from ..freefield import FreeFieldConfig, TruncatedFock, mass_sweep
from ..freefield.config import DEFAULT_BETA, DEFAULT_CUTOFF, DEFAULT_MOMENTA
from ..ghdist import (
    Bridge,
    DistanceEstimate,
    coupler_bridge,
    estimate_distance,
    iso_bridge,
    kernel_bridge,
    optimize_coupler,
    sum_bridge,
)
from ..lipnorm import (
    DualLipNorm,
    em_norm,
    kernel_norm,
    lift2,
    weighted_entry_norm,
)
from ..nets import build_net, save_net, with_covering
from ..nets.config import DEFAULT_NET_COUNT, DEFAULT_PROBES
from ..shared import console
from ..utils import atomic_write, dumps_json, parse_complex_array
from .config import NET_JSON, SCHEMAS, SWEEP_CSV, SWEEP_JSON, VerifyLevel
from .suites import run_suites


def load_config(path: Optional[Union[str, Path]], command: str) -> Dict[str, Any]:
    """
    读取并校验命令的 JSON 配置，未给出路径时视为空配置

    Raises
    ------
    ConfigError
        文件无法读取、不是合法 JSON 或者不满足 schema
    """
    if path is None:
        data: Any = {}
    else:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"无法读取配置文件 {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"配置文件 {path} 不是合法的 JSON: {e}") from e
    try:
        jsonschema.validate(instance=data, schema=SCHEMAS[command])
    except jsonschema.ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"配置校验失败（{location}）: {e.message}") from e
    return data


F = TypeVar("F", bound=Callable[..., Any])


def config_errors(func: F) -> F:
    """
    把由配置内容引起的 ``ValueError`` / ``TypeError`` 转为 ``ConfigError``

    ``QGHDistError`` 原样抛出
    """

    @wraps(func)
    def run(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except QGHDistError:
            raise
        except (ValueError, TypeError) as e:
            raise ConfigError(f"配置内容无效（{func.__name__}）: {e}") from e

    return run  # type: ignore[return-value]


def _seed(config: Dict[str, Any], seed: Optional[int]) -> int:
    if seed is not None:
        return int(seed)
    return int(config.get("seed", DEFAULT_SEED))


# ----------------------------------------------------------------------
# 由配置构造对象
@config_errors
def build_algebra(spec: Dict[str, Any]) -> FiniteVNAlgebra:
    omega = parse_complex_array(spec["omega"]).reshape(-1) if "omega" in spec else None
    kind = spec.get("type", "standard")
    if kind == "standard":
        if "block_dims" not in spec:
            raise ConfigError("standard 代数需要 block_dims")
        return FiniteVNAlgebra.standard(spec["block_dims"], omega)
    if "n" not in spec:
        raise ConfigError(f"{kind} 代数需要 n")
    return getattr(FiniteVNAlgebra, kind)(spec["n"], omega)


@config_errors
def build_norm(algebra: FiniteVNAlgebra, spec: Dict[str, Any]) -> DualLipNorm:
    kind = spec["kind"]
    if kind == "kernel":
        T = parse_complex_array(spec["T"]) if "T" in spec else 1.0
        return kernel_norm(algebra, T)
    if kind == "effros_marechal":
        return em_norm(algebra, truncation=spec.get("truncation", 16))
    weights = spec.get("weights", [1.0] * len(algebra.block_dims))
    return weighted_entry_norm(algebra, weights)


@config_errors
def build_bridge(
    spec: Dict[str, Any],
    L_M: DualLipNorm,
    L_N: DualLipNorm,
    nets: Tuple,
    seed: int,
) -> Bridge:
    kind = spec["kind"]
    if kind == "sum":
        bridge = sum_bridge(L_M, L_N)
    elif kind == "kernel":
        bridge = kernel_bridge(None, None, None, L_M, L_N)
    elif kind == "iso":
        M, N = L_M.algebra, L_N.algebra
        permutation = spec.get("permutation", list(range(len(M.block_dims))))
        if "unitaries" in spec:
            unitaries = [parse_complex_array(u) for u in spec["unitaries"]]
        else:
            unitaries = [np.eye(N.block_dims[j]) for j in range(len(N.block_dims))]
        psi = AlgebraIsomorphism(M, N, tuple(permutation), tuple(unitaries))
        bridge = iso_bridge(psi, L_N, L_M)
    elif spec.get("optimize"):
        bridge, _ = optimize_coupler(
            L_M,
            L_N,
            *nets,
            budget=spec.get("budget", 200),
            restarts=spec.get("restarts", 4),
            seed=seed,
        )
    else:
        n_M, n_N = L_M.algebra.ambient_dim, L_N.algebra.ambient_dim
        U = parse_complex_array(spec["U"]) if "U" in spec else np.eye(n_N, n_M)
        bridge = coupler_bridge(U.reshape(n_N, n_M), L_M, L_N)
    if "name" in spec:
        bridge.name = spec["name"]
    return bridge


# ----------------------------------------------------------------------
# 子命令
def cmd_dist(config: Dict[str, Any], seed: Optional[int] = None) -> DistanceEstimate:
    """
    按配置估计两个 Lip-von Neumann 代数之间的距离

    Raises
    ------
    NoValidBridgeError
        所有候选桥都不可用
    """
    seed = _seed(config, seed)
    M = build_algebra(config["M"]["algebra"])
    N = build_algebra(config["N"]["algebra"])
    L_M = build_norm(M, config["M"]["norm"])
    L_N = build_norm(N, config["N"]["norm"])
    net_spec = config.get("nets", {})
    count = net_spec.get("count", DEFAULT_NET_COUNT)
    probes = net_spec.get("probes", DEFAULT_PROBES)
    nets = tuple(
        with_covering(build_net(A, Target.positive_unit_ball_2x2, count, seed), lift2(L), probes)
        for A, L in ((M, L_M), (N, L_N))
    )
    bridges: List[Bridge] = []
    for spec in config["bridges"]:
        try:
            bridges.append(build_bridge(spec, L_M, L_N, nets, seed))
        except QGHDistError as e:
            # 全部失败时由 estimate_distance 报错
            name = escape(spec.get("name", spec["kind"]))
            console.print(f"[yellow]跳过候选桥 {name}: {escape(str(e))}")
    radii = config.get("radii")
    return estimate_distance(M, L_M, N, L_N, bridges, nets, radii=radii)


@config_errors
def freefield_config(config: Dict[str, Any], seed: Optional[int] = None) -> FreeFieldConfig:
    fock = TruncatedFock(
        tuple(config.get("momenta", DEFAULT_MOMENTA)), config.get("cutoff", DEFAULT_CUTOFF)
    )
    options = {
        k: config[k]
        for k in ("masses", "coefficient_map", "lipnorm", "reduce_to_separating", "net_count")
        if k in config
    }
    if "generators" in config:
        options["generators"] = tuple(tuple(f) for f in config["generators"])
    return FreeFieldConfig(
        beta=config.get("beta", DEFAULT_BETA),
        fock=fock,
        seed=_seed(config, seed),
        **options,
    )


def cmd_freefield(
    config: Dict[str, Any],
    out: Union[str, Path],
    seed: Optional[int] = None,
    threads: Optional[int] = None,
    progress: bool = True,
) -> Dict[str, Any]:
    """
    运行质量扫描，写出 ``sweep.csv`` 与 ``sweep.json``

    Returns
    -------
    dict
        JSON 报告 ``{"base_mass", "beta", "rows"}``
    """
    ff = freefield_config(config, seed)
    base_mass = float(config.get("base_mass", 0.0))
    df = mass_sweep(ff, base_mass, threads=threads, progress=progress)
    report = {
        "base_mass": base_mass,
        "beta": ff.beta,
        "rows": df.to_dict(orient="records"),
    }
    out = Path(out)
    atomic_write(out / SWEEP_CSV, df.to_csv(index=False))
    atomic_write(out / SWEEP_JSON, dumps_json(report) + "\n")
    return report


def cmd_net(
    config: Dict[str, Any], out: Union[str, Path], seed: Optional[int] = None
) -> Path:
    """构造网并估计覆盖半径，写出 ``net.json``"""
    algebra = build_algebra(config["algebra"])
    net = build_net(
        algebra, config["target"], config.get("count", DEFAULT_NET_COUNT), _seed(config, seed)
    )
    net = with_covering(net, probes=config.get("probes", DEFAULT_PROBES))
    return save_net(net, Path(out) / NET_JSON)


def cmd_verify(
    seed: Optional[int] = None,
    level: Union[str, VerifyLevel] = VerifyLevel.quick,
    inject: Optional[str] = None,
    progress: bool = True,
) -> pd.DataFrame:
    """
    运行全部检验组

    Parameters
    ----------
    seed : int, optional
        随机种子，默认 ``DEFAULT_SEED``
    level : str | VerifyLevel
        ``quick`` 或 ``full``
    inject : str, optional
        注入故障，只有 ``bridge`` 可选，用来确认检验确实会失败

    Returns
    -------
    DataFrame
        每个检验组一行，列为 ``suite, passed, total, failures``
    """
    seed = DEFAULT_SEED if seed is None else int(seed)
    return run_suites(seed, level, inject, progress=progress)
