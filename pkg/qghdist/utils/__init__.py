import json
import os
import tempfile
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Iterable, List, Sequence, TypeVar, Union

import numpy as np
import pandas as pd

# 函数变量
F = TypeVar("F")

# 单次广播运算允许的最大元素个数
CHUNK_ELEMENTS = 4_000_000

SeedLike = Union[None, int, np.random.Generator]


def as_rng(seed: SeedLike = None) -> np.random.Generator:
    """
    将种子统一转换为 ``numpy.random.Generator``

    Parameters
    ----------
    seed : Union[None, int, Generator]
        随机种子或者已有的生成器（原样返回）

    Returns
    -------
    Generator
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def to_dataframe(columns: Sequence[str]) -> Callable[[F], F]:
    """
    将返回 ``List[dict]`` 的函数转为返回列顺序固定的 DataFrame 的装饰器

    Parameters
    ----------
    columns : Sequence[str]
        DataFrame 的列名及顺序

    Returns
    -------
    Callable
        装饰器
    """

    def decorator(func: F) -> F:
        @wraps(func)
        def run(*args, **kwargs) -> pd.DataFrame:
            rows = func(*args, **kwargs)
            if isinstance(rows, pd.DataFrame):
                return rows[list(columns)]
            return pd.DataFrame(list(rows), columns=list(columns))

        return run

    return decorator


def to_builtin(o: Any) -> Any:
    """把 numpy 标量、数组以及复数递归转为可 JSON 序列化的内置类型"""
    if isinstance(o, dict):
        return {str(k): to_builtin(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [to_builtin(v) for v in o]
    if isinstance(o, np.ndarray):
        return to_builtin(o.tolist())
    if isinstance(o, (bool, np.bool_)):
        return bool(o)
    if isinstance(o, (int, np.integer)):
        return int(o)
    if isinstance(o, (float, np.floating)):
        return float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return [float(o.real), float(o.imag)]
    return o


def dumps_json(o: Any, indent: Union[int, None] = 2) -> str:
    """
    序列化为 JSON 文本，浮点数使用最短往返十进制表示
    """
    return json.dumps(to_builtin(o), indent=indent, allow_nan=False)


def atomic_write(path: Union[str, Path], text: str) -> Path:
    """
    先写入同目录下的临时文件再重命名，失败时不留下残缺文件

    Parameters
    ----------
    path : Union[str, Path]
        目标文件路径
    text : str
        文件内容

    Returns
    -------
    Path
        目标文件路径
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def complex_pairs(values: Iterable[complex]) -> List[List[float]]:
    """复数序列转为 ``[re, im]`` 列表"""
    return [[float(z.real), float(z.imag)] for z in values]


def parse_complex(value: Any) -> complex:
    """解析实数或者 ``[re, im]`` 形式的复数"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"复数应为 [re, im] 形式，实际为 {value}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def parse_complex_array(values: Any) -> np.ndarray:
    """
    解析配置中的复数组

    实数组直接给出嵌套列表，复数组写成 ``{"re": ..., "im": ...}``
    """
    if isinstance(values, dict):
        re = np.asarray(values["re"], dtype=float)
        im = np.asarray(values.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ValueError("复数组的实部与虚部形状不一致")
        return re + 1j * im
    return np.asarray(values, dtype=complex)


def chunked_distances(
    left: np.ndarray, right: np.ndarray, reducer: Callable[[np.ndarray], np.ndarray]
) -> np.ndarray:
    """
    计算 ``reducer(left[i] - right[j])`` 构成的矩阵，按行分块以控制内存

    Parameters
    ----------
    left : ndarray
        形状为 ``(P, p)`` 的特征矩阵
    right : ndarray
        形状为 ``(Q, p)`` 的特征矩阵
    reducer : Callable
        沿最后一个轴的范数

    Returns
    -------
    ndarray
        形状为 ``(P, Q)`` 的实矩阵
    """
    P, Q = len(left), len(right)
    width = max(left.shape[-1], 1)
    step = max(1, CHUNK_ELEMENTS // max(Q * width, 1))
    out = np.empty((P, Q))
    for start in range(0, P, step):
        block = left[start : start + step, None, :] - right[None, :, :]
        out[start : start + step] = reducer(block)
    return out


def min_plus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(min, +) 矩阵乘法 ``out[i, j] = min_k a[i, k] + b[k, j]``"""
    P, K = a.shape
    Q = b.shape[1]
    step = max(1, CHUNK_ELEMENTS // max(K * Q, 1))
    out = np.empty((P, Q))
    for start in range(0, P, step):
        out[start : start + step] = np.min(
            a[start : start + step, :, None] + b[None, :, :], axis=1
        )
    return out
