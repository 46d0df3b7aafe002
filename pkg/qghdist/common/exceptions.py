class QGHDistError(Exception):
    """qghdist 所有异常的基类"""


class AlgebraError(QGHDistError, ValueError):
    """代数结构或元素不合法"""


class NormPropertyError(AlgebraError):
    """对偶 Lip 范数在非零元素上取 0"""


class SeparatingError(NormPropertyError):
    """指定的向量 Ω 对该代数不是分离向量"""


class NetError(QGHDistError, ValueError):
    pass


class BridgeError(QGHDistError, ValueError):
    pass


class NoValidBridgeError(BridgeError):
    """候选桥半范数全部不可用"""


class AmbientMismatchError(QGHDistError, ValueError):
    pass


class FockError(QGHDistError, ValueError):
    pass


class ConfigError(QGHDistError, ValueError):
    """配置文件格式错误或未通过 schema 校验"""
