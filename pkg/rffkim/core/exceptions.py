"""异常体系"""


class RffkimException(Exception):
    """rffkim基础异常类"""
    pass


class ConfigException(RffkimException):
    """配置相关异常（CLI退出码2）"""
    exit_code = 2


class GuardException(RffkimException):
    """资源守卫异常（CLI退出码3）

    Args:
        limit: 被触发的限制名称
        value: 请求的数值
        maximum: 允许的最大值
    """
    exit_code = 3

    def __init__(self, limit: str, value: float, maximum: float):
        self.limit = limit
        self.value = value
        self.maximum = maximum
        super().__init__(f"超出资源限制 {limit}: 请求 {value}, 上限 {maximum}")


class TooLargeError(GuardException):
    """枚举宽度超出限制"""
    pass


class InvalidGeometryError(RffkimException):
    """几何参数非法（空环形区域、整除条件不满足等）"""
    pass


class InvalidParameterError(RffkimException):
    """模型参数非法（T ≤ 0, p ∉ (0,1) 等）"""
    pass


class IncompatibleDistributionsError(RffkimException):
    """两个精确分布的支撑不一致"""
    pass


class CorruptedStateError(RffkimException):
    """链状态与目标测度不相容"""
    pass


class PreconditionError(RffkimException):
    """前置条件不满足"""
    pass


class SchemaError(RffkimException):
    """数据表缺少必需的列"""
    pass
