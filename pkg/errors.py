"""
异常定义
库函数对违背前置条件的输入抛出这些异常，命令行层统一映射为退出码 2
"""


class RigidityError(ValueError):
    """所有输入/前置条件错误的基类"""


class GraphFormatError(RigidityError):
    """图/框架/轨迹文件解析失败，带位置信息"""

    def __init__(self, message: str, line: int = None, column: int = None, source: str = None):
        self.line = line
        self.column = column
        self.source = source
        location = ""
        if source:
            location += f"{source}:"
        if line is not None:
            location += f"{line}:"
            if column is not None:
                location += f"{column}:"
        super().__init__(f"{location} {message}" if location else message)


class PreconditionError(RigidityError):
    """操作的前置条件不满足"""


class SizeCapError(RigidityError):
    """输入超过指数级枚举的规模上限"""

    def __init__(self, what: str, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} 规模 {size} 超过上限 {cap}")


class FrameworkInvariantError(RigidityError):
    """框架的点不在其圆柱面上"""


class CokernelDimensionError(RigidityError):
    """余核维数不是 1，无法唯一确定平衡应力"""

    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(f"余核维数为 {dimension}，期望 1")


class ReductionError(RuntimeError):
    """约化搜索失败，附带卡住的图"""

    def __init__(self, message: str, graph=None):
        self.graph = graph
        super().__init__(message)
