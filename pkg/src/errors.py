"""
异常定义模块
所有库内异常都继承 PLCError，CLI 按类型映射退出码
"""
from typing import Optional


class PLCError(Exception):
    """PLCScope 异常基类"""


class FieldMismatchError(PLCError, ValueError):
    """域阶或维度不一致"""


class SingularMatrixError(PLCError, ArithmeticError):
    """矩阵不可逆"""


class InconsistentSystemError(PLCError, ArithmeticError):
    """线性方程组无解 (仅 strict 模式抛出)"""


class BudgetExceededError(PLCError, RuntimeError):
    """枚举规模超出预算"""

    def __init__(self, message: str, required: Optional[int] = None, budget: Optional[int] = None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class InvalidStateError(PLCError, ValueError):
    """稳定子表、邻接矩阵、分组或 LCE 操作非法"""


class InvalidTupleError(PLCError, ValueError):
    """对易矩阵组不满足交错性或零和条件"""


class StabilizerCodeTupleError(InvalidTupleError):
    """秩条件不成立: 对应稳定子码而非稳定子态"""

    def __init__(self, message: str = "not a stabilizer tuple (stabilizer-code case, unsupported)"):
        super().__init__(message)


class PreconditionError(PLCError, ValueError):
    """调用前置条件不满足"""


class ParseError(PLCError, ValueError):
    """输入文件解析失败，带文件路径和行号"""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}:"
        if line is not None:
            location += f"{line}:"
        super().__init__(f"{location} {message}" if location else message)
        self.path = path
        self.line = line


class InternalError(PLCError, RuntimeError):
    """内部一致性检查失败，说明实现有 bug"""
