#!/usr/bin/env python
"""
环境变量配置模块

使用 pydantic-settings 读取 PLC_* 环境变量 (或 .env)，覆盖 settings.py 中的默认预算。

用法:
    from config.env_settings import env_settings, effective_budgets
    budgets = effective_budgets()
"""
from typing import Optional
import os

# 尝试使用 pydantic-settings，如果未安装则降级
try:
    from pydantic_settings import BaseSettings
    from pydantic import Field, field_validator
    HAS_PYDANTIC = True
except ImportError:
    HAS_PYDANTIC = False

from config.settings import BUDGET, CONCURRENT, SEARCH


if HAS_PYDANTIC:
    class EnvSettings(BaseSettings):
        """环境变量配置类 (带类型验证)"""

        ring_budget: Optional[int] = Field(
            default=None,
            description="自同态环穷举预算 (PLC_RING_BUDGET)"
        )
        congruence_budget: Optional[int] = Field(
            default=None,
            description="合同解空间穷举预算 (PLC_CONGRUENCE_BUDGET)"
        )
        graph_budget: Optional[int] = Field(
            default=None,
            description="图枚举预算 (PLC_GRAPH_BUDGET)"
        )
        seed: Optional[int] = Field(
            default=None,
            description="默认随机种子 (PLC_SEED)"
        )
        max_workers: Optional[int] = Field(
            default=None,
            description="进程池大小 (PLC_MAX_WORKERS)"
        )

        # 开发模式
        debug: bool = Field(
            default=False,
            description="是否输出 DEBUG 日志"
        )

        # 日志文件
        log_to_file: bool = Field(
            default=True,
            description="是否写 logs/ 日志文件 (测试时关闭)"
        )

        @field_validator('ring_budget', 'congruence_budget', 'graph_budget', 'max_workers')
        @classmethod
        def validate_positive(cls, v: Optional[int]) -> Optional[int]:
            """预算必须为正"""
            if v is not None and v <= 0:
                raise ValueError(f"必须为正整数: {v}")
            return v

        class Config:
            env_prefix = "PLC_"
            env_file = ".env"
            env_file_encoding = "utf-8"
            # 忽略未知字段
            extra = "ignore"

    # 创建全局实例
    try:
        env_settings = EnvSettings()
    except Exception as e:
        # 配置加载失败，使用默认值
        print(f"⚠️ 环境变量配置加载失败: {e}")
        env_settings = EnvSettings.model_construct()

else:
    # pydantic-settings 未安装时的降级实现
    class EnvSettingsFallback:
        """降级版环境变量配置 (无类型验证)"""

        def __init__(self):
            from dotenv import load_dotenv
            load_dotenv()

            def _int(name):
                value = os.getenv(name)
                return int(value) if value else None

            self.ring_budget = _int('PLC_RING_BUDGET')
            self.congruence_budget = _int('PLC_CONGRUENCE_BUDGET')
            self.graph_budget = _int('PLC_GRAPH_BUDGET')
            self.seed = _int('PLC_SEED')
            self.max_workers = _int('PLC_MAX_WORKERS')
            self.debug = os.getenv('PLC_DEBUG', 'false').lower() in ('1', 'true')
            self.log_to_file = os.getenv('PLC_LOG_TO_FILE', 'true').lower() in ('1', 'true')

    env_settings = EnvSettingsFallback()


def effective_budgets() -> dict:
    """settings.py 默认值被环境变量覆盖后的预算"""
    budgets = dict(BUDGET)
    overrides = {
        'ring_enumeration': env_settings.ring_budget,
        'congruence_search': env_settings.congruence_budget,
        'graph_enumeration': env_settings.graph_budget,
    }
    for key, value in overrides.items():
        if value is not None:
            budgets[key] = value
    return budgets


def effective_seed() -> int:
    return env_settings.seed if env_settings.seed is not None else SEARCH['seed']


def effective_workers() -> int:
    return env_settings.max_workers or CONCURRENT['max_workers']


def validate_config() -> bool:
    """
    验证配置完整性

    Returns:
        是否配置有效
    """
    warnings = []

    budgets = effective_budgets()
    if budgets['ring_enumeration'] < 2 ** 10:
        warnings.append(f"自同态环预算过小 ({budgets['ring_enumeration']})，分解结论可能大量 inconclusive")
    if budgets['congruence_search'] < 2 ** 10:
        warnings.append(f"合同搜索预算过小 ({budgets['congruence_search']})")

    if warnings:
        for w in warnings:
            print(f"⚠️ 配置警告: {w}")
        return False

    return True


if __name__ == "__main__":
    # 测试配置加载
    print("=== 环境变量配置测试 ===")
    print(f"Budgets: {effective_budgets()}")
    print(f"Seed: {effective_seed()}")
    print(f"Workers: {effective_workers()}")
    print(f"Debug Mode: {env_settings.debug}")
    validate_config()
