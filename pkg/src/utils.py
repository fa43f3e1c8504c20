"""
工具函数模块
包含日志、确定性 JSON 输出、参数解析等通用工具
"""
import json
import logging
import os
from datetime import datetime
from typing import Any, Sequence, Tuple

import numpy as np

from config.env_settings import env_settings
from config.settings import LOG

# 项目根目录
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
LOGS_DIR = os.path.join(PROJECT_ROOT, "logs")


def clean_old_logs(days: int = 30) -> int:
    """
    清理超过 days 天的旧日志

    Returns:
        删除的文件数
    """
    removed = 0
    try:
        if not os.path.exists(LOGS_DIR):
            return 0
        now = datetime.now()
        for filename in os.listdir(LOGS_DIR):
            file_path = os.path.join(LOGS_DIR, filename)
            if os.path.isfile(file_path) and filename.endswith('.log'):
                # 获取文件最后修改时间
                file_time = datetime.fromtimestamp(os.path.getmtime(file_path))
                if (now - file_time).days > days:
                    os.remove(file_path)
                    removed += 1
    except OSError:
        pass
    return removed


def setup_logger(name: str, level=None, async_file: bool = False, log_to_file: bool = None,
                 log_dir: str = None) -> logging.Logger:
    """
    配置并返回一个 Logger

    - level / log_to_file 缺省取 env_settings (PLC_DEBUG, PLC_LOG_TO_FILE)
    - async_file: 通过 QueueHandler 异步写文件，EGS 大规模搜索时避免日志阻塞
    """
    if level is None:
        level = logging.DEBUG if env_settings.debug else logging.INFO
    if log_to_file is None:
        log_to_file = env_settings.log_to_file
    log_dir = log_dir or LOGS_DIR

    logger = logging.getLogger(name)

    # 避免重复添加 handler
    if logger.handlers:
        return logger

    logger.setLevel(level)
    logger.propagate = False

    if log_to_file:
        os.makedirs(log_dir, exist_ok=True)

        # 输出到文件 (带日期)
        filename = os.path.join(log_dir, f"{datetime.now().strftime('%Y-%m-%d')}.log")
        file_formatter = logging.Formatter(
            '%(asctime)s | %(name)s | %(levelname)s | %(message)s',
            datefmt='%H:%M:%S'
        )
        file_handler = logging.FileHandler(filename, encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(file_formatter)

        if async_file:
            try:
                import queue
                from logging.handlers import QueueHandler, QueueListener

                log_queue = queue.Queue(-1)  # 无限容量队列

                # 队列监听器在后台线程处理日志
                queue_listener = QueueListener(log_queue, file_handler, respect_handler_level=True)
                queue_listener.start()

                queue_handler = QueueHandler(log_queue)
                queue_handler.setLevel(level)
                logger.addHandler(queue_handler)

                # 保存引用以便后续清理
                logger._queue_listener = queue_listener
            except Exception:
                # 降级到同步模式
                logger.addHandler(file_handler)
        else:
            logger.addHandler(file_handler)

    # 输出到控制台 (保持清爽，只显示消息)
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter('%(message)s'))
    logger.addHandler(console_handler)

    return logger


def shutdown_logger(logger: logging.Logger):
    """停止异步队列监听器并关闭所有 handler"""
    listener = getattr(logger, "_queue_listener", None)
    if listener is not None:
        listener.stop()
        logger._queue_listener = None
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)


def set_verbose(verbose: bool = True):
    """--verbose: 把全局 logger 及其 handler 调到 DEBUG"""
    level = logging.DEBUG if verbose else logging.INFO
    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)


# ============================================
# 确定性 JSON
# 同样的输入和种子必须得到逐字节相同的输出
# ============================================

def _to_builtin(value: Any) -> Any:
    if hasattr(value, "to_dict"):
        return _to_builtin(value.to_dict())
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_to_builtin(v) for v in value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "value") and hasattr(value, "name"):
        # Enum
        return value.value
    return value


def dumps_deterministic(data: Any, indent: int = 2) -> str:
    """键排序、无时间戳的 JSON 文本"""
    return json.dumps(_to_builtin(data), indent=indent, sort_keys=True, ensure_ascii=False) + "\n"


# ============================================
# 参数解析
# ============================================

def parse_sizes(text: str) -> Tuple[int, ...]:
    """'2,1,1,1' -> (2, 1, 1, 1)"""
    try:
        sizes = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError as exc:
        raise ValueError(f"无法解析参与方大小 '{text}'") from exc
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError(f"参与方大小必须为正整数: '{text}'")
    return sizes


def format_sizes(sizes: Sequence[int]) -> str:
    return ",".join(str(s) for s in sizes)


# 全局 Logger 实例
logger = setup_logger("PLCScope", async_file=LOG['async_file'])
