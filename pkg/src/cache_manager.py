#!/usr/bin/env python
"""
EGS 分块结果缓存
按 (参与方配置, d, 预算, 过滤开关) 的哈希分目录保存每个图编号区间的筛选结果，
中断后重跑时已完成的区间直接读盘
"""
import hashlib
import json
import os
import shutil
import sys
import time
from typing import Dict, List, Optional, Tuple

import pandas as pd

# 添加项目根目录到路径
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, PROJECT_ROOT)

from config.settings import CACHE, CACHE_DIR
from src.utils import dumps_deterministic, logger

EGS_CACHE_DIR = os.path.join(CACHE_DIR, "egs")

# 分块结果的列
CHUNK_COLUMNS = ["key", "edges", "status", "reason"]


class CacheManager:
    """
    EGS 分块缓存管理器

    目录结构:
        <cache_dir>/<config_key>/meta.json
        <cache_dir>/<config_key>/chunk_<start>_<stop>.parquet
        <cache_dir>/<config_key>/chunk_<start>_<stop>.json   (计数)
    """

    def __init__(self, cache_dir: str = EGS_CACHE_DIR, enabled: Optional[bool] = None):
        self.cache_dir = cache_dir
        self.enabled = CACHE['enabled'] if enabled is None else enabled
        self._hits = 0
        self._misses = 0

    @staticmethod
    def config_key(params: dict) -> str:
        """参数字典的稳定哈希"""
        digest = hashlib.sha1(dumps_deterministic(params).encode("utf-8")).hexdigest()
        return digest[:16]

    def _key_dir(self, key: str) -> str:
        return os.path.join(self.cache_dir, key)

    def _chunk_stem(self, key: str, start: int, stop: int) -> str:
        return os.path.join(self._key_dir(key), f"chunk_{start:012d}_{stop:012d}")

    def save_meta(self, key: str, params: dict):
        if not self.enabled:
            return
        os.makedirs(self._key_dir(key), exist_ok=True)
        with open(os.path.join(self._key_dir(key), "meta.json"), "w", encoding="utf-8") as f:
            f.write(dumps_deterministic(params))

    def get_chunk(self, key: str, start: int, stop: int) -> Optional[Tuple[pd.DataFrame, Dict[str, int]]]:
        """
        读取一个区间的缓存

        Returns:
            (结果表, 计数) 或 None
        """
        if not self.enabled:
            return None
        stem = self._chunk_stem(key, start, stop)
        if not (os.path.exists(stem + ".parquet") and os.path.exists(stem + ".json")):
            self._misses += 1
            return None
        try:
            frame = pd.read_parquet(stem + ".parquet")
            with open(stem + ".json", "r", encoding="utf-8") as f:
                counts = json.load(f)
        except Exception as e:
            logger.warning(f"分块缓存读取失败 {stem}: {e}")
            self._misses += 1
            return None
        self._hits += 1
        return frame, {k: int(v) for k, v in counts.items()}

    def save_chunk(self, key: str, start: int, stop: int, frame: pd.DataFrame, counts: Dict[str, int]):
        """先写计数再写结果表，读的时候两者都在才算命中"""
        if not self.enabled:
            return
        stem = self._chunk_stem(key, start, stop)
        try:
            os.makedirs(self._key_dir(key), exist_ok=True)
            with open(stem + ".json", "w", encoding="utf-8") as f:
                f.write(dumps_deterministic(counts))
            frame.reindex(columns=CHUNK_COLUMNS).to_parquet(stem + ".parquet", index=False)
        except Exception as e:
            logger.warning(f"分块缓存保存失败 {stem}: {e}")

    def list_keys(self) -> List[str]:
        if not os.path.isdir(self.cache_dir):
            return []
        return sorted(k for k in os.listdir(self.cache_dir) if os.path.isdir(self._key_dir(k)))

    def clear(self, key: Optional[str] = None) -> int:
        """删除一个或全部配置的缓存，返回删除的目录数"""
        keys = [key] if key else self.list_keys()
        removed = 0
        for k in keys:
            path = self._key_dir(k)
            if os.path.isdir(path):
                shutil.rmtree(path, ignore_errors=True)
                removed += 1
        return removed

    def cleanup_old_cache(self, max_days: Optional[int] = None) -> int:
        """清理超过 max_days 天没有更新的配置目录"""
        max_days = CACHE['max_age_days'] if max_days is None else max_days
        now = time.time()
        max_age = max_days * 24 * 3600
        removed = 0
        for key in self.list_keys():
            path = self._key_dir(key)
            try:
                newest = max(
                    (os.path.getmtime(os.path.join(path, f)) for f in os.listdir(path)),
                    default=os.path.getmtime(path),
                )
                if now - newest > max_age:
                    shutil.rmtree(path, ignore_errors=True)
                    removed += 1
            except OSError:
                pass  # 忽略并发删除错误
        if removed > 0:
            logger.info(f"🧹 清理了 {removed} 个过期 EGS 缓存目录")
        return removed

    def get_cache_stats(self) -> dict:
        """缓存统计信息"""
        keys = self.list_keys()
        chunks = 0
        total_size = 0
        for key in keys:
            path = self._key_dir(key)
            for f in os.listdir(path):
                fpath = os.path.join(path, f)
                if os.path.isfile(fpath):
                    total_size += os.path.getsize(fpath)
                    if f.endswith(".parquet"):
                        chunks += 1
        return {
            'enabled': self.enabled,
            'cache_dir': self.cache_dir,
            'configurations': len(keys),
            'chunks': chunks,
            'cache_size_mb': round(total_size / 1024 / 1024, 2),
            'hits': self._hits,
            'misses': self._misses,
        }


# 全局缓存管理器实例
cache_manager = CacheManager()
