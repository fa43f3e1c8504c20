"""
PLCScope - 稳定子态 PLC 等价与分解工具
配置文件
"""

# ============================================
# 基础路径配置
# ============================================
import os
import warnings
from dotenv import load_dotenv

# 加载 .env 文件
load_dotenv()

# 项目根目录
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# 数据目录 (轨道数据库、输入态)
DATA_DIR = os.path.join(BASE_DIR, "data")
ORBIT_DB_DIR = os.path.join(DATA_DIR, "orbits")

# 输出目录
OUTPUT_DIR = os.path.join(BASE_DIR, "output")
REPORTS_DIR = os.path.join(OUTPUT_DIR, "reports")

# 缓存与日志
CACHE_DIR = os.path.join(DATA_DIR, "cache")
LOG_DIR = os.path.join(BASE_DIR, "logs")

# 确保目录存在
for dir_path in [ORBIT_DB_DIR, REPORTS_DIR, CACHE_DIR]:
    os.makedirs(dir_path, exist_ok=True)


# ============================================
# 有限域
# ============================================
FIELD = {
    'default_d': 2,             # 默认量子比特
    'max_d': 251,               # 字节存储上限
}


# ============================================
# 搜索预算
# 超出预算时结论为 "inconclusive"，不会静默丢弃
# ============================================
BUDGET = {
    'ring_enumeration': 2 ** 20,     # 自伴自同态环 d^k 不超过此值时穷举
    'congruence_search': 2 ** 20,    # 合同方程解空间 d^k 不超过此值时穷举
    'graph_enumeration': 2 ** 22,    # EGS 图枚举上限 d^(n(n-1)/2)
    'group_enumeration': 2 ** 16,    # GL(n,d) 暴力枚举上限 d^(n^2)
}


# ============================================
# 随机搜索
# ============================================
SEARCH = {
    'seed': 0,                       # 默认种子，所有随机性从这里派生
    'ring_samples': 4096,            # 环过大时的随机采样次数
    'congruence_samples': 20000,     # 解空间过大时的随机采样次数
    'order_trials': 10,              # 分解顺序不变性探测的重复次数
}


# ============================================
# 并发配置
# ============================================
CONCURRENT = {
    'max_workers': os.cpu_count() or 4,   # 进程池大小
    'chunk_size': 4096,                   # 每个任务处理的图数量
    'progress_every': 100,                # 每完成多少个任务打印进度
}


# ============================================
# EGS 搜索
# ============================================
EGS = {
    'canonical_filter': True,        # 按保持参与方的顶点置换去重
    'drop_intra_party_edges': True,  # 参与方内部的边可由 LCE 删除
    'anchor_party': 0,               # GHZ 抽取条件中的锚定参与方
    'verify_representatives': True,  # 输出前复核代表元两两不等价
}


# ============================================
# 缓存配置
# ============================================
CACHE = {
    'enabled': True,                 # 是否缓存 EGS 分块结果
    'max_age_days': 30,              # 清理超过此天数的缓存
}


# ============================================
# 输出配置
# ============================================
OUTPUT = {
    'format': 'json',                # json / table
    'json_indent': 2,
}


# ============================================
# 日志配置
# ============================================
LOG = {
    'retention_days': 30,            # 日志保留天数
    'async_file': False,             # 是否异步写日志文件
}


def _validate_budgets():
    """检查预算配置合法性"""
    for key, value in BUDGET.items():
        if not isinstance(value, int) or value <= 0:
            warnings.warn(f"BUDGET['{key}'] 必须为正整数, 当前值 {value!r}")
    for key in ('ring_samples', 'congruence_samples', 'order_trials'):
        if SEARCH.get(key, 0) <= 0:
            warnings.warn(f"SEARCH['{key}'] 必须为正整数")


_validate_budgets()
