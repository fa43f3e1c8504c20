# 使配置目录成为 Python 包
from .settings import *
