"""版本信息"""

__version__ = "0.1.0"
__author__ = "rffkim contributors"
__description__ = "二维随机场 Ising / FK-Ising 模型的精确枚举、采样与全变差估计工具"
