"""
圆柱面刚性分析系统配置文件
"""

import logging
import sys
from pathlib import Path


class Config:
    """系统配置类"""

    # 随机采样配置
    DEFAULT_SEED = 0
    RANDOM_BITS = 32  # 随机有理参数 t、z 的位宽
    MAX_RESAMPLES = 3  # 两次采样秩不一致时的最大重采样次数

    # 数值配置
    DEFAULT_SCALAR = "rational"  # rational / quadratic / f64
    SCALAR_MODES = ("rational", "quadratic", "f64")
    TOLERANCE = 1e-9  # 浮点秩: 奇异值 > TOLERANCE * sigma_max
    QUADRATIC_D = 2  # 附录数据只需要 sqrt(2)

    # 规模上限
    CIRCUIT_CAP = 24  # 回路枚举/耳分解的边数上限
    SEPARATION_CAP = 64  # 3-边分离枚举的边数上限
    BRUTE_FORCE_MAX_VERTICES = 7  # 定义式蛮力对照的顶点上限

    # 构造与判定参数
    SPLIT_TRIES = 200  # 随机回路生成时单步分裂的最大尝试次数
    STRESS_TRIES = 16  # 非回路图上随机余核组合的次数
    REDUCE_MAX_STEPS = 10000

    # 语料交叉验证
    CORPUS_COUNT = 200
    CORPUS_N_MAX = 8
    CORPUS_N_MIN = 2

    # 输出配置
    OUTPUT_DIR = "output"
    FORMAT_VERSION = 1  # JSON 输出格式版本

    # 日志配置
    LOG_LEVEL = "WARNING"
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    @classmethod
    def create_dirs(cls):
        """创建必要的目录"""
        dirs = [cls.OUTPUT_DIR]
        for dir_path in dirs:
            Path(dir_path).mkdir(exist_ok=True)

    @classmethod
    def setup_logging(cls, level: str = None):
        """初始化日志，输出到标准错误，避免污染 JSON 输出"""
        logging.basicConfig(
            level=getattr(logging, (level or cls.LOG_LEVEL).upper(), logging.WARNING),
            format=cls.LOG_FORMAT,
            stream=sys.stderr,
        )
