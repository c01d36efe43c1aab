"""配置文件

所有可调参数集中在 Settings 中，可通过环境变量（前缀 FROBWEDGE_）或 .env 覆盖。
"""
import sys
from functools import lru_cache
from pathlib import Path
from typing import Optional

from loguru import logger
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


# 项目根目录
BASE_DIR = Path(__file__).parent.parent

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"


class Settings(BaseSettings):
    """运行配置"""

    model_config = SettingsConfigDict(
        env_prefix="FROBWEDGE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    max_prime: int = Field(13, ge=2, description="verify-local 允许的最大特征")
    default_seed: int = Field(20240501, description="属性检查使用的默认随机种子")
    default_trunc: int = Field(2, ge=2, description="s 的截断阶 M")
    random_pairs: int = Field(100, ge=1, description="Leibniz 检查的随机样本对数")
    sweep_workers: int = Field(1, ge=1, description="sweep 并行进程数")
    log_level: str = "INFO"
    log_dir: Optional[Path] = None


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """返回缓存的配置实例"""
    return Settings()


def setup_logging(settings: Settings, level: Optional[str] = None) -> None:
    """
    配置 loguru

    标准输出只承载机器可读文档，日志一律写到 stderr（以及可选的日志文件）。
    """
    logger.remove()
    logger.add(sys.stderr, level=(level or settings.log_level).upper(), format=CONSOLE_FORMAT)
    if settings.log_dir is not None:
        settings.log_dir.mkdir(parents=True, exist_ok=True)
        logger.add(
            settings.log_dir / "frobwedge_{time:YYYY-MM-DD}.log",
            level="DEBUG",
            rotation="1 day",
            retention="30 days",
            format=FILE_FORMAT,
        )
    logger.debug(f"项目根目录: {BASE_DIR}")
