"""工具函数包"""
from src.utils.helpers import dump_document, format_fraction, write_text

__all__ = [
    "dump_document",
    "format_fraction",
    "write_text",
]
