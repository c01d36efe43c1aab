"""数据模型定义"""
from src.models.report_models import SCHEMA_VERSION, ReportDocument

__all__ = ["SCHEMA_VERSION", "ReportDocument"]
