"""报告文档模型"""
from typing import Any, Dict, List

from pydantic import BaseModel, Field

from src.utils.helpers import dump_document

SCHEMA_VERSION = "1"


class ReportDocument(BaseModel):
    """命令输出文档；failures 为空当且仅当退出码为 0"""
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    results: List[Dict[str, Any]] = Field(default_factory=list)
    failures: List[Dict[str, Any]] = Field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()

    def to_json(self) -> str:
        return dump_document(self.to_dict())

    def summary(self) -> "ReportDocument":
        """只保留计数的摘要文档"""
        return ReportDocument(
            command=self.command,
            parameters=self.parameters,
            results=[{"rows": len(self.results), "failures": len(self.failures)}],
            failures=self.failures,
            schema_version=self.schema_version,
        )
