"""扁平行格式渲染（CSV）"""
import json
from typing import Any, Dict, List

import pandas as pd


class TableRenderer:
    """表格渲染器 - 把结果记录渲染为逗号分隔的行"""

    def render_from_dict(self, data: List[Dict[str, Any]]) -> str:
        """
        从字典列表渲染表格

        列按首次出现的顺序排列；缺失单元格留空，嵌套值序列化为 JSON。

        Args:
            data: 字典列表
        Returns:
            CSV 文本
        """
        headers: List[str] = []
        for item in data:
            for key in item:
                if key not in headers:
                    headers.append(key)
        rows = [{h: self._cell(item.get(h, "")) for h in headers} for item in data]
        frame = pd.DataFrame(rows, columns=headers, dtype=object)
        return frame.to_csv(index=False, lineterminator="\n")

    @staticmethod
    def _cell(value: Any) -> Any:
        if isinstance(value, (dict, list, tuple)):
            return json.dumps(value, ensure_ascii=False, sort_keys=True)
        return value
