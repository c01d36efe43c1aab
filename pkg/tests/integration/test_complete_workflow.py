#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
完整工作流测试
从命令行入口到输出文件，覆盖全部子命令
"""

import json
import sys
from pathlib import Path

import pytest

# 添加项目路径
project_root = Path(__file__).parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from src.core.main import EXIT_OK, main  # noqa: E402


class TestCompleteWorkflow:
    """完整工作流测试"""

    @pytest.fixture
    def outputs_dir(self, tmp_path):
        path = tmp_path / "outputs"
        path.mkdir()
        return path

    def test_local_then_slopes(self, outputs_dir, capsys):
        """局部检查通过后再做斜率判定"""
        local_file = outputs_dir / "local.json"
        assert main(["verify-local", "--p", "5", "--r", "2", "--out", str(local_file)]) == EXIT_OK
        local = json.loads(local_file.read_text(encoding="utf-8"))
        names = [row["check"] for row in local["results"]]
        assert "wedge_kernel" in names
        assert all(row["passed"] for row in local["results"])
        capsys.readouterr()

        assert main(["slopes", "--p", "5", "--g", "2", "--n", "1", "--r", "2", "--d", "3"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["results"][0]["gap"] == "4/5"

    def test_sweep_rows_file(self, outputs_dir, capsys):
        """扫描结果写成行格式，标准输出为摘要"""
        rows_file = outputs_dir / "sweep.csv"
        code = main([
            "sweep", "--pmax", "5", "--nmax", "2", "--rmax", "2", "--gmax", "3", "--dmax", "2",
            "--format", "rows", "--out", str(rows_file),
        ])
        assert code == EXIT_OK
        lines = rows_file.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("kind,p,n,r,g,d")
        verdict_rows = [line for line in lines[1:] if line.startswith("verdict,")]
        assert len(verdict_rows) == 3 * 2 * 2 * 2 * 5
        summary = json.loads(capsys.readouterr().out)
        assert summary["results"][0]["failures"] == 0

    def test_certificates_and_corollary(self, capsys):
        """证书与推论"""
        for p in (2, 3, 5):
            assert main(["cohom-cert", "--p", str(p), "--g", "3", "--n", "2"]) == EXIT_OK
            cert = json.loads(capsys.readouterr().out)["results"][0]
            assert cert["valid"] is True
            assert cert["deg_a"] == int(cert["threshold"])

        assert main(["corollary", "--pmax", "5", "--nmax", "3", "--gmax", "3", "--dmax", "2"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert all(row["destabilized"] for row in doc["results"])

    def test_lemma25_default_range(self, capsys):
        assert main(["lemma25"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["results"][-1] == {"p": 97, "holds": True}
