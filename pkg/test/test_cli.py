#!/usr/bin/env python3
"""
Command line jobs: exit codes, outputs and summary.json.
"""

import sys
import os
import json
import math
import tempfile

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from tools import qvolume_cli
from qvolume.objects.job import JobConfig


def _summary(out):
    with open(os.path.join(out, "summary.json"), "r", encoding="utf-8") as fh:
        return json.load(fh)


def test_describe_and_usage():
    """--describe lists figures; missing or bad arguments exit with 2"""
    print("🧪 Testing usage handling")
    print("=" * 50)
    assert qvolume_cli.main(["--describe"]) == 0
    assert qvolume_cli.main([]) == 2
    assert qvolume_cli.main(["bogus"]) == 2
    out = tempfile.mkdtemp()
    assert qvolume_cli.main(["moments", "--N", "2", "--q", "1/2", "--out", out, "--quiet"]) == 2
    assert qvolume_cli.main(["moments", "--N", "2", "--q", "3/2", "--c", "1", "--out", out]) == 2
    assert qvolume_cli.main(["zeros", "--N", "10", "--out", out]) == 2
    assert qvolume_cli.main(["op-check", "--N", "2", "--c", "1", "--out", out]) == 2
    print("✅ usage errors map to exit code 2")


def test_moments_job():
    out = tempfile.mkdtemp()
    status = qvolume_cli.main(["moments", "--N", "2", "--q", "3/2", "--out", out, "--quiet"])
    assert status == 0
    summary = _summary(out)
    assert summary["passed"] is True
    assert summary["job"]["q"] == "3/2"
    assert summary["model"]["q"] == {"num": "3", "den": "2"}
    assert abs(summary["model"]["c"] - 4 * math.log(1.5)) < 1e-9
    assert all(check["passed"] for check in summary["checks"])
    with open(os.path.join(out, "moments_N2.json"), "r", encoding="utf-8") as fh:
        table = json.load(fh)
    assert table["moments"]["q"] == {"num": "3", "den": "2"}
    print("✅ moments job")


def test_op_check_job():
    out = tempfile.mkdtemp()
    assert qvolume_cli.main(["op-check", "--N", "3", "--q", "2", "--out", out, "--quiet"]) == 0
    summary = _summary(out)
    names = [check["name"] for check in summary["checks"]]
    assert "polynomial routes agree coefficientwise" in names
    assert os.path.exists(os.path.join(out, "op_check_N3.csv"))
    print("✅ op-check job")


def test_cstar_job():
    out = tempfile.mkdtemp()
    assert qvolume_cli.main(["cstar", "--out", out, "--quiet"]) == 0
    with open(os.path.join(out, "cstar.json"), "r", encoding="utf-8") as fh:
        data = json.load(fh)
    assert abs(data["c_star"] - 3.32577) < 1e-3
    assert data["inflections_c3"] == 0 and data["inflections_c5"] == 1
    print("✅ cstar job")


def test_config_file_and_save():
    """A JSON job file under the flags, and --save-config round trip"""
    out = tempfile.mkdtemp()
    job_file = os.path.join(out, "job.json")
    with open(job_file, "w", encoding="utf-8") as fh:
        json.dump({"command": "moments", "N": 1, "q": "2", "options": {"n_max": 1}}, fh)
    saved = os.path.join(out, "saved.json")
    status = qvolume_cli.main(["--config", job_file, "--out", out, "--save-config", saved, "--quiet"])
    assert status == 0
    with open(saved, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    assert data["command"] == "moments" and data["N"] == 1
    assert "SAMPLER_CONFIG" in data["config"]
    job = JobConfig.from_dict({"command": "arctic", "c": "2.5"})
    assert job.c_value() == 2.5
    sample_job = JobConfig.from_dict({"command": "sample", "N": 10, "c": "2"})
    assert abs(sample_job.q_value() - math.exp(0.1)) < 1e-15
    assert not sample_job.model().is_exact
    print("✅ config files")


if __name__ == "__main__":
    test_describe_and_usage()
    test_moments_job()
    test_op_check_job()
    test_cstar_job()
    test_config_file_and_save()
