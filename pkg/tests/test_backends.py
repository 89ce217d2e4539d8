import io
import os
import subprocess
import sys
from pathlib import Path

import pytest

from forestpat import kernels

ROOT = Path(__file__).resolve().parents[1]


def test_pure_fallback_selected_by_environment():
    env = dict(os.environ, FORESTPAT_PURE="1")
    code = ("import forestpat; from forestpat.patterns import PatternSet as P; "
            "from forestpat.enumeration import count_avoiding as c; "
            "print(forestpat.BACKEND, c(6, P.parse('213')))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "9783"]


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled extension not built")
def test_benchmark_quick_runs():
    sys.path.insert(0, str(ROOT / "benchmarks"))
    try:
        import bench_kernels
    finally:
        sys.path.pop(0)
    buf = io.StringIO()
    rows = bench_kernels.run(quick=True, repeat=1, out=buf)
    assert rows and "speedup" in buf.getvalue()
