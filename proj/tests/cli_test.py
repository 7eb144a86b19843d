#!/usr/bin/env python3
"""Exit codes and default output paths of the gr1report command."""
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

tool, specs = sys.argv[1], Path(sys.argv[2])
failures = []


def expect(args, code, label):
    run = subprocess.run([tool, *args], capture_output=True, text=True)
    if run.returncode != code:
        failures.append(f"{label}: exit {run.returncode}, wanted {code}\n{run.stderr}")
    return run


with tempfile.TemporaryDirectory() as tmp:
    spec = Path(tmp) / "mutex.gr1"
    shutil.copy(specs / "mutex.gr1", spec)
    expect([str(spec), "--analyses", "semantics"], 0, "defaults")
    for suffix in (".report.json", ".report.html"):
        if not Path(str(spec) + suffix).exists():
            failures.append(f"missing default output {suffix}")

    dot = Path(tmp) / "win.dot"
    expect([str(spec), "--analyses", "semantics", "--dump-bdd", str(dot)], 0, "dump")
    if not dot.exists() or not dot.read_text().startswith("digraph"):
        failures.append("no DOT dump")

    bad = Path(tmp) / "bad.gr1"
    bad.write_text("[INPUT]\na\n[ENV_TRANS]\n(a\n")
    run = expect([str(bad)], 1, "parse error")
    if ":4:" not in run.stderr:
        failures.append(f"parse error without location: {run.stderr}")
    expect([str(Path(tmp) / "missing.gr1")], 1, "missing file")
    expect([str(spec), "--analyses", "positions,bogus"], 1, "unknown analysis")
    expect([str(spec), "--node-budget", "50"], 2, "exhausted baseline")

for f in failures:
    print("FAIL", f)
print("ok" if not failures else f"{len(failures)} failures")
sys.exit(1 if failures else 0)
