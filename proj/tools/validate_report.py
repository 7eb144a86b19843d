#!/usr/bin/env python3
"""Run gr1report on each spec and validate the JSON against the schema."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    tool, schema_path, *specs = sys.argv[1:]
    validator = jsonschema.Draft202012Validator(json.loads(Path(schema_path).read_text()))
    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        for spec in specs:
            out = Path(tmp) / (Path(spec).name + ".json")
            run = subprocess.run([tool, spec, "--json", str(out), "--html", str(out) + ".html", "--timings"])
            if run.returncode != 0:
                print(f"FAIL {spec}: exit {run.returncode}")
                failed += 1
                continue
            errors = list(validator.iter_errors(json.loads(out.read_text())))
            for e in errors:
                print(f"FAIL {spec}: {'/'.join(map(str, e.path))}: {e.message}")
            failed += bool(errors)
            if not errors:
                print(f"ok   {spec}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
