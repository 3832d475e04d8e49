"""Validate every file in cases/ against the job schema, run it and compare the verdict."""
import json
import pathlib
import subprocess
import sys

import jsonschema

cli, root = sys.argv[1], pathlib.Path(sys.argv[2])
job_schema = json.loads((root / "schema" / "gcg-job-1.schema.json").read_text())
report_schema = json.loads((root / "schema" / "gcg-report-1.schema.json").read_text())
codes = {"pass": 0, "fail": 1, "error": 2}
bad = 0
for path in sorted((root / "cases").glob("*.json")):
    try:
        doc = json.loads(path.read_text())
        jsonschema.validate(doc, job_schema)
        expect = doc.get("expect", "pass")
    except json.JSONDecodeError:
        expect = "error"
    proc = subprocess.run([cli, str(path)], capture_output=True, text=True, timeout=120)
    report = json.loads(proc.stdout)
    jsonschema.validate(report, report_schema)
    ok = report["verdict"] == expect and proc.returncode == codes[expect]
    print(f"{'ok ' if ok else 'BAD'} {path.name}: {report['verdict']} (exit {proc.returncode}, expected {expect})")
    bad += not ok
sys.exit(1 if bad else 0)
