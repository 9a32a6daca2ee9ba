#!/usr/bin/env python3
"""CLI contract checks: exit codes, config handling, JSON reports and
byte-identical scan determinism. Run as: test_cli.py <path-to-qline-binary>.
"""

import json
import subprocess
import sys
import tempfile
import os

FAILURES = []


def check(name, cond, detail=""):
    status = "ok" if cond else "FAIL"
    print(f"[{status}] {name}" + (f" -- {detail}" if detail and not cond else ""))
    if not cond:
        FAILURES.append(name)


def run(cli, *args):
    return subprocess.run([cli, *args], capture_output=True, text=True)


def main():
    cli = sys.argv[1]
    tmp = tempfile.mkdtemp(prefix="qline_cli_")

    generic = ["--c", "1.1,-0.3,2.2,0.4,-1.5,0.8", "--d", "4.4,1.1,0.6"]

    # smooth instance: exit 0 and a schema-1 report
    report_path = os.path.join(tmp, "check.json")
    r = run(cli, "check", *generic, "--json", report_path)
    check("check smooth exit 0", r.returncode == 0, r.stderr)
    doc = json.load(open(report_path))
    check("check schema", doc["schema"] == 1 and doc["command"] == "check")
    check("check verdicts in report", doc["report"]["real"]["verdict"] == "smooth")

    # equal coefficients: exit 2 with a witness
    r = run(cli, "check", "--c", "2,2,2,2,2,2", "--d", "5,2,1", "--json",
            os.path.join(tmp, "eq.json"))
    check("check equal-c exit 2", r.returncode == 2, f"rc={r.returncode}")
    doc = json.load(open(os.path.join(tmp, "eq.json")))
    check("check witness attached", len(doc["report"]["witnesses"]) >= 1)

    # boundary d1 = 2|d2|: exit 2, condition (a) reason
    r = run(cli, "check", "--c", "1.1,-0.3,2.2,0.4,-1.5,0.8", "--d", "4,2,1")
    check("check boundary exit 2", r.returncode == 2, f"rc={r.returncode}")
    check("condition (a) named", "condition (a)" in r.stdout)

    # b = 0 common root: the inequalities are undefined, exit 3
    r = run(cli, "check", "--c", "1,1,1,2,3,4", "--d", "5,2,5")
    check("check inconclusive exit 3", r.returncode == 3, f"rc={r.returncode}")

    # config file path with tolerance keys
    cfg = os.path.join(tmp, "params.cfg")
    with open(cfg, "w") as f:
        f.write("# certified corpus instance\n")
        f.write("c1 = 1.1\nc2 = -0.3\nc3 = 2.2\nc4 = 0.4\nc5 = -1.5\nc6 = 0.8\n")
        f.write("d1 = 4.4\nd2 = 1.1\nd3 = 0.6\nseed = 5\ntol_mu = 1e-8\n")
    r = run(cli, "line", "--config", cfg, "--json", os.path.join(tmp, "line.json"))
    check("line from config exit 0", r.returncode == 0, r.stderr)
    doc = json.load(open(os.path.join(tmp, "line.json")))
    check("line report has lines", len(doc["lines"]) >= 1)
    check("line residuals pass", all(l["max_residual_scaled"] <= 1e-8 for l in doc["lines"]))
    check("both mu formulations reported",
          all("radical_form_residual" in l["mu_equation"] and
              "determinant_form_residual" in l["mu_equation"] for l in doc["lines"]))

    # malformed configs: exit 64
    bad = os.path.join(tmp, "bad.cfg")
    with open(bad, "w") as f:
        f.write("c1 = 1\n")  # missing keys
    r = run(cli, "check", "--config", bad)
    check("missing keys exit 64", r.returncode == 64, f"rc={r.returncode}")
    with open(bad, "w") as f:
        f.write("c1=1\nc2=1\nc3=1\nc4=1\nc5=1\nc6=1\nd1=5\nd2=2\nd3=1\nbogus=3\n")
    r = run(cli, "check", "--config", bad)
    check("unknown key exit 64", r.returncode == 64, f"rc={r.returncode}")
    r = run(cli, "check")
    check("no params exit 64", r.returncode == 64, f"rc={r.returncode}")

    # certify: exit 0 iff some line is certified; no-line instance exits 2
    r = run(cli, "certify", *generic)
    check("certify exit 0", r.returncode == 0, r.stderr)
    r = run(cli, "certify", "--c", "2,2,2,2,2,2", "--d", "5,2,1")
    check("certify no-line exit 2", r.returncode == 2, f"rc={r.returncode}")

    # line warns but proceeds on a non-smooth instance
    r = run(cli, "line", "--c", "2,2,2,2,2,2", "--d", "5,2,1")
    check("line degenerate exit 2", r.returncode == 2, f"rc={r.returncode}")
    check("line warns when not smooth", "warning" in r.stdout)

    # scan determinism: two sequential runs produce byte-identical reports
    s1, s2 = os.path.join(tmp, "s1.json"), os.path.join(tmp, "s2.json")
    args = ["scan", "--seed", "77", "--budget", "40", "--max-results", "2", "--json"]
    r = run(cli, *args, s1)
    check("scan exit 0", r.returncode == 0, r.stderr)
    run(cli, *args, s2)
    b1, b2 = open(s1, "rb").read(), open(s2, "rb").read()
    check("scan byte-identical", b1 == b2)
    doc = json.load(open(s1))
    check("scan found re-parse", len(doc["found"]) == 2)

    # intersect on a certified instance
    it = os.path.join(tmp, "it.json")
    r = run(cli, "intersect", *generic, "--bases", "3", "--json", it)
    check("intersect exit 0", r.returncode == 0, r.stderr)
    doc = json.load(open(it))
    check("intersect coverage", doc["report"]["coverage"] == 3)
    check("intersect labels base direction",
          all(any(d["is_base_direction"] for d in s["directions"])
              for s in doc["report"]["samples"]))

    print(f"\n{len(FAILURES)} failure(s)")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
