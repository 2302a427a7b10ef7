#!/usr/bin/env python3
"""End-to-end checks of the rescheck command-line tool."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = Path(sys.argv[1]).resolve()
failures = []


def run(*args, expect=0):
    proc = subprocess.run([str(CLI), *args], capture_output=True, text=True)
    if proc.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {proc.returncode} (wanted {expect})\n"
                        f"stdout: {proc.stdout}\nstderr: {proc.stderr}")
    return proc


def check(cond, what):
    if not cond:
        failures.append(what)


def main():
    tmp = Path(tempfile.mkdtemp(prefix="rescheck-cli-"))
    plant = tmp / "plant.json"

    run("example", "-o", str(plant))
    corpus = json.loads(plant.read_text())
    check("phi1" in corpus["formulas"], "example corpus lists phi1")

    run("validate", "-f", str(plant))
    # Broken file: drop a transition, expect a named validation error, exit 3.
    broken = dict(corpus)
    broken["strategies"] = json.loads(json.dumps(corpus["strategies"]))
    del broken["strategies"]["sigma1"]["transitions"][0]
    broken_path = tmp / "broken.json"
    broken_path.write_text(json.dumps(broken))
    proc = run("validate", "-f", str(broken_path), expect=3)
    check("sigma1" in proc.stderr, "validation error names the strategy")

    # Usage errors exit 2.
    run("check", "--kind", "win", "--goal", "phi1", "--env", "E1", "-f", str(plant), expect=2)
    run("nonsense", expect=2)

    # The worked example, JSON mode, decisions as published.
    expectations = [
        (["--kind", "win", "--goal", "phi1", "--strategy", "sigma1"], True),
        (["--kind", "win", "--goal", "phi1", "--strategy", "sigma3"], False),
        (["--kind", "weak", "--goal", "not phi1", "--strategy", "sigma3"], True),
        (["--kind", "dom", "--goal", "phi3", "--strategy", "sigma3"], True),
        (["--kind", "dom", "--goal", "phi2", "--strategy", "sigma2"], False),
        (["--kind", "be", "--goal", "phi2", "--strategy", "sigma2"], True),
        (["--kind", "be", "--goal", "phi2", "--strategy", "sigma3"], True),
        (["--kind", "ipr-ant", "--goal", "not phi2", "--strategy", "sigma2"], False),
        (["--kind", "pr-ant", "--goal", "not phi3", "--strategy", "sigma3"], False),
        (["--kind", "ara", "--goal", "phi1", "--strategy", "sigma1"], True),
        (["--kind", "ara", "--goal", "phi1", "--strategy", "sigma3"], False),
        (["--kind", "pr-attr-vs-env", "--goal", "not phi2", "--strategy", "sigma2",
          "--env-strategy", "rain_evening_only"], True),
        (["--kind", "pr-attr", "--goal", "not phi2", "--strategy", "sigma2",
          "--history", "sigma2_rainy_evening"], True),
        (["--kind", "exists-weak", "--goal", "not phi1"], True),
    ]
    for args, want in expectations:
        proc = run("check", *args, "--env", "E1", "-f", str(plant), "--json")
        doc = json.loads(proc.stdout)
        check(doc["decision"] is want, f"{args}: decision {doc['decision']} wanted {want}")
        check("diagnostics" in doc, f"{args}: diagnostics present")

    # Negative verdicts carry witnesses that re-parse as histories.
    proc = run("check", "--kind", "win", "--goal", "phi1", "--env", "E1",
               "--strategy", "sigma3", "-f", str(plant), "--json")
    doc = json.loads(proc.stdout)
    check(doc["witness"]["type"] == "trace", "losing win check carries a trace witness")
    for step in doc["witness"]["trace"]:
        check(step["agent"]["w"] is False and step["env"]["r"] is False,
              "refuting play keeps the plant dry")

    # The oracle flag re-checks and agrees on the bundled corpus.
    proc = run("check", "--kind", "be", "--goal", "phi2", "--env", "E1", "--strategy", "sigma2",
               "-f", str(plant), "--json", "--oracle", "--horizon", "3")
    doc = json.loads(proc.stdout)
    check(doc.get("oracleConfirmed") is True, "oracle confirmation recorded")

    # DOT export is well-formed and marks accepting states.
    dot_path = tmp / "phi3.dot"
    run("automaton", "--formula", "phi3", "-f", str(plant), "--dot", str(dot_path))
    dot = dot_path.read_text()
    check("digraph" in dot and "doublecircle" in dot, "dot export shape")
    check(dot.count("{") == dot.count("}"), "dot braces balance")

    # check-all sweeps every pair; parallel evaluation matches sequential.
    seq = run("check-all", "-f", str(plant), "--env", "E1", "--json").stdout
    par = run("check-all", "-f", str(plant), "--env", "E1", "--json", "--jobs", "4").stdout
    check(json.loads(seq) == json.loads(par), "check-all parallel matches sequential")
    rows = {(r["kind"], r["goal"], r["strategy"]): r["decision"] for r in json.loads(seq)}
    check(rows[("be", "phi2", "sigma2")] is True, "check-all be phi2 sigma2")
    check(rows[("win", "phi1", "sigma3")] is False, "check-all win phi1 sigma3")

    # The equivalence suite agrees on everything it can enumerate.
    proc = run("oracle-suite", "-f", str(plant), "--env", "E1", "--budget", "20000")
    check("all agree" in proc.stdout, "oracle suite agrees")

    if failures:
        print("CLI TEST FAILURES:")
        for f in failures:
            print(" -", f)
        sys.exit(1)
    print("cli test ok")


if __name__ == "__main__":
    main()
