"""The config-file and command-line surface, driven in-process.

Writes a problem configuration, runs the `solve`, `verify`, `bound`, and
`homotopy` subcommands, and shows the emitted files. The same commands
work from a shell:

    fracsl solve --config problem.json --out results --emit-svg
    fracsl verify --config problem.json --out results
"""

import json
import pathlib

from fracsl.cli import main

config = {
    "alpha": 1.5,
    "beta": 0.5,
    "lambda": 0.1,
    "p_lap": 2.0,
    "p_coef": "sin(t)",
    "q_coef": "1",
    "impulses": [
        {"t": 1.0, "I": "0.1*y+0.05", "I_star": "0"},
        {"t": 2.0, "I": "0.1*y+0.05", "I_star": "0"},
    ],
    "mesh": {"nodes_per_subinterval": 128},
    "solver": {"tol": 1e-10, "nu": 2.0},
}
pathlib.Path("problem.json").write_text(json.dumps(config, indent=2), encoding="utf-8")

print("== solve ==")
code = main(["solve", "--config", "problem.json", "--out", "results", "--emit-svg"])
print(f"exit code {code}")

print("\n== verify (re-checks results/solution.csv) ==")
code = main(["verify", "--config", "problem.json", "--out", "results"])
print(f"exit code {code}")

print("\n== bound ==")
main(["bound", "--config", "problem.json", "--nu", "2.0"])

print("\n== homotopy ==")
main(["homotopy", "--config", "problem.json", "--out", "results", "--thetas", "0.25,0.5,0.75,1.0", "--nu", "2.0"])

print("\nemitted files:")
for name in sorted(p.name for p in pathlib.Path("results").iterdir()):
    print(f"  results/{name}")

report = json.loads(pathlib.Path("results/report.json").read_text())
print(f"\nreport: converged={report['converged']} iterations={report['iterations']}")
print(f"residuals: {report['residuals']}")
