"""Self-check suites and the command line front end."""

import json

from infogeo import cli
from infogeo.verify import run_suite

for check in run_suite("all"):
    flag = "ok " if check.passed else "BAD"
    print(f"{flag} {check.suite:9s} {check.name:32s} error {check.error:.2e}  tol {check.tol:.0e}")

# every subcommand returns one JSON document
for argv in (
    ["curvature", "scalar", "--n", "2"],
    ["entropy", "renyi", "--n", "1", "--p", "2", "--q", "2"],
    ["distance", "--case", "special-normal",
     "--p0", '{"D": [[1, 0], [0, 1]]}', "--p1", '{"D": [[7.38905609893065, 0], [0, 1]]}'],
    ["distance", "--case", "alpha0", "--p0", '{"D": [[2]], "u": [0]}', "--p1", '{"D": [[2]], "u": [1.5]}'],
):
    print("$ infogeo", " ".join(argv))
    print(json.dumps(json.loads(cli.dispatch(argv).to_json())["payload"]))
