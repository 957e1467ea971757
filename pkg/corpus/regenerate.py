"""Regenerate the golden files by running the command line on each example.

    python3 corpus/regenerate.py [name ...]

Each file stores the CLI arguments and the expected JSON output with the
timing-dependent ``stats`` block removed.
"""

import io
import json
import sys
from pathlib import Path

from fpure.cli import run

HERE = Path(__file__).resolve().parent

EXAMPLE2_U = ("x1^3*x2*x3+x1^3*x2*x4+x1^2*x3*x4*x5+x1*x2*x3*x4*x5"
              "+x1*x2*x4^2*x5+x2^2*x4^2*x5+x3*x4^2*x5^2+x4^3*x5^2")

CASES = {
    "example1": ["enumerate", "--field", "2", "--vars", "x,y", "--u", "x*y", "--e", "1"],
    "example2": ["enumerate", "--field", "2", "--vars", "x1,x2,x3,x4,x5", "--u", EXAMPLE2_U, "--e", "1"],
    "example3": ["enumerate", "--field", "5", "--vars", "x,y,z", "--u", "(x^4+y^4+z^4)^4", "--e", "1"],
    "example4": ["enumerate", "--field", "2", "--vars", "x1,x2,x3,y1,y2,y3",
                 "--u", "(x1*y2+x2*y1)*(x1*y3+x3*y1)", "--e", "1"],
}


def golden(args):
    out = io.StringIO()
    code = run(args + ["--format", "json"], out=out)
    if code != 0:
        raise SystemExit(f"fpure exited with {code}")
    data = json.loads(out.getvalue())
    data.pop("stats")
    return {"args": args, "expected": data}


def main(names):
    for name in names or CASES:
        path = HERE / f"{name}.json"
        path.write_text(json.dumps(golden(CASES[name]), indent=1) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main(sys.argv[1:])
