#!/usr/bin/env python3
"""Solve exported LP models with HiGHS and print one optimal objective per file.

Usage: referee.py MODEL.lp [MODEL.lp ...]

Output lines are `<path> <objective>`; a model that HiGHS does not solve to
optimality prints `<path> ERROR <status>`. Exits with status 3 when the
highspy package is missing.
"""
import sys

try:
    import highspy
except ImportError:
    print("highspy is not installed (pip install highspy)", file=sys.stderr)
    sys.exit(3)


def solve(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    if h.readModel(path) != highspy.HighsStatus.kOk:
        return "ERROR read"
    h.run()
    status = h.getModelStatus()
    if status == highspy.HighsModelStatus.kModelEmpty:
        return "0"
    if status != highspy.HighsModelStatus.kOptimal:
        return f"ERROR {h.modelStatusToString(status)}"
    return str(round(h.getInfo().objective_function_value))


def main(paths):
    if not paths:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    for path in paths:
        print(path, solve(path))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
