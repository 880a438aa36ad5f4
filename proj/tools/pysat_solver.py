#!/usr/bin/env python3
"""Competition-style front end for PySAT backends.

usage: pysat_solver.py [--backend NAME] FILE.cnf
Prints an `s ...` status line and, when satisfiable, `v ...` model lines.
"""
import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--backend", default="cadical153")
    ap.add_argument("cnf")
    args = ap.parse_args()
    formula = CNF(from_file=args.cnf)
    with Solver(name=args.backend, bootstrap_with=formula.clauses) as s:
        if s.solve():
            print("s SATISFIABLE")
            print("v " + " ".join(str(l) for l in s.get_model()) + " 0")
        else:
            print("s UNSATISFIABLE")
    sys.stdout.flush()


if __name__ == "__main__":
    main()
