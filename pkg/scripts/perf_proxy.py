#!/usr/bin/env python3
"""Time CNF translation and the first satisfiability solve at scale.

Generates a synthetic model (default 15,000 symbols with a
depends/select/default mix), translates it to CNF, and runs one full
solve.  Prints the three phase timings.

Usage: python3 scripts/perf_proxy.py [--symbols N] [--seed N]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from kfix.abstraction import build_formula
from kfix.cnf import to_cnf
from kfix.kconfig import link, parse_text
from kfix.modelgen import perf_model_text
from kfix.sat import SatResult, Solver


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--symbols", type=int, default=15000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    t0 = time.time()
    text = perf_model_text(n_symbols=args.symbols, seed=args.seed)
    model = link(parse_text(text))
    t_parse = time.time() - t0

    t0 = time.time()
    pm = build_formula(model)
    cnf = to_cnf([f for _, f in pm.constraints], variable_order=pm.variables())
    t_cnf = time.time() - t0

    t0 = time.time()
    solver = Solver(cnf.num_vars)
    for clause in cnf.clauses:
        solver.add_clause(clause)
    result = solver.solve([])
    t_solve = time.time() - t0

    print(f"symbols        {len(model.symbols)}")
    print(f"variables      {cnf.num_vars}")
    print(f"clauses        {len(cnf.clauses)}")
    print(f"parse + link   {t_parse:6.2f} s")
    print(f"CNF translate  {t_cnf:6.2f} s")
    print(f"first solve    {t_solve:6.2f} s  ({result.name})")
    return 0 if result is SatResult.SAT else 1


if __name__ == "__main__":
    sys.exit(main())
