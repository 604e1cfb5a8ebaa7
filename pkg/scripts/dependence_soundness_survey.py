#!/usr/bin/env python3
"""Tabulate exact dependence-tester soundness for small instances.

The reduction pipelines inherit their constants from the soundness of the
inner code's dependence tester; this prints the exact values next to the
closed-form floors for every instance whose word space fits the budget.

    python scripts/dependence_soundness_survey.py --budget 67108864
"""

import argparse
from fractions import Fraction

from ltcforge.algebra import DEFAULT_BUDGET, Field, VecSpace
from ltcforge.codes import Alphabet
from ltcforge.constructions import (
    dependence_tester,
    generalized_hadamard,
    generalized_long_code,
)
from ltcforge.errors import CapacityError
from ltcforge.testers import soundness_exact


def survey_hadamard(budget):
    print("generalized Hadamard, 2-dependence tester")
    print(f"{'p':>3} {'dimV':>5} {'dimD':>5} {'n':>5} {'exact':>10} {'floor 1/n^2':>12}")
    for p in (2, 3):
        for dimv in (1, 2):
            for dimd in (1, 2, 3):
                try:
                    fam, code = generalized_hadamard(
                        VecSpace(Field(p), dimv), VecSpace(Field(p), dimd), budget
                    )
                    rep = soundness_exact(dependence_tester(fam, 2, budget), code, budget)
                except CapacityError:
                    continue
                floor = Fraction(1, code.n**2)
                print(f"{p:>3} {dimv:>5} {dimd:>5} {code.n:>5} {str(rep.value):>10} {str(floor):>12}")


def survey_long(budget):
    print("generalized long code, 2-dependence tester")
    print(f"{'|S|':>4} {'|D|':>4} {'n':>5} {'exact':>10} {'floor 1/n^2':>12}")
    for s in (2, 3):
        for d in (3, 4):
            try:
                fam, code = generalized_long_code(s, Alphabet.plain(d), budget)
                rep = soundness_exact(dependence_tester(fam, 2, budget), code, budget)
            except CapacityError:
                continue
            floor = Fraction(1, code.n**2)
            print(f"{s:>4} {d:>4} {code.n:>5} {str(rep.value):>10} {str(floor):>12}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    args = parser.parse_args()
    survey_hadamard(args.budget)
    print()
    survey_long(args.budget)


if __name__ == "__main__":
    main()
