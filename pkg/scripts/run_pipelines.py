#!/usr/bin/env python3
"""Run the three alphabet-reduction pipelines on their desk instances and
write the full reports to JSON files.

    python scripts/run_pipelines.py --out-dir reports --seed 0 --trials 100000
"""

import argparse
import pathlib

from ltcforge.algebra import DEFAULT_BUDGET, Field, VecSpace
from ltcforge.codes import Alphabet, repetition_code, vector_alphabet
from ltcforge.pipeline import general_reduction, linear_reduction, semilinear_reduction
from ltcforge.serialize import dumps, report_to_json
from ltcforge.testers import equality_tester, soundness_exact


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=pathlib.Path, default=pathlib.Path("reports"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=10**5)
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    lin_code = repetition_code(vector_alphabet(2, 1), 2)
    lin_tester = equality_tester(lin_code.alphabet, 2)
    lin_mu = soundness_exact(lin_tester, lin_code, args.budget).value

    plain_code = repetition_code(Alphabet.plain(2), 2)
    plain_tester = equality_tester(plain_code.alphabet, 2)
    plain_mu = soundness_exact(plain_tester, plain_code, args.budget).value

    runs = {
        "linear": lambda: linear_reduction(
            lin_code, lin_tester, lin_mu, VecSpace(Field(2), 2), 2,
            budget=args.budget, seed=args.seed, trials=args.trials,
        ),
        "general": lambda: general_reduction(
            plain_code, plain_tester, plain_mu, 3, 3,
            budget=args.budget, seed=args.seed, trials=args.trials,
        ),
        "semilinear": lambda: semilinear_reduction(
            lin_code, lin_tester, lin_mu,
            budget=args.budget, seed=args.seed, trials=args.trials,
        ),
    }
    for name, run in runs.items():
        report = run()
        path = args.out_dir / f"{name}.json"
        path.write_text(dumps(report_to_json(report)))
        print(f"{name}: overall={report.overall}")
        for key, verdict in sorted(report.verdicts.items()):
            print(f"  {key}: {verdict}")
        print(f"  -> {path}")


if __name__ == "__main__":
    main()
