"""Hunt for Simpson-reversal witnesses for several association parameters.

For each requested kind, runs the seeded random search and reports the
witness table together with the variable whose collapse flips the sign.
DI is expected to come back empty however long you search.

    python3 scripts/find_witnesses.py --kinds lor,ex,di --k 3 --trials 100000
"""

import argparse
import json
import sys

from bintab import paradox_search, resolve_kind, simpson_scan, table_to_dict


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kinds", default="lor,ex,di")
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="write witnesses as JSON")
    args = parser.parse_args(argv)

    found = {}
    for name in args.kinds.split(","):
        kind = resolve_kind(name.strip())
        witness = paradox_search(kind, args.k, args.trials, args.seed)
        if witness is None:
            print(f"{kind.name}: no witness in {args.trials} trials")
            continue
        reports = [r for r in simpson_scan(witness, [kind]) if r.paradox]
        variables = [r.variable for r in reports]
        print(f"{kind.name}: witness found, reversal over variable(s) {variables}")
        for r in reports:
            print(f"  layers {r.values[0]:+.4g} / {r.values[1]:+.4g}"
                  f" -> collapsed {r.values[2]:+.4g}")
        found[kind.name] = {
            "table": table_to_dict(witness),
            "variables": variables,
        }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fp:
            json.dump(found, fp, indent=2)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
