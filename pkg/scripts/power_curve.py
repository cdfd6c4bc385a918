"""Decision probability of a positive DI sign as the sample size grows.

Prints one CSV row per N comparing the exact binomial tail, the normal
approximation, and (optionally) a Monte Carlo estimate.

    python3 scripts/power_curve.py --p 0.525 --N 100,200,500,1000,2000 --mc 20000
"""

import argparse
import sys

from bintab import (
    DI,
    prob_di_positive_exact,
    prob_di_positive_normal,
    simulate_decisions,
    table_with_even_mass,
)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--p", type=float, default=0.525, help="even-parity mass")
    parser.add_argument("--N", default="100,200,500,1000,2000",
                        help="comma-separated sample sizes")
    parser.add_argument("--mc", type=int, default=0,
                        help="Monte Carlo replications per N (0 = skip)")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)

    table = table_with_even_mass(2, args.p)
    print("N,p,exact,normal,empirical")
    for n_str in args.N.split(","):
        N = int(n_str)
        exact = prob_di_positive_exact(N, args.p)
        normal = prob_di_positive_normal(N, args.p)
        empirical = ""
        if args.mc:
            freqs = simulate_decisions(table, N, DI, args.mc, args.seed)
            empirical = repr(freqs["positive"])
        print(f"{N},{args.p!r},{exact!r},{normal!r},{empirical}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
