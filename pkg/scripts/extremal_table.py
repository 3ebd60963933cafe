"""Exact f(n; s, k) values for small n, printed as CSV."""

import argparse

from besk.search import CSV_HEADER, search_extremal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--s", type=int, default=4)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=7)
    ap.add_argument("--budget", type=int)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    print(CSV_HEADER)
    for n in range(args.r, args.n_max + 1):
        rec = search_extremal(n, args.r, args.s, args.k, budget=args.budget, threads=args.threads)
        print(rec.csv_row(), flush=True)


if __name__ == "__main__":
    main()
