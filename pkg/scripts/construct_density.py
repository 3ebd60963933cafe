"""Density of the free constructions as n grows."""

import argparse
import time

from besk.search import construct


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 120, 200])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--start", choices=("grid", "random"), default="grid")
    args = ap.parse_args()
    print("n,packing_edges,deleted,edges,density_ratio,free,seconds")
    for n in args.sizes:
        t = time.perf_counter()
        rep = construct(n, args.r, args.k, args.seed, start=args.start)
        print(
            f"{n},{rep.packing_edges},{rep.deleted},{len(rep.graph.edges)},"
            f"{float(rep.density_ratio):.4f},{rep.freeness.free},{time.perf_counter() - t:.1f}",
            flush=True,
        )


if __name__ == "__main__":
    main()
