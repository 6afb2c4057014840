"""Generate a flat zeros file (one ordinate per line) with mpmath.

Usage: python scripts/make_zeros_table.py COUNT OUT [--dps D]

With --dps <= 15 the float context of mpmath is used (Rosser-block
search plus Riemann-Siegel in double precision, about 1e-9 absolute
accuracy near t = 75000); otherwise the multiprecision context.
Progress is flushed every 1000 zeros so a partial file is usable.
"""
import argparse
import sys
import time

import mpmath


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("count", type=int)
    p.add_argument("out")
    p.add_argument("--dps", type=int, default=15)
    p.add_argument("--decimals", type=int, default=9)
    p.add_argument("--start", type=int, default=1)
    args = p.parse_args(argv)

    if args.dps <= 15:
        ctx = mpmath.fp
    else:
        ctx = mpmath.mp
        ctx.dps = args.dps
    mode = "a" if args.start > 1 else "w"
    t0 = time.time()
    with open(args.out, mode) as fh:
        if mode == "w":
            fh.write(f"# first {args.count} nontrivial zeta zero ordinates\n")
            fh.write(f"# generator: mpmath {mpmath.__version__} zetazero, dps={args.dps}\n")
            fh.write(f"# decimals: {args.decimals}\n")
        for k in range(args.start, args.count + 1):
            t = ctx.zetazero(k).imag
            fh.write(mpmath.nstr(mpmath.mpf(t), args.decimals + 6, strip_zeros=False,
                                 min_fixed=-1, max_fixed=10**6)
                     if ctx is mpmath.mp else f"{t:.{args.decimals}f}")
            fh.write("\n")
            if k % 1000 == 0:
                fh.flush()
                print(k, t, f"{time.time() - t0:.0f}s", file=sys.stderr, flush=True)


if __name__ == "__main__":
    main()
