"""How the bounded cocycle category grows with the middle-object bound.

For each pair (X, Y) and bound N this prints the number of cocycles, the
number of components and whether phi is a bijection onto [X, Y].  Too small
a bound can split a class: the zig-zag joining two conjugate maps may need a
bigger middle than either map.  The sweep shows where the count settles.
"""

import argparse
import csv
import sys
import time

from cocat.cocycle import check_bijection, enumerate_cocycles, homotopy_classes
from cocat.corpus import named_groupoid
from cocat.errors import BoundTooSmall


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x", nargs="*", default=["*", "BC2", "I2"])
    ap.add_argument("--y", nargs="*", default=["BC2", "BC3", "BS3"])
    ap.add_argument("--max-bound", type=int, default=4)
    args = ap.parse_args()
    out = csv.writer(sys.stdout)
    out.writerow(["x", "y", "bound", "cocycles", "components", "classes", "bijection",
                  "seconds"])
    for xn in args.x:
        x = named_groupoid(xn)
        for yn in args.y:
            y = named_groupoid(yn)
            classes = len(homotopy_classes(x, y))
            for n in range(1, args.max_bound + 1):
                t0 = time.perf_counter()
                try:
                    cat = enumerate_cocycles(x, y, n)
                    r = check_bijection(x, y, n)
                except BoundTooSmall:
                    continue
                out.writerow([xn, yn, n, cat.n_objects, cat.n_components, classes,
                              r.bijection, f"{time.perf_counter() - t0:.2f}"])


if __name__ == "__main__":
    main()
