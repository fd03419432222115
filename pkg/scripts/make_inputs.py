"""Write the example JSON inputs used in the README to ``data/``."""

import argparse
from pathlib import Path

from cocat import serialize as ser
from cocat.abelian import AbelianGroup
from cocat.groupoid import delooping, identity_map, indiscrete, make_map
from cocat.groups import cyclic, symmetric
from cocat.site import circle_site, point_site


def inputs():
    bc2 = delooping(cyclic(2))
    i2 = indiscrete(2)
    return {
        "c2.json": ser.group_to_json(cyclic(2)),
        "c3.json": ser.group_to_json(cyclic(3)),
        "s3.json": ser.group_to_json(symmetric(3)),
        "z.json": ser.abelian_to_json(AbelianGroup((0,))),
        "bc2.json": ser.groupoid_to_json(bc2),
        "bc3.json": ser.groupoid_to_json(delooping(cyclic(3))),
        "i2.json": ser.groupoid_to_json(i2),
        "point.json": ser.groupoid_to_json(delooping(cyclic(1))),
        "id-on-bc2.json": ser.groupoid_map_to_json(identity_map(bc2)),
        "bc2-to-point.json": ser.groupoid_map_to_json(
            make_map(bc2, delooping(cyclic(1)), [0], [0, 0])),
        "i2-to-bc2.json": ser.groupoid_map_to_json(make_map(i2, bc2, [0, 0], [0, 1, 1, 0])),
        "circle.json": ser.site_to_json(circle_site()),
        "point-site.json": ser.site_to_json(point_site()),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Path(__file__).resolve().parent.parent / "data", type=Path)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, data in inputs().items():
        (args.out / name).write_text(ser.dumps(data), encoding="utf-8")
        print(args.out / name)


if __name__ == "__main__":
    main()
