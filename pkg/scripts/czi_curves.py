"""Write czi and Z curves for every catalog space into a directory of CSVs.

    python scripts/czi_curves.py out/ --grid 51
"""
import argparse
import pathlib
import re

from geolab.cli import curve_rows, render_curve
from geolab.optimize import OptConfig
from geolab.spaces import DEFAULT_CATALOG, format_space_spec


def slug(space):
    return re.sub(r"[^a-z0-9]+", "_", format_space_spec(space).lower()).strip("_")[:40]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir")
    ap.add_argument("--grid", type=int, default=51)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = OptConfig(seed=args.seed)
    for i, space in enumerate(DEFAULT_CATALOG):
        for name in ("czi", "z"):
            path = out / f"{i:02d}_{slug(space)}_{name}.csv"
            path.write_text(render_curve(space, name, curve_rows(space, name, args.grid, cfg)),
                            encoding="utf-8")
            print(path)


if __name__ == "__main__":
    main()
