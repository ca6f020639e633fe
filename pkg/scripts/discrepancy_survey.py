"""Print the report-only claims on the catalog as a table.

Shows, per space, the measured quantities behind each documented mismatch
(Hilbert curve, profile factor, James and H~/C_NJ bounds).
"""
import argparse

from geolab.spaces import DEFAULT_CATALOG, format_space_spec
from geolab.verify import CLAIMS, REPORT, run_claims


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ids", default=",".join(k for k, c in CLAIMS.items() if c.kind == REPORT))
    args = ap.parse_args()
    reports = run_claims(list(DEFAULT_CATALOG), args.ids.split(","))
    for r in reports:
        vals = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in r.measured.items())
        print(f"{r.claim_id:4s} {format_space_spec(r.space)[:28]:28s} {r.verdict:20s} {vals}")


if __name__ == "__main__":
    main()
