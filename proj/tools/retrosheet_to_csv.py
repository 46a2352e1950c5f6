#!/usr/bin/env python3
"""Convert a Retrosheet game log (e.g. GL2012.TXT) to the per-team-game CSV
read by `pythag fit`: two rows per game, one from each side."""

import argparse
import csv
import sys

# Zero-based columns in the Retrosheet game-log layout.
DATE, VISITOR, HOME, VISITOR_SCORE, HOME_SCORE = 0, 3, 6, 9, 10


def convert(src, dst):
    out = csv.writer(dst, lineterminator="\n")
    out.writerow(["date", "team_id", "opponent_id", "runs_scored", "runs_allowed"])
    for row in csv.reader(src):
        if len(row) <= HOME_SCORE:
            continue
        d = row[DATE]
        date = f"{d[:4]}-{d[4:6]}-{d[6:8]}"
        vis, home = row[VISITOR], row[HOME]
        vs, hs = row[VISITOR_SCORE], row[HOME_SCORE]
        out.writerow([date, vis, home, vs, hs])
        out.writerow([date, home, vis, hs, vs])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("gamelog", help="Retrosheet game log, e.g. GL2012.TXT")
    ap.add_argument("-o", "--out", help="output CSV (default stdout)")
    args = ap.parse_args()
    with open(args.gamelog, newline="", encoding="latin-1") as src:
        if args.out:
            with open(args.out, "w", newline="") as dst:
                convert(src, dst)
        else:
            convert(src, sys.stdout)


if __name__ == "__main__":
    main()
