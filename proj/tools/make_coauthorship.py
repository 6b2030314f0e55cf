#!/usr/bin/env python3
"""Write the synthetic 20-year coauthorship fixture (deterministic for a given seed)."""

import argparse
import csv
import random
from collections import defaultdict
from pathlib import Path

FIRST = ["Ada", "Bo", "Cai", "Dana", "Eli", "Fay", "Gus", "Hana", "Ivo", "Jun", "Kai", "Lea",
         "Milo", "Nia", "Otto", "Pia", "Quin", "Rae", "Sol", "Tove", "Uma", "Vik", "Wen", "Yara"]
LAST = ["Arden", "Brandt", "Corvo", "Dahl", "Eskil", "Fenn", "Grau", "Holm", "Ilves", "Jarl",
        "Kessel", "Lund", "Moro", "Nyx", "Orr", "Pell", "Quist", "Roth", "Sand", "Thal"]
GROUPS = ["vis", "ml", "db", "hci", "net", "bio"]


def build(seed, years, people):
    rng = random.Random(seed)
    names = [f"{f} {l}" for l in LAST for f in FIRST]
    rng.shuffle(names)
    researchers = []
    for i in range(people):
        start = rng.randint(0, years - 4) if i >= people // 4 else 0
        end = min(years - 1, start + rng.randint(6, years))
        researchers.append({
            "id": f"r{i:03d}",
            "name": names[i],
            "group": GROUPS[i % len(GROUPS)],
            "start": start,
            "end": end,
            "activity": rng.uniform(0.5, 2.0),
        })
    # Group structure shifts: vis and hci merge from year 8, ml splits into two teams from year 13.
    def team(r, t):
        g = r["group"]
        if g == "hci" and t >= 8:
            return "vis"
        if g == "ml" and t >= 13:
            return "ml-a" if int(r["id"][1:]) % 2 else "ml-b"
        return g

    edges = defaultdict(int)
    papers = defaultdict(int)
    for t in range(years):
        active = [r for r in researchers if r["start"] <= t <= r["end"]]
        teams = defaultdict(list)
        for r in active:
            teams[team(r, t)].append(r)
        for members in sorted(teams.values(), key=lambda m: m[0]["id"]):
            count = max(1, int(len(members) * rng.uniform(0.6, 1.2)))
            for _ in range(count):
                size = min(len(members), rng.choice([2, 2, 3, 3, 4]))
                if size < 2:
                    continue
                weights = [r["activity"] for r in members]
                authors = set()
                while len(authors) < size:
                    authors.add(rng.choices(range(len(members)), weights)[0])
                authors = [members[a] for a in sorted(authors)]
                if rng.random() < 0.12:
                    outsider = rng.choice(active)
                    if outsider not in authors:
                        authors.append(outsider)
                for a in authors:
                    papers[(t, a["id"])] += 1
                for i, a in enumerate(authors):
                    for b in authors[i + 1:]:
                        s, d = sorted((a["id"], b["id"]))
                        edges[(t, s, d)] += 1
    return researchers, edges, papers


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2020)
    ap.add_argument("--years", type=int, default=20)
    ap.add_argument("--people", type=int, default=96)
    ap.add_argument("--first-year", type=int, default=2001)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    args = ap.parse_args()

    researchers, edges, papers = build(args.seed, args.years, args.people)
    by_id = {r["id"]: r for r in researchers}
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "coauthorship20.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["time", "source", "target", "weight"])
        for (t, s, d), n in sorted(edges.items()):
            w.writerow([args.first_year + t, s, d, n])
    with open(args.out / "coauthorship20.nodes.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["time", "id", "name", "papers", "cat:affiliation"])
        for (t, rid), n in sorted(papers.items()):
            r = by_id[rid]
            w.writerow([args.first_year + t, rid, r["name"], n, r["group"]])


if __name__ == "__main__":
    main()
