"""Regenerate oracle_values.json (run once; the JSON is then frozen)."""

import json
import random
from pathlib import Path

from bideptas.graph import gen_stacked_planar, is_connected
from bideptas.oracle import brute_force

PROBLEMS = ["vc", "fvs", "ds", "cvc", "cycle-packing", "max-leaf"]


def main():
    rows = []
    for seed in range(40):
        rng = random.Random(seed)
        n = rng.randint(3, 12)
        keep = rng.choice([1.0, 0.8])
        g = gen_stacked_planar(n, seed, keep=keep)
        t = rng.randint(0, g.m)
        values = {}
        for p in PROBLEMS:
            if p in ("cvc", "max-leaf") and not is_connected(g):
                continue
            values[p] = brute_force(p, g).objective
        values["partial-vc"] = brute_force("partial-vc", g, budget=t).objective
        rows.append({"seed": seed, "n": n, "keep": keep, "t": t, "m": g.m, "values": values})
    out = Path(__file__).with_name("oracle_values.json")
    out.write_text(json.dumps(rows, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
