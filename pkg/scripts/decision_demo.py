#!/usr/bin/env python3
"""Sweep the plant growth rate against the pentagon channel and print the
verdict each regime reaches, then demonstrate the one-sided behaviour on a
stream channel whose critical entry never resolves.
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from certcap.channel import hovering_stream, noiseless, typewriter
from certcap.classify import Regime, classify
from certcap.linalg import as_matrix
from certcap.plant import Plant

BUDGET = 20_000


def plant_for(a: Fraction, disturbed: bool) -> Plant:
    return Plant(as_matrix([[a]]), c=as_matrix([[Fraction(1)]]),
                 b=as_matrix([[Fraction(1)]]),
                 disturbance_bound=Fraction(1, 10) if disturbed else None)


def main() -> int:
    pentagon = typewriter(5)
    growths = [Fraction(x, 4) for x in (4, 5, 6, 8, 9, 10, 11, 12, 13)]
    regimes = ("se-nofb", "se-fb", "stab-fb", "weak")
    print("pentagon channel: C0 >= 1.1609..., C0FB = C = log2(5/2) = 1.3219...")
    print(f"{'growth a':>9} | " + " | ".join(f"{r:^13}" for r in regimes))
    print("-" * (12 + 16 * len(regimes)))
    for a in growths:
        cells = []
        for kind in regimes:
            verdict = classify(plant_for(a, kind != "weak"), pentagon,
                               Regime(kind), BUDGET)
            cells.append(f"{verdict.outcome:^13}")
        print(f"{str(a):>9} | " + " | ".join(cells))

    print()
    print("stream channel with a never-resolving entry (true channel is the")
    print("noiseless binary one): only the unsolvable direction can ever fire")
    hover = hovering_stream(noiseless(2), [(0, 1)])
    for a in (Fraction(3, 2), Fraction(3)):
        verdict = classify(plant_for(a, True), hover, Regime("se-fb"), 500)
        print(f"  a = {a}: se-fb -> {verdict.outcome} "
              f"(steps used: {verdict.steps})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
