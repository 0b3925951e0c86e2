"""Integrality of factorial ratios: polytope test against direct and step-function oracles."""
from collections import Counter

from hypalg.cli import _sweep_specs, ratio_report

rows = [ratio_report(s, 80) for s in _sweep_specs(8, 2, 3)]
tally = Counter((r["integral"], r["algebraic_regime"]) for r in rows)
print(f"{len(rows)} balanced ratios, oracles agree on all: {all(r['agree'] for r in rows)}")
for (integral, alg), n in sorted(tally.items()):
    print(f"  integral={integral!s:5} m=2n+1={alg!s:5} : {n}")
for r in [r for r in rows if not r["integral"]][:6]:
    a, b = r["spec"]["alpha"], r["spec"]["beta"]
    print(f"  {a};{b}  witness={r['witness']}  first non-integer term k={r['direct_first_failure']}")
