"""The approximate-matching pipeline, stage by stage, with its value
ledger checked against the exact oracle where the oracle is affordable.

Run:  python3 demos/matching_demo.py
"""

from localround import (
    RoundLedger,
    approx_matching,
    exact_max_matching,
    strip_isolated,
)
from localround.generators import gnp


def small_graph_with_oracle():
    g = strip_isolated(gnp(22, 0.3, seed=5))
    res = approx_matching(g, seed=1)
    m_star = len(exact_max_matching(g))
    print(f"small graph: n={g.n}, m={g.m}, exact maximum matching = {m_star}")
    print(f"  fractional value:   {res.frac_value:.3f}  (>= {m_star / 5:.3f})")
    print(f"  low-degree portion: {res.good_value:.3f}  (>= 0.8 * fractional)")
    print(f"  re-rounded value:   {res.intra_value:.3f}  (>= {m_star / 40000:.5f})")
    print(f"  final matching:     {len(res.matching)}  (>= {m_star / 100000:.5f})")
    print(f"  achieved ratio:     {len(res.matching) / m_star:.2f}")


def larger_graph():
    g = strip_isolated(gnp(400, 0.02, seed=11))
    ledger = RoundLedger()
    res = approx_matching(g, seed=2, ledger=ledger)
    print(f"\nlarger graph: n={g.n}, m={g.m}")
    print(f"  greedy lower bound on the maximum: {res.m_star_lower_bound}")
    print(f"  final matching:                    {len(res.matching)}")
    print(f"  simulated rounds:                  {ledger.total}")
    for row in ledger.report()["rows"]:
        print(f"    {row['label']:20s} radius<={row['radius_max']:4d} rounds={row['rounds']}")


if __name__ == "__main__":
    small_graph_with_oracle()
    larger_graph()
