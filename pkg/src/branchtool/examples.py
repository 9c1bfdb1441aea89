"""Small benchmark networks used by the test-suite and handy for demos.

Each constant is edge-list text ready for :func:`branchtool.parse_edge_list`;
the functions build parametric families.
"""

from __future__ import annotations

from branchtool.graph import MultiGraph, parse_edge_list

# Two nodes: 1 <- 2 and a self-loop on 2; walk counts at node 1 are the
# Fibonacci numbers and the branching ratio is the golden ratio.
FIBONACCI_CIRCUIT = "1 2\n2 1\n2 2\n"

# Six nodes in one SCC with cycle lengths {3, 6}: counts double every third
# step, ratios oscillate with period 3, and delta is the cube root of 2.
SIX_NODE_PERIOD3 = "1 2\n2 3\n2 6\n3 4\n4 5\n5 3\n5 6\n6 1\n"

# Three-node feedforward cascade: two self-loops upstream of nothing, one
# node with no inputs at all; deltas are (2, 1, 0).
THREE_NODE_CASCADE = "1 1 2\n2 2\n3 1\n3 2\n"

# A two-node SCC (golden ratio) feeding a double self-loop: deltas are
# (phi, phi, 2).
UPSTREAM_TWO_SCC = "1 1\n1 2\n2 1\n2 3\n3 3 2\n"

# A double self-loop feeding a Fibonacci pair: delta is 2 everywhere.
UPSTREAM_DOMINANT_SOURCE = "1 1 2\n1 3\n2 2\n2 3\n3 2\n"

# Two directed 4-cycles joined by a single bridge edge: counts at the target
# cycle grow linearly with slope 1/4 per residue class mod 4.
LINKED_FOUR_CYCLES = (
    "s1 s2\ns2 s3\ns3 s4\ns4 s1\n"
    "t1 t2\nt2 t3\nt3 t4\nt4 t1\n"
    "s1 t1\n"
)


def alpha_beta_chain(alpha: int, beta: int) -> MultiGraph:
    """Two self-loop nodes (multiplicity ``alpha`` each) joined by ``beta``
    parallel edges from node 2 to node 1; growth at node 1 is
    ``(1 + beta*ell/alpha) * alpha**ell``."""
    text = f"1 1 {alpha}\n2 1 {beta}\n2 2 {alpha}\n"
    return parse_edge_list(text)


def polycycle(multiplicities: tuple[int, ...]) -> MultiGraph:
    """Directed cycle where the edge into node ``i`` carries multiplicity
    ``m_i``; the branching ratio is the n-th root of the product.

    Labels are "1".."n" in index order (node i+1 feeds node i, cyclically).
    """
    n = len(multiplicities)
    if n < 1 or any(m < 1 for m in multiplicities):
        raise ValueError("multiplicities must be positive")
    labels = tuple(str(i) for i in range(1, n + 1))
    raw = {}
    for i in range(1, n + 1):
        src = i % n  # node i+1 (index i), wrapping to node 1
        dst = i - 1
        raw[(src, dst)] = raw.get((src, dst), 0) + multiplicities[i - 1]
    edges = tuple((s, d, m) for (s, d), m in sorted(raw.items()))
    return MultiGraph(labels=labels, edges=edges)


def simple_cycle(n: int) -> MultiGraph:
    """Plain directed n-cycle: every walk count is exactly 1."""
    if n < 1:
        raise ValueError("cycle length must be positive")
    lines = [f"{i} {i % n + 1}" for i in range(1, n + 1)]
    return parse_edge_list("\n".join(lines) + "\n")
