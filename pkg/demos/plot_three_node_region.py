"""
Gain region of a three-agent leader network
===========================================

Agent 1 leads, agent 2 measures agent 1 and agent 3 measures both.  Only
the followers' gains matter.  With gains ``(0, delta, 1 - delta)`` the
nonzero spectrum of ``K L`` is ``{delta, 2 - 2 delta}``, so the sufficient
radius ``kappa0 / min(delta, 2 - 2 delta)`` is smallest where the two
eigenvalues meet, at ``delta = 2/3``.
"""

from pathlib import Path

import numpy as np

from passinet import double_integrator_agent, make_three_node_example, trace_boundary
from passinet.gains import nonzero_spectrum
from passinet.output import svg_plot, write_boundary_csv

agent = double_integrator_agent()
g = make_three_node_example()
tr = trace_boundary(agent, g, eps=0.05, samples=400)

best = tr.min_sample
print(tr.note)
print("minimum radius", best.radius, "at delta", best.delta)
print("gain ratio k2:k3 =", best.k_prime[1] / best.k_prime[2])
print("spectrum there", nonzero_spectrum(g, best.k_prime))

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
write_boundary_csv(out / "three_node_boundary.csv", tr)

pts = np.array([s.point for s in tr.samples])
(out / "three_node_boundary.svg").write_text(
    svg_plot([("boundary", pts[:, 1], pts[:, 2])], "sufficient gain region", "k_2", "k_3")
)
