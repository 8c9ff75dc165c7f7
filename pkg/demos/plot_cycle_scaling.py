"""
Consensus threshold on directed cycles
======================================

Double integrators on a unit directed N-cycle reach consensus exactly when
the common gain exceeds ``cot(pi/N)**2 / 2``.  The bisection on the
eigenvalue test reproduces the closed form, and the threshold grows like
``N**2 / (2 pi**2)``.
"""

from pathlib import Path

import numpy as np

from passinet import cycle_threshold, double_integrator_agent, make_cycle, threshold_bisection
from passinet.gains import asymptote_ratio
from passinet.output import svg_plot

agent = double_integrator_agent()
for n in (3, 4, 6, 10, 20):
    k = threshold_bisection(agent, make_cycle(n), 0.01, 100.0)
    print(f"N={n:3d}  bisection {k:.8f}  closed form {cycle_threshold(n):.8f}")

ns = np.arange(3, 201)
ratio = [asymptote_ratio(n) for n in ns]
print("ratio at N=200:", ratio[-1])

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
(out / "cycle_scaling.svg").write_text(
    svg_plot([("threshold / asymptote", ns, ratio)], "cycle threshold scaling", "N", "ratio")
)
