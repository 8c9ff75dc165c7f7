"""
Twenty agents with a leading ten-cycle
======================================

Agents 1..10 form a directed cycle and are the only ones whose states
shape the consensus trajectory.  Agents 11..20 follow.  The cycle needs a
gain above ``cot(pi/10)**2 / 2 ~ 4.74``; the followers get away with much
less.  Equal gains of 4 on every agent stay below the cycle bound and the
disagreement grows.
"""

from pathlib import Path

from passinet import netfile, simkit
from passinet.gains import exact_consensus_test
from passinet.output import svg_plot

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
series = []
for nu, mu in ((5.5, 1.0), (4.0, 4.0)):
    spec = netfile.dodeca(nu, mu).to_spec()
    verdict = exact_consensus_test(spec.agent, spec.graph, spec.gains)
    tr = simkit.simulate(spec, t_end=60.0, dt=1e-3, decimate=100)
    print(f"nu={nu} mu={mu}: e(60)={tr.e[-1]:.3e}  exact test {verdict.achieved}"
          f"  (max Re {verdict.max_real_part:.4f})")
    series.append((f"nu={nu} mu={mu}", tr.t, tr.e))

(out / "dodeca_disagreement.svg").write_text(
    svg_plot(series, "disagreement e(t)", "t [s]", "e", logy=True)
)
