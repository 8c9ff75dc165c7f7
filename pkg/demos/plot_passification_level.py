"""
Passification level of a double integrator
==========================================

A double integrator with a PD-shaped output has ``W(s) = (s + 1)/s**2``.
The numerator ``s + 1`` is Hurwitz with degree ``n - 1``, so output feedback
``u = -kappa y`` renders the agent strictly passive for every ``kappa``
above ``kappa0 = sup_w -Re[1/W(iw)]``.
"""

from pathlib import Path

import numpy as np

from passinet import double_integrator_agent, passify_report
from passinet.output import svg_plot

agent = double_integrator_agent()
rep = passify_report(agent)
print("numerator  ", rep.numerator.coef)
print("denominator", rep.denominator.coef)
print("kappa0     ", rep.kappa0)

# -Re[1/W(iw)] = w^2 / (1 + w^2) approaches 1 from below
w = np.logspace(-2, 2, 400)
s = 1j * w
curve = -np.real(rep.denominator(s) / rep.numerator(s))

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
(out / "passification_level.svg").write_text(
    svg_plot([("-Re 1/W(iw)", np.log10(w), curve), ("kappa0", np.log10(w), np.full_like(w, rep.kappa0))],
             "passification level", "log10 w", "")
)
