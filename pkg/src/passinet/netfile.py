"""Network description files and built-in experiment presets.

A network file is a JSON object::

    {
      "agent": {"A": [[...]], "B": [[...]], "C": [[...]], "g": [...]},
      "graph": {"n": 3, "arcs": [[2, 1, 1.0], [3, 2, 1.0]]},
      "gains": [...],                       # optional, one per agent
      "x0": [...],                          # optional, N*n numbers or N lists of n
      "sim": {"t_end": 25, "dt": 0.001, "tol": 0.01}   # optional
    }

Vertex indices are 1-based.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import digraph as dg
from .errors import PassinetError
from .passify import AgentModel, double_integrator_agent
from .simkit import DEFAULT_DT, DEFAULT_T_END, DEFAULT_TOL, NetworkSpec, random_initial_state

__all__ = [
    "NetworkFile",
    "ParseError",
    "parse_network_file",
    "load_network_file",
    "dump_network_file",
    "default_seed",
    "preset",
    "PRESETS",
]

SEED_ENV = "PASSINET_SEED"
DEFAULT_SEED = 42
SIM_KEYS = ("t_end", "dt", "tol")


class ParseError(PassinetError, ValueError):
    pass


def default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise ParseError(f"{SEED_ENV}={raw!r} is not an integer") from exc


@dataclass(frozen=True, eq=False)
class NetworkFile:
    agent: AgentModel
    graph: dg.WeightedDigraph
    gains: np.ndarray = None
    x0: np.ndarray = None
    sim: dict = field(default_factory=dict)
    name: str = ""

    def sim_value(self, key):
        defaults = {"t_end": DEFAULT_T_END, "dt": DEFAULT_DT, "tol": DEFAULT_TOL}
        return float(self.sim.get(key, defaults[key]))

    def resolve_gains(self, k=1.0):
        if self.gains is not None:
            return np.asarray(self.gains, dtype=float)
        return np.full(self.graph.n, float(k))

    def to_spec(self, k=1.0, seed=None):
        """NetworkSpec; missing gains become ``k`` everywhere, missing x0 is seeded."""
        x0 = self.x0
        if x0 is None:
            seed = default_seed() if seed is None else seed
            x0 = random_initial_state(self.graph.n, self.agent.n, seed)
        return NetworkSpec(self.agent, self.graph, self.resolve_gains(k), x0)

    def to_dict(self):
        out = {"agent": self.agent.to_dict(), "graph": self.graph.to_dict()}
        if self.gains is not None:
            out["gains"] = np.asarray(self.gains, dtype=float).tolist()
        if self.x0 is not None:
            out["x0"] = np.asarray(self.x0, dtype=float).tolist()
        if self.sim:
            out["sim"] = dict(self.sim)
        return out

    @classmethod
    def from_spec(cls, spec, sim=None):
        return cls(spec.agent, spec.graph, np.array(spec.gains), np.array(spec.x0), dict(sim or {}))


def _field(data, key, where):
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in data:
        raise ParseError(f"{where}: missing field '{key}'")
    return data[key]


def _numbers(value, where):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"field '{where}': {exc}") from exc
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"field '{where}': non-finite value")
    return arr


def network_file_from_dict(data, name=""):
    agent_block = _field(data, "agent", "network file")
    try:
        agent = AgentModel(
            *(_numbers(_field(agent_block, k, "agent"), f"agent.{k}") for k in ("A", "B", "C", "g"))
        )
    except ParseError:
        raise
    except PassinetError as exc:
        raise ParseError(f"field 'agent': {exc}") from exc
    graph_block = _field(data, "graph", "network file")
    try:
        graph = dg.WeightedDigraph(
            int(_field(graph_block, "n", "graph")),
            tuple(tuple(a) for a in graph_block.get("arcs", [])),
        )
    except ParseError:
        raise
    except (PassinetError, TypeError, ValueError) as exc:
        raise ParseError(f"field 'graph': {exc}") from exc

    gains = None
    if data.get("gains") is not None:
        gains = _numbers(data["gains"], "gains").ravel()
        if gains.size != graph.n:
            raise ParseError(f"field 'gains': expected {graph.n} values, got {gains.size}")
        try:
            dg.gain_matrix(graph, gains)
        except PassinetError as exc:
            raise ParseError(f"field 'gains': {exc}") from exc
    x0 = None
    if data.get("x0") is not None:
        x0 = _numbers(data["x0"], "x0").ravel()
        if x0.size != graph.n * agent.n:
            raise ParseError(f"field 'x0': expected {graph.n * agent.n} values, got {x0.size}")
    sim = {}
    if data.get("sim") is not None:
        for k, v in dict(data["sim"]).items():
            if k not in SIM_KEYS:
                raise ParseError(f"field 'sim.{k}': unknown key (allowed: {', '.join(SIM_KEYS)})")
            try:
                sim[k] = float(v)
            except (TypeError, ValueError) as exc:
                raise ParseError(f"field 'sim.{k}': {exc}") from exc
    return NetworkFile(agent, graph, gains, x0, sim, name)


def parse_network_file(text, name="<string>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{name}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return network_file_from_dict(data, name)


def load_network_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_network_file(text, str(path))


def dump_network_file(nf, path=None):
    text = json.dumps(nf.to_dict(), indent=2) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# three-agent leader example: common magnitude and the two gain cases
THREE_NODE_K = 1.5
THREE_NODE_X0 = [2.0, -2.0, -7.0, 3.0, 1.0, -3.0]


def three_node(case=2, k=THREE_NODE_K):
    """Leader example; case 1 equal follower gains 0.527 k, case 2 gains (2/3, 1/3) k.

    The leader has no neighbours so its gain is irrelevant and stored as 0.
    """
    if case == 1:
        gains = [0.0, 0.527 * k, 0.527 * k]
    elif case == 2:
        gains = [0.0, 2.0 / 3.0 * k, 1.0 / 3.0 * k]
    else:
        raise ParseError(f"three_node case must be 1 or 2, got {case}")
    return NetworkFile(
        double_integrator_agent(),
        dg.make_three_node_example(),
        np.array(gains),
        np.array(THREE_NODE_X0),
        {"t_end": 25.0, "dt": 1e-3, "tol": 1e-2},
        f"three_node case {case}",
    )


def cycle(n=10, k=None):
    gains = None if k is None else np.full(n, float(k))
    return NetworkFile(
        double_integrator_agent(), dg.make_cycle(n), gains, None,
        {"t_end": 25.0, "dt": 1e-3, "tol": 1e-2}, f"cycle n={n}",
    )


def dodeca(nu=5.5, mu=1.0):
    """Twenty agents; gain ``nu`` on the leading 10-cycle, ``mu`` on the outer ring."""
    gains = np.array([nu] * 10 + [mu] * 10, dtype=float)
    return NetworkFile(
        double_integrator_agent(), dg.make_dodeca_example(), gains, None,
        {"t_end": 60.0, "dt": 1e-3, "tol": 1e-2}, f"dodeca nu={nu} mu={mu}",
    )


PRESETS = {"three_node": three_node, "cycle": cycle, "dodeca": dodeca}


def preset(name, **kwargs):
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ParseError(f"unknown preset {name!r} (choose from {', '.join(PRESETS)})") from None
    return factory(**{k: v for k, v in kwargs.items() if v is not None})
