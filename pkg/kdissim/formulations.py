"""Integer formulations for choosing K s-t paths with little arc sharing.

Every model routes K unit flows x_k_a (binary, path k outer, arc a inner) and
adds per-arc counting variables for its objective:

    MAO     z_k_l_a, v_a    total pairwise overlaps
    MRA     y_a             arcs used by two or more paths
    MRO     y_a, u_a        occurrences of repeated arcs
    MAR     w_a, u_a        uses of an arc beyond the first
    MINMAX  r               largest number of paths on one arc

Indices in names are 0-based; columns are declared in the order above.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb

from kdissim.model import MilpModel, Relation, Sense
from kdissim.network import DirectedNetwork, PathSeq, flow_imbalance
from kdissim.shortest import hop_distances

log = logging.getLogger(__name__)

DECODE_TOL = 1e-6


class SolutionError(RuntimeError):
    """Raised when a claimed integer solution cannot be turned into K s-t flows."""


class FormulationTag(str, Enum):
    MAO = "MAO"
    MRA = "MRA"
    MRO = "MRO"
    MAR = "MAR"
    MINMAX = "MINMAX"


_OBJECTIVES = {
    FormulationTag.MAO: "OL",
    FormulationTag.MRA: "repeated",
    FormulationTag.MRO: "RO",
    FormulationTag.MAR: "Rep",
    FormulationTag.MINMAX: "max-presence",
}
_BOUNDABLE = (FormulationTag.MRA, FormulationTag.MRO, FormulationTag.MAR)


@dataclass(frozen=True)
class FormulationKind:
    """A formulation and its variant switches.

    drop_redundant: MAO without z <= x, MRA without y <= sum x.
    aggregate_linking: MAR with one sum x <= K w row per arc.
    presence_bound: MRA/MRO/MAR with sum x <= R* on every arc.
    full: MRO/MAR with the constraints the reduced models leave out.
    """

    tag: FormulationTag
    drop_redundant: bool = False
    aggregate_linking: bool = False
    presence_bound: int | None = None
    full: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", FormulationTag(self.tag))
        if self.drop_redundant and self.tag not in (FormulationTag.MAO, FormulationTag.MRA):
            raise ValueError(f"drop_redundant applies to MAO and MRA only, not {self.tag.value}")
        if self.aggregate_linking and self.tag is not FormulationTag.MAR:
            raise ValueError(f"aggregate_linking applies to MAR only, not {self.tag.value}")
        if self.full and self.tag not in (FormulationTag.MRO, FormulationTag.MAR):
            raise ValueError(f"full applies to MRO and MAR only, not {self.tag.value}")
        if self.presence_bound is not None:
            if self.tag not in _BOUNDABLE:
                raise ValueError(f"presence_bound applies to MRA, MRO and MAR, not {self.tag.value}")
            if self.presence_bound < 1:
                raise ValueError(f"Presence bound must be at least 1, got {self.presence_bound}")

    @property
    def label(self) -> str:
        return self.tag.value + ("A" if self.presence_bound is not None else "")


@dataclass(frozen=True)
class RawSolution:
    """Per-path arc lists read off x; may contain loops."""

    arc_sets: tuple[tuple[int, ...], ...]
    objective: float


def objective_name(tag: FormulationTag) -> str:
    """Name of the metric a formulation's objective counts (see metrics.OBJECTIVES)."""
    return _OBJECTIVES[FormulationTag(tag)]


# Method names accepted on the command line and in experiment files.
_METHODS = {
    "mao": FormulationKind(FormulationTag.MAO),
    "mao-reduced": FormulationKind(FormulationTag.MAO, drop_redundant=True),
    "mra": FormulationKind(FormulationTag.MRA),
    "mra-reduced": FormulationKind(FormulationTag.MRA, drop_redundant=True),
    "mro": FormulationKind(FormulationTag.MRO),
    "mro-full": FormulationKind(FormulationTag.MRO, full=True),
    "mar": FormulationKind(FormulationTag.MAR, aggregate_linking=True),
    "mar-split": FormulationKind(FormulationTag.MAR),
    "mar-full": FormulationKind(FormulationTag.MAR, full=True),
    "minmax": FormulationKind(FormulationTag.MINMAX),
}
_BOUNDED_METHODS = {"mraa": "mra", "mroa": "mro", "mara": "mar"}


def method_names() -> list[str]:
    return [*_METHODS, *_BOUNDED_METHODS]


def parse_method(name: str) -> tuple[FormulationKind, bool]:
    """Map a method name to its formulation; the flag asks for a presence bound R*."""
    key = name.lower()
    if key in _BOUNDED_METHODS:
        return _METHODS[_BOUNDED_METHODS[key]], True
    if key in _METHODS:
        return _METHODS[key], False
    raise ValueError(f"Unknown method '{name}'. Available: {', '.join(method_names())}, ipm")


def _check_k(tag: FormulationTag, K: int) -> None:
    low = 1 if tag is FormulationTag.MINMAX else 2
    if K < low:
        raise ValueError(f"{tag.value} needs K >= {low}, got {K}")


def _routing(net: DirectedNetwork, K: int, tag: FormulationTag) -> tuple[MilpModel, list[list[int]]]:
    """Model with the x columns and flow conservation for every path and node."""
    model = MilpModel(f"{tag.value.lower()}_k{K}")
    x = [[model.add_binary(f"x_{k}_{a}") for a in range(net.m)] for k in range(K)]
    for k in range(K):
        for i in net.nodes():
            coefs = {x[k][a]: 1.0 for a in net.out_arcs(i)}
            for a in net.in_arcs(i):
                coefs[x[k][a]] = -1.0
            rhs = 1.0 if i == net.s else -1.0 if i == net.t else 0.0
            model.add_constraint(f"flow_{k}_{i}", coefs, Relation.EQ, rhs)
    return model, x


def _usage(x: list[list[int]], a: int) -> dict[int, float]:
    return {row[a]: 1.0 for row in x}


def build_mao(net: DirectedNetwork, K: int, drop_redundant: bool = False) -> MilpModel:
    _check_k(FormulationTag.MAO, K)
    model, x = _routing(net, K, FormulationTag.MAO)
    pairs = list(combinations(range(K), 2))
    z = {(k, l): [model.add_binary(f"z_{k}_{l}_{a}") for a in range(net.m)] for k, l in pairs}
    v = [model.add_var(f"v_{a}", implied_integer=True) for a in range(net.m)]

    for k, l in pairs:
        for a in range(net.m):
            zka = z[(k, l)][a]
            if not drop_redundant:
                model.add_constraint(f"zk_{k}_{l}_{a}", {zka: 1, x[k][a]: -1}, Relation.LE, 0)
                model.add_constraint(f"zl_{k}_{l}_{a}", {zka: 1, x[l][a]: -1}, Relation.LE, 0)
            model.add_constraint(
                f"zkl_{k}_{l}_{a}", {zka: 1, x[k][a]: -1, x[l][a]: -1}, Relation.GE, -1,
            )
    for a in range(net.m):
        coefs = {v[a]: 1.0}
        coefs.update({z[pair][a]: -1.0 for pair in pairs})
        model.add_constraint(f"overlaps_{a}", coefs, Relation.EQ, 0)

    model.set_objective({j: 1 for j in v}, Sense.MIN)
    return model


def build_mra(net: DirectedNetwork, K: int, drop_redundant: bool = False) -> MilpModel:
    _check_k(FormulationTag.MRA, K)
    model, x = _routing(net, K, FormulationTag.MRA)
    y = [model.add_binary(f"y_{a}") for a in range(net.m)]

    for a in range(net.m):
        used = _usage(x, a)
        if not drop_redundant:
            model.add_constraint(f"yused_{a}", {y[a]: 1, **{j: -1 for j in used}}, Relation.LE, 0)
        model.add_constraint(
            f"repeated_{a}", {y[a]: K - 1, **{j: -1 for j in used}}, Relation.GE, -1,
        )

    model.set_objective({j: 1 for j in y}, Sense.MIN)
    return model


def build_mro(net: DirectedNetwork, K: int, full: bool = False) -> MilpModel:
    _check_k(FormulationTag.MRO, K)
    model, x = _routing(net, K, FormulationTag.MRO)
    y = [model.add_binary(f"y_{a}") for a in range(net.m)]
    u = [model.add_var(f"u_{a}", implied_integer=True) for a in range(net.m)]

    for a in range(net.m):
        minus_used = {j: -1.0 for j in _usage(x, a)}
        if full:
            model.add_constraint(f"yused_{a}", {y[a]: 1, **minus_used}, Relation.LE, 0)
        model.add_constraint(f"repeated_{a}", {y[a]: K - 1, **minus_used}, Relation.GE, -1)
        if full:
            model.add_constraint(f"uy_{a}", {u[a]: 1, y[a]: -K}, Relation.LE, 0)
            model.add_constraint(f"uused_{a}", {u[a]: 1, **minus_used}, Relation.LE, 0)
        model.add_constraint(
            f"occurrences_{a}", {u[a]: 1, y[a]: -1, **minus_used}, Relation.GE, -1,
        )

    model.set_objective({j: 1 for j in u}, Sense.MIN)
    return model


def build_mar(
    net: DirectedNetwork, K: int, aggregate_linking: bool = True, full: bool = False,
) -> MilpModel:
    _check_k(FormulationTag.MAR, K)
    model, x = _routing(net, K, FormulationTag.MAR)
    w = [model.add_binary(f"w_{a}") for a in range(net.m)]
    u = [model.add_var(f"u_{a}", implied_integer=True) for a in range(net.m)]

    for a in range(net.m):
        used = _usage(x, a)
        if aggregate_linking:
            model.add_constraint(
                f"wused_{a}", {w[a]: -K, **{j: 1 for j in used}}, Relation.LE, 0,
            )
        else:
            for k in range(K):
                model.add_constraint(f"wused_{k}_{a}", {x[k][a]: 1, w[a]: -1}, Relation.LE, 0)
        if full:
            model.add_constraint(f"wonly_{a}", {w[a]: 1, **{j: -1 for j in used}}, Relation.LE, 0)
        model.add_constraint(
            f"repetitions_{a}", {u[a]: 1, w[a]: 1, **{j: -1 for j in used}}, Relation.EQ, 0,
        )

    model.set_objective({j: 1 for j in u}, Sense.MIN)
    return model


def build_minmax(net: DirectedNetwork, K: int) -> MilpModel:
    _check_k(FormulationTag.MINMAX, K)
    model, x = _routing(net, K, FormulationTag.MINMAX)
    r = model.add_var("r", implied_integer=True)
    for a in range(net.m):
        model.add_constraint(
            f"presence_{a}", {r: 1, **{j: -1 for j in _usage(x, a)}}, Relation.GE, 0,
        )
    model.set_objective({r: 1}, Sense.MIN)
    return model


def apply_presence_bound(model: MilpModel, net: DirectedNetwork, K: int, bound: int) -> MilpModel:
    """Copy of an MRA/MRO/MAR model with at most `bound` paths on every arc.

    The model is recognized by its columns: y_a (MRA, MRO) or w_a (MAR).
    """
    if net.m == 0 or not (model.has_var("y_0") or model.has_var("w_0")):
        raise ValueError(f"Presence bound applies to MRA, MRO and MAR models, not '{model.name}'")
    if bound < 1:
        raise ValueError(f"Presence bound must be at least 1, got {bound}")
    bounded = model.copy()
    for a in range(net.m):
        coefs = {bounded.var_index(f"x_{k}_{a}"): 1.0 for k in range(K)}
        bounded.add_constraint(f"presence_{a}", coefs, Relation.LE, bound)
    bounded.name = f"{model.name}_r{bound}"
    return bounded


def _layer_cut_widths(net: DirectedNetwork, reverse: bool) -> list[int]:
    """Arc counts of the cuts between consecutive hop layers from s (towards t if reversed).

    Every s-t path crosses each of these cuts, and no arc lies in two of them.
    """
    dist = hop_distances(net, reverse)
    far = net.s if reverse else net.t
    if far not in dist:
        return []
    widths = [0] * dist[far]
    for u, v in net.arcs:
        near, next_ = (dist.get(v), dist.get(u)) if reverse else (dist.get(u), dist.get(v))
        if near is not None and next_ == near + 1 and near < len(widths):
            widths[near] += 1
    return widths


def _cut_minimum(tag: FormulationTag, K: int, width: int) -> int:
    """Least objective share of K paths crossing a cut of `width` arcs."""
    if tag is FormulationTag.MINMAX:
        return -(-K // width)
    if tag is FormulationTag.MAO:
        q, r = divmod(K, width)
        return r * comb(q + 1, 2) + (width - r) * comb(q, 2)
    excess = K - width
    if excess <= 0:
        return 0
    if tag is FormulationTag.MRA:
        return 1
    if tag is FormulationTag.MRO:
        return excess + 1
    return excess


def objective_lower_bound(net: DirectedNetwork, K: int, tag: FormulationTag) -> int:
    """Lower bound on the optimum of any formulation of `tag`, presence-bounded or not.

    The cuts of one hop-layer family are arc-disjoint, so their least shares add up
    (MINMAX takes the largest). The better of the two families is returned.
    """
    tag = FormulationTag(tag)
    _check_k(tag, K)
    best = 0
    for reverse in (False, True):
        shares = [_cut_minimum(tag, K, w) for w in _layer_cut_widths(net, reverse)]
        best = max(best, max(shares, default=0) if tag is FormulationTag.MINMAX else sum(shares))
    return best


def warm_start(model: MilpModel, net: DirectedNetwork, paths: Sequence[PathSeq]) -> dict[int, float]:
    """Values of the x columns that route the given paths, keyed by column index."""
    values = {}
    for k, path in enumerate(paths):
        used = path.arc_set
        for a in range(net.m):
            values[model.var_index(f"x_{k}_{a}")] = 1.0 if a in used else 0.0
    return values


def build(kind: FormulationKind, net: DirectedNetwork, K: int) -> MilpModel:
    if kind.tag is FormulationTag.MAO:
        model = build_mao(net, K, kind.drop_redundant)
    elif kind.tag is FormulationTag.MRA:
        model = build_mra(net, K, kind.drop_redundant)
    elif kind.tag is FormulationTag.MRO:
        model = build_mro(net, K, kind.full)
    elif kind.tag is FormulationTag.MAR:
        model = build_mar(net, K, kind.aggregate_linking, kind.full)
    else:
        model = build_minmax(net, K)
    if kind.presence_bound is not None:
        model = apply_presence_bound(model, net, K, kind.presence_bound)
    log.debug("Built %s for K=%d: %d variables, %d constraints",
              kind.label, K, model.num_vars, model.num_constraints)
    return model


def decode(
    model: MilpModel, assignment: tuple[float, ...], net: DirectedNetwork, K: int,
) -> RawSolution:
    """Read the K arc sets off an integer assignment and check each is an s-t flow."""
    if len(assignment) != model.num_vars:
        raise SolutionError(f"Assignment has {len(assignment)} values for {model.num_vars} columns")

    arc_sets = []
    for k in range(K):
        arcs = []
        for a in range(net.m):
            value = assignment[model.var_index(f"x_{k}_{a}")]
            if value >= 1 - DECODE_TOL:
                arcs.append(a)
            elif value > DECODE_TOL:
                raise SolutionError(f"x_{k}_{a} = {value:.6g} is not integral")
        excess = flow_imbalance(net, arcs)
        if excess:
            raise SolutionError(f"Path {k} is not a unit s-t flow, imbalanced nodes: {excess}")
        arc_sets.append(tuple(arcs))

    for j, var in enumerate(model.variables):
        if var.implied_integer and abs(assignment[j] - round(assignment[j])) > DECODE_TOL:
            raise SolutionError(f"{var.name} = {assignment[j]:.6g} should be integral")

    objective = model.evaluate(assignment)
    if model.objective_is_integral():
        objective = float(round(objective))
    return RawSolution(arc_sets=tuple(arc_sets), objective=objective)
