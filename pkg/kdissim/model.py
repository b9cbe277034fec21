"""Solver-agnostic mixed-integer linear models and their CPLEX LP text form."""

import logging
import math
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
import scipy.sparse as sp

log = logging.getLogger(__name__)

INF = math.inf


class Sense(str, Enum):
    MIN = "min"
    MAX = "max"


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


@dataclass(frozen=True)
class Variable:
    """A column. `implied_integer` marks continuous columns that the constraints force integral."""

    name: str
    lower: float = 0.0
    upper: float = INF
    integer: bool = False
    implied_integer: bool = False


@dataclass(frozen=True)
class Constraint:
    name: str
    coefs: dict[int, float]
    relation: Relation
    rhs: float


class MilpModel:
    """Variables, linear constraints and a linear objective.

    Columns are addressed by the index returned from add_var; names are unique.
    """

    def __init__(self, name: str = "model") -> None:
        self.name = name
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self.sense = Sense.MIN
        self.objective: dict[int, float] = {}
        self._names: dict[str, int] = {}

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def add_var(
        self,
        name: str,
        lower: float = 0.0,
        upper: float = INF,
        integer: bool = False,
        implied_integer: bool = False,
    ) -> int:
        if name in self._names:
            raise ValueError(f"Variable '{name}' is already declared")
        if lower > upper:
            raise ValueError(f"Variable '{name}' has lower bound {lower} above upper bound {upper}")
        self._names[name] = len(self.variables)
        self.variables.append(Variable(name, float(lower), float(upper), integer, implied_integer))
        return len(self.variables) - 1

    def add_binary(self, name: str) -> int:
        return self.add_var(name, 0.0, 1.0, integer=True)

    def _check_coefs(self, coefs: Mapping[int, float]) -> dict[int, float]:
        for j in coefs:
            if not 0 <= j < self.num_vars:
                raise ValueError(f"Coefficient references undeclared variable index {j}")
        return {j: float(c) for j, c in coefs.items() if c != 0}

    def add_constraint(
        self, name: str, coefs: Mapping[int, float], relation: Relation, rhs: float,
    ) -> int:
        self.constraints.append(
            Constraint(name, self._check_coefs(coefs), Relation(relation), float(rhs))
        )
        return len(self.constraints) - 1

    def set_objective(self, coefs: Mapping[int, float], sense: Sense = Sense.MIN) -> None:
        self.objective = self._check_coefs(coefs)
        self.sense = Sense(sense)

    def var_index(self, name: str) -> int:
        if name not in self._names:
            raise KeyError(f"Unknown variable '{name}'")
        return self._names[name]

    def has_var(self, name: str) -> bool:
        return name in self._names

    def integer_indices(self) -> np.ndarray:
        return np.array([j for j, v in enumerate(self.variables) if v.integer], dtype=np.int64)

    def objective_is_integral(self) -> bool:
        """True when every feasible integer point has an integer objective value."""
        return all(
            float(c).is_integer()
            and (self.variables[j].integer or self.variables[j].implied_integer)
            for j, c in self.objective.items()
        )

    def copy(self) -> "MilpModel":
        other = MilpModel(self.name)
        other.variables = list(self.variables)
        other.constraints = list(self.constraints)
        other.sense = self.sense
        other.objective = dict(self.objective)
        other._names = dict(self._names)
        return other

    def relaxed(self) -> "MilpModel":
        """Copy with every integrality requirement dropped (bounds kept)."""
        other = self.copy()
        other.variables = [
            replace(v, integer=False, implied_integer=False) for v in self.variables
        ]
        return other

    # Array views

    def objective_vector(self) -> np.ndarray:
        c = np.zeros(self.num_vars)
        for j, coef in self.objective.items():
            c[j] = coef
        return c

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lower = np.array([v.lower for v in self.variables], dtype=float)
        upper = np.array([v.upper for v in self.variables], dtype=float)
        return lower, upper

    def constraint_matrices(self) -> tuple[sp.csr_matrix, np.ndarray, sp.csr_matrix, np.ndarray]:
        """(A_ub, b_ub, A_eq, b_eq) with >= rows negated into the <= block."""
        ub_rows: list[tuple[dict[int, float], float]] = []
        eq_rows: list[tuple[dict[int, float], float]] = []
        for con in self.constraints:
            if con.relation is Relation.EQ:
                eq_rows.append((con.coefs, con.rhs))
            elif con.relation is Relation.LE:
                ub_rows.append((con.coefs, con.rhs))
            else:
                ub_rows.append(({j: -c for j, c in con.coefs.items()}, -con.rhs))

        def assemble(rows: list[tuple[dict[int, float], float]]) -> tuple[sp.csr_matrix, np.ndarray]:
            data, ri, ci = [], [], []
            for i, (coefs, _) in enumerate(rows):
                for j, c in coefs.items():
                    data.append(c)
                    ri.append(i)
                    ci.append(j)
            matrix = sp.csr_matrix((data, (ri, ci)), shape=(len(rows), self.num_vars))
            return matrix, np.array([rhs for _, rhs in rows], dtype=float)

        a_ub, b_ub = assemble(ub_rows)
        a_eq, b_eq = assemble(eq_rows)
        return a_ub, b_ub, a_eq, b_eq

    # Evaluation

    def evaluate(self, assignment: Sequence[float]) -> float:
        return float(sum(c * assignment[j] for j, c in self.objective.items()))

    def violations(self, assignment: Sequence[float], tol: float = 1e-6) -> list[str]:
        """Names of violated bounds, constraints and integrality requirements."""
        bad = []
        for v, value in zip(self.variables, assignment):
            if value < v.lower - tol or value > v.upper + tol:
                bad.append(f"bound:{v.name}")
            if v.integer and abs(value - round(value)) > tol:
                bad.append(f"integer:{v.name}")
        for con in self.constraints:
            lhs = sum(c * assignment[j] for j, c in con.coefs.items())
            if (
                (con.relation is Relation.LE and lhs > con.rhs + tol)
                or (con.relation is Relation.GE and lhs < con.rhs - tol)
                or (con.relation is Relation.EQ and abs(lhs - con.rhs) > tol)
            ):
                bad.append(con.name)
        return bad

    def is_feasible(self, assignment: Sequence[float], tol: float = 1e-6) -> bool:
        return len(assignment) == self.num_vars and not self.violations(assignment, tol)


# LP file format

_WRAP = 78


def _number(value: float) -> str:
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return f"{value:.12g}"


def _expression(model: MilpModel, coefs: Mapping[int, float]) -> list[str]:
    parts = []
    for j, c in coefs.items():
        name = model.variables[j].name
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = name if mag == 1 else f"{_number(mag)} {name}"
        if not parts:
            parts.append(term if sign == "+" else f"- {term}")
        else:
            parts.append(f"{sign} {term}")
    return parts


def _wrapped(head: str, parts: list[str], tail: str = "") -> list[str]:
    lines = []
    line = head
    for part in parts + ([tail] if tail else []):
        if len(line) + 1 + len(part) > _WRAP and line.strip():
            lines.append(line)
            line = "   " + part
        else:
            line = f"{line} {part}" if line else part
    lines.append(line)
    return lines


def export_lp(model: MilpModel) -> str:
    """Render the model in CPLEX LP format."""
    out = [f"\\ {model.name}"]
    out.append("Minimize" if model.sense is Sense.MIN else "Maximize")
    terms = _expression(model, model.objective)
    if not terms:
        terms = [f"0 {model.variables[0].name}"] if model.variables else ["0"]
    out.extend(_wrapped(" obj:", terms))

    out.append("Subject To")
    for con in model.constraints:
        lhs = _expression(model, con.coefs) or [f"0 {model.variables[0].name}"]
        out.extend(_wrapped(f" {con.name}:", lhs, f"{con.relation.value} {_number(con.rhs)}"))

    out.append("Bounds")
    for v in model.variables:
        if v.lower == -INF and v.upper == INF:
            out.append(f" {v.name} free")
        elif v.lower == v.upper:
            out.append(f" {v.name} = {_number(v.lower)}")
        else:
            low = "-inf" if v.lower == -INF else _number(v.lower)
            high = "+inf" if v.upper == INF else _number(v.upper)
            out.append(f" {low} <= {v.name} <= {high}")

    generals = [v.name for v in model.variables if v.integer and (v.lower, v.upper) != (0, 1)]
    binaries = [v.name for v in model.variables if v.integer and (v.lower, v.upper) == (0, 1)]
    if generals:
        out.append("Generals")
        out.extend(_wrapped("", generals))
    if binaries:
        out.append("Binaries")
        out.extend(_wrapped("", binaries))
    out.append("End")
    return "\n".join(out) + "\n"


_TOKEN = re.compile(
    r"\s*(<=|>=|=<|=>|<|>|=|:|[+-]|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[A-Za-z_][\w.\[\]]*)"
)
_SECTIONS = {
    "minimize": "min", "minimise": "min", "minimum": "min", "min": "min",
    "maximize": "max", "maximise": "max", "maximum": "max", "max": "max",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "bounds": "bounds", "bound": "bounds",
    "generals": "gen", "general": "gen", "gen": "gen", "integers": "gen",
    "binaries": "bin", "binary": "bin", "bin": "bin",
    "end": "end",
}
_RELATIONS = {"<=": Relation.LE, "=<": Relation.LE, "<": Relation.LE,
              ">=": Relation.GE, "=>": Relation.GE, ">": Relation.GE, "=": Relation.EQ}


def _tokenize(text: str, where: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ValueError(f"Unexpected character {text[pos:].strip()[:1]!r} in {where}")
        tokens.append(match.group(1))
        pos = match.end()
    return tokens


def _is_number(token: str) -> bool:
    return token[0].isdigit() or token[0] == "."


def _is_name(token: str) -> bool:
    return token[0].isalpha() or token[0] == "_"


class _LpReader:
    def __init__(self) -> None:
        self.model = MilpModel()
        self.bounds: dict[int, list[float]] = {}

    def var(self, name: str) -> int:
        if name not in self.model._names:
            self.model.add_var(name)
        return self.model.var_index(name)

    def terms(self, tokens: list[str], pos: int) -> tuple[dict[int, float], float, int]:
        """Parse a linear expression up to a relation or the end of the tokens."""
        coefs: dict[int, float] = {}
        constant = 0.0
        while pos < len(tokens) and tokens[pos] not in _RELATIONS:
            sign = 1.0
            while tokens[pos] in ("+", "-"):
                sign *= -1.0 if tokens[pos] == "-" else 1.0
                pos += 1
            coef = 1.0
            numeric = _is_number(tokens[pos])
            if numeric:
                coef = float(tokens[pos])
                pos += 1
            if pos < len(tokens) and _is_name(tokens[pos]):
                j = self.var(tokens[pos])
                coefs[j] = coefs.get(j, 0.0) + sign * coef
                pos += 1
            elif numeric:
                constant += sign * coef
            else:
                raise ValueError(f"Unexpected token '{tokens[pos]}' in linear expression")
        return coefs, constant, pos

    def objective(self, text: str, sense: Sense) -> None:
        tokens = _tokenize(text, "objective")
        pos = 2 if len(tokens) > 1 and tokens[1] == ":" else 0
        coefs, _, _ = self.terms(tokens, pos)
        self.model.set_objective(coefs, sense)

    def constraints(self, text: str) -> None:
        tokens = _tokenize(text, "constraints")
        pos = 0
        while pos < len(tokens):
            name = f"c{self.model.num_constraints}"
            if pos + 1 < len(tokens) and tokens[pos + 1] == ":":
                name = tokens[pos]
                pos += 2
            coefs, constant, pos = self.terms(tokens, pos)
            if pos >= len(tokens):
                raise ValueError(f"Constraint '{name}' has no relation")
            relation = _RELATIONS[tokens[pos]]
            pos += 1
            sign = 1.0
            while tokens[pos] in ("+", "-"):
                sign *= -1.0 if tokens[pos] == "-" else 1.0
                pos += 1
            rhs = sign * float(tokens[pos])
            pos += 1
            self.model.add_constraint(name, coefs, relation, rhs - constant)

    def bound_value(self, tokens: list[str]) -> float:
        sign = -1.0 if tokens[0] == "-" else 1.0
        word = tokens[-1].lower()
        if word in ("inf", "infinity"):
            return sign * INF
        return sign * float(tokens[-1])

    def bound_line(self, line: str) -> None:
        tokens = _tokenize(line, f"bound '{line.strip()}'")
        if len(tokens) == 2 and tokens[1].lower() == "free":
            self.bounds[self.var(tokens[0])] = [-INF, INF]
            return
        # Split into operand groups around relations.
        groups: list[list[str]] = [[]]
        relations: list[str] = []
        for token in tokens:
            if token in _RELATIONS:
                relations.append(token)
                groups.append([])
            else:
                groups[-1].append(token)
        names = [
            i for i, g in enumerate(groups)
            if len(g) == 1 and _is_name(g[0]) and g[0].lower() not in ("inf", "infinity")
        ]
        if len(names) != 1:
            raise ValueError(f"Malformed bound '{line.strip()}'")
        k = names[0]
        j = self.var(groups[k][0])
        bound = self.bounds.setdefault(j, [0.0, INF])
        for i, rel in enumerate(relations):
            left, right = i, i + 1
            relation = _RELATIONS[rel]
            if left == k:
                value = self.bound_value(groups[right])
                if relation is Relation.EQ:
                    bound[:] = [value, value]
                elif relation is Relation.LE:
                    bound[1] = value
                else:
                    bound[0] = value
            elif right == k:
                value = self.bound_value(groups[left])
                if relation is Relation.EQ:
                    bound[:] = [value, value]
                elif relation is Relation.LE:
                    bound[0] = value
                else:
                    bound[1] = value

    def finish(self, generals: list[str], binaries: list[str]) -> MilpModel:
        model = self.model
        for name in generals + binaries:
            self.var(name)
        for j, (lower, upper) in self.bounds.items():
            model.variables[j] = replace(model.variables[j], lower=lower, upper=upper)
        for name in generals:
            j = model.var_index(name)
            model.variables[j] = replace(model.variables[j], integer=True)
        for name in binaries:
            j = model.var_index(name)
            model.variables[j] = replace(model.variables[j], lower=0.0, upper=1.0, integer=True)
        return model


def read_lp(text: str) -> MilpModel:
    """Parse the CPLEX LP subset written by export_lp back into a model."""
    sections: dict[str, list[str]] = {}
    order: list[str] = []
    current = None
    name = "model"
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0]
        if raw.lstrip().startswith("\\") and not sections and name == "model":
            name = raw.lstrip()[1:].strip() or name
        key = _SECTIONS.get(line.strip().lower())
        if key is not None:
            current = key
            order.append(key)
            sections.setdefault(key, [])
            if key == "end":
                break
            continue
        if not line.strip():
            continue
        if current is None:
            raise ValueError(f"Text before the objective section: '{line.strip()}'")
        sections[current].append(line)

    objective = [k for k in order if k in ("min", "max")]
    if not objective:
        raise ValueError("LP text has no Minimize or Maximize section")

    reader = _LpReader()
    reader.model.name = name
    sense = Sense.MIN if objective[0] == "min" else Sense.MAX
    reader.objective(" ".join(sections[objective[0]]), sense)
    reader.constraints(" ".join(sections.get("st", [])))
    for line in sections.get("bounds", []):
        reader.bound_line(line)
    generals = " ".join(sections.get("gen", [])).split()
    binaries = " ".join(sections.get("bin", [])).split()
    model = reader.finish(generals, binaries)
    log.debug("Read LP model '%s': %d variables, %d constraints",
              model.name, model.num_vars, model.num_constraints)
    return model
