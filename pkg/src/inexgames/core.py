"""Finite relational structures, assignments and teams.

Elements and variables are plain strings.  Every structure fixes a total
order on its elements (declaration order) and all enumerations below follow
it, so printed output is deterministic.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from .errors import DomainError, InvalidChoice, InvalidGuard, ParseError

NAME_RE = re.compile(r"^[A-Za-z0-9_+\-]+$")


@dataclass(frozen=True)
class Vocabulary:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for name, arity in self.symbols:
            if name in seen:
                raise DomainError(f"duplicate relation symbol {name!r}")
            if arity < 1:
                raise DomainError(f"symbol {name!r} has arity {arity}; arities must be >= 1")
            seen.add(name)

    def arity(self, name: str) -> int:
        for n, a in self.symbols:
            if n == name:
                return a
        raise DomainError(f"unknown relation symbol {name!r}")

    def __contains__(self, name) -> bool:
        return any(n == name for n, _ in self.symbols)


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError("relations of arity 0 are not supported")
        object.__setattr__(self, "tuples", frozenset(tuple(t) for t in self.tuples))
        for t in self.tuples:
            if len(t) != self.arity:
                raise DomainError(f"tuple {t} does not have arity {self.arity}")

    def __contains__(self, item) -> bool:
        return tuple(item) in self.tuples

    def __iter__(self):
        return iter(self.tuples)

    def __len__(self):
        return len(self.tuples)


class Structure:
    """A finite universe with named relations over it."""

    __slots__ = ("universe", "relations", "_index")

    def __init__(self, universe: Iterable[str], relations: Mapping[str, Iterable] | None = None,
                 arities: Mapping[str, int] | None = None):
        universe = tuple(universe)
        if not universe:
            raise DomainError("the universe of a structure must not be empty")
        if len(set(universe)) != len(universe):
            raise DomainError("universe contains duplicate elements")
        index = {a: i for i, a in enumerate(universe)}
        rels = {}
        arities = dict(arities or {})
        for name, tuples in (relations or {}).items():
            if isinstance(tuples, Relation):
                rel = tuples
            else:
                tuples = [tuple(t) for t in tuples]
                arity = arities.get(name)
                if arity is None:
                    if not tuples:
                        raise DomainError(f"cannot infer the arity of empty relation {name!r}")
                    arity = len(tuples[0])
                rel = Relation(arity, frozenset(tuples))
            for t in rel.tuples:
                for a in t:
                    if a not in index:
                        raise DomainError(f"element {a!r} of relation {name!r} is not in the universe")
            rels[name] = rel
        for name, arity in arities.items():
            if name not in rels:
                rels[name] = Relation(arity, frozenset())
        self.universe = universe
        self.relations = rels
        self._index = index

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(tuple((n, r.arity) for n, r in self.relations.items()))

    def holds(self, name: str, tup) -> bool:
        try:
            return tuple(tup) in self.relations[name].tuples
        except KeyError:
            raise DomainError(f"structure has no relation {name!r}") from None

    def arity(self, name: str) -> int:
        try:
            return self.relations[name].arity
        except KeyError:
            raise DomainError(f"structure has no relation {name!r}") from None

    def index(self, element: str) -> int:
        return self._index[element]

    def tuples(self, k: int) -> list[tuple]:
        """All k-tuples over the universe in lexicographic order."""
        return list(itertools.product(self.universe, repeat=k))

    def sort_key(self, tup) -> tuple:
        return tuple(self._index.get(a, len(self._index)) for a in tup)

    def expand(self, extra: Mapping[str, Relation]) -> "Structure":
        rels = dict(self.relations)
        rels.update(extra)
        return Structure(self.universe, rels)

    def __eq__(self, other):
        return (isinstance(other, Structure) and self.universe == other.universe
                and self.relations == other.relations)

    def __hash__(self):
        return hash((self.universe, tuple(sorted(self.relations.items()))))

    def __repr__(self):
        rels = ", ".join(f"{n}/{r.arity}" for n, r in self.relations.items())
        return f"Structure(|A|={len(self.universe)}, {rels})"


@dataclass(frozen=True)
class Assignment:
    """A finite map from variables to elements, stored as sorted pairs."""

    bindings: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, str] | Iterable[tuple[str, str]]) -> "Assignment":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple(sorted(dict(items).items())))

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.bindings)

    def __getitem__(self, var):
        for v, a in self.bindings:
            if v == var:
                return a
        raise DomainError(f"variable {var!r} is not in the domain of {self}")

    def values(self, vars) -> tuple:
        d = dict(self.bindings)
        try:
            return tuple(d[v] for v in vars)
        except KeyError as e:
            raise DomainError(f"variable {e.args[0]!r} is not in the assignment domain") from None

    def as_dict(self) -> dict:
        return dict(self.bindings)

    def extend(self, var, value) -> "Assignment":
        d = dict(self.bindings)
        d[var] = value
        return Assignment.of(d)

    def __str__(self):
        return "{" + ", ".join(f"{v}->{a}" for v, a in self.bindings) + "}"


class Team:
    """A set of assignments sharing one variable domain.

    Rows are value tuples aligned with ``domain``.  Two teams are equal when
    they contain the same assignments, independent of column order.
    """

    __slots__ = ("domain", "rows", "_pos", "_key")

    def __init__(self, domain: Iterable[str], rows: Iterable = ()):
        domain = tuple(domain)
        if len(set(domain)) != len(domain):
            raise DomainError(f"team domain {domain} repeats a variable")
        pos = {v: i for i, v in enumerate(domain)}
        out = set()
        for r in rows:
            if isinstance(r, Assignment):
                r = r.as_dict()
            if isinstance(r, Mapping):
                if set(r) != set(domain):
                    raise DomainError(f"row {dict(r)} does not have domain {set(domain)}")
                r = tuple(r[v] for v in domain)
            else:
                r = tuple(r)
                if len(r) != len(domain):
                    raise DomainError(f"row {r} does not match domain {domain}")
            out.add(r)
        self.domain = domain
        self.rows = frozenset(out)
        self._pos = pos
        order = sorted(range(len(domain)), key=lambda i: domain[i])
        self._key = (tuple(domain[i] for i in order),
                     frozenset(tuple(r[i] for i in order) for r in self.rows))

    @classmethod
    def empty(cls, domain=()) -> "Team":
        return cls(domain, ())

    def column(self, var) -> int:
        try:
            return self._pos[var]
        except KeyError:
            raise DomainError(f"variable {var!r} is not in the team domain {self.domain}") from None

    def columns(self, vars) -> tuple[int, ...]:
        return tuple(self.column(v) for v in vars)

    def assignments(self) -> Iterator[Assignment]:
        for r in sorted(self.rows):
            yield Assignment.of(zip(self.domain, r))

    def __iter__(self):
        return self.assignments()

    def __len__(self):
        return len(self.rows)

    def __bool__(self):
        return bool(self.rows)

    def __contains__(self, item):
        if isinstance(item, Assignment):
            item = item.as_dict()
        if isinstance(item, Mapping):
            if set(item) != set(self.domain):
                return False
            item = tuple(item[v] for v in self.domain)
        return tuple(item) in self.rows

    def __eq__(self, other):
        return isinstance(other, Team) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __le__(self, other: "Team") -> bool:
        return self.issubset(other)

    def issubset(self, other: "Team") -> bool:
        return self.aligned(other).rows <= other.rows

    def aligned(self, other: "Team") -> "Team":
        """This team with its columns reordered to ``other.domain``."""
        if self.domain == other.domain:
            return self
        if set(self.domain) != set(other.domain):
            raise DomainError(f"teams have different domains {self.domain} and {other.domain}")
        cols = self.columns(other.domain)
        return Team(other.domain, (tuple(r[c] for c in cols) for r in self.rows))

    def union(self, *others: "Team") -> "Team":
        rows = set(self.rows)
        for o in others:
            rows |= o.aligned(self).rows
        return Team(self.domain, rows)

    def __or__(self, other):
        return self.union(other)

    def restrict_domain(self, vars) -> "Team":
        cols = self.columns(vars)
        return Team(tuple(vars), (tuple(r[c] for c in cols) for r in self.rows))

    def sorted_rows(self, structure: Structure | None = None) -> list[tuple]:
        if structure is None:
            return sorted(self.rows)
        return sorted(self.rows, key=structure.sort_key)

    def __repr__(self):
        body = "; ".join(" ".join(f"{v}={a}" for v, a in zip(self.domain, r)) for r in sorted(self.rows))
        return f"Team[{' '.join(self.domain)}]({body})"


def project_team(team: Team, vars) -> Relation | frozenset:
    """X(vars): the set of value tuples the team assigns to ``vars``."""
    vars = tuple(vars)
    cols = team.columns(vars)
    tuples = frozenset(tuple(r[c] for c in cols) for r in team.rows)
    if not vars:
        return tuples
    return Relation(len(vars), tuples)


def restrict_team(structure: Structure, team: Team, guard) -> Team:
    """X restricted to the rows that classically satisfy ``guard``."""
    from .formulas import free_variables, is_first_order
    from .semantics import eval_classical

    if not is_first_order(guard):
        raise InvalidGuard("restriction guards must be first-order (no team atoms)")
    missing = free_variables(guard) - set(team.domain)
    if missing:
        raise DomainError(f"guard mentions variables {sorted(missing)} outside the team domain")
    keep = [r for r in team.rows if eval_classical(structure, dict(zip(team.domain, r)), guard)]
    return Team(team.domain, keep)


def component_team(team: Team, anchor, value) -> Team:
    """The rows s with s(anchor) = value."""
    anchor, value = tuple(anchor), tuple(value)
    if len(anchor) != len(value):
        raise DomainError(f"anchor {anchor} and value {value} have different lengths")
    cols = team.columns(anchor)
    return Team(team.domain, (r for r in team.rows if tuple(r[c] for c in cols) == value))


def components(team: Team, anchor) -> dict[tuple, Team]:
    """Split a team into its anchor components, keyed by anchor value."""
    cols = team.columns(anchor)
    parts: dict[tuple, list] = {}
    for r in team.rows:
        parts.setdefault(tuple(r[c] for c in cols), []).append(r)
    return {k: Team(team.domain, v) for k, v in parts.items()}


def _extend_rows(team: Team, var, values_for: Callable[[tuple], Iterable[str]]) -> Team:
    # s[x -> a] replaces the value of x when x is already in the domain
    if var in team.domain:
        c = team.column(var)
        rows = {r[:c] + (a,) + r[c + 1:] for r in team.rows for a in values_for(r)}
        return Team(team.domain, rows)
    return Team(team.domain + (var,), {r + (a,) for r in team.rows for a in values_for(r)})


def extend_universal(team: Team, var, structure: Structure) -> Team:
    """X[x -> A]."""
    universe = structure.universe
    return _extend_rows(team, var, lambda r: universe)


def extend_choice(team: Team, var, choice) -> Team:
    """X[x -> F] for a choice function F given as a mapping or callable on assignments."""
    def values_for(r):
        s = Assignment.of(zip(team.domain, r))
        if callable(choice):
            vals = choice(s)
        else:
            vals = choice.get(s)
            if vals is None:
                vals = choice.get(tuple(r))
            if vals is None:
                raise InvalidChoice(f"choice function is undefined on {s}")
        vals = list(vals)
        if not vals:
            raise InvalidChoice(f"choice function maps {s} to the empty set")
        return vals
    return _extend_rows(team, var, values_for)


def all_teams(structure: Structure, domain) -> Iterator[Team]:
    """Every team over ``domain``, ordered by size then lexicographically."""
    domain = tuple(domain)
    universe_rows = structure.tuples(len(domain))
    for size in range(len(universe_rows) + 1):
        for rows in itertools.combinations(universe_rows, size):
            yield Team(domain, rows)


def all_relations(structure: Structure, arity: int) -> Iterator[frozenset]:
    tuples = structure.tuples(arity)
    for size in range(len(tuples) + 1):
        for rows in itertools.combinations(tuples, size):
            yield frozenset(rows)


# -- text formats -------------------------------------------------------------

_TUPLE_RE = re.compile(r"\(([^()]*)\)")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _check_name(name, lineno, what="element"):
    if not NAME_RE.match(name):
        raise ParseError(f"invalid {what} name {name!r}", lineno, 1)


def parse_structure(text: str) -> Structure:
    """Parse the ``universe: ...`` / ``R: (a,b) ...`` structure format.

    A relation header may carry an explicit arity (``R/2:``), which is the
    only way to declare an empty relation.
    """
    universe = None
    relations: dict[str, list] = {}
    arities: dict[str, int] = {}
    where: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"expected 'name: ...', got {line!r}", lineno, 1)
        head, body = (p.strip() for p in line.split(":", 1))
        if head == "universe":
            universe = body.split()
            for a in universe:
                _check_name(a, lineno)
            continue
        name, _, ar = head.partition("/")
        name = name.strip()
        _check_name(name, lineno, "relation")
        if name in relations:
            raise ParseError(f"relation {name!r} declared twice", lineno, 1)
        if ar:
            try:
                arities[name] = int(ar)
            except ValueError:
                raise ParseError(f"bad arity {ar!r}", lineno, len(name) + 2) from None
        tuples = []
        rest = _TUPLE_RE.sub(" ", body).strip()
        for m in _TUPLE_RE.finditer(body):
            parts = [p.strip() for p in m.group(1).split(",")]
            for p in parts:
                _check_name(p, lineno)
            tuples.append(tuple(parts))
        # unary relations may also be written as bare element lists
        for tok in rest.split():
            _check_name(tok, lineno)
            tuples.append((tok,))
        arity = arities.get(name)
        for t in tuples:
            if arity is None:
                arity = len(t)
            if len(t) != arity:
                raise ParseError(f"relation {name!r} mixes arities", lineno, 1)
        if arity is None:
            raise ParseError(f"empty relation {name!r} needs an explicit arity ({name}/k:)", lineno, 1)
        arities[name] = arity
        relations[name] = tuples
        where[name] = lineno
    if universe is None:
        raise ParseError("missing 'universe:' line", 1, 1)
    known = set(universe)
    for name, tuples in relations.items():
        bad = [a for t in tuples for a in t if a not in known]
        if bad:
            raise ParseError(f"element {bad[0]!r} of relation {name!r} is not in the universe", where[name], 1)
    try:
        return Structure(universe, relations, arities)
    except DomainError as e:
        raise ParseError(str(e)) from None


def format_structure(structure: Structure) -> str:
    lines = ["universe: " + " ".join(structure.universe)]
    for name, rel in structure.relations.items():
        tuples = sorted(rel.tuples, key=structure.sort_key)
        body = " ".join("(" + ",".join(t) + ")" for t in tuples)
        lines.append(f"{name}/{rel.arity}: {body}".rstrip())
    return "\n".join(lines) + "\n"


def parse_team(text: str) -> Team:
    domain = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        if domain is None:
            head, sep, body = line.partition(":")
            if not sep or head.strip() != "vars":
                raise ParseError("a team file must start with 'vars: ...'", lineno, 1)
            domain = tuple(body.split())
            for v in domain:
                _check_name(v, lineno, "variable")
            continue
        vals = line.split()
        if len(vals) != len(domain):
            raise ParseError(f"row has {len(vals)} values but there are {len(domain)} variables", lineno, 1)
        for a in vals:
            _check_name(a, lineno)
        rows.append(tuple(vals))
    if domain is None:
        raise ParseError("missing 'vars:' line", 1, 1)
    return Team(domain, rows)


def format_team(team: Team, structure: Structure | None = None) -> str:
    lines = ["vars: " + " ".join(team.domain)]
    lines += [" ".join(r) for r in team.sorted_rows(structure)]
    return "\n".join(lines) + "\n"
