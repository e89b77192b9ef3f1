"""CNF formulas in the DIMACS convention: variables 1..n, literals are +v / -v."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Clause = Tuple[int, ...]


class FormatError(ValueError):
    pass


def normalize_clause(lits: Iterable[int]) -> Clause:
    """Sort by variable, drop duplicate literals. Tautologies are kept."""
    return tuple(sorted(set(lits), key=lambda l: (abs(l), l)))


def is_tautology(clause: Iterable[int]) -> bool:
    s = set(clause)
    return any(-l in s for l in s)


@dataclass
class CnfFormula:
    num_vars: int
    clauses: List[Clause] = field(default_factory=list)
    names: Dict[int, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.clauses = [tuple(c) for c in self.clauses]
        for c in self.clauses:
            for l in c:
                if l == 0 or abs(l) > self.num_vars:
                    raise FormatError(f"literal {l} out of range 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def clause_set(self) -> set:
        return {frozenset(c) for c in self.clauses}

    def index_of(self, name: str) -> int:
        lookup = getattr(self, "_name_index", None)
        if lookup is None or len(lookup) != len(self.names):
            lookup = {v: k for k, v in self.names.items()}
            self._name_index = lookup
        try:
            return lookup[name]
        except KeyError:
            raise KeyError(f"no variable named {name!r}") from None

    def name_of(self, var: int) -> str:
        return self.names.get(var, str(var))

    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def to_dimacs(self, comments: Sequence[str] = ()) -> str:
        lines = [f"c {c}" for c in comments]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        for c in self.clauses:
            lines.append(" ".join(str(l) for l in c) + (" 0" if c else "0"))
        return "\n".join(lines) + "\n"

    def symbol_map(self) -> str:
        return "".join(f"{v}\t{self.names[v]}\n" for v in sorted(self.names))

    def write(self, path: str, symbols: Optional[str] = None) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_dimacs())
        if symbols:
            with open(symbols, "w") as fh:
                fh.write(self.symbol_map())


def parse_dimacs(text: str, symbols: Optional[str] = None) -> CnfFormula:
    num_vars = None
    expected = None
    clauses: List[Clause] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: bad header {line!r}")
            num_vars, expected = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise FormatError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise FormatError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if expected is not None and expected != len(clauses):
        raise FormatError(f"header declares {expected} clauses, found {len(clauses)}")
    names = parse_symbol_map(symbols) if symbols else {}
    return CnfFormula(num_vars, clauses, names)


def parse_symbol_map(text: str) -> Dict[int, str]:
    names = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        idx, name = line.split("\t", 1)
        names[int(idx)] = name.strip()
    return names


def read_dimacs(path: str, symbols: Optional[str] = None) -> CnfFormula:
    with open(path) as fh:
        text = fh.read()
    sym = None
    if symbols:
        with open(symbols) as fh:
            sym = fh.read()
    return parse_dimacs(text, sym)
