from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Wildcard:
    pass


@dataclass(frozen=True)
class Constant:
    """A constant as written; interned to an ordinal by the translator."""

    text: str


Term = Union[Variable, Wildcard, Constant]


@dataclass(frozen=True)
class Atom:
    relation: str
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False


@dataclass(frozen=True)
class Inequality:
    left: Term
    right: Term


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: Tuple[Literal, ...]
    constraints: Tuple[Inequality, ...] = ()
    plan: Optional[Tuple[int, ...]] = None
    line: Optional[int] = None

    @property
    def positive(self) -> Tuple[Literal, ...]:
        literals = tuple(lit for lit in self.body if not lit.negated)
        if self.plan is None:
            return literals
        return tuple(literals[i - 1] for i in self.plan)

    @property
    def negative(self) -> Tuple[Literal, ...]:
        return tuple(lit for lit in self.body if lit.negated)


@dataclass(frozen=True)
class Declaration:
    name: str
    attributes: Tuple[str, ...]


@dataclass
class Program:
    declarations: Dict[str, Declaration] = field(default_factory=dict)
    inputs: Dict[str, Optional[str]] = field(default_factory=dict)
    outputs: Dict[str, Optional[str]] = field(default_factory=dict)
    rules: List[Rule] = field(default_factory=list)
    facts: List[Atom] = field(default_factory=list)
