"""
Datalog front end: a Soufflé-flavoured grammar parsed with lark, followed by
the semantic checks (declarations, arities, range restriction, recursion).
"""
import dataclasses
import logging
import re
from typing import List, Set

import networkx as nx
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

from autoindex.core import Schema
from autoindex.engine.ast import (
    Atom,
    Constant,
    Declaration,
    Inequality,
    Literal,
    Program,
    Rule,
    Variable,
    Wildcard,
)
from autoindex.errors import (
    ParseError,
    RecursionUnsupportedError,
    SchemaError,
    UnsafeRuleError,
)

logger = logging.getLogger(__name__)

datalog_grammar = r"""
    start: _statement*
    _statement: declaration | input | output | rule | fact | plan

    declaration: ".decl" RELNAME "(" attribute ("," attribute)* ")"
    attribute: IDENT [":" IDENT]
    input: ".input" RELNAME [STRING]
    output: ".output" RELNAME [STRING]
    plan: ".plan" INT ":" "(" INT ("," INT)* ")"

    rule: atom ":-" body "."
    fact: atom "."
    body: _body_item ("," _body_item)*
    _body_item: atom | negated | inequality
    negated: "!" atom
    inequality: term "!=" term
    atom: RELNAME "(" [term ("," term)*] ")"

    ?term: VAR -> variable
         | "_" -> wildcard
         | INT -> number
         | STRING -> string

    RELNAME: /[A-Za-z][A-Za-z0-9_]*/
    IDENT: /[A-Za-z_][A-Za-z0-9_]*/
    VAR: /[a-z][A-Za-z0-9_]*/
    INT: /[0-9]+/
    STRING: ESCAPED_STRING

    %import common.ESCAPED_STRING
    %import common.WS
    %import common.CPP_COMMENT
    %import common.C_COMMENT
    %ignore WS
    %ignore CPP_COMMENT
    %ignore C_COMMENT
"""

datalog_parser = Lark(datalog_grammar, propagate_positions=True)


def unquote(literal: str) -> str:
    """Text of a string literal; a backslash takes the next character as is."""
    return re.sub(r"\\(.)", r"\1", literal[1:-1], flags=re.S)


class ProgramBuilder(Transformer):
    """Turns the parse tree into a flat list of statements."""

    def start(self, children):
        return children

    @v_args(inline=True)
    def variable(self, token):
        return Variable(str(token))

    def wildcard(self, _):
        return Wildcard()

    @v_args(inline=True)
    def number(self, token):
        return Constant(str(token))

    @v_args(inline=True)
    def string(self, token):
        return Constant(unquote(str(token)))

    def atom(self, children):
        name, *args = children
        return Atom(str(name), tuple(a for a in args if a is not None))

    @v_args(inline=True)
    def negated(self, atom):
        return Literal(atom, negated=True)

    @v_args(inline=True)
    def inequality(self, left, right):
        return Inequality(left, right)

    def body(self, children):
        return children

    @v_args(meta=True)
    def rule(self, meta, children):
        head, items = children
        body = tuple(Literal(i) if isinstance(i, Atom) else i for i in items if not isinstance(i, Inequality))
        constraints = tuple(i for i in items if isinstance(i, Inequality))
        return Rule(head, body, constraints, line=meta.line)

    @v_args(inline=True)
    def fact(self, atom):
        return ("fact", atom)

    def attribute(self, children):
        return str(children[0])

    def declaration(self, children):
        name, *attributes = children
        return Declaration(str(name), tuple(attributes))

    @v_args(inline=True)
    def input(self, name, path):
        return ("input", str(name), None if path is None else str(path)[1:-1])

    @v_args(inline=True)
    def output(self, name, path):
        return ("output", str(name), None if path is None else str(path)[1:-1])

    def plan(self, children):
        # version number is ignored: non-recursive rules have a single version
        return ("plan", tuple(int(c) for c in children[1:]))


def parse_program(text: str) -> Program:
    try:
        tree = datalog_parser.parse(text)
    except UnexpectedInput as e:
        line = e.line if getattr(e, "line", -1) > 0 else None
        column = e.column if line is not None else None
        pos = getattr(e, "pos_in_stream", None)
        near = text[pos:pos + 20] if pos is not None else ""
        raise ParseError(f"unexpected input {near!r}" if near else "unexpected end of input", line, column) from e

    program = Program()
    for statement in ProgramBuilder().transform(tree):
        if isinstance(statement, Declaration):
            if statement.name in program.declarations:
                raise SchemaError(f"relation {statement.name} declared twice")
            Schema.of(statement.name, statement.attributes)
            program.declarations[statement.name] = statement
        elif isinstance(statement, Rule):
            program.rules.append(statement)
        elif statement[0] == "fact":
            program.facts.append(statement[1])
        elif statement[0] == "input":
            program.inputs[statement[1]] = statement[2]
        elif statement[0] == "output":
            program.outputs[statement[1]] = statement[2]
        elif statement[0] == "plan":
            if not program.rules:
                raise ParseError(".plan must follow a rule")
            program.rules[-1] = dataclasses.replace(program.rules[-1], plan=statement[1])

    validate_program(program)
    logger.info(f"parsed {len(program.declarations)} relations, {len(program.rules)} rules")
    return program


def _variables(terms) -> Set[str]:
    return {t.name for t in terms if isinstance(t, Variable)}


def _check_atom(program: Program, atom: Atom) -> None:
    declaration = program.declarations.get(atom.relation)
    if declaration is None:
        raise SchemaError(f"relation {atom.relation} is used but not declared")
    if len(declaration.attributes) != len(atom.args):
        raise SchemaError(
            f"{atom.relation} has arity {len(declaration.attributes)}, used with {len(atom.args)} arguments"
        )


def _check_rule(program: Program, rule: Rule) -> None:
    where = f"rule for {rule.head.relation}" + (f" at line {rule.line}" if rule.line else "")
    _check_atom(program, rule.head)
    for literal in rule.body:
        _check_atom(program, literal.atom)

    bound: Set[str] = set()
    for literal in rule.body:
        if not literal.negated:
            bound |= _variables(literal.atom.args)

    if any(isinstance(t, Wildcard) for t in rule.head.args):
        raise UnsafeRuleError(f"{where}: wildcard in rule head")
    unbound = _variables(rule.head.args) - bound
    if unbound:
        raise UnsafeRuleError(f"{where}: head variables {sorted(unbound)} do not occur in a positive literal")
    for literal in rule.negative:
        unbound = _variables(literal.atom.args) - bound
        if unbound:
            raise UnsafeRuleError(f"{where}: negated {literal.atom.relation} uses unbound variables {sorted(unbound)}")
    for constraint in rule.constraints:
        terms = (constraint.left, constraint.right)
        if any(isinstance(t, Wildcard) for t in terms):
            raise UnsafeRuleError(f"{where}: wildcard in constraint")
        unbound = _variables(terms) - bound
        if unbound:
            raise UnsafeRuleError(f"{where}: constraint uses unbound variables {sorted(unbound)}")

    if rule.plan is not None:
        positives = len([lit for lit in rule.body if not lit.negated])
        if sorted(rule.plan) != list(range(1, positives + 1)):
            raise ParseError(f"{where}: .plan {rule.plan} is not a permutation of 1..{positives}")


def dependency_graph(program: Program) -> nx.DiGraph:
    """Edge body relation -> head relation for every rule; every declared relation is a node."""
    graph = nx.DiGraph()
    graph.add_nodes_from(program.declarations)
    for rule in program.rules:
        for literal in rule.body:
            graph.add_edge(literal.atom.relation, rule.head.relation, negated=literal.negated)
    return graph


def evaluation_order(program: Program) -> List[str]:
    return list(nx.lexicographical_topological_sort(dependency_graph(program)))


def validate_program(program: Program) -> None:
    for name in list(program.inputs) + list(program.outputs):
        if name not in program.declarations:
            raise SchemaError(f"directive refers to undeclared relation {name}")
    for fact in program.facts:
        _check_atom(program, fact)
        if not all(isinstance(t, Constant) for t in fact.args):
            raise UnsafeRuleError(f"fact {fact.relation} must contain constants only")
    for rule in program.rules:
        _check_rule(program, rule)

    graph = dependency_graph(program)
    for rule in program.rules:
        for literal in rule.negative:
            if nx.has_path(graph, rule.head.relation, literal.atom.relation):
                raise RecursionUnsupportedError(
                    f"{rule.head.relation} negates {literal.atom.relation}, which depends on it"
                )
    if not nx.is_directed_acyclic_graph(graph):
        cycle = next(nx.simple_cycles(graph))
        raise RecursionUnsupportedError(f"recursive relations are not supported: {' -> '.join(cycle)}")
