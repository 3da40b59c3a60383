import logging
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from autoindex.config import Settings, get_settings
from autoindex.core import Schema, SearchSet
from autoindex.engine.ast import Atom, Constant, Program, Rule, Variable
from autoindex.engine.compiler import CompiledJoin, compile, select_indexes
from autoindex.engine.executor import execute
from autoindex.engine.parser import evaluation_order, parse_program
from autoindex.engine.translator import LoopNest, collect_searches, rewrite_searches, translate
from autoindex.errors import UsageError, VerificationFailure
from autoindex.models.report import (
    AssignmentEntry,
    BenchReport,
    RelationReport,
    RuleReport,
    RunMode,
    RunReport,
)
from autoindex.mosp import MospSolution
from autoindex.storage import Database, Relation, SymbolTable
from autoindex.utils.fact_io import read_facts, write_facts
from autoindex.utils.render import render_chain, render_join, render_order, render_search

logger = logging.getLogger(__name__)

FactRows = Iterable[Sequence[str]]


@dataclass
class ProgramPlan:
    program: Program
    mode: RunMode
    schemas: Dict[str, Schema]
    symbols: SymbolTable
    rules: List[Rule]
    nests: List[LoopNest]
    searches: Dict[str, SearchSet]
    solutions: Optional[Dict[str, MospSolution]]
    joins: List[CompiledJoin]
    timings: Dict[str, float] = field(default_factory=dict)


@dataclass
class ProgramRun:
    plan: ProgramPlan
    db: Database
    report: RunReport

    def outputs(self) -> Dict[str, List[tuple]]:
        """Decoded output relations, canonically sorted."""
        return {name: sorted(self.db.decoded(name)) for name in self.plan.program.outputs}


def _atom_text(atom: Atom) -> str:
    def term(t):
        if isinstance(t, Variable):
            return t.name
        if isinstance(t, Constant):
            return t.text
        return "_"

    return f"{atom.relation}({','.join(term(t) for t in atom.args)})"


@contextmanager
def _timed(timings: Dict[str, float], phase: str):
    start = time.perf_counter()
    yield
    timings[phase] = timings.get(phase, 0.0) + time.perf_counter() - start
    logger.info(f"{phase} finished in {timings[phase]:.4f}s")


class EngineService:
    """Parses, plans, and evaluates Datalog programs under one of the indexing modes."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def load_program(self, path: str) -> Program:
        if not os.path.isfile(path):
            raise UsageError(f"program file not found: {path}")
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        logger.info(f"parsing {path}")
        return parse_program(text)

    def plan(self, program: Program, mode: RunMode = RunMode.AUTO) -> ProgramPlan:
        mode = RunMode(mode)
        timings: Dict[str, float] = {}
        schemas = {
            name: Schema.of(name, decl.attributes, self.settings.max_attributes)
            for name, decl in program.declarations.items()
        }
        symbols = SymbolTable()

        with _timed(timings, "translate"):
            position = {name: i for i, name in enumerate(evaluation_order(program))}
            rules = sorted(program.rules, key=lambda rule: position[rule.head.relation])
            nests = [rewrite_searches(translate(rule, symbols)) for rule in rules]
            searches = collect_searches(nests)

        with _timed(timings, "select"):
            solutions = select_indexes(searches, mode.value)
            joins = [compile(nest, solutions, schemas) for nest in nests]

        return ProgramPlan(program, mode, schemas, symbols, rules, nests, searches, solutions, joins, timings)

    def _relation_report(self, plan: ProgramPlan, name: str) -> RelationReport:
        schema = plan.schemas[name]
        searches = plan.searches.get(name, SearchSet())
        report = RelationReport(
            name=name,
            searches=[render_search(s, schema) for s in searches],
            naive_index_count=len(searches),
        )
        solution = (plan.solutions or {}).get(name)
        if solution is not None:
            report.chains = [render_chain(chain, schema) for chain in solution.chain_cover]
            report.indexes = [render_order(ell, schema) for ell in solution.index_set]
            report.assignment = [
                AssignmentEntry(search=render_search(s, schema), index=render_order(solution.assignment[s], schema))
                for s in searches
            ]
        return report

    def _rule_reports(self, plan: ProgramPlan) -> List[RuleReport]:
        return [
            RuleReport(head=_atom_text(rule.head), line=rule.line, loops=render_join(join, plan.schemas, plan.symbols))
            for rule, join in zip(plan.rules, plan.joins)
        ]

    def select(self, program: Program) -> RunReport:
        plan = self.plan(program, RunMode.AUTO)
        return RunReport(
            mode=RunMode.AUTO,
            relations=[self._relation_report(plan, name) for name in program.declarations],
            rules=self._rule_reports(plan),
        )

    def _build_database(self, plan: ProgramPlan) -> Database:
        db = Database(plan.symbols)
        for name, schema in plan.schemas.items():
            solution = (plan.solutions or {}).get(name)
            db.add(Relation(schema, solution.index_set.orders if solution is not None else ()))
        return db

    def _load_inputs(
        self,
        plan: ProgramPlan,
        db: Database,
        facts: Optional[Mapping[str, FactRows]],
        facts_dir: str,
    ) -> int:
        loaded = 0
        for atom in plan.program.facts:
            loaded += db.relation(atom.relation).insert(tuple(plan.symbols.intern(t.text) for t in atom.args))
        for name, path in plan.program.inputs.items():
            if facts is not None:
                rows = facts.get(name, ())
            else:
                rows = read_facts(os.path.join(facts_dir, path or f"{name}.tsv"), plan.schemas[name].arity)
            loaded += db.load(name, rows)
        return loaded

    def execute_program(
        self,
        program: Program,
        mode: RunMode = RunMode.AUTO,
        facts: Optional[Mapping[str, FactRows]] = None,
        facts_dir: Optional[str] = None,
        threads: Optional[int] = None,
    ) -> ProgramRun:
        """Evaluates every rule in dependency order; facts overrides the .input files when given."""
        threads = threads or self.settings.threads
        facts_dir = facts_dir or self.settings.facts_dir
        plan = self.plan(program, mode)
        timings = dict(plan.timings)

        with _timed(timings, "load"):
            db = self._build_database(plan)
            loaded = self._load_inputs(plan, db, facts, facts_dir)

        rules = self._rule_reports(plan)
        with _timed(timings, "execute"):
            for rule, join in zip(rules, plan.joins):
                rule.inserted = execute(join, db, threads)
                logger.debug(f"{rule.head}: {rule.inserted} new tuples")

        relations = []
        for name in program.declarations:
            report = self._relation_report(plan, name)
            relation = db.relation(name)
            report.tuples = len(relation)
            report.index_inserts = relation.total_inserts
            report.order_inserts = {
                render_order(ell, plan.schemas[name]): count for ell, count in relation.insert_counts().items()
            }
            relations.append(report)

        report = RunReport(
            mode=plan.mode,
            relations=relations,
            rules=rules,
            tuples_loaded=loaded,
            tuples_derived=sum(rule.inserted for rule in rules),
            index_inserts={r.name: r.index_inserts for r in relations},
            timings=timings,
        )
        return ProgramRun(plan, db, report)

    def write_outputs(self, run: ProgramRun, output_dir: str) -> List[str]:
        paths = []
        for name, path in run.plan.program.outputs.items():
            target = os.path.join(output_dir, path or f"{name}.tsv")
            write_facts(target, run.db.decoded(name))
            paths.append(target)
        return paths

    def run(
        self,
        path: str,
        mode: RunMode = RunMode.AUTO,
        facts_dir: Optional[str] = None,
        output_dir: Optional[str] = None,
        threads: Optional[int] = None,
    ) -> RunReport:
        program = self.load_program(path)
        facts_dir = facts_dir or self.settings.facts_dir
        run = self.execute_program(program, mode, facts_dir=facts_dir, threads=threads)
        with _timed(run.report.timings, "write"):
            run.report.outputs = self.write_outputs(run, output_dir or self.settings.output_dir or facts_dir)
        return run.report

    def bench(
        self,
        path: str,
        facts_dir: Optional[str] = None,
        threads: Optional[int] = None,
        facts: Optional[Mapping[str, List[Sequence[str]]]] = None,
    ) -> BenchReport:
        program = self.load_program(path)
        runs: Dict[RunMode, ProgramRun] = {}
        for mode in RunMode:
            for _ in range(self.settings.bench_warmup):
                self.execute_program(program, mode, facts, facts_dir, threads)
            runs[mode] = self.execute_program(program, mode, facts, facts_dir, threads)
            logger.info(f"{mode.value}: {runs[mode].report.timings.get('execute', 0.0):.4f}s execute")

        report = BenchReport(runs={mode: run.report for mode, run in runs.items()})
        reference = runs[RunMode.SCAN].outputs()
        report.outputs_identical = all(run.outputs() == reference for run in runs.values())
        if not report.outputs_identical:
            logger.warning("indexed and scan evaluation disagree")

        auto = runs[RunMode.AUTO].report.index_inserts
        naive = runs[RunMode.NAIVE].report.index_inserts
        if sum(auto.values()):
            report.insert_ratio = sum(naive.values()) / sum(auto.values())
        report.relation_ratios = {name: naive[name] / auto[name] for name in auto if auto[name]}
        return report


def require_identical(report: BenchReport) -> BenchReport:
    if not report.outputs_identical:
        raise VerificationFailure("modes produced different output relations")
    return report
