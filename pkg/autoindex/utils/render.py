"""Text rendering of searches, chains, orders, loop nests and reports."""
from typing import List, Mapping, Sequence

from autoindex.core import Chain, LexOrder, Schema, Search
from autoindex.engine.compiler import CompiledJoin, CompiledLoop, RangeAccess, ScanAccess
from autoindex.engine.translator import Const, Equality, Operand, TupleRef
from autoindex.models.report import BenchReport, RunReport, VerifyReport


def render_search(search: Search, schema: Schema) -> str:
    return "{" + ",".join(schema.attributes[i].name for i in search.ids()) + "}"


def render_chain(chain: Chain, schema: Schema) -> str:
    return " ⊂ ".join(render_search(s, schema) for s in chain)


def render_order(ell: LexOrder, schema: Schema) -> str:
    return " ≺ ".join(schema.attributes[i].name for i in ell.seq)


def _operand(op: Operand, loop_schemas: Sequence[Schema], symbols=None) -> str:
    if isinstance(op, Const):
        return repr(symbols.decode(op.value)) if symbols is not None else str(op.value)
    return f"t{op.loop + 1}({loop_schemas[op.loop].attributes[op.attr].name})"


def _condition(condition, j: int, loop_schemas: Sequence[Schema], symbols=None) -> str:
    if isinstance(condition, Equality):
        left = f"t{j + 1}({loop_schemas[j].attributes[condition.attr].name})"
        return f"{left} = {_operand(condition.rhs, loop_schemas, symbols)}"
    return f"{_operand(condition.left, loop_schemas, symbols)} ≠ {_operand(condition.right, loop_schemas, symbols)}"


def render_loop(loop: CompiledLoop, j: int, loop_schemas: Sequence[Schema], symbols=None) -> str:
    schema = loop_schemas[j]
    access = loop.access
    if isinstance(access, RangeAccess):
        low, high = [], []
        recipe = dict(access.recipe)
        for attr in range(schema.arity):
            entry = recipe[attr]
            if isinstance(entry, (TupleRef, Const)):
                value = _operand(entry, loop_schemas, symbols)
                low.append(value)
                high.append(value)
            else:
                low.append("⊥")
                high.append("⊤")
        text = (
            f"for t{j + 1} in ρ({render_order(access.order, schema)}, "
            f"⟨{', '.join(low)}⟩, ⟨{', '.join(high)}⟩) {loop.relation}"
        )
    elif isinstance(access, ScanAccess):
        where = " ∧ ".join(_condition(eq, j, loop_schemas, symbols) for eq in access.predicate)
        text = f"for t{j + 1} in σ[{where}] {loop.relation}"
    else:
        text = f"for t{j + 1} in {loop.relation}"
    if loop.residual:
        text += " if " + " ∧ ".join(_condition(c, j, loop_schemas, symbols) for c in loop.residual)
    return text


def render_join(join: CompiledJoin, schemas: Mapping[str, Schema], symbols=None) -> List[str]:
    loop_schemas = [schemas[loop.relation] for loop in join.loops]
    return [render_loop(loop, j, loop_schemas, symbols) for j, loop in enumerate(join.loops)]


def render_run_report(report: RunReport) -> str:
    lines = [f"mode: {report.mode.value}"]
    for relation in report.relations:
        lines.append(f"{relation.name}:")
        lines.append(f"  searches ({len(relation.searches)}): {', '.join(relation.searches) or '-'}")
        lines.append(f"  chains ({len(relation.chains)}):")
        lines.extend(f"    {chain}" for chain in relation.chains)
        lines.append(f"  indexes ({relation.auto_index_count}, naive {relation.naive_index_count}):")
        lines.extend(f"    {index}" for index in relation.indexes)
        if relation.tuples is not None:
            lines.append(f"  tuples: {relation.tuples}, index inserts: {relation.index_inserts}")
    for rule in report.rules:
        header = f"rule {rule.head}" + (f" (line {rule.line})" if rule.line else "")
        if rule.inserted is not None:
            header += f": {rule.inserted} new tuples"
        lines.append(header)
        lines.extend(f"  {'  ' * depth}{loop}" for depth, loop in enumerate(rule.loops))
    if report.timings:
        lines.append(f"tuples loaded: {report.tuples_loaded}, derived: {report.tuples_derived}")
        lines.append("index inserts: " + ", ".join(f"{k} {v}" for k, v in report.index_inserts.items()))
        lines.append("timings: " + ", ".join(f"{phase} {seconds:.4f}s" for phase, seconds in report.timings.items()))
    lines.extend(f"wrote {path}" for path in report.outputs)
    return "\n".join(lines)


def render_bench_report(report: BenchReport) -> str:
    lines = [f"{'mode':<6} {'inserts':>10} {'execute (s)':>12} {'total (s)':>10}"]
    for mode, run in report.runs.items():
        inserts = sum(run.index_inserts.values())
        lines.append(
            f"{mode.value:<6} {inserts:>10} {run.timings.get('execute', 0.0):>12.4f} "
            f"{sum(run.timings.values()):>10.4f}"
        )
    if report.insert_ratio is not None:
        lines.append(f"naive/auto insert ratio: {report.insert_ratio:.3f}")
    for name, ratio in report.relation_ratios.items():
        lines.append(f"  {name}: {ratio:.3f}")
    lines.append("outputs identical: " + ("yes" if report.outputs_identical else "no"))
    return "\n".join(lines)


def render_verify_report(report: VerifyReport) -> str:
    lines = [f"seed {report.seed}, {report.trials} trials per suite"]
    for suite in report.suites:
        mark = "✅" if suite.passed else "❌"
        lines.append(f"{mark} {suite.name}: {suite.trials - suite.failures}/{suite.trials} ({suite.seconds:.2f}s)")
        if suite.counterexample:
            lines.append(f"   counterexample: {suite.counterexample}")
    return "\n".join(lines)
