"""
Randomized property suites that check the optimiser and the engine against
brute-force oracles. Every suite draws from its own seeded generator, so a
(seed, trials) pair always replays the same instances.
"""
import logging
import random
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from autoindex.config import Settings, get_settings
from autoindex.core import LexOrder, Schema, Search, SearchSet, c_cover, l_cover
from autoindex.engine.parser import parse_program
from autoindex.matching import Matcher, build_subset_graph, max_antichain_bruteforce, max_matching, min_chain_cover
from autoindex.models.report import RunMode, SuiteResult, VerifyReport
from autoindex.mosp import brute_force_min_cover_size, min_index
from autoindex.services.engine_service import EngineService
from autoindex.storage import Relation, make_bounds, primitive_search_scan, range_search

logger = logging.getLogger(__name__)

SUITES = ("dilworth", "mosp", "range_cover", "end_to_end", "matching")


def random_search_set(rng: random.Random, attributes: int, max_searches: int) -> SearchSet:
    full = (1 << attributes) - 1
    size = rng.randint(1, min(max_searches, full))
    return SearchSet(Search(rng.randint(1, full)) for _ in range(size))


def random_program(rng: random.Random, domain: int = 5, max_rows: int = 30) -> Tuple[str, Dict[str, List[List[str]]]]:
    """A non-recursive program over random input relations, with facts to match."""
    lines = []
    arities: Dict[str, int] = {}
    facts: Dict[str, List[List[str]]] = {}

    for k in range(rng.randint(1, 3)):
        name, arity = f"E{k}", rng.randint(1, 3)
        arities[name] = arity
        lines.append(f".decl {name}({', '.join(f'a{i}' for i in range(arity))})")
        lines.append(f".input {name}")
        facts[name] = [
            [str(rng.randrange(domain)) for _ in range(arity)] for _ in range(rng.randint(0, max_rows))
        ]

    for k in range(rng.randint(1, 3)):
        name, arity = f"R{k}", rng.randint(1, 3)
        available = list(arities)
        lines.append(f".decl {name}({', '.join(f'c{i}' for i in range(arity))})")
        lines.append(f".output {name}")
        for _ in range(rng.randint(1, 2)):
            lines.extend(_random_rule(rng, name, arity, available, arities, domain))
        arities[name] = arity
    return "\n".join(lines) + "\n", facts


def _random_rule(rng, head, head_arity, available, arities, domain) -> List[str]:
    variables = [f"v{i}" for i in range(4)]
    bound: List[str] = []
    positives = []
    for n in range(rng.randint(1, 3)):
        relation = rng.choice(available)
        args = []
        for position in range(arities[relation]):
            roll = rng.random()
            if n == 0 and position == 0:
                term = rng.choice(variables)
            elif roll < 0.15:
                term = "_"
            elif roll < 0.25:
                term = str(rng.randrange(domain))
            else:
                term = rng.choice(variables)
            if term[0] == "v" and term not in bound:
                bound.append(term)
            args.append(term)
        positives.append(f"{relation}({', '.join(args)})")

    body = list(positives)
    if rng.random() < 0.3:
        relation = rng.choice(available)
        args = [rng.choice(bound + ["_", str(rng.randrange(domain))]) for _ in range(arities[relation])]
        body.append(f"!{relation}({', '.join(args)})")
    if len(bound) > 1 and rng.random() < 0.2:
        left, right = rng.sample(bound, 2)
        body.append(f"{left} != {right}")

    head_args = ", ".join(rng.choice(bound) for _ in range(head_arity))
    rule = [f"{head}({head_args}) :- {', '.join(body)}."]
    if len(positives) > 1 and rng.random() < 0.2:
        order = list(range(1, len(positives) + 1))
        rng.shuffle(order)
        rule.append(f".plan 0:({','.join(map(str, order))})")
    return rule


class VerificationService:
    def __init__(self, settings: Optional[Settings] = None, matcher: Matcher = max_matching):
        self.settings = settings or get_settings()
        self.matcher = matcher
        self.engine = EngineService(self.settings)

    def _suite(self, name: str, seed: int, trials: int, check: Callable[[random.Random], Optional[str]]) -> SuiteResult:
        rng = random.Random(f"{seed}:{name}")
        result = SuiteResult(name=name, trials=trials)
        start = time.perf_counter()
        for trial in range(trials):
            try:
                problem = check(rng)
            except Exception as e:
                logger.error(f"{name} trial {trial} raised {e}", exc_info=True)
                problem = f"trial {trial} raised {type(e).__name__}: {e}"
            if problem is not None:
                result.failures += 1
                if result.counterexample is None:
                    result.counterexample = problem
                logger.warning(f"{name} trial {trial}: {problem}")
        result.seconds = time.perf_counter() - start
        logger.info(f"{name}: {trials - result.failures}/{trials} passed in {result.seconds:.2f}s")
        return result

    def check_dilworth(self, rng: random.Random) -> Optional[str]:
        q = random_search_set(rng, rng.randint(1, 5), 14)
        cover = min_chain_cover(q, self.matcher)
        width = max_antichain_bruteforce(q, self.settings.antichain_limit)
        if not c_cover(q, cover) or sorted(cover.members(), key=Search.sort_key) != list(q):
            return f"{q!r}: chains {[[s.ids() for s in c] for c in cover]} do not partition the searches"
        if len(cover) != width:
            return f"{q!r}: {len(cover)} chains, width {width}"
        return None

    def check_mosp(self, rng: random.Random) -> Optional[str]:
        attributes = rng.randint(1, self.settings.bruteforce_max_attributes)
        q = random_search_set(rng, attributes, self.settings.bruteforce_max_searches)
        solution = min_index(q, self.matcher)
        best = brute_force_min_cover_size(
            q, attributes, self.settings.bruteforce_max_attributes, self.settings.bruteforce_max_searches
        )
        if not l_cover(q, solution.index_set):
            return f"{q!r}: orders {[o.seq for o in solution.index_set]} miss a search"
        if len(solution.index_set) != best:
            return f"{q!r}: {len(solution.index_set)} indexes, optimum {best}"
        return None

    def check_range_cover(self, rng: random.Random, max_rows: int = 2000) -> Optional[str]:
        arity = rng.randint(1, 4)
        search = Search(rng.randint(1, (1 << arity) - 1))
        prefix = list(search.ids())
        rng.shuffle(prefix)
        rest = [i for i in range(arity) if i not in search.attrs]
        rng.shuffle(rest)
        # extended-index case: the covering order continues past the search
        order = LexOrder(tuple(prefix + rest[: rng.randint(0, len(rest))]))

        relation = Relation(Schema.of("R", [f"a{i}" for i in range(arity)]), [order])
        domain = rng.randint(1, 20)
        for _ in range(rng.randint(0, max_rows)):
            relation.insert(tuple(rng.randrange(domain) for _ in range(arity)))

        pred = [(i, rng.randrange(domain)) for i in search.ids()]
        a, b = make_bounds(pred, order, arity)
        found = set(range_search(relation, order, a, b))
        expected = set(primitive_search_scan(relation, pred))
        if found != expected:
            return f"order {order.seq}, predicate {pred}: {len(found)} via range, {len(expected)} via scan"
        return None

    def check_end_to_end(self, rng: random.Random) -> Optional[str]:
        text, facts = random_program(rng)
        program = parse_program(text)
        runs = {mode: self.engine.execute_program(program, mode, facts=facts) for mode in RunMode}
        reference = runs[RunMode.SCAN].outputs()
        for mode in (RunMode.AUTO, RunMode.NAIVE):
            if runs[mode].outputs() != reference:
                return f"{mode.value} disagrees with scan on:\n{text}"
        auto = sum(runs[RunMode.AUTO].report.index_inserts.values())
        naive = sum(runs[RunMode.NAIVE].report.index_inserts.values())
        if naive < auto:
            return f"naive made {naive} index inserts, auto {auto}:\n{text}"
        return None

    def check_matching(self, rng: random.Random) -> Optional[str]:
        q = random_search_set(rng, rng.randint(1, 6), 20)
        graph = build_subset_graph(q)
        oracle = nx.Graph()
        oracle.add_nodes_from((("l", i) for i in range(len(graph.left))), bipartite=0)
        oracle.add_nodes_from((("r", j) for j in range(len(graph.right))), bipartite=1)
        oracle.add_edges_from((("l", i), ("r", j)) for i, j in graph.edges)
        top = [("l", i) for i in range(len(graph.left))]
        expected = len(nx.bipartite.hopcroft_karp_matching(oracle, top_nodes=top)) // 2
        matching = self.matcher(graph)
        if len(matching) != expected or not matching.pairs <= graph.edges:
            return f"{q!r}: matching of size {len(matching)}, networkx finds {expected}"
        return None

    def verify(self, seed: Optional[int] = None, trials: Optional[int] = None, suites: Sequence[str] = SUITES) -> VerifyReport:
        seed = self.settings.seed if seed is None else seed
        trials = trials or self.settings.verify_trials
        checks = {
            "dilworth": self.check_dilworth,
            "mosp": self.check_mosp,
            "range_cover": self.check_range_cover,
            "end_to_end": self.check_end_to_end,
            "matching": self.check_matching,
        }
        report = VerifyReport(seed=seed, trials=trials)
        for name in suites:
            report.suites.append(self._suite(name, seed, trials, checks[name]))
        return report
