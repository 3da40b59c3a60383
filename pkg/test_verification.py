import random

import pytest

from autoindex.config import Settings
from autoindex.engine import parse_program
from autoindex.matching import Matching
from autoindex.models.report import RunMode
from autoindex.services.engine_service import EngineService
from autoindex.services.verification_service import VerificationService, random_program


@pytest.fixture
def service() -> VerificationService:
    return VerificationService(Settings())


def test_dilworth_suite(service):
    result = service.verify(seed=1, trials=1000, suites=["dilworth"]).suites[0]
    assert result.trials == 1000 and result.failures == 0


def test_mosp_oracle_suite(service):
    result = service.verify(seed=2, trials=1000, suites=["mosp"]).suites[0]
    assert result.trials == 1000 and result.failures == 0


def test_range_cover_suite(service):
    result = service.verify(seed=3, trials=500, suites=["range_cover"]).suites[0]
    assert result.failures == 0


def test_matching_agrees_with_networkx(service):
    assert service.verify(seed=4, trials=300, suites=["matching"]).passed


def test_end_to_end_corpus(service):
    report = service.verify(seed=5, trials=25, suites=["end_to_end"])
    assert report.suites[0].trials == 25 and report.passed


def test_random_programs_parse_and_insert_no_more_under_auto():
    rng = random.Random(9)
    engine = EngineService(Settings())
    for _ in range(20):
        text, facts = random_program(rng)
        program = parse_program(text)
        auto = engine.execute_program(program, RunMode.AUTO, facts=facts)
        naive = engine.execute_program(program, RunMode.NAIVE, facts=facts)
        assert sum(naive.report.index_inserts.values()) >= sum(auto.report.index_inserts.values())
        for relation in auto.report.relations:
            assert relation.auto_index_count <= relation.naive_index_count


def test_corrupted_matcher_fails_dilworth_suite():
    broken = VerificationService(Settings(), matcher=lambda graph: Matching(frozenset()))
    report = broken.verify(seed=0, trials=50, suites=["dilworth"])
    assert not report.passed
    assert report.suites[0].counterexample


def test_same_seed_replays_same_instances(service):
    first = service.verify(seed=8, trials=20, suites=["end_to_end", "mosp"])
    second = service.verify(seed=8, trials=20, suites=["end_to_end", "mosp"])
    assert [s.failures for s in first.suites] == [s.failures for s in second.suites]
    assert random_program(random.Random(1)) == random_program(random.Random(1))
