from __future__ import annotations

import itertools
import json
import random
from functools import lru_cache

import jsonschema
import pytest

from pilot.bench import (
    REPORT_SCHEMA,
    generate_suite,
    report_emit,
    rouge_l,
    rouge_l_text,
    run_suite,
)
from pilot.bench.rouge import lcs_length
from pilot.errors import InsufficientDiversity


def oracle_lcs(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    """Independent recursive LCS with memoization."""

    @lru_cache(maxsize=None)
    def rec(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + rec(i + 1, j + 1)
        return max(rec(i + 1, j), rec(i, j + 1))

    return rec(0, 0)


def oracle_rouge(reference: list[str], candidate: list[str]) -> float:
    if not reference or not candidate:
        return 0.0
    lcs = oracle_lcs(tuple(reference), tuple(candidate))
    if lcs == 0:
        return 0.0
    p = lcs / len(candidate)
    r = lcs / len(reference)
    return 2 * p * r / (p + r)


class TestRougeL:
    def test_identical_sequences(self):
        assert rouge_l(["a", "b", "c"], ["a", "b", "c"]) == 1.0

    def test_disjoint_vocabularies(self):
        assert rouge_l(["a", "b"], ["x", "y"]) == 0.0

    def test_worked_example(self):
        # ref "a b c d", cand "a c": LCS=2, P=1.0, R=0.5, F=2/3
        assert rouge_l(["a", "b", "c", "d"], ["a", "c"]) == pytest.approx(0.6667, abs=1e-4)

    def test_matches_oracle_on_1000_random_pairs(self):
        rng = random.Random(1234)
        vocabulary = [f"w{i}" for i in range(12)]
        for _ in range(1000):
            ref = [rng.choice(vocabulary) for _ in range(rng.randint(0, 10))]
            cand = [rng.choice(vocabulary) for _ in range(rng.randint(0, 10))]
            assert lcs_length(ref, cand) == oracle_lcs(tuple(ref), tuple(cand))
            assert rouge_l(ref, cand) == pytest.approx(oracle_rouge(ref, cand), abs=1e-12)

    def test_symmetry_under_swap(self):
        rng = random.Random(5)
        vocabulary = ["a", "b", "c", "d"]
        for _ in range(200):
            x = [rng.choice(vocabulary) for _ in range(rng.randint(1, 8))]
            y = [rng.choice(vocabulary) for _ in range(rng.randint(1, 8))]
            assert rouge_l(x, y) == pytest.approx(rouge_l(y, x), abs=1e-12)

    def test_self_similarity_is_one(self):
        rng = random.Random(6)
        for _ in range(50):
            x = [rng.choice(["p", "q", "r"]) for _ in range(rng.randint(1, 10))]
            assert rouge_l(x, x) == 1.0

    def test_non_increasing_when_deleting_matched_tokens(self):
        # candidate is a subsequence of the reference: every token is matched
        rng = random.Random(7)
        vocabulary = [f"t{i}" for i in range(9)]
        for _ in range(200):
            ref = [rng.choice(vocabulary) for _ in range(rng.randint(2, 10))]
            indices = sorted(rng.sample(range(len(ref)), rng.randint(2, len(ref))))
            cand = [ref[i] for i in indices]
            score = rouge_l(ref, cand)
            for drop in range(len(cand)):
                shorter = cand[:drop] + cand[drop + 1 :]
                assert rouge_l(ref, shorter) <= score + 1e-12


class TestGenerators:
    def test_route_split_and_diversity(self):
        suite = generate_suite("route", seed=7, n=20)
        targets = [i.expected["target"] for i in suite.instances]
        assert len(suite.instances) == 20
        assert targets.count("SIA") == round(20 * 0.58)
        texts = [i.text for i in suite.instances]
        assert all(
            rouge_l_text(a, b) <= 0.7 for a, b in itertools.combinations(texts, 2)
        )

    def test_route_default_scale_keeps_proportions(self):
        suite = generate_suite("route", seed=7)
        targets = [i.expected["target"] for i in suite.instances]
        assert targets.count("SIA") == 29 and targets.count("PIA") == 21

    def test_sensorbind_structure(self):
        suite = generate_suite("sensorbind", seed=7)
        categories = [i.category for i in suite.instances]
        assert categories.count("easy") == 20 and categories.count("hard") == 20
        for instance in suite.instances:
            commands = instance.expected["commands"]
            if instance.category == "easy":
                assert len(commands) == 1
            else:
                assert 2 <= len(commands) <= 4
                assert all(c["command"] == "BIND" for c in commands)
                sensors = [c["sensor"] for c in commands]
                assert len(set(sensors)) == len(sensors)

    def test_taskparser_structure(self):
        suite = generate_suite("taskparser", seed=7)
        assert len(suite.instances) == 10
        easy = [i for i in suite.instances if i.category == "easy"]
        hard = [i for i in suite.instances if i.category == "hard"]
        assert len(easy) == 2 and len(hard) == 8
        assert all(len(i.turns) <= 4 for i in easy)
        assert all(len(i.turns) >= 5 for i in hard)
        kinds = {turn.expected["action"] for i in suite.instances for turn in i.turns}
        assert kinds == {"NEW", "UPDATE", "DELETE", "UPGRADE", "DOWNGRADE", "MEMORY"}

    def test_fastthinking_cluster_shape(self):
        suite = generate_suite("fastthinking", seed=7, k=10)
        assert len(suite.clusters) == 10
        assert len(suite.instances) == 50
        per_cluster = {}
        for instance in suite.instances:
            per_cluster.setdefault(instance.expected["cluster_id"], []).append(instance)
        assert all(len(v) == 5 for v in per_cluster.values())

    def test_toolext_scales(self):
        for scale in (30, 50):
            suite = generate_suite("toolext", seed=7, scale=scale)
            assert len(suite.skills) == scale
            assert len(suite.instances) == scale
            names = {s["name"] for s in suite.skills}
            assert len(names) == scale
            assert all(i.expected["skill"] in names for i in suite.instances)

    def test_all_generated_datasets_respect_diversity_cutoff(self):
        for name, kwargs in [
            ("route", {}),
            ("sensorbind", {}),
            ("taskparser", {}),
            ("fastthinking", {}),
            ("toolext", {"scale": 30}),
        ]:
            suite = generate_suite(name, seed=7, **kwargs)
            texts = [i.text for i in suite.instances]
            worst = max(
                (rouge_l_text(a, b) for a, b in itertools.combinations(texts, 2)), default=0.0
            )
            assert worst <= 0.7, f"{name} violates the diversity cutoff: {worst}"

    def test_insufficient_diversity_raised(self):
        with pytest.raises(InsufficientDiversity):
            generate_suite("route", seed=7, n=4000)
        with pytest.raises(InsufficientDiversity):
            generate_suite("toolext", seed=7, scale=1000)

    def test_generation_deterministic_per_seed(self):
        a = generate_suite("route", seed=11, n=30)
        b = generate_suite("route", seed=11, n=30)
        assert [i.text for i in a.instances] == [i.text for i in b.instances]
        c = generate_suite("route", seed=12, n=30)
        assert [i.text for i in a.instances] != [i.text for i in c.instances]


class TestRunSuite:
    def test_route_scripted_mode_is_perfect_and_stable(self):
        report = run_suite("route", runs=5, seed=7, n=20)
        for condition in report.conditions:
            assert condition.mean == 100.0
            assert condition.std == 0.0

    def test_fastthinking_report_pattern(self):
        report = run_suite("fastthinking", runs=2, seed=7)
        fast_top1 = report.condition("fastpath-top1")
        raw_top1 = report.condition("rawtext-top1")
        assert fast_top1.mean == 100.0
        assert raw_top1.mean < fast_top1.mean
        assert report.condition("fastpath-rank1-dist").mean <= 0.01
        assert report.condition("rawtext-rank1-dist").mean >= 0.1
        assert (
            report.condition("fastpath-rank-margin").mean
            > report.condition("rawtext-rank-margin").mean
        )

    def test_toolext_all_scales_perfect(self):
        report = run_suite("toolext", runs=1, seed=7, scales=(30, 50))
        for condition in report.conditions:
            assert condition.mean == 100.0

    def test_report_schema_validates(self):
        report = run_suite("taskparser", runs=1, seed=7)
        jsonschema.validate(report.to_dict(), REPORT_SCHEMA)

    def test_reports_byte_stable(self, tmp_path):
        first = run_suite("route", runs=2, seed=9, n=16)
        second = run_suite("route", runs=2, seed=9, n=16)
        a, _ = report_emit(first, tmp_path / "a.json")
        b, _ = report_emit(second, tmp_path / "b.json")
        assert a.read_bytes() == b.read_bytes()

    def test_empty_suite_report(self):
        report = run_suite("route", runs=1, seed=7, n=0)
        assert report.conditions == []
        assert report.artifacts["instances"] == 0

    def test_report_emit_writes_text_table(self, tmp_path):
        report = run_suite("route", runs=1, seed=7, n=12)
        json_path, text_path = report_emit(report, tmp_path / "r.json")
        assert json_path.exists() and text_path.exists()
        assert "suite: route" in text_path.read_text()
        doc = json.loads(json_path.read_text())
        jsonschema.validate(doc, REPORT_SCHEMA)


class TestLatencyConditions:
    def test_fastthinking_with_latency_conditions(self):
        report = run_suite("fastthinking", runs=1, seed=7, include_latency=True)
        names = {c.name for c in report.conditions}
        assert {"latency-slow", "latency-fast", "latency-ratio"} <= names
        assert report.condition("latency-ratio").mean <= 0.5
        assert report.condition("latency-slow").mean > report.condition("latency-fast").mean
