from __future__ import annotations

import json

import pytest

from pilot.core import EmotionLabel, Script, Utterance
from pilot.embedding import ReferenceEmbedder, cosine_distance, embed_reference
from pilot.errors import CorruptStore
from pilot.memory import Hit, MemoryStore, Miss

NYC = "Plan a day trip to New York City"


def script(text: str = "ok") -> Script:
    return Script((Utterance(text, EmotionLabel.NEUTRAL),))


@pytest.fixture
def store(tmp_path) -> MemoryStore:
    return MemoryStore(path=tmp_path / "memory.json")


class TestLookup:
    def test_identity_hit_at_distance_zero(self, store):
        store.store(NYC, script())
        found = store.lookup(NYC)
        assert isinstance(found, Hit)
        assert found.distance == 0.0

    def test_empty_store_misses_with_no_distance(self, store):
        found = store.lookup("anything")
        assert isinstance(found, Miss)
        assert found.min_distance is None

    def test_unrelated_query_misses_above_tau(self, store):
        store.store(NYC, script())
        # independent oracle for the pinned distance
        oracle = cosine_distance(embed_reference("Tell a ghost story"), embed_reference(NYC))
        assert oracle > 0.4
        found = store.lookup("Tell a ghost story")
        assert isinstance(found, Miss)
        assert found.min_distance == pytest.approx(oracle, abs=1e-12)

    def test_hit_increments_hit_count(self, store):
        store.store(NYC, script())
        store.lookup(NYC)
        store.lookup(NYC)
        assert store.records[0].hit_count == 2
        assert store.total_hits == 2

    def test_tie_break_returns_earlier_record(self, store):
        store.store(NYC, script("first"))
        store.store(NYC, script("second"))
        assert len(store.records) == 2
        found = store.lookup(NYC)
        assert isinstance(found, Hit)
        assert found.record.script.utterances[0].text == "first"

    def test_hit_iff_distance_below_tau_by_exhaustive_scan(self, store):
        tasks = ["water the garden", "read the newspaper", "call aunt mary"]
        for task in tasks:
            store.store(task, script(task))
        query = "call uncle bob"
        distances = [
            cosine_distance(store.embedder.embed(query), record.embedding)
            for record in store.records
        ]
        found = store.lookup(query)
        if isinstance(found, Hit):
            assert found.distance <= store.tau
            assert found.distance == pytest.approx(min(distances))
        else:
            assert all(d > store.tau for d in distances)

    def test_threshold_monotonicity(self, store):
        store.store("play chess with me", script())
        query = "play chess with me please"
        tight = MemoryStore(tau=0.05)
        tight.records = store.records
        loose = MemoryStore(tau=0.9)
        loose.records = store.records
        found_tight = tight.lookup(query)
        if isinstance(found_tight, Hit):
            found_loose = loose.lookup(query)
            assert isinstance(found_loose, Hit)
            assert found_loose.record is found_tight.record

    def test_degenerate_query_is_a_miss(self, store):
        store.store(NYC, script())
        assert isinstance(store.lookup("!!!"), Miss)


class TestStore:
    def test_read_your_write(self, store):
        store.store("task one", script())
        assert isinstance(store.lookup("task one"), Hit)

    def test_empty_main_task_rejected(self, store):
        with pytest.raises(ValueError):
            store.store("  ", script())

    def test_forty_six_canonical_tasks_all_retrievable(self, store):
        tasks = [f"canonical duty number {i} covering {word}" for i, word in enumerate(
            ["gardens", "recipes", "chess", "novels", "stars", "tides", "trains", "maps",
             "paints", "drums", "kites", "soups", "quilts", "fossils", "orchids", "cellos",
             "bridges", "comets", "anchors", "lanterns", "meadows", "pyramids", "glaciers",
             "harbors", "violins", "daisies", "engines", "falcons", "geodes", "hammocks",
             "igloos", "jackets", "kettles", "ladders", "magnets", "nutmeg", "owls",
             "pianos", "quarries", "rivers", "saddles", "teapots", "umbrellas", "valleys",
             "wagons", "xylophones"]
        )]
        assert len(tasks) == 46
        for task in tasks:
            store.store(task, script(task))
        for task in tasks:
            found = store.lookup(task)
            assert isinstance(found, Hit)
            assert found.distance == 0.0
            assert found.record.main_task == task


class TestPersistence:
    def test_round_trip_is_lossless(self, store):
        store.store(NYC, script("the script"))
        store.lookup(NYC)  # bumps hit_count, persists
        reloaded = MemoryStore(path=store.path)
        reloaded.load()
        assert len(reloaded.records) == 1
        original, copy = store.records[0], reloaded.records[0]
        assert copy.main_task == original.main_task
        assert copy.embedding.to_list() == original.embedding.to_list()
        assert copy.hit_count == original.hit_count
        assert copy.created_at == original.created_at
        assert copy.script.to_dict() == original.script.to_dict()

    def test_load_missing_file_gives_empty_store(self, tmp_path):
        store = MemoryStore(path=tmp_path / "absent.json")
        store.load()
        assert store.records == []

    def test_truncated_file_is_corrupt(self, store):
        store.store(NYC, script())
        raw = store.path.read_text()
        store.path.write_text(raw[: len(raw) // 2])
        fresh = MemoryStore(path=store.path)
        with pytest.raises(CorruptStore):
            fresh.load()

    def test_checksum_mismatch_is_corrupt(self, store):
        store.store(NYC, script())
        doc = json.loads(store.path.read_text())
        doc["records"][0]["main_task"] = "tampered"
        store.path.write_text(json.dumps(doc))
        fresh = MemoryStore(path=store.path)
        with pytest.raises(CorruptStore):
            fresh.load()

    def test_wrong_version_is_corrupt(self, store):
        store.store(NYC, script())
        doc = json.loads(store.path.read_text())
        doc["version"] = 99
        store.path.write_text(json.dumps(doc))
        with pytest.raises(CorruptStore):
            MemoryStore(path=store.path).load()

    def test_dimension_mismatch_is_corrupt(self, store):
        store.store(NYC, script())
        fresh = MemoryStore(embedder=ReferenceEmbedder(dimension=64), path=store.path)
        with pytest.raises(CorruptStore):
            fresh.load()


class TestConfig:
    def test_tau_bounds(self):
        with pytest.raises(ValueError):
            MemoryStore(tau=0.0)
        with pytest.raises(ValueError):
            MemoryStore(tau=2.0)

    def test_default_tau_is_0_4(self):
        assert MemoryStore().tau == 0.4
