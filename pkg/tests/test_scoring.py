import math
import random

import numpy as np
import pytest

from oracle import oracle_aggregate, oracle_pipeline, oracle_rule
from fundmatch.embedding import EmbeddingVector, VectorStore
from fundmatch.errors import ValidationError
from fundmatch.profiling import PublicationSet
from fundmatch.scoring import (
    FULL_MEAN,
    SCOPE_ACROSS_INDICATORS,
    SCOPE_PER_INDICATOR,
    SCOPE_PRE_AGGREGATION,
    TOP_THIRD_MEAN,
    aggregate,
    cosine,
    normalize,
    score_matrix,
    top_k_for,
)


def vec(values, doc_id="V"):
    arr = np.asarray(values, dtype=np.float32)
    return EmbeddingVector(doc_id=doc_id, dim=len(arr), components=arr, model_tag="hash-test")


class TestCosine:
    def test_identical_nonzero_vector(self):
        v = vec([0.3, 0.4, 1.2])
        assert cosine(v, v) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine(vec([1.0, 0.0]), vec([0.0, 1.0])) == 0.0

    def test_hand_value_inverse_sqrt2(self):
        assert cosine(vec([1.0, 0.0]), vec([1.0, 1.0])) == pytest.approx(0.70710678, abs=1e-8)

    def test_zero_vector_gives_zero(self):
        assert cosine(vec([0.0, 0.0]), vec([1.0, 1.0])) == 0.0

    def test_dim_mismatch(self):
        with pytest.raises(ValidationError):
            cosine(vec([1.0]), vec([1.0, 2.0]))

    def test_scale_invariance(self):
        # power-of-two scale stays exact in float32 storage
        a, b = vec([0.2, -0.5, 0.9]), vec([1.0, 0.4, -0.1])
        base = cosine(a, b)
        assert cosine(vec(4.0 * a.components), b) == pytest.approx(base, abs=1e-9)


class TestTopKRule:
    @pytest.mark.parametrize("n", range(1, 21))
    def test_matches_brute_force_boundary(self, n):
        assert top_k_for(n) == oracle_rule(n)

    def test_six_is_full_mean(self):
        assert top_k_for(6) == (FULL_MEAN, 6)

    def test_seven_switches_to_top_third(self):
        assert top_k_for(7) == (TOP_THIRD_MEAN, 3)

    def test_single_publication(self):
        assert top_k_for(1) == (FULL_MEAN, 1)

    def test_zero_rejected(self):
        with pytest.raises(ValidationError):
            top_k_for(0)

    def test_alternative_denominator(self):
        # ceil(n/4) <= 2 until n = 9
        assert top_k_for(8, denominator=4) == (FULL_MEAN, 8)
        assert top_k_for(9, denominator=4) == (TOP_THIRD_MEAN, 3)


class TestAggregate:
    def test_top_third_hand_value(self):
        sims = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3]
        assert aggregate(sims, TOP_THIRD_MEAN, 3) == pytest.approx(0.8)

    def test_full_mean_hand_value(self):
        assert aggregate([0.2, 0.4, 0.6], FULL_MEAN, 3) == pytest.approx(0.4)

    def test_singleton(self):
        assert aggregate([0.37], FULL_MEAN, 1) == 0.37

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            aggregate([], FULL_MEAN, 0)

    def test_selection_by_value_only(self):
        # order of the input must not matter
        sims = [0.1, 0.9, 0.5, 0.9, 0.2, 0.9, 0.4]
        assert aggregate(sims, TOP_THIRD_MEAN, 3) == pytest.approx(0.9)

    def test_raising_below_kth_does_not_change_top_third(self):
        sims = [0.9, 0.8, 0.7, 0.1, 0.1, 0.1, 0.1]
        before = aggregate(sims, TOP_THIRD_MEAN, 3)
        sims[4] = 0.65  # still below the 3rd largest
        assert aggregate(sims, TOP_THIRD_MEAN, 3) == pytest.approx(before)

    def test_raising_in_top_never_decreases(self):
        sims = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3]
        before = aggregate(sims, TOP_THIRD_MEAN, 3)
        sims[0] = 0.95
        assert aggregate(sims, TOP_THIRD_MEAN, 3) >= before


class TestNormalize:
    def test_hand_values(self):
        out = normalize("R", "I", {"c1": 0.2, "c2": 0.4, "c3": 0.6})
        assert out["c1"].z == pytest.approx(-1.22474487, abs=1e-6)
        assert out["c2"].z == pytest.approx(0.0, abs=1e-9)
        assert out["c3"].z == pytest.approx(1.22474487, abs=1e-6)

    def test_all_equal_gives_zero(self):
        out = normalize("R", "I", {"c1": 0.5, "c2": 0.5})
        assert all(s.z == 0.0 for s in out.values())

    def test_single_call_gives_zero(self):
        out = normalize("R", "I", {"c1": 0.9})
        assert out["c1"].z == 0.0
        assert out["c1"].sigma_r == 0.0

    def test_population_std_semantics(self):
        out = normalize("R", "I", {"a": 1.0, "b": 3.0})
        # population std of [1, 3] is 1, sample std would be sqrt(2)
        assert out["a"].sigma_r == pytest.approx(1.0)


def random_setup(seed, n_researchers=4, n_calls=3, n_pubs=7, dim=8, shared=False):
    rng = random.Random(seed)
    pub_ids = [f"P{i}" for i in range(n_pubs)]
    call_ids = [f"C{i}" for i in range(n_calls)]
    store = VectorStore(model_tag="hash-test", dim=dim)
    raw = {}
    for doc_id in pub_ids + call_ids:
        values = [rng.uniform(-1, 1) for _ in range(dim)]
        store.add(vec(values, doc_id=doc_id))
        raw[doc_id] = [float(np.float32(x)) for x in values]
    sets = []
    for r in range(n_researchers):
        for ind in ("IndA", "IndB"):
            chosen = sorted(rng.sample(pub_ids, rng.randint(1, n_pubs)))
            sets.append(PublicationSet(f"R{r}", ind, chosen, eligible=True))
    return sets, store, call_ids, raw


class TestScoreMatrix:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    @pytest.mark.parametrize("scope", [SCOPE_PER_INDICATOR, SCOPE_ACROSS_INDICATORS, SCOPE_PRE_AGGREGATION])
    def test_oracle_equivalence(self, seed, scope):
        sets, store, call_ids, raw = random_setup(seed)
        rows = score_matrix(sets, store, call_ids, scope=scope)
        want = oracle_pipeline(
            [(s.researcher_id, s.indicator_name, list(s.pub_ids)) for s in sets],
            raw,
            call_ids,
            scope=scope,
        )
        assert len(rows) == len(want.rows)
        for got, expected in zip(rows, want.rows):
            assert (got.researcher_id, got.indicator, got.call_id) == (
                expected.researcher_id,
                expected.indicator,
                expected.call_id,
            )
            assert got.a == pytest.approx(expected.a, abs=1e-9)
            assert got.z == pytest.approx(expected.z, abs=1e-9)
            assert (got.n_set, got.k_used, got.rule) == (expected.n_set, expected.k_used, expected.rule)

    def test_z_mean_zero_std_one_per_group(self):
        sets, store, call_ids, _ = random_setup(11, n_calls=5)
        rows = score_matrix(sets, store, call_ids)
        groups = {}
        for r in rows:
            groups.setdefault((r.researcher_id, r.indicator), []).append(r.z)
        for zs in groups.values():
            arr = np.asarray(zs)
            if np.ptp(arr) > 0:
                assert abs(arr.mean()) <= 1e-9
                assert abs(arr.std() - 1.0) <= 1e-9

    def test_ineligible_sets_emit_nothing(self):
        sets, store, call_ids, _ = random_setup(5)
        sets = [PublicationSet(s.researcher_id, s.indicator_name, s.pub_ids, eligible=False) for s in sets]
        assert score_matrix(sets, store, call_ids) == []

    def test_zero_calls_empty_output(self):
        sets, store, _, _ = random_setup(5)
        assert score_matrix(sets, store, []) == []

    def test_missing_vector_is_fatal_and_names_doc(self):
        sets, store, call_ids, _ = random_setup(5)
        sets.append(PublicationSet("RX", "IndA", ["P-MISSING"], eligible=True))
        with pytest.raises(ValidationError, match="P-MISSING"):
            score_matrix(sets, store, call_ids)

    def test_scale_invariance_of_downstream(self):
        sets, store, call_ids, raw = random_setup(9)
        rows = score_matrix(sets, store, call_ids)
        scaled = VectorStore(model_tag="hash-test", dim=store.dim)
        for doc_id in store.doc_ids():
            scaled.add(vec(4.0 * store.get(doc_id).components, doc_id=doc_id))
        rows2 = score_matrix(sets, scaled, call_ids)
        for a, b in zip(rows, rows2):
            assert a.z == pytest.approx(b.z, abs=1e-9)
            assert a.a == pytest.approx(b.a, abs=1e-9)

    def test_permutation_invariance_bitwise(self):
        sets, store, call_ids, _ = random_setup(13)
        rows = score_matrix(sets, store, call_ids)
        rng = random.Random(0)
        shuffled_sets = sets[:]
        rng.shuffle(shuffled_sets)
        shuffled_calls = call_ids[:]
        rng.shuffle(shuffled_calls)
        rows2 = score_matrix(shuffled_sets, store, shuffled_calls)
        assert rows == rows2

    def test_thread_count_does_not_change_output(self):
        sets, store, call_ids, _ = random_setup(17, n_researchers=6)
        assert score_matrix(sets, store, call_ids, threads=1) == score_matrix(
            sets, store, call_ids, threads=4
        )

    def test_unknown_scope_rejected(self):
        sets, store, call_ids, _ = random_setup(5)
        with pytest.raises(ValidationError):
            score_matrix(sets, store, call_ids, scope="bogus")
