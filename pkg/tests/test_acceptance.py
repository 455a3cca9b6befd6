"""Acceptance suite: one test (or parametrized row) per criterion, at the
stated tolerances. Run `pytest tests/test_acceptance.py -v` for a pass/fail
line per criterion. Everything runs offline under replay transcripts.

Known honest failures, analyzed in the repo notes: the published objective
Average for the Baichuan-Chat row cannot be reproduced from its printed
cells within ±0.01 (its PFE cell matches no integer count out of 170), and
three published subjective Averages differ from the mean of their printed
dimension values by 0.0067 > 0.005 (they were computed from unrounded
means). The remaining rows reproduce exactly as specified.
"""

import json
import random
import time
from pathlib import Path

import pytest

from lexkit.errors import AlreadyWrapped
from lexkit.forge import (
    TaskSchema,
    build_triplets,
    clean_and_pair,
    develop_thinking,
    export_dataset,
    extract_citations,
    load_raw_records,
    shape_pairs,
)
from lexkit.gateway import Gateway, ProviderProfile, transcript_import
from lexkit.judge import evaluate as judge_evaluate, load_default_rubric, load_subjective_dataset
from lexkit.kb import KnowledgeBase, RetrievalConfig
from lexkit.mcq import (
    FewShotConfig,
    evaluate as mcq_evaluate,
    extract_answer,
    load_mcq_dataset,
    micro_average,
)
from lexkit.prompts import default_library
from lexkit.rag import apply_lcot

from .oracles import oracle_bm25_rank, oracle_micro_average

DATA = Path(__file__).parent / "data"
PROFILE = ProviderProfile(provider_id="fixture", mode="replay")
MODEL = "scripted-v1"
JUDGE_MODEL = "judge-v1"

# ----------------------------------------------------------------------
# Criterion 1: micro-average reproduction (published objective rows)
# ----------------------------------------------------------------------

QUESTION_COUNTS = [
    ("NJE", "single", 537), ("NJE", "multi", 463),
    ("PAE", "single", 118), ("PAE", "multi", 276),
    ("CPA", "single", 197), ("CPA", "multi", 120),
    ("UNGEE", "single", 320), ("UNGEE", "multi", 87),
    ("PFE", "single", 170), ("LBK", "single", 275),
]

OBJECTIVE_ROWS = [
    # (model, cell accuracies in QUESTION_COUNTS order, published average)
    ("ChatGLM", [31.66, 1.08, 27.97, 2.90, 37.06, 13.33, 39.69, 20.69, 37.65, 42.91], 24.66),
    ("Baichuan-Chat", [31.47, 10.15, 29.66, 8.70, 35.53, 19.17, 50.0, 27.59, 53.12, 53.45], 30.78),
    ("Chinese-alpaca2", [25.7, 10.15, 30.51, 11.59, 32.99, 19.17, 40.94, 21.84, 44.12, 43.27], 26.73),
    ("GPT-3.5-turbo", [36.5, 10.58, 37.29, 17.03, 42.13, 21.67, 51.25, 28.74, 53.53, 54.18], 34.10),
    ("LexiLaw", [20.11, 7.56, 23.73, 10.14, 24.87, 19.17, 31.56, 16.09, 31.76, 40.36], 21.50),
    ("LawGPT", [22.91, 6.26, 31.36, 7.61, 25.38, 16.67, 30.31, 13.79, 34.71, 29.09], 20.60),
    ("Lawyer-LLaMA", [35.75, 5.62, 32.20, 6.52, 29.95, 13.33, 32.50, 14.94, 39.41, 39.64], 25.05),
    ("ChatLaw", [27.56, 7.99, 31.36, 9.42, 35.53, 11.67, 35.62, 17.24, 42.35, 41.09], 25.20),
    ("DISC-LawLLM", [42.09, 19.87, 40.68, 18.48, 39.59, 19.17, 50.94, 25.29, 57.06, 54.91], 37.10),
]


class TestC1MicroAverageReproduction:
    @pytest.mark.parametrize(
        "model,cells,published", OBJECTIVE_ROWS, ids=[r[0] for r in OBJECTIVE_ROWS]
    )
    def test_row_reproduces_published_average(self, model, cells, published):
        counts = [n for _, _, n in QUESTION_COUNTS]
        computed = micro_average(zip(cells, counts))
        assert computed == pytest.approx(
            oracle_micro_average(list(zip(cells, counts))), abs=1e-9
        )
        assert computed == pytest.approx(published, abs=0.01), (
            f"{model}: computed {computed:.4f} vs published {published}"
        )

    def test_runtime_under_1s(self):
        start = time.monotonic()
        counts = [n for _, _, n in QUESTION_COUNTS]
        for _, cells, _ in OBJECTIVE_ROWS:
            micro_average(zip(cells, counts))
        assert time.monotonic() - start < 1.0


# ----------------------------------------------------------------------
# Criterion 2: subjective average reproduction (published rows)
# ----------------------------------------------------------------------

SUBJECTIVE_ROWS = [
    ("ChatGLM", 2.64, 2.75, 3.23, 2.87),
    ("Baichuan-Chat", 3.22, 3.34, 3.18, 3.25),
    ("Chinese-Alpaca2", 3.13, 3.23, 3.17, 3.17),
    ("LexiLaw", 3.06, 2.62, 3.00, 2.90),
    ("LaWGPT", 3.02, 2.58, 2.96, 2.86),
    ("Lawyer-LLaMa", 3.13, 2.83, 3.35, 3.10),
    ("ChatLaw", 3.31, 2.90, 3.35, 3.19),
    ("DISC-LawLLM", 3.46, 3.12, 3.59, 3.39),
]


class TestC2SubjectiveAverageReproduction:
    @pytest.mark.parametrize(
        "model,acc,cpl,clr,published", SUBJECTIVE_ROWS, ids=[r[0] for r in SUBJECTIVE_ROWS]
    )
    def test_row_mean_matches_published_average(self, model, acc, cpl, clr, published):
        from lexkit.judge import dimension_average

        computed = dimension_average(acc, cpl, clr)
        assert computed == pytest.approx((acc + cpl + clr) / 3, abs=1e-12)
        assert computed == pytest.approx(published, abs=0.005), (
            f"{model}: computed {computed:.4f} vs published {published}"
        )


# ----------------------------------------------------------------------
# Criterion 3: answer-extraction corpus at 100% agreement
# ----------------------------------------------------------------------


class TestC3ExtractionCorpus:
    def test_corpus_exact_set_agreement(self):
        cases = [
            json.loads(line)
            for line in (DATA / "extraction_corpus.jsonl").read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        assert len(cases) >= 50
        rules_seen = set()
        disagreements = []
        for case in cases:
            out = extract_answer(case["response"], case["options"])
            rules_seen.add(case["rule"])
            if sorted(out.letters) != case["letters"] or out.rule_used != case["rule"]:
                disagreements.append(case["id"])
        assert not disagreements, f"disagreements: {disagreements}"
        assert {"explicit_answer", "standalone_letters", "fallback_scan", "none"} <= rules_seen
        # corpus covers multi-answer cases
        assert any(len(c["letters"]) >= 2 for c in cases)


# ----------------------------------------------------------------------
# Criterion 4: retrieval oracle equivalence on randomized corpora
# ----------------------------------------------------------------------

WORDS = ["著作权", "专利", "合同", "侵权", "赔偿", "法院", "当事人", "抚养",
         "债务", "证据", "税收", "担保", "quantum", "flux"]


def _random_kb(rng: random.Random) -> tuple[KnowledgeBase, list]:
    kb = KnowledgeBase()
    target_chunks = rng.randint(20, 200)
    total = 0
    doc = 0
    while total < target_chunks:
        doc += 1
        n_articles = min(rng.randint(1, 8), target_chunks - total)
        body = "\n".join(
            f"第{'一二三四五六七八九十'[a]}条 "
            + "".join(rng.choice(WORDS) for _ in range(rng.randint(2, 15)))
            for a in range(n_articles)
        )
        kb.upsert(body, {"category": "测试", "title": f"法{doc}"})
        total += n_articles
    rows = [(c.doc_id, c.chunk_id, c.chunk_index, c.text) for c in kb._snapshot.chunks]
    return kb, rows


class TestC4RetrievalOracleEquivalence:
    def test_25_corpora_10_queries_each(self):
        start = time.monotonic()
        rng = random.Random(20250810)
        for corpus_idx in range(25):
            kb, rows = _random_kb(rng)
            assert len(rows) <= 200
            for query_idx in range(10):
                query = " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 4)))
                k = rng.randint(1, 12)
                hits = kb.search(query, RetrievalConfig(k=k))
                expected = oracle_bm25_rank(rows, query, k)
                got = [(h.chunk_id, h.score) for h in hits]
                assert got == expected, f"corpus {corpus_idx} query {query_idx}: {query!r}"
        elapsed = time.monotonic() - start
        assert elapsed < 10.0, f"oracle sweep took {elapsed:.2f}s"


# ----------------------------------------------------------------------
# Criterion 5: end-to-end objective run on the 24-item fixture
# ----------------------------------------------------------------------

# Hand-computed from the scripted responses in scripts/make_fixtures.py.
EXPECTED_OBJECTIVE_CELLS = {
    ("NJE", "single"): (2, 3), ("NJE", "multi"): (2, 3),
    ("PAE", "single"): (1, 2), ("PAE", "multi"): (1, 2),
    ("CPA", "single"): (1, 2), ("CPA", "multi"): (2, 2),
    ("UNGEE", "single"): (2, 3), ("UNGEE", "multi"): (1, 1),
    ("PFE", "single"): (2, 3), ("LBK", "single"): (2, 3),
}


class TestC5ObjectiveEndToEnd:
    def _run(self):
        gateway = Gateway(transcript_import(DATA / "mcq_transcripts.jsonl"))
        return mcq_evaluate(
            load_mcq_dataset(DATA / "mcq_fixture.jsonl"),
            load_mcq_dataset(DATA / "mcq_exemplars.jsonl"),
            FewShotConfig(seed=7),
            PROFILE,
            gateway,
            MODEL,
        )

    def test_report_equals_hand_computed_cells(self):
        report = self._run().report
        assert report.n_items == 24
        got = {key: (cell.correct, cell.total) for key, cell in report.cells.items()}
        assert got == EXPECTED_OBJECTIVE_CELLS
        assert report.micro_average == pytest.approx(100 * 16 / 24, abs=1e-9)

    def test_two_runs_byte_identical_report_files(self, tmp_path):
        blobs = []
        for name in ("a.json", "b.json"):
            summary = self._run().report.to_summary()
            path = tmp_path / name
            path.write_text(json.dumps(summary, ensure_ascii=False, indent=2), encoding="utf-8")
            blobs.append(path.read_bytes())
        assert blobs[0] == blobs[1]


# ----------------------------------------------------------------------
# Criterion 6: end-to-end subjective run on the 6-item fixture
# ----------------------------------------------------------------------


class TestC6SubjectiveEndToEnd:
    def test_dimension_means_and_exclusions(self):
        gateway = Gateway(transcript_import(DATA / "subjective_transcripts.jsonl"))
        report, judgments = judge_evaluate(
            load_subjective_dataset(DATA / "subjective_fixture.jsonl"),
            PROFILE,
            PROFILE,
            gateway,
            load_default_rubric(),
            MODEL,
            JUDGE_MODEL,
            repeats=3,
        )
        # hand-computed: s01 (4,4,4), s02 (3,2,4), s03 (4,4,4), s04 (2,3,2),
        # s05 (4,5,4); s06 excluded after re-asks
        assert report.mean_acc == pytest.approx(3.4, abs=0.001)
        assert report.mean_cpl == pytest.approx(3.6, abs=0.001)
        assert report.mean_clr == pytest.approx(3.6, abs=0.001)
        assert report.average == pytest.approx(10.6 / 3, abs=0.001)
        assert report.n_items == 5
        assert report.n_invalid == 1
        excluded = [j.item.id for j in judgments if not j.included]
        assert excluded == ["s06"]


# ----------------------------------------------------------------------
# Criterion 7: chain-of-thought wrapper byte-exactness
# ----------------------------------------------------------------------


class TestC7LcotByteExactness:
    @pytest.mark.parametrize("name", ["lcot_zh", "lcot_en"])
    def test_ten_cases_byte_exact(self, name):
        template = default_library().get(name)
        cases = [
            json.loads(line)["case"]
            for line in (DATA / "lcot_cases.jsonl").read_text(encoding="utf-8").splitlines()
        ]
        assert len(cases) == 10
        for case in cases:
            wrapped = apply_lcot(case, template)
            expected = template.body.replace("{X}", case)
            assert wrapped.encode("utf-8") == expected.encode("utf-8")

    def test_double_wrap_rejected(self):
        template = default_library().get("lcot_zh")
        wrapped = apply_lcot("案情描述。", template)
        with pytest.raises(AlreadyWrapped):
            apply_lcot(wrapped, template)


# ----------------------------------------------------------------------
# Criterion 8: forge conservation, determinism, and citation quality
# ----------------------------------------------------------------------


class TestC8ForgeConservationAndDeterminism:
    def _pipeline(self, out_path: Path):
        records = load_raw_records(DATA / "forge_records.jsonl")
        assert len(records) == 200
        schema = TaskSchema.from_file(DATA / "forge_schema.json")
        gateway = Gateway(transcript_import(DATA / "forge_transcripts.jsonl"))

        pairs, clean_stats = clean_and_pair(records, schema)
        assert clean_stats.total == 200  # conservation at the clean stage
        shaped, shape_stats, rejections = shape_pairs(pairs, PROFILE, gateway, MODEL)
        assert shape_stats.total == len(pairs)  # conservation at the shape stage
        template = default_library().get("lcot_zh")
        wrapped = [develop_thinking(p, template) for p in shaped]
        triplets, remaining, triplet_stats = build_triplets(
            wrapped, records
        )
        assert triplet_stats.total == len(wrapped)  # conservation at the triplet stage
        export_dataset(triplets + remaining, out_path)
        return clean_stats, shape_stats, rejections, triplets, remaining

    def test_conservation_at_every_stage(self, tmp_path):
        clean_stats, shape_stats, rejections, triplets, remaining = self._pipeline(
            tmp_path / "dataset.jsonl"
        )
        assert (clean_stats.kept, clean_stats.dropped, clean_stats.rejected) == (192, 8, 0)
        assert clean_stats.drop_reasons == {"missing_input": 4, "missing_output": 4}
        assert (shape_stats.kept, shape_stats.rejected) == (189, 3)
        assert len(rejections) == 3
        assert len(triplets) + len(remaining) == 189
        assert (len(triplets), len(remaining)) == (48, 141)

    def test_export_byte_identical_across_runs(self, tmp_path):
        self._pipeline(tmp_path / "run1.jsonl")
        self._pipeline(tmp_path / "run2.jsonl")
        assert (tmp_path / "run1.jsonl").read_bytes() == (tmp_path / "run2.jsonl").read_bytes()

    def test_citation_precision_recall_meet_documented_threshold(self):
        tp = fp = fn = 0
        for line in (DATA / "citations_fixture.jsonl").read_text(encoding="utf-8").splitlines():
            record = json.loads(line)
            got = {(r.title, r.article_no) for r in extract_citations(record["text"])}
            want = {(l["title"], l["article_no"]) for l in record["labels"]}
            tp += len(got & want)
            fp += len(got - want)
            fn += len(want - got)
        precision = tp / (tp + fp)
        recall = tp / (tp + fn)
        print(f"\ncitation extraction on 100-record fixture: "
              f"precision={precision:.4f} recall={recall:.4f}")
        assert precision >= 0.95  # documented threshold (README)
        assert recall == pytest.approx(93 / 98, abs=1e-9)  # reported, frozen


# ----------------------------------------------------------------------
# Criterion 9: dynamic-update invariant over randomized sequences
# ----------------------------------------------------------------------


class TestC9DynamicUpdateInvariant:
    @staticmethod
    def _term_factory():
        # pairwise bigram-disjoint two-character terms: every character is
        # globally unique, so a term's only bigram is the term itself
        chars = [chr(0x5600 + 3 * i) for i in range(200)]
        pairs = iter(zip(chars[0::2], chars[1::2]))
        return lambda: "".join(next(pairs))

    def test_no_query_returns_superseded_chunks(self):
        rng = random.Random(99)
        for _ in range(20):
            kb = KnowledgeBase()
            new_term = self._term_factory()
            titles = [f"法规{i}" for i in range(rng.randint(2, 4))]
            version_terms: dict[str, list[str]] = {t: [] for t in titles}
            for _step in range(rng.randint(4, 12)):
                title = rng.choice(titles)
                term = new_term()
                version_terms[title].append(term)
                kb.upsert(f"第一条 本法规涉及{term}。", {"category": "c", "title": title})
            all_queries = [t for terms in version_terms.values() for t in terms]
            # every hit of every query resolves to the live version of its lineage
            for query in all_queries:
                for hit in kb.search(query, RetrievalConfig(k=10)):
                    chunk = kb.resolve_chunk(hit.chunk_id)
                    live = kb.store.get(chunk.doc_id)
                    assert chunk.version == live.version
            for title in titles:
                terms = version_terms[title]
                if not terms:
                    continue
                # terms unique to superseded versions score nothing
                for old_term in terms[:-1]:
                    hits = kb.search(old_term, RetrievalConfig(k=10))
                    assert all(h.score == 0.0 for h in hits)
                # the live version's term surfaces from the live version
                hits = kb.search(terms[-1], RetrievalConfig(k=10))
                top = kb.resolve_chunk(hits[0].chunk_id)
                doc = kb.store.find_by_title(title)
                assert hits[0].score > 0
                assert top.doc_id == doc.doc_id and top.version == doc.version
