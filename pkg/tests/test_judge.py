import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexkit.errors import AllInvalid, EmptyCandidate, ScoreMissing, ScoreOutOfRange
from lexkit.gateway import Gateway, ProviderProfile, TranscriptEntry, TranscriptStore, user_request
from lexkit.judge import (
    JudgeScore,
    SubjectiveItem,
    build_judge_prompt,
    build_judge_reask,
    dimension_average,
    evaluate,
    load_default_rubric,
    parse_judge_scores,
    render_subjective_report,
)

PROFILE = ProviderProfile(provider_id="fixture", mode="replay")
MODEL = "scripted-v1"
JUDGE_MODEL = "judge-v1"
RUBRIC = load_default_rubric()


def item(i, scenario="consultation"):
    return SubjectiveItem(
        id=f"s{i:03d}",
        question=f"问题{i}：合同无效的情形有哪些？",
        reference_answer=f"标准答案{i}：恶意串通等情形。",
        scenario_tag=scenario,
    )


class TestBuildJudgePrompt:
    def test_contains_each_criterion_name_exactly_once(self):
        req = build_judge_prompt(item(1), "候选答案。", RUBRIC, PROFILE, JUDGE_MODEL)
        text = req.messages[0].content
        for name in ("Accuracy", "Completeness", "Clarity"):
            assert text.count(name) == 1
        assert item(1).question in text
        assert item(1).reference_answer in text
        assert "候选答案。" in text
        # the anti-length instruction rides in the completeness criterion
        assert "Do not let the length" in text

    def test_empty_candidate(self):
        with pytest.raises(EmptyCandidate):
            build_judge_prompt(item(1), "  ", RUBRIC, PROFILE, JUDGE_MODEL)

    def test_deterministic_bytes(self):
        a = build_judge_prompt(item(1), "候选。", RUBRIC, PROFILE, JUDGE_MODEL)
        b = build_judge_prompt(item(1), "候选。", RUBRIC, PROFILE, JUDGE_MODEL)
        assert a.messages[0].content == b.messages[0].content
        assert a.request_tag == b.request_tag


class TestParseJudgeScores:
    def test_plain_format(self):
        s = parse_judge_scores("Accuracy: 4\nCompleteness: 3\nClarity: 5")
        assert (s.accuracy, s.completeness, s.clarity) == (4.0, 3.0, 5.0)

    def test_order_tolerant(self):
        s = parse_judge_scores("Clarity: 5, Accuracy: 4, Completeness: 3")
        assert (s.accuracy, s.completeness, s.clarity) == (4.0, 3.0, 5.0)

    def test_synonyms_and_chinese_labels(self):
        s = parse_judge_scores("准确性：4分；完整性：3分；清晰度：5分")
        assert (s.accuracy, s.completeness, s.clarity) == (4.0, 3.0, 5.0)
        s = parse_judge_scores("ACC: 2.5 CPL: 3 CLR: 4.5")
        assert s.accuracy == 2.5 and s.clarity == 4.5

    def test_out_of_range(self):
        with pytest.raises(ScoreOutOfRange):
            parse_judge_scores("Accuracy: 6\nCompleteness: 3\nClarity: 5")
        with pytest.raises(ScoreOutOfRange):
            parse_judge_scores("Accuracy: 0.5 Completeness: 3 Clarity: 5")

    def test_missing_dimension(self):
        with pytest.raises(ScoreMissing):
            parse_judge_scores("Accuracy: 4\nClarity: 5")

    @given(
        st.floats(min_value=1, max_value=5).map(lambda x: round(x, 1)),
        st.floats(min_value=1, max_value=5).map(lambda x: round(x, 1)),
        st.floats(min_value=1, max_value=5).map(lambda x: round(x, 1)),
    )
    def test_round_trip_within_range(self, a, c, l):
        s = parse_judge_scores(f"Accuracy: {a}\nCompleteness: {c}\nClarity: {l}")
        assert (s.accuracy, s.completeness, s.clarity) == (a, c, l)

    def test_never_accepts_out_of_range_score(self):
        with pytest.raises(ScoreOutOfRange):
            JudgeScore(accuracy=5.5, completeness=3, clarity=3)


class TestAverages:
    def test_published_row_arithmetic(self):
        # strongest and weakest published rows reproduce their averages
        assert dimension_average(3.46, 3.12, 3.59) == pytest.approx(3.39, abs=0.005)
        assert dimension_average(2.64, 2.75, 3.23) == pytest.approx(2.87, abs=0.005)

    def test_render_rounds_half_up(self):
        from lexkit.judge import SubjectiveReport

        r = SubjectiveReport(
            mean_acc=10 / 3, mean_cpl=10 / 3, mean_clr=10 / 3,
            average=10 / 3, n_items=3, n_invalid=0,
        )
        text = render_subjective_report(r)
        assert text.splitlines()[1].count("3.33") == 4

    def test_render_published_row(self):
        from lexkit.judge import SubjectiveReport

        r = SubjectiveReport(
            mean_acc=3.46, mean_cpl=3.12, mean_clr=3.59,
            average=dimension_average(3.46, 3.12, 3.59), n_items=300, n_invalid=0,
        )
        row = render_subjective_report(r, model_name="m").splitlines()[1]
        assert "3.46" in row and "3.12" in row and "3.59" in row and "3.39" in row

    def test_render_footnote_on_exclusions(self):
        from lexkit.judge import SubjectiveReport

        r = SubjectiveReport(3.0, 3.0, 3.0, 3.0, n_items=5, n_invalid=2)
        assert "excluded: 2" in render_subjective_report(r)


def scripted_gateway(items, candidates, judge_scripts, reask_scripts=None):
    """judge_scripts: item_id -> list of judge response texts (per repeat).
    reask_scripts: (item_id, repeat) -> re-ask response text."""
    entries = []
    for it in items:
        cand_req = user_request(PROFILE.provider_id, MODEL, it.question)
        entries.append(TranscriptEntry(cand_req.request_tag, candidates[it.id]))
        judge_req = build_judge_prompt(it, candidates[it.id], RUBRIC, PROFILE, JUDGE_MODEL)
        for text in judge_scripts[it.id]:
            entries.append(TranscriptEntry(judge_req.request_tag, text))
        if reask_scripts:
            for (item_id, repeat), reask_text in reask_scripts.items():
                if item_id != it.id:
                    continue
                prior = judge_scripts[it.id][repeat]
                reask_req = build_judge_reask(
                    it, candidates[it.id], RUBRIC, prior, PROFILE, JUDGE_MODEL
                )
                entries.append(TranscriptEntry(reask_req.request_tag, reask_text))
    return Gateway(TranscriptStore(entries))


def judge_text(a, c, l):
    return f"Accuracy: {a}\nCompleteness: {c}\nClarity: {l}"


class TestEvaluate:
    def test_repeats_average_within_item(self):
        items = [item(1)]
        candidates = {"s001": "候选答案一。"}
        scripts = {"s001": [judge_text(4, 4, 4), judge_text(5, 5, 5), judge_text(3, 3, 3)]}
        gw = scripted_gateway(items, candidates, scripts)
        report, judgments = evaluate(
            items, PROFILE, PROFILE, gw, RUBRIC, MODEL, JUDGE_MODEL, repeats=3
        )
        assert judgments[0].dimension_means() == (4.0, 4.0, 4.0)
        assert (report.mean_acc, report.mean_cpl, report.mean_clr) == (4.0, 4.0, 4.0)
        assert report.average == 4.0

    def test_repeat_monotonicity_with_identical_judgments(self):
        items = [item(1), item(2)]
        candidates = {"s001": "候选一。", "s002": "候选二。"}
        scripts = {"s001": [judge_text(4, 3, 5)], "s002": [judge_text(2, 2, 2)]}
        gw = scripted_gateway(items, candidates, scripts)
        r1, _ = evaluate(items, PROFILE, PROFILE, gw, RUBRIC, MODEL, JUDGE_MODEL, repeats=1)
        r3, _ = evaluate(items, PROFILE, PROFILE, gw, RUBRIC, MODEL, JUDGE_MODEL, repeats=3)
        assert r1 == r3

    def test_parse_failure_reask_rescues(self):
        items = [item(1)]
        candidates = {"s001": "候选。"}
        scripts = {"s001": ["这答案还行吧。"]}  # unparseable
        reasks = {("s001", 0): judge_text(3, 3, 3)}
        gw = scripted_gateway(items, candidates, scripts, reasks)
        report, judgments = evaluate(
            items, PROFILE, PROFILE, gw, RUBRIC, MODEL, JUDGE_MODEL, repeats=1
        )
        assert report.n_invalid == 0
        assert judgments[0].dimension_means() == (3.0, 3.0, 3.0)

    def test_item_excluded_and_counted_when_all_repeats_fail(self):
        items = [item(1), item(2)]
        candidates = {"s001": "候选一。", "s002": "候选二。"}
        scripts = {"s001": ["不予置评。"], "s002": [judge_text(4, 4, 4)]}
        reasks = {("s001", 0): "我拒绝打分。"}
        gw = scripted_gateway(items, candidates, scripts, reasks)
        report, _ = evaluate(items, PROFILE, PROFILE, gw, RUBRIC, MODEL, JUDGE_MODEL, repeats=1)
        assert report.n_invalid == 1
        assert report.n_items == 1
        assert report.mean_acc == 4.0

    def test_all_invalid_raises(self):
        items = [item(1)]
        candidates = {"s001": "候选。"}
        scripts = {"s001": ["不予置评。"]}
        reasks = {("s001", 0): "仍然拒绝。"}
        gw = scripted_gateway(items, candidates, scripts, reasks)
        with pytest.raises(AllInvalid):
            evaluate(items, PROFILE, PROFILE, gw, RUBRIC, MODEL, JUDGE_MODEL, repeats=1)

    def test_per_scenario_rollup(self):
        items = [item(1, "consultation"), item(2, "judgment_prediction")]
        candidates = {"s001": "候选一。", "s002": "候选二。"}
        scripts = {"s001": [judge_text(4, 4, 4)], "s002": [judge_text(2, 2, 2)]}
        gw = scripted_gateway(items, candidates, scripts)
        report, _ = evaluate(items, PROFILE, PROFILE, gw, RUBRIC, MODEL, JUDGE_MODEL, repeats=1)
        assert report.per_scenario["consultation"]["accuracy"] == 4.0
        assert report.per_scenario["judgment_prediction"]["accuracy"] == 2.0
