"""Recall evaluation: run a question track against the engine and judge
rank-1 answers for correctness, relevance and completeness.

Judging is deterministic normalized string matching against gold answer
lists. The report writer emits JSON, a per-question CSV and a recall
figure so a run can be archived and eyeballed."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from pathlib import Path

from .analysis import Lexicon

ANSWER_MODES = ("precise", "sentence")

ARTICLES = frozenset({"a", "an", "the"})


class EmptyTrack(ValueError):
    """A track without questions cannot be scored."""


class TrackError(ValueError):
    """Malformed track file; the message names the offending line."""


@dataclass(frozen=True)
class QuestionRecord:
    id: str
    question: str
    gold_answers: tuple[str, ...]
    answer_mode: str  # precise | sentence

    def __post_init__(self):
        if not self.gold_answers:
            raise TrackError(f"question '{self.id}' has no gold answers")
        if self.answer_mode not in ANSWER_MODES:
            raise TrackError(f"question '{self.id}' has bad mode '{self.answer_mode}'")


@dataclass(frozen=True)
class Judgment:
    question_id: str
    correct: bool
    relevant: bool
    complete: bool
    matched_gold: str | None = None


@dataclass(frozen=True)
class EvalReport:
    total_questions: int
    correct_count: int
    recall_percent: float
    per_question: tuple[Judgment, ...]

    def to_dict(self) -> dict:
        return {
            "total_questions": self.total_questions,
            "correct_count": self.correct_count,
            "recall_percent": self.recall_percent,
            "per_question": [
                {
                    "question_id": j.question_id,
                    "correct": j.correct,
                    "relevant": j.relevant,
                    "complete": j.complete,
                    "matched_gold": j.matched_gold,
                }
                for j in self.per_question
            ],
        }


def normalize(text: str) -> str:
    """Lowercase, drop punctuation and articles, collapse whitespace."""
    cleaned = "".join(c if c.isalnum() or c.isspace() else " " for c in text.lower())
    words = [w for w in cleaned.split() if w not in ARTICLES]
    return " ".join(words)


def judge(answer: str | None, record: QuestionRecord, lexicon: Lexicon) -> Judgment:
    """Exact normalized match in precise mode, normalized substring match
    in sentence mode. A partial answer gets no credit, and completeness
    coincides with correctness."""
    if answer is None:
        return Judgment(record.id, False, False, False)
    normalized = normalize(answer)
    matched = None
    for gold in record.gold_answers:
        gold_norm = normalize(gold)
        if not gold_norm:
            continue
        if record.answer_mode == "precise" and normalized == gold_norm:
            matched = gold
            break
        if record.answer_mode == "sentence" and gold_norm in normalized:
            matched = gold
            break
    correct = matched is not None
    relevant = correct or _lemma_overlap(answer, record.gold_answers, lexicon)
    return Judgment(record.id, correct, relevant, correct, matched)


def _lemma_overlap(answer: str, golds: tuple[str, ...], lexicon: Lexicon) -> bool:
    answer_lemmas = {lexicon.lemmatize(w) for w in normalize(answer).split()}
    for gold in golds:
        for word in normalize(gold).split():
            if lexicon.lemmatize(word) in answer_lemmas:
                return True
    return False


def compute_recall(correct: int, total: int) -> float:
    """Percentage of correctly answered questions, one decimal, half-up."""
    if total < 1:
        raise EmptyTrack("total question count must be >= 1")
    value = Decimal(100 * correct) / Decimal(total)
    return float(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def run_track(track: list[QuestionRecord], engine) -> EvalReport:
    """Ask every track question and judge the rank-1 answer. The engine
    only needs an ask(question) method returning ranked answers."""
    if not track:
        raise EmptyTrack("the question track is empty")
    seen_ids = set()
    for record in track:
        if record.id in seen_ids:
            raise TrackError(f"duplicate question id '{record.id}'")
        seen_ids.add(record.id)
    lexicon = engine.analyzer.lexicon
    judgments = []
    for record in track:
        response = engine.ask(record.question)
        answer: str | None = None
        if response.answers:
            top = response.answers[0]
            answer = top.precise_answer if record.answer_mode == "precise" else top.sentence
        judgments.append(judge(answer, record, lexicon))
    judgments.sort(key=lambda j: j.question_id)
    correct = sum(1 for j in judgments if j.correct)
    return EvalReport(len(track), correct, compute_recall(correct, len(track)), tuple(judgments))


# -- track and report files --------------------------------------------------


def load_track(path: str | Path) -> list[QuestionRecord]:
    """JSON Lines, one record per line:
    {"id", "question", "gold": [...], "mode": "precise"|"sentence"}"""
    path = Path(path)
    if not path.exists():
        raise TrackError(f"track file not found: {path}")
    records = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TrackError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
        try:
            records.append(
                QuestionRecord(
                    id=str(raw["id"]),
                    question=str(raw["question"]),
                    gold_answers=tuple(raw["gold"]),
                    answer_mode=str(raw.get("mode", "precise")),
                )
            )
        except KeyError as exc:
            raise TrackError(f"{path}:{lineno}: missing field {exc}") from exc
    return records


def recall_by_mode(report: EvalReport, track: list[QuestionRecord]) -> dict[str, float]:
    modes: dict[str, str] = {r.id: r.answer_mode for r in track}
    out = {}
    for mode in ANSWER_MODES:
        judged = [j for j in report.per_question if modes.get(j.question_id) == mode]
        if judged:
            out[mode] = compute_recall(sum(j.correct for j in judged), len(judged))
    return out


def render_table(report: EvalReport, track: list[QuestionRecord]) -> str:
    modes = {r.id: r.answer_mode for r in track}
    lines = [
        f"{'question':<12} {'mode':<9} {'correct':<8} {'relevant':<9} {'matched gold'}",
        "-" * 60,
    ]
    for j in report.per_question:
        lines.append(
            f"{j.question_id:<12} {modes.get(j.question_id, '?'):<9} "
            f"{'yes' if j.correct else 'NO':<8} {'yes' if j.relevant else 'no':<9} "
            f"{j.matched_gold or ''}"
        )
    lines.append("-" * 60)
    lines.append(
        f"recall: {report.recall_percent}% "
        f"({report.correct_count}/{report.total_questions})"
    )
    for mode, recall in sorted(recall_by_mode(report, track).items()):
        lines.append(f"  {mode} mode: {recall}%")
    return "\n".join(lines)


def write_report_files(report: EvalReport, track: list[QuestionRecord], out_dir: str | Path) -> list[Path]:
    """Write report.json, per_question.csv and recall.png into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out_dir / "report.json"
    json_path.write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    written.append(json_path)

    modes = {r.id: r.answer_mode for r in track}
    csv_path = out_dir / "per_question.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["question_id", "mode", "correct", "relevant", "complete", "matched_gold"])
        for j in report.per_question:
            writer.writerow([
                j.question_id, modes.get(j.question_id, ""),
                int(j.correct), int(j.relevant), int(j.complete), j.matched_gold or "",
            ])
    written.append(csv_path)

    written.append(_write_recall_figure(report, track, out_dir / "recall.png"))
    return written


def _write_recall_figure(report: EvalReport, track: list[QuestionRecord], path: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_mode = recall_by_mode(report, track)
    labels = ["overall"] + sorted(by_mode)
    values = [report.recall_percent] + [by_mode[m] for m in sorted(by_mode)]

    fig, (ax_recall, ax_counts) = plt.subplots(1, 2, figsize=(9, 4))
    bars = ax_recall.bar(labels, values, color=["#4878d0", "#6acc64", "#d65f5f"][:len(labels)])
    ax_recall.set_ylim(0, 100)
    ax_recall.set_ylabel("recall (%)")
    ax_recall.set_title("Recall")
    ax_recall.bar_label(bars, fmt="%.1f")

    correct = report.correct_count
    ax_counts.bar(["correct", "incorrect"], [correct, report.total_questions - correct],
                  color=["#6acc64", "#d65f5f"])
    ax_counts.set_ylabel("questions")
    ax_counts.set_title("Judgments")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
