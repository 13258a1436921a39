"""Classifier evaluation: confusion matrices, macro metrics, model ranking.

Metrics are macro-averaged by default (weighted available behind a flag);
classes whose denominator is zero contribute 0 rather than NaN. Label-space
mismatches between a model and a dataset are resolved by intersecting the
two spaces; out-of-intersection labels land in reserved buckets that can
never match, so they always count as errors.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .errors import IOFailure, LabelError, RangeError, SchemaError
from .streams import _header_index, _open_text, _parse_float

OTHER_TRUTH = "[other-truth]"
OTHER_PREDICTED = "[other-predicted]"


@dataclass(frozen=True)
class LabeledPredictions:
    items: tuple[tuple[str, str], ...]
    label_space: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.label_space)) != len(self.label_space):
            raise LabelError("label_space contains duplicates")
        space = set(self.label_space)
        for truth, predicted in self.items:
            if truth not in space:
                raise LabelError(f"truth label {truth!r} outside the label space")
            if predicted not in space:
                raise LabelError(f"predicted label {predicted!r} outside the label space")


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.counts) != n or any(len(row) != n for row in self.counts):
            raise SchemaError("confusion matrix must be square over its labels")
        if any(cell < 0 for row in self.counts for cell in row):
            raise RangeError("confusion matrix counts must be non-negative")

    @property
    def total(self) -> int:
        return sum(cell for row in self.counts for cell in row)


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    averaging: str = "macro"

    def __post_init__(self):
        for name in ("accuracy", "precision", "recall", "f1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise RangeError(f"{name} {value} outside [0, 1]")


@dataclass(frozen=True)
class ModelScoreMatrix:
    models: tuple[str, ...]
    datasets: tuple[str, ...]
    scores: dict[tuple[str, str], EvalReport] = field(compare=False)

    def __post_init__(self):
        for model in self.models:
            for dataset in self.datasets:
                if (model, dataset) not in self.scores:
                    raise SchemaError(f"score grid is missing cell ({model}, {dataset})")


@dataclass(frozen=True)
class RankedModel:
    model: str
    mean_accuracy: float
    mean_f1: float


def confusion_matrix(preds: LabeledPredictions) -> ConfusionMatrix:
    if not preds.items:
        raise RangeError("cannot tally an empty prediction set")
    index = {label: i for i, label in enumerate(preds.label_space)}
    n = len(preds.label_space)
    counts = [[0] * n for _ in range(n)]
    for truth, predicted in preds.items:
        counts[index[truth]][index[predicted]] += 1
    return ConfusionMatrix(preds.label_space, tuple(tuple(row) for row in counts))


def _per_class(cm: ConfusionMatrix) -> tuple[list[float], list[float], list[float], list[int]]:
    n = len(cm.labels)
    row_sums = [sum(cm.counts[i]) for i in range(n)]
    col_sums = [sum(cm.counts[i][j] for i in range(n)) for j in range(n)]
    precision, recall, f1 = [], [], []
    for i in range(n):
        diag = cm.counts[i][i]
        p = diag / col_sums[i] if col_sums[i] else 0.0
        r = diag / row_sums[i] if row_sums[i] else 0.0
        precision.append(p)
        recall.append(r)
        f1.append(2.0 * p * r / (p + r) if p + r else 0.0)
    return precision, recall, f1, row_sums


def metrics(cm: ConfusionMatrix, weighted: bool = False) -> EvalReport:
    """Macro metrics by default; weighted=True weights classes by support."""
    total = cm.total
    if total == 0:
        raise RangeError("confusion matrix holds no items")
    precision, recall, f1, row_sums = _per_class(cm)
    accuracy = sum(cm.counts[i][i] for i in range(len(cm.labels))) / total
    if weighted:
        def average(values):
            return math.fsum(v * row_sums[i] for i, v in enumerate(values)) / total
        averaging = "weighted"
    else:
        def average(values):
            return math.fsum(values) / len(values)
        averaging = "macro"
    return EvalReport(accuracy, average(precision), average(recall), average(f1), averaging)


@dataclass(frozen=True)
class AlignedSpace:
    """Intersection of a model's and a dataset's label spaces.

    Out-of-intersection labels are remapped to side-specific buckets, so a
    stray truth can never coincide with a stray prediction.
    """

    labels: tuple[str, ...]

    @property
    def full_space(self) -> tuple[str, ...]:
        return self.labels + (OTHER_TRUTH, OTHER_PREDICTED)

    def remap_truth(self, label: str) -> str:
        return label if label in self.labels else OTHER_TRUTH

    def remap_predicted(self, label: str) -> str:
        return label if label in self.labels else OTHER_PREDICTED


def align_label_space(model_labels, dataset_labels) -> AlignedSpace:
    """Intersect the two spaces, keeping the dataset's label order."""
    if not model_labels or not dataset_labels:
        raise LabelError("label spaces must be non-empty")
    model_set = set(model_labels)
    shared = tuple(label for label in dataset_labels if label in model_set)
    if not shared:
        raise LabelError("model and dataset label spaces are disjoint")
    return AlignedSpace(shared)


def align_predictions(items, model_labels, dataset_labels) -> LabeledPredictions:
    """Remap raw (truth, predicted) pairs into the aligned space."""
    space = align_label_space(model_labels, dataset_labels)
    remapped = tuple(
        (space.remap_truth(truth), space.remap_predicted(predicted))
        for truth, predicted in items
    )
    return LabeledPredictions(remapped, space.full_space)


def rank_models(matrix: ModelScoreMatrix) -> list[RankedModel]:
    """Sort models by mean accuracy over datasets, descending.

    Ties fall back to mean f1, then input order (the sort is stable).
    """
    n = len(matrix.datasets)
    ranked = []
    for model in matrix.models:
        reports = [matrix.scores[(model, dataset)] for dataset in matrix.datasets]
        mean_acc = math.fsum(r.accuracy for r in reports) / n
        mean_f1 = math.fsum(r.f1 for r in reports) / n
        ranked.append(RankedModel(model, mean_acc, mean_f1))
    ranked.sort(key=lambda r: (-r.mean_accuracy, -r.mean_f1))
    return ranked


def parse_predictions(source) -> LabeledPredictions:
    """Read a truth,predicted file; the label space is every label seen,
    in order of first appearance."""
    fh, name, close = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{name}: empty file, expected a header row") from None
        cols = _header_index(header, ("truth", "predicted"), f"{name}:1")
        items = []
        space: dict[str, None] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < len(header):
                raise SchemaError(f"{name}:{lineno}: expected {len(header)} cells, got {len(row)}")
            truth = row[cols["truth"]].strip()
            predicted = row[cols["predicted"]].strip()
            if not truth or not predicted:
                raise SchemaError(f"{name}:{lineno}: empty label cell")
            items.append((truth, predicted))
            space.setdefault(truth)
            space.setdefault(predicted)
    finally:
        if close:
            fh.close()
    if not items:
        raise SchemaError(f"{name}: no labeled items")
    return LabeledPredictions(tuple(items), tuple(space))


GRID_HEADER = ("model", "dataset", "accuracy", "precision", "recall", "f1")


def parse_grid(source) -> ModelScoreMatrix:
    """Read a long-form score grid (one model,dataset row per cell)."""
    fh, name, close = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{name}: empty file, expected a header row") from None
        cols = _header_index(header, GRID_HEADER, f"{name}:1")
        models: dict[str, None] = {}
        datasets: dict[str, None] = {}
        scores: dict[tuple[str, str], EvalReport] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            where = f"{name}:{lineno}"
            if len(row) < len(header):
                raise SchemaError(f"{where}: expected {len(header)} cells, got {len(row)}")
            model = row[cols["model"]].strip()
            dataset = row[cols["dataset"]].strip()
            if not model or not dataset:
                raise SchemaError(f"{where}: empty model or dataset cell")
            key = (model, dataset)
            if key in scores:
                raise SchemaError(f"{where}: duplicate cell for ({model}, {dataset})")
            values = [
                _parse_float(row[cols[metric]], metric, where)
                for metric in ("accuracy", "precision", "recall", "f1")
            ]
            scores[key] = EvalReport(*values)
            models.setdefault(model)
            datasets.setdefault(dataset)
    finally:
        if close:
            fh.close()
    if not scores:
        raise SchemaError(f"{name}: no score rows")
    return ModelScoreMatrix(tuple(models), tuple(datasets), scores)


def render_report(report: EvalReport) -> str:
    lines = [
        f"classifier evaluation ({report.averaging} averaging)",
        f"accuracy  {report.accuracy:.4f}",
        f"precision {report.precision:.4f}",
        f"recall    {report.recall:.4f}",
        f"f1        {report.f1:.4f}",
    ]
    return "\n".join(lines) + "\n"


def render_ranking(ranking: list[RankedModel]) -> str:
    lines = ["rank  mean_accuracy  mean_f1  model"]
    for position, entry in enumerate(ranking, start=1):
        lines.append(
            f"{position:>4}  {entry.mean_accuracy:>13.4f}  {entry.mean_f1:>7.4f}  {entry.model}"
        )
    return "\n".join(lines) + "\n"


def save_predictions(items, path) -> None:
    """Inverse of parse_predictions, mostly for fixtures and demos."""
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh)
        writer.writerow(("truth", "predicted"))
        writer.writerows(items)
