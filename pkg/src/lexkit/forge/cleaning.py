"""Rule-based cleanup of raw records into input/output pairs."""

from __future__ import annotations

from typing import Sequence

from ..errors import SchemaMismatch
from ..textnorm import normalize_text
from .types import InstructionPair, RawRecord, StageStats, TaskSchema


def clean_and_pair(
    records: Sequence[RawRecord], schema: TaskSchema
) -> tuple[list[InstructionPair], StageStats]:
    """Whitespace-normalize the mapped fields and emit pairs in input order.

    Records missing a mapped field (absent, or empty after cleanup) are
    dropped with a counted reason. A schema whose field names appear in no
    record at all is a configuration error, not a data problem.
    """
    if records:
        for field_name in (schema.input_field, schema.output_field):
            if not any(field_name in r.payload for r in records):
                raise SchemaMismatch(
                    f"field {field_name!r} is absent from every record"
                )
    stats = StageStats(stage="clean")
    pairs: list[InstructionPair] = []
    for record in records:
        cleaned_in = normalize_text(record.payload.get(schema.input_field, ""))
        cleaned_out = normalize_text(record.payload.get(schema.output_field, ""))
        if not cleaned_in:
            stats.drop("missing_input")
            continue
        if not cleaned_out:
            stats.drop("missing_output")
            continue
        pairs.append(
            InstructionPair(
                input=cleaned_in,
                output=cleaned_out,
                task_tag=schema.task_tag,
                scenario_tag=schema.scenario_tag,
                source_id=record.source_id,
                strategy="cleaned",
            )
        )
        stats.kept += 1
    return pairs, stats
