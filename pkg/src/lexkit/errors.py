"""Exception hierarchy shared across the workbench.

Every domain error derives from LexkitError so the CLI and service can map
validation failures and runtime failures to distinct exit codes / statuses.
"""

from __future__ import annotations


class LexkitError(Exception):
    """Base class for all workbench errors."""

    code = "error"


class ValidationError(LexkitError):
    """Bad input or configuration supplied by the caller."""

    code = "validation_error"


# --- llm_gateway ---

class TransportError(LexkitError):
    """Provider call failed after the retry budget was exhausted."""

    code = "transport_error"


class ReplayMiss(LexkitError):
    """Replay mode has no transcript entry for the request tag."""

    code = "replay_miss"


class AuthMissing(ValidationError):
    """The credential environment variable is unset in live mode."""

    code = "auth_missing"


class CorruptTranscript(ValidationError):
    """Transcript file does not parse as one JSON record per line."""

    code = "corrupt_transcript"


# --- knowledge_base ---

class EmptyBody(ValidationError):
    code = "empty_body"


class MetadataMissing(ValidationError):
    code = "metadata_missing"


class UnknownDocument(ValidationError):
    code = "unknown_document"


class EmptyQuery(ValidationError):
    code = "empty_query"


class IndexEmpty(LexkitError):
    code = "index_empty"


# --- rag_engine / templates ---

class EmptyInput(ValidationError):
    code = "empty_input"


class TemplateInvalid(ValidationError):
    code = "template_invalid"


class AlreadyWrapped(ValidationError):
    """Input already carries the syllogism wrapper; double wrapping refused."""

    code = "already_wrapped"


class UnresolvedChunk(ValidationError):
    code = "unresolved_chunk"


# --- instruction_forge ---

class SchemaMismatch(ValidationError):
    code = "schema_mismatch"


class ShapingRejected(LexkitError):
    """Refined response failed syllogism validation twice."""

    code = "shaping_rejected"


class ExpansionInconsistent(LexkitError):
    """Expanded response dropped the gold letters twice."""

    code = "expansion_inconsistent"


class AlignmentError(ValidationError):
    code = "alignment_error"


# --- eval_objective ---

class ParseError(ValidationError):
    code = "parse_error"


class InvariantViolation(ValidationError):
    code = "invariant_violation"


class ExemplarShortage(ValidationError):
    code = "exemplar_shortage"


class DoubleCount(ValidationError):
    code = "double_count"


class EmptyDataset(ValidationError):
    code = "empty_dataset"


# --- eval_subjective ---

class EmptyCandidate(ValidationError):
    code = "empty_candidate"


class ScoreMissing(LexkitError):
    code = "score_missing"


class ScoreOutOfRange(LexkitError):
    code = "score_out_of_range"


class AllInvalid(LexkitError):
    """Every subjective item was excluded for unparseable judgments."""

    code = "all_invalid"


class IoError(LexkitError):
    code = "io_error"
