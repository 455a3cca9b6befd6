"""Single executable for every pipeline stage.

Exit codes: 0 success, 1 validation/usage error, 2 runtime error. All
machine-readable output goes through --out; human-readable tables print to
stdout. Under replay providers every subcommand is deterministic.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import judge as judge_mod
from .config import DEFAULT_CONFIG_NAME, Workbench, builtin_config, load_config
from .errors import LexkitError, ValidationError
from .forge import (
    TaskSchema,
    build_triplets,
    clean_and_pair,
    dataset_stats,
    develop_thinking,
    export_dataset,
    knowledge_expand,
    load_dataset,
    load_raw_records,
    render_stats,
    shape_pairs,
)
from .gateway import user_request
from .kb import RetrievalConfig, read_ingest_lines
from .mcq import FewShotConfig, evaluate as mcq_evaluate, load_mcq_dataset, render_report


def _write_json(path: str | None, payload) -> None:
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(
            json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help=f"Workbench config file (default: ./{DEFAULT_CONFIG_NAME} when present).")
@click.pass_context
def cli(ctx: click.Context, config_path: str | None) -> None:
    """Legal-intelligence workbench: knowledge base, dataset forge,
    evaluation harnesses, and the HTTP service."""
    if config_path:
        config = load_config(config_path)
    elif Path(DEFAULT_CONFIG_NAME).exists():
        config = load_config(DEFAULT_CONFIG_NAME)
    else:
        config = builtin_config()
    ctx.obj = Workbench(config)


# ---------------------------------------------------------------- kb


@cli.group()
def kb() -> None:
    """Knowledge-base management."""


@kb.command("ingest")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.pass_obj
def kb_ingest(bench: Workbench, in_path: str) -> None:
    """Ingest documents (one JSON per line: category, title, body)."""
    count = 0
    for obj in read_ingest_lines(in_path):
        bench.kb.upsert(
            obj["body"],
            {
                "category": obj["category"],
                "title": obj["title"],
                "effective_date": obj.get("effective_date"),
            },
        )
        count += 1
    bench.save_kb()
    click.echo(f"ingested {count} document(s); index size {bench.kb.index_size}")


@kb.command("rebuild")
@click.pass_obj
def kb_rebuild(bench: Workbench) -> None:
    """Rebuild the index from the stored documents."""
    bench.kb.rebuild_index()
    bench.save_kb()
    click.echo(f"rebuilt index over {bench.kb.index_size} chunk(s)")


@kb.command("search")
@click.option("--q", "query", required=True)
@click.option("--k", default=None, type=int)
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_obj
def kb_search(bench: Workbench, query: str, k: int | None, out_path: str | None) -> None:
    """Top-K search over the active statute chunks."""
    config = RetrievalConfig(k=k or bench.config.eval.k)
    hits = bench.kb.search(query, config)
    rows = []
    for hit in hits:
        chunk = bench.kb.resolve_chunk(hit.chunk_id)
        doc = bench.kb.store.get(chunk.doc_id, version=chunk.version)
        rows.append(
            {
                "rank": hit.rank,
                "score": hit.score,
                "chunk_id": hit.chunk_id,
                "category": doc.category,
                "title": doc.title,
                "article_no": chunk.article_no,
                "text": chunk.text.strip(),
            }
        )
        article = f" 第{chunk.article_no}条" if chunk.article_no else ""
        click.echo(f"[{hit.rank}] {hit.score:.4f} {doc.category} · {doc.title}{article}")
    _write_json(out_path, {"query": query, "hits": rows})


# ---------------------------------------------------------------- forge


@cli.group()
def forge() -> None:
    """Instruction dataset construction."""


@forge.command("clean")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--schema", "schema_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--stats-out", default=None, type=click.Path())
def forge_clean(in_path: str, schema_path: str, out_path: str, stats_out: str | None) -> None:
    """Rule-based cleanup of raw records into pairs."""
    records = load_raw_records(in_path)
    schema = TaskSchema.from_file(schema_path)
    pairs, stats = clean_and_pair(records, schema)
    export_dataset(pairs, out_path)
    _write_json(stats_out, stats.to_dict())
    click.echo(f"kept {stats.kept}, dropped {stats.dropped} -> {out_path}")


@forge.command("shape")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--provider", default=None)
@click.option("--rejects-out", default=None, type=click.Path())
@click.pass_obj
def forge_shape(bench: Workbench, in_path: str, out_path: str,
                provider: str | None, rejects_out: str | None) -> None:
    """Rewrite pair outputs into labeled syllogism form via the model."""
    entry = bench.config.provider(provider)
    pairs = [p for p in load_dataset(in_path)]
    shaped, stats, rejections = shape_pairs(
        pairs, entry.profile, bench.gateway(entry.name), entry.model
    )
    export_dataset(shaped, out_path)
    bench.flush_transcripts()
    _write_json(rejects_out, {"stats": stats.to_dict(), "rejections": rejections})
    click.echo(f"shaped {stats.kept}, rejected {stats.rejected} -> {out_path}")


@forge.command("expand")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True),
              help="MCQ dataset with gold answers.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--provider", default=None)
@click.pass_obj
def forge_expand(bench: Workbench, in_path: str, out_path: str, provider: str | None) -> None:
    """Expand gold-annotated exam questions into explained answers."""
    entry = bench.config.provider(provider)
    gateway = bench.gateway(entry.name)
    expanded = []
    rejected = 0
    for item in load_mcq_dataset(in_path):
        try:
            expanded.append(knowledge_expand(item, entry.profile, gateway, entry.model))
        except LexkitError:
            rejected += 1
    export_dataset(expanded, out_path)
    bench.flush_transcripts()
    click.echo(f"expanded {len(expanded)}, rejected {rejected} -> {out_path}")


@forge.command("lcot")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--template", "template_name", default="lcot_zh")
@click.pass_obj
def forge_lcot(bench: Workbench, in_path: str, out_path: str, template_name: str) -> None:
    """Wrap pair inputs with the syllogism chain-of-thought template."""
    template = bench.templates.get(template_name)
    wrapped = [develop_thinking(p, template) for p in load_dataset(in_path)]
    export_dataset(wrapped, out_path)
    click.echo(f"wrapped {len(wrapped)} pair(s) -> {out_path}")


@forge.command("triplet")
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True))
@click.option("--records", "records_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--pairs-out", default=None, type=click.Path(),
              help="Where the citation-free pairs go (default: alongside --out).")
@click.pass_obj
def forge_triplet(bench: Workbench, pairs_path: str, records_path: str,
                  out_path: str, pairs_out: str | None) -> None:
    """Attach extracted statute references, splitting triplets from pairs."""
    pairs = list(load_dataset(pairs_path))
    records = load_raw_records(records_path)
    kb = bench.kb if bench.kb.index_size else None
    triplets, remaining, _ = build_triplets(pairs, records, kb=kb)
    export_dataset(triplets, out_path)
    remaining_path = pairs_out or str(Path(out_path).with_suffix(".pairs.jsonl"))
    export_dataset(remaining, remaining_path)
    click.echo(f"{len(triplets)} triplet(s) -> {out_path}; {len(remaining)} pair(s) -> {remaining_path}")


@forge.command("export")
@click.option("--in", "in_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def forge_export(in_paths: tuple[str, ...], out_path: str) -> None:
    """Merge dataset files into one canonical export."""
    items = [item for path in in_paths for item in load_dataset(path)]
    export_dataset(items, out_path)
    click.echo(f"exported {len(items)} item(s) -> {out_path}")


@forge.command("stats")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
def forge_stats(in_path: str, out_path: str | None) -> None:
    """Subset statistics in the four-column dataset table layout."""
    stats = dataset_stats(load_dataset(in_path))
    click.echo(render_stats(stats))
    _write_json(out_path, stats.to_dict())


# ---------------------------------------------------------------- eval


@cli.group(name="eval")
def eval_group() -> None:
    """Objective and subjective benchmark harnesses."""


@eval_group.command("obj")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--pool", "pool_path", required=True, type=click.Path(exists=True))
@click.option("--provider", default=None)
@click.option("--model", default=None)
@click.option("--shots-single", default=None, type=int)
@click.option("--shots-multi", default=None, type=int)
@click.option("--seed", default=None, type=int)
@click.option("--concurrency", default=None, type=int)
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_obj
def eval_obj(bench: Workbench, dataset_path: str, pool_path: str, provider: str | None,
             model: str | None, shots_single: int | None, shots_multi: int | None,
             seed: int | None, concurrency: int | None, out_path: str | None) -> None:
    """Few-shot multiple-choice accuracy benchmark."""
    entry = bench.config.provider(provider)
    defaults = bench.config.eval
    config = FewShotConfig(
        n_single=shots_single if shots_single is not None else defaults.shots_single,
        n_multi=shots_multi if shots_multi is not None else defaults.shots_multi,
        seed=seed if seed is not None else defaults.seed,
        exemplar_pool_path=pool_path,
    )
    result = mcq_evaluate(
        load_mcq_dataset(dataset_path),
        load_mcq_dataset(pool_path),
        config,
        entry.profile,
        bench.gateway(entry.name),
        model or entry.model,
        concurrency=concurrency if concurrency is not None else bench.config.concurrency,
    )
    bench.flush_transcripts()
    click.echo(render_report(result.report, model_name=model or entry.model))
    _write_json(out_path, result.report.to_summary())


@eval_group.command("subj")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--provider", default=None)
@click.option("--judge-provider", default=None)
@click.option("--model", default=None)
@click.option("--judge-model", default=None)
@click.option("--repeats", default=None, type=int)
@click.option("--concurrency", default=None, type=int)
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_obj
def eval_subj(bench: Workbench, dataset_path: str, provider: str | None,
              judge_provider: str | None, model: str | None, judge_model: str | None,
              repeats: int | None, concurrency: int | None, out_path: str | None) -> None:
    """Referee-scored subjective benchmark."""
    entry = bench.config.provider(provider)
    judge_entry = bench.config.provider(judge_provider)
    report, _ = judge_mod.evaluate(
        judge_mod.load_subjective_dataset(dataset_path),
        entry.profile,
        judge_entry.profile,
        bench.gateway(entry.name),
        judge_mod.load_default_rubric(bench.templates),
        model or entry.model,
        judge_model or judge_entry.model,
        repeats=repeats if repeats is not None else bench.config.eval.repeats,
        concurrency=concurrency if concurrency is not None else bench.config.concurrency,
        judge_gateway=bench.gateway(judge_entry.name),
    )
    bench.flush_transcripts()
    click.echo(judge_mod.render_subjective_report(report, model_name=model or entry.model))
    _write_json(out_path, judge_mod.report_summary(report))


# ---------------------------------------------------------------- gateway


@cli.group(name="gateway")
def gateway_group() -> None:
    """Record transcripts and verify replay coverage."""


def _load_requests(path: str, provider_id: str, default_model: str):
    requests = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            requests.append(
                user_request(
                    provider_id,
                    obj.get("model", default_model),
                    obj["text"],
                    temperature=float(obj.get("temperature", 0.0)),
                )
            )
    return requests


@gateway_group.command("record")
@click.option("--requests", "requests_path", required=True, type=click.Path(exists=True))
@click.option("--provider", default=None)
@click.pass_obj
def gateway_record(bench: Workbench, requests_path: str, provider: str | None) -> None:
    """Run requests in record mode, appending to the provider transcript."""
    entry = bench.config.provider(provider)
    if entry.profile.mode != "record":
        raise ValidationError(f"provider {entry.name!r} is not in record mode")
    gateway = bench.gateway(entry.name)
    for request in _load_requests(requests_path, entry.profile.provider_id, entry.model):
        gateway.complete(request, entry.profile)
    bench.flush_transcripts()
    click.echo(f"recorded {len(gateway.store)} transcript entr(y/ies)")


@gateway_group.command("replay-verify")
@click.option("--requests", "requests_path", required=True, type=click.Path(exists=True))
@click.option("--provider", default=None)
@click.pass_obj
def gateway_replay_verify(bench: Workbench, requests_path: str, provider: str | None) -> None:
    """Check every request resolves against the stored transcript."""
    entry = bench.config.provider(provider)
    gateway = bench.gateway(entry.name)
    missing = []
    for request in _load_requests(requests_path, entry.profile.provider_id, entry.model):
        if gateway.store.lookup(request.request_tag) is None:
            missing.append(request.request_tag)
    if missing:
        raise ValidationError(f"{len(missing)} request(s) missing from transcript")
    click.echo("all requests replayable")


# ---------------------------------------------------------------- serve


@cli.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8600, type=int)
@click.pass_obj
def serve(bench: Workbench, host: str, port: int) -> None:
    """Run the HTTP facade."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(bench), host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:  # --help and friends
        return int(exc.exit_code)
    except (click.UsageError, ValidationError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except LexkitError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
