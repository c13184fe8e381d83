"""Command-line interface.

Subcommands follow the pipeline order: mine, parse, classify-apis,
build-dataset, train, evaluate, transfer, predict, apply-labels, report.
All take a declarative YAML config; the tracker token comes from
APILABELS_TOKEN or GITHUB_TOKEN. Exit codes: 0 success, 1 user error,
2 data error, 3 remote error.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path

import click

from apilabels import codeparse, experiments
from apilabels.config import ExperimentConfig, ProjectConfig, load_config, tracker_token
from apilabels.corpus import filter_labels, mlsmote, restrict_labels
from apilabels.errors import ApiLabelsError, ConfigError, UserError
from apilabels.evaluation import EvalReport, cooccurrence, write_cooccurrence_csv
from apilabels.ingestion import (
    CsvSchema,
    GithubClient,
    TrackerCoordinates,
    filter_linked,
    import_csv,
    link_by_reference,
    load_snapshot,
    merge_change_lists,
    save_snapshot,
)
from apilabels.learn import binary_relevance_train
from apilabels.predict import (
    TrackerWriter,
    TrainedPipeline,
    apply_labels,
    predict_open_issues,
    read_predictions,
    write_predictions,
)
from apilabels.taxonomy import (
    Decision,
    DomainMap,
    ReviewSession,
    WordVectorStore,
    build_token_records,
    default_blocklist,
    domain_from_name,
    load_decisions_csv,
    replay_decider,
)

logger = logging.getLogger(__name__)


def cli_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ApiLabelsError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool):
    """Mine issues, map APIs to domains, train and apply label models."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _config_option(fn):
    return click.option(
        "--config", "config_path", required=True, type=click.Path(exists=True),
        help="Experiment config (YAML).",
    )(fn)


def _snapshot_dir(config: ExperimentConfig, project: ProjectConfig) -> Path:
    return Path(project.snapshot_dir) if project.snapshot_dir else config.project_workdir(project.name) / "snapshot"


# ---------------------------------------------------------------------------
# mine
# ---------------------------------------------------------------------------


@main.command()
@_config_option
@click.option("--project", required=True, help="Project name from the config.")
@click.option("--since", default=None, help="Only issues updated at/after this ISO timestamp.")
@cli_errors
def mine(config_path: str, project: str, since: str | None):
    """Fetch issues and changes, resolve links, cache them as NDJSON."""
    config = load_config(config_path)
    project_cfg = config.project(project)
    if project_cfg.tracker == "github":
        client = GithubClient(token=tracker_token())
        coords = TrackerCoordinates.parse(project_cfg.repo)
        issues = client.fetch_issues(coords, since=since)
        changes = client.fetch_changes(coords)
        links = link_by_reference(issues, changes)
    elif project_cfg.tracker == "csv":
        schema = CsvSchema.load(project_cfg.csv_issues_schema)
        imported = import_csv(project_cfg.csv_issues, schema)
        if project_cfg.csv_changes:
            changes_schema = CsvSchema.load(project_cfg.csv_changes_schema)
            change_list = import_csv(project_cfg.csv_changes, changes_schema).changes
            imported = merge_change_lists(imported, change_list)
        issues, changes, links = imported.issues, imported.changes, imported.links
        if imported.rejects:
            click.echo(f"{len(imported.rejects)} rejected rows", err=True)
    else:  # snapshot: already mined, just re-link
        issues, changes, links = load_snapshot(_snapshot_dir(config, project_cfg))
        if not links:
            links = link_by_reference(issues, changes)
    kept, discarded = filter_linked(
        [link for link in links if link.change.merged],
        codeparse.LANGUAGE_EXTENSIONS[project_cfg.language],
    )
    save_snapshot(_snapshot_dir(config, project_cfg), issues, changes, kept)
    click.echo(
        f"{project}: {len(issues)} issues, {len(changes)} changes, "
        f"{len(kept)} source-linked pairs ({discarded} links without source files)"
    )


# ---------------------------------------------------------------------------
# parse
# ---------------------------------------------------------------------------


@main.command()
@_config_option
@click.option("--project", required=True)
@cli_errors
def parse(config_path: str, project: str):
    """Scan the project checkout for imported APIs; write the inventory."""
    config = load_config(config_path)
    project_cfg = config.project(project)
    if not project_cfg.checkout:
        raise UserError(f"project {project} has no checkout path configured")
    result = codeparse.scan_tree(project_cfg.checkout, project_cfg.language)
    index = result.snapshot()
    workdir = config.project_workdir(project)
    workdir.mkdir(parents=True, exist_ok=True)
    codeparse.write_inventory_csv(workdir / "inventory.csv", result, project_cfg.language)
    (workdir / "snapshot_index.json").write_text(
        json.dumps(
            {"files": sorted(index.file_paths), "namespaces": sorted(index.api_namespaces)},
            indent=2,
        )
    )
    click.echo(
        f"{project}: {len(index.file_paths)} files, {len(index.api_namespaces)} distinct APIs"
        + (f", {len(result.unreadable)} unreadable" if result.unreadable else "")
    )


def _load_snapshot_index(workdir: Path) -> codeparse.SnapshotIndex:
    payload = json.loads((workdir / "snapshot_index.json").read_text())
    return codeparse.SnapshotIndex(
        file_paths=frozenset(payload["files"]),
        api_namespaces=frozenset(payload["namespaces"]),
    )


# ---------------------------------------------------------------------------
# classify-apis
# ---------------------------------------------------------------------------


@main.command("classify-apis")
@_config_option
@click.option("--project", required=True)
@click.option("--replay", "replay_path", type=click.Path(exists=True), default=None,
              help="Decisions CSV for non-interactive replay.")
@click.option("--suggestions", "k", default=5, show_default=True)
@cli_errors
def classify_apis(config_path: str, project: str, replay_path: str | None, k: int):
    """Review API tokens into domains (interactive, or replayed)."""
    config = load_config(config_path)
    project_cfg = config.project(project)
    workdir = config.project_workdir(project)
    file_apis = codeparse.read_inventory_csv(workdir / "inventory.csv")
    namespaces = sorted({ref.namespace for refs in file_apis.values() for ref in refs})
    if not config.vectors_path:
        raise UserError("config has no vectors path for similarity suggestions")
    store = WordVectorStore.load(config.vectors_path)
    blocklist = default_blocklist(set(project_cfg.companies))
    map_path = workdir / "domain_map.jsonl"
    domain_map = DomainMap.load(map_path) if map_path.exists() else DomainMap(blocklist=blocklist)
    records = build_token_records(namespaces, store, blocklist, k=k)
    session = ReviewSession(records, domain_map, namespaces=namespaces, map_path=map_path)
    if replay_path:
        decisions = load_decisions_csv(replay_path)
        session.run(replay_decider(decisions))
    else:
        session.run(_interactive_decider(k))
    resolved = sum(1 for ns in namespaces if domain_map.classify_namespace(ns) is not None)
    click.echo(f"{project}: {resolved}/{len(namespaces)} namespaces resolved")


def _interactive_decider(k: int):
    def decide(record) -> Decision | None:
        click.echo(f"\n[{record.position}] {record.token!r} x{record.frequency}")
        for sample in record.samples:
            click.echo(f"    e.g. {sample}")
        if record.out_of_vocabulary:
            click.echo("    (token not in the vector store)")
        for i, (domain, score) in enumerate(record.suggestions, start=1):
            click.echo(f"    {i}. {domain.value}  {score:.2f}")
        answer = click.prompt(
            "accept #, type a domain name, s(kip), q(uit)", default="s", show_default=False
        ).strip()
        if answer == "q":
            raise click.Abort()
        if answer == "s" or not answer:
            return None
        if answer.isdigit() and 1 <= int(answer) <= len(record.suggestions):
            domain, score = record.suggestions[int(answer) - 1]
            return Decision(domain=domain, decided_by="nlp_accepted", score=score)
        try:
            return Decision(domain=domain_from_name(answer), decided_by="expert")
        except KeyError:
            click.echo(f"    unknown domain {answer!r}, skipping")
            return None

    return decide


# ---------------------------------------------------------------------------
# build-dataset
# ---------------------------------------------------------------------------


@main.command("build-dataset")
@_config_option
@click.option("--project", required=True)
@cli_errors
def build_dataset(config_path: str, project: str):
    """Turn mined, labeled issues into a TF-IDF dataset directory."""
    config = load_config(config_path)
    project_cfg = config.project(project)
    workdir = config.project_workdir(project)
    domain_map = DomainMap.load(workdir / "domain_map.jsonl")
    file_apis = codeparse.read_inventory_csv(workdir / "inventory.csv")
    snapshot_index = _load_snapshot_index(workdir)
    corpus = experiments.build_labeled_corpus(
        project_cfg, config, domain_map, file_apis, snapshot_index
    )
    if not corpus.row_ids:
        raise UserError(f"{project}: no labeled, linked issues to build from")
    dataset, model = experiments.vectorize_corpus(corpus, config, projects=(project,))
    from apilabels.corpus import diagnostics

    cardinality, density = diagnostics(dataset.labels)
    experiments.save_dataset(
        workdir / "dataset", dataset, corpus.documents, model,
        provenance={
            "project": project,
            "config_hash": config.config_hash(),
            "seed": config.seed,
            "corpus": config.corpus_settings(),
            "label_cardinality": round(cardinality, 4),
            "label_density": round(density, 4),
            "label_coverage": {
                "resolved": corpus.coverage.resolved,
                "unresolved": corpus.coverage.unresolved,
            },
        },
    )
    click.echo(
        f"{project}: dataset with {dataset.n_rows} rows, {dataset.features.shape[1]} features; "
        f"label cardinality {cardinality:.2f}, density {density:.2f}; "
        f"API coverage {corpus.coverage.rate():.0%}"
    )


# ---------------------------------------------------------------------------
# train
# ---------------------------------------------------------------------------


@main.command()
@_config_option
@click.option("--project", required=True)
@click.option("--out", "out_path", default=None, type=click.Path(), help="Model file destination.")
@cli_errors
def train(config_path: str, project: str, out_path: str | None):
    """Train on a full dataset directory and emit a model file."""
    config = load_config(config_path)
    project_cfg = config.project(project)
    workdir = config.project_workdir(project)
    dataset, _, tfidf = experiments.load_dataset(workdir / "dataset")
    filtered, dropped = filter_labels(dataset, config.label_filter_max_fraction)
    if dropped:
        click.echo(f"dropped labels: {', '.join(d['label'] for d in dropped)}")
    train_set = filtered
    if config.smote:
        train_set = mlsmote(train_set, k=config.smote_k, seed=config.seed)
    model = binary_relevance_train(
        train_set.features, train_set.labels, train_set.label_names,
        base_kind=config.algorithm, params=config.algorithm_params,
        seed=config.seed, n_jobs=config.n_jobs,
    )
    pipeline = TrainedPipeline(
        model=model, tfidf=tfidf,
        corpus_fields=config.fields,
        corpus_language=project_cfg.corpus_language,
        templates=project_cfg.templates,
        config_hash=config.config_hash(),
    )
    destination = Path(out_path) if out_path else workdir / "model.json"
    pipeline.save(destination)
    click.echo(f"{project}: trained {config.algorithm} on {train_set.n_rows} rows -> {destination}")


# ---------------------------------------------------------------------------
# evaluate / transfer
# ---------------------------------------------------------------------------


def _write_reports(directory: Path, name: str, reports: list[EvalReport], summary: dict) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for report in reports:
        split = report.metadata.get("split", 0)
        (directory / f"{name}-split{split:02d}.json").write_text(report.to_json())
    (directory / f"{name}-summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))


@main.command()
@_config_option
@click.option("--jobs", default=None, type=int, help="Parallel training workers (overrides config).")
@cli_errors
def evaluate(config_path: str, jobs: int | None):
    """Run the configured evaluation (per-project or merged)."""
    config = load_config(config_path)
    if jobs is not None:
        config.n_jobs = jobs
    reports_dir = Path(config.workdir) / "reports"
    if config.mode == "merged":
        result = experiments.run_merged(config)
        _write_reports(reports_dir, "merged", result["reports"], result["summary"])
        _echo_summary("merged", result["summary"])
    elif config.mode == "per_project":
        results = experiments.run_per_project(config)
        for name, result in results.items():
            _write_reports(reports_dir, name, result["reports"], result["summary"])
            _echo_summary(name, result["summary"])
    else:
        raise ConfigError("evaluate handles per_project and merged; use the transfer command")


def _echo_summary(name: str, summary: dict) -> None:
    click.echo(
        f"{name}: micro P {summary['micro_precision_mean']:.3f}±{summary['micro_precision_std']:.3f} "
        f"R {summary['micro_recall_mean']:.3f}±{summary['micro_recall_std']:.3f} "
        f"F {summary['micro_f_mean']:.3f}±{summary['micro_f_std']:.3f} "
        f"({summary['n_reports']} splits)"
    )


@main.command()
@_config_option
@click.option("--jobs", default=None, type=int, help="Parallel training workers (overrides config).")
@cli_errors
def transfer(config_path: str, jobs: int | None):
    """Train on source projects, evaluate on the held-out project."""
    config = load_config(config_path)
    if jobs is not None:
        config.n_jobs = jobs
    report = experiments.run_transfer(config)
    reports_dir = Path(config.workdir) / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)
    out = reports_dir / f"transfer-{config.transfer_test}.json"
    out.write_text(report.to_json())
    click.echo(
        f"transfer -> {config.transfer_test}: micro P {report.micro['precision']:.3f} "
        f"R {report.micro['recall']:.3f} F {report.micro['f']:.3f} ({out})"
    )


# ---------------------------------------------------------------------------
# predict / apply-labels
# ---------------------------------------------------------------------------


@main.command()
@_config_option
@click.option("--project", required=True)
@click.option("--model", "model_path", default=None, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
@cli_errors
def predict(config_path: str, project: str, model_path: str | None, out_path: str | None):
    """Predict domains for the project's open issues; emit NDJSON."""
    config = load_config(config_path)
    project_cfg = config.project(project)
    workdir = config.project_workdir(project)
    pipeline = TrainedPipeline.load(model_path or workdir / "model.json")
    if project_cfg.tracker == "github":
        client = GithubClient(token=tracker_token())
        coords = TrackerCoordinates.parse(project_cfg.repo)
        issues = client.fetch_issues(coords, state="open")
    else:
        issues, _, _ = load_snapshot(_snapshot_dir(config, project_cfg))
        issues = [issue for issue in issues if issue.state == "open"]
    records = predict_open_issues(pipeline, issues)
    destination = Path(out_path) if out_path else workdir / "predictions.ndjson"
    write_predictions(destination, records)
    click.echo(f"{project}: predicted {len(records)} open issue(s) -> {destination}")


@main.command("apply-labels")
@_config_option
@click.option("--project", required=True)
@click.option("--predictions", "predictions_path", required=True, type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["dry_run", "live"]), default="dry_run", show_default=True)
@cli_errors
def apply_labels_cmd(config_path: str, project: str, predictions_path: str, mode: str):
    """Write predicted labels back to the tracker (or report, in dry_run)."""
    config = load_config(config_path)
    project_cfg = config.project(project)
    records = read_predictions(predictions_path)
    writer = None
    if mode == "live":
        if project_cfg.tracker != "github":
            raise UserError(f"live label write-back needs a github tracker, not {project_cfg.tracker}")
        coords = TrackerCoordinates.parse(project_cfg.repo)
        writer = TrackerWriter(GithubClient(token=tracker_token()), coords.owner, coords.repo)
    report = apply_labels(records, writer, mode=mode)
    destination = config.project_workdir(project) / f"apply-{mode}.json"
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_text(json.dumps(report, indent=2, sort_keys=True))
    applied = sum(1 for entry in report["issues"] if entry["status"] in ("ok", "dry_run"))
    click.echo(f"{project}: {applied}/{len(report['issues'])} issue(s) processed ({mode}) -> {destination}")


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="A report JSON file or a directory of them.")
@click.option("--cooccurrence-from", "dataset_dir", default=None, type=click.Path(exists=True),
              help="Dataset directory; write its label co-occurrence CSV.")
@click.option("--out", "out_path", default=None, type=click.Path())
@cli_errors
def report(input_path: str, dataset_dir: str | None, out_path: str | None):
    """Render evaluation reports as text; optionally dump co-occurrence."""
    path = Path(input_path)
    files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    for file in files:
        payload = json.loads(file.read_text())
        if "per_label" not in payload:
            continue  # summary files
        click.echo(f"== {file.name}")
        click.echo(EvalReport.from_json(file.read_text()).to_text())
    if dataset_dir:
        from apilabels.corpus import MultiLabelDataset

        dataset = MultiLabelDataset.load(dataset_dir)
        matrix = cooccurrence(dataset.labels)
        destination = Path(out_path) if out_path else Path(dataset_dir) / "cooccurrence.csv"
        write_cooccurrence_csv(destination, matrix, dataset.label_names)
        click.echo(f"co-occurrence -> {destination}")


if __name__ == "__main__":
    main()
