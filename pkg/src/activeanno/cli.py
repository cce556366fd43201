"""Operator command line: ingest, pipeline, serve, simulate, eval, export."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import baseline as bl
from . import clustering as clu
from . import dimred, labeling
from . import session as ss
from . import simulate as sim
from .corpus import synthetic_corpus, write_corpus
from .data import dataset_from_rows, ingest_dataset, write_jsonl
from .embedding import DEFAULT_DIM, EmbedderSpec, embed
from .errors import ActiveAnnoError, EvalError
from .metrics import cohens_kappa, macro_f1, map_labels
from .store import DataStore


def _emit(data: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        _print_table(data)


def _print_table(data: dict, indent: int = 0) -> None:
    pad = "  " * indent
    for key, value in data.items():
        if isinstance(value, dict):
            click.echo(f"{pad}{key}:")
            _print_table(value, indent + 1)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            click.echo(f"{pad}{key}:")
            for row in value:
                line = "  ".join(f"{k}={v}" for k, v in row.items())
                click.echo(f"{pad}  {line}")
        else:
            click.echo(f"{pad}{key}: {value}")


def _fail(message: str) -> None:
    click.echo(json.dumps({"error": message}), err=True)
    sys.exit(1)


def _guard(fn):
    import functools

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ActiveAnnoError as exc:
            _fail(str(exc))

    return wrapper


format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "table"]), default="json",
    help="Output format.",
)


@click.group()
@click.version_option(package_name="activeanno")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON file with per-subcommand option defaults.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Cluster-driven active annotation toolkit."""
    if config_path:
        ctx.default_map = json.loads(Path(config_path).read_text(encoding="utf-8"))


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--data-dir", default="./aa-data", show_default=True)
@format_option
@_guard
def ingest(file: str, data_dir: str, fmt: str) -> None:
    """Validate FILE (JSONL) and register it as a dataset."""
    store = DataStore(data_dir)
    dataset_id = store.register_dataset_file(file)
    size = len(store.load_dataset(dataset_id))
    _emit({"dataset_id": dataset_id, "size": size}, fmt)


@main.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", "k_opt", default="auto", show_default=True,
              help="Cluster count: 'auto' (elbow) or an integer.")
@click.option("--pca-var", default=dimred.DEFAULT_VARIANCE_THRESHOLD, show_default=True)
@click.option("--pca-max", default=dimred.DEFAULT_MAX_COMPONENTS, show_default=True)
@click.option("--dim", default=DEFAULT_DIM, show_default=True, help="Builtin embedder buckets.")
@click.option("--seed", default=0, show_default=True)
@format_option
@_guard
def pipeline(dataset: str, k_opt: str, pca_var: float, pca_max: int, dim: int,
             seed: int, fmt: str) -> None:
    """Run embed -> PCA -> elbow -> k-means -> labels offline and dump stats."""
    ds = ingest_dataset(dataset)
    E = embed(ds, EmbedderSpec(dim=dim))
    model = dimred.fit_pca_auto(E, pca_var, pca_max)
    space = dimred.transform(model, E)
    if k_opt == "auto":
        elbow = clu.elbow_select_k(space, seed=seed)
        clustering, sse_curve, no_elbow = elbow.best, elbow.sse_curve, elbow.no_elbow
    else:
        k = int(k_opt)
        best = None
        for trial in range(clu.DEFAULT_SEEDS_PER_K):
            run = clu.lloyd(space, clu.kmeanspp_seed(space, k, np.random.SeedSequence((seed, k, trial))))
            if best is None or run.inertia < best.inertia:
                best = run
        clustering, sse_curve, no_elbow = best, [(k, best.inertia)], False

    clusters = []
    for c in range(clustering.k):
        members = clustering.members(c)
        label = labeling.cluster_label(ds.texts(members)).canonical
        vectors = space.rows(members)
        centroid = clustering.centroids[c][None, :]
        dists = np.linalg.norm(vectors - centroid, axis=1)
        order = sorted(range(len(members)), key=lambda i: (dists[i], members[i]))
        pivots = [ds[members[i]].text for i in order[:3]]
        clusters.append({"cluster": c, "size": len(members), "label": label, "pivots": pivots})
    _emit(
        {
            "n_points": len(ds),
            "embed_dim": E.dim,
            "pca": {
                "components": model.n_components,
                "variance_captured": float(sum(model.explained_variance) / model.total_variance)
                if model.total_variance
                else 1.0,
            },
            "k": clustering.k,
            "no_elbow": no_elbow,
            "inertia": clustering.inertia,
            "sse_curve": [[k, s] for k, s in sse_curve],
            "clusters": clusters,
        },
        fmt,
    )


@main.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--dim", default=DEFAULT_DIM, show_default=True)
@click.option("--seed", default=0, show_default=True)
@format_option
@_guard
def cluster(dataset: str, dim: int, seed: int, fmt: str) -> None:
    """Dump the SSE curve and the elbow-chosen k for a dataset."""
    ds = ingest_dataset(dataset)
    E = embed(ds, EmbedderSpec(dim=dim))
    model = dimred.fit_pca_auto(E)
    space = dimred.transform(model, E)
    elbow = clu.elbow_select_k(space, seed=seed)
    _emit(
        {
            "k": elbow.k,
            "no_elbow": elbow.no_elbow,
            "sse_curve": [[k, s] for k, s in elbow.sse_curve],
        },
        fmt,
    )


@main.command()
@click.option("--listen", default="127.0.0.1:8000", show_default=True, envvar="AA_LISTEN",
              help="host:port to bind.")
@click.option("--data-dir", default="./aa-data", show_default=True, envvar="AA_DATA_DIR")
@click.option("--ui-dir", default=None, help="Directory with the built web UI.")
@_guard
def serve(listen: str, data_dir: str, ui_dir: str | None) -> None:
    """Serve the HTTP JSON API (and the web UI when --ui-dir is given)."""
    import uvicorn

    from .service import create_app

    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        _fail(f"invalid --listen value {listen!r}, expected host:port")
    default_ui = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_dir is None and default_ui.is_dir():
        ui_dir = str(default_ui)
    app = create_app(data_dir, ui_dir)
    uvicorn.run(app, host=host, port=int(port), log_level="warning")


@main.command()
@click.option("--mode", type=click.Choice(["aa", "baseline", "both"]), default="both",
              show_default=True)
@click.option("--dataset", "dataset_path", type=click.Path(exists=True), default=None,
              help="Gold-labelled JSONL pool; defaults to the bundled synthetic corpus.")
@click.option("--test-set", "test_path", type=click.Path(exists=True), default=None,
              help="Held-out JSONL test rows; defaults to the bundled test split.")
@click.option("--budget", default=1500.0, show_default=True)
@click.option("--eps", default=0.05, show_default=True, help="Annotator error rate.")
@click.option("--seeds", default="1,2,3,4", show_default=True)
@click.option("--cost-model", "cost_path", type=click.Path(exists=True), default=None,
              help="JSON file overriding the default cost model.")
@click.option("--downsample/--no-downsample", default=True, show_default=True,
              help="Cap the AA cross-validation pool at the baseline's labelled count.")
@click.option("--expand-policy", type=click.Choice([sim.EXPAND_NEVER, sim.EXPAND_ALWAYS,
              sim.EXPAND_WHEN_PURE]), default=sim.EXPAND_WHEN_PURE, show_default=True)
@format_option
@_guard
def simulate(mode: str, dataset_path: str | None, test_path: str | None, budget: float,
             eps: float, seeds: str, cost_path: str | None, downsample: bool,
             expand_policy: str, fmt: str) -> None:
    """Run simulated-annotator experiments and report per-run and summary stats."""
    if dataset_path:
        ds = ingest_dataset(dataset_path)
    else:
        pool, _ = synthetic_corpus()
        ds = dataset_from_rows(pool)
    if test_path:
        test_ds = ingest_dataset(test_path)
        test_rows = [
            {"id": u.id, "text": u.text, "gold_label": u.gold_label} for u in test_ds
        ]
    else:
        _, test_rows = synthetic_corpus()
    cost_model = (
        sim.CostModel.from_dict(json.loads(Path(cost_path).read_text()))
        if cost_path
        else sim.CostModel()
    )
    seed_list = [int(s) for s in seeds.split(",") if s.strip()]
    if not seed_list:
        _fail("no seeds given")

    if mode == "both":
        report = sim.run_experiment(
            ds, test_rows, cost_model, budget, eps, seed_list,
            downsample=downsample, expand_policy=expand_policy,
        )
    else:
        runs = [
            sim.simulate(mode, ds, cost_model, budget, eps, seed,
                         test_rows=test_rows, expand_policy=expand_policy)
            for seed in seed_list
        ]
        from .metrics import mean_std

        summary = {}
        for metric in ("sentences_labelled", "distinct_labels", "budget_spent",
                       "kappa_vs_gold", "f1_test", "f1_cv"):
            mean, std = mean_std([float(getattr(r, metric)) for r in runs])
            summary[metric] = {"mean": mean, "std": std}
        report = {
            "cost_model": cost_model.to_dict(),
            "budget": budget,
            "eps": eps,
            "seeds": seed_list,
            "runs": [r.to_dict() for r in runs],
            "summary": {mode: summary},
        }
    _emit(report, fmt)


def _load_session_labels(data_dir: str, session_id: str):
    store = DataStore(data_dir)
    meta = store.read_session_meta(session_id)
    dataset = store.load_dataset(meta["dataset_id"])
    events = store.load_events(session_id)
    if meta["mode"] == "baseline":
        session = bl.replay(dataset, events)
    else:
        session = ss.replay(dataset, events)
    return session, dataset, meta


@main.command("eval")
@click.option("--session", "session_id", required=True)
@click.option("--gold", "gold_path", type=click.Path(exists=True), required=True,
              help="JSONL with id and gold_label for the session's dataset.")
@click.option("--mapping", "mapping_path", type=click.Path(exists=True), default=None,
              help="JSON manual overrides: {session_label: gold_label | null}.")
@click.option("--data-dir", default="./aa-data", show_default=True)
@format_option
@_guard
def eval_cmd(session_id: str, gold_path: str, mapping_path: str | None,
             data_dir: str, fmt: str) -> None:
    """Score a session's labels against gold: Cohen's kappa and macro F1."""
    session, _dataset, _meta = _load_session_labels(data_dir, session_id)
    labelled = dict(session.labelled)
    if not labelled:
        raise EvalError("no labelled data in session")
    gold: dict[str, str] = {}
    with open(gold_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                row = json.loads(line)
                if row.get("gold_label") is not None:
                    gold[row["id"]] = row["gold_label"]
    overlap = {i: lab for i, lab in labelled.items() if i in gold}
    if not overlap:
        raise EvalError("no labelled ids present in the gold file")
    overrides = (
        json.loads(Path(mapping_path).read_text()) if mapping_path else None
    )
    mapping = map_labels(overlap, {i: gold[i] for i in overlap}, overrides)
    mapped = mapping.apply(overlap)
    gold_sub = {i: gold[i] for i in mapped}
    per_class = []
    for cls in sorted(set(gold_sub.values())):
        tp = sum(1 for i in gold_sub if gold_sub[i] == cls and mapped[i] == cls)
        fp = sum(1 for i in gold_sub if gold_sub[i] != cls and mapped[i] == cls)
        fn = sum(1 for i in gold_sub if gold_sub[i] == cls and mapped[i] != cls)
        denom = 2 * tp + fp + fn
        per_class.append({"label": cls, "tp": tp, "fp": fp, "fn": fn,
                          "f1": round(2 * tp / denom, 4) if denom else 0.0})
    _emit(
        {
            "session": session_id,
            "labelled": len(labelled),
            "evaluated": len(mapped),
            "kappa": cohens_kappa(mapped, gold_sub) if mapped else None,
            "macro_f1": macro_f1(mapped, gold_sub) if mapped else None,
            "unmapped_labels": mapping.unmapped,
            "per_class": per_class,
        },
        fmt,
    )


@main.command()
@click.option("--session", "session_id", required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--data-dir", default="./aa-data", show_default=True)
@format_option
@_guard
def export(session_id: str, out_path: str, data_dir: str, fmt: str) -> None:
    """Write a session's labelled rows as JSONL."""
    session, _dataset, meta = _load_session_labels(data_dir, session_id)
    rows = bl.export_labels(session) if meta["mode"] == "baseline" else ss.export_labels(session)
    write_jsonl(out_path, rows)
    _emit({"session": session_id, "rows": len(rows), "out": out_path}, fmt)


@main.command()
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--test-out", "test_path", type=click.Path(), default=None)
@format_option
@_guard
def corpus(out_path: str, test_path: str | None, fmt: str) -> None:
    """Write the bundled synthetic corpus (pool and optional test split)."""
    write_corpus(out_path, test_path)
    pool, test = synthetic_corpus()
    _emit({"pool": len(pool), "test": len(test) if test_path else 0, "out": out_path}, fmt)


if __name__ == "__main__":
    main()
