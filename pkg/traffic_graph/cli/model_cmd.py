"""
Model Commands

train, evaluate, export and info.
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer

from traffic_graph.cli.utils import exit_on_error, load_train_config, parse_overrides
from traffic_graph.dataset.codec import read_dataset
from traffic_graph.dataset.records import Split
from traffic_graph.evaluation.metrics import Level, MetricsReport, mean_metrics
from traffic_graph.evaluation.runner import evaluate as evaluate_checkpoint
from traffic_graph.evaluation.runner import export_embeddings
from traffic_graph.exceptions import ConfigurationError
from traffic_graph.model.checkpoint import read_checkpoint
from traffic_graph.train.loop import train as train_model
from traffic_graph.train.state import TrainState


class LevelChoice(str, Enum):
    FLOW = "flow"
    PACKET = "packet"
    BOTH = "both"


class SplitChoice(str, Enum):
    TEST = "test"
    TRAIN = "train"
    ALL = "all"


_SPLITS = {SplitChoice.TEST: Split.TEST, SplitChoice.TRAIN: Split.TRAIN, SplitChoice.ALL: None}


def _level(choice: LevelChoice) -> Optional[Level]:
    return None if choice is LevelChoice.BOTH else Level(choice.value)


def train(
    ctx: typer.Context,
    dataset: Path = typer.Option(..., "--dataset", "-d", help="Dataset file"),
    out: Path = typer.Option(..., "--out", "-o", help="Checkpoint file to write"),
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="Training TOML file"),
    profile: Optional[str] = typer.Option(None, "--profile", "-p", help="Dataset profile: vpn, nonvpn, tor, nontor"),
    variant: Optional[str] = typer.Option(None, "--variant", help="Ablation variant, e.g. no-fcl or unsupervised-cl"),
    log: Optional[Path] = typer.Option(None, "--log", help="Per-step tab-separated training log"),
    resume: Optional[Path] = typer.Option(None, "--resume", help="Continue from this checkpoint"),
    max_steps: Optional[int] = typer.Option(None, "--max-steps", help="Stop after this many optimizer steps"),
) -> None:
    """
    Train both classification levels in one run.

    Any training key can be overridden after the options, e.g. --epochs 10 --p-node-drop 0.2.
    """
    with exit_on_error():
        overrides = parse_overrides(ctx.args)
        loaded = read_dataset(dataset)
        if resume is not None:
            if overrides or config is not None or profile is not None or variant is not None:
                raise ConfigurationError("--resume continues with the stored configuration; drop the overrides")
            state = TrainState.resume(resume)
            typer.echo(f"Resuming from {resume} at step {state.step}")
            final = train_model(loaded, out=out, state=state, log_path=log, max_steps=max_steps)
        else:
            cfg = load_train_config(profile, config, variant, overrides)
            final = train_model(loaded, cfg, out=out, log_path=log, max_steps=max_steps)
        typer.echo(f"Trained {final.step} step(s), {final.epoch} epoch(s); checkpoint {out}")


def evaluate(
    checkpoint: List[Path] = typer.Option(..., "--checkpoint", "-k", help="Checkpoint file; repeat to average runs"),
    dataset: Path = typer.Option(..., "--dataset", "-d", help="Dataset file"),
    level: LevelChoice = typer.Option(LevelChoice.BOTH, "--level", "-l", help="Task level"),
    split: SplitChoice = typer.Option(SplitChoice.TEST, "--split", help="Dataset split to score"),
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Write a JSON report here"),
) -> None:
    """
    Score checkpoints at the flow and/or packet level.
    """
    with exit_on_error():
        loaded = read_dataset(dataset)
        scored: List[List[MetricsReport]] = []
        for path in checkpoint:
            reports = evaluate_checkpoint(path, loaded, _SPLITS[split], _level(level))
            scored.append(reports)
            typer.echo(f"== {path}")
            for r in reports:
                typer.echo(r.to_table())

        document: Dict[str, Any] = {
            "dataset": str(dataset),
            "split": split.value,
            "runs": [
                {"checkpoint": str(path), "reports": [r.model_dump(mode="json") for r in reports]}
                for path, reports in zip(checkpoint, scored)
            ],
        }
        if len(checkpoint) > 1:
            means = [mean_metrics([reports[i] for reports in scored]) for i in range(len(scored[0]))]
            for mean in means:
                typer.echo(
                    f"[{mean.level.value}] mean over {mean.runs} run(s): accuracy {mean.accuracy:.4f}  "
                    f"precision {mean.macro_precision:.4f}  recall {mean.macro_recall:.4f}  macro-F1 {mean.macro_f1:.4f}"
                )
            document["mean"] = [m.model_dump(mode="json") for m in means]

        if report is not None:
            report.parent.mkdir(parents=True, exist_ok=True)
            report.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")


def export(
    checkpoint: Path = typer.Option(..., "--checkpoint", "-k", help="Checkpoint file"),
    dataset: Path = typer.Option(..., "--dataset", "-d", help="Dataset file"),
    level: Level = typer.Option(Level.FLOW, "--level", "-l", help="flow or packet"),
    out: Path = typer.Option(..., "--out", "-o", help="Tab-separated output file"),
    split: SplitChoice = typer.Option(SplitChoice.TEST, "--split", help="Dataset split to export"),
) -> None:
    """
    Export anchor embeddings (label index, then vector) as tab-separated text.
    """
    with exit_on_error():
        rows = export_embeddings(checkpoint, read_dataset(dataset), out, level, _SPLITS[split])
        typer.echo(f"Wrote {rows} row(s) to {out}")


def info(
    checkpoint: Path = typer.Option(..., "--checkpoint", "-k", help="Checkpoint file"),
) -> None:
    """
    Show a checkpoint's dimensions, labels, counters and parameter counts.
    """
    with exit_on_error():
        loaded = read_checkpoint(checkpoint)
        dims = loaded.model.dims
        counts = loaded.model.parameter_counts()
        typer.echo(f"{checkpoint}")
        typer.echo(f"  labels ({dims.num_classes}): {', '.join(loaded.label_names)}")
        typer.echo(f"  embed {dims.embed_dim}, hidden {dims.hidden_dim}, gnn layers {dims.gnn_layers}")
        typer.echo(f"  profile {loaded.config.profile}, variant {loaded.config.variant}")
        typer.echo(f"  step {loaded.step}, epoch {loaded.epoch}, resumable {loaded.optimizer_state is not None}")
        width = max(len(name) for name in counts)
        for name, count in counts.items():
            typer.echo(f"  {name:<{width}}  {count:>10,}")
        typer.echo(f"  {'total':<{width}}  {sum(counts.values()):>10,}")
