"""Command-line interface: scoring, detector pipeline, pair building,
benchmark reports (JSON + CSV + optional figures), and the annotation
service.

Every pipeline takes an explicit --seed so runs are byte-reproducible; no
command mutates its inputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .benchmark.data import (
    ParseError,
    load_dataset,
    load_judgments,
    load_machine_captions,
    load_pairs,
    save_pairs,
)
from .benchmark.pairs import generate_pairs
from .benchmark.protocol import (
    CATEGORY_ORDER,
    GOLD_EXCLUDED,
    ProtocolError,
    benchmark_metric,
    gold_from_judgments,
)
from .benchmark.systems import win_fractions
from .detector.corruption import build_synthetic_dataset, load_dataset_file, save_dataset_file
from .detector.model import (
    DetectorConfig,
    TrainConfig,
    TrainingError,
    evaluate_detector,
    load_model,
    save_model,
    train_detector,
)
from .embedding import EmbeddingError, parse_provider
from .scoring import (
    METRIC_NAMES,
    build_metrics,
    canonical_metric_name,
    cider_stats_from_dataset,
    cider_stats_from_items,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MISSING_MODEL = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _read_candidates(path) -> list[dict]:
    rows = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    rows.append({"audio_id": obj["audio_id"], "text": obj["text"]})
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise CliError(f"{path}:{line_no}: bad candidate record: {exc}")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    if not rows:
        raise CliError(f"{path}: no candidate records")
    return rows


def _parse_metrics(arg: str) -> list[str]:
    try:
        return [canonical_metric_name(m) for m in arg.split(",") if m.strip()]
    except ValueError as exc:
        raise CliError(str(exc))


def _load_provider(spec: str | None):
    if spec is None:
        return None
    try:
        return parse_provider(spec)
    except (ValueError, OSError, EmbeddingError) as exc:
        raise CliError(f"cannot build provider {spec!r}: {exc}")


def _load_detector(path, needed: bool):
    if path is None:
        if needed:
            raise CliError("fense requires --model with a trained detector", EXIT_MISSING_MODEL)
        return None
    try:
        return load_model(path)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot load model {path}: {exc}")


def cmd_score(args) -> int:
    metrics = _parse_metrics(args.metrics)
    candidates = _read_candidates(args.candidates)
    try:
        dataset = load_dataset(args.references)
    except ParseError as exc:
        raise CliError(str(exc))
    refs_by_id = {e.audio_id: list(e.references) for e in dataset}
    items = []
    for i, row in enumerate(candidates, start=1):
        if row["audio_id"] not in refs_by_id:
            raise CliError(
                f"{args.candidates}: record {i}: audio_id {row['audio_id']!r} not in references"
            )
        items.append((row["text"], refs_by_id[row["audio_id"]]))

    needs_provider = any(m in ("sbert", "fense") for m in metrics)
    provider = _load_provider(args.provider)
    if needs_provider and provider is None:
        raise CliError("sbert/fense require --provider")
    model = _load_detector(args.model, needed="fense" in metrics)
    config = DetectorConfig(threshold=args.threshold, penalty_factor=args.penalty_factor)
    cider_stats = None
    if "cider_d" in metrics:
        try:
            cider_stats = cider_stats_from_items(items)
        except ValueError as exc:
            raise CliError(str(exc))
    try:
        fns = build_metrics(metrics, provider=provider, model=model, config=config,
                            cider_stats=cider_stats)
    except ValueError as exc:
        raise CliError(str(exc))

    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for row, (text, refs) in zip(candidates, items):
            scored = {"audio_id": row["audio_id"], "text": text}
            for name in metrics:
                try:
                    scored[name] = fns[name](text, refs)
                except EmbeddingError as exc:
                    raise CliError(f"provider failure on {text!r}: {exc}")
            out.write(json.dumps(scored, sort_keys=True) + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_corrupt(args) -> int:
    try:
        with open(args.clean, encoding="utf-8") as fh:
            clean = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise CliError(f"cannot read {args.clean}: {exc}")
    if not clean:
        raise CliError(f"{args.clean}: no captions")
    dataset = build_synthetic_dataset(clean, seed=args.seed)
    save_dataset_file(dataset.records, args.out)
    print(
        f"wrote {len(dataset.records)} records to {args.out}"
        f" ({dataset.skipped} captions had no applicable rule)",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_train(args) -> int:
    try:
        records = load_dataset_file(args.dataset)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))
    config = TrainConfig(
        epochs=args.epochs, learning_rate=args.learning_rate, l2=args.l2, seed=args.seed
    )
    try:
        model = train_detector(records, config)
    except TrainingError as exc:
        raise CliError(f"training failed: {exc}")
    save_model(model, args.out)
    print(f"wrote model to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_eval_detector(args) -> int:
    model = _load_detector(args.model, needed=True)
    try:
        labeled = load_dataset_file(args.labeled)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))
    results = evaluate_detector(model, labeled, threshold=args.threshold)
    payload = {
        name: {
            "precision": ev.precision,
            "recall": ev.recall,
            "f1": ev.f1,
            "true_positives": ev.true_positives,
            "false_positives": ev.false_positives,
            "false_negatives": ev.false_negatives,
            "no_positive_predictions": ev.no_positive_predictions,
        }
        for name, ev in results.items()
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def cmd_make_pairs(args) -> int:
    provider = _load_provider(args.provider)
    if provider is None:
        raise CliError("make-pairs requires --provider")
    try:
        dataset = load_dataset(args.dataset)
        machine = load_machine_captions(args.machine_captions)
    except ParseError as exc:
        raise CliError(str(exc))
    result = generate_pairs(dataset, machine, provider, seed=args.seed)
    save_pairs(result.pairs, args.out)
    print(
        f"wrote {len(result.pairs)} pairs to {args.out}"
        f" ({len(result.skipped)} entries skipped, {result.fallback_count} MM fallbacks)",
        file=sys.stderr,
    )
    for audio_id, reason in result.skipped:
        print(f"  skipped {audio_id}: {reason}", file=sys.stderr)
    return EXIT_OK


def _format_cell(value) -> str:
    return f"{value:5.1f}" if value is not None else "    -"


def cmd_benchmark(args) -> int:
    metrics = _parse_metrics(args.metrics)
    try:
        pairs = load_pairs(args.pairs)
        judgments = load_judgments(args.judgments)
        dataset = load_dataset(args.dataset)
    except ParseError as exc:
        raise CliError(str(exc))

    known_pairs = {p.pair_id for p in pairs}
    for j in judgments:
        if j.pair_id not in known_pairs:
            raise CliError(f"{args.judgments}: judgment references unknown pair_id {j.pair_id!r}")
    known_audio = {e.audio_id for e in dataset}
    for p in pairs:
        if p.audio_id not in known_audio:
            raise CliError(f"{args.pairs}: pair {p.pair_id!r} references unknown audio_id {p.audio_id!r}")

    needs_provider = any(m in ("sbert", "fense") for m in metrics)
    provider = _load_provider(args.provider)
    if needs_provider and provider is None:
        raise CliError("sbert/fense require --provider")
    model = _load_detector(args.model, needed="fense" in metrics)
    config = DetectorConfig(threshold=args.threshold, penalty_factor=args.penalty_factor)
    cider_stats = cider_stats_from_dataset(dataset) if "cider_d" in metrics else None
    try:
        fns = build_metrics(metrics, provider=provider, model=model, config=config,
                            cider_stats=cider_stats)
    except ValueError as exc:
        raise CliError(str(exc))

    reports = {}
    for name in metrics:
        try:
            reports[name] = benchmark_metric(fns[name], pairs, judgments, dataset, metric_name=name)
        except ProtocolError as exc:
            raise CliError(str(exc))

    # win fractions on MM pairs: per metric and from the human gold labels
    mm_pairs = [p for p in pairs if p.category == "MM"]
    by_pair: dict[str, list] = {}
    for j in judgments:
        by_pair.setdefault(j.pair_id, []).append(j)
    gold_decisions = {
        p.pair_id: gold_from_judgments(by_pair[p.pair_id])
        for p in mm_pairs
        if p.pair_id in by_pair
    }
    win_reports = {"gold": win_fractions(mm_pairs, gold_decisions)}
    for name in metrics:
        win_reports[name] = win_fractions(mm_pairs, reports[name].decisions)

    payload = {
        "metrics": {name: reports[name].to_dict() for name in metrics},
        "win_fractions": {label: rep.to_dict() for label, rep in win_reports.items()},
        "pairs_total": len(pairs),
        "excluded_pairs": reports[metrics[0]].excluded if metrics else 0,
        "provider": args.provider,
    }

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    with open(out_dir / "accuracy.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", *CATEGORY_ORDER, "total"])
        for name in metrics:
            rep = reports[name]
            row = [name]
            for cat in CATEGORY_ORDER:
                acc = rep.per_category[cat].accuracy
                row.append("" if acc is None else f"{acc:.4f}")
            total = rep.total.accuracy
            row.append("" if total is None else f"{total:.4f}")
            writer.writerow(row)
    with open(out_dir / "win_fractions.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "system", "fraction"])
        for label, rep in sorted(win_reports.items()):
            for system, frac in sorted(rep.fractions.items()):
                writer.writerow([label, system, f"{frac:.6f}"])

    if args.figures:
        from . import figures

        figures.save_accuracy_figure(
            [reports[name] for name in metrics], out_dir / "accuracy.png"
        )
        figures.save_win_fraction_figure(win_reports, out_dir / "win_fractions.png")

    header = f"{'metric':<10}" + "".join(f"{c:>7}" for c in (*CATEGORY_ORDER, "Total"))
    print(header)
    for name in metrics:
        rep = reports[name]
        cells = [_format_cell(rep.per_category[cat].accuracy) for cat in CATEGORY_ORDER]
        cells.append(_format_cell(rep.total.accuracy))
        print(f"{name:<10}" + "".join(f"{c:>7}" for c in cells))
    print(f"excluded pairs: {payload['excluded_pairs']}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import AnnotationService, create_app

    try:
        pairs = load_pairs(args.pairs)
    except ParseError as exc:
        raise CliError(str(exc))
    audio_paths = {}
    if args.dataset:
        try:
            audio_paths = {
                e.audio_id: e.audio_path for e in load_dataset(args.dataset) if e.audio_path
            }
        except ParseError as exc:
            raise CliError(str(exc))
    raters = [r.strip() for r in args.raters.split(",") if r.strip()]
    if not raters:
        raise CliError("at least one rater id required")
    service = AnnotationService(
        pairs=pairs,
        raters=raters,
        data_dir=args.data_dir,
        raters_per_pair=args.raters_per_pair,
        audio_paths=audio_paths,
        seed=args.seed,
    )
    app = create_app(service, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capeval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score candidate captions against references")
    p.add_argument("--candidates", required=True, help='NDJSON {"audio_id","text"}')
    p.add_argument("--references", required=True, help='NDJSON {"audio_id","references"}')
    p.add_argument("--metrics", default=",".join(METRIC_NAMES))
    p.add_argument("--provider", help="file:PATH | http:URL | test:SEED")
    p.add_argument("--model", help="trained detector model (required for fense)")
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--penalty-factor", type=float, default=10.0)
    p.add_argument("--out", help="output NDJSON (default stdout)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("corrupt", help="build a synthetic fluency-error dataset")
    p.add_argument("--clean", required=True, help="text file, one clean caption per line")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help='output NDJSON {"text","types","error"}')
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("train", help="train the fluency-error detector")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True, help="output model JSON")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--l2", type=float, default=1e-6)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval-detector", help="precision/recall/F1 of a detector")
    p.add_argument("--model", required=True)
    p.add_argument("--labeled", required=True, help="labeled NDJSON dataset")
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--out", help="output JSON (default stdout)")
    p.set_defaults(func=cmd_eval_detector)

    p = sub.add_parser("make-pairs", help="build HC/HI/HM/MM pairs for annotation")
    p.add_argument("--dataset", required=True)
    p.add_argument("--machine-captions", required=True)
    p.add_argument("--provider", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_make_pairs)

    p = sub.add_parser("benchmark", help="accuracy of metrics against human judgments")
    p.add_argument("--pairs", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--metrics", default=",".join(METRIC_NAMES))
    p.add_argument("--provider", help="file:PATH | http:URL | test:SEED")
    p.add_argument("--model", help="trained detector model (required for fense)")
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--penalty-factor", type=float, default=10.0)
    p.add_argument("--out", required=True, help="output directory for report files")
    p.add_argument("--figures", action="store_true", help="also render PNG charts")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("serve", help="run the pairwise annotation service")
    p.add_argument("--pairs", required=True)
    p.add_argument("--dataset", help="dataset NDJSON supplying audio paths")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--raters", required=True, help="comma-separated rater ids")
    p.add_argument("--raters-per-pair", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui-dir", help="serve a built web UI from this directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
