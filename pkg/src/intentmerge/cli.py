"""Command-line harness: dataset generation, decisions, and ablation runs.

Exit codes: 0 success, 2 usage errors, 3 missing or failed data,
4 malformed input records.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dsl import (
    DomainSemanticError,
    DomainSyntaxError,
    load_default_domain,
    load_domain,
)
from .estimator import IntentResolver
from .evaluation import EvalRow, ablation_models, evaluate, rows_to_csv, run_matrix
from .model import validate_domain
from .records import (
    MalformedRecord,
    load_dataset,
    parse_record_line,
    write_dataset,
)
from .selector import ENTROPY, FIXED
from .simgen import (
    DATASET_KINDS,
    GenerationFailed,
    InfeasibleDomain,
    NOISE_LEVELS,
    generate_dataset,
    generate_unaligned,
    noise_level,
)
from .svg import grouped_bars, line_chart

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_MALFORMED = 4

_NOISE_IDS = tuple(level.id for level in NOISE_LEVELS)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--domain", help="domain file; bundled default when omitted")
    parser.add_argument("--seed", type=int, default=1, help="root random seed")
    parser.add_argument("--out", default="-", help="output path, '-' for stdout")
    parser.add_argument("--threads", type=int, default=1, help="evaluation threads")


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--model", default="m3", choices=["baseline", "m1", "m2", "m3"]
    )
    parser.add_argument("--merge", default="add", choices=["max", "mul", "add"])
    parser.add_argument("--threshold", default=FIXED, choices=[FIXED, ENTROPY])
    parser.add_argument("--tc", type=float, default=0.25, help="clear threshold")
    parser.add_argument("--tu", type=float, default=0.11, help="unclear threshold")
    parser.add_argument("--tn", type=float, default=0.05, help="noise threshold")
    parser.add_argument("--A", type=float, default=0.2, help="signature penalty base")
    parser.add_argument(
        "--reference",
        default="self_entropy",
        choices=["uniform_noise", "self_entropy"],
        help="entropy reference for the entropy thresholding scheme",
    )


def _load_domain_arg(path: str | None):
    if path is None:
        return load_default_domain()
    if not Path(path).exists():
        raise FileNotFoundError(path)
    return load_domain(path)


def _resolver(args, domain) -> IntentResolver:
    return IntentResolver(
        model=args.model,
        merge=args.merge,
        thresholding=args.threshold,
        penalty_base=args.A,
        t_clear=args.tc,
        t_unclear=args.tu,
        t_noise=args.tn,
        reference=args.reference,
        domain=domain,
    ).fit()


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def cmd_generate(args) -> int:
    if args.n < 1:
        print("error: --n must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        domain = _load_domain_arg(args.domain)
        if args.kind == "unaligned":
            samples = generate_unaligned(args.noise, args.n, args.seed, domain)
        else:
            samples = generate_dataset(args.kind, args.noise, args.n, args.seed, domain)
    except FileNotFoundError as exc:
        print(f"error: domain file not found: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (GenerationFailed, InfeasibleDomain) as exc:
        print(f"error: generation failed: {exc}", file=sys.stderr)
        return EXIT_DATA

    handle, close = _open_out(args.out)
    try:
        count = write_dataset(samples, handle)
    finally:
        if close:
            handle.close()
    summary = f"kind={args.kind} noise={args.noise} n={count} seed={args.seed}"
    print(summary, file=sys.stderr if args.out == "-" else sys.stdout)
    return EXIT_OK


def cmd_decide(args) -> int:
    try:
        domain = _load_domain_arg(args.domain)
    except FileNotFoundError as exc:
        print(f"error: domain file not found: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        if args.record == "-":
            text = sys.stdin.read()
        else:
            path = Path(args.record)
            if not path.exists():
                print(f"error: input not found: {path}", file=sys.stderr)
                return EXIT_DATA
            text = path.read_text(encoding="utf-8")
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise MalformedRecord("no record line in input")
        sample = parse_record_line(lines[0])
    except MalformedRecord as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED

    resolver = _resolver(args, domain)
    decision = resolver.resolve(sample.sentences, sample.scene)
    diagnostics = []
    if decision.likelihoods is not None:
        lik = decision.likelihoods
        for i, action in enumerate(lik.actions):
            diagnostics.append(
                {
                    "action": action,
                    "raw": float(lik.raw[i]),
                    "signature_penalty": float(lik.signature_penalties[i]),
                    "property_penalty": float(lik.property_penalties[i]),
                    "likelihood": float(lik.values[i]),
                    "mode": decision.per_action_modes.get(action),
                }
            )
    payload = {
        "mode": decision.mode,
        "intent": None
        if decision.intent is None
        else {
            "action": decision.intent.action,
            "bindings": dict(decision.intent.bindings),
        },
        "prompt": decision.prompt,
        "actions": diagnostics,
    }
    handle, close = _open_out(args.out)
    try:
        handle.write(json.dumps(payload, indent=2) + "\n")
    finally:
        if close:
            handle.close()
    return EXIT_OK


def cmd_evaluate(args) -> int:
    try:
        domain = _load_domain_arg(args.domain)
    except FileNotFoundError as exc:
        print(f"error: domain file not found: {exc}", file=sys.stderr)
        return EXIT_DATA

    rows: list[EvalRow] = []
    resolver = _resolver(args, domain)
    for data_path in args.data:
        path = Path(data_path)
        if not path.exists():
            print(f"error: dataset not found: {path}", file=sys.stderr)
            return EXIT_DATA
        try:
            samples = load_dataset(path)
        except MalformedRecord as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return EXIT_MALFORMED
        if not samples:
            print(f"error: dataset empty: {path}", file=sys.stderr)
            return EXIT_DATA
        rows.append(evaluate(resolver, samples, threads=args.threads))

    handle, close = _open_out(args.out)
    try:
        handle.write(rows_to_csv(rows))
    finally:
        if close:
            handle.close()
    return EXIT_OK


def _ablate_charts(rows: list[EvalRow], out_dir: Path) -> list[Path]:
    by_key = {
        (r.model, r.merge_op, r.thresholding, r.dataset, r.noise): r.accuracy
        for r in rows
    }
    noises = list(_NOISE_IDS)

    def curve(model, merge, threshold, dataset):
        return [by_key[(model, merge, threshold, dataset, nz)] for nz in noises]

    lines = {
        "baseline": curve("baseline", "max", "none", "aligned"),
        "M1": curve("M1", "add", FIXED, "aligned"),
        "M2": curve("M2", "add", FIXED, "aligned"),
        "M3": curve("M3", "add", FIXED, "aligned"),
    }
    chart1 = line_chart(
        "Accuracy vs noise (aligned data, add merge, fixed thresholds)",
        noises,
        lines,
    )

    datasets = ["aligned", "arity", "prop", "unaligned"]
    bars = {
        "baseline": [by_key[("baseline", "max", "none", d, "n2")] for d in datasets],
        "M1": [by_key[("M1", "add", FIXED, d, "n2")] for d in datasets],
        "M2": [by_key[("M2", "add", FIXED, d, "n2")] for d in datasets],
        "M3": [by_key[("M3", "add", FIXED, d, "n2")] for d in datasets],
    }
    chart2 = grouped_bars("Model comparison per dataset (n2)", datasets, bars)

    threshold_lines = {
        "fixed / aligned": curve("M3", "add", FIXED, "aligned"),
        "entropy / aligned": curve("M3", "add", ENTROPY, "aligned"),
        "fixed / unaligned": curve("M3", "add", FIXED, "unaligned"),
        "entropy / unaligned": curve("M3", "add", ENTROPY, "unaligned"),
    }
    chart3 = line_chart(
        "Fixed vs entropy thresholding (M3, add merge)", noises, threshold_lines
    )

    paths = []
    for name, content in (
        ("accuracy_vs_noise.svg", chart1),
        ("model_comparison.svg", chart2),
        ("thresholding.svg", chart3),
    ):
        path = out_dir / name
        path.write_text(content, encoding="utf-8")
        paths.append(path)
    return paths


def cmd_ablate(args) -> int:
    try:
        domain = _load_domain_arg(args.domain)
    except FileNotFoundError as exc:
        print(f"error: domain file not found: {exc}", file=sys.stderr)
        return EXIT_DATA
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        datasets = {}
        for level in NOISE_LEVELS:
            for kind in DATASET_KINDS:
                datasets[(kind, level.id)] = generate_dataset(
                    kind, level, args.n, args.seed, domain
                )
            datasets[("unaligned", level.id)] = (
                datasets[("arity", level.id)] + datasets[("prop", level.id)]
            )
    except (GenerationFailed, InfeasibleDomain) as exc:
        print(f"error: generation failed: {exc}", file=sys.stderr)
        return EXIT_DATA

    models = ablation_models(IntentResolver(domain=domain))
    rows = run_matrix(datasets, models, threads=args.threads)

    csv_path = out_dir / "results.csv"
    csv_path.write_text(rows_to_csv(rows), encoding="utf-8")
    chart_paths = _ablate_charts(rows, out_dir)
    for path in [csv_path, *chart_paths]:
        print(path)
    return EXIT_OK


def cmd_validate_domain(args) -> int:
    path = Path(args.domain) if args.domain else None
    if path is not None and not path.exists():
        print(f"error: domain file not found: {path}", file=sys.stderr)
        return EXIT_DATA
    try:
        domain = load_domain(path) if path else load_default_domain()
    except (DomainSyntaxError, DomainSemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    problems = validate_domain(domain)
    if problems:
        for problem in problems:
            print(f"problem: {problem}", file=sys.stderr)
        return EXIT_MALFORMED
    print(
        f"ok: {len(domain.actions)} actions, {len(domain.features)} features, "
        f"{len(domain.categories)} categories"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intentmerge",
        description="Simulated multimodal intent-fusion benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a simulated dataset")
    p_gen.add_argument(
        "--kind", required=True, choices=[*DATASET_KINDS, "unaligned"]
    )
    p_gen.add_argument("--noise", required=True, choices=list(_NOISE_IDS))
    p_gen.add_argument("--n", type=int, default=1000, help="samples to generate")
    _add_common(p_gen)
    p_gen.set_defaults(func=cmd_generate)

    p_dec = sub.add_parser("decide", help="decide one sample record")
    p_dec.add_argument(
        "--record", default="-", help="record file, '-' for standard input"
    )
    _add_model_flags(p_dec)
    _add_common(p_dec)
    p_dec.set_defaults(func=cmd_decide)

    p_eval = sub.add_parser("evaluate", help="score a model on dataset files")
    p_eval.add_argument("--data", nargs="+", required=True, help="dataset files")
    _add_model_flags(p_eval)
    _add_common(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_abl = sub.add_parser("ablate", help="run the full model/dataset matrix")
    p_abl.add_argument("--out-dir", default="ablation", help="report directory")
    p_abl.add_argument("--n", type=int, default=1000, help="samples per dataset")
    _add_common(p_abl)
    p_abl.set_defaults(func=cmd_ablate)

    p_val = sub.add_parser("validate-domain", help="check a domain file")
    _add_common(p_val)
    p_val.set_defaults(func=cmd_validate_domain)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
