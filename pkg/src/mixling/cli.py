"""Command-line interface.

One executable with subcommands::

    mixling build-dict  parse or pivot-compose MUSE-format dictionaries
    mixling calibrate   find the replace_prob for a target mixing ratio
    mixling generate    write a JSON-lines dataset plus a statistics report
    mixling stats       recompute statistics from an existing dataset
    mixling probe       train the Model-1 probe on a dataset
    mixling synth       write a synthetic corpus with a planted lexicon

Every randomized artifact derives from one 64-bit ``--seed``; configuration
comes from an optional JSON file (mirroring PipelineConfig), then repeatable
``--set section.key=value`` overrides, then flag shortcuts.  Each run writes
a ``<out>.manifest.json`` recording the resolved config and input hashes;
re-running with the same manifest inputs reproduces the artifacts byte for
byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .calibration import calibrate_replace_prob
from .corpus import load_corpus, sample_paragraphs, save_corpus
from .dictionary import BilingualDictionary, compose_pivot, parse_muse, serialize_muse
from .errors import MixlingError
from .manifest import write_manifest
from .pipeline import PipelineConfig, PseudoPair, generate_dataset
from .alignment import (
    input_token_count,
    perplexity_per_iteration,
    precision_at_1,
    train_model1,
)
from .stats import load_vocab, report_from_dataset
from .synthesis import SynthSpec, synth_corpus


def _parse_override_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _apply_overrides(config: dict, assignments: list[str]) -> dict:
    """Apply ``section.key=value`` assignments; unknown keys are errors."""
    for assignment in assignments:
        key, sep, raw_value = assignment.partition("=")
        if not sep:
            raise ValueError(f"override {assignment!r} is not of the form key=value")
        target = config
        parts = key.split(".")
        for part in parts[:-1]:
            if not isinstance(target.get(part), dict):
                raise ValueError(f"unknown config key: {key!r}")
            target = target[part]
        leaf = parts[-1]
        if leaf not in target or isinstance(target[leaf], dict):
            raise ValueError(f"unknown config key: {key!r}")
        target[leaf] = _parse_override_value(raw_value)
    return config


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise ValueError("config file must contain a JSON object")
    else:
        data = {}
    config = PipelineConfig.from_dict(data).to_dict()
    config = _apply_overrides(config, getattr(args, "set", None) or [])
    if getattr(args, "seed", None) is not None:
        config["seed"] = args.seed
    if getattr(args, "no_noise", False):
        config["noise"]["enabled"] = False
    if getattr(args, "no_deletion", False):
        config["mix"]["deletion_enabled"] = False
    if getattr(args, "no_replacement", False):
        config["mix"]["replacement_enabled"] = False
    return PipelineConfig.from_dict(config)


def _write_json(path: str | Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, ensure_ascii=False, sort_keys=True)
        handle.write("\n")


def _cmd_build_dict(args: argparse.Namespace) -> int:
    if len(args.inputs) > 2:
        raise ValueError("build-dict takes one dictionary to normalize or two to compose")
    if len(args.inputs) == 1:
        result = parse_muse(args.inputs[0], src_lang=args.src_lang, tgt_lang=args.tgt_lang)
    else:
        first = parse_muse(args.inputs[0], src_lang=args.src_lang, tgt_lang=args.pivot_lang)
        second = parse_muse(args.inputs[1], src_lang=args.pivot_lang, tgt_lang=args.tgt_lang)
        result = compose_pivot(first, second)
    serialize_muse(result, args.out)
    write_manifest(
        str(args.out) + ".manifest.json",
        subcommand="build-dict",
        config={"src_lang": result.src_lang, "tgt_lang": result.tgt_lang},
        seed=None,
        inputs={f"dictionary_{i}": path for i, path in enumerate(args.inputs)},
        outputs=[str(args.out)],
    )
    print(f"wrote {len(result)} entries ({result.pair_count} pairs) to {args.out}")
    return 0


def _load_generation_inputs(args: argparse.Namespace):
    corpus = load_corpus(args.corpus, pretokenizer=args.pretokenizer)
    dictionary = parse_muse(args.dict) if args.dict else BilingualDictionary()
    return corpus, dictionary


def _cmd_generate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    corpus, dictionary = _load_generation_inputs(args)
    if args.sample:
        corpus = sample_paragraphs(corpus, args.sample, config.seed)
    vocab = load_vocab(args.vocab) if args.vocab else None
    report = generate_dataset(
        corpus, dictionary, config, out=args.out, workers=args.workers, vocab=vocab
    )
    report_path = str(args.out) + ".report.json"
    _write_json(report_path, report.to_dict())
    inputs = {"corpus": args.corpus}
    if args.dict:
        inputs["dictionary"] = args.dict
    if args.vocab:
        inputs["vocabulary"] = args.vocab
    write_manifest(
        str(args.out) + ".manifest.json",
        subcommand="generate",
        config=config.to_dict(),
        seed=config.seed,
        inputs=inputs,
        outputs=[str(args.out), report_path],
        extra={"workers": args.workers, "sample": args.sample},
    )
    print(f"wrote {report.paragraphs} records to {args.out}")
    print(report.render_table())
    return 0


def _cmd_calibrate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    corpus, dictionary = _load_generation_inputs(args)
    if args.sample:
        corpus = sample_paragraphs(corpus, args.sample, config.seed)
    result = calibrate_replace_prob(
        corpus,
        dictionary,
        config.noise,
        args.target_ratio,
        config.seed,
        mix_template=config.mix,
    )
    if args.out:
        _write_json(args.out, result.to_dict())
        inputs = {"corpus": args.corpus}
        if args.dict:
            inputs["dictionary"] = args.dict
        write_manifest(
            str(args.out) + ".manifest.json",
            subcommand="calibrate",
            config=config.to_dict(),
            seed=config.seed,
            inputs=inputs,
            outputs=[str(args.out)],
            extra={"target_ratio": args.target_ratio, "sample": args.sample},
        )
    if not result.feasible:
        print(
            f"target ratio {args.target_ratio} is not achievable "
            f"(coverage {result.coverage:.4f}); best ratio {result.achieved_ratio:.4f} at replace_prob=1.0"
        )
    else:
        print(
            f"recommended replace_prob {result.replace_prob:.6f} "
            f"(achieved ratio {result.achieved_ratio:.4f} after {result.iterations} iterations)"
        )
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    vocab = load_vocab(args.vocab) if args.vocab else None
    report = report_from_dataset(args.dataset, vocab=vocab)
    report.validate()
    if args.out:
        _write_json(args.out, report.to_dict())
        inputs = {"dataset": args.dataset}
        if args.vocab:
            inputs["vocabulary"] = args.vocab
        write_manifest(
            str(args.out) + ".manifest.json",
            subcommand="stats",
            config={},
            seed=None,
            inputs=inputs,
            outputs=[str(args.out)],
        )
    print(report.render_table())
    return 0


def _cmd_probe(args: argparse.Namespace) -> int:
    pairs = []
    with open(args.dataset, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            pairs.append(
                PseudoPair(
                    doc_id=record["id"],
                    input_text=record["input"],
                    target_text=record["target"],
                )
            )
    planted = parse_muse(args.dict)
    table, log_likelihoods = train_model1(pairs, args.iterations)
    precision = precision_at_1(table, planted)
    payload = {
        "pairs": len(pairs),
        "iterations": args.iterations,
        "precision_at_1": precision,
        "log_likelihood_per_iteration": log_likelihoods,
        "perplexity_per_iteration": perplexity_per_iteration(
            log_likelihoods, input_token_count(pairs)
        ),
    }
    if args.out:
        _write_json(args.out, payload)
        write_manifest(
            str(args.out) + ".manifest.json",
            subcommand="probe",
            config={"iterations": args.iterations},
            seed=None,
            inputs={"dataset": args.dataset, "dictionary": args.dict},
            outputs=[str(args.out)],
        )
    print(f"precision@1 {precision:.4f} over {len(pairs)} pairs")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        vocab_size=args.vocab_size,
        n_sentences=args.sentences,
        min_length=args.min_length,
        max_length=args.max_length,
        zipf_exponent=args.zipf_exponent,
        seed=args.seed if args.seed is not None else 0,
    )
    corpus, planted = synth_corpus(spec)
    save_corpus(corpus, args.out)
    serialize_muse(planted, args.dict_out)
    write_manifest(
        str(args.out) + ".manifest.json",
        subcommand="synth",
        config={
            "vocab_size": spec.vocab_size,
            "n_sentences": spec.n_sentences,
            "min_length": spec.min_length,
            "max_length": spec.max_length,
            "zipf_exponent": spec.zipf_exponent,
        },
        seed=spec.seed,
        inputs={},
        outputs=[str(args.out), str(args.dict_out)],
    )
    print(f"wrote {len(corpus)} paragraphs to {args.out} and {len(planted)} entries to {args.dict_out}")
    return 0


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file mirroring the pipeline config")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="config override, repeatable")
    parser.add_argument("--seed", type=int, help="64-bit seed (overrides the config file)")
    parser.add_argument("--no-noise", action="store_true", help="disable masking and permutation")
    parser.add_argument("--no-deletion", action="store_true", help="disable token deletion")
    parser.add_argument("--no-replacement", action="store_true", help="disable dictionary replacement")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixling", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"mixling {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-dict", help="parse or pivot-compose dictionaries")
    p.add_argument("inputs", nargs="+", help="one dictionary to normalize, or two to compose")
    p.add_argument("--out", required=True, help="output dictionary path")
    p.add_argument("--src-lang", default="", help="language tag of the source side")
    p.add_argument("--pivot-lang", default="", help="language tag of the pivot side")
    p.add_argument("--tgt-lang", default="", help="language tag of the target side")
    p.set_defaults(handler=_cmd_build_dict)

    p = sub.add_parser("calibrate", help="find replace_prob for a target mixing ratio")
    p.add_argument("--corpus", required=True, help="monolingual corpus file")
    p.add_argument("--dict", help="MUSE-format dictionary file")
    p.add_argument("--target-ratio", type=float, required=True, help="target mixing ratio")
    p.add_argument("--sample", type=int, default=0, help="calibrate on a sample of N paragraphs")
    p.add_argument("--pretokenizer", help="external pre-tokenizer command")
    p.add_argument("--out", help="write the calibration result as JSON")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_calibrate)

    p = sub.add_parser("generate", help="generate a JSON-lines dataset")
    p.add_argument("--corpus", required=True, help="monolingual corpus file")
    p.add_argument("--dict", help="MUSE-format dictionary file")
    p.add_argument("--out", required=True, help="output dataset path (JSON lines)")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--sample", type=int, default=0, help="generate from a sample of N paragraphs")
    p.add_argument("--vocab", help="vocabulary file for the out-of-vocabulary audit")
    p.add_argument("--pretokenizer", help="external pre-tokenizer command")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_generate)

    p = sub.add_parser("stats", help="recompute statistics from a dataset")
    p.add_argument("dataset", help="JSON-lines dataset path")
    p.add_argument("--vocab", help="vocabulary file for the out-of-vocabulary audit")
    p.add_argument("--out", help="write the report as JSON")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("probe", help="train the Model-1 alignment probe")
    p.add_argument("dataset", help="JSON-lines dataset path")
    p.add_argument("--dict", required=True, help="planted dictionary (ground truth)")
    p.add_argument("--iterations", type=int, default=10, help="EM iterations")
    p.add_argument("--out", help="write the probe report as JSON")
    p.set_defaults(handler=_cmd_probe)

    p = sub.add_parser("synth", help="write a synthetic corpus and planted dictionary")
    p.add_argument("--vocab-size", type=int, required=True)
    p.add_argument("--sentences", type=int, required=True)
    p.add_argument("--min-length", type=int, default=5)
    p.add_argument("--max-length", type=int, default=15)
    p.add_argument("--zipf-exponent", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output corpus path")
    p.add_argument("--dict-out", required=True, help="output planted-dictionary path")
    p.set_defaults(handler=_cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (MixlingError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"mixling {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
