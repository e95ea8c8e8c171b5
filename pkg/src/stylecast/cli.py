"""Command-line entry point: ``stylecast <subcommand> ...``.

Every subcommand accepts ``--config FILE`` with ``key = value`` lines; flags
given on the command line override the file. Artifact-producing commands
write a run manifest next to each output (``<output>.manifest.json``).

Exit codes: 0 on success, 1 on usage errors, 2 on data errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from ._io import StylecastError, atomic_write_text, dumps, file_digest
from .corpus import (
    Vocabulary, SplitSpec, build_vocabulary, filter_corpus, load_corpus,
    save_corpus, split,
)
from .decode import BeamConfig, Bundle, FusionConfig, generate
from .lm import LmConfig, NgramLM, train_lm
from .metrics import report
from .pos import load_tags
from .style import StyleWeight, align_to_vocab, compute_style_weight
from .topic import TopicConfig, TopicModel, train_lda

log = logging.getLogger("stylecast")


class UsageError(Exception):
    pass


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class Param:
    name: str
    type: type
    default: object = None
    help: str = ""
    path: bool = False
    required: bool = False
    flag: bool = False  # boolean switch on the command line


SEED = Param("seed", int, 0, "random seed")

PARAMS = {
    "ingest": [
        Param("corpus", str, help="raw comments (.jsonl or plain text, one per line)", path=True, required=True),
        Param("out_dir", str, help="directory for the splits and vocabulary", path=True, required=True),
        Param("min_freq", int, 5, "minimum token frequency kept in the vocabulary"),
        Param("max_len", int, 20, "drop comments longer than this many tokens"),
        Param("split", str, "28/30,1/30,1/30", "train,valid,test fractions"),
        SEED,
    ],
    "train-lda": [
        Param("corpus", str, help="training corpus (.json)", path=True, required=True),
        Param("vocab", str, help="vocabulary (.json)", path=True, required=True),
        Param("out", str, help="output topic model", path=True, required=True),
        Param("k", int, 3, "number of topics"),
        Param("alpha", float, 0.1, "document-topic prior"),
        Param("beta", float, 0.01, "topic-word prior"),
        Param("iterations", int, 1000, "Gibbs sweeps"),
        Param("burn_in", int, 200, "sweeps recorded as burn-in"),
        SEED,
    ],
    "train-lm": [
        Param("corpus", str, help="training corpus (.json)", path=True, required=True),
        Param("vocab", str, help="vocabulary (.json)", path=True, required=True),
        Param("out", str, help="output language model", path=True, required=True),
        Param("order", int, 3, "n-gram order"),
        Param("add_k", float, 0.1, "add-k smoothing constant"),
        SEED,
    ],
    "style": [
        Param("model", str, help="topic model (.json)", path=True, required=True),
        Param("out", str, help="output style-weight", path=True, required=True),
        Param("vocab", str, help="re-index the weights onto this vocabulary (.json)", path=True),
    ],
    "generate": [
        Param("lm", str, help="language model (.json)", path=True, required=True),
        Param("style", str, help="style-weight (.json)", path=True),
        Param("out", str, help="write comments here instead of stdout", path=True),
        Param("beam", int, 3, "beam width"),
        Param("max_len", int, 20, "maximum generated length"),
        Param("n", int, 5, "number of comments to print"),
        Param("lambda", float, 1.0, "style strength (0 disables the style-weight)"),
        Param("no_style", bool, False, "ignore the style-weight", flag=True),
        Param("length_normalize", bool, False, "rank hypotheses by per-token score", flag=True),
        Param("allow_unk", bool, False, "let the decoder emit the unknown token", flag=True),
        SEED,
    ],
    "evaluate": [
        Param("ref", str, help="reference corpus", path=True, required=True),
        Param("gen", str, help="generated comments", path=True, required=True),
        Param("tags", str, help="tag file for the reference corpus", path=True),
        Param("gen_tags", str, help="tag file for the generated comments", path=True),
        Param("out", str, help="write the report here instead of stdout", path=True),
    ],
    "pipeline": [
        Param("corpus", str, help="raw comments", path=True, required=True),
        Param("out_dir", str, help="directory for every artifact", path=True, required=True),
        Param("min_freq", int, 5, "minimum token frequency"),
        Param("max_len", int, 20, "length cap for training comments"),
        Param("split", str, "28/30,1/30,1/30", "train,valid,test fractions"),
        Param("k", int, 3, "number of topics"),
        Param("alpha", float, 0.1, "document-topic prior"),
        Param("beta", float, 0.01, "topic-word prior"),
        Param("iterations", int, 1000, "Gibbs sweeps"),
        Param("burn_in", int, 200, "sweeps recorded as burn-in"),
        Param("order", int, 3, "n-gram order"),
        Param("add_k", float, 0.1, "add-k smoothing constant"),
        Param("beam", int, 3, "beam width"),
        Param("gen_max_len", int, 20, "maximum generated length"),
        Param("n", int, 5, "number of generated comments"),
        Param("lambda", float, 1.0, "style strength"),
        Param("style", _bool, True, "fuse the style-weight (true/false)"),
        Param("length_normalize", _bool, False, "rank hypotheses by per-token score"),
        SEED,
    ],
}

HELP = {
    "ingest": "tokenize, split and filter a raw corpus; build the vocabulary",
    "train-lda": "fit the topic model",
    "train-lm": "fit the n-gram language model",
    "style": "compute the corpus style-weight from a topic model",
    "generate": "beam-search comments from a language model and style-weight",
    "evaluate": "diversity and BLEU-4 report for generated comments",
    "pipeline": "run every stage from one config file",
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stylecast", description="Style-weighted comment generation and corpus diversity.")
    parser.add_argument("--version", action="version", version=f"stylecast {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for command, params in PARAMS.items():
        p = sub.add_parser(command, help=HELP[command], description=HELP[command])
        p.add_argument("--config", help="key = value file; command-line flags take precedence")
        for prm in params:
            opt = "--" + prm.name.replace("_", "-")
            if prm.flag:
                p.add_argument(opt, dest=prm.name, action="store_const", const=True, default=None, help=prm.help)
            else:
                default = "" if prm.default is None else f" (default: {prm.default})"
                p.add_argument(opt, dest=prm.name, default=None, metavar=prm.name.upper(),
                               help=prm.help + default)
        if command == "pipeline":
            p.add_argument("--no-style", dest="style", action="store_const", const=False,
                           help="generate without the style-weight")
    return parser


def read_config(path) -> dict[str, str]:
    path = Path(path)
    if not path.exists():
        raise StylecastError(f"no such file: {path}")
    values = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("#") else ""
        if not line:
            continue
        if "=" not in line:
            raise StylecastError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def resolve(command: str, args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then command-line flags."""
    params = {p.name: p for p in PARAMS[command]}
    raw: dict[str, tuple[object, Path | None]] = {}
    if args.config:
        cfg_path = Path(args.config)
        for key, value in read_config(cfg_path).items():
            if key not in params:
                raise StylecastError(f"{cfg_path}: unknown key {key!r} for {command}")
            raw[key] = (value, cfg_path.parent)
    for name in params:
        value = getattr(args, name, None)
        if value is not None:
            raw[name] = (value, None)
    resolved = {}
    for name, prm in params.items():
        if name not in raw:
            if prm.required:
                raise UsageError(f"--{name.replace('_', '-')} is required (flag or config key)")
            resolved[name] = prm.default
            continue
        value, base = raw[name]
        try:
            value = prm.type(value)
        except ValueError:
            raise UsageError(f"invalid value for {name}: {value!r}") from None
        if prm.path and base is not None:
            value = str(base / value)
        resolved[name] = value
    return resolved


def _config(factory, **kwargs):
    try:
        return factory(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _need(path) -> Path:
    path = Path(path)
    if not path.exists():
        raise StylecastError(f"no such file: {path}")
    return path


def write_manifest(output, command: str, argv, params: dict, inputs, outputs, seeds: dict,
                   started: float) -> Path:
    """Record how ``output`` was made, atomically, as ``<output>.manifest.json``."""
    target = Path(str(output) + ".manifest.json")
    doc = {
        "format_version": 1,
        "kind": "run_manifest",
        "command": command,
        "argv": list(argv),
        "params": params,
        "inputs": {str(p): file_digest(p) for p in inputs},
        "outputs": {str(p): file_digest(p) for p in outputs},
        "seeds": seeds,
        "version": __version__,
        "duration_s": round(time.perf_counter() - started, 6),
    }
    atomic_write_text(target, dumps(doc))
    return target


# ---------------------------------------------------------------------------
# Stages; each returns the list of files it wrote.
# ---------------------------------------------------------------------------


def stage_ingest(p: dict) -> list[Path]:
    raw = load_corpus(_need(p["corpus"]))
    spec = _config(SplitSpec.parse, text=p["split"], seed=p["seed"])
    train, valid, test = split(raw, spec)
    train = filter_corpus(train, p["max_len"])
    vocab = build_vocabulary(train, p["min_freq"])
    out = Path(p["out_dir"])
    files = [out / "vocab.json", out / "train.json", out / "valid.json", out / "test.json"]
    vocab.save(files[0])
    # the training split gets UNK substitution; held-out splits keep raw tokens
    save_corpus(filter_corpus(train, p["max_len"], vocab), files[1])
    save_corpus(filter_corpus(valid, p["max_len"]), files[2])
    save_corpus(filter_corpus(test, p["max_len"]), files[3])
    log.info("ingest: %d comments, vocabulary of %d", len(raw), len(vocab))
    return files


def stage_train_lda(p: dict) -> list[Path]:
    corpus = load_corpus(_need(p["corpus"]))
    vocab = Vocabulary.load(_need(p["vocab"]))
    cfg = _config(TopicConfig, K=p["k"], alpha=p["alpha"], beta=p["beta"],
                  iterations=p["iterations"], burn_in=p["burn_in"], seed=p["seed"])
    model = train_lda(corpus, vocab, cfg)
    model.save(p["out"])
    return [Path(p["out"])]


def stage_train_lm(p: dict) -> list[Path]:
    corpus = load_corpus(_need(p["corpus"]))
    vocab = Vocabulary.load(_need(p["vocab"]))
    lm = train_lm(corpus, vocab, _config(LmConfig, order=p["order"], k=p["add_k"], seed=p["seed"]))
    lm.save(p["out"])
    return [Path(p["out"])]


def stage_style(p: dict) -> list[Path]:
    model = TopicModel.load(_need(p["model"]))
    sw = compute_style_weight(model, model_id=Path(p["model"]).name)
    if p["vocab"]:
        vocab = Vocabulary.load(_need(p["vocab"]))
        sw = align_to_vocab(sw, model.words, vocab)
    sw.save(p["out"])
    return [Path(p["out"])]


def stage_generate(p: dict) -> tuple[list[str], list[Path]]:
    lm = NgramLM.load(_need(p["lm"]))
    sw = None
    if p["style"] and not p["no_style"]:
        sw = StyleWeight.load(_need(p["style"]))
    bcfg = _config(BeamConfig, width=p["beam"], max_len=p["max_len"], seed=p["seed"],
                   length_normalize=p["length_normalize"], allow_unk=p["allow_unk"])
    fcfg = _config(FusionConfig, strength=p["lambda"])
    if p["n"] < 1:
        raise UsageError("n must be >= 1")
    lines = generate(Bundle(lm.vocab, lm, sw), bcfg, fcfg, n=p["n"])
    if p["out"]:
        atomic_write_text(p["out"], "".join(line + "\n" for line in lines))
        return lines, [Path(p["out"])]
    return lines, []


def stage_evaluate(p: dict) -> tuple[str, list[Path]]:
    ref = load_corpus(_need(p["ref"]))
    gen = load_corpus(_need(p["gen"]))
    if len(gen) == 0:
        raise StylecastError(f"{p['gen']}: no generated comments")
    ref_tags = load_tags(p["tags"]) if p["tags"] else None
    gen_tags = load_tags(p["gen_tags"]) if p["gen_tags"] else None
    prov = {"reference": Path(p["ref"]).name, "generated": Path(p["gen"]).name}
    text = report(ref, gen, ref_tags, gen_tags, provenance=prov).to_json()
    if p["out"]:
        atomic_write_text(p["out"], text)
        return text, [Path(p["out"])]
    return text, []


def _run_single(command: str, p: dict, argv) -> int:
    started = time.perf_counter()
    seeds = {"seed": p["seed"]} if "seed" in p else {}
    if command == "ingest":
        outputs = stage_ingest(p)
        inputs = [p["corpus"]]
        write_manifest(Path(p["out_dir"]) / "ingest", command, argv, p, inputs, outputs, seeds, started)
        return 0
    if command == "generate":
        lines, outputs = stage_generate(p)
        if not outputs:
            sys.stdout.write("".join(line + "\n" for line in lines))
        inputs = [p["lm"]] + ([p["style"]] if p["style"] and not p["no_style"] else [])
    elif command == "evaluate":
        text, outputs = stage_evaluate(p)
        if not outputs:
            sys.stdout.write(text)
        inputs = [p[k] for k in ("ref", "gen", "tags", "gen_tags") if p[k]]
    else:
        stage = {"train-lda": stage_train_lda, "train-lm": stage_train_lm, "style": stage_style}[command]
        outputs = stage(p)
        inputs = [p[k] for k in ("corpus", "vocab", "model") if p.get(k)]
    for out in outputs:
        write_manifest(out, command, argv, p, inputs, outputs, seeds, started)
    return 0


def run_pipeline(p: dict, argv) -> int:
    """ingest, train-lda, train-lm, style, generate, evaluate into ``out_dir``."""
    started = time.perf_counter()
    out = Path(p["out_dir"])
    seeds = {"seed": p["seed"]}
    steps = [
        ("ingest", stage_ingest, {k: p[k] for k in ("corpus", "out_dir", "min_freq", "max_len", "split", "seed")}),
        ("train-lda", stage_train_lda, {
            "corpus": str(out / "train.json"), "vocab": str(out / "vocab.json"), "out": str(out / "model.json"),
            "k": p["k"], "alpha": p["alpha"], "beta": p["beta"], "iterations": p["iterations"],
            "burn_in": p["burn_in"], "seed": p["seed"]}),
        ("train-lm", stage_train_lm, {
            "corpus": str(out / "train.json"), "vocab": str(out / "vocab.json"), "out": str(out / "lm.json"),
            "order": p["order"], "add_k": p["add_k"], "seed": p["seed"]}),
        ("style", stage_style, {
            "model": str(out / "model.json"), "out": str(out / "style.json"), "vocab": str(out / "vocab.json")}),
        ("generate", lambda q: stage_generate(q)[1], {
            "lm": str(out / "lm.json"), "style": str(out / "style.json"), "out": str(out / "generations.txt"),
            "beam": p["beam"], "max_len": p["gen_max_len"], "n": p["n"], "lambda": p["lambda"],
            "no_style": not p["style"], "length_normalize": p["length_normalize"], "allow_unk": False,
            "seed": p["seed"]}),
        ("evaluate", lambda q: stage_evaluate(q)[1], {
            "ref": str(out / "test.json"), "gen": str(out / "generations.txt"), "tags": None,
            "gen_tags": None, "out": str(out / "report.json")}),
    ]
    produced = []
    for name, stage, params in steps:
        t0 = time.perf_counter()
        inputs = [params[k] for k in ("corpus", "vocab", "model", "lm", "style", "ref", "gen")
                  if params.get(k) and not (name == "generate" and k == "style" and params["no_style"])]
        outputs = stage(params)
        anchor = out / "ingest" if name == "ingest" else outputs[0]
        write_manifest(anchor, name, argv, params, inputs, outputs, seeds, t0)
        produced.extend(outputs)
        log.info("pipeline: %s done", name)
    write_manifest(out / "pipeline", "pipeline", argv, p, [p["corpus"]], produced, seeds, started)
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        params = resolve(args.command, args)
        if args.command == "pipeline":
            return run_pipeline(params, argv)
        return _run_single(args.command, params, argv)
    except UsageError as exc:
        print(f"stylecast {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (StylecastError, OSError) as exc:
        print(f"stylecast {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
