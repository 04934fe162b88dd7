"""Command-line pipeline driver.

Subcommands mirror the pipeline stages so each is independently runnable and
cacheable: build-lexicon, synth, ingest, train-docvec, train-elm, score,
profile, report, eval. Every stage writes a manifest (configuration, seed,
input digests, planned outputs) into the output directory before its outputs,
and derives its own RNG stream from the single --seed flag as
blake2b64("<seed>:<stage>"), so one seed pins the whole pipeline.

Exit codes: 0 success, 1 input/data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from . import aspects as aspects_mod
from . import cascade as cascade_mod
from . import corpus as corpus_mod
from . import evaluate as evaluate_mod
from . import lexicon as lexicon_mod
from . import profiles as profiles_mod
from . import synth as synth_mod
from .docvec import Doc2VecEmbedder
from .elm import ElmClassifier
from .syntax import read_conllu
from .util import fmt_float, sha256_file, subseed


def _write_manifest(out_dir: Path, command: str, config: dict, inputs, outputs, seed=None):
    # seed is always recorded; stages that consume no randomness write null
    manifest = {
        "command": command,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": config,
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "outputs": [str(o) for o in outputs],
        "seed": seed,
        "stage_seed": subseed(seed, command) if seed is not None else None,
    }
    path = out_dir / f"{command}_manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require_files(*paths):
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise FileNotFoundError(f"input file not found: {p}")


def _load_catalog(args):
    if getattr(args, "catalog", None):
        return aspects_mod.load_catalog(args.catalog)
    return aspects_mod.default_catalog()


def _labeled_vectors(docs, embedder):
    labeled = [d for d in docs if d.label is not None]
    if not labeled:
        raise ValueError("no labeled documents found")
    X = embedder.transform(labeled)
    y = np.array([d.label for d in labeled])
    return labeled, X, y


def cmd_build_lexicon(args) -> int:
    _require_files(args.primary, args.secondary)
    out = _out_dir(args)
    _write_manifest(
        out,
        "build-lexicon",
        {"primary": args.primary, "secondary": args.secondary, "threshold": args.threshold},
        [args.primary, args.secondary],
        ["lexicon.tsv"],
    )
    primary = lexicon_mod.load_entries(args.primary, lexicon_mod.Source.PRIMARY)
    secondary = lexicon_mod.load_entries(args.secondary, lexicon_mod.Source.SECONDARY)
    merged = lexicon_mod.merge(primary, secondary, args.threshold)
    merged.save_tsv(out / "lexicon.tsv")
    print(f"merged lexicon: {len(merged)} entries -> {out / 'lexicon.tsv'}")
    return 0


def cmd_synth(args) -> int:
    out = _out_dir(args)
    twin_pairs = []
    if args.twin_pairs:
        for chunk in args.twin_pairs.split(","):
            i, j = chunk.split(":")
            twin_pairs.append((int(i), int(j)))
    config = synth_mod.SynthConfig(
        filler_rate=args.filler_rate,
        mild_rate=args.mild_rate,
        oov_rate=args.oov_rate,
        negation_rate=args.negation_rate,
        twin_pairs=tuple(twin_pairs),
    )
    outputs = ["reviews.jsonl"]
    if args.emit_lexicon:
        outputs += ["synth_primary.tsv", "synth_secondary.tsv"]
    _write_manifest(
        out,
        "synth",
        {
            "companies": args.companies,
            "per": args.per,
            "filler_rate": args.filler_rate,
            "mild_rate": args.mild_rate,
            "oov_rate": args.oov_rate,
            "negation_rate": args.negation_rate,
            "twin_pairs": args.twin_pairs or "",
            "emit_lexicon": bool(args.emit_lexicon),
        },
        [],
        outputs,
        seed=args.seed,
    )
    reviews = synth_mod.synth_corpus(args.companies, args.per, config, subseed(args.seed, "synth"))
    corpus_mod.write_reviews(reviews, out / "reviews.jsonl")
    if args.emit_lexicon:
        primary, secondary = synth_mod.companion_lexicon_entries(config)
        with open(out / "synth_primary.tsv", "w", encoding="utf-8") as fh:
            for e in primary:
                fh.write(f"{e.term}\t{e.polarity!r}\n")
        with open(out / "synth_secondary.tsv", "w", encoding="utf-8") as fh:
            for e in secondary:
                fh.write(f"{e.term}\t{e.polarity!r}\n")
    print(f"wrote {len(reviews)} reviews -> {out / 'reviews.jsonl'}")
    return 0


def cmd_ingest(args) -> int:
    _require_files(args.reviews)
    out = _out_dir(args)
    _write_manifest(
        out, "ingest", {"reviews": args.reviews}, [args.reviews], ["docs.jsonl"], seed=args.seed
    )
    raw = corpus_mod.ingest(args.reviews)
    docs = [doc for review in raw for doc in corpus_mod.split_pros_cons(review)]
    docs = corpus_mod.shuffle_docs(docs, subseed(args.seed, "ingest"))
    corpus_mod.write_docs(docs, out / "docs.jsonl")
    print(f"ingested {len(raw)} reviews into {len(docs)} labeled docs -> {out / 'docs.jsonl'}")
    return 0


def cmd_train_docvec(args) -> int:
    _require_files(args.docs)
    out = _out_dir(args)
    _write_manifest(
        out,
        "train-docvec",
        {
            "docs": args.docs,
            "dims": args.dims,
            "epochs": args.epochs,
            "negative": args.negative,
            "min_count": args.min_count,
        },
        [args.docs],
        ["docvec.json"],
        seed=args.seed,
    )
    docs = corpus_mod.read_docs(args.docs)
    embedder = Doc2VecEmbedder(
        dims=args.dims,
        epochs=args.epochs,
        negative=args.negative,
        min_count=args.min_count,
        seed=subseed(args.seed, "train-docvec"),
    )
    embedder.fit(docs)
    embedder.save(out / "docvec.json")
    print(
        f"trained doc vectors: {len(docs)} docs, vocab {len(embedder.vocab_)}, "
        f"last-epoch loss {embedder.epoch_losses_[-1]:.4f} -> {out / 'docvec.json'}"
    )
    return 0


def cmd_train_elm(args) -> int:
    _require_files(args.docs, args.docvec)
    out = _out_dir(args)
    _write_manifest(
        out,
        "train-elm",
        {
            "docs": args.docs,
            "docvec": args.docvec,
            "hidden": args.hidden,
            "ridge": args.ridge,
            "activation": args.activation,
        },
        [args.docs, args.docvec],
        ["elm.json"],
        seed=args.seed,
    )
    docs = corpus_mod.read_docs(args.docs)
    embedder = Doc2VecEmbedder.load(args.docvec)
    labeled, X, y = _labeled_vectors(docs, embedder)
    model = ElmClassifier(
        n_hidden=args.hidden,
        activation=args.activation,
        alpha=args.ridge,
        random_state=subseed(args.seed, "train-elm"),
    )
    model.fit(X, y)
    train_acc = evaluate_mod.accuracy(model.predict(X), y)
    model.save(out / "elm.json")
    print(
        f"trained classifier on {len(labeled)} docs, training accuracy {train_acc:.3f} "
        f"-> {out / 'elm.json'}"
    )
    return 0


def _parses_by_doc(conllu_path, docs):
    parsed = read_conllu(conllu_path)
    total = sum(len(d.tokens) for d in docs)
    if len(parsed) != total:
        raise ValueError(
            f"{conllu_path}: {len(parsed)} parsed sentences for {total} corpus sentences; "
            "the file must contain one parse per sentence in docs-file order"
        )
    out = {}
    cursor = 0
    for doc in docs:
        n = len(doc.tokens)
        out[doc.id] = parsed[cursor : cursor + n]
        cursor += n
    return out


def cmd_score(args) -> int:
    _require_files(args.docs, args.lexicon, args.docvec, args.elm, args.conllu, args.catalog)
    out = _out_dir(args)
    inputs = [p for p in (args.docs, args.lexicon, args.docvec, args.elm, args.conllu, args.catalog) if p]
    _write_manifest(
        out,
        "score",
        {
            "docs": args.docs,
            "lexicon": args.lexicon,
            "docvec": args.docvec,
            "elm": args.elm,
            "catalog": args.catalog or "<packaged>",
            "conllu": args.conllu or "",
            "window": args.window,
        },
        inputs,
        ["scores.jsonl", "score_report.json"],
        seed=args.seed,
    )
    docs = corpus_mod.read_docs(args.docs)
    catalog = _load_catalog(args)
    ctx = cascade_mod.CascadeContext(
        lexicon=lexicon_mod.load_merged_tsv(args.lexicon),
        elm=ElmClassifier.load(args.elm),
        docvec=Doc2VecEmbedder.load(args.docvec),
        window=args.window,
        seed=subseed(args.seed, "score"),
        parses=_parses_by_doc(args.conllu, docs) if args.conllu else None,
    )
    scores, stats = cascade_mod.score_corpus(docs, catalog, ctx)
    cascade_mod.write_scores(scores, docs, out / "scores.jsonl")
    with open(out / "score_report.json", "w", encoding="utf-8") as fh:
        json.dump(stats.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        f"scored {stats.total_mentions} mentions "
        f"(semi-random fallback rate {stats.fallback_rate:.4f}) -> {out / 'scores.jsonl'}"
    )
    return 0


def cmd_profile(args) -> int:
    _require_files(args.scores, args.docs, args.catalog)
    out = _out_dir(args)
    inputs = [p for p in (args.scores, args.docs, args.catalog) if p]
    _write_manifest(
        out,
        "profile",
        {"scores": args.scores, "docs": args.docs, "catalog": args.catalog or "<packaged>"},
        inputs,
        ["embeddings.tsv", "support.tsv"],
    )
    catalog = _load_catalog(args)
    docs = corpus_mod.read_docs(args.docs)
    doc_info = {d.id: (d.company, d.sector) for d in docs}
    rows = cascade_mod.read_scores(args.scores)
    scores = [_RowScore(r) for r in rows]
    embeddings = profiles_mod.build_embeddings(scores, doc_info, catalog)
    profiles_mod.write_embeddings_tsv(embeddings, catalog, out / "embeddings.tsv")
    profiles_mod.write_support_tsv(embeddings, catalog, out / "support.tsv")
    print(f"built {len(embeddings)} company embeddings -> {out / 'embeddings.tsv'}")
    return 0


class _RowScore:
    """Adapter: scored JSONL row -> the mention/score shape build_embeddings wants."""

    class _Mention:
        __slots__ = ("doc_id", "aspect_name")

        def __init__(self, doc_id, aspect_name):
            self.doc_id = doc_id
            self.aspect_name = aspect_name

    def __init__(self, row):
        try:
            self.mention = self._Mention(row["doc_id"], row["aspect"])
            self.score = float(row["score"])
        except KeyError as exc:
            raise ValueError(f"score record missing field {exc}") from None


def _read_pairs(path):
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 'company1<TAB>company2'")
            pairs.append((parts[0], parts[1]))
    return pairs


def cmd_report(args) -> int:
    sections = {
        "similarity": args.similarity,
        "rankings": args.rankings,
        "frequency": args.frequency,
        "projection": args.projection,
    }
    if not any(sections.values()):
        sections = {k: True for k in sections}
        if not args.docs:
            sections["frequency"] = False
    if sections["frequency"] and not args.docs:
        raise UsageError("--frequency needs --docs to count mentions")
    _require_files(args.embeddings, args.support, args.docs, args.pairs, args.catalog)
    out = _out_dir(args)
    outputs = [f"{name}.tsv" for name, wanted in sections.items() if wanted]
    inputs = [p for p in (args.embeddings, args.support, args.docs, args.pairs, args.catalog) if p]
    _write_manifest(
        out,
        "report",
        {
            "embeddings": args.embeddings,
            "support": args.support or "",
            "docs": args.docs or "",
            "pairs": args.pairs or "",
            "catalog": args.catalog or "<packaged>",
            "rank_aspects": args.rank_aspects,
            "sectors": args.sectors or "",
            "top_k": args.top_k,
            "sections": sorted(n for n, w in sections.items() if w),
        },
        inputs,
        outputs,
    )
    catalog = _load_catalog(args)
    support_path = args.support
    if support_path is None:
        candidate = Path(args.embeddings).with_name("support.tsv")
        support_path = candidate if candidate.is_file() else None
    embeddings = profiles_mod.read_embeddings_tsv(args.embeddings, support_path)

    if sections["similarity"]:
        pairs = _read_pairs(args.pairs) if args.pairs else None
        rows, warnings = profiles_mod.similarity_report(embeddings, pairs)
        profiles_mod.write_similarity_tsv(rows, warnings, out / "similarity.tsv")
    if sections["rankings"]:
        sectors = [s for s in (args.sectors or "").split(",") if s] or [None]
        with open(out / "rankings.tsv", "w", encoding="utf-8") as fh:
            fh.write("aspect\tsector\tdirection\trank\tcompany\tscore\tsupport\n")
            for aspect_name in args.rank_aspects.split(","):
                aspect_name = aspect_name.strip()
                for sector in sectors:
                    for direction in ("best", "worst"):
                        ranked = profiles_mod.rank_by_aspect(
                            embeddings, aspect_name, catalog, sector, args.top_k, direction
                        )
                        for rank, (company, value, support) in enumerate(ranked, start=1):
                            fh.write(
                                f"{aspect_name}\t{sector or 'all'}\t{direction}\t{rank}\t"
                                f"{company}\t{fmt_float(value)}\t{support}\n"
                            )
    if sections["frequency"]:
        docs = corpus_mod.read_docs(args.docs)
        counts = aspects_mod.corpus_frequency(docs, catalog)
        with open(out / "frequency.tsv", "w", encoding="utf-8") as fh:
            fh.write("aspect\tfrequency\n")
            for name in sorted(counts, key=lambda n: (-counts[n], n)):
                fh.write(f"{name}\t{counts[name]}\n")
    if sections["projection"]:
        projection = profiles_mod.project_2d(embeddings)
        profiles_mod.write_projection_tsv(projection, out / "projection.tsv")
    print(f"report sections {', '.join(n for n, w in sections.items() if w)} -> {out}")
    return 0


def cmd_eval(args) -> int:
    _require_files(args.docs, args.docvec)
    out = _out_dir(args)
    _write_manifest(
        out,
        "eval",
        {
            "docs": args.docs,
            "docvec": args.docvec,
            "folds": args.folds,
            "hidden": args.hidden,
            "ridge": args.ridge,
            "epochs": args.epochs,
            "reg": args.reg,
        },
        [args.docs, args.docvec],
        ["eval_report.tsv"],
        seed=args.seed,
    )
    docs = corpus_mod.read_docs(args.docs)
    embedder = Doc2VecEmbedder.load(args.docvec)
    _, X, y = _labeled_vectors(docs, embedder)
    result = evaluate_mod.kfold_compare(
        X,
        y,
        k=args.folds,
        elm_params={"n_hidden": args.hidden, "alpha": args.ridge},
        baseline_params={"epochs": args.epochs, "reg": args.reg},
        seed=subseed(args.seed, "eval"),
    )
    evaluate_mod.write_eval_report(result, out / "eval_report.tsv")
    summary = result.summary()
    print(
        f"elm acc {summary['elm']['mean_accuracy']:.4f} vs baseline "
        f"{summary['baseline']['mean_accuracy']:.4f}; t={result.t_stat:.3f} "
        f"p={result.p_value:.3f} speed_ratio={result.speed_ratio:.1f} -> {out / 'eval_report.tsv'}"
    )
    return 0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspectsent",
        description="Aspect-sentiment company profiling pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-lexicon", help="merge two polarity TSVs into one lexicon")
    p.add_argument("--primary", required=True, help="primary source TSV (wins conflicts)")
    p.add_argument("--secondary", required=True, help="secondary source TSV")
    p.add_argument("--threshold", type=float, default=0.25, help="minimum |polarity| kept")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_build_lexicon)

    p = sub.add_parser("synth", help="generate a synthetic review corpus")
    p.add_argument("--companies", type=int, required=True)
    p.add_argument("--per", type=int, required=True, help="reviews per company")
    p.add_argument("--filler-rate", type=float, default=0.0)
    p.add_argument("--mild-rate", type=float, default=0.0)
    p.add_argument("--oov-rate", type=float, default=0.0)
    p.add_argument("--negation-rate", type=float, default=0.0)
    p.add_argument("--twin-pairs", default="", help="company index pairs 'i:j,i:j' sharing a profile")
    p.add_argument("--emit-lexicon", action="store_true", help="also write matching lexicon TSVs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="split reviews into labeled, tokenized, shuffled docs")
    p.add_argument("--reviews", required=True, help="JSON-lines review file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train-docvec", help="train document embeddings")
    p.add_argument("--docs", required=True)
    p.add_argument("--dims", type=int, default=50)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_train_docvec)

    p = sub.add_parser("train-elm", help="train the review-level classifier")
    p.add_argument("--docs", required=True)
    p.add_argument("--docvec", required=True)
    p.add_argument("--hidden", type=int, default=100)
    p.add_argument("--ridge", type=float, default=1e-3)
    p.add_argument("--activation", default="sigmoid", choices=["sigmoid", "tanh"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_train_elm)

    p = sub.add_parser("score", help="score every aspect mention through the cascade")
    p.add_argument("--docs", required=True)
    p.add_argument("--lexicon", required=True, help="merged lexicon TSV")
    p.add_argument("--docvec", required=True)
    p.add_argument("--elm", required=True)
    p.add_argument("--catalog", default=None, help="aspect catalog JSON (default: packaged)")
    p.add_argument("--conllu", default=None, help="pre-parsed sentences instead of the heuristic parser")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("profile", help="aggregate scores into company embeddings")
    p.add_argument("--scores", required=True)
    p.add_argument("--docs", required=True)
    p.add_argument("--catalog", default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("report", help="similarity, rankings, frequency and projection tables")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--support", default=None, help="support TSV (default: sibling support.tsv)")
    p.add_argument("--docs", default=None, help="needed for the frequency table")
    p.add_argument("--catalog", default=None)
    p.add_argument("--pairs", default=None, help="explicit company pairs for similarity")
    p.add_argument("--similarity", action="store_true")
    p.add_argument("--rankings", action="store_true")
    p.add_argument("--frequency", action="store_true")
    p.add_argument("--projection", action="store_true")
    p.add_argument("--rank-aspects", default="Salary,Location,Work life")
    p.add_argument("--sectors", default=None, help="comma-separated sector filter for rankings")
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("eval", help="k-fold ELM vs baseline comparison")
    p.add_argument("--docs", required=True)
    p.add_argument("--docvec", required=True)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--hidden", type=int, default=100)
    p.add_argument("--ridge", type=float, default=1e-3)
    p.add_argument("--epochs", type=int, default=50, help="baseline training epochs")
    p.add_argument("--reg", type=float, default=1e-3, help="baseline L2 weight")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
