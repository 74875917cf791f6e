"""Command line interface: simulations, file analysis, embedding inspection,
and the HTTP service."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import feedback, resources, simulator
from .alternatives import SynonymSource, load_thesaurus
from .errors import SayableError
from .phonetics import build_embedding, load_pronouncing_dict, nearest_neighbors, phonemes_of
from .simulator import Scenario, SimulationConfig


@click.group()
def main():
    """Personalized hard-word detection toolkit."""


def _fail(message: str) -> "click.ClickException":
    exc = click.ClickException(message)
    exc.exit_code = 1
    return exc


@main.command("simulate")
@click.option("--profiles", "profiles_path", type=click.Path(path_type=Path),
              default=None, help="Profiles JSON (default: bundled profiles).")
@click.option("--corpus", "corpus_path", type=click.Path(path_type=Path),
              default=None, help="Corpus file (default: bundled corpus).")
@click.option("--corpus-format", type=click.Choice(["plain_text", "csv"]),
              default="plain_text", show_default=True)
@click.option("--corpus-column", default="transcript", show_default=True,
              help="Text column for csv corpora.")
@click.option("--dict", "dict_path", type=click.Path(path_type=Path),
              default=None, help="Pronouncing dictionary (default: bundled).")
@click.option("--scenario", type=click.Choice([s.value for s in Scenario]),
              default="explicit", show_default=True)
@click.option("--interactions", type=click.IntRange(min=1), default=500,
              show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--threshold", type=click.FloatRange(0.0, 1.0), default=0.1,
              show_default=True, help="Highlight threshold for implicit runs.")
@click.option("--train-fraction", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
              default=0.75, show_default=True)
@click.option("--oracle-consistent-substitute", is_flag=True, default=False,
              help="Implicit users pick the first alternative they can say.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path),
              required=True, help="Output directory for CSV reports.")
@click.option("--plot", "plot_path", type=click.Path(path_type=Path),
              default=None, help="Optional SVG plot of the mean F1 curve.")
def cmd_simulate(profiles_path, corpus_path, corpus_format, corpus_column,
                 dict_path, scenario, interactions, seed, threshold,
                 train_fraction, oracle_consistent_substitute, out_dir, plot_path):
    """Run the feedback simulation for every profile and write CSV reports."""
    try:
        pdict = load_pronouncing_dict(dict_path or resources.bundled_dict_path())
        embedding = build_embedding(pdict)
        profiles = simulator.load_profiles(profiles_path or resources.bundled_profiles_path())
        corpus = simulator.load_corpus(
            corpus_path or resources.bundled_corpus_path(), pdict,
            fmt=corpus_format,
            column=corpus_column if corpus_format == "csv" else None)
        synonyms = SynonymSource(offline=load_thesaurus(resources.bundled_thesaurus_path()))
        config = SimulationConfig(
            scenario=Scenario(scenario),
            interactions=interactions,
            train_fraction=train_fraction,
            rng_seed=seed,
            implicit_highlight_threshold=threshold,
            oracle_consistent_substitute=oracle_consistent_substitute,
        )

        out_dir.mkdir(parents=True, exist_ok=True)
        reports = []
        for profile in profiles:
            report = simulator.run_simulation(
                profile, corpus, config, embedding, pdict, synonym_source=synonyms)
            simulator.write_report_csv(
                report, out_dir / f"{profile.id}_{scenario}.csv")
            final = report.rows[-1]
            click.echo(
                f"{profile.id} [{scenario}] interactions={report.completed_interactions}"
                f"{' (early stop)' if report.terminated_early else ''}"
                f" final: acc={final.accuracy:.3f} f1={final.f1:.3f}")
            reports.append(report)
        agg = simulator.aggregate(reports)
        agg_path = out_dir / f"aggregate_{scenario}.csv"
        simulator.write_aggregate_csv(agg, agg_path)
        if agg.padded_profile_ids:
            click.echo("padded early-stopped profiles: "
                       + ", ".join(agg.padded_profile_ids))
        final = agg.rows[-1]
        click.echo(f"mean final: acc={final.accuracy:.3f} "
                   f"precision={final.precision:.3f} f1={final.f1:.3f}")
        click.echo(f"wrote {agg_path}")
        if plot_path is not None:
            simulator.plot_aggregate_svg([agg], plot_path)
            click.echo(f"wrote {plot_path}")
    except SayableError as exc:
        raise _fail(str(exc))


@main.command("analyze")
@click.option("--session-file", type=click.Path(path_type=Path), required=True,
              help="Persisted session JSON document.")
@click.option("--text", "text_path", type=click.Path(path_type=Path),
              required=True, help="Text file to analyze.")
@click.option("--dict", "dict_path", type=click.Path(path_type=Path), default=None)
def cmd_analyze(session_file, text_path, dict_path):
    """Print the highlighted words of a text file for a stored session."""
    try:
        if not session_file.is_file():
            raise _fail(f"session file not found: {session_file}")
        if not text_path.is_file():
            raise _fail(f"text file not found: {text_path}")
        document = json.loads(session_file.read_text(encoding="utf-8"))
        um = feedback.user_model_from_dict(
            document.get("user_model", document))
        pdict = load_pronouncing_dict(dict_path or resources.bundled_dict_path())
        embedding = build_embedding(pdict)
        if um.embedding_ref != embedding.fingerprint:
            raise _fail("session was created against a different embedding")
        text = text_path.read_text(encoding="utf-8")
        from .alternatives import TokenKind, detect_immutable, tokenize
        seen = set()
        for token in detect_immutable(tokenize(text)):
            if token.kind is not TokenKind.WORD:
                continue
            word = token.text.lower()
            if word in seen:
                continue
            prediction = feedback.predict_word(um, embedding, word)
            if prediction.highlighted:
                seen.add(word)
                click.echo(f"{word}\t{prediction.prob:.4f}")
    except SayableError as exc:
        raise _fail(str(exc))


@main.command("embed")
@click.option("--dict", "dict_path", type=click.Path(path_type=Path), default=None)
@click.option("--word", required=True)
@click.option("--neighbors", type=click.IntRange(min=0), default=0,
              show_default=True)
def cmd_embed(dict_path, word, neighbors):
    """Show a word's phoneme sequence and its nearest phonetic neighbors."""
    try:
        pdict = load_pronouncing_dict(dict_path or resources.bundled_dict_path())
        sequence = phonemes_of(pdict, word)
        click.echo(" ".join(sequence.phonemes))
        if neighbors > 0:
            embedding = build_embedding(pdict)
            for neighbor, similarity in nearest_neighbors(embedding, word, neighbors):
                click.echo(f"{neighbor}\t{similarity:.4f}")
    except SayableError as exc:
        raise _fail(str(exc))


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(path_type=Path),
              default=None, help="Service config JSON.")
def cmd_serve(config_path):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app, load_service_config

    try:
        config = load_service_config(config_path)
        app = create_app(config)
    except (SayableError, ValueError, OSError) as exc:
        raise _fail(str(exc))
    uvicorn.run(app, host=config.host, port=config.port)


if __name__ == "__main__":
    sys.exit(main())
