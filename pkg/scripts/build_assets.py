#!/usr/bin/env python3
"""Regenerate the bundled data files under src/sayable/data/.

Sources (both redistributable, fetched once from the npm registry):
  - cmu-pronouncing-dictionary (CMU Pronouncing Dictionary 0.7b), dumped to
    JSON with:  node -e "import('./index.js').then(m =>
        require('fs').writeFileSync('cmudict.json', JSON.stringify(m.dictionary)))"
  - wordnet-db (WordNet 3.1 database files), unpacked so that dict/ contains
    data.{noun,verb,adj,adv} and index.{noun,verb,adj,adv}.

Outputs:
  cmudict-0.7b.txt   pronouncing dictionary in the classic cmudict-0.7b layout
  thesaurus.tsv      word<TAB>syn1,syn2,...  (synonyms in sense order)
  corpus.txt         small plain-text corpus built from WordNet usage examples

The outputs are committed; this script only needs to run again when the
upstream data changes.
"""

from __future__ import annotations

import argparse
import json
import re
from collections import OrderedDict
from pathlib import Path

POS_FILES = ["noun", "verb", "adj", "adv"]
ADJ_MARKER = re.compile(r"\((a|p|ip)\)$")
VARIANT = re.compile(r"\(\d+\)$")
QUOTED = re.compile(r'"([^"]+)"')
WORD_RE = re.compile(r"[a-z']+(?:-[a-z']+)*")

CORPUS_HEADER = (
    "# Small English corpus assembled from WordNet 3.1 usage examples.\n"
    "# One sentence per line; used for offline simulation and CI.\n"
)


def write_cmudict(cmudict_json: Path, out_path: Path) -> dict[str, list[str]]:
    raw = json.loads(cmudict_json.read_text(encoding="utf-8"))
    lines = []
    base_entries: dict[str, list[str]] = {}
    skipped = 0
    for word in sorted(raw):
        pron = raw[word]
        try:
            f"{word}  {pron}".encode("ascii")
        except UnicodeEncodeError:
            skipped += 1
            continue
        lines.append(f"{word.upper()}  {pron}")
        if not VARIANT.search(word):
            base_entries[word] = [p.rstrip("012") for p in pron.split()]
    header = (
        ";;; CMU Pronouncing Dictionary 0.7b (cmudict-0.7b layout)\n"
        ";;; Copyright (C) 1993-2015 Carnegie Mellon University. BSD licensed.\n"
        ";;; Regenerated from the cmu-pronouncing-dictionary npm package.\n"
    )
    out_path.write_text(header + "\n".join(lines) + "\n", encoding="ascii")
    print(f"cmudict: {len(lines)} lines, {len(base_entries)} base words, "
          f"{skipped} non-ascii entries skipped")
    return base_entries


def clean_member(raw: str) -> str:
    return ADJ_MARKER.sub("", raw).lower()


def parse_data_file(path: Path) -> tuple[dict[str, list[str]], list[str]]:
    """Return (synset offset -> member words, gloss texts in file order)."""
    synsets: dict[str, list[str]] = {}
    glosses: list[str] = []
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if line.startswith("  "):
                continue
            body, _, gloss = line.partition(" | ")
            fields = body.split()
            offset = fields[0]
            w_cnt = int(fields[3], 16)
            members = [clean_member(fields[4 + 2 * i]) for i in range(w_cnt)]
            synsets[offset] = members
            if gloss:
                glosses.append(gloss.strip())
    return synsets, glosses


def parse_index_file(path: Path) -> "OrderedDict[str, list[str]]":
    """Return lemma -> synset offsets in sense (frequency) order."""
    index: OrderedDict[str, list[str]] = OrderedDict()
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if line.startswith("  "):
                continue
            fields = line.split()
            lemma = fields[0]
            synset_cnt = int(fields[2])
            index[lemma] = fields[-synset_cnt:]
    return index


def build_thesaurus(wordnet_dir: Path, vocab: set[str], out_path: Path,
                    max_synonyms: int = 25) -> None:
    thesaurus: dict[str, list[str]] = {}
    for pos in POS_FILES:
        synsets, _ = parse_data_file(wordnet_dir / f"data.{pos}")
        index = parse_index_file(wordnet_dir / f"index.{pos}")
        for lemma, offsets in index.items():
            if "_" in lemma or lemma not in vocab:
                continue
            ordered = thesaurus.setdefault(lemma, [])
            for offset in offsets:
                for member in synsets.get(offset, []):
                    if member == lemma or "_" in member:
                        continue
                    if member not in vocab or member in ordered:
                        continue
                    ordered.append(member)
    with out_path.open("w", encoding="utf-8") as handle:
        for lemma in sorted(thesaurus):
            synonyms = thesaurus[lemma][:max_synonyms]
            if synonyms:
                handle.write(f"{lemma}\t{','.join(synonyms)}\n")
    kept = sum(1 for s in thesaurus.values() if s)
    print(f"thesaurus: {kept} headwords")


def build_corpus(wordnet_dir: Path, vocab: set[str], out_path: Path,
                 target_unique: int = 5200) -> None:
    per_pos: list[list[str]] = []
    for pos in POS_FILES:
        _, glosses = parse_data_file(wordnet_dir / f"data.{pos}")
        sentences = []
        for gloss in glosses:
            for example in QUOTED.findall(gloss):
                sentences.append(example.strip())
        per_pos.append(sentences)

    seen_sentences: set[str] = set()
    unique_words: set[str] = set()
    selected: list[str] = []
    cursors = [0] * len(per_pos)
    while len(unique_words) < target_unique:
        progressed = False
        for i, sentences in enumerate(per_pos):
            while cursors[i] < len(sentences):
                sentence = sentences[cursors[i]]
                cursors[i] += 1
                if sentence in seen_sentences:
                    continue
                words = WORD_RE.findall(sentence.lower())
                if not 4 <= len(words) <= 18:
                    continue
                in_vocab = [w for w in words if w in vocab]
                if len(in_vocab) < 0.9 * len(words):
                    continue
                seen_sentences.add(sentence)
                unique_words.update(in_vocab)
                selected.append(sentence)
                progressed = True
                break
        if not progressed:
            break

    out_path.write_text(CORPUS_HEADER + "\n".join(selected) + "\n",
                        encoding="utf-8")
    print(f"corpus: {len(selected)} sentences, "
          f"{len(unique_words)} unique in-vocabulary words")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cmudict-json", type=Path, required=True)
    parser.add_argument("--wordnet-dir", type=Path, required=True)
    parser.add_argument("--out-dir", type=Path,
                        default=Path(__file__).resolve().parents[1]
                        / "src" / "sayable" / "data")
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    entries = write_cmudict(args.cmudict_json, args.out_dir / "cmudict-0.7b.txt")
    vocab = set(entries)
    build_thesaurus(args.wordnet_dir, vocab, args.out_dir / "thesaurus.tsv")
    build_corpus(args.wordnet_dir, vocab, args.out_dir / "corpus.txt")


if __name__ == "__main__":
    main()
