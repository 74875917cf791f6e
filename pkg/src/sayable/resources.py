"""Paths to the data files bundled with the package."""

from __future__ import annotations

from pathlib import Path

_DATA_DIR = Path(__file__).resolve().parent / "data"


def data_dir() -> Path:
    return _DATA_DIR


def bundled_dict_path() -> Path:
    return _DATA_DIR / "cmudict-0.7b.txt"


def bundled_thesaurus_path() -> Path:
    return _DATA_DIR / "thesaurus.tsv"


def bundled_corpus_path() -> Path:
    return _DATA_DIR / "corpus.txt"


def bundled_profiles_path() -> Path:
    return _DATA_DIR / "profiles.json"
