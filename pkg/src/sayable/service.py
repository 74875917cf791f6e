"""HTTP/JSON facade over the feedback engine.

One JSON document per session is persisted in the data directory; the
snapshot is written (atomic write-rename) before any mutating request is
acknowledged, so a restarted service always reloads the acknowledged state.
The dictionary and embedding are built once at startup and shared read-only.
"""

from __future__ import annotations

import datetime as dt
import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from . import feedback, resources
from .alternatives import (
    RemoteSynonymConfig,
    SynonymSource,
    TokenKind,
    alternatives_for,
    detect_immutable,
    load_thesaurus,
    tokenize,
)
from .errors import (
    AlreadyLabeled,
    EmptyList,
    ExhaustedPool,
    NoSynonymsKnown,
    NotHighlighted,
    OutOfVocabulary,
    OverlappingSeeds,
    SayableError,
    UnknownSession,
)
from .feedback import ImplicitAction, UserModel
from .phonetics import EmbeddingConfig, build_embedding, load_pronouncing_dict


@dataclass
class ServiceConfig:
    dict_path: Path = field(default_factory=resources.bundled_dict_path)
    thesaurus_path: Path = field(default_factory=resources.bundled_thesaurus_path)
    data_dir: Path = Path("./sayable-data")
    host: str = "127.0.0.1"
    port: int = 8000
    remote_synonyms_enabled: bool = False
    remote_synonyms_endpoint: str = "https://api.datamuse.com/words"
    default_threshold: float = feedback.DEFAULT_HIGHLIGHT_THRESHOLD
    max_alternatives: int = 10
    use_projection: bool = False
    projection_dimensions: int = 64


_ENV_PREFIX = "SAYABLE_"


def load_service_config(path: str | Path | None = None, env=None) -> ServiceConfig:
    """Config from a JSON file, with SAYABLE_* environment overrides."""
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        values.update(json.loads(Path(path).read_text(encoding="utf-8")))

    def override(key: str, cast):
        raw = env.get(_ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = cast(raw)

    override("dict_path", str)
    override("thesaurus_path", str)
    override("data_dir", str)
    override("host", str)
    override("port", int)
    override("remote_synonyms_enabled", lambda v: v.lower() in ("1", "true", "yes"))
    override("remote_synonyms_endpoint", str)
    override("default_threshold", float)
    override("max_alternatives", int)

    config = ServiceConfig()
    for key, value in values.items():
        if not hasattr(config, key):
            raise ValueError(f"unknown config key: {key}")
        current = getattr(config, key)
        setattr(config, key, Path(value) if isinstance(current, Path) else type(current)(value))
    return config


class SessionStore:
    """Disk-backed session documents with per-session write locks."""

    def __init__(self, directory: Path):
        self.directory = directory
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def path_for(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.json"

    def save(self, session_id: str, document: dict) -> None:
        target = self.path_for(session_id)
        fd, tmp_name = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(document, handle)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    def load(self, session_id: str) -> dict:
        target = self.path_for(session_id)
        if not target.is_file():
            raise UnknownSession(session_id)
        return json.loads(target.read_text(encoding="utf-8"))


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat()


# --------------------------------------------------------------------------
# request/response bodies


class CreateSessionRequest(BaseModel):
    seed_easy: list[str]
    seed_hard: list[str]
    threshold: float | None = Field(default=None, ge=0.0, le=1.0)


class AnalyzeRequest(BaseModel):
    text: str


class ExplicitFeedbackRequest(BaseModel):
    word: str
    is_hard: bool


class ImplicitFeedbackRequest(BaseModel):
    word: str
    action: str  # "ignore" | "substitute"
    chosen_word: str | None = None


class PreferencesRequest(BaseModel):
    threshold: float | None = Field(default=None, ge=0.0, le=1.0)
    add_easy: list[str] = Field(default_factory=list)
    add_hard: list[str] = Field(default_factory=list)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    pdict = load_pronouncing_dict(config.dict_path)
    embedding_config = EmbeddingConfig(
        use_projection=config.use_projection,
        dimensions=config.projection_dimensions,
    )
    embedding = build_embedding(pdict, embedding_config)
    synonyms = SynonymSource(
        offline=load_thesaurus(config.thesaurus_path),
        remote=RemoteSynonymConfig(endpoint=config.remote_synonyms_endpoint)
        if config.remote_synonyms_enabled else None,
    )
    store = SessionStore(Path(config.data_dir) / "sessions")

    app = FastAPI(title="sayable", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.config = config
    app.state.embedding = embedding

    def load_session(session_id: str) -> tuple[dict, UserModel]:
        document = store.load(session_id)
        um = feedback.user_model_from_dict(document["user_model"])
        if um.embedding_ref != embedding.fingerprint:
            raise HTTPException(
                status_code=409,
                detail="session was created against a different embedding")
        return document, um

    def persist(document: dict, um: UserModel) -> None:
        document["user_model"] = feedback.user_model_to_dict(um)
        document["updated_at"] = _now()
        store.save(document["session_id"], document)

    def error(status: int, exc: Exception) -> HTTPException:
        return HTTPException(status_code=status, detail=str(exc))

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: CreateSessionRequest):
        threshold = (config.default_threshold if body.threshold is None
                     else body.threshold)
        try:
            um = feedback.init_user_model(
                body.seed_easy, body.seed_hard, embedding, threshold=threshold)
        except (EmptyList, OverlappingSeeds) as exc:
            raise error(400, exc)
        session_id = uuid.uuid4().hex
        document = {
            "session_id": session_id,
            "created_at": _now(),
            "updated_at": _now(),
            "user_model": feedback.user_model_to_dict(um),
        }
        store.save(session_id, document)
        return {"session_id": session_id, "model_version": um.version,
                "easy_words": sorted(um.easy_words),
                "hard_words": sorted(um.hard_words),
                "threshold": um.highlight_threshold}

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            document, um = load_session(session_id)
        except UnknownSession as exc:
            raise error(404, exc)
        return {
            "session_id": session_id,
            "model_version": um.version,
            "threshold": um.highlight_threshold,
            "easy_words": sorted(um.easy_words),
            "hard_words": sorted(um.hard_words),
            "created_at": document["created_at"],
            "updated_at": document["updated_at"],
        }

    @app.post("/v1/sessions/{session_id}/analyze")
    def analyze(session_id: str, body: AnalyzeRequest):
        try:
            _, um = load_session(session_id)
        except UnknownSession as exc:
            raise error(404, exc)
        tokens = detect_immutable(tokenize(body.text))
        out = []
        for token in tokens:
            entry = {
                "text": token.text,
                "start": token.start,
                "end": token.end,
                "kind": token.kind.value,
            }
            if token.kind is TokenKind.WORD:
                prediction = feedback.predict_word(um, embedding, token.text)
                if prediction.prob is not None:
                    entry["prob"] = prediction.prob
                entry["highlighted"] = prediction.highlighted
            else:
                entry["highlighted"] = False
            out.append(entry)
        return {"tokens": out, "model_version": um.version}

    @app.get("/v1/sessions/{session_id}/alternatives")
    def get_alternatives(session_id: str, word: str = Query(min_length=1),
                         max_n: int | None = Query(default=None, ge=1)):
        try:
            _, um = load_session(session_id)
        except UnknownSession as exc:
            raise error(404, exc)
        tokens = detect_immutable(tokenize(word))
        words = [t for t in tokens if t.kind is TokenKind.WORD]
        if len(words) != 1 or len(tokens) != 1:
            raise HTTPException(
                status_code=422,
                detail=f"not a substitutable word token: {word!r}")
        try:
            found = alternatives_for(words[0].text, um, embedding, synonyms,
                                     max_n=config.max_alternatives)
            return {"word": word, "alternatives": found, "none_known": False}
        except NoSynonymsKnown:
            return {"word": word, "alternatives": [], "none_known": True}

    @app.post("/v1/sessions/{session_id}/feedback/explicit")
    def post_explicit(session_id: str, body: ExplicitFeedbackRequest):
        with store.lock_for(session_id):
            try:
                document, um = load_session(session_id)
            except UnknownSession as exc:
                raise error(404, exc)
            try:
                um = feedback.apply_explicit_feedback(
                    um, embedding, body.word, body.is_hard)
            except AlreadyLabeled as exc:
                raise error(409, exc)
            except OutOfVocabulary as exc:
                raise error(422, exc)
            persist(document, um)
        return {"model_version": um.version}

    @app.post("/v1/sessions/{session_id}/feedback/implicit")
    def post_implicit(session_id: str, body: ImplicitFeedbackRequest):
        if body.action == "ignore":
            action = ImplicitAction.ignore()
        elif body.action == "substitute":
            if not body.chosen_word:
                raise HTTPException(status_code=422,
                                    detail="substitute requires chosen_word")
            action = ImplicitAction.substitute(body.chosen_word)
        else:
            raise HTTPException(status_code=422,
                                detail=f"unknown action: {body.action!r}")
        with store.lock_for(session_id):
            try:
                document, um = load_session(session_id)
            except UnknownSession as exc:
                raise error(404, exc)
            try:
                um = feedback.apply_implicit_feedback(
                    um, embedding, body.word, action)
            except (NotHighlighted, AlreadyLabeled) as exc:
                raise error(409, exc)
            except OutOfVocabulary as exc:
                raise error(422, exc)
            except ValueError as exc:
                raise error(422, exc)
            persist(document, um)
        return {"model_version": um.version}

    @app.get("/v1/sessions/{session_id}/query")
    def get_query(session_id: str):
        try:
            _, um = load_session(session_id)
        except UnknownSession as exc:
            raise error(404, exc)
        try:
            word = feedback.next_query(um, embedding)
        except ExhaustedPool as exc:
            raise error(422, exc)
        return {"word": word, "model_version": um.version}

    @app.patch("/v1/sessions/{session_id}/preferences")
    def update_preferences(session_id: str, body: PreferencesRequest):
        with store.lock_for(session_id):
            try:
                document, um = load_session(session_id)
            except UnknownSession as exc:
                raise error(404, exc)
            try:
                for word in body.add_easy:
                    um = feedback.apply_explicit_feedback(um, embedding, word, False)
                for word in body.add_hard:
                    um = feedback.apply_explicit_feedback(um, embedding, word, True)
            except (AlreadyLabeled,) as exc:
                raise error(422, exc)
            except OutOfVocabulary as exc:
                raise error(422, exc)
            if body.threshold is not None:
                um = replace(um, highlight_threshold=body.threshold)
            persist(document, um)
        return {"model_version": um.version,
                "threshold": um.highlight_threshold}

    @app.exception_handler(SayableError)
    def handle_unmapped(request, exc):  # pragma: no cover - safety net
        from fastapi.responses import JSONResponse
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    return app
