"""The bundled corpus of worked examples."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

from ..semantics.evaluation import get_prims
from ..syntax import parse_env, parse_process, parse_type

PACKAGE = "livesession.corpus"


def read_text(name: str) -> str:
    return resources.files(PACKAGE).joinpath(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    proc_file: str
    env_file: Optional[str]
    prims_name: str = "default"
    pending: frozenset = frozenset()
    expected: dict = field(default_factory=dict, compare=False, hash=False)
    notes: str = ""

    @property
    def source(self) -> str:
        return read_text(self.proc_file)

    @property
    def env_source(self) -> Optional[str]:
        return read_text(self.env_file) if self.env_file else None

    @property
    def process(self):
        return _parse_proc(self.proc_file)

    @property
    def env(self) -> Optional[dict]:
        return dict(_parse_env(self.env_file)) if self.env_file else None

    @property
    def prims(self) -> dict:
        return get_prims(self.prims_name)

    @property
    def expected_std(self):
        return self.expected.get("std")

    @property
    def expected_live(self):
        return self.expected.get("live")


@lru_cache(maxsize=None)
def _parse_proc(fname):
    return parse_process(read_text(fname))


@lru_cache(maxsize=None)
def _parse_env(fname):
    return tuple(parse_env(read_text(fname)).items())


@lru_cache(maxsize=None)
def _index():
    return json.loads(read_text("index.json"))


def load_corpus():
    out = []
    for d in _index()["processes"]:
        out.append(CorpusEntry(d["name"], d["proc"], d.get("env"), d.get("prims", "default"),
                               frozenset(d.get("pending", ())), dict(d.get("expected", {})),
                               d.get("notes", "")))
    return out


def get_entry(name: str) -> CorpusEntry:
    for e in load_corpus():
        if e.name == name:
            return e
    raise KeyError(name)


def corpus_types() -> dict:
    """Name -> parsed session type, for every bundled ``.sty`` file."""
    return {d["name"]: parse_type(read_text(d["file"])) for d in _index()["types"]}


def type_info():
    return list(_index()["types"])
