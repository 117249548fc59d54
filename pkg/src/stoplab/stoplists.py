"""Stoplist construction, loading, combination and application.

Three strategies are supported, identified by short codes:

* ``GS``  -- general list built from Arabic function-word classes (bundled).
* ``CBS`` -- corpus-based list: terms whose collection frequency exceeds a
  cutoff, minus a hand-picked exclusion set (bundled, and reproducible from
  any index via :func:`build_corpus_stoplist`).
* ``CS``  -- the exact union of the two.

All words are stored normalized (see :mod:`stoplab.textpipe`), so membership
tests agree with the token stream.  Stoplists are immutable and safe to
share between threads.

File format: UTF-8, one word per line, blank lines and ``#`` comment lines
ignored, no ordering requirement.
"""

import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import ParseError
from .textpipe import normalize

PROVENANCES = ("general", "corpus-based", "combined", "custom")


@dataclass(frozen=True)
class Stoplist:
    """A named, immutable set of normalized stopwords."""

    name: str
    words: frozenset[str]
    provenance: str = "custom"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError("unknown provenance %r" % (self.provenance,))

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def filter(self, tokens: Iterable[str]) -> list[str]:
        """Drop members of this list from a token sequence, keeping order."""
        words = self.words
        return [t for t in tokens if t not in words]


def filter_tokens(tokens: Iterable[str], stoplist: Stoplist) -> list[str]:
    """Functional alias for :meth:`Stoplist.filter`."""
    return stoplist.filter(tokens)


def _iter_lines(source):
    if hasattr(source, "read"):
        yield from source
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as f:
            yield from f
    else:
        yield from source


def load_stoplist(source, name: str, provenance: str = "custom") -> Stoplist:
    """Read a stoplist from a path, open file, or iterable of lines.

    Each word is normalized before insertion; duplicates collapse.  Invalid
    UTF-8 raises :class:`ParseError` naming the offending line.
    """
    words = set()
    for lineno, line in enumerate(_iter_lines(source), start=1):
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError(
                    "stoplist %r: invalid UTF-8 on line %d: %s"
                    % (name, lineno, exc.reason)
                ) from exc
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        word = normalize(word)
        if word:
            words.add(word)
    return Stoplist(name=name, words=frozenset(words), provenance=provenance)


def build_corpus_stoplist(
    freqs: Mapping[str, int],
    cutoff: int,
    exclusions: Iterable[str] = (),
    name: str = "CBS",
) -> Stoplist:
    """Terms with collection frequency strictly above ``cutoff``, minus
    ``exclusions``.

    The exclusion set models the manual removal of content-bearing words
    that merely happen to be frequent; it is an explicit input because no
    mechanical rule decides which frequent words carry content.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    excluded = {normalize(w) for w in exclusions}
    words = {normalize(t) for t, c in freqs.items() if c > cutoff}
    return Stoplist(
        name=name, words=frozenset(words - excluded), provenance="corpus-based"
    )


def combine(a: Stoplist, b: Stoplist, name: str | None = None) -> Stoplist:
    """Exact union of two stoplists."""
    if name is None:
        name = "%s+%s" % (a.name, b.name)
    return Stoplist(name=name, words=a.words | b.words, provenance="combined")


def _bundled(filename: str, name: str, provenance: str) -> Stoplist:
    ref = resources.files("stoplab.data").joinpath(filename)
    with ref.open("rb") as f:
        return load_stoplist(f, name=name, provenance=provenance)


@lru_cache(maxsize=None)
def general() -> Stoplist:
    """The bundled general stoplist (code GS)."""
    return _bundled("stop_general.txt", "GS", "general")


@lru_cache(maxsize=None)
def corpus_based() -> Stoplist:
    """The bundled corpus-based stoplist (code CBS)."""
    return _bundled("stop_corpus.txt", "CBS", "corpus-based")


@lru_cache(maxsize=None)
def combined() -> Stoplist:
    """GS and CBS combined (code CS)."""
    return combine(general(), corpus_based(), name="CS")


def bundled(code: str) -> Stoplist:
    """Look up a bundled list by its code (GS, CBS or CS)."""
    try:
        return {"GS": general, "CBS": corpus_based, "CS": combined}[code]()
    except KeyError:
        raise ValueError("unknown stoplist code %r" % (code,)) from None
