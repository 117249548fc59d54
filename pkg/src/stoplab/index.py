"""TIPSTER document parsing and immutable inverted index construction.

The index holds everything the ranking models need: postings with
within-document term frequencies, per-document lengths, collection term
frequencies, and the derived statistics N, avgdl and total token count.
When a stoplist is supplied it is applied while indexing, so document
lengths and collection statistics all reflect the removal; the list itself
is stored in the index so queries can be filtered identically later.

Index file format (version ``ARIDX001``), little-endian throughout:

    magic            8 bytes  b"ARIDX001"
    meta_len         uint32
    meta             meta_len bytes of UTF-8 JSON (stoplist, flags)
    N                uint32
    total_tokens     uint64
    doc table        N records: uint16 docno_len, docno UTF-8, uint32 dl
    vocab_size       uint32
    postings         per term, sorted by term string:
                     uint16 term_len, term UTF-8, uint32 df, uint64 ctf,
                     then df pairs of (uint32 doc ordinal, uint32 tf)

Writing is fully deterministic, so equal indexes serialize byte-identically.
"""

import json
import re
import struct
from collections import Counter
from collections.abc import Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor

from .errors import ParseError
from .stoplists import Stoplist
from .textpipe import normalize, tokenize

MAGIC = b"ARIDX001"

_DOCNO_RE = re.compile(r"<DOCNO>(.*?)</DOCNO>", re.S)
_TEXT_RE = re.compile(r"<TEXT>(.*?)</TEXT>", re.S)
_TAG_RE = re.compile(r"<[^>]*>")


def parse_trec_documents(text: str) -> Iterator[tuple[str, str]]:
    """Yield (docno, text) for each ``<DOC>`` block, in stream order.

    Each block must contain a ``<DOCNO>`` and may contain any number of
    ``<TEXT>`` regions, whose contents are concatenated.  Residual inline
    tags inside TEXT regions (paragraph markers and the like) are dropped.
    Offsets in error messages are character offsets into the stream.
    """
    pos = 0
    while True:
        start = text.find("<DOC>", pos)
        if start == -1:
            return
        end = text.find("</DOC>", start)
        if end == -1:
            raise ParseError("unterminated <DOC> block at offset %d" % start)
        block = text[start + len("<DOC>") : end]
        m = _DOCNO_RE.search(block)
        if m is None:
            raise ParseError("<DOC> block at offset %d has no <DOCNO>" % start)
        docno = m.group(1).strip()
        texts = _TEXT_RE.findall(block)
        if block.count("<TEXT>") != len(texts):
            raise ParseError(
                "unterminated <TEXT> in document %r (offset %d)" % (docno, start)
            )
        body = "\n".join(_TAG_RE.sub(" ", t) for t in texts)
        yield docno, body
        pos = end + len("</DOC>")


class Index:
    """Immutable inverted index over a document collection.

    Attributes:
        docnos: document identifier per ordinal.
        doc_lengths: token count per ordinal (post-normalization/stoplist).
        postings: term -> list of (ordinal, tf), ordinals ascending.
        ctf: term -> collection frequency.
        total_tokens: sum of all document lengths.
        stoplist: the list applied at build time, or None.
        strip_marks: whether diacritics/tatweel were stripped.
        stopwords_removed: tokens dropped by the stoplist during the build.
    """

    def __init__(
        self,
        docnos: list[str],
        doc_lengths: list[int],
        postings: dict[str, list[tuple[int, int]]],
        ctf: dict[str, int],
        total_tokens: int,
        stoplist: Stoplist | None = None,
        strip_marks: bool = True,
        stopwords_removed: int = 0,
    ):
        self.docnos = docnos
        self.doc_lengths = doc_lengths
        self.postings = postings
        self.ctf = ctf
        self.total_tokens = total_tokens
        self.stoplist = stoplist
        self.strip_marks = strip_marks
        self.stopwords_removed = stopwords_removed

    @property
    def N(self) -> int:
        return len(self.docnos)

    @property
    def avgdl(self) -> float:
        return self.total_tokens / self.N if self.N else 0.0

    @property
    def vocabulary_size(self) -> int:
        return len(self.postings)

    def df(self, term: str) -> int:
        plist = self.postings.get(term)
        return len(plist) if plist else 0

    def check(self) -> None:
        """Verify the structural invariants; raises ValueError on breakage."""
        if len(self.doc_lengths) != self.N:
            raise ValueError("doc table size mismatch")
        if sum(self.doc_lengths) != self.total_tokens:
            raise ValueError("sum of document lengths != total_tokens")
        if sum(self.ctf.values()) != self.total_tokens:
            raise ValueError("sum of collection frequencies != total_tokens")
        for term, plist in self.postings.items():
            if sum(tf for _, tf in plist) != self.ctf.get(term):
                raise ValueError("ctf mismatch for term %r" % term)
            if len(plist) > self.N:
                raise ValueError("df > N for term %r" % term)
            if any(tf < 1 for _, tf in plist):
                raise ValueError("tf < 1 for term %r" % term)
            if any(b <= a for (a, _), (b, _) in zip(plist, plist[1:])):
                raise ValueError("postings not sorted for term %r" % term)

    # -- serialization ----------------------------------------------------

    def save(self, dest) -> None:
        """Write the index to a path or binary file object."""
        if hasattr(dest, "write"):
            self._write(dest)
        else:
            with open(dest, "wb") as f:
                self._write(f)

    def _write(self, f) -> None:
        meta: dict = {
            "strip_marks": self.strip_marks,
            "stopwords_removed": self.stopwords_removed,
            "stoplist": None,
        }
        if self.stoplist is not None:
            meta["stoplist"] = {
                "name": self.stoplist.name,
                "provenance": self.stoplist.provenance,
                "words": sorted(self.stoplist.words),
            }
        blob = json.dumps(
            meta, ensure_ascii=False, sort_keys=True, separators=(",", ":")
        ).encode("utf-8")
        f.write(MAGIC)
        f.write(struct.pack("<I", len(blob)))
        f.write(blob)
        f.write(struct.pack("<IQ", self.N, self.total_tokens))
        for docno, dl in zip(self.docnos, self.doc_lengths):
            b = docno.encode("utf-8")
            f.write(struct.pack("<H", len(b)))
            f.write(b)
            f.write(struct.pack("<I", dl))
        f.write(struct.pack("<I", len(self.postings)))
        for term in sorted(self.postings):
            plist = self.postings[term]
            tb = term.encode("utf-8")
            f.write(struct.pack("<H", len(tb)))
            f.write(tb)
            f.write(struct.pack("<IQ", len(plist), self.ctf[term]))
            flat = [x for pair in plist for x in pair]
            f.write(struct.pack("<%dI" % len(flat), *flat))

    @classmethod
    def load(cls, src) -> "Index":
        """Read an index written by :meth:`save`."""
        if hasattr(src, "read"):
            return cls._read(src)
        with open(src, "rb") as f:
            return cls._read(f)

    @classmethod
    def _read(cls, f) -> "Index":
        def take(n: int) -> bytes:
            data = f.read(n)
            if len(data) != n:
                raise ParseError("truncated index file")
            return data

        if take(len(MAGIC)) != MAGIC:
            raise ParseError("not an index file (bad magic)")
        (meta_len,) = struct.unpack("<I", take(4))
        meta = json.loads(take(meta_len).decode("utf-8"))
        n, total_tokens = struct.unpack("<IQ", take(12))
        docnos: list[str] = []
        doc_lengths: list[int] = []
        for _ in range(n):
            (name_len,) = struct.unpack("<H", take(2))
            docnos.append(take(name_len).decode("utf-8"))
            (dl,) = struct.unpack("<I", take(4))
            doc_lengths.append(dl)
        (vocab,) = struct.unpack("<I", take(4))
        postings: dict[str, list[tuple[int, int]]] = {}
        ctf: dict[str, int] = {}
        for _ in range(vocab):
            (term_len,) = struct.unpack("<H", take(2))
            term = take(term_len).decode("utf-8")
            df, tctf = struct.unpack("<IQ", take(12))
            flat = struct.unpack("<%dI" % (2 * df), take(8 * df))
            postings[term] = list(zip(flat[0::2], flat[1::2]))
            ctf[term] = tctf
        stoplist = None
        if meta.get("stoplist"):
            s = meta["stoplist"]
            stoplist = Stoplist(
                name=s["name"],
                words=frozenset(s["words"]),
                provenance=s["provenance"],
            )
        index = cls(
            docnos=docnos,
            doc_lengths=doc_lengths,
            postings=postings,
            ctf=ctf,
            total_tokens=total_tokens,
            stoplist=stoplist,
            strip_marks=bool(meta.get("strip_marks", True)),
            stopwords_removed=int(meta.get("stopwords_removed", 0)),
        )
        try:
            index.check()
        except ValueError as exc:
            raise ParseError("corrupt index file: %s" % exc) from exc
        return index


def build_index(
    docs: Iterable[tuple[str, str]],
    stoplist: Stoplist | None = None,
    strip_marks: bool = True,
    workers: int = 1,
) -> Index:
    """Normalize, tokenize, filter and count a document stream into an Index.

    The result is independent of ``workers``: per-document preparation may
    run on a thread pool, but documents are merged strictly in input order,
    so ordinals, postings and serialized bytes never vary.
    """

    def prep(item: tuple[str, str]) -> tuple[str, Counter, int]:
        docno, text = item
        tokens = tokenize(normalize(text, strip_marks=strip_marks))
        kept = stoplist.filter(tokens) if stoplist is not None else tokens
        return docno, Counter(kept), len(tokens) - len(kept)

    if workers > 1:
        pool = ThreadPoolExecutor(max_workers=workers)
        prepared = pool.map(prep, docs, chunksize=16)
    else:
        pool = None
        prepared = map(prep, docs)

    docnos: list[str] = []
    doc_lengths: list[int] = []
    postings: dict[str, list[tuple[int, int]]] = {}
    ctf: dict[str, int] = {}
    seen: set[str] = set()
    total_tokens = 0
    removed = 0
    try:
        for docno, counts, n_removed in prepared:
            if docno in seen:
                raise ParseError("duplicate docno %r" % docno)
            seen.add(docno)
            ordinal = len(docnos)
            docnos.append(docno)
            dl = sum(counts.values())
            doc_lengths.append(dl)
            total_tokens += dl
            removed += n_removed
            for term, tf in counts.items():
                postings.setdefault(term, []).append((ordinal, tf))
                ctf[term] = ctf.get(term, 0) + tf
    finally:
        if pool is not None:
            pool.shutdown()

    index = Index(
        docnos=docnos,
        doc_lengths=doc_lengths,
        postings=postings,
        ctf=ctf,
        total_tokens=total_tokens,
        stoplist=stoplist,
        strip_marks=strip_marks,
        stopwords_removed=removed,
    )
    index.check()
    return index
