"""Local content-addressed store: put/get by hash, pinning, tamper checks.

Content ids are "mt1" + base58btc(SHA-256(file bytes)). Layout on disk is
deliberately plain so a store can be inspected or rsynced:

    <root>/content/<id>   one file per blob, named by its id
    <root>/pins.json      the pin set, {"pins": [ids...]}
    <root>/pins.lock      advisory lock for pin-set updates

Every read re-hashes the bytes, so silent corruption or tampering is
detected on the next get. Writes go through a temp file and an atomic
rename; pin-set updates are read-modify-write under the lock.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from filelock import FileLock

from tracekit.errors import IntegrityFailureError, NotFoundError

ID_PREFIX = "mt1"
_DIGEST_LEN = 32

_B58_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
_B58_INDEX = {c: i for i, c in enumerate(_B58_ALPHABET)}


def _b58encode(raw: bytes) -> str:
    zeros = len(raw) - len(raw.lstrip(b"\x00"))
    num = int.from_bytes(raw, "big")
    digits = []
    while num:
        num, rem = divmod(num, 58)
        digits.append(_B58_ALPHABET[rem])
    return "1" * zeros + "".join(reversed(digits))


def _b58decode(text: str) -> bytes:
    zeros = len(text) - len(text.lstrip("1"))
    num = 0
    for char in text:
        try:
            num = num * 58 + _B58_INDEX[char]
        except KeyError:
            raise ValueError(f"invalid base58 character {char!r}") from None
    body = num.to_bytes((num.bit_length() + 7) // 8, "big") if num else b""
    return b"\x00" * zeros + body


def trace_id(data: bytes) -> str:
    """Content id of ``data``: prefixed base58 of its SHA-256 digest."""
    return ID_PREFIX + _b58encode(hashlib.sha256(data).digest())


def digest_from_id(tid: str) -> bytes:
    """Parse an id back to its 32-byte digest; ValueError if malformed."""
    if not tid.startswith(ID_PREFIX):
        raise ValueError(f"trace id must start with {ID_PREFIX!r}")
    digest = _b58decode(tid[len(ID_PREFIX) :])
    if len(digest) != _DIGEST_LEN:
        raise ValueError("trace id does not decode to a 32-byte digest")
    return digest


class ContentStore:
    """Filesystem store rooted at ``root`` (created on first use)."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.content_dir = self.root / "content"
        self.content_dir.mkdir(parents=True, exist_ok=True)
        self._pins_path = self.root / "pins.json"
        self._lock = FileLock(str(self.root / "pins.lock"))

    # -- content -----------------------------------------------------------

    def put(self, data: bytes) -> str:
        """Store ``data``; idempotent, returns its id."""
        tid = trace_id(data)
        path = self.content_dir / tid
        if not path.exists():
            fd, tmp = tempfile.mkstemp(dir=self.content_dir, prefix=".put-")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(data)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return tid

    def get(self, tid: str) -> bytes:
        """Return stored bytes, verifying the hash on every read."""
        digest = digest_from_id(tid)
        path = self.content_dir / tid
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            raise NotFoundError(f"no content stored under {tid}") from None
        if hashlib.sha256(data).digest() != digest:
            raise IntegrityFailureError(f"stored bytes no longer match {tid}")
        return data

    def has(self, tid: str) -> bool:
        digest_from_id(tid)
        return (self.content_dir / tid).exists()

    def ids(self) -> list[str]:
        """Sorted ids of well-formed entries (foreign files are ignored)."""
        out = []
        for entry in self.content_dir.iterdir():
            try:
                digest_from_id(entry.name)
            except ValueError:
                continue
            out.append(entry.name)
        return sorted(out)

    # -- pins ---------------------------------------------------------------

    def _read_pins(self) -> set[str]:
        try:
            doc = json.loads(self._pins_path.read_text())
        except FileNotFoundError:
            return set()
        return set(doc.get("pins", []))

    def _write_pins(self, pins: set[str]) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".pins-")
        with os.fdopen(fd, "w") as fh:
            json.dump({"pins": sorted(pins)}, fh)
        os.replace(tmp, self._pins_path)

    def pin(self, tid: str) -> None:
        """Exempt ``tid`` from garbage collection. Idempotent (set semantics)."""
        if not self.has(tid):
            raise NotFoundError(f"no content stored under {tid}")
        with self._lock:
            pins = self._read_pins()
            pins.add(tid)
            self._write_pins(pins)

    def unpin(self, tid: str) -> None:
        if not self.has(tid):
            raise NotFoundError(f"no content stored under {tid}")
        with self._lock:
            pins = self._read_pins()
            pins.discard(tid)
            self._write_pins(pins)

    def list_pins(self) -> list[str]:
        with self._lock:
            return sorted(self._read_pins())

    # -- maintenance ---------------------------------------------------------

    def gc(self) -> list[str]:
        """Delete all unpinned content; returns the removed ids. Idempotent."""
        removed = []
        with self._lock:
            pins = self._read_pins()
            for tid in self.ids():
                if tid not in pins:
                    (self.content_dir / tid).unlink()
                    removed.append(tid)
        return sorted(removed)

    def verify(self) -> list[str]:
        """Re-hash every entry; returns the ids whose bytes no longer match."""
        bad = []
        for tid in self.ids():
            data = (self.content_dir / tid).read_bytes()
            if hashlib.sha256(data).digest() != digest_from_id(tid):
                bad.append(tid)
        return bad
