"""Length-prefixed binary containers and atomic file writes.

Every artifact file starts with 4 magic bytes and a format-version byte and
ends with a CRC32 of everything before it.
"""

from __future__ import annotations

import os
import struct
import tempfile
import zlib
from pathlib import Path

from .errors import CorruptModel, VersionMismatch


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        # mkstemp creates 0600; give the result ordinary file permissions
        os.chmod(tmp, 0o666 & ~_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


class Writer:
    def __init__(self, magic: bytes, version: int):
        self._parts = [magic, struct.pack("<B", version)]

    def u8(self, v: int) -> None:
        self._parts.append(struct.pack("<B", v))

    def u32(self, v: int) -> None:
        self._parts.append(struct.pack("<I", v))

    def u64(self, v: int) -> None:
        self._parts.append(struct.pack("<Q", v))

    def str(self, s: str) -> None:
        raw = s.encode("utf-8")
        self.u32(len(raw))
        self._parts.append(raw)

    def blob(self, raw: bytes) -> None:
        self.u64(len(raw))
        self._parts.append(raw)

    def getvalue(self) -> bytes:
        body = b"".join(self._parts)
        return body + struct.pack("<I", zlib.crc32(body))


class Reader:
    def __init__(self, data: bytes, magic: bytes, max_version: int, what: str = "file"):
        if len(data) < len(magic) + 5:
            raise CorruptModel(f"{what}: truncated header")
        if data[: len(magic)] != magic:
            raise CorruptModel(f"{what}: bad magic bytes")
        body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
        self.version = data[len(magic)]
        if self.version > max_version or self.version == 0:
            raise VersionMismatch(
                f"{what}: format version {self.version}, supported up to {max_version}"
            )
        if zlib.crc32(body) != crc:
            raise CorruptModel(f"{what}: checksum mismatch (truncated or corrupt)")
        self._buf = body
        self._pos = len(magic) + 1
        self._what = what

    def _take(self, n: int) -> bytes:
        if self._pos + n > len(self._buf):
            raise CorruptModel(f"{self._what}: unexpected end of data")
        out = self._buf[self._pos : self._pos + n]
        self._pos += n
        return out

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def str(self) -> str:
        try:
            return self._take(self.u32()).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptModel(f"{self._what}: invalid utf-8") from exc

    def blob(self) -> bytes:
        return self._take(self.u64())

    def done(self) -> None:
        if self._pos != len(self._buf):
            raise CorruptModel(f"{self._what}: trailing bytes")
