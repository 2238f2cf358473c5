"""On-disk certificate cache.

Entries are keyed by the canonical group expression, the operation and a hash
of the result-relevant configuration.  A hit is only used after its
certificate has been re-verified against the group; entries that fail to
parse or verify are deleted with a warning and recomputed.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from .genlib import SpreadCertificate, verify_certificate
from .group import PermGroup

log = logging.getLogger(__name__)

CACHE_ENV = "SPREADLAB_CACHE"
CACHE_FORMAT = 1


def cache_dir(flag: str | None) -> Path | None:
    path = flag or os.environ.get(CACHE_ENV)
    return Path(path) if path else None


def cache_key(expression: str, operation: str, config: dict) -> str:
    material = {"expression": expression, "operation": operation, "config": config, "format": CACHE_FORMAT}
    blob = json.dumps(material, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


class CertificateCache:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.discarded: list[str] = []

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def store(self, key: str, expression: str, operation: str, cert: SpreadCertificate) -> Path:
        path = self._path(key)
        body = {"format": CACHE_FORMAT, "key": key, "expression": expression, "operation": operation,
                "certificate": cert.to_json()}
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(body, sort_keys=True, indent=1, ensure_ascii=False))
        tmp.replace(path)
        return path

    def load(self, key: str, group: PermGroup, full: bool = True) -> SpreadCertificate | None:
        """The cached certificate if present and still valid for ``group``."""
        path = self._path(key)
        if not path.exists():
            return None
        try:
            body = json.loads(path.read_text())
            if body.get("format") != CACHE_FORMAT or body.get("key") != key:
                raise ValueError("key mismatch")
            cert = SpreadCertificate.from_json(body["certificate"], group.degree)
            ok = verify_certificate(group, cert, full=full)
        except Exception as exc:  # any parse or verification problem means the entry is not trusted
            ok = False
            log.debug("cache entry %s unreadable: %s", key, exc)
        if not ok:
            log.warning("discarding cache entry %s: certificate failed re-verification", path.name)
            self.discarded.append(key)
            path.unlink(missing_ok=True)
            return None
        return cert
