"""``key = value`` experiment configuration files.

Grammar: one ``key = value`` pair per line, ``#`` starts a comment, and a
``[section]`` header scopes the keys that follow it.  Keys before any header
belong to the top-level section ``""``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

SECTION = re.compile(r"\[\s*([A-Za-z0-9_.-]+)\s*\]")


@dataclass
class ExperimentConfig:
    sections: dict = field(default_factory=lambda: {"": {}})

    def section(self, name: str) -> dict:
        return self.sections.setdefault(name, {})

    def get(self, key: str, default=None, section: str = ""):
        return self.sections.get(section, {}).get(key, default)

    def set(self, key: str, value, section: str = "") -> None:
        self.section(section)[key] = str(value)

    def get_float(self, key, default=None, section=""):
        v = self.get(key, None, section)
        if v is None:
            return default
        try:
            return float(v)
        except ValueError as exc:
            raise ConfigError(f"{key} must be a number, got {v!r}") from exc

    def get_int(self, key, default=None, section=""):
        v = self.get(key, None, section)
        if v is None:
            return default
        try:
            return int(v)
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {v!r}") from exc

    def get_list(self, key, default=None, section="", cast=str):
        v = self.get(key, None, section)
        if v is None:
            return default
        try:
            return [cast(s.strip()) for s in v.split(",") if s.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad list for {key}: {v!r}") from exc

    def to_text(self) -> str:
        out = []
        for name in sorted(self.sections, key=lambda s: (s != "", s)):
            items = self.sections[name]
            if not items and name:
                continue
            if name:
                out.append(f"[{name}]")
            out.extend(f"{k} = {items[k]}" for k in sorted(items))
            out.append("")
        return "\n".join(out)

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text())
        return path


def parse_config(text: str) -> ExperimentConfig:
    cfg = ExperimentConfig()
    current = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = SECTION.fullmatch(line)
        if m:
            current = m.group(1)
            cfg.section(current)
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        cfg.set(key.strip(), value.strip(), current)
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        return parse_config(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def apply_overrides(cfg: ExperimentConfig, pairs) -> ExperimentConfig:
    """Apply ``section.key=value`` (or ``key=value``) overrides in order."""
    for p in pairs or ():
        key, sep, value = p.partition("=")
        if not sep:
            raise ConfigError(f"override must read key=value, got {p!r}")
        section, _, k = key.strip().rpartition(".")
        cfg.set(k, value.strip(), section)
    return cfg
