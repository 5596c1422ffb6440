"""Run configuration: defaults < ``key = value`` config file < command-line flags."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .errors import BadParams
from .variants import CUALNI


class ConfigError(BadParams):
    pass


@dataclass(frozen=True)
class RunConfig:
    alpha: float = CUALNI[0]
    beta: float = CUALNI[1]
    gamma: float = CUALNI[2]
    A: int = 3
    B: int = 6
    Aprime: int = 4
    Bprime: int = 5
    grid_n: int = 1001
    tol_mid: float = 1e-8
    out_branches: str | None = "branches.csv"
    out_normals: str | None = "normals.csv"
    out_svg: str | None = None

    @property
    def lattice(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    @property
    def roles(self) -> tuple[int, int, int, int]:
        return (self.A, self.B, self.Aprime, self.Bprime)

    def validate(self) -> "RunConfig":
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not value > 0 or value == float("inf"):
                raise ConfigError(f"{name} must be a positive number, got {value!r}")
        for name in ("A", "B", "Aprime", "Bprime"):
            if not 1 <= getattr(self, name) <= 6:
                raise ConfigError(f"{name} must be a variant index in 1..6, got {getattr(self, name)}")
        if len(set(self.roles)) != 4:
            raise ConfigError(f"variant indices A, B, Aprime, Bprime must be distinct, got {self.roles}")
        if self.grid_n < 2:
            raise ConfigError(f"grid_n must be at least 2, got {self.grid_n}")
        if not self.tol_mid > 0:
            raise ConfigError(f"tol_mid must be positive, got {self.tol_mid!r}")
        return self


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_CASTS = {"float": float, "int": int}


def _convert(key: str, raw: str):
    kind = _FIELDS[key].type
    if kind.startswith("str"):
        return raw or None
    cast = _CASTS[kind]
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind}") from None


def parse_config_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    values = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
        values.update(parse_config_text(text, str(path)))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig(**values).validate()
