"""Experiment configuration: JSON in, validated dataclasses out."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

from .matgroup import GeneratorSystem, Mat2K
from .numberfield import NumberField, NumberFieldError, parse_rational

SANOV = {"a": [[1, 2], [0, 1]], "b": [[1, 0], [2, 1]]}


class ConfigError(ValueError):
    pass


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    def __init__(self, problems: list[str]):
        super().__init__("invalid config:\n  " + "\n  ".join(problems))
        self.problems = problems


@dataclass
class SamplerConfig:
    trials: int = 64
    seed: int = 0


@dataclass
class OutputConfig:
    csv: Optional[str] = None
    json: Optional[str] = None
    edge_list: Optional[str] = None


@dataclass
class Config:
    field: list[int]
    generators: dict
    p_min: int
    p_max: int
    vertex_budget: int = 8_000_000
    spectral_tol: float = 1e-8
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    relation_check_depth: int = 10
    nested_primes: Optional[list[int]] = None
    mu_r_max: int = 25
    mu_trials: int = 1000
    jobs: int = 1
    output: OutputConfig = field(default_factory=OutputConfig)

    def number_field(self) -> NumberField:
        return NumberField(self.field)

    def generator_system(self, check: bool = True) -> GeneratorSystem:
        nf = self.number_field()
        a = Mat2K.from_rows(nf, self.generators["a"])
        b = Mat2K.from_rows(nf, self.generators["b"])
        return GeneratorSystem.build(a, b, check=check)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["field"] = {"minpoly": list(self.field)}
        return out


def default_config() -> Config:
    """Sanov generators over Q on the primes 3..61."""
    return Config(field=[0, 1], generators=json.loads(json.dumps(SANOV)), p_min=3, p_max=61)


def _check_matrix(name: str, rows: Any, degree: Optional[int], problems: list[str]) -> None:
    if not (isinstance(rows, list) and len(rows) == 2 and all(isinstance(r, list) and len(r) == 2 for r in rows)):
        raise ParseError(f"generators.{name}: expected a 2x2 array")
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            where = f"generators.{name}[{i}][{j}]"
            items = entry if isinstance(entry, list) else [entry]
            if degree is not None and len(items) > degree:
                problems.append(f"{where}: {len(items)} coefficients for a degree-{degree} field")
            for item in items:
                try:
                    parse_rational(item)
                except ValueError as err:
                    raise ParseError(f"{where}: {err}") from None


def config_from_dict(obj: dict) -> Config:
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    problems: list[str] = []
    known = {f.name for f in fields(Config)}
    unknown = sorted(set(obj) - known)
    if unknown:
        problems.append(f"unknown keys: {', '.join(unknown)}")
    for key in ("field", "generators", "p_min", "p_max"):
        if key not in obj:
            problems.append(f"missing required key {key!r}")
    if problems and any(p.startswith("missing") for p in problems):
        raise ValidationError(problems)

    fld = obj["field"]
    minpoly = fld.get("minpoly") if isinstance(fld, dict) else fld
    if not isinstance(minpoly, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in minpoly):
        raise ParseError("field.minpoly: expected a list of integers")
    degree = None
    try:
        degree = NumberField(minpoly).degree
    except NumberFieldError as err:
        problems.append(f"field.minpoly: {err}")

    gens = obj["generators"]
    if not isinstance(gens, dict) or set(gens) != {"a", "b"}:
        raise ParseError("generators: expected an object with keys 'a' and 'b'")
    for name in ("a", "b"):
        _check_matrix(name, gens[name], degree, problems)

    sampler = obj.get("sampler", {}) or {}
    output = obj.get("output", {}) or {}
    if not isinstance(sampler, dict) or set(sampler) - {"trials", "seed"}:
        raise ParseError("sampler: expected an object with keys trials, seed")
    if not isinstance(output, dict) or set(output) - {"csv", "json", "edge_list"}:
        raise ParseError("output: expected an object with keys csv, json, edge_list")

    scalars = {k: obj[k] for k in known - {"field", "generators", "sampler", "output"} if k in obj}
    cfg = Config(
        field=list(minpoly),
        generators={"a": gens["a"], "b": gens["b"]},
        sampler=SamplerConfig(**sampler),
        output=OutputConfig(**output),
        **scalars,
    )
    problems.extend(validate(cfg))
    if problems:
        raise ValidationError(problems)
    return cfg


def validate(cfg: Config) -> list[str]:
    problems = []

    def need_int(name: str, value, lo: int):
        if not isinstance(value, int) or isinstance(value, bool):
            problems.append(f"{name}: expected an integer, got {value!r}")
        elif value < lo:
            problems.append(f"{name}: must be >= {lo}, got {value}")

    need_int("p_min", cfg.p_min, 3)
    need_int("p_max", cfg.p_max, 3)
    if isinstance(cfg.p_min, int) and isinstance(cfg.p_max, int) and cfg.p_max < cfg.p_min:
        problems.append(f"p_max ({cfg.p_max}) is below p_min ({cfg.p_min})")
    need_int("vertex_budget", cfg.vertex_budget, 1)
    need_int("relation_check_depth", cfg.relation_check_depth, 0)
    need_int("mu_r_max", cfg.mu_r_max, 1)
    need_int("mu_trials", cfg.mu_trials, 1)
    need_int("jobs", cfg.jobs, 1)
    need_int("sampler.trials", cfg.sampler.trials, 1)
    need_int("sampler.seed", cfg.sampler.seed, 0)
    if not isinstance(cfg.spectral_tol, (int, float)) or isinstance(cfg.spectral_tol, bool) or cfg.spectral_tol <= 0:
        problems.append(f"spectral_tol: must be a positive number, got {cfg.spectral_tol!r}")
    if cfg.nested_primes is not None:
        if not isinstance(cfg.nested_primes, list) or not all(
            isinstance(p, int) and not isinstance(p, bool) and p > 2 for p in cfg.nested_primes
        ):
            problems.append("nested_primes: expected a list of odd primes")
        elif cfg.nested_primes != sorted(set(cfg.nested_primes)):
            problems.append("nested_primes: must be distinct and ascending")
    return problems


def parse_config(path) -> Config:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    return config_from_dict(obj)


def dump_config(cfg: Config) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n"
