"""
Run configurations for the ``bautin`` management command.

A run configuration is an INI file with the sections ``[family]``,
``[regions]`` and ``[knobs]``. Every value is a JSON literal::

    [family]
    kind = "explicit"
    dimension = 1
    coefficients = [[[[2], -1.0, 0.0]], [], [[[1], 1.0, 0.0]]]

    [regions]
    K = 0.01
    O = [0.1, 0.05]
    U = 0.5

    [knobs]
    seed = 3
    samples = 64

Polynomial coefficients are lists of ``(multi-index, re, im)`` triples, one
list per Taylor index k.
"""

import configparser
import dataclasses
import json
from pathlib import Path
from typing import Any
from typing import Literal

from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import ValidationError
from pydantic import field_validator
from pydantic import model_validator

from .catalog import CatalogEntry
from .catalog import exp_poly_entry
from .catalog import get_entry
from .catalog import vanishing_head
from .exceptions import ConfigurationError
from .families import AnalyticFamily
from .families import ExplicitPolynomials
from .families import ParameterBox
from .polynomials import MultiPolynomial

SECTIONS = ("family", "regions", "knobs")

Triple = tuple[list[int], float, float]


class BoxSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    radii: list[float] = Field(min_length=1)
    centers: list[tuple[float, float]] | None = None

    @field_validator("radii")
    @classmethod
    def positive(cls, radii):
        if any(r <= 0 for r in radii):
            raise ValueError("radii must be positive")
        return radii

    def box(self, dimension: int) -> ParameterBox:
        radii = self.radii * dimension if len(self.radii) == 1 else self.radii
        centers = [complex(re, im) for re, im in self.centers] if self.centers else [0j] * len(radii)
        if len(radii) != dimension or len(centers) != dimension:
            raise ConfigurationError(f"Region has {len(radii)} radii for a {dimension}-parameter family")
        return ParameterBox(tuple(centers), tuple(radii))


RegionValue = float | BoxSpec


class FamilySection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["catalog", "explicit", "exp_poly"] = "catalog"
    source: str | None = None
    name: str | None = None
    dimension: int | None = Field(default=None, ge=1, le=64)
    coefficients: list[list[Triple]] | None = None
    m: int | None = Field(default=None, ge=1, le=8)
    p: int | None = Field(default=None, ge=0, le=16)
    q: int | None = Field(default=None, ge=1, le=8)
    V: float = Field(default=1.0, gt=0)
    truncation_degree: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def complete(self):
        if self.kind == "catalog" and not self.source:
            raise ValueError("catalog families need a source name")
        if self.kind == "explicit" and (self.dimension is None or not self.coefficients):
            raise ValueError("explicit families need a dimension and coefficients")
        if self.kind == "exp_poly" and None in (self.m, self.p, self.q):
            raise ValueError("exp_poly families need m, p and q")
        return self


class RegionsSection(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    K: RegionValue | None = None
    O: list[RegionValue] | RegionValue | None = None  # noqa: E741
    U: RegionValue | None = None


class KnobsSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k_max: int | None = Field(default=None, ge=1, le=4096)
    samples: int | None = Field(default=None, ge=1, le=1_000_000)
    seed: int | None = Field(default=None, ge=0)
    tolerance: float | None = Field(default=None, gt=0, lt=1)
    radii: list[float] | None = None
    degree_cap: int | None = Field(default=None, ge=1, le=1 << 16)
    truncation_degree: int | None = Field(default=None, ge=0)
    sweep_samples: int = Field(default=16, ge=1, le=10_000)
    route: Literal["ineq", "growth", "both"] = "both"
    mode: Literal["auto", "theoretical", "practical"] = "practical"

    @field_validator("radii")
    @classmethod
    def decreasing(cls, radii):
        if radii is None:
            return radii
        if not radii or any(not 0 < r < 1 for r in radii):
            raise ValueError("radii must lie in (0, 1)")
        if any(b >= a for a, b in zip(radii, radii[1:], strict=False)):
            raise ValueError("radii must be strictly decreasing")
        return radii


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: FamilySection | None = None
    regions: RegionsSection = Field(default_factory=RegionsSection)
    knobs: KnobsSection = Field(default_factory=KnobsSection)
    path: str | None = None

    def snapshot(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude={"path"})


def _parse_value(section: str, key: str, text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"[{section}] {key}: not a JSON literal ({e.msg})") from e


def parse_config(text: str, path: str | None = None) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigurationError(f"Cannot parse run configuration: {e}") from e
    unknown = set(parser.sections()) - set(SECTIONS)
    if unknown:
        raise ConfigurationError(f"Unknown sections {sorted(unknown)}")
    data = {
        section: {key: _parse_value(section, key, value) for key, value in parser.items(section)}
        for section in parser.sections()
    }
    try:
        return RunConfig(**data, path=path)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid run configuration: {e}") from e


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read {path}: {e}") from e
    return parse_config(text, str(path))


def catalog_config(name: str) -> RunConfig:
    return RunConfig(family=FamilySection(kind="catalog", source=name))


def _explicit_family(section: FamilySection) -> AnalyticFamily:
    polynomials = [MultiPolynomial.from_triples(section.dimension, triples) for triples in section.coefficients]
    return AnalyticFamily(
        ExplicitPolynomials(polynomials),
        ParameterBox.ball(section.dimension, section.V),
        truncation_degree_default=section.truncation_degree,
        name=section.name or "family",
    )


def _box(value: RegionValue, dimension: int) -> ParameterBox:
    if isinstance(value, BoxSpec):
        return value.box(dimension)
    return ParameterBox.ball(dimension, float(value))


def load_family(config: RunConfig) -> CatalogEntry:
    """
    The configured family with its regions, as a catalog entry.

    Catalog families keep their built-in regions unless ``[regions]``
    overrides them; explicit families need K and O.
    """
    section = config.family
    if section is None:
        raise ConfigurationError("No family configured; pass --family or a [family] section")
    if section.kind == "catalog":
        entry = get_entry(section.source)
    elif section.kind == "exp_poly":
        entry = exp_poly_entry(section.m, section.p, section.q, name=section.name)
    else:
        family = _explicit_family(section)
        regions = config.regions
        if regions.K is None or regions.O is None:
            raise ConfigurationError("Explicit families need K and O in [regions]")
        entry = CatalogEntry(
            name=family.name,
            family=family,
            known_mu=None,
            known_central_set="unknown",
            membership=vanishing_head(family.rule, family.rule.length),
            regions=(family.param_region_V,) * 3,
            O_sequence=(family.param_region_V,),
        )
    return with_regions(entry, config.regions)


def with_regions(entry: CatalogEntry, regions: RegionsSection) -> CatalogEntry:
    n = entry.family.dimension
    K = _box(regions.K, n) if regions.K is not None else entry.K
    if regions.O is None:
        O_sequence = entry.O_sequence
    elif isinstance(regions.O, list):
        O_sequence = tuple(_box(value, n) for value in regions.O)
    else:
        O_sequence = (_box(regions.O, n),)
    if not O_sequence:
        raise ConfigurationError("[regions] O must not be empty")
    U = _box(regions.U, n) if regions.U is not None else None
    if U is None:
        U = entry.U if regions.O is None else O_sequence[0].scaled(1.25)
    return dataclasses.replace(entry, regions=(K, O_sequence[0], U), O_sequence=O_sequence)
