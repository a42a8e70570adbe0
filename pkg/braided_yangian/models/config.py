"""
Run configuration and package-wide settings
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator

from ..core.errors import ConfigError

SUITE_NAMES = ("braid", "rmatrix", "bethe", "newton", "qdet", "shiftlemma",
               "alchain", "gaudin", "talalaev", "tau")

# Suites whose constructions are stated for one kind of braiding only
HECKE_ONLY_SUITES = ("alchain",)
INVOLUTIVE_ONLY_SUITES = ("gaudin", "talalaev", "tau")
GAUDIN_SUITES = ("gaudin", "talalaev")


class Settings(BaseModel):
    """Package defaults"""
    sample_span: int = 97
    default_seed: int = 7
    birank_cutoff_offset: int = 2
    yang_baxter_triples: int = 20
    chain_points: int = 10
    cyclic_trials: int = 25
    trace_shift_trials: int = 5
    forms_kmax: int = 4
    ideal_points: int = 3
    symbolic_row_limit: int = 400
    sample_margin: int = 2
    max_sample_points: int = 64
    default_braiding: str = "dj_hecke"
    default_dim: int = 2
    catalog_dims: List[int] = [2, 3]
    default_truncation: int = 2
    default_degree_cap: int = 4
    default_pairs: List[Tuple[int, int]] = [(1, 1), (1, 2), (2, 2)]
    app_name: str = "braided-yangian"
    report_dir_name: str = "reports"


settings = Settings()


def default_report_dir() -> Path:
    """Per-user data directory for reports and certificates"""
    import appdirs
    return Path(appdirs.user_data_dir(settings.app_name)) / settings.report_dir_name


class RunConfig(BaseModel):
    """Configuration of one verification run"""
    suite: str = "braid"
    braiding: Optional[str] = None  # builtin name or path to a braiding file; suite default when unset
    N: int = settings.default_dim
    T: int = settings.default_truncation
    D: int = settings.default_degree_cap
    q_mode: Literal["symbolic", "sampled"] = "symbolic"
    seed: int = settings.default_seed
    points: int = settings.chain_points
    pairs: List[Tuple[int, int]] = Field(default_factory=lambda: list(settings.default_pairs))
    kmax: int = 3
    k: int = 2
    p: int = 1
    flavor: Literal["classical", "braided", "weighted"] = "classical"
    m: int = 2
    sites: int = 2
    site_points: List[str] = Field(default_factory=list)
    symmetrizer_variant: Literal["top", "own"] = "top"
    family: Literal["elementary", "power"] = "elementary"
    workers: int = 1
    certificates: bool = True
    strict: bool = False
    verbose: int = 0
    report: Optional[str] = None
    system: Optional[str] = None  # path to a Gaudin system descriptor (JSON)

    @field_validator("suite")
    @classmethod
    def _known_suite(cls, value: str) -> str:
        if value not in SUITE_NAMES:
            raise ValueError(f"unknown suite '{value}' (choose from {', '.join(SUITE_NAMES)})")
        return value

    def problems(self, kind: Optional[str] = None) -> List[str]:
        """Validate cross-field constraints and return a list of error strings"""
        errors = []
        if self.T < 1:
            errors.append(f"truncation T must be >= 1 (got {self.T})")
        if self.D < 2:
            errors.append(f"degree cap D must be >= 2 (got {self.D})")
        if self.N < 2:
            errors.append(f"dimension N must be >= 2 (got {self.N})")
        if self.points < 1:
            errors.append("points must be positive")
        if self.workers < 1:
            errors.append("workers must be positive")
        if self.kmax < 1 or self.k < 1 or self.p < 1:
            errors.append("kmax, k and p must be positive")
        for pair in self.pairs:
            if min(pair) < 1:
                errors.append(f"pair {pair} must have positive entries")
        if self.sites < 1:
            errors.append("sites must be positive")
        if self.m < 2:
            errors.append(f"aux dimension m must be >= 2 (got {self.m})")
        if self.site_points:
            if len(self.site_points) != self.sites:
                errors.append(f"{len(self.site_points)} site points given for {self.sites} sites")
            if len(set(self.site_points)) != len(self.site_points):
                errors.append("site points must be pairwise distinct")
        if self.system and self.suite not in GAUDIN_SUITES:
            errors.append(f"a system descriptor applies to the gaudin and talalaev suites, not '{self.suite}'")
        if kind == "involutive" and self.suite in HECKE_ONLY_SUITES:
            errors.append(f"suite '{self.suite}' requires a Hecke braiding")
        if kind == "hecke" and self.suite in INVOLUTIVE_ONLY_SUITES:
            errors.append(f"suite '{self.suite}' requires an involutive braiding")
        return errors

    def validated(self, kind: Optional[str] = None) -> "RunConfig":
        errors = self.problems(kind)
        if errors:
            raise ConfigError(errors)
        return self

    def echo(self) -> Dict[str, Any]:
        """Config as stored in reports"""
        return self.model_dump(mode="json", exclude={"verbose"})

    @classmethod
    def from_file(cls, path: str, overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """Load a JSON config file; `overrides` win over file values"""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError([f"cannot read config file {path}: {e}"])
        if not isinstance(data, dict):
            raise ConfigError([f"config file {path} must contain a JSON object"])
        data.update(overrides or {})
        return cls.build(data)

    @classmethod
    def build(cls, data: Dict[str, Any]) -> "RunConfig":
        """Construct from a plain dict, mapping pydantic errors to ConfigError"""
        try:
            return cls(**data)
        except ValidationError as e:
            raise ConfigError([f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()])
