"""Run configuration: CLI arguments validated and applied to the settings caps."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

from config.settings import (
    ATLAS_SETTINGS,
    CURVE_SETTINGS,
    FIELD_SETTINGS,
    RUN_SETTINGS,
    TOWER_SETTINGS,
)
from core.errors import InvalidInputError
from core.weierstrass import Curve


def parse_m_range(text: str) -> Tuple[int, int]:
    """'1..6' -> (1, 6); '3' -> (3, 3)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            bounds = int(lo), int(hi)
        else:
            bounds = int(text), int(text)
    except ValueError as exc:
        raise InvalidInputError(f"bad m-range {text!r}, expected A..B") from exc
    if bounds[0] < 1 or bounds[1] < bounds[0]:
        raise InvalidInputError(f"m-range {text!r} is empty or starts below 1")
    return bounds


@dataclass
class RunConfig:
    """Everything one CLI invocation needs; defaults come from config.settings."""
    command: str
    curve: Optional[str] = None
    m_range: Tuple[int, int] = RUN_SETTINGS["m_range"]
    n: int = RUN_SETTINGS["n"]
    l: Optional[int] = None
    seed: int = RUN_SETTINGS["seed"]
    enum_bound: int = CURVE_SETTINGS["enumeration_bound"]
    degree_cap: int = FIELD_SETTINGS["degree_cap"]
    bits_budget: int = TOWER_SETTINGS["bits_budget"]
    fmt: str = RUN_SETTINGS["format"]
    tables: Tuple[str, ...] = field(default_factory=tuple)
    field_p: Optional[int] = None
    data_dir: Optional[Path] = None
    workers: int = RUN_SETTINGS["workers"]

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cfg = cls(
            command=args.command,
            curve=getattr(args, "curve", None),
            m_range=parse_m_range(args.m) if getattr(args, "m", None) else RUN_SETTINGS["m_range"],
            n=RUN_SETTINGS["n"] if getattr(args, "n", None) is None else args.n,
            l=getattr(args, "l", None),
            seed=args.seed,
            enum_bound=args.enum_bound,
            degree_cap=args.degree_cap,
            bits_budget=args.bits_budget,
            fmt=args.format,
            tables=tuple(getattr(args, "table", None) or ()),
            field_p=getattr(args, "field", None),
            data_dir=Path(args.data_dir) if getattr(args, "data_dir", None) else None,
            workers=RUN_SETTINGS["workers"] if getattr(args, "workers", None) is None else args.workers,
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in ("enum_bound", "degree_cap", "bits_budget", "workers", "n"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be positive")
        if self.fmt not in RUN_SETTINGS["formats"]:
            raise InvalidInputError(f"unknown format {self.fmt!r}")
        for t in self.tables:
            if t not in ATLAS_SETTINGS["tables"]:
                raise InvalidInputError(f"unknown table {t!r}")
        if self.curve is not None:
            self.parsed_curve()

    def parsed_curve(self) -> Curve:
        if self.curve is None:
            raise InvalidInputError(f"{self.command} needs a curve p:a2:a4:a6")
        return Curve.parse(self.curve)

    def apply(self) -> None:
        """Push run caps into the shared settings for this process."""
        CURVE_SETTINGS["enumeration_bound"] = self.enum_bound
        FIELD_SETTINGS["degree_cap"] = self.degree_cap
        TOWER_SETTINGS["bits_budget"] = self.bits_budget
