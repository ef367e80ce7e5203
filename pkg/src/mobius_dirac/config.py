"""Run configuration: INI file plus ``--set section.key=value`` overrides."""
import configparser
from dataclasses import asdict, dataclass, field, fields

from .dirac import DENSE_CAP, DiracOptions, flat_control_options
from .errors import ConfigError
from .surface import StripParams


@dataclass(frozen=True)
class StripSection:
    R: float = 4.0
    w: float = 1.0
    twist_k: int = 1


@dataclass(frozen=True)
class GridSection:
    n_r: int = 24
    n_theta: int = 96


@dataclass(frozen=True)
class PhysicsSection:
    mass: float = 0.0
    wilson: float = 0.5
    sectors: str = "both"
    count: int = 40
    window: int = 40
    emax: float = None
    mass_sign: str = "trace"
    normal: str = "right"
    control: str = "none"


@dataclass(frozen=True)
class OutputSection:
    format: str = "csv"
    path: str = None
    precision: int = 10


SECTIONS = {"strip": StripSection, "grid": GridSection, "physics": PhysicsSection, "output": OutputSection}
CHOICES = {
    ("physics", "sectors"): ("both", "plus", "minus"),
    ("physics", "mass_sign"): ("trace", "flipped"),
    ("physics", "normal"): ("right", "left"),
    ("physics", "control"): ("none", "flat"),
    ("output", "format"): ("csv", "json"),
}
_NONE = ("", "none", "null")


def _parse(kind, text):
    text = str(text).strip()
    if kind == "float?":
        return None if text.lower() in _NONE else float(text)
    if kind == "str?":
        return None if text.lower() in _NONE else text
    if kind is int:
        f = float(text)
        if f != int(f):
            raise ValueError(f"{text!r} is not an integer")
        return int(f)
    return kind(text)


def _kind(section, name):
    default = SECTIONS[section].__dataclass_fields__[name].default
    if default is None:
        return "float?" if name == "emax" else "str?"
    return type(default)


@dataclass(frozen=True)
class RunConfig:
    strip: StripSection = field(default_factory=StripSection)
    grid: GridSection = field(default_factory=GridSection)
    physics: PhysicsSection = field(default_factory=PhysicsSection)
    output: OutputSection = field(default_factory=OutputSection)

    # ------------------------------------------------------------ build

    @classmethod
    def from_mapping(cls, mapping: dict) -> "RunConfig":
        """Build from {section: {key: text-or-value}}; every problem is collected."""
        problems, parts = [], {}
        for section, klass in SECTIONS.items():
            raw = dict(mapping.get(section, {}))
            values = {}
            for f in fields(klass):
                if f.name in raw:
                    try:
                        values[f.name] = _parse(_kind(section, f.name), raw.pop(f.name))
                    except (TypeError, ValueError) as exc:
                        problems.append(f"{section}.{f.name}: cannot parse ({exc})")
            for key in raw:
                problems.append(f"{section}.{key}: unknown key")
            parts[section] = klass(**values)
        for section in mapping:
            if section not in SECTIONS:
                problems.append(f"[{section}]: unknown section")
        cfg = cls(**parts)
        problems += cfg.violations()
        if problems:
            raise ConfigError(problems)
        return cfg

    @classmethod
    def from_ini_text(cls, text: str, overrides=()) -> "RunConfig":
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError([f"malformed config: {exc}"]) from None
        mapping = {s: dict(parser.items(s)) for s in parser.sections()}
        return cls.from_mapping(apply_overrides(mapping, overrides))

    @classmethod
    def load(cls, path=None, overrides=()) -> "RunConfig":
        """Read ``path`` (if given) and apply overrides.  I/O failures propagate as OSError."""
        text = ""
        if path is not None:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return cls.from_ini_text(text, overrides)

    # ------------------------------------------------------------ checks

    def violations(self):
        s, g, p, o = self.strip, self.grid, self.physics, self.output
        bad = []
        if not s.R > 0:
            bad.append(f"strip.R must be > 0, got {s.R}")
        if not 0 < s.w < s.R:
            bad.append(f"strip.w must satisfy 0 < w < R, got {s.w}")
        if s.twist_k < 1:
            bad.append(f"strip.twist_k must be >= 1, got {s.twist_k}")
        if g.n_r < 8:
            bad.append(f"grid.n_r must be >= 8, got {g.n_r}")
        if g.n_theta < 32:
            bad.append(f"grid.n_theta must be >= 32, got {g.n_theta}")
        if 2 * g.n_r * g.n_theta > DENSE_CAP:
            bad.append(f"grid.n_r * grid.n_theta gives dimension {2 * g.n_r * g.n_theta} over the dense cap {DENSE_CAP}")
        if not p.wilson >= 0:
            bad.append(f"physics.wilson must be >= 0, got {p.wilson}")
        if p.mass != p.mass:
            bad.append("physics.mass must be a number")
        if p.count < 1 or p.count > 2 * g.n_r * g.n_theta:
            bad.append(f"physics.count must lie in [1, {2 * g.n_r * g.n_theta}], got {p.count}")
        if p.window < 1:
            bad.append(f"physics.window must be >= 1, got {p.window}")
        if p.emax is not None and not p.emax > 0:
            bad.append(f"physics.emax must be > 0, got {p.emax}")
        if not 1 <= o.precision <= 17:
            bad.append(f"output.precision must lie in [1, 17], got {o.precision}")
        for (section, key), allowed in CHOICES.items():
            value = getattr(getattr(self, section), key)
            if value not in allowed:
                bad.append(f"{section}.{key} must be one of {allowed}, got {value!r}")
        return bad

    def validate(self):
        bad = self.violations()
        if bad:
            raise ConfigError(bad)
        return self

    # ------------------------------------------------------------ views

    def strip_params(self) -> StripParams:
        return StripParams(self.strip.R, self.strip.w, self.strip.twist_k)

    def dirac_options(self) -> DiracOptions:
        p = self.physics
        if p.control == "flat":
            return flat_control_options(p.wilson)
        return DiracOptions(wilson=p.wilson, mass_sign=p.mass_sign)

    def sectors(self):
        return {"both": (1, -1), "plus": (1,), "minus": (-1,)}[self.physics.sectors]

    def as_dict(self) -> dict:
        return {name: asdict(getattr(self, name)) for name in SECTIONS}

    def flat_items(self):
        """Sorted ``("section.key", value)`` pairs."""
        return sorted((f"{s}.{k}", v) for s, d in self.as_dict().items() for k, v in d.items())

    def to_ini(self) -> str:
        lines = []
        for section, values in self.as_dict().items():
            lines.append(f"[{section}]")
            lines.extend(f"{k} = {'none' if v is None else repr(v) if isinstance(v, float) else v}" for k, v in values.items())
            lines.append("")
        return "\n".join(lines)

    def replace(self, **dotted) -> "RunConfig":
        """Copy with ``section__key=value`` changes, revalidated."""
        mapping = {s: {k: ("none" if v is None else v) for k, v in d.items()} for s, d in self.as_dict().items()}
        for key, value in dotted.items():
            section, name = key.split("__", 1)
            mapping.setdefault(section, {})[name] = value
        return RunConfig.from_mapping(mapping)


def apply_overrides(mapping: dict, overrides) -> dict:
    """Apply ``section.key=value`` (or unambiguous ``key=value``) strings."""
    mapping = {s: dict(v) for s, v in mapping.items()}
    problems = []
    for item in overrides:
        if "=" not in item:
            problems.append(f"override {item!r} is not of the form key=value")
            continue
        key, value = (x.strip() for x in item.split("=", 1))
        if "." in key:
            section, name = key.split(".", 1)
        else:
            owners = [s for s, k in SECTIONS.items() if name_in(k, key)]
            if len(owners) != 1:
                problems.append(f"override key {key!r} is unknown or ambiguous; use section.key")
                continue
            section, name = owners[0], key
        mapping.setdefault(section, {})[name] = value
    if problems:
        raise ConfigError(problems)
    return mapping


def name_in(klass, key) -> bool:
    return key in klass.__dataclass_fields__
