import json
import math
from fractions import Fraction

from qvolume.objects.base import Base
from qvolume.objects.polynomial import ModelParams

COMMANDS = ("moments", "op-check", "zeros", "density", "arctic", "cstar", "levelsets",
            "kernel", "edge", "sample", "render")

# commands that need neither c nor q
SCALE_FREE = ("cstar", "render")


def parse_q(text):
    """q from "p/q", an integer or a decimal string; kept exact."""
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"q must be a rational string such as 13/10, got {text!r}")
    if value <= 1:
        raise ValueError(f"q must exceed 1, got {text!r}")
    return value


def parse_c(text):
    try:
        value = float(str(text).strip())
    except ValueError:
        raise ValueError(f"c must be a decimal string, got {text!r}")
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"c must be a finite number >= 0, got {text!r}")
    return value


class JobConfig(Base):
    """One CLI job: command, N, exactly one of c / q, and the config overrides."""

    def __init__(self, command, N=None, c=None, q=None, seed=None, out=None, svg=None,
                 options=None, overrides=None):
        super(JobConfig, self).__init__("job_config")
        if command not in COMMANDS:
            raise ValueError(f"unknown command {command!r}")
        if c is not None and q is not None:
            raise ValueError("give exactly one of c and q")
        if command not in SCALE_FREE and c is None and q is None:
            raise ValueError(f"{command} needs one of c and q")
        if N is not None and int(N) < 1:
            raise ValueError(f"N must be >= 1, got {N}")
        self.__command = command
        self.__N = int(N) if N is not None else None
        self.__c_text = None if c is None else str(c)
        self.__q_text = None if q is None else str(q)
        self.__c = None if c is None else parse_c(c)
        self.__q = None if q is None else parse_q(q)
        self.__seed = None if seed is None else int(seed)
        self.__out = out
        self.__svg = svg
        self.__options = dict(options or {})
        self.__overrides = dict(overrides or {})

    @property
    def command(self):
        return self.__command

    @property
    def N(self):
        return self.__N

    @property
    def c(self):
        return self.__c

    @property
    def q(self):
        return self.__q

    @property
    def seed(self):
        return self.__seed

    @property
    def out(self):
        return self.__out

    @property
    def svg(self):
        return self.__svg

    @property
    def options(self):
        return self.__options

    @property
    def overrides(self):
        return self.__overrides

    def require_N(self, default=None):
        if self.__N is None:
            if default is None:
                raise ValueError(f"{self.__command} needs --N")
            return default
        return self.__N

    def model(self, default_N=None):
        return ModelParams(self.require_N(default_N), q=self.__q, c=self.__c)

    def q_value(self):
        """q as given, or e^{c/2N} when c is given."""
        if self.__q is not None:
            return self.__q
        return self.model().q

    def c_value(self):
        """c as given, or 2N log q when q is given."""
        if self.__c is not None:
            return self.__c
        return self.model().c

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        known = ("command", "N", "c", "q", "seed", "out", "svg", "options", "config")
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"unknown job keys: {sorted(unknown)}")
        return cls(data.get("command"), data.get("N"), data.get("c"), data.get("q"),
                   data.get("seed"), data.get("out"), data.get("svg"),
                   data.get("options"), data.get("config"))

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return {
            "command": self.__command,
            "N": self.__N,
            "c": self.__c_text,
            "q": self.__q_text,
            "seed": self.__seed,
            "out": self.__out,
            "svg": self.__svg,
            "options": self.__options,
            "config": self.__overrides,
        }
