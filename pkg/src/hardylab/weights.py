"""Hardy weights rho(r): the distance itself or log(d/r)."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import RadialModel
from .trials import RadialTrial


class WeightKind(str, Enum):
    POWER = "power"
    LOG = "log"


@dataclass(frozen=True)
class WeightSpec:
    kind: WeightKind
    p: float
    beta: float
    alpha: float = 1.0
    d: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", WeightKind(self.kind))
        if not self.p > 1:
            raise ValueError(f"p must exceed 1, got {self.p}")
        if self.kind is WeightKind.LOG and self.d is None:
            raise ValueError("log weight needs the scale d")

    @property
    def is_log(self) -> bool:
        return self.kind is WeightKind.LOG

    @property
    def c(self) -> float:
        """alpha [(alpha-1)(p-1) - beta - 1], the supersolution constant."""
        a, p, b = self.alpha, self.p, self.beta
        return a * ((a - 1) * (p - 1) - b - 1)

    @property
    def gap(self) -> float:
        """(alpha-1)(p-1) - beta - 1; |gap|/p is the Hardy constant base."""
        return (self.alpha - 1) * (self.p - 1) - self.beta - 1

    def validate_for(self, m: RadialModel):
        if self.is_log and self.d < m.diam:
            raise ValueError(f"log weight scale d={self.d} below diam={m.diam}")

    def rho(self, r):
        r = np.asarray(r, dtype=float)
        return np.log(self.d / r) if self.is_log else r

    def drho(self, r):
        r = np.asarray(r, dtype=float)
        return -1.0 / r if self.is_log else np.ones_like(r)

    def d2rho(self, r):
        r = np.asarray(r, dtype=float)
        return 1.0 / (r * r) if self.is_log else np.zeros_like(r)

    def to_config(self) -> dict:
        out = {"kind": self.kind.value, "p": self.p, "beta": self.beta, "alpha": self.alpha}
        if self.d is not None:
            out["d"] = self.d
        return out


def weight_from_config(cfg: dict, m: RadialModel | None = None) -> WeightSpec:
    d = cfg.get("d")
    if d is None and "d_over_diam" in cfg and m is not None:
        d = cfg["d_over_diam"] * m.diam
    w = WeightSpec(kind=cfg["kind"], p=float(cfg["p"]), beta=float(cfg["beta"]),
                   alpha=float(cfg.get("alpha", 1.0)), d=None if d is None else float(d))
    if m is not None:
        w.validate_for(m)
    return w


def d_min(K: float) -> float:
    """Smallest admissible log scale pi/sqrt(K) when Ric_N >= (N-1) K > 0."""
    if not K > 0:
        raise ValueError("K must be positive")
    return float(np.pi / np.sqrt(K))


def rho_power(w: WeightSpec, m: RadialModel, a: float) -> RadialTrial:
    """rho^a as a radial function with closed-form first and second derivatives."""
    rho, d1, d2 = w.rho, w.drho, w.d2rho

    def val(r):
        return rho(r) ** a

    def der(r):
        return a * rho(r) ** (a - 1) * d1(r)

    def sec(r):
        x = rho(r)
        return a * (a - 1) * x ** (a - 2) * d1(r) ** 2 + a * x ** (a - 1) * d2(r)

    if w.is_log:
        return RadialTrial(val, der, left_order=0.0, left_log_order=a, support=(0.0, m.diam),
                           second=sec, name=f"log^{a:g}")
    return RadialTrial(val, der, left_order=a, support=(0.0, m.diam), second=sec, name=f"r^{a:g}")
