"""Generation configs and the end-to-end generator used by the command line."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import cumulative_trapezoid

from .errors import SchemaError
from .flat import (
    BRANCH_SIGN,
    ConformalMap,
    Profile,
    RuledInput,
    assemble_flat_immersion,
    assemble_flat_immersion_neg,
    integrate_spin_frame,
    pseudoanalytic_coefficient,
    solve_hyperbolic,
    exponential_solution,
    generate_quasi_umbilic,
    solve_pseudoanalytic,
)
from .dirac import ImmersionResult
from .lorentz import real8_to_h0
from .spin import check_unit
from .surface import NullChart

BRANCHES = ("delta_pos_1", "delta_pos_2", "delta_neg_1", "delta_neg_2", "quasi_umbilic")
MIN_POINTS = 9
# g0 as 8 reals: (p0+, p0-, p1+, p1-, p2+, p2-, p3+, p3-) of p0 1 + i p1 I + p2 J + i p3 K
IDENTITY_G0 = (1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

_ALLOWED = {
    "branch", "psi1", "psi2", "lambda0", "mu0", "pseudoanalytic", "grid", "g0", "sign", "base", "ruling",
}


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def _real(x, what) -> float:
    _require(isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x), f"{what} must be a finite number")
    return float(x)


def _reals(x, n, what) -> tuple:
    _require(isinstance(x, list) and len(x) == n, f"{what} must be a list of {n} numbers")
    return tuple(_real(v, f"{what}[{k}]") for k, v in enumerate(x))


def _profile_spec(spec, what):
    _require(isinstance(spec, (int, float, dict)) and not isinstance(spec, bool), f"{what}: bad profile spec")
    if isinstance(spec, dict):
        _require(spec.get("kind") in ("poly", "samples"), f"{what}.kind must be poly or samples")
    try:
        Profile.from_spec(spec)
    except Exception as exc:
        raise SchemaError(f"{what}: {exc}") from exc
    return spec


def _complex(x, what) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(_real(x, what))
    re, im = _reals(x, 2, what)
    return complex(re, im)


@dataclass
class GridSpec:
    n: int
    extent_s: float
    extent_t: float
    origin: tuple = (0.0, 0.0)

    def chart(self) -> NullChart:
        return NullChart(self.n, self.n, self.extent_s / (self.n - 1), self.extent_t / (self.n - 1), self.origin)


@dataclass
class GenerationConfig:
    branch: str
    grid: GridSpec
    psi1: object = 0.0
    psi2: object = 0.0
    lambda0: object = 1.0
    mu0: object = 1.0
    # pseudoanalytic: {"b": number | [re, im] (optional), and either "seed": polynomial
    # coefficients in z, or "exponential": coefficients of the exact constant-b family}
    pseudoanalytic: dict = field(default_factory=dict)
    g0: tuple = IDENTITY_G0
    sign: int | None = None
    base: tuple = (0.0, 0.0, 0.0, 0.0)
    ruling: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data) -> "GenerationConfig":
        _require(isinstance(data, dict), "config must be a JSON object")
        unknown = set(data) - _ALLOWED
        _require(not unknown, f"unknown config keys: {sorted(unknown)}")
        branch = data.get("branch")
        _require(branch in BRANCHES, f"branch must be one of {BRANCHES}")
        g = data.get("grid")
        _require(isinstance(g, dict), "grid must be an object with n, extent_s, extent_t")
        n = g.get("n")
        _require(isinstance(n, int) and not isinstance(n, bool) and n >= MIN_POINTS, f"grid.n must be an integer >= {MIN_POINTS}")
        es = _real(g.get("extent_s", g.get("extent")), "grid.extent_s")
        et = _real(g.get("extent_t", g.get("extent")), "grid.extent_t")
        _require(es > 0 and et > 0, "grid extents must be positive")
        origin = _reals(g.get("origin", [0.0, 0.0]), 2, "grid.origin")
        grid = GridSpec(n, es, et, origin)
        cfg = cls(branch, grid)
        for key in ("psi1", "psi2", "lambda0", "mu0"):
            if key in data:
                setattr(cfg, key, _profile_spec(data[key], key))
        if "g0" in data:
            cfg.g0 = _reals(data["g0"], 8, "g0")
        if "base" in data:
            cfg.base = _reals(data["base"], 4, "base")
        if "sign" in data and data["sign"] is not None:
            _require(data["sign"] in (1, -1), "sign must be +1 or -1")
            cfg.sign = int(data["sign"])
        if "pseudoanalytic" in data:
            pa = data["pseudoanalytic"]
            _require(isinstance(pa, dict), "pseudoanalytic must be an object")
            _require(set(pa) <= {"b", "seed", "exponential"}, "pseudoanalytic accepts only b, seed and exponential")
            _require(not {"seed", "exponential"} <= set(pa), "give either seed or exponential, not both")
            if "exponential" in pa:
                _require("b" in pa, "exponential boundary data needs a constant b")
                _require(isinstance(pa["exponential"], list) and pa["exponential"],
                         "pseudoanalytic.exponential must be a coefficient list")
                for k, c in enumerate(pa["exponential"]):
                    _require(_complex(c, f"pseudoanalytic.exponential[{k}]") != 0, "exponential coefficients must be nonzero")
            if "b" in pa:
                _complex(pa["b"], "pseudoanalytic.b")
            if "seed" in pa:
                _require(isinstance(pa["seed"], list) and pa["seed"], "pseudoanalytic.seed must be a coefficient list")
                for k, c in enumerate(pa["seed"]):
                    _complex(c, f"pseudoanalytic.seed[{k}]")
            cfg.pseudoanalytic = dict(pa)
            if "b" in pa and not {"psi1", "psi2"} & set(data):
                # a constant b fixes linear conformal data
                b = _complex(pa["b"], "pseudoanalytic.b")
                cfg.psi1 = {"kind": "poly", "data": [0.0, -4.0 * b.real]}
                cfg.psi2 = {"kind": "poly", "data": [0.0, 4.0 * b.imag]}
        if branch == "quasi_umbilic":
            r = data.get("ruling")
            _require(isinstance(r, dict) and {"gamma_prime", "T"} <= set(r),
                     "quasi_umbilic needs ruling.gamma_prime and ruling.T (4 profiles each)")
            for key in ("gamma_prime", "T"):
                _require(isinstance(r[key], list) and len(r[key]) == 4, f"ruling.{key} must list 4 profiles")
                for k, spec in enumerate(r[key]):
                    _profile_spec(spec, f"ruling.{key}[{k}]")
            cfg.ruling = r
        elif branch.startswith("delta_neg") and {"lambda0", "mu0"} & set(data):
            raise SchemaError("lambda0/mu0 belong to the Delta > 0 branches")
        if cfg.sign is not None and branch in BRANCH_SIGN and cfg.sign != BRANCH_SIGN[branch]:
            raise SchemaError(f"branch {branch} requires sign {BRANCH_SIGN[branch]:+d}")
        return cfg

    def conformal_map(self) -> ConformalMap:
        return ConformalMap(Profile.from_spec(self.psi1), Profile.from_spec(self.psi2))

    def to_dict(self) -> dict:
        out = {
            "branch": self.branch,
            "grid": {"n": self.grid.n, "extent_s": self.grid.extent_s, "extent_t": self.grid.extent_t,
                     "origin": list(self.grid.origin)},
            "psi1": self.psi1, "psi2": self.psi2, "g0": list(self.g0), "base": list(self.base), "sign": self.sign,
        }
        if self.branch.startswith("delta_pos"):
            out["lambda0"] = self.lambda0
            out["mu0"] = self.mu0
        if self.branch.startswith("delta_neg"):
            out["pseudoanalytic"] = self.pseudoanalytic
        if self.branch == "quasi_umbilic":
            out["ruling"] = self.ruling
        return out


def _seed_function(pa: dict):
    if "exponential" in pa:
        return exponential_solution(_complex(pa["b"], "b"), [_complex(c, "exponential") for c in pa["exponential"]])
    coeffs = [_complex(c, "seed") for c in pa.get("seed", [1.0])]
    return lambda z: np.polynomial.polynomial.polyval(z, coeffs)


def _ruled_input(cfg: GenerationConfig) -> RuledInput:
    dg = [Profile.from_spec(p) for p in cfg.ruling["gamma_prime"]]
    T = [Profile.from_spec(p) for p in cfg.ruling["T"]]
    base = np.asarray(cfg.base, float)
    s0 = cfg.grid.origin[0]

    def gamma_prime(s):
        return np.stack([p(s) for p in dg], axis=-1)

    def gamma(s):
        comps = []
        for p in dg:
            desc = p.description or {}
            if desc.get("kind") == "poly":
                anti = Polynomial(desc["data"]).integ(lbnd=s0)
                comps.append(anti(s))
            else:
                comps.append(cumulative_trapezoid(p(s), s, initial=0.0))
        return base + np.stack(comps, axis=-1)

    return RuledInput(gamma, gamma_prime, lambda s: np.stack([p(s) for p in T], axis=-1))


def generate(cfg: GenerationConfig) -> ImmersionResult:
    chart = cfg.grid.chart()
    if cfg.branch == "quasi_umbilic":
        result = generate_quasi_umbilic(_ruled_input(cfg), chart)
        result.fields["config"] = cfg.to_dict()
        return result
    g0 = real8_to_h0(np.asarray(cfg.g0, float))
    check_unit(g0)
    psi = cfg.conformal_map()
    frame = integrate_spin_frame(psi, cfg.branch, g0, chart)
    if cfg.branch.startswith("delta_pos"):
        sol = solve_hyperbolic(psi, Profile.from_spec(cfg.lambda0), Profile.from_spec(cfg.mu0), chart)
        result = assemble_flat_immersion(sol, frame, psi, cfg.sign, cfg.base)
    else:
        pa = cfg.pseudoanalytic
        b = pseudoanalytic_coefficient(psi, chart)
        if "b" in pa and np.max(np.abs(b - _complex(pa["b"], "b"))) > 1e-9:
            raise SchemaError("pseudoanalytic.b disagrees with the coefficient implied by psi1, psi2")
        f = solve_pseudoanalytic(b, _seed_function(pa), chart)
        result = assemble_flat_immersion_neg(f, frame, psi, cfg.sign, cfg.base)
        result.fields["pseudoanalytic_b"] = b
    result.fields["config"] = cfg.to_dict()
    return result


__all__ = ["BRANCHES", "GridSpec", "GenerationConfig", "generate", "IDENTITY_G0"]
