"""Lag-weight families.

A weight spec maps a nonnegative integer lag t to a real weight w(t), with
w(0) = 0 for every family. Proximity families (default_cauchy, algebraic,
geometric, exp_decay) decay monotonically and stay in [-1, 0]; trigonometric
families (cosine, abs_cosine, fourier) target periodic dependence; mixed
blends one proximity term with one cosine term.

Closed forms, for lag t > 0:

    default_cauchy        1/(1 + t^2) - 1
    algebraic(beta)       (1 + t)^(-beta) - 1,        beta > 1
    geometric(rho)        rho^t - 1,                  0 < rho < 1
    exp_decay(lam)        exp(-(t/lam)^2) - 1,        lam > 0
    cosine(l)             cos(2 pi t / l) - 1,        l > 0
    abs_cosine(l)         |cos(pi t / l)| - 1,        l > 0
    fourier((a_k, l_k))   sum_k a_k cos(2 pi t / l_k) - 1,  a_k in (0,1), sum a_k = 1
    mixed(alpha, beta, l) alpha (t^(-beta) - 1) + (1-alpha)(cos(2 pi t / l) - 1)

The mixed proximity term t^(-beta) is taken to be 1 at t = 0 so that the
family, like every other, returns exactly 0 there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import BadWeightParam, InvalidValue, ParseError

FAMILIES = (
    "default_cauchy",
    "algebraic",
    "geometric",
    "exp_decay",
    "cosine",
    "abs_cosine",
    "fourier",
    "mixed",
)

# relative slack when checking that fourier coefficients sum to one
_FOURIER_SUM_TOL = 1e-12


@dataclass(frozen=True)
class WeightSpec:
    """Validated description of one lag-weight family.

    Only the parameters relevant to ``family`` are set; the rest stay None.
    ``terms`` holds the fourier (coefficient, period) pairs.
    """

    family: str
    beta: Optional[float] = None
    rho: Optional[float] = None
    lam: Optional[float] = None
    l: Optional[float] = None
    alpha: Optional[float] = None
    terms: Optional[Tuple[Tuple[float, float], ...]] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadWeightParam(f"unknown weight family {self.family!r}")
        check = _VALIDATORS[self.family]
        check(self)
        if self.terms is not None:
            object.__setattr__(
                self, "terms", tuple((float(a), float(l)) for a, l in self.terms)
            )

    def to_json_obj(self) -> dict:
        obj: dict = {"family": self.family}
        for key in ("beta", "rho", "lam", "l", "alpha"):
            val = getattr(self, key)
            if val is not None:
                obj[key] = float(val)
        if self.terms is not None:
            obj["terms"] = [[a, l] for a, l in self.terms]
        return obj

    def to_string(self) -> str:
        """Inverse of :func:`parse_weight_spec` (canonical form)."""
        f = self.family
        if f == "default_cauchy":
            return "default"
        if f == "algebraic":
            return f"algebraic:beta={self.beta:g}"
        if f == "geometric":
            return f"geometric:rho={self.rho:g}"
        if f == "exp_decay":
            return f"exp_decay:lambda={self.lam:g}"
        if f in ("cosine", "abs_cosine"):
            return f"{f}:l={self.l:g}"
        if f == "fourier":
            groups = ";".join(f"alpha={a:g},l={l:g}" for a, l in self.terms)
            return f"fourier:{groups}"
        return f"mixed:alpha={self.alpha:g},beta={self.beta:g},l={self.l:g}"


def _need(spec: WeightSpec, *names: str):
    for name in names:
        if getattr(spec, name) is None:
            raise BadWeightParam(f"{spec.family} requires parameter {name!r}")


def _check_default(spec):
    pass


def _check_algebraic(spec):
    _need(spec, "beta")
    if not spec.beta > 1:
        raise BadWeightParam(f"algebraic requires beta > 1, got {spec.beta}")


def _check_geometric(spec):
    _need(spec, "rho")
    if not 0 < spec.rho < 1:
        raise BadWeightParam(f"geometric requires rho in (0,1), got {spec.rho}")


def _check_exp_decay(spec):
    _need(spec, "lam")
    if not spec.lam > 0:
        raise BadWeightParam(f"exp_decay requires lambda > 0, got {spec.lam}")


def _check_cosine(spec):
    _need(spec, "l")
    if not spec.l > 0:
        raise BadWeightParam(f"{spec.family} requires period l > 0, got {spec.l}")


def _check_fourier(spec):
    if not spec.terms:
        raise BadWeightParam("fourier requires at least one (alpha, l) term")
    total = 0.0
    for a, l in spec.terms:
        if not 0 < a < 1:
            raise BadWeightParam(f"fourier coefficient must lie in (0,1), got {a}")
        if not l > 0:
            raise BadWeightParam(f"fourier period must be positive, got {l}")
        total += a
    if abs(total - 1.0) > _FOURIER_SUM_TOL:
        raise BadWeightParam(f"fourier coefficients must sum to 1, got {total!r}")


def _check_mixed(spec):
    _need(spec, "alpha", "beta", "l")
    if not 0 < spec.alpha < 1:
        raise BadWeightParam(f"mixed requires alpha in (0,1), got {spec.alpha}")
    if not spec.beta > 0:
        raise BadWeightParam(f"mixed requires beta > 0, got {spec.beta}")
    if not spec.l > 0:
        raise BadWeightParam(f"mixed requires period l > 0, got {spec.l}")


_VALIDATORS = {
    "default_cauchy": _check_default,
    "algebraic": _check_algebraic,
    "geometric": _check_geometric,
    "exp_decay": _check_exp_decay,
    "cosine": _check_cosine,
    "abs_cosine": _check_cosine,
    "fourier": _check_fourier,
    "mixed": _check_mixed,
}


def default_weight() -> WeightSpec:
    return WeightSpec("default_cauchy")


def algebraic(beta: float) -> WeightSpec:
    return WeightSpec("algebraic", beta=float(beta))


def geometric(rho: float) -> WeightSpec:
    return WeightSpec("geometric", rho=float(rho))


def exp_decay(lam: float) -> WeightSpec:
    return WeightSpec("exp_decay", lam=float(lam))


def cosine(l: float) -> WeightSpec:
    return WeightSpec("cosine", l=float(l))


def abs_cosine(l: float) -> WeightSpec:
    return WeightSpec("abs_cosine", l=float(l))


def fourier(terms: Sequence[Tuple[float, float]]) -> WeightSpec:
    return WeightSpec("fourier", terms=tuple(terms))


def mixed(alpha: float, beta: float, l: float) -> WeightSpec:
    return WeightSpec("mixed", alpha=float(alpha), beta=float(beta), l=float(l))


def weight_profile(spec: WeightSpec, lags: np.ndarray) -> np.ndarray:
    """Evaluate w at an array of nonnegative integer lags. Vectorized."""
    t = np.asarray(lags, dtype=np.float64)
    if np.any(t < 0):
        raise InvalidValue("lags must be nonnegative")
    f = spec.family
    if f == "default_cauchy":
        out = 1.0 / (1.0 + t * t) - 1.0
    elif f == "algebraic":
        out = (1.0 + t) ** (-spec.beta) - 1.0
    elif f == "geometric":
        out = spec.rho**t - 1.0
    elif f == "exp_decay":
        out = np.exp(-((t / spec.lam) ** 2)) - 1.0
    elif f == "cosine":
        out = np.cos(2.0 * np.pi * t / spec.l) - 1.0
    elif f == "abs_cosine":
        out = np.abs(np.cos(np.pi * t / spec.l)) - 1.0
    elif f == "fourier":
        out = np.zeros_like(t)
        for a, l in spec.terms:
            out += a * np.cos(2.0 * np.pi * t / l)
        out -= 1.0
    else:  # mixed
        prox = np.zeros_like(t)
        nz = t > 0
        prox[nz] = t[nz] ** (-spec.beta) - 1.0
        out = spec.alpha * prox + (1.0 - spec.alpha) * (
            np.cos(2.0 * np.pi * t / spec.l) - 1.0
        )
    # w(0) = 0 must hold exactly, not just to rounding (fourier coefficients
    # summing to 1-1e-16 would otherwise leak through)
    return np.where(t == 0, 0.0, out)


def weight_evaluate(spec: WeightSpec, lag: Union[int, float]) -> float:
    """w(lag) for a single nonnegative integer lag."""
    return float(weight_profile(spec, np.asarray([lag]))[0])


_SCALAR_KEYS = {
    "algebraic": {"beta": "beta"},
    "geometric": {"rho": "rho"},
    "exp_decay": {"lambda": "lam", "lam": "lam"},
    "cosine": {"l": "l"},
    "abs_cosine": {"l": "l"},
    "mixed": {"alpha": "alpha", "beta": "beta", "l": "l"},
}


def _parse_kv(part: str, where: str) -> Tuple[str, float]:
    if "=" not in part:
        raise ParseError(f"expected key=value in {where}, got {part!r}")
    key, _, raw = part.partition("=")
    key = key.strip()
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"parameter {key!r} has non-numeric value {raw!r}") from None
    return key, value


def parse_weight_spec(text: str) -> WeightSpec:
    """Parse the `family[:key=value,...]` grammar.

    `default` is an alias for default_cauchy. Fourier terms are
    semicolon-separated groups: `fourier:alpha=0.5,l=4;alpha=0.5,l=6`.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty weight spec")
    family, sep, rest = text.partition(":")
    family = family.strip()
    if family == "default":
        family = "default_cauchy"
    if family not in FAMILIES:
        raise ParseError(f"unknown weight family {family!r}")
    if family in ("default_cauchy",):
        if sep and rest.strip():
            raise ParseError(f"{family} takes no parameters, got {rest!r}")
        return WeightSpec(family)
    if not sep or not rest.strip():
        raise ParseError(f"{family} requires parameters, e.g. from --help")
    if family == "fourier":
        terms = []
        for group in rest.split(";"):
            seen = {}
            for part in group.split(","):
                key, value = _parse_kv(part, "fourier term")
                if key not in ("alpha", "l"):
                    raise ParseError(f"fourier term has unknown key {key!r}")
                if key in seen:
                    raise ParseError(f"fourier term repeats key {key!r}")
                seen[key] = value
            if set(seen) != {"alpha", "l"}:
                raise ParseError("each fourier term needs alpha=.. and l=..")
            terms.append((seen["alpha"], seen["l"]))
        return WeightSpec("fourier", terms=tuple(terms))
    keymap = _SCALAR_KEYS[family]
    kwargs = {}
    for part in rest.split(","):
        key, value = _parse_kv(part, f"{family} spec")
        if key not in keymap:
            raise ParseError(f"{family} has no parameter {key!r}")
        attr = keymap[key]
        if attr in kwargs:
            raise ParseError(f"{family} repeats parameter {key!r}")
        kwargs[attr] = value
    return WeightSpec(family, **kwargs)


def weight_spec_from_json_obj(obj: dict) -> WeightSpec:
    """Inverse of :meth:`WeightSpec.to_json_obj` (config-file form)."""
    if not isinstance(obj, dict) or "family" not in obj:
        raise ParseError("weight JSON object needs a 'family' field")
    family = obj["family"]
    if family == "default":
        family = "default_cauchy"
    kwargs = {}
    for key in ("beta", "rho", "lam", "l", "alpha"):
        if key in obj:
            kwargs[key] = float(obj[key])
    if "lambda" in obj:
        kwargs["lam"] = float(obj["lambda"])
    if "terms" in obj:
        kwargs["terms"] = tuple((float(a), float(l)) for a, l in obj["terms"])
    if family not in FAMILIES:
        raise ParseError(f"unknown weight family {family!r}")
    return WeightSpec(family, **kwargs)
