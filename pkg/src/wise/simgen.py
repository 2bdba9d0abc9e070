"""Seeded generators for the null and alternative simulation models.

Null families draw i.i.d. rows; alternatives add serial structure:

    iid_normal         rows ~ N(0, I_p)
    iid_normal_ar_cov  rows ~ N(0, Sigma), Sigma_ij = rho^|i-j| (rho = 0.6)
    iid_t1             multivariate t with 1 df: N(0, I_p) / chi(1 df) per row
    iid_lognormal      exp of N(0, I_p), elementwise
    var1               X_t = A X_{t-1} + e_t
    svar               X_t = A X_{t-l} + B X_{t-1} - A B X_{t-l-1} + e_t
    garch              X_t = h_t o e_t,  h_t^2 = b + A X_{t-1}^2 + B h_{t-1}^2
    nma2               X_t = e_t o e_{t-1} o e_{t-2}

with e_t i.i.d. N(0, I_p) throughout and o the elementwise product. The
var1 coefficient is either coef_scale * I or a banded random matrix with
entries U(a_low, a_high) for |i-j| <= floor(p / band_div); svar draws A and
B on the same kind of band; garch uses diagonal A, B with diagonals
U(0, garch_a_high) and U(0, garch_b_high) and constant term garch_const.

Recursive families start from the zero state (h_0^2 = b for garch) and
discard ``burn_in`` initial steps; i.i.d. families and the 2-dependent nma2
need no burn-in and ignore the field. Coefficient matrices are drawn from
the spec's seed stream before any innovations, once per series.

Randomness comes from numpy's PCG64 via ``default_rng(seed)``; normal
variates use its ziggurat sampler. Fixed seed means bit-identical output
regardless of thread count, on any platform numpy supports.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import BadModelParam, ParseError
from .types import ObservationSeries

FAMILIES = (
    "iid_normal",
    "iid_normal_ar_cov",
    "iid_t1",
    "iid_lognormal",
    "var1",
    "svar",
    "garch",
    "nma2",
)

# preset name -> (family, family-specific kwargs)
_SETTINGS = {
    "setting1.1": ("iid_normal", {}),
    "setting1.2": ("iid_normal_ar_cov", {"rho": 0.6}),
    "setting1.3": ("iid_t1", {}),
    "setting1.4": ("iid_lognormal", {}),
    "setting2.1": ("var1", {"coef_scale": 0.015}),
    "setting2.2": ("var1", {"a_low": -0.01, "a_high": 0.04, "band_div": 50.0}),
    "setting2.3": ("var1", {"a_low": -0.04, "a_high": 0.015, "band_div": 20.0}),
    "setting3.1": (
        "svar",
        {
            "a_low": -0.01,
            "a_high": 0.03,
            "b_low": -0.01,
            "b_high": 0.04,
            "band_div": 50.0,
            "seasonal_lag": 4,
        },
    ),
    "setting3.2": (
        "svar",
        {
            "a_low": -0.01,
            "a_high": 0.03,
            "b_low": -0.01,
            "b_high": 0.04,
            "band_div": 50.0,
            "seasonal_lag": 12,
        },
    ),
    "setting4": ("garch", {}),
    "setting5": ("nma2", {}),
}


@dataclass(frozen=True)
class ModelSpec:
    """One fully parameterized data-generating model."""

    family: str
    n: int
    p: int
    seed: int = 0
    burn_in: int = 200
    label: str = ""
    rho: float = 0.6
    coef_scale: Optional[float] = None
    a_low: Optional[float] = None
    a_high: Optional[float] = None
    b_low: Optional[float] = None
    b_high: Optional[float] = None
    band_div: Optional[float] = None
    seasonal_lag: Optional[int] = None
    garch_a_high: Optional[float] = None
    garch_b_high: Optional[float] = None
    garch_const: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadModelParam(f"unknown model family {self.family!r}")
        if self.n < 1 or self.p < 1:
            raise BadModelParam(f"n and p must be positive, got n={self.n}, p={self.p}")
        if self.burn_in < 0:
            raise BadModelParam(f"burn_in must be nonnegative, got {self.burn_in}")
        if not 0 <= int(self.seed) < 2**64:
            raise BadModelParam("seed must be a 64-bit unsigned integer")
        getattr(self, f"_check_{self.family}", lambda: None)()

    def _check_iid_normal_ar_cov(self):
        if not -1.0 < self.rho < 1.0:
            raise BadModelParam(f"rho must lie in (-1,1), got {self.rho}")

    def _band(self, which: str):
        low = getattr(self, f"{which}_low")
        high = getattr(self, f"{which}_high")
        if low is None or high is None or self.band_div is None:
            raise BadModelParam(f"{self.family} needs {which}_low, {which}_high, band_div")
        if low > high:
            raise BadModelParam(f"{which}_low must not exceed {which}_high")
        if not self.band_div > 0:
            raise BadModelParam(f"band_div must be positive, got {self.band_div}")

    def _check_var1(self):
        if self.coef_scale is not None:
            if not 0.0 <= self.coef_scale < 1.0:
                raise BadModelParam(f"coef_scale must lie in [0,1), got {self.coef_scale}")
        else:
            self._band("a")

    def _check_svar(self):
        self._band("a")
        self._band("b")
        if self.seasonal_lag is None or self.seasonal_lag < 1:
            raise BadModelParam(f"seasonal_lag must be >= 1, got {self.seasonal_lag}")

    def _check_garch(self):
        # fill setting-4 defaults for anything left unset
        if self.garch_a_high is None:
            object.__setattr__(self, "garch_a_high", 0.15)
        if self.garch_b_high is None:
            object.__setattr__(self, "garch_b_high", 0.4)
        if self.garch_const is None:
            object.__setattr__(self, "garch_const", 0.002)
        if self.garch_a_high < 0 or self.garch_b_high < 0:
            raise BadModelParam("garch coefficient ranges must be nonnegative")
        if not self.garch_a_high + self.garch_b_high < 1.0:
            raise BadModelParam("garch needs garch_a_high + garch_b_high < 1 for stationarity")
        if not self.garch_const > 0:
            raise BadModelParam(f"garch_const must be positive, got {self.garch_const}")

    def to_json_obj(self) -> dict:
        obj = {
            "family": self.family,
            "n": self.n,
            "p": self.p,
            "seed": int(self.seed),
            "burn_in": self.burn_in,
        }
        if self.label:
            obj["label"] = self.label
        if self.family == "iid_normal_ar_cov":
            obj["rho"] = self.rho
        for key in (
            "coef_scale",
            "a_low",
            "a_high",
            "b_low",
            "b_high",
            "band_div",
            "seasonal_lag",
            "garch_a_high",
            "garch_b_high",
            "garch_const",
        ):
            val = getattr(self, key)
            if val is not None:
                obj[key] = val
        return obj


def from_setting(name: str, n: int, p: int, seed: int = 0, burn_in: int = 200, **overrides) -> ModelSpec:
    """Build a ModelSpec from a preset name like 'setting2.1'.

    Keyword overrides replace preset parameters, e.g.
    ``from_setting('setting2.1', 100, 200, coef_scale=0.2)`` or the
    degenerate ``from_setting('setting4', 100, 200, garch_a_high=0.0,
    garch_b_high=0.0)``.
    """
    key = name.strip().lower()
    if key not in _SETTINGS:
        known = ", ".join(sorted(_SETTINGS))
        raise ParseError(f"unknown setting {name!r}; known: {known}")
    family, kwargs = _SETTINGS[key]
    merged = dict(kwargs)
    merged.update(overrides)
    return ModelSpec(family, n, p, seed=seed, burn_in=burn_in, label=key, **merged)


def model_spec_from_json_obj(obj: dict, n: Optional[int] = None, p: Optional[int] = None) -> ModelSpec:
    """ModelSpec from its JSON form; either a {"setting": ...} preset
    reference with overrides, or the full field form."""
    if not isinstance(obj, dict):
        raise ParseError("model JSON must be an object")
    obj = dict(obj)
    n = int(obj.pop("n", n if n is not None else 4))
    p = int(obj.pop("p", p if p is not None else 1))
    if "setting" in obj:
        name = obj.pop("setting")
        seed = int(obj.pop("seed", 0))
        burn_in = int(obj.pop("burn_in", 200))
        obj.pop("label", None)
        return from_setting(name, n, p, seed=seed, burn_in=burn_in, **obj)
    if "family" not in obj:
        raise ParseError("model JSON needs a 'setting' or 'family' field")
    return ModelSpec(n=n, p=p, **obj)


def _banded_uniform(rng, p: int, low: float, high: float, band_div: float) -> np.ndarray:
    """Random matrix with U(low, high) entries on |i-j| <= floor(p/band_div)."""
    width = int(p // band_div)
    a = rng.uniform(low, high, size=(p, p))
    idx = np.arange(p)
    mask = np.abs(idx[:, None] - idx[None, :]) <= width
    return np.where(mask, a, 0.0)


def generate(spec: ModelSpec) -> ObservationSeries:
    """Draw one series from the model; pure in (spec, seed)."""
    rng = np.random.default_rng(spec.seed)
    n, p = spec.n, spec.p
    fam = spec.family

    if fam == "iid_normal":
        data = rng.standard_normal((n, p))
    elif fam == "iid_normal_ar_cov":
        # AR(1) recursion across coordinates gives cov exactly rho^|i-j|
        z = rng.standard_normal((n, p))
        data = np.empty((n, p))
        data[:, 0] = z[:, 0]
        scale = np.sqrt(1.0 - spec.rho**2)
        for j in range(1, p):
            data[:, j] = spec.rho * data[:, j - 1] + scale * z[:, j]
    elif fam == "iid_t1":
        z = rng.standard_normal((n, p))
        denom = np.sqrt(rng.chisquare(1.0, size=(n, 1)))
        data = z / denom
    elif fam == "iid_lognormal":
        data = np.exp(rng.standard_normal((n, p)))
    elif fam == "var1":
        if spec.coef_scale is not None:
            a, c = None, spec.coef_scale
        else:
            a, c = _banded_uniform(rng, p, spec.a_low, spec.a_high, spec.band_div), 0.0
        total = n + spec.burn_in
        eps = rng.standard_normal((total, p))
        x = np.zeros(p)
        data = np.empty((n, p))
        for t in range(total):
            x = (c * x if a is None else a @ x) + eps[t]
            if t >= spec.burn_in:
                data[t - spec.burn_in] = x
    elif fam == "svar":
        a = _banded_uniform(rng, p, spec.a_low, spec.a_high, spec.band_div)
        b = _banded_uniform(rng, p, spec.b_low, spec.b_high, spec.band_div)
        ab = a @ b
        lag = spec.seasonal_lag
        total = n + spec.burn_in
        eps = rng.standard_normal((total, p))
        x = np.zeros((total, p))
        for t in range(total):
            acc = eps[t].copy()
            if t >= 1:
                acc += b @ x[t - 1]
            if t >= lag:
                acc += a @ x[t - lag]
            if t >= lag + 1:
                acc -= ab @ x[t - lag - 1]
            x[t] = acc
        data = x[spec.burn_in :]
    elif fam == "garch":
        a_diag = rng.uniform(0.0, spec.garch_a_high, size=p)
        b_diag = rng.uniform(0.0, spec.garch_b_high, size=p)
        const = np.full(p, spec.garch_const)
        total = n + spec.burn_in
        eps = rng.standard_normal((total, p))
        h2 = const.copy()
        data = np.empty((n, p))
        for t in range(total):
            if t > 0:
                h2 = const + a_diag * x * x + b_diag * h2
            x = np.sqrt(h2) * eps[t]
            if t >= spec.burn_in:
                data[t - spec.burn_in] = x
    else:  # nma2
        eps = rng.standard_normal((n + 2, p))
        data = eps[2:] * eps[1:-1] * eps[:-2]

    return ObservationSeries("vector", data)


def replicate_spec(spec: ModelSpec, seed: int, n: Optional[int] = None, p: Optional[int] = None) -> ModelSpec:
    """Copy of spec with a new seed (and optionally new n, p)."""
    kwargs = {"seed": int(seed)}
    if n is not None:
        kwargs["n"] = int(n)
    if p is not None:
        kwargs["p"] = int(p)
    return replace(spec, **kwargs)
