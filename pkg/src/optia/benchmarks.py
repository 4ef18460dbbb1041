"""Pseudo-Boolean benchmark functions over fixed-length bit strings.

All functions are maximized.  A :class:`BenchmarkSpec` pins a function
together with its instance parameters, validates them eagerly, and exposes
the packed scalar form consumed by the jitted kernels plus the known
optimum (point and value).  The optimum *value* is computed by running the
known optimum *point* through the same jitted evaluation path used for
every other point, so optimum detection by float equality is exact.

Functions
---------
``onemax``       number of ones.
``zeromax``      number of zeros.
``leadingones``  length of the leading all-ones prefix.
``jump``         OneMax plus k, with a gap of deceptive slope just below
                 the all-ones point (parameter ``k``).
``cliff``        OneMax with a fitness drop of d - 1/2 after n-d ones
                 (parameter ``d``).
``simpletrap``   two linear slopes meeting at |x|_1 = z; the global
                 optimum is the all-zeros point at value ``a``, the trap
                 is the all-ones point at value ``b``
                 (parameters ``z``, ``a``, ``b`` with b = n-z-1 and
                 3b/2 <= a <= 2b).
``hiddenpath``   OneMax-like landscape with a hidden path of low-ones
                 points 1^{n-k} 0^k (5 <= k <= log2(n) + 1) leading to an
                 optimum just above the all-but-one-ones local optima
                 (parameter ``epsilon`` in (0,1); n a power of two, >= 32).
``hypertrap``    a landscape whose n^3-valued trap region (dense points
                 far from every long all-ones prefix) captures hill
                 climbers, while the all-ones optimum at n^4 is reachable
                 along prefix points 1^i 0^{n-i} (parameter ``gamma`` in
                 (0, 1/8]; n divisible by 4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from . import _kernels as _k
from .core import BitString

__all__ = [
    "FUNCTION_IDS",
    "BenchmarkSpec",
    "parse_benchmark",
    "onemax",
    "zeromax",
    "leadingones",
    "jump",
    "cliff",
    "simple_trap",
    "hidden_path",
    "hypertrap",
    "min_sp_distance",
]

FUNCTION_IDS = (
    "onemax",
    "zeromax",
    "leadingones",
    "jump",
    "cliff",
    "simpletrap",
    "hiddenpath",
    "hypertrap",
)

_BID = {
    "onemax": _k.B_ONEMAX,
    "zeromax": _k.B_ZEROMAX,
    "leadingones": _k.B_LEADINGONES,
    "jump": _k.B_JUMP,
    "cliff": _k.B_CLIFF,
    "simpletrap": _k.B_SIMPLETRAP,
    "hiddenpath": _k.B_HIDDENPATH,
    "hypertrap": _k.B_HYPERTRAP,
}

# which optional parameters each function accepts
_PARAMS = {
    "onemax": (),
    "zeromax": (),
    "leadingones": (),
    "jump": ("k",),
    "cliff": ("d",),
    "simpletrap": ("z", "a", "b"),
    "hiddenpath": ("epsilon",),
    "hypertrap": ("gamma",),
}

_PARAM_ORDER = ("k", "d", "gamma", "epsilon", "z", "a", "b")


@dataclass(frozen=True)
class BenchmarkSpec:
    """A benchmark function instance: function id, length n, parameters.

    Validation happens at construction; optional parameters not used by
    the chosen function are rejected, missing defaultable parameters are
    materialized (``epsilon`` = 0.5; ``z`` = floor(n/4), ``b`` = n-z-1,
    ``a`` = 2b), and required ones (``k``, ``d``, ``gamma``) must be given.
    """

    function_id: str
    n: int
    k: Optional[int] = None
    d: Optional[int] = None
    gamma: Optional[float] = None
    epsilon: Optional[float] = None
    z: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None

    def __post_init__(self) -> None:
        fid = str(self.function_id).lower()
        object.__setattr__(self, "function_id", fid)
        if fid not in FUNCTION_IDS:
            raise ValueError(f"unknown benchmark function {self.function_id!r}")
        n = int(self.n)
        if n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "n", n)
        allowed = _PARAMS[fid]
        for name in _PARAM_ORDER:
            if getattr(self, name) is not None and name not in allowed:
                raise ValueError(f"parameter {name} is not valid for {fid}")
        getattr(self, f"_check_{fid}")()

    # -- per-function validation and defaults --------------------------
    def _check_onemax(self) -> None:
        pass

    def _check_zeromax(self) -> None:
        pass

    def _check_leadingones(self) -> None:
        pass

    def _check_jump(self) -> None:
        if self.k is None:
            raise ValueError("jump requires parameter k")
        k = int(self.k)
        object.__setattr__(self, "k", k)
        if not 1 <= k <= self.n:
            raise ValueError(f"k out of range for jump: need 1 <= k <= n, got k={k}, n={self.n}")

    def _check_cliff(self) -> None:
        if self.d is None:
            raise ValueError("cliff requires parameter d")
        d = int(self.d)
        object.__setattr__(self, "d", d)
        if not 1 <= d <= self.n:
            raise ValueError(f"d out of range for cliff: need 1 <= d <= n, got d={d}, n={self.n}")

    def _check_simpletrap(self) -> None:
        n = self.n
        z = float(n // 4) if self.z is None else float(self.z)
        if not 1 <= z <= n - 2:
            raise ValueError(f"z out of range for simpletrap: need 1 <= z <= n-2, got z={z}")
        b = float(n) - z - 1.0 if self.b is None else float(self.b)
        if b != float(n) - z - 1.0:
            raise ValueError(f"simpletrap requires b = n - z - 1, got b={b} with n={n}, z={z}")
        a = 2.0 * b if self.a is None else float(self.a)
        if not 1.5 * b <= a <= 2.0 * b:
            raise ValueError(f"a out of range for simpletrap: need 3b/2 <= a <= 2b, got a={a}, b={b}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def _check_hiddenpath(self) -> None:
        n = self.n
        if n < 32 or (n & (n - 1)) != 0:
            raise ValueError(f"hiddenpath requires n to be a power of two with n >= 32, got n={n}")
        eps = 0.5 if self.epsilon is None else float(self.epsilon)
        if not 0.0 < eps < 1.0:
            raise ValueError(f"epsilon out of range for hiddenpath: need 0 < epsilon < 1, got {eps}")
        object.__setattr__(self, "epsilon", eps)

    def _check_hypertrap(self) -> None:
        n = self.n
        if n % 4 != 0:
            raise ValueError(f"hypertrap requires n divisible by 4, got n={n}")
        if self.gamma is None:
            raise ValueError("hypertrap requires parameter gamma")
        g = float(self.gamma)
        if not 0.0 < g <= 0.125:
            raise ValueError(f"gamma out of range for hypertrap: need 0 < gamma <= 1/8, got {g}")
        object.__setattr__(self, "gamma", g)

    # -- packed scalar form for the kernels -----------------------------
    def packed(self) -> Tuple[int, int, int, float, float, float]:
        """(bid, n, ip1, fp1, fp2, fp3) consumed by the jitted kernels."""
        fid = self.function_id
        bid = _BID[fid]
        ip1 = 0
        fp1 = fp2 = fp3 = 0.0
        if fid == "jump":
            ip1 = int(self.k)
        elif fid == "cliff":
            ip1 = int(self.d)
        elif fid == "simpletrap":
            fp1, fp2, fp3 = float(self.z), float(self.a), float(self.b)
        elif fid == "hiddenpath":
            ip1 = int(math.log2(self.n))
            fp1 = float(self.epsilon)
        elif fid == "hypertrap":
            ip1 = int(math.ceil(self.gamma * self.n))
        return (bid, self.n, ip1, fp1, fp2, fp3)

    # -- evaluation ------------------------------------------------------
    def evaluate_bits(self, bits: np.ndarray, ones: int) -> float:
        """Raw (uncounted) evaluation of a 0/1 uint8 array of length n."""
        bid, n, ip1, fp1, fp2, fp3 = self.packed()
        if bits.size != n:
            raise ValueError(f"genotype length {bits.size} does not match benchmark n={n}")
        return float(_k.bench_eval(bid, n, ip1, fp1, fp2, fp3, bits, ones))

    def __call__(self, x: BitString) -> float:
        return self.evaluate_bits(x.array, x.count_ones())

    @cached_property
    def optimum_point(self) -> BitString:
        """A global optimum of this instance."""
        fid, n = self.function_id, self.n
        if fid in ("onemax", "leadingones", "jump", "cliff", "hypertrap"):
            return BitString.ones(n)
        if fid in ("zeromax", "simpletrap"):
            return BitString.zeros(n)
        # hiddenpath: 1^{n-L-1} 0^{L+1}
        L = int(math.log2(n))
        arr = np.ones(n, dtype=np.uint8)
        arr[n - L - 1 :] = 0
        return BitString(arr)

    @cached_property
    def optimum_value(self) -> float:
        """f at the optimum, computed through the jitted evaluation path."""
        opt = self.optimum_point
        bid, n, ip1, fp1, fp2, fp3 = self.packed()
        return float(_k.bench_eval(bid, n, ip1, fp1, fp2, fp3, opt.array, opt.count_ones()))

    def is_optimum(self, x: BitString) -> bool:
        return self(x) == self.optimum_value

    # -- text form ---------------------------------------------------------
    def to_text(self) -> str:
        """Canonical one-line form, e.g. ``jump n=50 k=10`` (round-trips
        through :func:`parse_benchmark`, defaults materialized)."""
        parts = [self.function_id, f"n={self.n}"]
        for name in _PARAM_ORDER:
            val = getattr(self, name)
            if val is not None:
                parts.append(f"{name}={val!r}" if isinstance(val, float) else f"{name}={val}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        out = {"function_id": self.function_id, "n": self.n}
        for name in _PARAM_ORDER:
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkSpec":
        known = {"function_id", "n", *_PARAM_ORDER}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown benchmark fields: {sorted(extra)}")
        if "function_id" not in data or "n" not in data:
            raise ValueError("benchmark dict requires function_id and n")
        return cls(**data)


def parse_benchmark(text: str) -> BenchmarkSpec:
    """Parse the one-line form: ``<function> n=<int> [key=value ...]``."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty benchmark description")
    fid = tokens[0].lower()
    kwargs: dict = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise ValueError(f"malformed benchmark token {tok!r} (expected key=value)")
        key, _, val = tok.partition("=")
        if key in ("n", "k", "d"):
            kwargs[key] = int(val)
        elif key in ("gamma", "epsilon", "z", "a", "b"):
            kwargs[key] = float(val)
        else:
            raise ValueError(f"unknown benchmark parameter {key!r}")
    if "n" not in kwargs:
        raise ValueError("benchmark description requires n=<int>")
    return BenchmarkSpec(function_id=fid, **kwargs)


# -- plain-function entry points -------------------------------------------


def onemax(x: BitString) -> float:
    """Number of ones in x."""
    return float(x.count_ones())


def zeromax(x: BitString) -> float:
    """Number of zeros in x."""
    return float(x.count_zeros())


def leadingones(x: BitString) -> float:
    """Length of the maximal all-ones prefix of x."""
    return BenchmarkSpec("leadingones", len(x))(x)


def jump(x: BitString, k: int) -> float:
    """Jump function with gap parameter k."""
    return BenchmarkSpec("jump", len(x), k=k)(x)


def cliff(x: BitString, d: int) -> float:
    """Cliff function with drop parameter d."""
    return BenchmarkSpec("cliff", len(x), d=d)(x)


def simple_trap(x: BitString, z: float = None, a: float = None, b: float = None) -> float:
    """Two-slope trap; optimum at the all-zeros point with value a."""
    return BenchmarkSpec("simpletrap", len(x), z=z, a=a, b=b)(x)


def hidden_path(x: BitString, epsilon: float = 0.5) -> float:
    """Hidden-path landscape with path reward parameter epsilon."""
    return BenchmarkSpec("hiddenpath", len(x), epsilon=epsilon)(x)


def hypertrap(x: BitString, gamma: float) -> float:
    """Prefix-path trap landscape with distance threshold ceil(gamma*n)."""
    return BenchmarkSpec("hypertrap", len(x), gamma=gamma)(x)


def min_sp_distance(x: BitString) -> int:
    """Minimum Hamming distance from x to the long-prefix points
    1^i 0^{n-i} with n/2 <= i <= n-1."""
    return int(_k.min_sp_dist(x.array, x.count_ones(), len(x)))
