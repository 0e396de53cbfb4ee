"""Special functions, probability kernels and reproducible sampling.

Random streams
--------------
Every Monte Carlo repetition draws from its own :class:`RngStream`. A stream
is a NumPy ``Generator`` over the counter-based Philox-4x64 bit generator
whose 128-bit key is ``(master_seed, stream_id)``. Philox keys are
independent by construction, so distinct stream ids give independent
sequences, and a given ``(master_seed, stream_id)`` pair always replays the
same draws no matter which thread or process consumes it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

_MASK64 = (1 << 64) - 1

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_{2k} / (2k (2k - 1)) for k = 1..8
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN_Z = 15.0


@dataclass
class RngStream:
    """Seeded random stream identified by ``(master_seed, stream_id)``.

    Two streams built from the same pair produce byte-identical draws.
    """

    master_seed: int
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (0 <= self.master_seed <= _MASK64 and 0 <= self.stream_id <= _MASK64):
            raise DomainError("master_seed and stream_id must be unsigned 64-bit integers")
        bitgen = np.random.Philox(key=[self.master_seed, self.stream_id])
        self.generator = np.random.Generator(bitgen)

    def spawn(self, stream_id: int) -> "RngStream":
        """A fresh stream under the same master seed."""
        return RngStream(self.master_seed, stream_id)


@dataclass(frozen=True)
class BallSpec:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        if center.ndim != 1 or center.size < 1:
            raise DomainError("ball center must be a non-empty vector")
        if not self.radius > 0:
            raise DomainError(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", center)

    @property
    def dim(self) -> int:
        return self.center.size

    @classmethod
    def centered(cls, d: int, radius: float = 1.0) -> "BallSpec":
        return cls(np.zeros(d), radius)


def ln_gamma(z: float) -> float:
    """Natural logarithm of the gamma function for ``z > 0``.

    Uses the Stirling asymptotic series (eight Bernoulli corrections) for
    ``z >= 15`` and the upward recurrence ``Gamma(z + 1) = z Gamma(z)`` to
    reach that region from smaller arguments.
    """
    z = float(z)
    if not z > 0 or math.isinf(z):
        raise DomainError(f"ln_gamma requires a finite z > 0, got {z}")
    shift = 0.0
    if z < _STIRLING_MIN_Z:
        n = int(math.ceil(_STIRLING_MIN_Z - z))
        prod = 1.0
        for i in range(n):
            prod *= z + i
        shift = math.log(prod)
        z += n
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0.0
    for coeff in reversed(_STIRLING_COEFFS):
        series = series * inv2 + coeff
    series *= inv
    return (z - 0.5) * math.log(z) - z + _HALF_LOG_2PI + series - shift


def log_binomial_cdf(n: int, p: float, k: int) -> float:
    """``log P(U <= k)`` for ``U ~ Binomial(n, p)``; ``-inf`` when the mass is zero."""
    if n < 1 or k < 0:
        raise DomainError(f"binomial_cdf needs n >= 1 and k >= 0, got n={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p}")
    n = int(n)
    k = int(min(k, n))
    if k == n or p == 0.0:
        return 0.0
    if p == 1.0:
        return -math.inf

    # log pmf(i+1) = log pmf(i) + log((n - i) / (i + 1)) + log(p / (1 - p))
    log_odds = math.log(p) - math.log1p(-p)
    i = np.arange(k, dtype=float)
    steps = np.log(n - i) - np.log(i + 1.0) + log_odds
    terms = np.empty(k + 1)
    terms[0] = n * math.log1p(-p)
    np.cumsum(steps, out=terms[1:])
    terms[1:] += terms[0]
    peak = terms.max()
    # terms far below the peak cannot change the compensated sum of the bulk
    # beyond rounding, so they are added as a plain (pairwise) sum
    rel = terms - peak
    bulk = rel > -60.0
    total = math.fsum(np.exp(rel[bulk]).tolist()) + float(np.sum(np.exp(rel[~bulk])))
    return min(0.0, peak + math.log(total))


def binomial_cdf(n: int, p: float, k: int) -> float:
    """``P(U <= k)`` for ``U ~ Binomial(n, p)``, summed in log space.

    Examples
    --------
    >>> binomial_cdf(2, 0.5, 1)
    0.75
    """
    return math.exp(log_binomial_cdf(n, p, k))


def sample_uniform_ball(rng: RngStream, spec: BallSpec, size: int | None = None) -> np.ndarray:
    """Draw points uniformly in an l2 ball.

    Direction is a normalized standard Gaussian vector; the radius is
    ``r * U**(1/d)``. Returns shape ``(d,)`` when ``size`` is None, else
    ``(size, d)``.
    """
    d = spec.dim
    n = 1 if size is None else int(size)
    gen = rng.generator
    direction = gen.standard_normal((n, d))
    norms = np.linalg.norm(direction, axis=1, keepdims=True)
    # a zero Gaussian vector has probability zero; redraw rather than divide by it
    while np.any(norms == 0.0):
        bad = norms[:, 0] == 0.0
        direction[bad] = gen.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(direction, axis=1, keepdims=True)
    radius = spec.radius * gen.random((n, 1)) ** (1.0 / d)
    points = spec.center + direction / norms * radius
    return points[0] if size is None else points


def sample_gaussian(rng: RngStream, d: int, scale: float, center=None,
                    size: int | None = None) -> np.ndarray:
    """Isotropic Gaussian draws ``center + scale * N(0, I_d)``."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale}")
    center = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    if center.shape != (d,):
        raise DomainError(f"center must have shape ({d},), got {center.shape}")
    shape = (d,) if size is None else (int(size), d)
    return center + scale * rng.generator.standard_normal(shape)
