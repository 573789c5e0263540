"""Hamming-ball coverings of the skew-shift on the d-torus.

F(x_1, ..., x_d) = (x_1 + alpha, x_2 + x_1, ..., x_d + x_{d-1}) mod 1. A point is
coded by the partition cells of its first n iterates, the partition being the
q^d axis-aligned cubes of side 1/q.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.stats import chisquare

from config import get_logger
from models import CodingConfig, SpanningEstimate, TorusReport

from ._errors import CodeLengthError, InvalidParameterError
from .dynamics import fit_loglog

logger = get_logger("slowentropy.torus_coding")

MIN_CODE_LENGTH = 10


@dataclass(frozen=True)
class TorusOrbitCoding:
    """A starting point and the cell indices of its first n iterates."""

    point: tuple[float, ...]
    code: tuple[int, ...]


def skew_shift(points: npt.ArrayLike, alpha: float) -> npt.NDArray[np.float64]:
    """One step of the skew-shift on each row."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty_like(x)
    out[:, 0] = x[:, 0] + alpha
    out[:, 1:] = x[:, 1:] + x[:, :-1]
    return np.mod(out, 1.0)


def _cells(x: npt.NDArray[np.float64], q: int) -> npt.NDArray[np.int64]:
    """Cell index sum_i floor(q x_i) q^i for each row."""
    digits = np.minimum(np.floor(x * q).astype(np.int64), q - 1)
    weights = q ** np.arange(x.shape[1], dtype=np.int64)
    return digits @ weights


def orbit_codes(points: npt.ArrayLike, cfg: CodingConfig, n: int | None = None) -> npt.NDArray[np.int64]:
    """Codes of length n (default cfg.n) for every row of ``points``."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[1] != cfg.d:
        raise InvalidParameterError(f"points must have {cfg.d} coordinates")
    length = cfg.n if n is None else n
    codes = np.empty((x.shape[0], length), dtype=np.int64)
    x = np.mod(x, 1.0)
    for k in range(length):
        codes[:, k] = _cells(x, cfg.q)
        x = skew_shift(x, cfg.alpha)
    return codes


def orbit_code(point: Sequence[float], cfg: CodingConfig) -> TorusOrbitCoding:
    """Code of a single point; x_0 itself is the first recorded iterate."""
    code = orbit_codes([list(point)], cfg)[0]
    return TorusOrbitCoding(point=tuple(float(v) for v in point), code=tuple(int(c) for c in code))


def hamming(a: TorusOrbitCoding | Sequence[int], b: TorusOrbitCoding | Sequence[int]) -> float:
    """Fraction of positions where two codes differ."""
    if isinstance(a, TorusOrbitCoding):
        a = a.code
    if isinstance(b, TorusOrbitCoding):
        b = b.code
    if len(a) != len(b):
        raise CodeLengthError(len(a), len(b))
    if not a:
        return 0.0
    return float(np.mean(np.asarray(a) != np.asarray(b)))


def _sample_points(cfg: CodingConfig) -> npt.NDArray[np.float64]:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(cfg.seed, spawn_key=(0,))))
    return rng.random((cfg.samples, cfg.d))


class _BlockIndex:
    """Rows sharing an exact block of cells with a given row.

    Two codes at Hamming distance below ``radius`` differ in at most
    floor(radius * n) positions, so they agree on one of floor(radius * n) + 1
    disjoint blocks. Only rows sharing a block can be that close.
    """

    def __init__(self, codes: npt.NDArray[np.int64], radius: float) -> None:
        rows, length = codes.shape
        blocks = int(radius * length) + 1
        self._rows = rows
        self._exhaustive = blocks > length
        self._labels: list[npt.NDArray[np.intp]] = []
        self._members: list[npt.NDArray[np.intp]] = []
        self._starts: list[npt.NDArray[np.intp]] = []
        if self._exhaustive:
            return
        for cols in np.array_split(np.arange(length), blocks):
            _, labels = np.unique(codes[:, cols], axis=0, return_inverse=True)
            labels = labels.ravel()
            self._labels.append(labels)
            self._members.append(np.argsort(labels, kind="stable"))
            self._starts.append(np.concatenate([[0], np.cumsum(np.bincount(labels))]))

    def candidates(self, idx: int) -> npt.NDArray[np.intp]:
        if self._exhaustive:
            return np.arange(self._rows)
        parts = []
        for labels, members, starts in zip(self._labels, self._members, self._starts):
            label = labels[idx]
            parts.append(members[starts[label] : starts[label + 1]])
        return np.unique(np.concatenate(parts))


def _greedy_cover(codes: npt.NDArray[np.int64], epsilon: float) -> tuple[list[int], int]:
    """Centers chosen in sample order until (1 - epsilon) of the samples are covered."""
    total = codes.shape[0]
    target = math.ceil((1 - epsilon) * total)
    index = _BlockIndex(codes, epsilon)
    uncovered = np.ones(total, dtype=bool)
    covered = 0
    centers: list[int] = []
    for idx in range(total):
        if covered >= target:
            break
        if not uncovered[idx]:
            continue
        candidates = index.candidates(idx)
        candidates = candidates[uncovered[candidates]]
        dist = (codes[candidates] != codes[idx]).mean(axis=1)
        hit = candidates[dist < epsilon]
        uncovered[hit] = False
        covered += hit.size
        centers.append(idx)
    return centers, covered


def _separated_subset(codes: npt.NDArray[np.int64], centers: Sequence[int], epsilon: float) -> int:
    """Size of a greedy 2 epsilon-separated subset of the greedy centers.

    An epsilon-ball holds at most one point of a 2 epsilon-separated set, so the
    result bounds from below the number of epsilon-balls needed for the centers
    and never exceeds the greedy count. It is not a maximal separated set over
    all samples.
    """
    index = _BlockIndex(codes, 2 * epsilon)
    chosen = np.zeros(codes.shape[0], dtype=bool)
    for idx in centers:
        near = index.candidates(idx)
        near = near[chosen[near]]
        if near.size and ((codes[near] != codes[idx]).mean(axis=1) < 2 * epsilon).any():
            continue
        chosen[idx] = True
    return int(chosen.sum())


def spanning_count(cfg: CodingConfig, codes: npt.NDArray[np.int64] | None = None) -> SpanningEstimate:
    """Greedy Hamming covering count S(n, epsilon) and a separated lower estimate."""
    if cfg.n < MIN_CODE_LENGTH:
        raise InvalidParameterError(f"code length must be at least {MIN_CODE_LENGTH}, got {cfg.n}")
    if codes is None:
        codes = orbit_codes(_sample_points(cfg), cfg)
    centers, covered = _greedy_cover(codes, cfg.epsilon)
    separated = _separated_subset(codes, centers, cfg.epsilon)
    estimate = SpanningEstimate(
        n=codes.shape[1],
        greedy=len(centers),
        separated=separated,
        covered=covered / codes.shape[0],
    )
    logger.debug("Spanning count", n=estimate.n, greedy=estimate.greedy, separated=separated)
    return estimate


def empirical_slow_entropy(cfg: CodingConfig, n_grid: Sequence[int]) -> TorusReport:
    """Spanning counts over increasing code lengths and the log-log slope.

    All code lengths share the same sample of starting points; shorter codes
    are prefixes of the longest one.
    """
    grid = [int(n) for n in n_grid]
    if len(grid) < 4 or any(a >= b for a, b in zip(grid, grid[1:])):
        raise InvalidParameterError("n_grid needs at least four increasing lengths")
    if grid[0] < MIN_CODE_LENGTH:
        raise InvalidParameterError(f"code lengths must be at least {MIN_CODE_LENGTH}")
    full = orbit_codes(_sample_points(cfg), cfg, n=grid[-1])
    estimates = [spanning_count(cfg.model_copy(update={"n": n}), full[:, :n]) for n in grid]
    fit = fit_loglog(grid, [e.greedy for e in estimates])
    predicted = cfg.d * (cfg.d - 1) / 2
    logger.info("Torus slope fitted", d=cfg.d, exponent=fit.exponent, predicted=predicted)
    return TorusReport(coding=cfg, estimates=estimates, fit=fit, predicted_exponent=predicted)


def cell_histogram(cfg: CodingConfig, starts: int, steps: int) -> npt.NDArray[np.int64]:
    """Counts of visits to each of the q^d cells along ``starts`` orbits of ``steps`` steps."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(cfg.seed, spawn_key=(1,))))
    codes = orbit_codes(rng.random((starts, cfg.d)), cfg, n=steps)
    return np.bincount(codes.ravel(), minlength=cfg.q**cfg.d)


def equidistribution_pvalue(cfg: CodingConfig, starts: int, steps: int) -> float:
    """chi-square p-value of the visit histogram against the uniform distribution."""
    counts = cell_histogram(cfg, starts, steps)
    return float(chisquare(counts).pvalue)
