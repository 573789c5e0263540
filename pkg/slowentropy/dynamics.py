"""Divergence of nearby orbits on the cover and Bowen-ball volumes.

A displacement X is written in flow-oriented chain coordinates: for a chain
X_0, ..., X_m the frame vectors are Y_j = (-1)^j X_j, so that

    Ad(exp(-tU)) (sum_j a_j Y_j) = sum_j a_j(t) Y_j,
    a_j(t) = sum_{k >= j} t^(k-j) / (k-j)! a_k.

Double chains use the same triangular evolution on both components followed
by a rotation of angle alpha t. Norms are the max over chain coordinates and
the Euclidean norm on each rotating pair, so rotation never changes them.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial as P
from scipy.linalg import expm, logm

from config import get_logger, log_performance
from models import (
    BowenVolumeReport,
    BrudnyiSummary,
    ChainStructure,
    McConfig,
    NormEquivalence,
    SequenceConfig,
    SequenceVolumeReport,
    ShearingSummary,
    SlopeFit,
    SupMode,
    VolumeRow,
)

from ._errors import (
    DegenerateFitError,
    DimensionMismatchError,
    InvalidParameterError,
    LogChartError,
    NoSeparationError,
    ZeroAcceptanceError,
)
from .chains import Chain, DoubleChain, chain_basis, slow_entropy
from .exact_linalg import RatMatrix, ad_operator

logger = get_logger("slowentropy.dynamics")

FloatArray = npt.NDArray[np.float64]

Layout = tuple[tuple[int, ...], tuple[tuple[int, float], ...]]


def layout_of(structure: ChainStructure) -> Layout:
    """Single-chain depths and (depth, alpha) doubles, in coordinate order."""
    return structure.chain_depths, structure.doubles


def _dimension(layout: Layout) -> int:
    chains, doubles = layout
    return sum(m + 1 for m in chains) + sum(2 * (m + 1) for m, _ in doubles)


# ---- divergence states --------------------------------------------------


@dataclass(frozen=True, eq=False)
class DivergenceState:
    """Chain coordinates of a displacement.

    ``chains[i]`` holds a_0..a_m of the i-th chain; ``doubles[i]`` holds the
    two component arrays (b, c) and the speed alpha of the i-th double chain.
    """

    chains: tuple[FloatArray, ...]
    doubles: tuple[tuple[FloatArray, FloatArray, float], ...] = ()

    @property
    def layout(self) -> Layout:
        return (
            tuple(len(a) - 1 for a in self.chains),
            tuple((len(b) - 1, alpha) for b, _, alpha in self.doubles),
        )

    @classmethod
    def from_flat(cls, layout: Layout, vector: npt.ArrayLike) -> DivergenceState:
        """Split a flat coordinate vector; pairs are interleaved (b_j, c_j)."""
        v = np.asarray(vector, dtype=float)
        if v.shape != (_dimension(layout),):
            raise DimensionMismatchError("from_flat", (_dimension(layout), 1), (v.size, 1))
        chain_depths, doubles = layout
        offset = 0
        chains = []
        for m in chain_depths:
            chains.append(v[offset : offset + m + 1].copy())
            offset += m + 1
        pairs = []
        for m, alpha in doubles:
            block = v[offset : offset + 2 * (m + 1)]
            pairs.append((block[0::2].copy(), block[1::2].copy(), float(alpha)))
            offset += 2 * (m + 1)
        return cls(chains=tuple(chains), doubles=tuple(pairs))

    def flat(self) -> FloatArray:
        parts: list[FloatArray] = list(self.chains)
        for b, c, _ in self.doubles:
            block = np.empty(2 * len(b))
            block[0::2] = b
            block[1::2] = c
            parts.append(block)
        return np.concatenate(parts) if parts else np.zeros(0)

    def norm(self) -> float:
        """Max over chain coordinates and Euclidean pair norms."""
        values = [float(np.abs(a).max()) for a in self.chains if len(a)]
        values += [float(np.hypot(b, c).max()) for b, c, _ in self.doubles if len(b)]
        return max(values, default=0.0)


def _shear_matrix(m: int, t: float) -> FloatArray:
    """Upper triangular exp(t J): entry (j, k) = t^(k-j)/(k-j)! for k >= j."""
    out = np.zeros((m + 1, m + 1))
    for j in range(m + 1):
        for k in range(j, m + 1):
            out[j, k] = t ** (k - j) / math.factorial(k - j)
    return out


def evolve(state: DivergenceState, t: float) -> DivergenceState:
    """Closed-form coordinates of Ad(exp(-tU)) applied to the displacement."""
    chains = tuple(_shear_matrix(len(a) - 1, t) @ a for a in state.chains)
    doubles = []
    for b, c, alpha in state.doubles:
        shear = _shear_matrix(len(b) - 1, t)
        bt, ct = shear @ b, shear @ c
        cos, sin = math.cos(alpha * t), math.sin(alpha * t)
        doubles.append((cos * bt - sin * ct, sin * bt + cos * ct, alpha))
    return DivergenceState(chains=chains, doubles=tuple(doubles))


def chain_frame(chains: Sequence[Chain], doubles: Sequence[DoubleChain]) -> FloatArray:
    """Columns Y_j = (-1)^j X_j in the order used by DivergenceState.from_flat."""
    columns: list[FloatArray] = []
    for chain in chains:
        for j, x in enumerate(chain.vectors):
            columns.append((-1) ** j * np.array([float(a) for a in x]))
    for double in doubles:
        for j, (x0, x1) in enumerate(double.vectors):
            columns.append((-1) ** j * np.asarray(x0))
            columns.append((-1) ** j * np.asarray(x1))
    return np.column_stack(columns)


def _basis_arrays(basis: Sequence[RatMatrix]) -> FloatArray:
    return np.column_stack([b.to_float().ravel() for b in basis])


def evolve_matrix_check(
    basis: Sequence[RatMatrix],
    u: RatMatrix,
    x0: Sequence[float],
    t: float,
    tol: float | None = None,
) -> float:
    """Largest coordinate gap between the closed form and log(e^{-tU} e^{X0} e^{tU})."""
    x = np.asarray(x0, dtype=float)
    if not x.any():
        return 0.0
    ad_u = ad_operator(basis, u)
    chains, doubles = chain_basis(ad_u, tol)
    frame = chain_frame(chains, doubles)
    layout = (tuple(c.depth for c in chains), tuple((d.depth, d.alpha) for d in doubles))
    state = DivergenceState.from_flat(layout, np.linalg.solve(frame, x))
    closed = frame @ evolve(state, t).flat()

    bmat = _basis_arrays(basis)
    size = u.rows
    x_mat = (bmat @ x).reshape(size, size)
    u_mat = u.to_float()
    g = expm(-t * u_mat) @ expm(x_mat) @ expm(t * u_mat)
    distance = float(np.linalg.norm(g - np.eye(size), 2))
    if distance >= 1:
        raise LogChartError(distance)
    log_g = np.real(logm(g))
    coords, *_ = np.linalg.lstsq(bmat, log_g.ravel(), rcond=None)
    return float(np.abs(closed - coords).max())


def adjoint_identity_discrepancy(
    basis: Sequence[RatMatrix], x: Sequence[float], y: Sequence[float]
) -> float:
    """Numeric check of e^{-X} e^{Y} e^{X} = exp(Ad(e^{-X}) Y) and e^{ad X} = Ad(e^X)."""
    bmat = _basis_arrays(basis)
    size = basis[0].rows
    xm = (bmat @ np.asarray(x, dtype=float)).reshape(size, size)
    ym = (bmat @ np.asarray(y, dtype=float)).reshape(size, size)
    ex, emx = expm(xm), expm(-xm)
    conjugated = emx @ expm(ym) @ ex
    first = float(np.abs(conjugated - expm(emx @ ym @ ex)).max())

    mats = [b.to_float() for b in basis]
    ad_cols = [np.linalg.lstsq(bmat, (xm @ b - b @ xm).ravel(), rcond=None)[0] for b in mats]
    big_ad_cols = [np.linalg.lstsq(bmat, (ex @ b @ emx).ravel(), rcond=None)[0] for b in mats]
    second = float(np.abs(expm(np.column_stack(ad_cols)) - np.column_stack(big_ad_cols)).max())
    return max(first, second)


# ---- polynomial suprema -------------------------------------------------


def _horner(coeffs: FloatArray, points: FloatArray) -> FloatArray:
    """Evaluate row-wise polynomials (ascending coefficients) at row-wise points."""
    out = np.zeros(points.shape)
    for k in range(coeffs.shape[1] - 1, -1, -1):
        out = out * points + coeffs[:, k : k + 1]
    return out


@lru_cache(maxsize=16)
def _chebyshev_points(count: int) -> FloatArray:
    k = np.arange(count)
    return (1.0 - np.cos(np.pi * k / (count - 1))) / 2.0


def poly_abs_sup(coeffs: npt.ArrayLike, mode: SupMode = "roots", grid_points: int = 512) -> FloatArray:
    """sup over s in [0, 1] of |p(s)| for each row of ascending coefficients.

    ``roots`` evaluates at the endpoints and at the real parts of all
    critical points (companion-matrix eigenvalues, batched); ``grid``
    evaluates on Chebyshev points.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    rows, width = c.shape
    if width == 1:
        return np.abs(c[:, 0])
    if mode == "grid":
        pts = np.broadcast_to(_chebyshev_points(grid_points), (rows, grid_points))
        return np.abs(_horner(c, pts)).max(axis=1)
    ends = np.maximum(np.abs(c[:, 0]), np.abs(c.sum(axis=1)))
    deriv = c[:, 1:] * np.arange(1, width)
    deg = width - 2
    if deg == 0:
        return ends
    lead = deriv[:, -1]
    degenerate = lead == 0
    safe_lead = np.where(degenerate, 1.0, lead)
    if deg == 1:
        crit = (-deriv[:, 0] / safe_lead)[:, None]
    else:
        monic = deriv[:, :-1] / safe_lead[:, None]
        companion = np.zeros((rows, deg, deg))
        companion[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
        companion[:, :, -1] = -monic
        crit = np.linalg.eigvals(companion).real
    crit = np.clip(np.nan_to_num(crit, nan=0.0, posinf=1.0, neginf=0.0), 0.0, 1.0)
    result = np.maximum(ends, np.abs(_horner(c, crit)).max(axis=1))
    if degenerate.any():
        result[degenerate] = poly_abs_sup(c[degenerate], "grid", grid_points)
    return result


def poly_sup_interval(coeffs: Sequence[float], lo: float, hi: float) -> float:
    """sup of |p| over [lo, hi] for one polynomial (ascending coefficients)."""
    if not hi > lo:
        raise InvalidParameterError(f"empty interval [{lo}, {hi}]")
    # p(lo + (hi - lo) s) in the variable s on [0, 1]
    c = np.asarray(coeffs, dtype=float)
    width = hi - lo
    moved = np.zeros_like(c)
    basis_poly = np.array([1.0])
    for k, ck in enumerate(c):
        if k:
            basis_poly = P.polymul(basis_poly, [lo, width])
        moved[: len(basis_poly)] += ck * basis_poly
    return float(poly_abs_sup(moved[None, :])[0])


@lru_cache(maxsize=32)
def coefficient_bound(m: int) -> tuple[Fraction, ...]:
    """C_k(m) = sum_i |coef_k(L_i)| for the Lagrange basis on m+1 equispaced nodes of [0, 1].

    Any polynomial of degree <= m with |p| <= 1 on [0, 1] has |coef_k| <= C_k(m).
    """
    if m == 0:
        return (Fraction(1),)
    nodes = [Fraction(i, m) for i in range(m + 1)]
    totals = [Fraction(0)] * (m + 1)
    for i, si in enumerate(nodes):
        poly = [Fraction(1)]
        denom = Fraction(1)
        for j, sj in enumerate(nodes):
            if j == i:
                continue
            poly = [(poly[k - 1] if k else 0) - sj * (poly[k] if k < len(poly) else 0) for k in range(len(poly) + 1)]
            denom *= si - sj
        for k, a in enumerate(poly):
            totals[k] += abs(a / denom)
    return tuple(totals)


# ---- Bowen boxes --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BowenBoxes:
    """Half-widths of boxes nested around the Bowen ball, in flat coordinate order."""

    inner: FloatArray
    outer: FloatArray

    def volumes(self) -> tuple[float, float]:
        return float(np.prod(2 * self.inner)), float(np.prod(2 * self.outer))


def bowen_boxes(structure: ChainStructure, epsilon: float, horizon: float) -> BowenBoxes:
    """Boxes with inner box inside and outer box containing the Bowen ball.

    Inner: |a_k| <= e^{-1} T^{-k} epsilon (an extra 2^{-1/2} on pairs).
    Outer: |a_k| <= min(epsilon, k! C_k(m) T^{-k} epsilon).
    """
    if horizon < 1:
        raise InvalidParameterError(f"horizon must be at least 1, got {horizon}")
    chain_depths, doubles = layout_of(structure)
    inner: list[float] = []
    outer: list[float] = []

    def sides(m: int) -> tuple[list[float], list[float]]:
        bound = coefficient_bound(m)
        ins = [epsilon * horizon**-k / math.e for k in range(m + 1)]
        outs = [min(epsilon, math.factorial(k) * float(bound[k]) * horizon**-k * epsilon) for k in range(m + 1)]
        return ins, outs

    for m in chain_depths:
        ins, outs = sides(m)
        inner += ins
        outer += outs
    for m, _ in doubles:
        ins, outs = sides(m)
        for a, b in zip(ins, outs):
            inner += [a / math.sqrt(2), a / math.sqrt(2)]
            outer += [b, b]
    return BowenBoxes(inner=np.array(inner), outer=np.array(outer))


def predicted_exponents(structure: ChainStructure) -> tuple[int, Fraction]:
    """Exponents of epsilon and T in the Bowen-ball volume: (dimension, -R)."""
    return structure.dimension, -slow_entropy(structure)


# ---- Monte Carlo --------------------------------------------------------


def _pair_square(p: FloatArray, q: FloatArray) -> FloatArray:
    """Row-wise coefficients of p^2 + q^2."""
    rows, width = p.shape
    out = np.zeros((rows, 2 * width - 1))
    for i in range(width):
        for k in range(width):
            out[:, i + k] += p[:, i] * p[:, k] + q[:, i] * q[:, k]
    return out


def _shifted_coefficients(a: FloatArray, j: int, horizon: float) -> FloatArray:
    """Coefficients in s = t/T of a_j(t) = sum_i a_{j+i} t^i / i!."""
    width = a.shape[1] - j
    scale = np.array([horizon**i / math.factorial(i) for i in range(width)])
    return a[:, j:] * scale


def _accept_continuous(
    sample: FloatArray, layout: Layout, epsilon: float, horizon: float, mode: SupMode, grid_points: int
) -> npt.NDArray[np.bool_]:
    chain_depths, doubles = layout
    ok = np.ones(sample.shape[0], dtype=bool)
    offset = 0
    for m in chain_depths:
        block = sample[:, offset : offset + m + 1]
        offset += m + 1
        for j in range(m + 1):
            idx = np.flatnonzero(ok)
            if not idx.size:
                return ok
            sup = poly_abs_sup(_shifted_coefficients(block[idx], j, horizon), mode, grid_points)
            ok[idx[sup > epsilon]] = False
    for m, _ in doubles:
        block = sample[:, offset : offset + 2 * (m + 1)]
        offset += 2 * (m + 1)
        b, c = block[:, 0::2], block[:, 1::2]
        for j in range(m + 1):
            idx = np.flatnonzero(ok)
            if not idx.size:
                return ok
            square = _pair_square(_shifted_coefficients(b[idx], j, horizon), _shifted_coefficients(c[idx], j, horizon))
            sup = poly_abs_sup(square, mode, grid_points)
            ok[idx[sup > epsilon * epsilon]] = False
    return ok


def _accept_discrete(sample: FloatArray, layout: Layout, epsilon: float, times: FloatArray) -> npt.NDArray[np.bool_]:
    """Membership when only the given times are checked."""
    chain_depths, doubles = layout
    t_max = float(times.max()) if times.size else 1.0
    s = np.broadcast_to(times / t_max, (sample.shape[0], times.size))
    ok = np.ones(sample.shape[0], dtype=bool)
    offset = 0
    for m in chain_depths:
        block = sample[:, offset : offset + m + 1]
        offset += m + 1
        for j in range(m + 1):
            values = _horner(_shifted_coefficients(block, j, t_max), s)
            ok &= np.abs(values).max(axis=1) <= epsilon
    for m, _ in doubles:
        block = sample[:, offset : offset + 2 * (m + 1)]
        offset += 2 * (m + 1)
        b, c = block[:, 0::2], block[:, 1::2]
        for j in range(m + 1):
            vb = _horner(_shifted_coefficients(b, j, t_max), s)
            vc = _horner(_shifted_coefficients(c, j, t_max), s)
            ok &= np.hypot(vb, vc).max(axis=1) <= epsilon
    return ok


def _stream(seed: int, stream: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, chunk))))


def _count_accepted(
    outer: FloatArray,
    samples: int,
    chunk_size: int,
    threads: int,
    seed: int,
    stream: int,
    accept: Callable[[FloatArray], npt.NDArray[np.bool_]],
) -> int:
    """Accepted samples among ``samples`` uniform draws from the outer box.

    Chunk c of stream s always uses the generator keyed by (s, c), so the
    count does not depend on the number of threads.
    """
    n_chunks = math.ceil(samples / chunk_size)

    def run(c: int) -> int:
        size = min(chunk_size, samples - c * chunk_size)
        draws = _stream(seed, stream, c).uniform(-1.0, 1.0, size=(size, outer.size)) * outer
        return int(accept(draws).sum())

    if threads == 1:
        return sum(run(c) for c in range(n_chunks))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(run, range(n_chunks)))


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> SlopeFit:
    """Least-squares line y = exponent * x + intercept."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 3 or x.size != y.size:
        raise DegenerateFitError("need at least three paired points", {"x": x.tolist(), "y": y.tolist()})
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DegenerateFitError("non-finite data", {"x": x.tolist(), "y": y.tolist()})
    if np.ptp(x) == 0:
        raise DegenerateFitError("all abscissae coincide", {"x": x.tolist()})
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    return SlopeFit(
        exponent=float(slope),
        intercept=float(intercept),
        rms_residual=float(np.sqrt(np.mean(residual**2))),
        points=[(float(a), float(b)) for a, b in zip(x, y)],
    )


def fit_loglog(xs: Sequence[float], ys: Sequence[float]) -> SlopeFit:
    """Slope of log y against log x (natural logarithms)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if (x <= 0).any() or (y <= 0).any():
        raise DegenerateFitError("log-log fit needs positive data", {"x": x.tolist(), "y": y.tolist()})
    return fit_slope(np.log(x), np.log(y))


def mc_bowen_volume(structure: ChainStructure, cfg: McConfig) -> BowenVolumeReport:
    """Monte Carlo Bowen-ball volumes on the T grid and their log-log slope.

    Samples are drawn uniformly from the outer box, which contains the
    Bowen ball, so the volume is the acceptance fraction times the box
    volume.
    """
    layout = layout_of(structure)
    started = time.perf_counter()
    rows: list[VolumeRow] = []
    for index, horizon in enumerate(cfg.t_grid):
        boxes = bowen_boxes(structure, cfg.epsilon, horizon)

        def accept(draws: FloatArray, horizon: float = horizon) -> npt.NDArray[np.bool_]:
            return _accept_continuous(draws, layout, cfg.epsilon, horizon, cfg.sup_mode, cfg.grid_points)

        accepted = _count_accepted(boxes.outer, cfg.samples, cfg.chunk_size, cfg.threads, cfg.seed, index, accept)
        if accepted == 0:
            raise ZeroAcceptanceError(f"T={horizon:g}", cfg.samples)
        volume = accepted / cfg.samples * boxes.volumes()[1]
        rows.append(VolumeRow(t=horizon, volume=volume, accepted=accepted, samples=cfg.samples))
        logger.debug("Bowen volume estimated", T=horizon, accepted=accepted, volume=volume)
    fit = fit_loglog([r.t for r in rows], [r.volume for r in rows])
    dim, time_exponent = predicted_exponents(structure)
    log_performance("mc_bowen_volume", (time.perf_counter() - started) * 1000, {"samples": cfg.samples})
    logger.info("Bowen slope fitted", exponent=fit.exponent, predicted=float(time_exponent))
    return BowenVolumeReport(
        structure=structure,
        epsilon=cfg.epsilon,
        seed=cfg.seed,
        rows=rows,
        fit=fit,
        predicted_exponent=float(time_exponent),
        dimension_exponent=dim,
    )


def _discrete_outer(structure: ChainStructure, epsilon: float, times: FloatArray) -> FloatArray:
    """Coefficient box implied by |a_0(t)| <= epsilon at the given times (and t = 0)."""
    nodes = np.unique(np.concatenate([[0.0], times]))
    t_max = float(nodes.max())
    chain_depths, doubles = layout_of(structure)

    def sides(m: int) -> list[float]:
        if len(nodes) < m + 1:
            return [epsilon] * (m + 1)
        chosen = nodes[-(m + 1) :] / t_max
        inverse = np.linalg.inv(np.vander(chosen, m + 1, increasing=True))
        spread = np.abs(inverse).sum(axis=1)
        return [min(epsilon, math.factorial(k) * spread[k] * t_max**-k * epsilon) for k in range(m + 1)]

    out: list[float] = []
    for m in chain_depths:
        out += sides(m)
    for m, _ in doubles:
        for side in sides(m):
            out += [side, side]
    return np.array(out)


def sequence_fit_start(structure: ChainStructure, cfg: SequenceConfig) -> int:
    """First N with L lambda^N >= 2 m_max^2, leaving at least three fit points."""
    m_max = max(max(structure.depths, default=1), 1)
    threshold = 2 * m_max * m_max
    start = next((n for n in range(cfg.n_max + 1) if cfg.base_time * cfg.lam**n >= threshold), cfg.n_max)
    return min(start, cfg.n_max - 2)


def mc_sequence_bowen_volume(structure: ChainStructure, cfg: SequenceConfig) -> SequenceVolumeReport:
    """Volumes of sequence-Bowen balls over the times {0} and L lambda^k, k <= N."""
    layout = layout_of(structure)
    rows: list[VolumeRow] = []
    for n in range(cfg.n_max + 1):
        times = np.array(cfg.times(n))
        outer = _discrete_outer(structure, cfg.epsilon, times)
        checked = np.concatenate([[0.0], times])

        def accept(draws: FloatArray, checked: FloatArray = checked) -> npt.NDArray[np.bool_]:
            return _accept_discrete(draws, layout, cfg.epsilon, checked)

        accepted = _count_accepted(outer, cfg.samples, cfg.chunk_size, cfg.threads, cfg.seed, n, accept)
        if accepted == 0:
            raise ZeroAcceptanceError(f"N={n}", cfg.samples)
        volume = accepted / cfg.samples * float(np.prod(2 * outer))
        rows.append(VolumeRow(t=float(n), volume=volume, accepted=accepted, samples=cfg.samples))
    start = sequence_fit_start(structure, cfg)
    fitted = [r for r in rows if r.t >= start]
    fit = fit_slope([r.t for r in fitted], [math.log(r.volume) for r in fitted])
    predicted = -float(slow_entropy(structure)) * math.log(cfg.lam)
    logger.info("Sequence slope fitted", exponent=fit.exponent, predicted=predicted, start=start)
    return SequenceVolumeReport(
        structure=structure,
        epsilon=cfg.epsilon,
        lam=cfg.lam,
        seed=cfg.seed,
        rows=rows,
        fit=fit,
        fit_start=start,
        predicted_exponent=predicted,
    )


# ---- polynomial property checks -----------------------------------------


def norm_equiv_constant(d: int, trials: int, seed: int) -> NormEquivalence:
    """Largest observed ratios between coefficient and sup norms on [0, 1].

    ``certified_bound`` is max_k C_k(d), which bounds the coefficient/sup
    ratio for every polynomial of degree <= d.
    """
    if d < 0 or trials < 1:
        raise InvalidParameterError("degree must be >= 0 and trials >= 1")
    rng = _stream(seed, 0, 0)
    coeffs = rng.standard_normal((trials, d + 1))
    sup = poly_abs_sup(coeffs)
    coef = np.abs(coeffs).max(axis=1)
    return NormEquivalence(
        degree=d,
        trials=trials,
        coefficient_over_sup=float((coef / sup).max()),
        certified_bound=float(max(coefficient_bound(d))),
        sup_over_coefficient=float((sup / coef).max()),
    )


def _merge_intervals(intervals: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    merged: list[list[float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(a, b) for a, b in merged]


def check_brudnyi(
    coeffs: Sequence[float],
    interval: tuple[float, float],
    omega: Sequence[tuple[float, float]],
) -> bool:
    """sup_V |p| <= (4|V|/|omega|)^k sup_omega |p| for omega a union of subintervals of V."""
    lo, hi = interval
    pieces = _merge_intervals(omega)
    if not pieces or any(a < lo or b > hi or b <= a for a, b in pieces):
        raise InvalidParameterError("omega must be a non-empty union of subintervals of V")
    measure = sum(b - a for a, b in pieces)
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if c.size == 0:
        return True
    k = c.size - 1
    lhs = poly_sup_interval(c, lo, hi)
    rhs = (4 * (hi - lo) / measure) ** k * max(poly_sup_interval(c, a, b) for a, b in pieces)
    return lhs <= rhs * (1 + 1e-9)


def brudnyi_trials(trials: int, max_degree: int, seed: int) -> BrudnyiSummary:
    """Random polynomials and random unions of subintervals of [0, 1]."""
    rng = _stream(seed, 0, 0)
    violations = 0
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(1, max_degree + 1))
        coeffs = rng.standard_normal(k + 1)
        pieces = []
        for _ in range(int(rng.integers(1, 4))):
            a, b = np.sort(rng.random(2))
            if b - a > 1e-6:
                pieces.append((float(a), float(b)))
        if not pieces:
            continue
        if not check_brudnyi(coeffs, (0.0, 1.0), pieces):
            violations += 1
        merged = _merge_intervals(pieces)
        measure = sum(b - a for a, b in merged)
        lhs = poly_sup_interval(coeffs, 0.0, 1.0)
        rhs = (4 / measure) ** k * max(poly_sup_interval(coeffs, a, b) for a, b in merged)
        worst = max(worst, lhs / rhs)
    return BrudnyiSummary(trials=trials, max_degree=max_degree, violations=violations, worst_ratio=worst, seed=seed)


def _squared_norm_poly(state: DivergenceState) -> FloatArray:
    """Coefficients (in t) of the squared Euclidean norm of the evolved coordinates."""
    total = np.zeros(1)

    def coords(a: FloatArray) -> list[FloatArray]:
        m = len(a) - 1
        return [np.array([a[j + i] / math.factorial(i) for i in range(m - j + 1)]) for j in range(m + 1)]

    for a in state.chains:
        for p in coords(a):
            total = P.polyadd(total, P.polymul(p, p))
    for b, c, _ in state.doubles:
        for p, q in zip(coords(b), coords(c)):
            total = P.polyadd(total, P.polyadd(P.polymul(p, p), P.polymul(q, q)))
    return np.trim_zeros(total, "b") if total.any() else np.zeros(1)


def _positive_real_roots(coeffs: FloatArray) -> FloatArray:
    if coeffs.size < 2:
        return np.zeros(0)
    roots = P.polyroots(coeffs)
    real = roots[np.abs(roots.imag) <= 1e-7 * (1 + np.abs(roots.real))].real
    return np.sort(real[real > 0])


def visit_constant(k: int) -> float:
    """A constant c with 4 (2c)^(2/k) < 1/10 for polynomials of degree k."""
    if k < 1:
        raise InvalidParameterError("degree must be positive")
    return (1 / 40) ** (k / 2) / 4


def shearing_visit_fraction(
    structure: ChainStructure, x0: DivergenceState, c: float, eta: float
) -> tuple[float, float]:
    """First exit time S of |X_t| < eta and the fraction of [0, S] spent in |X_t| < c eta."""
    if not 0 < c < 1 / 20:
        raise InvalidParameterError(f"c must lie in (0, 1/20), got {c}")
    if x0.layout != layout_of(structure):
        raise DimensionMismatchError("shearing_visit_fraction", (_dimension(layout_of(structure)), 1), (x0.flat().size, 1))
    q = _squared_norm_poly(x0)
    if q[0] >= eta * eta:
        raise InvalidParameterError("the initial displacement must satisfy |X_0| < eta")
    if q.size < 2:
        raise NoSeparationError(eta)
    exits = _positive_real_roots(P.polysub(q, [eta * eta]))
    if not exits.size:
        raise NoSeparationError(eta)
    s_exit = float(exits[0])
    inner = _positive_real_roots(P.polysub(q, [(c * eta) ** 2]))
    cuts = np.concatenate([[0.0], inner[inner < s_exit], [s_exit]])
    mids = (cuts[:-1] + cuts[1:]) / 2
    below = P.polyval(mids, q) < (c * eta) ** 2
    fraction = float(np.diff(cuts)[below].sum()) / s_exit
    return s_exit, fraction


def shearing_trials(structure: ChainStructure, trials: int, c: float, eta: float, seed: int) -> ShearingSummary:
    """Visit fractions for random X_0 drawn uniformly from the eta-ball."""
    layout = layout_of(structure)
    dim = _dimension(layout)
    rng = _stream(seed, 0, 0)
    fractions = []
    for _ in range(trials):
        direction = rng.standard_normal(dim)
        radius = eta * rng.random() ** (1 / dim) * (1 - 1e-9)
        x0 = DivergenceState.from_flat(layout, direction / np.linalg.norm(direction) * radius)
        fractions.append(shearing_visit_fraction(structure, x0, c, eta)[1])
    degree = 2 * max(structure.depths, default=0)
    return ShearingSummary(
        structure=structure,
        trials=trials,
        c=c,
        eta=eta,
        degree=degree,
        max_fraction=float(max(fractions)),
        mean_fraction=float(np.mean(fractions)),
        remez_bound=4 * c ** (2 / degree) if degree else 1.0,
        seed=seed,
    )
