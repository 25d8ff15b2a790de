"""Ramanujan sums, the integer Ramanujan basis of R^p, and projection of a
period-folded signal onto the factor Ramanujan subspaces.

c_q(n) is evaluated through the Mobius/totient closed form

    c_q(n) = mu(q / g) * phi(q) / phi(q / g),   g = gcd(q, n)

and the brute-force coprime cosine sum is kept as a reference.
"""

import logging
import math
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional

import numpy as np
import scipy.linalg

from period_scope.models.ramanujan import ComponentSet, Decomposition, RamanujanBasis
from period_scope.models.signal import as_signal
from period_scope.utils.errors import (
    BadParamsError,
    InsufficientDataError,
    NoComponentsError,
    NotAFactorError,
    ZeroEnergyError,
)


def _check_positive(name: str, value: int) -> int:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise BadParamsError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


# ---------------------------------------------------------------------------
# Number-theoretic helpers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def euler_totient(q: int) -> int:
    """Euler's totient phi(q)."""
    q = _check_positive("q", q)
    result = q
    rest = q
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            while rest % p == 0:
                rest //= p
            result -= result // p
        p += 1
    if rest > 1:
        result -= result // rest
    return result


@lru_cache(maxsize=4096)
def mobius(q: int) -> int:
    """Mobius function mu(q)."""
    q = _check_positive("q", q)
    if q == 1:
        return 1
    count = 0
    rest = q
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            rest //= p
            if rest % p == 0:
                return 0  # p^2 divides q
            count += 1
        p += 1
    if rest > 1:
        count += 1
    return -1 if count % 2 else 1


@lru_cache(maxsize=4096)
def _divisors(p: int) -> tuple:
    small, large = [], []
    d = 1
    while d * d <= p:
        if p % d == 0:
            small.append(d)
            if d != p // d:
                large.append(p // d)
        d += 1
    return tuple(small + large[::-1])


def divisors(p: int) -> List[int]:
    """All divisors of p in ascending order, 1 and p included."""
    return list(_divisors(_check_positive("p", p)))


def ramanujan_sum(q: int, n: int) -> int:
    """Integer value of c_q(n)."""
    q = _check_positive("q", q)
    g = math.gcd(q, int(n))
    mu = mobius(q // g)
    if mu == 0:
        return 0
    return mu * (euler_totient(q) // euler_totient(q // g))


def ramanujan_sum_bruteforce(q: int, n: int) -> float:
    """c_q(n) as the sum of cos(2 pi k n / q) over 1 <= k <= q with gcd(k, q) = 1."""
    q = _check_positive("q", q)
    return float(
        sum(math.cos(2.0 * math.pi * k * n / q) for k in range(1, q + 1) if math.gcd(k, q) == 1)
    )


# ---------------------------------------------------------------------------
# Basis and projectors
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _build_basis(p: int) -> RamanujanBasis:
    divisor_list = list(_divisors(p))
    columns = []
    offsets = {}
    for q in divisor_list:
        pattern = np.array([ramanujan_sum(q, n) for n in range(q)], dtype=np.int64)
        extended = np.tile(pattern, p // q)
        width = euler_totient(q)
        offsets[q] = (len(columns), width)
        columns.extend(np.roll(extended, shift) for shift in range(width))
    logging.debug(f"Built Ramanujan basis for p={p} from divisors {divisor_list}")
    return RamanujanBasis(
        period=p,
        divisors=divisor_list,
        basis=np.column_stack(columns),
        block_offsets=offsets,
    )


def build_basis(p: int) -> RamanujanBasis:
    """
    Build the p x p integer basis whose block q spans the Ramanujan subspace S_q.
    Results are memoized; the returned arrays are read-only.
    """
    return _build_basis(_check_positive("p", p))


def ramanujan_subspace_projector(q: int, p: int) -> np.ndarray:
    """
    Orthogonal projector onto S_q inside R^p (q must divide p).
    """
    p = _check_positive("p", p)
    q = _check_positive("q", q)
    if p % q:
        raise NotAFactorError(f"{q} does not divide {p}")
    block = build_basis(p).block(q).astype(np.float64)
    return block @ scipy.linalg.solve(block.T @ block, block.T, assume_a="pos")


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


def fold(samples: np.ndarray, p: int) -> np.ndarray:
    """Average the floor(N/p) consecutive length-p blocks of a signal."""
    blocks = samples.size // p
    return samples[: blocks * p].reshape(blocks, p).mean(axis=0)


def decompose(signal, p: int) -> Decomposition:
    """
    Fold the signal at period p and split the folded block into its
    components on the Ramanujan subspaces S_q, q | p.

    :param signal: Signal (or array-like) of length N >= p.
    :param p: Period to fold at, usually the estimated composite period.
    :return: The Decomposition with per-subspace projections and energies.
    """
    signal = as_signal(signal)
    p = _check_positive("p", p)
    if signal.length < p:
        raise InsufficientDataError(
            f"Signal of length {signal.length} is shorter than the period {p}"
        )

    folded = fold(signal.samples, p)
    basis = build_basis(p)
    coefficients = scipy.linalg.solve(basis.basis.astype(np.float64), folded)

    projections = {}
    energies = {}
    for q in basis.divisors:
        start, width = basis.block_offsets[q]
        x_q = basis.block(q) @ coefficients[start : start + width]
        projections[q] = x_q
        energies[q] = float(x_q @ x_q)

    return Decomposition(
        period=p,
        folded=folded,
        projections=projections,
        energies=energies,
        dc_value=float(projections[1][0]),
    )


def normalized_strengths(dec: Decomposition) -> Dict[int, float]:
    """
    Share of the folded signal's energy that lands in each subspace S_q.
    """
    total = dec.total_energy
    if total <= 0.0:
        raise ZeroEnergyError("Cannot normalize the strengths of an all-zero signal")
    return {q: energy / total for q, energy in dec.energies.items()}


def assign_divisors(period: int, hidden_periods: Iterable[int]) -> Dict[int, List[int]]:
    """
    Route every divisor q > 1 of the period to the smallest hidden period it divides.
    Divisors that divide no hidden period are left out.
    """
    ordered = sorted(set(hidden_periods))
    assignment: Dict[int, List[int]] = {p_i: [] for p_i in ordered}
    for q in divisors(period):
        if q == 1:
            continue
        owner = next((p_i for p_i in ordered if p_i % q == 0), None)
        if owner is not None:
            assignment[owner].append(q)
    return assignment


def raw_components(dec: Decomposition, hidden_periods: Iterable[int]) -> Dict[int, np.ndarray]:
    """
    Zero-mean hidden components: the sum of the projections x_q assigned to
    each hidden period, before any DC is handed out.
    """
    hidden_periods = list(hidden_periods)
    for p_i in hidden_periods:
        if isinstance(p_i, bool) or int(p_i) != p_i or p_i < 2:
            raise BadParamsError(f"Hidden periods must be integers >= 2, got {p_i!r}")
        if dec.period % p_i:
            raise NotAFactorError(f"Hidden period {p_i} does not divide {dec.period}")

    raw = {}
    for p_i, owned in assign_divisors(dec.period, hidden_periods).items():
        component = np.zeros(dec.period)
        for q in owned:
            component = component + dec.projections[q]
        raw[p_i] = component
    return raw


def reconstruct_components(dec: Decomposition, hidden_periods: Iterable[int]) -> ComponentSet:
    """
    Rebuild each hidden component from the subspaces assigned to it and hand
    every component an equal share of the DC level.
    """
    return redistribute_dc(raw_components(dec, hidden_periods), dec.dc_value)


def redistribute_dc(
    raw_components: Mapping[int, np.ndarray],
    d: float,
    alphas: Optional[Mapping[int, float]] = None,
) -> ComponentSet:
    """
    Add alpha_i * d to every zero-mean raw component.

    Without explicit alphas the DC level is split equally, which maximizes the
    correlation with the true components when their DC values are unknown.
    Explicit alphas must sum to one.
    """
    if not raw_components:
        raise NoComponentsError("DC redistribution needs at least one component")
    if alphas is None:
        share = 1.0 / len(raw_components)
        alphas = {p_i: share for p_i in raw_components}
    else:
        if set(alphas) != set(raw_components):
            raise BadParamsError("alphas must name exactly the raw components")
        if not math.isclose(math.fsum(alphas.values()), 1.0, abs_tol=1e-12):
            raise BadParamsError("alphas must sum to one")

    components = {
        p_i: np.asarray(raw, dtype=np.float64) + alphas[p_i] * d
        for p_i, raw in raw_components.items()
    }
    return ComponentSet(components=components, alphas=dict(alphas), dc_value=d)


def dominant_divisors(strengths: Mapping[int, float], threshold: float) -> List[int]:
    """
    Divisors q > 1 whose normalized strength reaches the threshold; each one
    is read as a hidden period when none are known in advance.
    """
    return sorted(q for q, strength in strengths.items() if q > 1 and strength >= threshold)
