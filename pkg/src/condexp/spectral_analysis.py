"""Spectrum, point spectrum, joint point spectrum and spectral radius.

Closed forms come from the cached conditional moments (the spectrum of
T = M_w E M_u off zero is the attained-value set of E(uw), the spectral
radius its sup norm); the numeric side is the dense eigenvalue oracle.
Zero membership is decided by rank, the finite-dimensional reading of
invertibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .measure_space import cluster_values, ess_range, ess_sup_norm, level_set
from .operator_algebra import (
    DEFAULT_RANK_TOL,
    WeightedOperator,
    _to_standard,
    aluthge_numeric,
    eigenvalues,
    is_normal,
    operator_norm,
    singular_values,
)
from .operator_classes import is_quasi_star_a_definitional
from .wce_operator import (
    WCEOperator,
    spectral_radius_closed_form,
    to_matrix,
)

__all__ = [
    "SpectrumReport",
    "EMuPointSpectrumReport",
    "JointSpectrumReport",
    "JointSpectrumRangeReport",
    "spectrum_closed_form",
    "spectrum_report",
    "point_spectrum_closed_form",
    "em_u_point_spectrum",
    "joint_point_spectrum",
    "spectral_radius_closed_form",
    "iterated_aluthge",
    "sigma_p_equals_sigma_jp_check",
    "joint_spectrum_range_check",
    "hausdorff_distance",
]

#: default tolerance for eigenvalue clustering and set comparisons
DEFAULT_SPECTRUM_TOL = 1e-7
#: two subspaces intersect nontrivially iff their smallest principal angle
#: is below this (radians)
PRINCIPAL_ANGLE_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumReport:
    """Closed-form vs numeric spectrum of one operator."""

    closed_form_nonzero: tuple
    numeric_eigenvalues: np.ndarray
    zero_in_spectrum: bool
    zero_reason: str
    match: bool
    max_set_distance: float
    supports_cover_all: bool  # the S and G = X hypothesis, reported separately


@dataclass(frozen=True)
class EMuPointSpectrumReport:
    """Point spectrum of T = E M_u: level-set values of E(u) vs eigenvalues."""

    closed_level_values: tuple
    numeric_point_spectrum: tuple
    equality_off_zero: bool
    containment: bool
    zero_level_set_nonempty: bool
    zero_case_equality: Optional[bool]  # only when E(u) vanishes somewhere


@dataclass(frozen=True)
class JointSpectrumReport:
    """sigma_p vs sigma_jp, with the quasi-*-A hypothesis recorded."""

    quasi_star_a: bool
    point_spectrum: tuple
    joint_point_spectrum: tuple
    equal: Optional[bool]  # asserted only under the quasi-*-A hypothesis
    counterexamples: tuple = ()


@dataclass(frozen=True)
class JointSpectrumRangeReport:
    """Set identities for sigma_jp under |E(uw)|^2 >= E(|u|^2) E(|w|^2)."""

    hypothesis_holds: bool
    joint_point_spectrum: tuple
    essential_range_nonzero: tuple
    level_values_nonzero: tuple
    nonzero_sets_equal: Optional[bool]
    supports_cover_all: bool
    full_sets_equal: Optional[bool]  # only when S and G cover every point


def hausdorff_distance(a, b) -> float:
    """Hausdorff distance between two finite sets of complex scalars."""
    a = list(a)
    b = list(b)
    if not a and not b:
        return 0.0
    if not a or not b:
        return float("inf")
    av = np.asarray(a, dtype=complex)
    bv = np.asarray(b, dtype=complex)
    dist = np.abs(av[:, None] - bv[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def _rank(T: WeightedOperator, tol: float = DEFAULT_RANK_TOL) -> int:
    s = singular_values(T)
    return int(np.sum(s > tol * s.max(initial=0.0)))


def _nonzero_cluster(values, tol: float) -> list:
    return [v for v in cluster_values(values, tol) if abs(v) > tol]


def spectrum_closed_form(W: WCEOperator, tol: float = DEFAULT_SPECTRUM_TOL):
    """Nonzero spectrum = ess range(E(uw)) minus 0; zero membership by rank.

    Returns (nonzero values, zero_flag, supports_cover_all).
    """
    nonzero = [v for v in ess_range(W.e_uw, tol) if abs(v) > tol]
    zero_flag = _rank(to_matrix(W)) < W.space.point_count
    covers = W.support_u2.intersection(W.support_w2).covers(W.space.point_count)
    return nonzero, zero_flag, covers


def spectrum_report(W: WCEOperator, tol: float = DEFAULT_SPECTRUM_TOL) -> SpectrumReport:
    """Cross-validate the closed-form spectrum against the eigenvalue oracle."""
    T = to_matrix(W)
    scale = 1.0 + operator_norm(T)
    set_tol = tol * scale
    closed_nonzero, zero_flag, covers = spectrum_closed_form(W, set_tol)
    evals = eigenvalues(T)
    numeric_nonzero = _nonzero_cluster(evals, set_tol)
    dist = hausdorff_distance(closed_nonzero, numeric_nonzero)
    return SpectrumReport(
        closed_form_nonzero=tuple(closed_nonzero),
        numeric_eigenvalues=evals,
        zero_in_spectrum=zero_flag,
        zero_reason=(
            "rank deficient" if zero_flag else "full rank (operator invertible)"
        ),
        match=dist <= set_tol,
        max_set_distance=dist,
        supports_cover_all=covers,
    )


def point_spectrum_closed_form(
    W: WCEOperator, tol: float = DEFAULT_SPECTRUM_TOL
) -> list:
    """Eigenvalue set from the level sets of E(uw); every attained nonzero
    value is an eigenvalue, and 0 joins iff the matrix has nontrivial kernel."""
    values = [v for v in ess_range(W.e_uw, tol) if abs(v) > tol]
    if _rank(to_matrix(W)) < W.space.point_count:
        values.append(0.0 + 0.0j)
    return values


def em_u_point_spectrum(
    W: WCEOperator, tol: float = DEFAULT_SPECTRUM_TOL
) -> EMuPointSpectrumReport:
    """Point spectrum of T = E M_u via the level sets of E(u), checked
    against the eigenvalue oracle in all three containment forms."""
    if np.abs(W.w.values - 1.0).max() > tol:
        raise ValueError("this analysis requires w identically 1")
    T = to_matrix(W)
    set_tol = tol * (1.0 + operator_norm(T))
    level_values = ess_range(W.e_u, set_tol)
    numeric = cluster_values(eigenvalues(T), set_tol)

    closed_nonzero = [v for v in level_values if abs(v) > set_tol]
    numeric_nonzero = [v for v in numeric if abs(v) > set_tol]
    equality_off_zero = (
        hausdorff_distance(closed_nonzero, numeric_nonzero) <= set_tol
    )
    containment = all(
        min((abs(v - m) for m in numeric), default=np.inf) <= set_tol
        for v in level_values
    )
    zero_attained = len(level_set(W.e_u, 0.0, set_tol)) > 0
    zero_case = None
    if zero_attained:
        zero_case = hausdorff_distance(level_values, numeric) <= set_tol
    return EMuPointSpectrumReport(
        closed_level_values=tuple(level_values),
        numeric_point_spectrum=tuple(numeric),
        equality_off_zero=equality_off_zero,
        containment=containment,
        zero_level_set_nonempty=zero_attained,
        zero_case_equality=zero_case,
    )


def joint_point_spectrum(T: WeightedOperator, tol: float = 1e-8) -> list:
    """Eigenvalues that carry a common eigenvector of T and T* (conjugated).

    For each clustered eigenvalue the numeric null spaces of T - lambda I and
    T* - conj(lambda) I are intersected; the intersection is nontrivial iff
    the smallest principal angle between them is below the module threshold.
    """
    b = _to_standard(T)
    n = b.shape[0]
    scale = 1.0 + float(np.linalg.norm(b, 2))
    cutoff = tol * scale
    result = []
    for lam in cluster_values(np.linalg.eigvals(b), tol * scale):
        k1 = _null_space_std(b - lam * np.eye(n), cutoff)
        k2 = _null_space_std(b.conj().T - np.conj(lam) * np.eye(n), cutoff)
        if k1.shape[1] == 0 or k2.shape[1] == 0:
            continue
        cosines = np.linalg.svd(k1.conj().T @ k2, compute_uv=False)
        angle = float(np.arccos(np.clip(cosines.max(initial=0.0), -1.0, 1.0)))
        if angle < PRINCIPAL_ANGLE_TOL:
            result.append(lam)
    return result


def _null_space_std(mat: np.ndarray, cutoff: float) -> np.ndarray:
    _, s, vh = np.linalg.svd(mat)
    rank = int(np.sum(s > cutoff))
    return vh[rank:, :].conj().T


def iterated_aluthge(T: WeightedOperator, n: int) -> WeightedOperator:
    """The n-fold Aluthge transform."""
    if n < 1:
        raise ValueError("iteration count must be >= 1")
    out = T
    for _ in range(n):
        out = aluthge_numeric(out)
    return out


def sigma_p_equals_sigma_jp_check(
    W: WCEOperator, tol: float = 1e-8
) -> JointSpectrumReport:
    """Under the quasi-*-A hypothesis the point and joint point spectra
    coincide; outside it both sets are reported without assertion."""
    T = to_matrix(W)
    set_tol = tol * (1.0 + operator_norm(T))
    quasi = is_quasi_star_a_definitional(T, tol)
    sigma_p = cluster_values(eigenvalues(T), set_tol)
    sigma_jp = joint_point_spectrum(T, tol)
    equal = None
    counterexamples: list = []
    if quasi:
        equal = hausdorff_distance(sigma_p, sigma_jp) <= set_tol
        if not equal:
            counterexamples = [
                lam
                for lam in sigma_p
                if min((abs(lam - m) for m in sigma_jp), default=np.inf) > set_tol
            ]
    return JointSpectrumReport(
        quasi_star_a=quasi,
        point_spectrum=tuple(sigma_p),
        joint_point_spectrum=tuple(sigma_jp),
        equal=equal,
        counterexamples=tuple(counterexamples),
    )


def joint_spectrum_range_check(W: WCEOperator, tol: float = 1e-8) -> JointSpectrumRangeReport:
    """When |E(uw)|^2 >= E(|u|^2) E(|w|^2) pointwise, the joint point
    spectrum off zero equals the attained-value set of E(uw) off zero; when
    the supports of E(|u|^2) and E(|w|^2) cover every point the identity
    extends to zero."""
    hypothesis = bool(
        np.all(
            np.abs(W.e_uw.values) ** 2
            >= W.e_abs_u2.values.real * W.e_abs_w2.values.real - tol
        )
    )
    T = to_matrix(W)
    set_tol = tol * (1.0 + operator_norm(T))
    sigma_jp = joint_point_spectrum(T, tol)
    range_nonzero = [v for v in ess_range(W.e_uw, set_tol) if abs(v) > set_tol]
    jp_nonzero = [v for v in sigma_jp if abs(v) > set_tol]
    covers = W.support_u2.intersection(W.support_w2).covers(W.space.point_count)

    nonzero_equal = None
    full_equal = None
    if hypothesis:
        nonzero_equal = hausdorff_distance(jp_nonzero, range_nonzero) <= set_tol
        if covers:
            full_range = list(range_nonzero)
            if len(level_set(W.e_uw, 0.0, set_tol)) > 0:
                full_range.append(0.0 + 0.0j)
            full_equal = hausdorff_distance(sigma_jp, full_range) <= set_tol
    return JointSpectrumRangeReport(
        hypothesis_holds=hypothesis,
        joint_point_spectrum=tuple(sigma_jp),
        essential_range_nonzero=tuple(range_nonzero),
        level_values_nonzero=tuple(range_nonzero),
        nonzero_sets_equal=nonzero_equal,
        supports_cover_all=covers,
        full_sets_equal=full_equal,
    )
