"""Weighted conditional expectation operators T = M_w E M_u and their
closed forms.

All quantities (operator norm, powers of T*T and TT*, polar factors, Aluthge
transform, adjoint parts) are expressed directly in the cached conditional
moments E(u), E(w), E(uw), E(|u|^2), E(|w|^2). The moments are computed once
at build time and never recomputed, so every closed form shares one
tolerance story. Quotients carry support indicators: a factor whose
denominator vanishes (below the support tolerance) is 0 by convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measure_space import (
    DEFAULT_SUPPORT_TOL,
    FiniteMeasureSpace,
    IndexSet,
    MeasurableFunction,
    SubSigmaAlgebra,
    conditional_expectation,
    ess_sup_norm,
    support,
)
from .operator_algebra import PolarParts, WeightedOperator, expectation_operator


@dataclass(frozen=True)
class WCEOperator:
    """The symbolic quadruple (space, algebra, u, w) plus cached moments."""

    space: FiniteMeasureSpace
    algebra: SubSigmaAlgebra
    u: MeasurableFunction
    w: MeasurableFunction
    e_u: MeasurableFunction
    e_w: MeasurableFunction
    e_uw: MeasurableFunction
    e_abs_u2: MeasurableFunction
    e_abs_w2: MeasurableFunction
    support_u2: IndexSet  # S  = S(E(|u|^2))
    support_w2: IndexSet  # G  = S(E(|w|^2))
    support_eu: IndexSet  # S' = S(E(u))
    support_tol: float


@dataclass(frozen=True)
class AdjointParts:
    """Modulus, partial isometry and Aluthge transform of the adjoint T*."""

    modulus_part: WeightedOperator
    isometry_part: WeightedOperator
    aluthge: WeightedOperator


def build_wce(
    space: FiniteMeasureSpace,
    algebra: SubSigmaAlgebra,
    u: MeasurableFunction,
    w: MeasurableFunction,
    support_tol: float = DEFAULT_SUPPORT_TOL,
) -> WCEOperator:
    """Cache the five conditional moments and three supports of T = M_w E M_u."""
    for f in (u, w):
        if f.space.point_count != space.point_count:
            raise ValueError("u and w must live on the given space")
    e = lambda f: conditional_expectation(space, algebra, f)
    e_u = e(u)
    e_w = e(w)
    e_uw = e(u * w)
    e_abs_u2 = e(MeasurableFunction(np.abs(u.values) ** 2, space))
    e_abs_w2 = e(MeasurableFunction(np.abs(w.values) ** 2, space))
    return WCEOperator(
        space=space,
        algebra=algebra,
        u=u,
        w=w,
        e_u=e_u,
        e_w=e_w,
        e_uw=e_uw,
        e_abs_u2=e_abs_u2,
        e_abs_w2=e_abs_w2,
        support_u2=support(e_abs_u2, support_tol),
        support_w2=support(e_abs_w2, support_tol),
        support_eu=support(e_u, support_tol),
        support_tol=support_tol,
    )


def _chi(W: WCEOperator, index_set: IndexSet) -> np.ndarray:
    return index_set.indicator(W.space.point_count)


def _guarded_ratio(numer: np.ndarray, denom: np.ndarray, chi: np.ndarray) -> np.ndarray:
    """numer/denom where the support indicator is 1, else 0."""
    out = np.zeros_like(numer, dtype=complex)
    on = chi > 0.5
    out[on] = numer[on] / denom[on]
    return out


def _sandwich(
    W: WCEOperator, left: np.ndarray, right: np.ndarray
) -> WeightedOperator:
    """The operator f -> left * E(right * f) as a matrix."""
    e_mat = expectation_operator(W.space, W.algebra).entries
    return WeightedOperator(left[:, None] * e_mat * right[None, :], W.space)


def to_matrix(W: WCEOperator) -> WeightedOperator:
    """The matrix of f -> w * E(u * f); rank is at most the atom count."""
    return _sandwich(W, W.w.values, W.u.values)


def norm_closed_form(W: WCEOperator) -> float:
    """||T|| = || (E|w|^2)^(1/2) (E|u|^2)^(1/2) ||_inf."""
    prod = W.e_abs_u2.values.real * W.e_abs_w2.values.real
    return float(np.sqrt(np.clip(prod, 0.0, None).max()))


def tstar_t_power(W: WCEOperator, p: float) -> WeightedOperator:
    """(T*T)^p = M_{conj(u) (E|u|^2)^(p-1) chi_S (E|w|^2)^p} E M_u."""
    if p <= 0:
        raise ValueError("power must be positive")
    chi_s = _chi(W, W.support_u2)
    eu2 = W.e_abs_u2.values.real
    ew2 = W.e_abs_w2.values.real
    factor = np.zeros(W.space.point_count, dtype=complex)
    on = chi_s > 0.5
    factor[on] = eu2[on] ** (p - 1.0) * np.clip(ew2[on], 0.0, None) ** p
    return _sandwich(W, np.conj(W.u.values) * factor, W.u.values)


def t_tstar_power(W: WCEOperator, p: float) -> WeightedOperator:
    """(TT*)^p = M_{w (E|w|^2)^(p-1) chi_G (E|u|^2)^p} E M_conj(w)."""
    if p <= 0:
        raise ValueError("power must be positive")
    chi_g = _chi(W, W.support_w2)
    eu2 = W.e_abs_u2.values.real
    ew2 = W.e_abs_w2.values.real
    factor = np.zeros(W.space.point_count, dtype=complex)
    on = chi_g > 0.5
    factor[on] = ew2[on] ** (p - 1.0) * np.clip(eu2[on], 0.0, None) ** p
    return _sandwich(W, W.w.values * factor, np.conj(W.w.values))


def polar_closed_form(W: WCEOperator) -> PolarParts:
    """Closed-form polar factors:

    |T| f = (E|w|^2 / E|u|^2)^(1/2) chi_S conj(u) E(u f)
    U  f = (chi_{S and G} / (E|w|^2 E|u|^2))^(1/2) w E(u f)
    """
    chi_s = _chi(W, W.support_u2)
    chi_sg = _chi(W, W.support_u2.intersection(W.support_w2))
    eu2 = W.e_abs_u2.values.real
    ew2 = W.e_abs_w2.values.real
    mod_factor = np.sqrt(
        np.clip(_guarded_ratio(ew2.astype(complex), eu2, chi_s).real, 0.0, None)
    )
    iso_factor = np.sqrt(
        np.clip(_guarded_ratio(chi_sg.astype(complex), ew2 * eu2, chi_sg).real, 0.0, None)
    )
    mod = _sandwich(W, mod_factor * np.conj(W.u.values), W.u.values)
    iso = _sandwich(W, iso_factor * W.w.values, W.u.values)
    return PolarParts(isometry_part=iso, modulus_part=mod)


def aluthge_closed_form(W: WCEOperator) -> WeightedOperator:
    """Aluthge transform: f -> (chi_S E(uw) / E|u|^2) conj(u) E(u f)."""
    chi_s = _chi(W, W.support_u2)
    factor = _guarded_ratio(W.e_uw.values, W.e_abs_u2.values.real, chi_s)
    return _sandwich(W, factor * np.conj(W.u.values), W.u.values)


def adjoint_wce(W: WCEOperator) -> WCEOperator:
    """T* = M_conj(u) E M_conj(w): the quadruple with u' = conj(w), w' = conj(u)."""
    return build_wce(W.space, W.algebra, W.w.conj(), W.u.conj(), W.support_tol)


def adjoint_parts_closed_form(W: WCEOperator) -> AdjointParts:
    """Polar factors and Aluthge transform of T*, in the original moments:

    |T*| f = (E|u|^2 / E|w|^2)^(1/2) chi_G w E(conj(w) f)
    U*  f = (chi_{S and G} / (E|u|^2 E|w|^2))^(1/2) conj(u) E(conj(w) f)
    Aluthge(T*) f = (chi_G E(conj(uw)) / E|w|^2) w E(conj(w) f)

    The outer factor of |T*| is w, as the 1/2-power case of the TT* power
    formula requires (and the oracle confirms).
    """
    chi_g = _chi(W, W.support_w2)
    chi_sg = _chi(W, W.support_u2.intersection(W.support_w2))
    eu2 = W.e_abs_u2.values.real
    ew2 = W.e_abs_w2.values.real
    wbar = np.conj(W.w.values)
    mod_factor = np.sqrt(
        np.clip(_guarded_ratio(eu2.astype(complex), ew2, chi_g).real, 0.0, None)
    )
    iso_factor = np.sqrt(
        np.clip(_guarded_ratio(chi_sg.astype(complex), eu2 * ew2, chi_sg).real, 0.0, None)
    )
    alu_factor = _guarded_ratio(np.conj(W.e_uw.values), ew2, chi_g)
    return AdjointParts(
        modulus_part=_sandwich(W, mod_factor * W.w.values, wbar),
        isometry_part=_sandwich(W, iso_factor * np.conj(W.u.values), wbar),
        aluthge=_sandwich(W, alu_factor * W.w.values, wbar),
    )


def spectral_radius_closed_form(W: WCEOperator) -> float:
    """r(T) = ||E(uw)||_inf."""
    return ess_sup_norm(W.e_uw)
