"""Membership tests for the A, *-A and quasi-*-A operator classes.

Each class has two routes: the definitional Loewner-order inequality,
evaluated on the matrix with the numerical oracle, and the pointwise
moment criteria, evaluated on the cached conditional moments. The two are
reported side by side and never mixed, so each cross-validates the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .measure_space import (
    DEFAULT_TOL,
    MeasurableFunction,
    is_algebra_measurable,
)
from .operator_algebra import (
    WeightedOperator,
    adjoint,
    compose,
    is_normal,
    loewner_geq,
    modulus,
)
from .wce_operator import WCEOperator, to_matrix

A_CLASS = "A"
STAR_A_CLASS = "star_A"
QUASI_STAR_A_CLASS = "quasi_star_A"

#: note attached to *-A verdicts: the pointwise inequality mixes complex
#: quantities, so both sides are compared in modulus
MODULUS_INTERPRETATION = "complex sides compared by modulus"


@dataclass(frozen=True)
class ClassVerdict:
    """Side-by-side result of the definitional test and the moment criteria.

    ``sufficient_criterion`` and ``necessary_criterion`` are None when not
    applicable. The fields are reported as computed, never reconciled: a
    sufficient criterion that holds while the definitional test fails is a
    genuine inconsistency and is surfaced as such by the test suite.
    """

    class_name: str
    definitional: bool
    sufficient_criterion: Optional[bool]
    necessary_criterion: Optional[bool]
    witness: Optional[str] = None
    supports_equal: Optional[bool] = None
    interpretation: Optional[str] = None


@dataclass(frozen=True)
class NormalityReport:
    """The three equivalent conditions for T = E M_u (w identically 1)."""

    is_normal: bool
    is_quasi_star_a: bool
    u_is_algebra_measurable: bool

    @property
    def consistent(self) -> bool:
        return self.is_normal == self.is_quasi_star_a == self.u_is_algebra_measurable


def is_a_class_definitional(T: WeightedOperator, tol: float = DEFAULT_TOL) -> bool:
    """A-class: |T|^2 <= |T^2| in the Loewner order."""
    mod_t = modulus(T)
    return loewner_geq(modulus(compose(T, T)), compose(mod_t, mod_t), tol)


def is_star_a_definitional(T: WeightedOperator, tol: float = DEFAULT_TOL) -> bool:
    """*-A-class: |T^2| >= |T*|^2."""
    mod_adj = modulus(adjoint(T))
    return loewner_geq(modulus(compose(T, T)), compose(mod_adj, mod_adj), tol)


def is_quasi_star_a_definitional(
    T: WeightedOperator, tol: float = DEFAULT_TOL
) -> bool:
    """quasi-*-A-class: T* |T^2| T >= T* |T*|^2 T."""
    t_star = adjoint(T)
    mod_adj = modulus(t_star)
    lhs = compose(compose(t_star, modulus(compose(T, T))), T)
    rhs = compose(compose(t_star, compose(mod_adj, mod_adj)), T)
    return loewner_geq(lhs, rhs, tol)


def _pointwise_holds(lhs: np.ndarray, rhs: np.ndarray, mask: np.ndarray, tol: float):
    """Check lhs >= rhs - tol on the masked points; return (ok, witness)."""
    margin = lhs - rhs
    bad = mask & (margin < -tol)
    if not bad.any():
        return True, None
    i = int(np.argmin(np.where(bad, margin, np.inf)))
    return False, f"point {i}: margin {margin[i]:.6g}"


def cauchy_schwarz_gap(W: WCEOperator) -> MeasurableFunction:
    """Pointwise E(|u|^2) E(|w|^2) - |E(uw)|^2; nonnegative up to rounding by
    the conditional Cauchy-Schwarz inequality."""
    gap = (
        W.e_abs_u2.values.real * W.e_abs_w2.values.real
        - np.abs(W.e_uw.values) ** 2
    )
    return MeasurableFunction(gap, W.space)


def a_class_pointwise(W: WCEOperator, tol: float = DEFAULT_TOL):
    """The moment inequalities of the A-class criteria, without the (much
    costlier) definitional Loewner test.

    Returns (sufficient, necessary, witness): the sufficient inequality
    |E(uw)|^2 >= E(|u|^2) E(|w|^2) on S, and the necessary one on S'.
    """
    n = W.space.point_count
    lhs = np.abs(W.e_uw.values) ** 2
    rhs = W.e_abs_u2.values.real * W.e_abs_w2.values.real
    on_s = W.support_u2.indicator(n) > 0.5
    on_sp = W.support_eu.indicator(n) > 0.5
    sufficient, witness = _pointwise_holds(lhs, rhs, on_s, tol)
    necessary, nec_witness = _pointwise_holds(lhs, rhs, on_sp, tol)
    return sufficient, necessary, witness or nec_witness


def a_class_criterion(W: WCEOperator, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Moment criteria for A-class membership, side by side with the
    definitional Loewner test.

    Sufficient: |E(uw)|^2 >= E(|u|^2) E(|w|^2) on S = S(E(|u|^2)).
    Necessary: the same inequality on S' = S(E(u)).
    When S = S' the two bound each other and the criterion is exact.
    """
    sufficient, necessary, witness = a_class_pointwise(W, tol)
    return ClassVerdict(
        class_name=A_CLASS,
        definitional=is_a_class_definitional(to_matrix(W), tol),
        sufficient_criterion=sufficient,
        necessary_criterion=necessary,
        witness=witness,
        supports_equal=W.support_u2 == W.support_eu,
    )


def star_a_criteria(W: WCEOperator, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Moment criteria for *-A-class membership.

    The sufficient inequality
        u |E(uw)|^(1/2) (E|w|^2 / E|u|^2)^(1/4) chi_S >= conj(w) (E|u|^2)^(1/2)
    compares generally complex functions; both sides are compared in modulus
    (recorded in the verdict). The necessary inequality is real-valued.
    """
    n = W.space.point_count
    chi_s = W.support_u2.indicator(n)
    on_s = chi_s > 0.5
    eu2 = W.e_abs_u2.values.real
    ew2 = W.e_abs_w2.values.real
    ratio = np.zeros(n)
    ratio[on_s] = ew2[on_s] / eu2[on_s]

    suff_lhs = np.abs(W.u.values) * np.sqrt(np.abs(W.e_uw.values)) * ratio**0.25 * chi_s
    suff_rhs = np.abs(W.w.values) * np.sqrt(np.clip(eu2, 0.0, None))
    sufficient, witness = _pointwise_holds(
        suff_lhs, suff_rhs, np.ones(n, dtype=bool), tol
    )

    nec_lhs = np.abs(W.e_u.values) ** 2 * np.abs(W.e_uw.values) * np.sqrt(ratio) * chi_s
    nec_rhs = np.sqrt(np.clip(eu2, 0.0, None)) * np.abs(W.e_w.values) ** 2
    necessary, nec_witness = _pointwise_holds(
        nec_lhs, nec_rhs, np.ones(n, dtype=bool), tol
    )
    return ClassVerdict(
        class_name=STAR_A_CLASS,
        definitional=is_star_a_definitional(to_matrix(W), tol),
        sufficient_criterion=sufficient,
        necessary_criterion=necessary,
        witness=witness or nec_witness,
        interpretation=MODULUS_INTERPRETATION,
    )


def quasi_star_a_criteria(W: WCEOperator, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Moment criteria for quasi-*-A-class membership.

    Sufficient: |E(uw)|^2 >= E(|u|^2) E(|w|^2) everywhere.
    Necessary: |E(uw)|^3 (E|w|^2)^(1/2) >= (E|u|^2)^(3/2) (E|w|^2)^2.
    """
    n = W.space.point_count
    everywhere = np.ones(n, dtype=bool)
    eu2 = np.clip(W.e_abs_u2.values.real, 0.0, None)
    ew2 = np.clip(W.e_abs_w2.values.real, 0.0, None)
    abs_euw = np.abs(W.e_uw.values)

    sufficient, witness = _pointwise_holds(abs_euw**2, eu2 * ew2, everywhere, tol)
    necessary, nec_witness = _pointwise_holds(
        abs_euw**3 * np.sqrt(ew2), eu2**1.5 * ew2**2, everywhere, tol
    )
    return ClassVerdict(
        class_name=QUASI_STAR_A_CLASS,
        definitional=is_quasi_star_a_definitional(to_matrix(W), tol),
        sufficient_criterion=sufficient,
        necessary_criterion=necessary,
        witness=witness or nec_witness,
    )


def normality_equivalence(W: WCEOperator, tol: float = DEFAULT_TOL) -> NormalityReport:
    """For T = E M_u the conditions 'T normal', 'T quasi-*-A' and
    'u algebra-measurable' are equivalent; all three are reported."""
    if np.abs(W.w.values - 1.0).max() > tol:
        raise ValueError("normality equivalence requires w identically 1")
    T = to_matrix(W)
    return NormalityReport(
        is_normal=is_normal(T, tol),
        is_quasi_star_a=is_quasi_star_a_definitional(T, tol),
        u_is_algebra_measurable=is_algebra_measurable(W.u, W.algebra, tol),
    )
