"""Explicit upper bounds on the normal-approximation error of the MLE.

Setting: X_1, ..., X_n i.i.d. with scalar parameter theta0, and an MLE
theta_hat linked to a sample average through a smooth one-to-one map q,
q(theta_hat) = mean g(X_i).  The quantity being bounded is

    sup |E h(sqrt(n i(theta0)) (theta_hat - theta0)) - E h(Z)|,

over bounded absolutely continuous test functions h, with Z standard
normal.  Every bound here decomposes into three non-negative pieces:

  * a Stein/CLT term of order 1/sqrt(n), driven by the standardized third
    absolute moment of g(X_1);
  * a tail term, 2 ||h|| / eps^2 times the MSE of the MLE, present only
    when q is not the identity;
  * a Taylor term, ||h'|| sqrt(n i) / (2 |q'|) sup|q''| times the MSE,
    which also vanishes when q is the identity (then q'' = 0).

With MSE = O(1/n) all three are O(1/sqrt(n)).  The general formula is
:func:`theorem_bound`; :func:`expfam_bound` instantiates it for a
one-parameter exponential family, and the ``exp_*``/``gg_*`` functions are
fully simplified closed forms for the bundled models.  The ``ar_*``
functions give the earlier general-purpose bound ("AR bound") that these
improve on, in the two cases where it has a usable closed form.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .models import (
    ExpFamilyModel,
    GeneralizedGammaParams,
    d_is_identity,
    d_prime,
    fisher_info,
    sup_abs_d_second,
)
from .moments import (
    EXP_THIRD_ABS_MOMENT,
    gg_mse_factor,
    third_abs_moment,
    third_abs_moment_holder_gg,
)

__all__ = [
    "BoundBreakdown",
    "BoundInputs",
    "TestFunction",
    "ar_bound_canonical_expfam",
    "ar_bound_exp_noncanonical",
    "exp_canonical_bound",
    "exp_noncanonical_bound",
    "expfam_bound",
    "get_test_function",
    "gg_bound",
    "lemma_clt_bound",
    "reference_test_function",
    "theorem_bound",
]

# 2 + (12/e - 2): the constant multiplying ||h'||/sqrt(n) in both
# exponential closed forms.  Printed as 4.41456 in 5-decimal renderings.
EXP_STEIN_CONST = 2.0 + EXP_THIRD_ABS_MOMENT

_CERT_GRID = np.linspace(-50.0, 50.0, 4001)


@dataclass(frozen=True)
class TestFunction:
    """A bounded absolutely continuous test function with certified norms.

    ``norm_h`` and ``norm_h_prime`` are sup-norm certificates supplied by
    whoever constructs the function; they are never inferred.  Construction
    checks them against h on a dense grid of [-50, 50]: |h| must not exceed
    norm_h, and no secant slope may exceed norm_h_prime (up to 1e-6
    relative slack for roundoff).
    """

    name: str
    h: Callable
    norm_h: float
    norm_h_prime: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.norm_h) and self.norm_h > 0.0):
            raise DomainError(f"norm_h must be positive, got {self.norm_h!r}")
        if not (math.isfinite(self.norm_h_prime) and self.norm_h_prime > 0.0):
            raise DomainError(f"norm_h_prime must be positive, got {self.norm_h_prime!r}")
        try:
            values = np.asarray(self.h(_CERT_GRID), dtype=float)
            if values.shape != _CERT_GRID.shape:
                raise TypeError
        except (TypeError, ValueError):
            values = np.array([float(self.h(x)) for x in _CERT_GRID])
        if not np.all(np.isfinite(values)):
            raise DomainError(f"test function {self.name!r} is not finite on [-50, 50]")
        if np.max(np.abs(values)) > self.norm_h * (1.0 + 1e-9):
            raise DomainError(
                f"certified norm_h={self.norm_h} is violated by {self.name!r} "
                f"(observed {np.max(np.abs(values))})"
            )
        slopes = np.abs(np.diff(values)) / np.diff(_CERT_GRID)
        if np.max(slopes) > self.norm_h_prime * (1.0 + 1e-6):
            raise DomainError(
                f"certified norm_h_prime={self.norm_h_prime} is violated by {self.name!r} "
                f"(observed secant slope {np.max(slopes)})"
            )


def reference_test_function() -> TestFunction:
    """The built-in test function h(x) = 1/(x^2 + 2).

    Its exact sup norms are ||h|| = 1/2 (attained at 0) and
    ||h'|| = 3 sqrt(6) / 32 (attained at x^2 = 2/3).
    """
    return TestFunction(
        name="paper",
        h=lambda x: 1.0 / (x * x + 2.0),
        norm_h=0.5,
        norm_h_prime=3.0 * math.sqrt(6.0) / 32.0,
    )


_H_REGISTRY: dict[str, Callable[[], TestFunction]] = {
    "paper": reference_test_function,
}


def get_test_function(name: str) -> TestFunction:
    """Look up a built-in test function by its registry id."""
    builder = _H_REGISTRY.get(name)
    if builder is None:
        raise DomainError(
            f"unknown test function {name!r}; available: {sorted(_H_REGISTRY)}"
        )
    return builder()


@dataclass(frozen=True)
class BoundInputs:
    """Everything the general bound consumes, already reduced to numbers.

    ``fisher`` is i(theta0); ``q_prime_abs`` is |q'(theta0)|;
    ``third_moment`` is E|g(X_1) - q(theta0)|^3; ``mse`` is
    E[(theta_hat - theta0)^2]; ``sup_q_second`` is the supremum of |q''|
    over the epsilon-ball around theta0.  The caller is responsible for
    the ball lying inside the parameter space.
    """

    n: int
    theta0: float
    epsilon: float
    fisher: float
    q_prime_abs: float
    third_moment: float
    mse: float
    sup_q_second: float
    q_is_identity: bool
    h: TestFunction

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        for name in ("epsilon", "fisher", "q_prime_abs", "mse"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        for name in ("third_moment", "sup_q_second"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be non-negative, got {v!r}")


@dataclass(frozen=True)
class BoundBreakdown:
    """A computed bound, split into its three non-negative terms.

    ``total`` is always the exact floating-point sum of the terms, and the
    tail and Taylor terms are identically zero whenever q is the identity.
    """

    stein_term: float
    tail_term: float
    taylor_term: float
    total: float
    formula_id: str

    @classmethod
    def from_terms(
        cls, stein: float, tail: float, taylor: float, formula_id: str
    ) -> "BoundBreakdown":
        return cls(
            stein_term=stein,
            tail_term=tail,
            taylor_term=taylor,
            total=stein + tail + taylor,
            formula_id=formula_id,
        )


def lemma_clt_bound(
    n: int, norm_h_prime: float, sigma: float, third_abs_moment: float
) -> float:
    """CLT bound for a standardized i.i.d. sum W = sum Y_i / sqrt(n).

    For centered Y_i with variance sigma^2 and E|Y_1|^3 finite,

        |E h(W) - E h(K)|  <=  ||h'|| / sqrt(n) * (2 + E|Y_1|^3 / sigma^3),

    with K normal with variance sigma^2.  This is the building block behind
    the Stein term of every bound in this module.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    for name, v in (("norm_h_prime", norm_h_prime), ("sigma", sigma)):
        if not (math.isfinite(v) and v > 0.0):
            raise DomainError(f"{name} must be positive, got {v!r}")
    if not (math.isfinite(third_abs_moment) and third_abs_moment >= 0.0):
        raise DomainError(f"third_abs_moment must be non-negative, got {third_abs_moment!r}")
    return norm_h_prime / math.sqrt(n) * (2.0 + third_abs_moment / sigma**3)


def theorem_bound(inputs: BoundInputs) -> BoundBreakdown:
    """The general three-term bound, assembled from raw inputs.

    stein  = ||h'||/sqrt(n) (2 + i^{3/2}/|q'|^3 E|g - q(theta0)|^3)
    tail   = MSE * 2||h||/eps^2                       [0 if q is identity]
    taylor = MSE * ||h'|| sqrt(n i)/(2|q'|) sup|q''|  [0 if q is identity]

    When q is the identity both correction terms are dropped outright: the
    indicator in the tail term is zero and sup|q''| vanishes, so this is
    exact rather than a convention.
    """
    i = inputs
    hp = i.h.norm_h_prime
    stein = hp / math.sqrt(i.n) * (
        2.0 + i.fisher**1.5 / i.q_prime_abs**3 * i.third_moment
    )
    if i.q_is_identity:
        tail = 0.0
        taylor = 0.0
    else:
        tail = i.mse * 2.0 * i.h.norm_h / i.epsilon**2
        taylor = i.mse * hp * math.sqrt(i.n * i.fisher) / (2.0 * i.q_prime_abs) * i.sup_q_second
    return BoundBreakdown.from_terms(stein, tail, taylor, "theorem")


def _default_bound_moment(m: ExpFamilyModel, theta0: float) -> float:
    """Third-moment input used by expfam_bound when none is supplied.

    For the generalized gamma and Weibull families the exact moment is
    intractable, so the closed-form fourth-moment bound stands in (keeping
    the whole result a certified upper bound).  Every other family uses the
    exact moment from :func:`mlebounds.moments.third_abs_moment`.
    """
    if m.family in ("gg", "weibull"):
        d = m.shape.get("d", m.shape.get("alpha"))
        p = m.shape.get("p", m.shape.get("alpha"))
        return third_abs_moment_holder_gg(GeneralizedGammaParams(theta=theta0, d=d, p=p))
    return third_abs_moment(m, theta0)


def expfam_bound(
    m: ExpFamilyModel,
    theta0: float,
    n: int,
    epsilon: float,
    h: TestFunction,
    mse: float,
    third_moment: float | None = None,
) -> BoundBreakdown:
    """The general bound instantiated for a one-parameter exponential family.

    Assembles i(theta0), |D'(theta0)|, the third moment of T, and
    sup|D''| over the epsilon-ball from the model, then delegates to
    :func:`theorem_bound`.  The caller supplies the MSE (closed forms for
    all built-ins live in :func:`mlebounds.moments.mse_closed_form`).

    The equivalent family-native form of the Stein factor,
    |k'|^3 E|T - D|^3 / |A'' - k'' D|^{3/2}, is exactly i^{3/2}/|D'|^3
    times the moment, so no separate code path is needed for it.
    """
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    identity = d_is_identity(m)
    if identity:
        sup_q2 = 0.0
    else:
        # epsilon enters the bound only through the tail/Taylor terms, so
        # the ball-inside-the-space constraint is enforced exactly when
        # those terms exist.
        sup_q2 = sup_abs_d_second(m, theta0, epsilon)
    third = _default_bound_moment(m, theta0) if third_moment is None else third_moment
    inputs = BoundInputs(
        n=n,
        theta0=theta0,
        epsilon=epsilon,
        fisher=fisher_info(m, theta0),
        q_prime_abs=abs(d_prime(m, theta0)),
        third_moment=third,
        mse=mse,
        sup_q_second=sup_q2,
        q_is_identity=identity,
        h=h,
    )
    return dataclasses.replace(theorem_bound(inputs), formula_id="expfam")


def gg_bound(n: int, params: GeneralizedGammaParams, h: TestFunction) -> BoundBreakdown:
    """Fully simplified bound for the generalized gamma scale MLE.

    Uses the fourth-moment bound for the third moment, epsilon = theta0/2
    (baked into the sup|D''| case split below, which is why epsilon is not
    a parameter here), and the gamma-ratio MSE.  The scale theta cancels
    throughout, so the result depends only on (n, d, p, h):

        ||h'||/sqrt(n) (2 + (3 + 6p/d)^{3/4})
        + M(n,d,p) 1{d != 1 or p != 1}
          [ 8||h|| + ||h'|| sqrt(ndp) |p-1|/2 (2^{2-p} if p<2 else (3/2)^{p-2}) ]

    where M is the theta-free MSE factor.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    d, p = params.d, params.p
    stein = h.norm_h_prime / math.sqrt(n) * (2.0 + (3.0 + 6.0 * p / d) ** 0.75)
    if d == 1.0 and p == 1.0:
        return BoundBreakdown.from_terms(stein, 0.0, 0.0, "gg")
    factor = gg_mse_factor(n, d, p)
    tail = 8.0 * h.norm_h * factor
    edge = 2.0 ** (2.0 - p) if p < 2.0 else 1.5 ** (p - 2.0)
    taylor = factor * h.norm_h_prime * math.sqrt(n * d * p) * abs(p - 1.0) / 2.0 * edge
    return BoundBreakdown.from_terms(stein, tail, taylor, "gg")


def exp_canonical_bound(n: int, h: TestFunction) -> BoundBreakdown:
    """Closed-form bound for the canonical exponential model (MLE 1/mean).

    With epsilon = theta0/2 the scale cancels:

        (2 + (12/e - 2)) ||h'||/sqrt(n)
        + 8 ||h|| (n+2)/((n-1)(n-2))
        + 8 ||h'|| sqrt(n) (n+2)/((n-1)(n-2)).

    Requires n >= 3 (the MSE of 1/mean does not exist below that).
    """
    if not isinstance(n, int) or n < 3:
        raise DomainError(f"n must be an integer >= 3 for the exp-canonical bound, got {n!r}")
    ratio = (n + 2) / ((n - 1) * (n - 2))
    stein = EXP_STEIN_CONST * h.norm_h_prime / math.sqrt(n)
    tail = 8.0 * h.norm_h * ratio
    taylor = 8.0 * h.norm_h_prime * math.sqrt(n) * ratio
    return BoundBreakdown.from_terms(stein, tail, taylor, "exp-canonical")


def exp_noncanonical_bound(n: int, h: TestFunction) -> BoundBreakdown:
    """Closed-form bound for the mean-parametrized exponential model.

    The MLE is the sample mean itself (D is the identity), so only the
    Stein term survives: (2 + (12/e - 2)) ||h'|| / sqrt(n).
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    stein = EXP_STEIN_CONST * h.norm_h_prime / math.sqrt(n)
    return BoundBreakdown.from_terms(stein, 0.0, 0.0, "exp-noncanonical")


def ar_bound_exp_noncanonical(n: int, h: TestFunction) -> float:
    """The AR reference bound for the mean-parametrized exponential model.

    (2 + (12/e - 2)) ||h'||/sqrt(n) + 8 ||h||/n + 2 ||h'||/sqrt(n)
        + 80 ||h'||/sqrt(n) (6/n + 3)^{1/2}.

    Always at least as large as :func:`exp_noncanonical_bound`; it is the
    comparison column of the bundled simulation table.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    rootn = math.sqrt(n)
    return (
        EXP_STEIN_CONST * h.norm_h_prime / rootn
        + 8.0 * h.norm_h / n
        + 2.0 * h.norm_h_prime / rootn
        + 80.0 * h.norm_h_prime / rootn * math.sqrt(6.0 / n + 3.0)
    )


def _is_canonical(m: ExpFamilyModel) -> bool:
    """True iff k(theta) = theta on a dense parameter grid."""
    lo, hi = m.param_space
    glo = lo if math.isfinite(lo) else -20.0
    ghi = hi if math.isfinite(hi) else 20.0
    width = ghi - glo
    if math.isfinite(lo):
        glo += 0.005 * width
    if math.isfinite(hi):
        ghi -= 0.005 * width
    grid = np.linspace(glo, ghi, 401)
    kvals = np.asarray(m.k(grid), dtype=float)
    return bool(np.all(np.abs(kvals - grid) <= 1e-12 * np.maximum(1.0, np.abs(grid))))


def ar_bound_canonical_expfam(
    m: ExpFamilyModel,
    theta0: float,
    n: int,
    epsilon: float,
    h: TestFunction,
    mse: float,
) -> BoundBreakdown:
    """The AR reference bound for a canonical exponential family.

    In the canonical case k(theta) = theta the AR bound coincides term for
    term with :func:`expfam_bound`, so this is implemented as a delegation
    guarded by a canonicality check on k.
    """
    if not _is_canonical(m):
        raise DomainError(
            f"model {m.name!r} is not canonical (k(theta) != theta); "
            "the AR bound has no closed form here"
        )
    result = expfam_bound(m, theta0, n, epsilon, h, mse)
    return dataclasses.replace(result, formula_id="ar-canonical")
