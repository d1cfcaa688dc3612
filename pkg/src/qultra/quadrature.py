"""The q-ultraspherical weight and the library's integral evaluations:
classical orthogonality, the two-parameter kernel integral, the bilateral
delta integral, and shifted orthogonality of the bilateral family.

All integrals are taken over x in [-1, 1] against w(x) dx with the
substitution x = cos(theta), which absorbs the 1/sqrt(1-x^2) endpoint
factor exactly:  (1/2pi) int_-1^1 f w dx = (1/2pi) int_0^pi f(cos t)
W(t) dt with W the weight without the square-root factor.  W extends to
an even 2pi-periodic analytic function that vanishes at t = 0, pi, so a
uniform trapezoid rule converges spectrally; refinement doubles the node
count until successive values agree to the requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergence, RegionError
from .hyperseries import UNILATERAL, SeriesSpec, eval_phi
from .qcore import (DEFAULT_POLICY, INFINITY, SpectralPoint, TruncationPolicy,
                    check_real_base, poch, poch_multi, poch_recip)
from .ultraspherical import UltraParams, bilateral_cn, classical_cn

MAX_NODES = 2 ** 20


@dataclass(frozen=True)
class WeightParams:
    """Real weight parameters inside the positivity window
    -1 < beta < q^{-1/2} (real 0 < q < 1)."""

    beta: float
    q: float

    def __post_init__(self):
        q = check_real_base(self.q)
        object.__setattr__(self, "q", q)
        beta = float(self.beta)
        object.__setattr__(self, "beta", beta)
        if not -1.0 < beta < q ** -0.5:
            raise DomainError(
                f"weight positivity window needs -1 < beta < q^(-1/2), got beta = {beta}")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    nodes_used: int
    last_refinement_delta: float


def _circle_weight(thetas, beta, q, policy: TruncationPolicy):
    """(e^{2it}, e^{-2it}; q)_inf / (beta e^{2it}, beta e^{-2it}; q)_inf
    on a theta array; real by conjugate pairing."""
    z2 = np.exp(2j * np.asarray(thetas, dtype=float))
    num = poch(z2, q, INFINITY, policy) * poch(1.0 / z2, q, INFINITY, policy)
    den = poch(beta * z2, q, INFINITY, policy) * poch(beta / z2, q, INFINITY, policy)
    return (num / den).real


def weight_value(theta: float, w: WeightParams,
                 policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """The orthogonality weight at theta in (0, pi), including the
    1/sqrt(1-x^2) factor, x = cos(theta)."""
    theta = float(theta)
    if not 0.0 < theta < math.pi:
        raise DomainError("weight_value needs theta strictly inside (0, pi)")
    z2 = complex(math.cos(2 * theta), math.sin(2 * theta))
    num = poch(z2, w.q, INFINITY, policy) * poch(z2.conjugate(), w.q, INFINITY, policy)
    den = poch(w.beta * z2, w.q, INFINITY, policy) * \
        poch(w.beta * z2.conjugate(), w.q, INFINITY, policy)
    val = num / den / math.sqrt(1.0 - math.cos(theta) ** 2)
    if abs(val.imag) > 1e-12 * max(1.0, abs(val)):
        raise DomainError("weight evaluated with a non-negligible imaginary part")
    return val.real


def _eval_on_nodes(f, thetas):
    """Evaluate an x-evaluator on a theta grid, preferring one vectorized
    call and falling back to a scalar loop."""
    zs = np.exp(1j * np.asarray(thetas, dtype=float))
    try:
        vals = np.asarray(f(SpectralPoint(zs)), dtype=complex)
        if vals.shape == zs.shape:
            return vals
    except TypeError:
        pass
    return np.array([complex(f(SpectralPoint(complex(z)))) for z in zs],
                    dtype=complex)


def _integrate_raw(f, beta: float, q: float, tol: float,
                   policy: TruncationPolicy,
                   min_nodes: int = 64) -> QuadratureResult:
    """Node-doubling trapezoid core; the weight endpoints vanish, so only
    interior nodes contribute and midpoint refinement reuses all previous
    evaluations."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    n = 32
    thetas = math.pi / n * np.arange(1, n)
    weights = _circle_weight(thetas, beta, q, policy)
    total = np.sum(_eval_on_nodes(f, thetas) * weights)
    evals = n - 1
    value = total / (2 * n)
    delta = math.inf
    while True:
        mid = math.pi / (2 * n) * np.arange(1, 2 * n, 2)
        wm = _circle_weight(mid, beta, q, policy)
        total = total + np.sum(_eval_on_nodes(f, mid) * wm)
        evals += len(mid)
        n *= 2
        new_value = total / (2 * n)
        delta = abs(new_value - value)
        value = new_value
        if delta < tol and n >= min_nodes:
            break
        if n >= MAX_NODES:
            raise NonConvergence(
                f"quadrature did not reach tol = {tol} within {MAX_NODES} nodes")
    return QuadratureResult(complex(value), evals, float(delta))


def integrate(f, w: WeightParams, tol: float,
              policy: TruncationPolicy = DEFAULT_POLICY,
              min_nodes: int = 64) -> QuadratureResult:
    """(1/2pi) int_-1^1 f(x) w(x) dx by the theta-substituted trapezoid
    rule with node doubling until successive values differ by < tol."""
    return _integrate_raw(f, w.beta, w.q, tol, policy, min_nodes)


def orthogonality_entry(m: int, n: int, w: WeightParams, tol: float = 1e-10,
                        policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Integral of C_m C_n against the weight; equals delta_{mn} times
    orthogonality_diagonal(n, w)."""
    if m < 0 or n < 0:
        raise DomainError("orthogonality_entry needs m, n >= 0")

    def f(sp):
        return classical_cn(m, sp, w.beta, w.q) * classical_cn(n, sp, w.beta, w.q)

    return integrate(f, w, tol, policy).value


def orthogonality_diagonal(n: int, w: WeightParams,
                           policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Closed form of the diagonal entry:
    (beta, q beta; q)_inf/(q, beta^2; q)_inf (beta^2; q)_n/(q; q)_n
    (1-beta)/(1-beta q^n)."""
    beta, q = w.beta, w.q
    head = (poch_multi([beta, q * beta], q, INFINITY, policy)
            / poch_multi([q, beta ** 2], q, INFINITY, policy))
    head *= poch(beta ** 2, q, n) * poch_recip(q, q, n)
    head *= (1 - beta) / (1 - beta * q ** n)
    return head.real


def kernel_integral(t1, t2, w: WeightParams, tol: float = 1e-10,
                    policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """(1/2pi) int (beta t1 e^{+-it}, beta t2 e^{+-it}; q)_inf /
    (t1 e^{+-it}, t2 e^{+-it}; q)_inf w(x) dx for |t1|, |t2| < 1;
    equals kernel_integral_rhs(t1, t2, w)."""
    t1, t2 = complex(t1), complex(t2)
    if not (abs(t1) < 1 and abs(t2) < 1):
        raise RegionError("kernel integral requires |t1| < 1 and |t2| < 1")
    beta, q = w.beta, w.q

    def f(sp):
        from .qcore import poch_pm
        num = poch_pm(beta * t1, sp, q, policy) * poch_pm(beta * t2, sp, q, policy)
        den = poch_pm(t1, sp, q, policy) * poch_pm(t2, sp, q, policy)
        return num / den

    return integrate(f, w, tol, policy).value


def kernel_integral_rhs(t1, t2, w: WeightParams,
                        policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """(beta, q beta; q)_inf/(q, beta^2; q)_inf  2phi1(beta^2, beta; q beta; q, t1 t2)."""
    beta, q = w.beta, w.q
    pref = (poch_multi([beta, q * beta], q, INFINITY, policy)
            / poch_multi([q, beta ** 2], q, INFINITY, policy))
    spec = SeriesSpec(UNILATERAL, (beta ** 2, beta), (q * beta,), q,
                      complex(t1) * complex(t2))
    return pref * eval_phi(spec, policy)


def bilateral_delta_integral(n: int, beta: float, q: float,
                             tol: float = 1e-9,
                             policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """(1/2pi) int C_n(x; beta^2, 1/beta | q) w(x | beta) dx.

    For sqrt(q) < beta < 1 this equals bilateral_delta_rhs(beta, q) times
    delta_{n,0}.  The bilateral family parameters are (beta^2, 1/beta);
    the weight parameter is beta itself and is used as a formal integrand
    (it is pointwise positive for any real beta), without enforcing the
    positivity window, so the integral is computable outside the window
    too -- where the pure-integral identity no longer holds because the
    underlying measure acquires discrete mass points for beta > 1.
    """
    q = check_real_base(q)
    beta = float(beta)
    if beta <= 0:
        raise DomainError("beta must be positive")
    if not q < beta ** 2:
        raise RegionError(
            "the integrand family needs |q/beta^2| < 1 on the unit circle")
    params = UltraParams(beta ** 2, 1.0 / beta, q)

    def f(sp):
        return bilateral_cn(n, sp, params, policy).value

    # bypass the WeightParams window check: weight used as formal integrand
    return _integrate_raw(f, beta, q, tol, policy).value


def bilateral_delta_rhs(beta: float, q: float,
                        policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """(q; q)_inf^2 (beta, q/beta^2; q)_inf / ((q/beta; q)_inf^3
    (beta^2; q)_inf)."""
    q = check_real_base(q)
    beta = float(beta)
    num = poch(q, q, INFINITY, policy) ** 2 * poch_multi(
        [beta, q / beta ** 2], q, INFINITY, policy)
    den = poch(q / beta, q, INFINITY, policy) ** 3 * poch(
        beta ** 2, q, INFINITY, policy)
    return num / den


def shifted_orthogonality_rhs(params: UltraParams,
                              policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """The (0, 0) value of the shifted-orthogonality closed form:
    (q; q)^3 (q/b; q)^4 (b, qb; q) / ((q g; q)^4 (q/(b g); q)^4 (b^2; q))
    2phi1(b^2, b; q b; q, q/(b^2 g)), all products to infinity."""
    q, beta, gamma = params.q, params.beta, params.gamma
    rho = q / (beta ** 2 * gamma)
    pref = (poch(q, q, INFINITY, policy) ** 3
            * poch(q / beta, q, INFINITY, policy) ** 4
            * poch_multi([beta, q * beta], q, INFINITY, policy))
    pref /= (poch(q * gamma, q, INFINITY, policy) ** 4
             * poch(q / (beta * gamma), q, INFINITY, policy) ** 4
             * poch(beta ** 2, q, INFINITY, policy))
    spec = SeriesSpec(UNILATERAL, (beta ** 2, beta), (q * beta,), q, rho)
    return pref * eval_phi(spec, policy)


def shifted_orthogonality_pair(m: int, n: int, params: UltraParams,
                               tol: float = 1e-6,
                               policy: TruncationPolicy = DEFAULT_POLICY,
                               k_extra: int = 0):
    """lhs and rhs of the shifted orthogonality relation.

    lhs = (1/2pi) int sum_k C_{m+k} C_{n+k} (q/(beta^2 gamma))^k w dx with
    the k-sum truncated adaptively (shells added until their contribution
    is below tol) inside a node-doubling quadrature; k_extra forces extra
    shells beyond acceptance (used to check split independence).

    rhs = shifted_orthogonality_rhs(params) * (beta^2 gamma / q)^n * delta_{mn};
    the diagonal scaling factor is applied as an exact power so rhs(n) /
    rhs(0) == (beta^2 gamma / q)^n holds exactly.
    """
    q = check_real_base(params.q)
    if params.beta.imag or params.gamma.imag:
        raise DomainError("shifted orthogonality uses real beta, gamma")
    beta, gamma = params.beta.real, params.gamma.real
    WeightParams(beta, q)  # positivity window check
    rho = q / (beta ** 2 * gamma)
    if not abs(rho) < 1:
        raise RegionError("shifted orthogonality needs |q/(beta^2 gamma)| < 1")
    scale = beta ** 2 * gamma / q
    rhs0 = shifted_orthogonality_rhs(params, policy)
    rhs = rhs0 * scale ** n if m == n else 0.0 + 0j

    nnodes = 64
    prev = None
    kprev = 8
    while True:
        thetas = math.pi / nnodes * np.arange(1, nnodes)
        zs = np.exp(1j * thetas)
        sp = SpectralPoint(zs)
        wts = _circle_weight(thetas, beta, q, policy)
        cvals = {}

        def cj(j):
            if j not in cvals:
                cvals[j] = bilateral_cn(j, sp, params, policy).value
            return cvals[j]

        def shell_integral(k):
            vals = cj(m + k) * cj(n + k) * rho ** k
            if k != 0:
                vals = vals + cj(m - k) * cj(n - k) * rho ** (-k)
            return complex(np.sum(vals * wts)) / (2 * nnodes)

        total = shell_integral(0)
        small = 0
        k = 0
        while True:
            k += 1
            contrib = shell_integral(k)
            total += contrib
            if abs(contrib) <= tol * max(1.0, abs(total)) / 64.0:
                small += 1
                if small >= 2 and k >= kprev:
                    break
            else:
                small = 0
            if k > policy.max_terms:
                raise NonConvergence("shifted-orthogonality shells failed to decay")
        for _ in range(k_extra):
            k += 1
            total += shell_integral(k)
        kprev = k
        if prev is not None and abs(total - prev) <= tol * max(1.0, abs(total)) / 4.0:
            return complex(total), complex(rhs)
        prev = total
        nnodes *= 2
        if nnodes > 2 ** 14:
            raise NonConvergence("shifted-orthogonality quadrature failed to settle")
