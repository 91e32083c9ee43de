"""Special functions and Gauss-Hermite quadrature.

Hypergeometric functions are evaluated for real arguments only, by the
compiled kernels when they are built and by :mod:`jamnet._pykernels`
otherwise (see :mod:`jamnet._backend`).
"""

from dataclasses import dataclass
from functools import lru_cache
import math
from typing import Callable

import numpy as np

from ._backend import kernels
from .errors import DomainError

MAX_GHQ_ORDER = 64


def gamma(x: float) -> float:
    """Gamma function on the positive reals."""
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma requires a finite x > 0, got {x}")
    return math.gamma(x)


def hyp2f1(a: float, b: float, c: float, x: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; x) for real x < 1."""
    return kernels.hyp2f1(float(a), float(b), float(c), float(x))


def hyp1f1(a: float, b: float, x: float) -> float:
    """Kummer confluent hypergeometric function 1F1(a; b; x)."""
    return kernels.hyp1f1(float(a), float(b), float(x))


def hyp1f2(a: float, b1: float, b2: float, x: float) -> float:
    """Generalized hypergeometric function 1F2(a; b1, b2; x)."""
    return kernels.hyp1f2(float(a), float(b1), float(b2), float(x))


def hyp1f1_array(a: float, b: float, x) -> np.ndarray:
    """Elementwise 1F1 over an array of arguments."""
    return kernels.hyp1f1_array(float(a), float(b), np.asarray(x, dtype=float))


def hyp2f1_array(a: float, b: float, c: float, x) -> np.ndarray:
    """Elementwise 2F1 over an array of arguments."""
    return kernels.hyp2f1_array(float(a), float(b), float(c), np.asarray(x, dtype=float))


@dataclass(frozen=True)
class GhqRule:
    """N-point Gauss-Hermite rule for the weight exp(-x^2)."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def expect_normal(self, f, mu=0.0, sigma=1.0):
        """E[f(X)] for X ~ Normal(mu, sigma^2)."""
        vals = f(mu + math.sqrt(2.0) * sigma * self.nodes)
        return float(np.dot(self.weights, vals) / math.sqrt(math.pi))


@lru_cache(maxsize=None)
def gauss_hermite(n: int) -> GhqRule:
    """Nodes and weights of the n-point Gauss-Hermite rule, 1 <= n <= 64.

    numpy's Golub-Welsch implementation supplies the raw rule; here it is
    made exactly symmetric (odd orders get an exact zero node) and frozen.
    """
    if int(n) != n or not 1 <= n <= MAX_GHQ_ORDER:
        raise DomainError(f"Gauss-Hermite order must be in [1, {MAX_GHQ_ORDER}], got {n}")
    n = int(n)
    x, w = np.polynomial.hermite.hermgauss(n)
    order = np.argsort(x)
    x, w = x[order], w[order]
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    if n % 2:
        x[n // 2] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return GhqRule(n, x, w)


def ghq_lognormal_expectation(f: Callable, sigma_chi: float, n: int, mu_chi: float = 0.0) -> float:
    """E[f(chi)] for log-normal chi = exp(X), X ~ Normal(mu_chi, sigma_chi^2).

    ``f`` is called with a 1-D array of chi values and must return an array of
    the same length (scalars are broadcast).
    """
    if sigma_chi < 0:
        raise DomainError("sigma_chi must be non-negative")
    rule = gauss_hermite(n)
    chi = np.exp(mu_chi + math.sqrt(2.0) * sigma_chi * rule.nodes)
    vals = np.broadcast_to(np.asarray(f(chi), dtype=float), chi.shape)
    return float(np.dot(rule.weights, vals) / math.sqrt(math.pi))


def lognormal_nodes(sigma_chi: float, n: int, mu_chi: float = 0.0):
    """Chi nodes and probability weights (summing to 1) of the n-point rule."""
    rule = gauss_hermite(n)
    chi = np.exp(mu_chi + math.sqrt(2.0) * sigma_chi * rule.nodes)
    return chi, rule.weights / math.sqrt(math.pi)
