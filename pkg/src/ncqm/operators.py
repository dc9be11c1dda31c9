"""Differential representation of coordinate/momentum operators on polynomials.

Coordinates act by multiplication; the momentum of particle ``i`` is the
first-order operator

    p_i = -i hbar sum_j c[i, j] d/dr_j ,

with ``c[i, i] = 1 - sum_s eps[i, s]`` and ``c[i, j] = eps[j, i]``.
Polynomials are sparse dicts ``{exponents: coefficient}``, so applying the
operators is exact and commutators can be compared coefficient by
coefficient. hbar = 1 throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import IdentityViolation

IDENTITY_TOL = 1e-12


def momentum_coefficients(eps) -> np.ndarray:
    """Matrix ``c`` of the momentum representation for an eps matrix."""
    eps = np.asarray(eps, dtype=float)
    c = eps.T.copy()
    np.fill_diagonal(c, 1.0 - eps.sum(axis=1))
    return c


def expected_commutators(eps) -> np.ndarray:
    """Table ``E[i, k]`` with ``[x_i, p_k] = i hbar E[i, k]``."""
    eps = np.asarray(eps, dtype=float)
    table = eps.copy()
    np.fill_diagonal(table, 1.0 - eps.sum(axis=1))
    return table


def _shift(poly, var, by):
    out = {}
    for exps, coeff in poly.items():
        e = list(exps)
        e[var] += by
        out[tuple(e)] = coeff
    return out


def _mul_var(poly, var):
    return _shift(poly, var, 1)


def _diff(poly, var):
    out = {}
    for exps, coeff in poly.items():
        k = exps[var]
        if k:
            e = list(exps)
            e[var] = k - 1
            key = tuple(e)
            out[key] = out.get(key, 0) + k * coeff
    return out


def _add(a, b, scale=1.0):
    out = dict(a)
    for key, coeff in b.items():
        out[key] = out.get(key, 0) + scale * coeff
    return out


def _max_abs(poly):
    return max((abs(v) for v in poly.values()), default=0.0)


class Representation:
    """Operators for ``n`` particles in ``dims`` Cartesian dimensions."""

    def __init__(self, c, dims=1):
        self.c = np.asarray(c, dtype=float)
        self.n = self.c.shape[0]
        self.dims = dims

    def var(self, particle, axis):
        return particle * self.dims + axis

    def x(self, particle, axis=0):
        v = self.var(particle, axis)
        return lambda f: _mul_var(f, v)

    def p(self, particle, axis=0):
        row = self.c[particle]

        def apply(f):
            out = {}
            for j, cij in enumerate(row):
                if cij != 0.0:
                    out = _add(out, _diff(f, self.var(j, axis)), -1j * cij)
            return out

        return apply

    def total_p(self, axis=0):
        parts = [self.p(i, axis) for i in range(self.n)]

        def apply(f):
            out = {}
            for part in parts:
                out = _add(out, part(f))
            return out

        return apply


def commutator(a, b, f):
    return _add(a(b(f)), b(a(f)), -1.0)


def monomial_basis(nvars, degree):
    """All monomials of total degree <= ``degree`` as sparse polynomials."""
    for exps in itertools.product(range(degree + 1), repeat=nvars):
        if sum(exps) <= degree:
            yield {exps: 1.0 + 0j}


@dataclass
class CommutatorReport:
    max_residual: float
    residuals: dict
    poisson: np.ndarray
    n_functions: int

    @property
    def ok(self):
        return self.max_residual <= IDENTITY_TOL


def check_commutator_table(eps, degree=3, dims=1, representation=None, raise_on_violation=True):
    """Verify the full commutator algebra implied by ``eps`` on a polynomial basis.

    Checked on every monomial ``f`` up to ``degree``:

    * ``[x_i, p_k] = i E[i, k]`` along each axis, zero across axes,
    * ``[x_i, x_k] = 0`` and ``[p_i, p_k] = 0``,
    * ``[x_i, P] = i`` for the total momentum ``P``.

    ``representation`` defaults to :func:`momentum_coefficients` of ``eps``;
    pass a different matrix to test a (possibly broken) representation
    against the algebra of ``eps``.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    eps = np.asarray(eps, dtype=float)
    n = eps.shape[0]
    expected = expected_commutators(eps)
    c = momentum_coefficients(eps) if representation is None else representation
    rep = Representation(c, dims)
    nvars = n * dims
    residuals = {"x_p": 0.0, "x_p_cross_axis": 0.0, "x_x": 0.0, "p_p": 0.0, "x_P": 0.0}
    poisson = np.zeros((n, n))
    count = 0
    xs = [[rep.x(i, a) for a in range(dims)] for i in range(n)]
    ps = [[rep.p(i, a) for a in range(dims)] for i in range(n)]
    P = [rep.total_p(a) for a in range(dims)]
    for f in monomial_basis(nvars, degree):
        count += 1
        for a in range(dims):
            for i in range(n):
                for k in range(n):
                    got = commutator(xs[i][a], ps[k][a], f)
                    res = _max_abs(_add(got, f, -1j * expected[i, k]))
                    residuals["x_p"] = max(residuals["x_p"], res)
                    if count == 1 and a == 0:
                        # f = 1: the bracket {x_i, p_k} = [x_i, p_k] / (i hbar)
                        poisson[i, k] = (got.get(next(iter(f)), 0) / 1j).real
                    for b in range(dims):
                        if b != a:
                            res = _max_abs(commutator(xs[i][a], ps[k][b], f))
                            residuals["x_p_cross_axis"] = max(residuals["x_p_cross_axis"], res)
                    if k > i:
                        res = _max_abs(commutator(xs[i][a], xs[k][a], f))
                        residuals["x_x"] = max(residuals["x_x"], res)
                        res = _max_abs(commutator(ps[i][a], ps[k][a], f))
                        residuals["p_p"] = max(residuals["p_p"], res)
                res = _max_abs(_add(commutator(xs[i][a], P[a], f), f, -1j))
                residuals["x_P"] = max(residuals["x_P"], res)
    report = CommutatorReport(max(residuals.values()), residuals, poisson, count)
    if raise_on_violation and not report.ok:
        worst = max(residuals, key=residuals.get)
        raise IdentityViolation(
            f"commutator identity {worst} violated, residual {report.max_residual:.3e}",
            report.max_residual,
        )
    return report
