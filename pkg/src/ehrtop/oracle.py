"""Brute-force verification oracle.

Deliberately dumb and independent of the main pipeline: lattice points
of n*p are enumerated over the integer bounding box and membership is
decided by exact (integer-scaled) barycentric coordinates.  The full
quasi-polynomial is then recovered per residue class by solving an
exact Vandermonde system, and compared against the engine's step
polynomials.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import factorial, lcm

from .engine import EhrhartTopResult
from .errors import OracleBudgetError
from .linalg import det, inverse, mat_vec
from .polytope import PowerLinearWeight, SimplePolytope, polytope_period
from .rat import Rat, as_int, format_rat, rat_ceil, rat_den, rat_floor

try:
    import numpy as _np
except ImportError:  # pragma: no cover
    _np = None

_INT64_SAFE = 2 ** 62


@dataclass(frozen=True)
class SampleTable:
    """Counts for one residue class, enough to interpolate degree M+d."""

    residue: int
    samples: tuple  # ((n, value)), n = residue + j*q


def _integer_data(p: SimplePolytope, weight: PowerLinearWeight):
    """Common-denominator integer forms of vertices and the linear form."""
    dd = 1
    for v in p.vertices:
        for x in v:
            dd = lcm(dd, rat_den(x))
    verts = [tuple(as_int(x * dd) for x in v) for v in p.vertices]
    lden = 1
    for x in weight.ell:
        lden = lcm(lden, rat_den(x))
    lint = tuple(as_int(x * lden) for x in weight.ell)
    return dd, verts, lden, lint


def weighted_count(p: SimplePolytope, weight: PowerLinearWeight, n: int,
                   budget: int = 10 ** 8):
    """Exact sum of <ell, x>^M / M! over lattice points of n*p."""
    if n < 0:
        raise ValueError("dilation must be nonnegative")
    d = p.dim
    M = weight.power
    if n == 0:
        return Rat(1) if M == 0 else Rat(0)

    lo = [rat_ceil(n * min(v[j] for v in p.vertices)) for j in range(d)]
    hi = [rat_floor(n * max(v[j] for v in p.vertices)) for j in range(d)]
    sides = [hi[j] - lo[j] + 1 for j in range(d)]
    cells = 1
    for s in sides:
        cells *= max(s, 0)
    if cells == 0:
        return Rat(0)
    if cells > budget:
        raise OracleBudgetError(f"box of {cells} cells exceeds budget {budget}")

    dd, verts, lden, lint = _integer_data(p, weight)
    s0 = verts[0]
    a_cols = [tuple(verts[k][j] - s0[j] for j in range(d)) for k in range(1, d + 1)]
    a_matrix = tuple(zip(*a_cols))
    det_a = det(a_matrix)
    adj = tuple(tuple(as_int(x * det_a) for x in row) for row in inverse(a_matrix))
    sigma = 1 if det_a > 0 else -1
    rhs = n * abs(det_a)

    total = _enumerate(d, lo, hi, sides, cells, dd, s0, adj, sigma, rhs, lint, M, n)
    return Rat(total, lden ** M * factorial(M))


def _enumerate(d, lo, hi, sides, cells, dd, s0, adj, sigma, rhs, lint, M, n):
    use_numpy = _np is not None and _int64_safe(d, lo, hi, dd, s0, adj, rhs, lint, M, n)
    if use_numpy:
        return _enumerate_numpy(d, lo, sides, cells, dd, s0, adj, sigma, rhs, lint, M, n)
    return _enumerate_python(d, lo, hi, dd, s0, adj, sigma, rhs, lint, M, n)


def _int64_safe(d, lo, hi, dd, s0, adj, rhs, lint, M, n):
    max_x = max(max(abs(l), abs(h)) for l, h in zip(lo, hi))
    max_y = dd * max_x + n * max(abs(x) for x in s0)
    max_mu = max(sum(abs(x) for x in row) for row in adj) * max_y
    max_w = (sum(abs(x) for x in lint) * max_x) ** M if M else 1
    chunk = 1 << 16
    return max(max_mu * (d + 1), rhs, max_w * chunk) < _INT64_SAFE


def _enumerate_numpy(d, lo, sides, cells, dd, s0, adj, sigma, rhs, lint, M, n):
    adj_t = _np.array(adj, dtype=_np.int64).T
    s0_arr = _np.array(s0, dtype=_np.int64)
    l_arr = _np.array(lint, dtype=_np.int64)
    total = 0
    chunk = 1 << 16
    for start in range(0, cells, chunk):
        idx = _np.arange(start, min(start + chunk, cells), dtype=_np.int64)
        coords = _np.empty((idx.shape[0], d), dtype=_np.int64)
        rest = idx
        for j in range(d - 1, -1, -1):
            coords[:, j] = rest % sides[j] + lo[j]
            rest = rest // sides[j]
        y = coords * dd - n * s0_arr
        mu = sigma * (y @ adj_t)
        ok = (mu >= 0).all(axis=1) & (mu.sum(axis=1) <= rhs)
        if M == 0:
            total += int(_np.count_nonzero(ok))
        else:
            values = coords @ l_arr
            total += int((values[ok] ** M).sum())
    return total


def _enumerate_python(d, lo, hi, dd, s0, adj, sigma, rhs, lint, M, n):
    from itertools import product

    total = 0
    for x in product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
        y = [x[j] * dd - n * s0[j] for j in range(d)]
        inside = True
        acc = 0
        for row in adj:
            mu = sigma * sum(r * yy for r, yy in zip(row, y))
            if mu < 0:
                inside = False
                break
            acc += mu
        if inside and acc <= rhs:
            total += sum(l * xx for l, xx in zip(lint, x)) ** M if M else 1
    return total


def collect_samples(p: SimplePolytope, weight: PowerLinearWeight, q: int,
                    budget: int = 10 ** 8) -> tuple:
    """One SampleTable per residue class, smallest feasible abscissae."""
    degree = weight.power + p.dim
    tables = []
    for r in range(q):
        samples = tuple(
            (r + j * q, weighted_count(p, weight, r + j * q, budget=budget))
            for j in range(degree + 1))
        tables.append(SampleTable(r, samples))
    return tuple(tables)


def interpolate(p: SimplePolytope, weight: PowerLinearWeight, q: int | None = None,
                budget: int = 10 ** 8) -> dict:
    """Exact coefficients (r, m) -> E_m for n == r (mod q), by Vandermonde."""
    if q is None:
        q = polytope_period(p)
    degree = weight.power + p.dim
    out = {}
    for table in collect_samples(p, weight, q, budget=budget):
        rows = tuple(
            tuple(Rat(n) ** m if m else Rat(1) for m in range(degree + 1))
            for n, _ in table.samples)
        vinv = inverse(rows)
        values = [value for _, value in table.samples]
        for m in range(degree + 1):
            out[(table.residue, m)] = sum(
                (vinv[m][j] * values[j] for j in range(degree + 1)), Rat(0))
    return out


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    residues_checked: int
    coeffs_checked: int
    mismatches: tuple  # (residue, m, engine value, oracle value)

    def to_json(self) -> str:
        payload = {
            "ok": self.ok,
            "residues_checked": self.residues_checked,
            "coeffs_checked": self.coeffs_checked,
            "mismatches": [
                {"residue": r, "m": m, "engine": format_rat(a), "oracle": format_rat(b)}
                for r, m, a, b in self.mismatches
            ],
        }
        return json.dumps(payload, indent=2)

    def summary(self) -> str:
        if self.ok:
            return (f"verified: {self.coeffs_checked} coefficients across "
                    f"{self.residues_checked} residue classes match")
        lines = [f"MISMATCH: {len(self.mismatches)} of {self.coeffs_checked} checks failed"]
        for r, m, a, b in self.mismatches:
            lines.append(f"  n == {r} (mod q), m = {m}: engine {format_rat(a)}"
                         f" != oracle {format_rat(b)}")
        return "\n".join(lines)


def verify_top(result: EhrhartTopResult, p: SimplePolytope,
               weight: PowerLinearWeight, budget: int = 10 ** 8) -> VerifyReport:
    """Compare every computed E_m against interpolation, all residues."""
    q = result.period_q
    table = interpolate(p, weight, q, budget=budget)
    mismatches = []
    checked = 0
    for r in range(q):
        for m, poly in result.coeffs.items():
            checked += 1
            engine_value = poly.eval(r)
            oracle_value = table[(r, m)]
            if engine_value != oracle_value:
                mismatches.append((r, m, engine_value, oracle_value))
    return VerifyReport(not mismatches, q, checked, tuple(mismatches))
