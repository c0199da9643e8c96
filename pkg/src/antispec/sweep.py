"""Parameter sweeps, trajectory linking and threshold bisection.

A *family* is any object with ``name``, ``param_name`` and a method
``spectrum(param) -> list of (E, RepKind)``. Three are provided: the finite
difference and matching backends of the square well, and a planted family.
"""

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg
from scipy.optimize import linear_sum_assignment

from . import defaults
from ._jsonio import atomic_write
from .classifier import RepKind, classify, kinds_for_involution
from .errors import BracketInvalid, NotDiagonalizable
from .models.planted import build_planted
from .models.square_well import build_square_well, build_square_well_real, square_well_matching

__all__ = [
    "SquareWellFD",
    "SquareWellMatching",
    "PlantedFamily",
    "SweepResult",
    "ThresholdResult",
    "sweep",
    "find_threshold",
    "link_spectra",
    "pair_count",
    "lowest_levels",
    "max_workers",
]

_HUNGARIAN_MAX = 64


def max_workers(n_tasks):
    """Thread count for ``n_tasks`` points, capped by ``ANTISPEC_THREADS``."""
    cap = os.environ.get("ANTISPEC_THREADS")
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = max(1, int(cap))
        except ValueError:
            pass
    return max(1, min(limit, n_tasks))


def lowest_levels(w, n, tol_real=defaults.TOL_REAL):
    """The ``n`` eigenvalues of lowest real part, never splitting a conjugate pair.

    A complex pair that would only partly fit is skipped in favour of the
    next real level, so the returned count is always ``n`` (when available).
    """
    w = np.asarray(w, dtype=np.complex128)
    w = w[np.lexsort((-w.imag, w.real))]
    real = np.abs(w.imag) <= tol_real * np.maximum(1.0, np.abs(w))
    out, used = [], np.zeros(w.size, dtype=bool)
    for i in range(w.size):
        if len(out) >= n:
            break
        if used[i]:
            continue
        if real[i]:
            out.append(w[i].real + 0j)
            used[i] = True
            continue
        cand = np.nonzero(~used & ~real)[0]
        cand = cand[cand != i]
        if cand.size == 0:
            continue
        j = cand[np.argmin(np.abs(w[cand] - np.conj(w[i])))]
        used[i] = used[j] = True
        if len(out) + 2 <= n:
            out.extend([w[i], w[j]])
    out = np.array(out, dtype=np.complex128)
    return out[np.lexsort((-out.imag, out.real))]


def pair_count(energies, tol_real=defaults.TOL_REAL):
    e = np.asarray(energies, dtype=np.complex128)
    return int(np.sum(e.imag > tol_real * np.maximum(1.0, np.abs(e))))


class SquareWellFD:
    """Finite-difference square well, tracking the lowest ``n_levels`` states.

    ``solver="sparse"`` (default) uses shift-invert Arnoldi about ``E = 0`` on
    the real form of ``H``; ``"dense"`` computes all eigenvalues of the real
    form. Either way only the lowest states are reported: the discrete
    spectrum is mirror symmetric under ``E -> 4/h^2 - E``, so the top of the
    band turns complex at the same coupling. ``classify=True`` runs the full
    classifier on the complex ``H`` instead (slow for large ``N``).
    """

    param_name = "Z"

    def __init__(self, N=2000, n_levels=6, solver="sparse", classify=False, tol=defaults.TOL_PROP):
        if solver not in ("sparse", "dense"):
            raise ValueError(f"unknown solver {solver!r}")
        self.N = int(N)
        self.n_levels = int(n_levels)
        self.solver = solver
        self.classify = bool(classify)
        self.tol = tol
        self.name = "square-well-fd"

    def eigenvalues(self, Z):
        hr = build_square_well_real(Z, self.N)
        if self.solver == "dense":
            w = scipy.linalg.eigvals(hr, check_finite=False)
            return w[w.real < 2.0 * (self.N + 1) ** 2 / 4.0]
        k = min(self.n_levels + 6, self.N - 2)
        return scipy.sparse.linalg.eigs(
            scipy.sparse.csc_matrix(hr), k=k, sigma=0.0, return_eigenvectors=False, tol=0
        )

    def spectrum(self, Z):
        if self.classify:
            h, a = build_square_well(Z, self.N)
            rep = classify(h, a, tol=self.tol)
            items = [(e, b.kind) for b in rep.blocks for e in b.energies]
            keep = lowest_levels([e for e, _ in items], self.n_levels)
            return [(e, next(k for x, k in items if x == e or abs(x - e) < 1e-12 * max(1, abs(e)))) for e in keep]
        w = lowest_levels(self.eigenvalues(Z), self.n_levels)
        return list(zip(w, kinds_for_involution(w)))


class SquareWellMatching:
    """Continuum square well from the matching condition.

    Kinds come from the reconstructed wave functions: a state mapped onto
    itself by PT is ``GammaPlus1D``, otherwise it belongs to a
    ``GammaPlus2D`` pair.
    """

    param_name = "Z"

    def __init__(self, n_levels=6, grid=24, re_max=None):
        self.n_levels = int(n_levels)
        self.grid = int(grid)
        self.re_max = float(re_max) if re_max is not None else ((self.n_levels + 3) * np.pi / 2) ** 2
        self.name = "square-well-matching"

    def spectrum(self, Z):
        sols = square_well_matching(Z, (0.0, self.re_max, None, None), grid=self.grid)
        keep = lowest_levels([s.E for s in sols], self.n_levels)
        out = []
        for e in keep:
            s = min(sols, key=lambda s: abs(s.E - e))
            kind = RepKind.GammaPlus1D if s.pt_overlap() > 1 - 1e-6 else RepKind.GammaPlus2D
            out.append((e, kind))
        return out


class PlantedFamily:
    """Planted problems along a parameter: ``plan_fn(t)`` returns a plan."""

    param_name = "t"

    def __init__(self, plan_fn, tol=defaults.TOL_PROP):
        self.plan_fn = plan_fn if callable(plan_fn) else (lambda t, _p=plan_fn: _p)
        self.tol = tol
        self.name = "planted"

    def spectrum(self, t):
        h, a, _ = build_planted(self.plan_fn(t))
        rep = classify(h, a, tol=self.tol)
        items = [(e, b.kind) for b in rep.blocks for e in b.energies]
        items.sort(key=lambda it: (it[0].real, -it[0].imag))
        return items


def _greedy_assignment(cost):
    order = np.dstack(np.unravel_index(np.argsort(cost, axis=None), cost.shape))[0]
    rows, cols = set(), set()
    pairs = []
    for i, j in order:
        if i in rows or j in cols:
            continue
        rows.add(i)
        cols.add(j)
        pairs.append((i, j))
    pairs.sort()
    return np.array([p[0] for p in pairs], dtype=int), np.array([p[1] for p in pairs], dtype=int)


def link_spectra(prev, nxt):
    """Index map ``link[i] = j`` from ``prev[i]`` to ``nxt[j]`` (``-1`` if unmatched).

    Optimal assignment on ``|Delta E|`` up to 64 levels, greedy nearest
    neighbour above.
    """
    prev = np.asarray(prev, dtype=np.complex128)
    nxt = np.asarray(nxt, dtype=np.complex128)
    link = -np.ones(prev.size, dtype=int)
    if prev.size == 0 or nxt.size == 0:
        return link
    cost = np.abs(prev[:, None] - nxt[None, :])
    if max(prev.size, nxt.size) <= _HUNGARIAN_MAX:
        rows, cols = linear_sum_assignment(cost)
    else:
        rows, cols = _greedy_assignment(cost)
    link[rows] = cols
    return link


@dataclass
class ThresholdResult:
    z_c: float
    bracket_width: float
    lo: float
    hi: float
    history: list = field(default_factory=list)

    def to_json(self):
        return {"Z_c": self.z_c, "bracket": self.bracket_width, "lo": self.lo, "hi": self.hi}

    def final_gaps(self, n=5):
        """Gap of the coalescing real levels at the last ``n`` below-threshold iterates."""
        return [h["gap"] for h in self.history if not h["above"] and h.get("gap") is not None][-n:]


@dataclass
class SweepResult:
    param_name: str
    param_values: np.ndarray
    spectra: list
    errors: list
    links: list
    pair_counts: list
    transitions: list
    threshold: ThresholdResult = None

    @property
    def first_transition(self):
        """``(lo, hi)`` of the first interval where the pair count grows, or ``None``."""
        if not self.transitions:
            return None
        i = self.transitions[0]
        return float(self.param_values[i]), float(self.param_values[i + 1])

    def branch_ids(self):
        """Per-point branch labels following ``links``; new ids start where a link breaks."""
        ids, next_id = [], 0
        for k, spec in enumerate(self.spectra):
            cur = -np.ones(len(spec), dtype=int)
            if k > 0:
                for i, j in enumerate(self.links[k - 1]):
                    if j >= 0:
                        cur[j] = ids[k - 1][i]
            for j in range(cur.size):
                if cur[j] < 0:
                    cur[j] = next_id
                    next_id += 1
            ids.append(cur)
        return ids

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param", "branch_id", "re_E", "im_E", "rep_kind"])
        for p, spec, bids in zip(self.param_values, self.spectra, self.branch_ids()):
            for (e, kind), b in zip(spec, bids):
                w.writerow([f"{p:.17g}", int(b), f"{e.real:.17g}", f"{e.imag:.17g}", RepKind(kind).value])
        return buf.getvalue()

    def write_csv(self, path):
        atomic_write(path, self.to_csv())


def _evaluate(family, p):
    try:
        return family.spectrum(p), None
    except NotDiagonalizable as exc:
        return [], str(exc)


def sweep(family, lo, hi, steps, refine=False, tol_param=defaults.TOL_PARAM):
    """Evaluate ``family`` at ``steps`` equally spaced parameter values.

    Points are computed concurrently (``ANTISPEC_THREADS`` caps the pool);
    a ``NotDiagonalizable`` point is recorded in ``errors`` with an empty
    spectrum and the sweep continues. With ``refine=True`` the first interval
    where the number of complex pairs grows is bisected by
    :func:`find_threshold`.
    """
    if int(steps) != steps or steps < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps}")
    if not hi > lo:
        raise ValueError(f"empty parameter range [{lo}, {hi}]")
    params = np.linspace(lo, hi, int(steps))
    with ThreadPoolExecutor(max_workers=max_workers(len(params))) as pool:
        results = list(pool.map(lambda p: _evaluate(family, p), params))
    spectra = [r[0] for r in results]
    errors = [r[1] for r in results]
    energies = [np.array([e for e, _ in s], dtype=np.complex128) for s in spectra]
    links = [link_spectra(energies[k], energies[k + 1]) for k in range(len(params) - 1)]
    counts = [pair_count(e) if err is None else None for e, err in zip(energies, errors)]
    transitions = []
    for k in range(len(params) - 1):
        a, b = counts[k], counts[k + 1]
        if a is not None and (b is None or b > a):
            transitions.append(k)
    result = SweepResult(family.param_name, params, spectra, errors, links, counts, transitions)
    if refine:
        if not transitions:
            raise BracketInvalid(f"complex-pair count does not grow anywhere in [{lo}, {hi}]")
        result.threshold = find_threshold(family, result.first_transition, tol_param)
    return result


def find_threshold(family, bracket, tol_param=defaults.TOL_PARAM, max_iter=200):
    """Bisect for the coupling where the number of complex pairs changes.

    The predicate at ``p`` is "pair count differs from the count at the lower
    end"; a ``NotDiagonalizable`` point counts as above threshold.

    Returns
    -------
    ThresholdResult
        Midpoint and width of the final bracket, plus the evaluation history
        (``param``, ``pairs``, ``above``, and for points below threshold the
        ``gap`` between the two real levels that coalesce).

    Raises
    ------
    BracketInvalid
        If the predicate agrees at both ends.
    """
    lo, hi = map(float, bracket)
    if not hi > lo:
        raise BracketInvalid(f"bracket [{lo}, {hi}] is empty")
    history = []

    def probe(p):
        spec, err = _evaluate(family, p)
        e = np.array([x for x, _ in spec], dtype=np.complex128)
        entry = {"param": p, "pairs": None if err else pair_count(e), "spectrum": e, "error": err}
        history.append(entry)
        return entry

    base = probe(lo)
    if base["error"]:
        raise BracketInvalid(f"lower end {lo} is not diagonalizable: {base['error']}")
    n0 = base["pairs"]
    base["above"] = False

    def above(entry):
        entry["above"] = entry["pairs"] is None or entry["pairs"] != n0
        return entry["above"]

    if not above(probe(hi)):
        raise BracketInvalid(f"complex-pair count is {n0} at both ends of [{lo}, {hi}]")
    it = 0
    while hi - lo > tol_param and it < max_iter:
        mid = 0.5 * (lo + hi)
        if above(probe(mid)):
            hi = mid
        else:
            lo = mid
        it += 1
    _annotate_gaps(history)
    for h in history:
        h.pop("spectrum")
    return ThresholdResult(0.5 * (lo + hi), hi - lo, lo, hi, history)


def _annotate_gaps(history):
    """Gap of the two real levels closest to the pair born at the threshold."""
    top = min((h for h in history if h["above"] and h["pairs"] is not None), key=lambda h: h["param"], default=None)
    if top is None:
        return
    e = top["spectrum"]
    fresh = e[e.imag > defaults.TOL_REAL * np.maximum(1.0, np.abs(e))]
    if fresh.size == 0:
        return
    center = fresh[np.argmin(fresh.imag)].real
    for h in history:
        if h["above"] or h["error"]:
            continue
        real = np.sort(h["spectrum"][np.abs(h["spectrum"].imag) <= defaults.TOL_REAL * np.maximum(1.0, np.abs(h["spectrum"]))].real)
        if real.size < 2:
            continue
        j = np.argsort(np.abs(real - center))[:2]
        h["gap"] = float(abs(real[j[0]] - real[j[1]]))
