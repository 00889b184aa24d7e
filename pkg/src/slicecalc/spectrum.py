"""S-spectrum and S-resolvent of paravector operators.

The S-spectrum of T collects the paravectors s for which the quadratic
pencil T^2 - 2 Re[s] T + |s|^2 I fails to be invertible.  It depends on s
only through (u, r) = (Re[s], |vec(s)|): a component with r = 0 is a real
point, one with r > 0 is a full (n-1)-sphere.  Because
rep(pencil) = q(rep(T)) with q(x) = x^2 - 2 u x + (u^2 + r^2), whose roots
are u +/- i r, the pencil is singular exactly when u + i r is a complex
eigenvalue of the real matrix rep(T); the exact method reads the spectrum
off an eigendecomposition and the grid scan cross-checks it through
smallest singular values.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .clifford import Multivector, Paravector
from .errors import ConvergenceError, SingularOperatorError, SpectrumHitError
from .operators import CliffordMatrix, REP_SINGULARITY_RTOL

CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class SpectrumComponent:
    """One point (r = 0) or sphere (r > 0) of the S-spectrum."""

    u: float
    r: float
    multiplicity: int

    def point(self) -> tuple[float, float]:
        return (self.u, self.r)


@dataclass
class SpectrumReport:
    components: list
    method: str
    cluster_tol: float
    singular_tol: float | None = None
    step: float | None = None
    component_norm: float | None = None
    rep_norm: float | None = None
    extras: dict = field(default_factory=dict)

    def points(self) -> np.ndarray:
        return np.array([(c.u, c.r) for c in self.components], dtype=float)

    def plane_points(self) -> np.ndarray:
        """Intersections (u, +/-r) of the components with any slice plane."""
        pts = []
        for c in self.components:
            pts.append((c.u, c.r))
            if c.r > 0:
                pts.append((c.u, -c.r))
        return np.array(pts, dtype=float)

    def distance_to(self, u: float, v: float) -> float:
        """Distance from the plane point (u, v) to the spectrum in a slice."""
        pts = self.plane_points()
        return float(np.min(np.hypot(pts[:, 0] - u, pts[:, 1] - v)))

    def csv_rows(self):
        for c in self.components:
            yield (repr(c.u), repr(c.r), str(c.multiplicity), self.method)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("u", "r", "multiplicity", "method"))
            writer.writerows(self.csv_rows())


def cluster_points(points: np.ndarray, radius: float, weights=None):
    """Greedy chained clustering; returns (centroid, total weight) pairs.

    Points within `radius` of a growing cluster centroid merge into it.
    Input order is normalized by sorting, so the outcome is deterministic.
    """
    if len(points) == 0:
        return []
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    w = np.ones(len(pts)) if weights is None else np.asarray(weights, dtype=float)
    order = np.lexsort(pts.T[::-1])
    pts, w = pts[order], w[order]
    centroids, sums, counts = [], [], []
    for p, wi in zip(pts, w):
        placed = False
        for i, c in enumerate(centroids):
            if np.linalg.norm(p - c) <= radius:
                sums[i] += p * wi
                counts[i] += wi
                centroids[i] = sums[i] / counts[i]
                placed = True
                break
        if not placed:
            centroids.append(p.copy())
            sums.append(p * wi)
            counts.append(wi)
    out = sorted(
        (tuple(c.tolist()), cnt) for c, cnt in zip(centroids, counts)
    )
    return out


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two finite point sets."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("hausdorff distance needs nonempty point sets")
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


# -- pencil and spectra ------------------------------------------------------


def pencil(T: CliffordMatrix, u: float, r: float) -> CliffordMatrix:
    """The quadratic pencil T^2 - 2 u T + (u^2 + r^2) I."""
    if r < 0:
        raise ValueError("sphere radius r must be nonnegative")
    alg = T.algebra
    T2 = T.compose(T)
    return T2 - (2.0 * u) * T + (u * u + r * r) * CliffordMatrix.identity(alg, T.d)


def _pencil_rep(rep_T: np.ndarray, rep_T2: np.ndarray, u: float, r: float) -> np.ndarray:
    D = rep_T.shape[0]
    return rep_T2 - (2.0 * u) * rep_T + (u * u + r * r) * np.eye(D)


def s_spectrum_exact(T: CliffordMatrix, cluster_tol: float = CLUSTER_TOL) -> SpectrumReport:
    """S-spectrum through complex eigenvalues of rep(T).

    Eigenvalues lambda map to (Re lambda, |Im lambda|); conjugate pairs
    collapse onto one sphere and multiplicity counts the eigenvalues that
    land in each cluster.
    """
    eigs = np.linalg.eigvals(T.rep())
    pts = np.column_stack([eigs.real, np.abs(eigs.imag)])
    clusters = cluster_points(pts, cluster_tol)
    # a sphere radius below the clustering resolution is a real point
    comps = [
        SpectrumComponent(
            u=c[0],
            r=c[1] if c[1] > cluster_tol else 0.0,
            multiplicity=int(round(cnt)),
        )
        for c, cnt in clusters
    ]
    comp, rep = T.norms()
    return SpectrumReport(
        components=comps,
        method="exact",
        cluster_tol=cluster_tol,
        component_norm=comp,
        rep_norm=rep,
    )


def _grid_minima(sigma: np.ndarray, flagged: np.ndarray, coords, nms_radius: float):
    """Representatives of the flagged region: local minima of sigma over the
    grid, thinned so that no two survivors lie within nms_radius.

    A flagged point survives when no grid neighbor (Chebyshev distance 1)
    has smaller sigma, ties going to the lexicographically first index;
    survivors are then accepted in ascending sigma order, suppressing any
    later survivor within nms_radius of an accepted one.
    """
    shape = sigma.shape
    candidates = []
    for idx in zip(*np.nonzero(flagged)):
        s0 = sigma[idx]
        is_min = True
        for delta in np.ndindex(*(3,) * len(shape)):
            nb = tuple(idx[k] + delta[k] - 1 for k in range(len(shape)))
            if nb == idx or any(not 0 <= nb[k] < shape[k] for k in range(len(shape))):
                continue
            if sigma[nb] < s0 or (sigma[nb] == s0 and nb < idx):
                is_min = False
                break
        if is_min:
            candidates.append(idx)
    candidates.sort(key=lambda idx: (sigma[idx], idx))
    accepted = []
    for idx in candidates:
        point = np.array([coords[k][idx[k]] for k in range(len(shape))])
        if all(np.linalg.norm(point - q) > nms_radius for q in accepted):
            accepted.append(point)
    return [tuple(p.tolist()) for p in accepted]


def s_spectrum_scan(
    T: CliffordMatrix,
    u_range: tuple[float, float] | None = None,
    r_range: tuple[float, float] | None = None,
    step: float | None = None,
    tol: float = 1e-8,
) -> SpectrumReport:
    """Grid scan for pencil singularity, an eigen-free cross-check.

    Flags grid points where the smallest singular value of the pencil falls
    below tol times a fixed scan-wide pencil scale and keeps the local
    minima of that singular value, one representative per spectral basin.
    The scale is shared across the grid because the per-point largest
    singular value is useless exactly where it matters most: for a d = 1
    paravector-type operator the whole pencil vanishes at a spectral point,
    so nearby all its singular values shrink together.  The strict default
    tol detects components lying on the grid; finding off-grid components
    needs tol roughly of order step over the operator scale, at which point
    representatives track the true components to about one grid step.
    """
    comp, rep_n = T.norms()
    bound = max(rep_n, 1e-12)
    if step is None:
        step = bound / 100.0
    if u_range is None:
        u_range = (-bound - step, bound + step)
    if r_range is None:
        r_range = (0.0, bound + step)
    us = np.arange(u_range[0], u_range[1] + step / 2, step)
    rs = np.arange(max(r_range[0], 0.0), r_range[1] + step / 2, step)
    rep_T = T.rep()
    rep_T2 = rep_T @ rep_T
    norm_T = np.linalg.norm(rep_T, 2)
    norm_T2 = np.linalg.norm(rep_T2, 2)
    u_max = max(abs(us[0]), abs(us[-1]))
    pencil_scale = norm_T2 + 2.0 * u_max * norm_T + u_max**2 + float(rs[-1]) ** 2
    sigma = np.empty((len(us), len(rs)))
    for i, u in enumerate(us):
        for j, r in enumerate(rs):
            sv = np.linalg.svd(_pencil_rep(rep_T, rep_T2, u, r), compute_uv=False)
            sigma[i, j] = sv[-1] / pencil_scale
    flagged = sigma <= tol
    if not np.any(flagged):
        raise ValueError(
            "scan found no singular grid points although the S-spectrum is "
            "never empty; increase tol or refine step"
        )
    reps = _grid_minima(sigma, flagged, (us, rs), nms_radius=1.5 * step)
    comps = [
        SpectrumComponent(u=p[0], r=max(p[1], 0.0), multiplicity=1)
        for p in sorted(reps)
    ]
    return SpectrumReport(
        components=comps,
        method="scan",
        cluster_tol=CLUSTER_TOL,
        singular_tol=tol,
        step=step,
        component_norm=comp,
        rep_norm=rep_n,
    )


def containment_check(T: CliffordMatrix, report: SpectrumReport | None = None) -> dict:
    """Whether every component sits inside each candidate norm ball.

    The representation-norm ball always contains the spectrum; the
    component-norm ball can fail (it is not an operator norm), so both
    verdicts are reported rather than asserted.
    """
    report = report or s_spectrum_exact(T)
    comp, rep_n = T.norms()
    radii = [math.hypot(c.u, c.r) for c in report.components]
    rmax = max(radii)
    return {
        "max_component_radius": rmax,
        "component_norm": comp,
        "rep_norm": rep_n,
        "within_component_ball": rmax <= comp + 1e-10 * max(comp, 1.0),
        "within_rep_ball": rmax <= rep_n + 1e-10 * max(rep_n, 1.0),
    }


def pencil_null_vectors(T: CliffordMatrix, u: float, r: float, tol: float = 1e-8) -> np.ndarray:
    """Unit null vectors of rep(pencil) at (u, r), one per column.

    These realize the eigenvalue equation behind S-spectrum membership; no
    canonical normalization exists beyond unit length in rep coordinates.
    """
    M = pencil(T, u, r).rep()
    U, s, Vt = np.linalg.svd(M)
    mask = s <= tol * max(s[0], 1e-300)
    return Vt[mask].T


# -- resolvents ---------------------------------------------------------------


def s_resolvent(s: Paravector, T: CliffordMatrix, rel_tol: float = REP_SINGULARITY_RTOL) -> CliffordMatrix:
    """Closed-form S-resolvent -(T^2 - 2 Re[s] T + |s|^2 I)^(-1) (T - conj(s) I)."""
    u, r = s.x0, s.vec_norm()
    P = pencil(T, u, r)
    try:
        Pinv = P.invert(rel_tol=rel_tol)
    except SingularOperatorError as exc:
        raise SpectrumHitError(u, r) from exc
    alg = T.algebra
    B = T.add_scalar(-s.conj().to_multivector(alg))
    return -Pinv.compose(B)


def s_resolvent_series(s: Paravector, T: CliffordMatrix, terms: int) -> CliffordMatrix:
    """Partial sum sum_{m <= terms} T^m s^(-1-m).

    Converges to the closed form at geometric rate rep_norm(T)/|s| and only
    when that ratio is below one; a warning is emitted otherwise.
    """
    rep_n = T.rep_norm()
    mod_s = abs(s)
    if rep_n >= mod_s:
        warnings.warn(
            f"series may diverge: rep_norm(T)={rep_n:.3g} >= |s|={mod_s:.3g}",
            RuntimeWarning,
            stacklevel=2,
        )
    alg = T.algebra
    plane = s.plane()
    z = complex(s.x0, s.vec_norm())
    acc = CliffordMatrix.zero(alg, T.d)
    Tpow = CliffordMatrix.identity(alg, T.d)
    for m in range(terms + 1):
        zp = z ** (-1 - m)
        coeff = _plane_multivector(alg, plane, zp)
        acc = acc + Tpow.right_mul(coeff)
        if m < terms:
            Tpow = Tpow.compose(T)
    return acc


def _plane_multivector(alg, plane, z: complex) -> Multivector:
    """The element Re(z) + Im(z) I of the slice plane as a multivector."""
    c = np.zeros(alg.dim)
    c[0] = z.real
    for j in range(plane.n):
        c[1 << j] = z.imag * plane.dirs[j]
    return Multivector(alg, c)


def left_resolvent_expansion(s: Paravector, T: CliffordMatrix, terms: int) -> CliffordMatrix:
    """Partial sum sum_m (Re[s] I - T)^(-m-1) (Re[s] - s)^m.

    Requires Re[s] I - T invertible and |vec(s)| times the representation
    norm of its inverse below one; under that condition the sum converges
    to the closed-form S-resolvent for any real part, which is why
    admissibility depends on |vec(s)| alone.
    """
    alg = T.algebra
    u = s.x0
    A = CliffordMatrix.identity(alg, T.d) * u - T
    B = A.invert()
    ratio = s.vec_norm() * B.rep_norm()
    if ratio >= 1.0:
        raise ConvergenceError(
            f"expansion condition violated: |vec(s)| * ||(Re[s] I - T)^-1|| = {ratio:.3g} >= 1"
        )
    plane = s.plane()
    z = complex(0.0, -s.vec_norm())  # Re[s] - s in plane coordinates
    acc = CliffordMatrix.zero(alg, T.d)
    Bpow = B
    for m in range(terms + 1):
        coeff = _plane_multivector(alg, plane, z ** m)
        acc = acc + Bpow.right_mul(coeff)
        if m < terms:
            Bpow = Bpow.compose(B)
    return acc


def resolvent_equation_residual(s: Paravector, T: CliffordMatrix) -> float:
    """Representation norm of S^(-1)(s,T) s - T S^(-1)(s,T) - I."""
    alg = T.algebra
    R = s_resolvent(s, T)
    lhs = R.right_mul(s.to_multivector(alg)) - T.compose(R)
    return lhs.diff_rep_norm(CliffordMatrix.identity(alg, T.d))


# -- commuting-tuple comparison spectrum --------------------------------------


def commuting_joint_spectrum(
    mats,
    grids=None,
    tol: float = 1e-3,
    commute_tol: float = 1e-12,
):
    """Joint spectrum of commuting real-spectrum matrices by grid search.

    Flags grid points lambda in R^n where sum_j (lambda_j I - T_j)^2 has a
    smallest singular value below tol times a fixed scan-wide pencil scale,
    and keeps one local minimum per basin; for commuting matrices with real
    spectra the singular points are exactly the joint eigenvalue tuples.
    The absolute threshold matters: near a joint eigenvalue the pencil can
    be a tiny multiple of the identity, which no relative test flags.
    """
    mats = [np.asarray(m, dtype=float) for m in mats]
    d = mats[0].shape[0]
    for m in mats:
        if m.shape != (d, d):
            raise ValueError("matrices must share one square shape")
    scale = max(max(np.linalg.norm(m, 2) for m in mats), 1e-300)
    for i, a in enumerate(mats):
        for b in mats[i + 1:]:
            if np.linalg.norm(a @ b - b @ a, 2) > commute_tol * scale * scale:
                raise ValueError("matrices do not commute")
    for m in mats:
        ev = np.linalg.eigvals(m)
        if np.max(np.abs(ev.imag)) > 1e-10 * max(np.max(np.abs(ev)), 1.0):
            raise ValueError("matrix with non-real spectrum")
    if grids is None:
        grids = []
        for m in mats:
            ev = np.linalg.eigvals(m).real
            lo, hi = ev.min() - 0.5, ev.max() + 0.5
            grids.append(np.arange(lo, hi + 1e-12, (hi - lo) / 100.0))
    grids = [np.asarray(g, dtype=float) for g in grids]
    shape = tuple(len(g) for g in grids)
    total = int(np.prod(shape))
    if total > 2_000_000:
        raise ValueError(f"grid too large ({total} points)")
    pencil_scale = sum(
        (float(np.max(np.abs(g))) + np.linalg.norm(m, 2)) ** 2
        for g, m in zip(grids, mats)
    )
    eye = np.eye(d)
    sigma = np.empty(shape)
    for idx in np.ndindex(shape):
        lam = [grids[j][idx[j]] for j in range(len(grids))]
        M = sum((lj * eye - Tj) @ (lj * eye - Tj) for lj, Tj in zip(lam, mats))
        sigma[idx] = np.linalg.svd(M, compute_uv=False)[-1]
    flagged = sigma <= tol * pencil_scale
    step = max(float(np.max(np.diff(g))) if len(g) > 1 else 1.0 for g in grids)
    return sorted(_grid_minima(sigma, flagged, grids, nms_radius=1.5 * step))
