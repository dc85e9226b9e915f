"""Magnetic field data, the spectral-gap constant, and the lowest Landau level.

For a field b = b0 + Laplacian(phi_tilde) with b0 > 0 and a bounded radial
phi_tilde, the zero modes of the transverse Pauli component are spanned by
z^k exp(-phi(|z|)) with phi(r) = b0 r^2/4 + phi_tilde(r).  Radial symmetry
keeps distinct angular momenta orthogonal, so the basis is fixed by the
norm of each radial function; those norms grow factorially and are kept in
the log domain from the start.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._quad import QuadratureError, bracket_drop, find_peak, log_integral_batch

OSC_SAMPLES = 10_000
DEFAULT_OSC_RADIUS = 200.0
NORM_TOL = 1e-10
MOMENT_CHUNK = 2048


@dataclass(frozen=True)
class FieldSpec:
    """Field strength b0 plus an optional bounded radial perturbation.

    ``osc`` is sup - inf of phi_tilde over a dense radial sample; it is an
    approximation of the true oscillation and is documented as such.
    """

    b0: float
    phi_tilde: Callable[[np.ndarray], np.ndarray] | None = None
    osc_radius: float = DEFAULT_OSC_RADIUS
    osc: float = field(init=False)

    def __post_init__(self):
        if not self.b0 > 0:
            raise ValueError("field strength b0 must be positive")
        if self.phi_tilde is None:
            osc = 0.0
        else:
            r = np.linspace(0.0, self.osc_radius, OSC_SAMPLES)
            vals = np.asarray(self.phi_tilde(r), dtype=float)
            if not np.all(np.isfinite(vals)):
                raise ValueError("phi_tilde must be finite on the sampled radii")
            # light boundedness check on the first derivative as well
            dv = np.diff(vals) / np.diff(r)
            if not np.all(np.isfinite(dv)):
                raise ValueError("phi_tilde must have finite derivatives")
            osc = float(np.max(vals) - np.min(vals))
        object.__setattr__(self, "osc", osc)

    def phi(self, r):
        """Total scalar potential b0 r^2 / 4 + phi_tilde(r)."""
        r = np.asarray(r, dtype=float)
        out = 0.25 * self.b0 * r * r
        if self.phi_tilde is not None:
            out = out + self.phi_tilde(r)
        return out


def compute_zeta(fs: FieldSpec) -> float:
    """Lower bound 2 b0 exp(-2 osc) for the first positive transverse level."""
    return 2.0 * fs.b0 * float(np.exp(-2.0 * fs.osc))


def log_radial_moments(fs: FieldSpec, ks, log_symbol=None, support=None,
                       tol=NORM_TOL, n0=64, info=None):
    """log of integral_0^inf U(r) r^(2k+1) exp(-2 phi(r)) dr for each k.

    ``log_symbol`` maps radii to log U(r) (None means U == 1); ``support``
    optionally caps the integration at a compact-support edge R.  Peaks are
    located per k, intervals bracket an 80-nat drop of the log-integrand,
    and the Gauss-Legendre node count doubles until every log-integral is
    stable to ``tol``.  Pass a dict as ``info`` to collect the rule
    descriptor (max node count, outermost radius).
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    out = np.empty(ks.shape[0])
    for start in range(0, ks.shape[0], MOMENT_CHUNK):
        k = ks[start:start + MOMENT_CHUNK]

        def g(r, k=k):
            r = np.asarray(r, dtype=float)
            kk = k.reshape((-1,) + (1,) * (r.ndim - 1)) if r.ndim > 1 else k
            with np.errstate(divide="ignore"):
                val = (2.0 * kk + 1.0) * np.log(r) - 2.0 * fs.phi(r)
            if log_symbol is not None:
                val = val + log_symbol(r)
            return val

        r0 = np.sqrt((2.0 * k + 1.0) / fs.b0)
        if support is not None:
            r0 = np.minimum(r0, 0.95 * support)
        peak = find_peak(g, r0, hi_cap=support)
        g_peak = g(peak.reshape(-1, 1))[:, 0]
        if np.any(np.isneginf(g_peak)):
            raise ValueError("symbol vanishes at the integrand peak; zero moment")
        lo = bracket_drop(g, peak, g_peak, side="left")
        hi = bracket_drop(g, peak, g_peak, side="right", hard_limit=support)
        vals, nodes = log_integral_batch(g, lo, hi, tol=tol, n0=n0)
        out[start:start + MOMENT_CHUNK] = vals
        if info is not None:
            info["nodes"] = max(info.get("nodes", 0), nodes)
            info["r_max"] = max(info.get("r_max", 0.0), float(np.max(hi)))
    return out


@dataclass(frozen=True)
class LLLBasis:
    """Truncated radial zero-mode basis: K log-scale norms plus provenance.

    ``quad_nodes``/``quad_r_max`` describe the radial rule that produced
    the norms (largest node count and outermost radius over all k).
    """

    field: FieldSpec
    K: int
    log_norms: np.ndarray
    quad_tol: float = NORM_TOL
    quad_nodes: int = 0
    quad_r_max: float = 0.0

    @property
    def log_moment_integrals(self):
        """log of integral r^(2k+1) exp(-2 phi) dr (= 2 * log_norms)."""
        return 2.0 * self.log_norms


def build_lll_basis(fs: FieldSpec, K: int, tol: float = NORM_TOL) -> LLLBasis:
    """Norms of the first K radial zero modes, in the log domain."""
    if K < 1:
        raise ValueError("basis size K must be at least 1")
    info = {}
    log_ints = log_radial_moments(fs, np.arange(K), tol=tol, info=info)
    if not np.all(np.isfinite(log_ints)):
        raise QuadratureError("non-finite basis norm encountered")
    return LLLBasis(fs, K, 0.5 * log_ints, tol, info["nodes"], info["r_max"])


def log_norms_closed_form(b0: float, ks) -> np.ndarray:
    """Exact log-norms for phi_tilde == 0: (1/2) log[(1/2)(2/b0)^(k+1) k!]."""
    from scipy.special import gammaln

    ks = np.asarray(ks, dtype=float)
    return 0.5 * (np.log(0.5) + (ks + 1.0) * np.log(2.0 / b0) + gammaln(ks + 1.0))


@dataclass(frozen=True)
class LadderModel:
    """Truncated ladder pair and the two transverse Pauli components.

    ``a`` raises the level index (lower-shift matrix with entries
    sqrt(2 b0 k)), ``a_star`` lowers it, so ``a @ a_star`` carries the
    zero mode.  ``commutator_defect`` stores a_star@a - a@a_star, which
    equals 2 b0 on the interior levels; the top level feels the cut.
    """

    b0: float
    L: int
    a: np.ndarray
    a_star: np.ndarray

    @property
    def h_perp_minus(self):
        return self.a @ self.a_star

    @property
    def h_perp_plus(self):
        return self.a_star @ self.a

    @property
    def commutator_defect(self):
        return self.a_star @ self.a - self.a @ self.a_star

    @property
    def interior(self):
        """Index mask excluding the top (truncation-polluted) level."""
        return np.arange(self.L) < self.L - 1


def build_ladder(b0: float, L: int) -> LadderModel:
    """Build the truncated ladder model; L >= 2."""
    if L < 2:
        raise ValueError("ladder truncation L must be at least 2")
    if not b0 > 0:
        raise ValueError("field strength b0 must be positive")
    entries = np.sqrt(2.0 * b0 * np.arange(1, L))
    a = np.diag(entries, k=-1)
    model = LadderModel(b0, L, a, a.T.copy())
    # construction invariants
    hm = np.sort(np.linalg.eigvalsh(model.h_perp_minus))
    if abs(hm[0]) > 1e-12 or abs(hm[1] - 2.0 * b0) > 1e-10 * max(1.0, b0):
        raise AssertionError("ladder spectrum does not start at {0, 2 b0}")
    defect = model.commutator_defect[:-1, :-1]
    if np.max(np.abs(defect - 2.0 * b0 * np.eye(L - 1))) > 1e-12 * max(1.0, b0):
        raise AssertionError("interior commutator defect is not 2 b0")
    return model
