"""Berezin-Toeplitz compressions pUp in the truncated zero-mode basis.

Radial symbols have a fast path: the compression is diagonal in angular
momentum and each eigenvalue is a ratio of weighted radial moments,
evaluated as a difference of log-integrals.  General bounded symbols go
through a dense hermitian matrix whose (j, k) entry picks out the
(j-k)-th angular Fourier coefficient of the symbol.
"""

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from ._quad import gauss_legendre
from .counting import LogSpectrum
from .landau import LLLBasis, log_radial_moments

ADEQUACY_MARGIN = 1e-3
RADIAL_VS_GENERAL_TOL = 1e-9


class TruncationError(RuntimeError):
    """Basis too small for the requested counting threshold."""


class NonIntegrableError(ValueError):
    """Symbol power is not integrable over the plane."""


@dataclass(frozen=True)
class PowerLawTail:
    """U(r) ~ u_value * r^(-alpha) at infinity (radial angular factor)."""

    alpha: float
    u_value: float = 1.0

    def log_model(self, r):
        return np.log(self.u_value) - self.alpha * np.log(r)


@dataclass(frozen=True)
class ExponentialTail:
    """log U(r) ~ -eta * r^(2 beta) at infinity."""

    eta: float
    beta: float = 1.0

    def log_model(self, r):
        return -self.eta * np.asarray(r, dtype=float) ** (2.0 * self.beta)


@dataclass(frozen=True)
class CompactSupportTail:
    """U supported in the disc of radius R, bounded below by c inside."""

    radius: float
    lower: float = 1.0


@dataclass(frozen=True)
class RadialProfile:
    """Nonnegative bounded radial symbol with its decay classification.

    ``log_eval`` should be supplied whenever ``eval`` underflows inside
    the relevant moment peaks (e.g. Gaussian tails at large radii).
    """

    eval: Callable[[np.ndarray], np.ndarray]
    law: PowerLawTail | ExponentialTail | CompactSupportTail
    log_eval: Callable[[np.ndarray], np.ndarray] | None = None

    def log_value(self, r):
        if self.log_eval is not None:
            return self.log_eval(r)
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self.eval(r), dtype=float))

    def support_radius(self):
        return self.law.radius if isinstance(self.law, CompactSupportTail) else None

    def tail_consistent(self, radii=(10.0, 20.0, 40.0), slack=0.5) -> bool:
        """Spot-check that the tail classification matches the callable."""
        if isinstance(self.law, CompactSupportTail):
            r = self.law.radius
            outside = np.asarray(self.eval(np.array([1.01 * r, 1.5 * r, 2.0 * r])))
            inside = np.asarray(self.eval(np.linspace(0.0, r * 0.99, 64)))
            return bool(np.all(outside == 0.0) and np.max(inside) >= self.law.lower)
        checked = 0
        for r in radii:
            model = float(self.law.log_model(np.asarray(r)))
            if model < -700.0:  # value not representable, skip the point
                continue
            actual = float(self.log_value(np.asarray(r)))
            if not np.isfinite(actual):
                return False
            if abs(actual - model) > slack + 0.05 * abs(model):
                return False
            checked += 1
        return checked > 0


def gaussian_profile(eta: float = 1.0, amplitude: float = 1.0) -> RadialProfile:
    """U(r) = amplitude * exp(-eta r^2)."""
    log_amp = math.log(amplitude)
    return RadialProfile(
        eval=lambda r: amplitude * np.exp(-eta * np.asarray(r, dtype=float) ** 2),
        law=ExponentialTail(eta=eta, beta=1.0),
        log_eval=lambda r: log_amp - eta * np.asarray(r, dtype=float) ** 2,
    )


def power_profile(exponent: float, amplitude: float = 1.0) -> RadialProfile:
    """U(r) = amplitude * (1 + r^2)^(-exponent/2), tail ~ amplitude r^-exponent."""
    log_amp = math.log(amplitude)
    return RadialProfile(
        eval=lambda r: amplitude * (1.0 + np.asarray(r, dtype=float) ** 2) ** (-0.5 * exponent),
        law=PowerLawTail(alpha=exponent, u_value=amplitude),
        log_eval=lambda r: log_amp - 0.5 * exponent * np.log1p(np.asarray(r, dtype=float) ** 2),
    )


def disc_profile(radius: float = 1.0, height: float = 1.0) -> RadialProfile:
    """Indicator of the disc of given radius, scaled by ``height``."""
    log_h = math.log(height)

    def ev(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= radius, height, 0.0)

    def lev(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= radius, log_h, -np.inf)

    return RadialProfile(eval=ev, law=CompactSupportTail(radius=radius, lower=height), log_eval=lev)


@dataclass(frozen=True)
class ToeplitzModel:
    """Spectrum of pUp at truncation K, stored in the log domain."""

    basis: LLLBasis
    profile: RadialProfile | None
    spectrum: LogSpectrum
    log_eigen_by_k: np.ndarray | None = None

    @property
    def K(self):
        return self.basis.K

    def adequate_for(self, s: float) -> bool:
        """Truncation rule: the smallest kept eigenvalue must sit well
        below the counting threshold (factor 1e-3)."""
        smallest = np.min(self.spectrum.log_values[self.spectrum.signs == 1], initial=np.inf)
        if np.isinf(smallest):
            return True  # zero operator is adequate at every threshold
        return smallest < np.log(s) + np.log(ADEQUACY_MARGIN)

    def require_adequate(self, s: float):
        if not self.adequate_for(s):
            raise TruncationError(
                f"basis K={self.K} inadequate for threshold {s:g}: "
                f"smallest log-eigenvalue {np.min(self.spectrum.log_values):.2f} "
                f"vs required {np.log(s) + np.log(ADEQUACY_MARGIN):.2f}"
            )


def toeplitz_radial_spectrum(profile: RadialProfile, basis: LLLBasis) -> ToeplitzModel:
    """Diagonal compression of a radial symbol.

    eigenvalue_k = (integral U r^(2k+1) e^(-2 phi)) / (integral r^(2k+1)
    e^(-2 phi)), computed as exp of a log-moment difference so that values
    like e^-400 survive untouched.
    """
    ks = np.arange(basis.K)
    r_probe = max(20.0, 2.5 * np.sqrt((2.0 * basis.K + 1.0) / basis.field.b0))
    sample = np.asarray(profile.eval(np.linspace(0.0, r_probe, 1025)))
    if np.any(sample < 0):
        raise ValueError("radial symbol must be nonnegative")
    if np.max(sample) == 0.0:
        # identically-zero symbol compresses to the zero operator
        spectrum = LogSpectrum(np.zeros(basis.K), np.zeros(basis.K, dtype=np.int8))
        return ToeplitzModel(basis, profile, spectrum, log_eigen_by_k=None)
    log_num = log_radial_moments(
        basis.field,
        ks,
        log_symbol=profile.log_value,
        support=profile.support_radius(),
        tol=basis.quad_tol,
    )
    log_eigs = log_num - basis.log_moment_integrals
    spectrum = LogSpectrum.from_log(log_eigs.copy())
    return ToeplitzModel(basis, profile, spectrum, log_eigen_by_k=log_eigs)


def toeplitz_general_matrix(symbol: Callable, basis: LLLBasis, angular_modes: int,
                            fourier_tail_tol: float = 1e-10):
    """Dense hermitian compression of a bounded symbol U(r, theta).

    Entries <psi_j, U psi_k> couple angular momenta through the (j-k)-th
    Fourier coefficient of U; coefficients beyond ``angular_modes`` must be
    negligible or the truncation is refused.  Returns (model, matrix).
    """
    K = basis.K
    fs = basis.field
    n_theta = 1
    while n_theta < max(4 * angular_modes + 8, 2 * K + 2, 64):
        n_theta *= 2
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta

    # radial window covering every basis function's mass
    ks = np.arange(K)
    r_peaks = np.sqrt((2.0 * ks + 1.0) / fs.b0)
    r_hi = float(np.max(r_peaks)) + 12.0 / np.sqrt(fs.b0) + 4.0
    n_r = 256
    prev = None
    while n_r <= 16384:
        x, w = gauss_legendre(n_r)
        r = 0.5 * r_hi * (x + 1.0)
        wr = 0.5 * r_hi * w
        vals = np.asarray(symbol(r[:, None], theta[None, :]), dtype=float)
        if np.any(vals < -1e-12):
            raise ValueError("symbol must be nonnegative")
        coeffs = np.fft.fft(vals, axis=1) / n_theta  # c_m(r_i) for m >= 0 mod n
        lead = np.max(np.abs(coeffs[:, 0]), initial=0.0)
        if lead > 0.0:
            tail_idx = np.arange(angular_modes + 1, min(2 * angular_modes + 1, n_theta // 2))
            if tail_idx.size:
                tail = float(np.max(np.abs(coeffs[:, tail_idx])))
                if tail > fourier_tail_tol * lead:
                    raise ValueError(
                        f"angular mode cutoff {angular_modes} too small: "
                        f"Fourier tail {tail:.3e} vs leading {lead:.3e}"
                    )
        # normalised radial factors w_k(r) = exp((k+1/2) ln r - phi - log_norm)
        with np.errstate(divide="ignore"):
            logs = (ks[:, None] + 0.5) * np.log(r)[None, :] - fs.phi(r)[None, :] \
                - basis.log_norms[:, None]
        wk = np.exp(logs)
        mat = np.zeros((K, K), dtype=complex)
        for m in range(0, min(angular_modes, K - 1) + 1):
            cm = coeffs[:, m]
            for j in range(m, K):
                k = j - m
                entry = np.sum(wr * wk[j] * wk[k] * cm)
                mat[j, k] = entry
                mat[k, j] = np.conj(entry)
        if prev is not None and np.max(np.abs(mat - prev)) <= 1e-12 + 1e-10 * np.max(np.abs(mat)):
            break
        prev = mat
        n_r *= 2
    eigs = np.linalg.eigvalsh(mat)
    scale = np.max(np.abs(eigs), initial=0.0)
    if scale > 0.0 and np.min(eigs) < -1e-10 * scale:
        raise ValueError(f"compression not positive semidefinite: min eigenvalue {np.min(eigs):.3e}")
    eigs = np.clip(eigs, 0.0, None)
    spectrum = LogSpectrum.from_eigenvalues(eigs, zero_floor=1e-300)
    model = ToeplitzModel(basis, None, spectrum)
    return model, mat


@dataclass(frozen=True)
class RaikovCheck:
    ok: bool
    eigen_sum: float
    bound: float

    def __bool__(self):
        return self.ok


def _log_plane_integral(profile: RadialProfile, q: int, fs) -> float:
    """log of integral over the plane of U^q (radial symbol).

    Compact supports integrate on [0, R] directly; unbounded tails go
    through the log-radius substitution r = e^t, which turns power and
    stretched-exponential tails alike into well-behaved bumps.
    """
    law = profile.law
    if isinstance(law, PowerLawTail) and q * law.alpha <= 2.0:
        raise NonIntegrableError(
            f"U^{q} with tail exponent {law.alpha} is not integrable over the plane"
        )
    support = profile.support_radius()

    def integrate(lo, hi, log_f):
        n = 128
        prev = None
        while n <= 8192:
            x, w = gauss_legendre(n)
            t = 0.5 * (hi - lo) * (x + 1.0) + lo
            with np.errstate(divide="ignore"):
                logs = log_f(t) + np.log(0.5 * (hi - lo) * w)
            cur = float(logsumexp(logs))
            if prev is not None:
                if (np.isneginf(cur) and np.isneginf(prev)) or abs(cur - prev) <= 1e-11:
                    return cur
            prev = cur
            n *= 2
        return prev

    with np.errstate(divide="ignore"):
        if support is not None:
            val = integrate(0.0, support,
                            lambda r: q * profile.log_value(r) + np.log(r))
        else:
            # r = e^t: integrand becomes U(e^t)^q e^(2t)
            t_hi = np.log(16.0)
            while q * float(profile.log_value(np.asarray(np.exp(t_hi)))) \
                    + 2.0 * t_hi > -90.0:
                t_hi += np.log(2.0)
                if t_hi > 60.0:
                    raise NonIntegrableError(
                        "symbol tail decays too slowly to integrate")
            val = integrate(-40.0, t_hi,
                            lambda t: q * profile.log_value(np.exp(t)) + 2.0 * t)
    return val + np.log(2.0 * np.pi)


def check_raikov_bound(model: ToeplitzModel, q: int) -> RaikovCheck:
    """Schatten-q bound: sum lambda_k^q <= (b0/2pi) e^(2 osc) integral U^q.

    The left side only grows with the truncation, so the bound must hold
    at every K.
    """
    if q < 1:
        raise ValueError("Schatten index q must be >= 1")
    if model.profile is None:
        raise ValueError("Raikov check needs the radial profile metadata")
    fs = model.basis.field
    log_lhs = model.spectrum.log_schatten_pth_power(q)
    zero = np.isneginf(log_lhs)
    log_rhs = np.log(fs.b0 / (2.0 * np.pi)) + 2.0 * fs.osc \
        + _log_plane_integral(model.profile, q, fs)
    lhs = float(np.exp(log_lhs)) if not zero else 0.0
    rhs = float(np.exp(log_rhs))
    ok = zero or log_lhs <= log_rhs + 1e-10
    return RaikovCheck(ok, lhs, rhs)


def suggest_truncation(law, s_min: float, b0: float, margin: float = 1.6) -> int:
    """Basis size so the adequacy rule holds at threshold ``s_min``.

    Uses the law's predicted eigenvalue decay; callers must still verify
    adequacy a posteriori on the computed spectrum.
    """
    target = s_min * ADEQUACY_MARGIN
    if isinstance(law, ExponentialTail):
        al = abs(np.log(target))
        if law.beta == 1.0:
            # lambda_k ~ (b0 / (b0 + 2 eta))^k
            k = al / np.log1p(2.0 * law.eta / b0)
        elif law.beta < 1.0:
            # invert lambda_k ~ exp(-eta (2k/b0)^beta)
            k = 0.5 * b0 * (al / law.eta) ** (1.0 / law.beta) + al
        else:
            # log-log slow regime; the count law plus generous slack
            k = law.beta / (law.beta - 1.0) * al / max(np.log(al), 1.0) + 4.0 * al
    elif isinstance(law, PowerLawTail):
        # lambda_k ~ u (2k/b0)^(-alpha/2)
        k = 0.5 * b0 * (max(law.u_value, 1e-300) / target) ** (2.0 / law.alpha)
    elif isinstance(law, CompactSupportTail):
        # lambda_k ~ (b0 R^2/2)^k / k!: solve k (ln k - ln(e b0 R^2/2)) = |ln target|
        c = np.log(abs(np.log(target)) + 3.0)
        k = abs(np.log(target)) / max(c - np.log(b0 * law.radius**2 / 2.0) - 1.0, 0.5) + 8.0
        for _ in range(40):
            k = abs(np.log(target)) / max(np.log(k) - np.log(b0 * law.radius**2 / 2.0) - 1.0, 0.5) + 8.0
    else:
        raise TypeError(f"unknown law {law!r}")
    return int(np.ceil(margin * k)) + 8


def spectrum_rows(model: ToeplitzModel):
    """(k, log10 eigenvalue) pairs for the diagonal radial spectrum."""
    if model.log_eigen_by_k is None:
        raise ValueError("per-k export only available for the radial fast path")
    return [(int(k), float(lv / np.log(10.0)))
            for k, lv in enumerate(model.log_eigen_by_k)]


def export_spectrum_csv(model: ToeplitzModel, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "log10_eigenvalue"])
        for k, lv in spectrum_rows(model):
            writer.writerow([k, repr(lv)])
