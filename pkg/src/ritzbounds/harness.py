"""Reproducible experiment harness.

Generates seeded random symmetric matrices with prescribed spectra, trial
subspaces at a controllable angle to a target eigenspace, runs the requested
bound evaluations trial by trial, and serializes the results as CSV.

Randomness comes from numpy's default_rng (PCG64); per-trial streams are
derived with SeedSequence([seed, trial]) so trials are independent and the
whole sweep is deterministic for a given configuration.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, fields

import numpy as np

from . import bounds as bnd
from .core import (
    EigenDecomposition,
    OrthonormalBasis,
    SymmetricMatrix,
    qr_orthonormalize,
    sin_angle_subspaces,
)
from .errors import DimensionError, InvalidSpectrum, RitzBoundsError
from .precond import abs_value_inverse, identity, shift_inverse_squared

ALL_BOUNDS = (
    "lemma",
    "saad",
    "stewart",
    "harmonic",
    "deflated",
    "eigenspace",
    "tharmonic",
)


@dataclass(frozen=True)
class SpectrumSpec:
    kind: str  # uniform | clustered | explicit
    a: float = 0.0
    b: float = 1.0
    centers: tuple[float, ...] = ()
    widths: tuple[float, ...] = ()
    counts: tuple[int, ...] = ()
    values: tuple[float, ...] = ()

    @staticmethod
    def uniform(a: float, b: float) -> "SpectrumSpec":
        return SpectrumSpec(kind="uniform", a=a, b=b)

    @staticmethod
    def clustered(centers, widths, counts) -> "SpectrumSpec":
        return SpectrumSpec(
            kind="clustered",
            centers=tuple(float(c) for c in centers),
            widths=tuple(float(w) for w in widths),
            counts=tuple(int(c) for c in counts),
        )

    @staticmethod
    def explicit(values) -> "SpectrumSpec":
        return SpectrumSpec(kind="explicit", values=tuple(float(v) for v in values))


@dataclass(frozen=True)
class ShiftRule:
    kind: str  # midpoint | explicit | near_eigenvalue
    index: int = 0
    sigma: float = 0.0
    gap: float = 1e-3

    @staticmethod
    def midpoint(index: int) -> "ShiftRule":
        return ShiftRule(kind="midpoint", index=index)

    @staticmethod
    def explicit(sigma: float) -> "ShiftRule":
        return ShiftRule(kind="explicit", sigma=sigma)

    @staticmethod
    def near_eigenvalue(index: int, gap: float) -> "ShiftRule":
        return ShiftRule(kind="near_eigenvalue", index=index, gap=gap)


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    n: int
    s: int
    spectrum_spec: SpectrumSpec
    shift_rule: ShiftRule
    angle_phi: float = 0.3
    multiplicity: int = 1
    trials: int = 1
    bound_set: tuple[str, ...] = ("harmonic",)
    precond: str = "absinv"  # weight used by the tharmonic bound

    def __post_init__(self):
        if not (1 <= self.multiplicity <= self.s <= self.n):
            raise DimensionError("need 1 <= multiplicity <= s <= n")
        if self.trials < 1:
            raise DimensionError("trials must be >= 1")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    n: int
    s: int
    sigma: float
    bound_id: str
    lhs: float
    gamma: float
    delta: float
    kappa: float
    sin_angle_to_K: float
    rhs: float
    slack: float
    satisfied: bool
    realized_sin: float
    tightness: float
    wall_time_ms: float
    error: str = ""


CSV_COLUMNS = [f.name for f in fields(TrialRecord)]


def realize_spectrum(spec: SpectrumSpec, n: int, rng) -> np.ndarray:
    if spec.kind == "uniform":
        if not spec.b > spec.a:
            raise InvalidSpectrum("uniform spectrum needs b > a")
        vals = rng.uniform(spec.a, spec.b, size=n)
    elif spec.kind == "clustered":
        if not (len(spec.centers) == len(spec.widths) == len(spec.counts)):
            raise InvalidSpectrum("centers, widths, counts must align")
        parts = [
            c + w * rng.uniform(-0.5, 0.5, size=k)
            for c, w, k in zip(spec.centers, spec.widths, spec.counts)
        ]
        vals = np.concatenate(parts) if parts else np.empty(0)
        if vals.size != n:
            raise InvalidSpectrum(f"cluster counts sum to {vals.size}, expected {n}")
    elif spec.kind == "explicit":
        vals = np.asarray(spec.values, dtype=float)
        if vals.size != n:
            raise InvalidSpectrum(f"explicit spectrum has {vals.size} values, expected {n}")
    else:
        raise InvalidSpectrum(f"unknown spectrum kind {spec.kind!r}")
    return np.sort(vals)


def random_orthogonal(n: int, rng) -> np.ndarray:
    """Haar-distributed orthogonal matrix via sign-fixed QR of a Gaussian."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def gen_matrix(
    spec: SpectrumSpec, n: int, seed
) -> tuple[SymmetricMatrix, EigenDecomposition]:
    """Random symmetric matrix with the prescribed spectrum."""
    rng = np.random.default_rng(seed)
    d = realize_spectrum(spec, n, rng)
    q = random_orthogonal(n, rng)
    for j in range(n):
        i = np.argmax(np.abs(q[:, j]))
        if q[i, j] < 0:
            q[:, j] = -q[:, j]
    a = SymmetricMatrix((q * d) @ q.T)
    return a, EigenDecomposition(d, q)


def gen_subspace(
    decomp: EigenDecomposition, target_indices, phi: float, s: int, seed
) -> tuple[OrthonormalBasis, float]:
    """Trial subspace tilted by angle phi away from a target eigenspace.

    Builds [cos(phi) X + sin(phi) W | R] with W random orthonormal directions
    orthogonal to X and R extra random directions, then measures the realized
    minimal angle exactly (extra directions can only shrink it).
    """
    targets = np.asarray(target_indices, dtype=int)
    m = targets.size
    n = decomp.n
    if not (m <= s <= n - m):
        raise DimensionError("need |targets| <= s <= n - |targets|")
    rng = np.random.default_rng(seed)
    x = decomp.eigenvectors[:, targets]
    g = rng.standard_normal((n, m))
    g = g - x @ (x.T @ g)
    w = np.linalg.qr(g)[0]
    tilted = math.cos(phi) * x + math.sin(phi) * w
    blocks = [tilted]
    if s > m:
        blocks.append(rng.standard_normal((n, s - m)))
    k = qr_orthonormalize(np.hstack(blocks))
    realized = sin_angle_subspaces(OrthonormalBasis(x), k)
    return k, realized


def apply_shift_rule(rule: ShiftRule, eigenvalues: np.ndarray) -> float:
    if rule.kind == "explicit":
        return float(rule.sigma)
    if rule.kind == "midpoint":
        i = rule.index
        return float(0.5 * (eigenvalues[i] + eigenvalues[i + 1]))
    if rule.kind == "near_eigenvalue":
        i = rule.index
        sigma = float(eigenvalues[i]) + rule.gap
        # Keep the shift strictly between this eigenvalue and the next.
        if i + 1 < eigenvalues.size:
            ceiling = eigenvalues[i] + 0.49 * (eigenvalues[i + 1] - eigenvalues[i])
            sigma = min(sigma, float(ceiling))
        return sigma
    raise InvalidSpectrum(f"unknown shift rule {rule.kind!r}")


def _target_cluster(decomp: EigenDecomposition, sigma: float, m: int) -> np.ndarray:
    """Indices of the m eigenvalues closest to sigma (contiguous by sort)."""
    order = np.argsort(np.abs(decomp.eigenvalues - sigma), kind="stable")
    return np.sort(order[:m])


def _nan_record(config, trial, seed, sigma, bound_id, realized, msg) -> TrialRecord:
    nan = float("nan")
    return TrialRecord(
        trial=trial, seed=seed, n=config.n, s=config.s, sigma=sigma,
        bound_id=bound_id, lhs=nan, gamma=nan, delta=nan, kappa=nan,
        sin_angle_to_K=nan, rhs=nan, slack=nan, satisfied=False,
        realized_sin=realized, tightness=nan, wall_time_ms=0.0, error=msg,
    )


def _report_record(config, trial, seed, sigma, report, realized, ms) -> TrialRecord:
    tightness = report.lhs / report.rhs if report.rhs > 0 else 0.0
    return TrialRecord(
        trial=trial,
        seed=seed,
        n=config.n,
        s=config.s,
        sigma=sigma,
        bound_id=report.bound_id,
        lhs=report.lhs,
        gamma=report.gamma,
        delta=report.delta,
        kappa=report.kappa if report.kappa is not None else float("nan"),
        sin_angle_to_K=report.sin_angle_to_K,
        rhs=report.rhs,
        slack=report.slack,
        satisfied=report.satisfied,
        realized_sin=realized,
        tightness=tightness,
        wall_time_ms=ms,
        error="",
    )


def _deflated_instance(config, decomp, sigma, targets, seed):
    """Build a trial subspace inside an invariant window around the targets."""
    n = decomp.n
    m = targets.size
    span = min(n, config.s + m + 2)
    lo = max(0, min(int(targets[0]), n - span))
    window = np.arange(lo, lo + span)
    x_inv = OrthonormalBasis(decomp.eigenvectors[:, window])
    red = EigenDecomposition(decomp.eigenvalues[window], np.eye(span))
    red_targets = np.searchsorted(window, targets)
    k_red, _ = gen_subspace(red, red_targets, config.angle_phi, config.s, seed)
    k_full = OrthonormalBasis(x_inv.columns @ k_red.columns)
    realized = sin_angle_subspaces(
        OrthonormalBasis(decomp.eigenvectors[:, targets]), k_full
    )
    return x_inv, k_full, int(red_targets[0]), realized


def _run_bound(config, bound_id, A, decomp, K, sigma, targets):
    """Evaluate one bound tag; returns a list of BoundReports."""
    t0 = int(targets[0])
    lam = float(decomp.eigenvalues[t0])
    if bound_id == "lemma":
        _, lower, upper = bnd.lemma_sin_bounds(
            A, t0, K.columns[:, 0], decomp=decomp
        )
        return [lower, upper]
    if bound_id == "saad":
        return [bnd.saad_bound(A, K, t0, decomp=decomp)]
    if bound_id == "stewart":
        return [
            bnd.stewart_frobenius_bound(
                A, K, lam, k=config.multiplicity, decomp=decomp
            )
        ]
    if bound_id == "harmonic":
        return [bnd.harmonic_bound(A, K, sigma, t0, decomp=decomp)]
    if bound_id == "eigenspace":
        return [
            bnd.eigenspace_harmonic_bound(
                A, K, sigma, lam, k=config.multiplicity, decomp=decomp
            )
        ]
    if bound_id == "tharmonic":
        if config.precond == "identity":
            spec = identity(A.n)
        elif config.precond == "invsq":
            spec = shift_inverse_squared(A, sigma, decomp=decomp)
        else:
            spec = abs_value_inverse(A, sigma, decomp=decomp)
        return [
            bnd.t_harmonic_bound(A, K, sigma, spec.realized, t0, decomp=decomp)
        ]
    raise ValueError(f"unknown bound tag {bound_id!r}")


def run_trial(config: ExperimentConfig, trial: int) -> list[TrialRecord]:
    seeds = np.random.SeedSequence([int(config.seed), int(trial)]).generate_state(3)
    A, decomp = gen_matrix(config.spectrum_spec, config.n, int(seeds[0]))
    sigma = apply_shift_rule(config.shift_rule, decomp.eigenvalues)
    targets = _target_cluster(decomp, sigma, config.multiplicity)
    records = []
    for bound_id in config.bound_set:
        t_start = time.perf_counter()
        try:
            if bound_id == "deflated":
                x_inv, k_full, red_t0, realized = _deflated_instance(
                    config, decomp, sigma, targets, int(seeds[1])
                )
                reports = [
                    bnd.deflated_harmonic_bound(A, x_inv, k_full, sigma, red_t0)
                ]
            else:
                K, realized = gen_subspace(
                    decomp, targets, config.angle_phi, config.s, int(seeds[1])
                )
                reports = _run_bound(config, bound_id, A, decomp, K, sigma, targets)
        except (RitzBoundsError, np.linalg.LinAlgError) as exc:
            records.append(
                _nan_record(
                    config, trial, int(seeds[0]), sigma, bound_id,
                    float("nan"), f"{type(exc).__name__}: {exc}",
                )
            )
            continue
        ms = (time.perf_counter() - t_start) * 1e3 / len(reports)
        for report in reports:
            records.append(
                _report_record(
                    config, trial, int(seeds[0]), sigma, report, realized, ms
                )
            )
    return records


def run_sweep(config: ExperimentConfig) -> list[TrialRecord]:
    """All trials of a configuration, ordered by trial index."""
    out = []
    for trial in range(config.trials):
        out.extend(run_trial(config, trial))
    return out


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def emit_csv(records, path, include_timing: bool = False) -> None:
    """Header plus one row per record; 17 significant digits, LF endings.

    wall_time_ms is blanked unless include_timing is set, so repeated runs of
    the same configuration produce byte-identical files.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            row = []
            for col in CSV_COLUMNS:
                if col == "wall_time_ms" and not include_timing:
                    row.append("")
                else:
                    row.append(_format_cell(getattr(rec, col)))
            writer.writerow(row)


def read_csv(path) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
