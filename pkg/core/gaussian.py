"""
Normal-inverse-Wishart sufficient statistics.

Each topic keeps its point count, running sum and scatter matrix together
with the lower Cholesky factor of the posterior scale matrix Psi_s. The
factor is maintained with rank-one updates/downdates so that adding or
removing one embedding costs O(M^2), and the multivariate Student-t
predictive reads its log-determinant straight off the factor diagonal.
"""

import logging
import math
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import gammaln, multigammaln

from utils.errors import (
    CholeskyDowndateError,
    ConfigurationError,
    NumericalError,
)

logger = logging.getLogger(__name__)

LOG_PI = math.log(math.pi)

# Relative floor for the squared diagonal during a downdate
DOWNDATE_FLOOR = 1e-12


def log_multigamma(dim: int, a: float) -> float:
    """
    Log of the multivariate gamma function Gamma_M(a).

    Raises:
        NumericalError: if a <= (M - 1) / 2
    """
    if dim < 1:
        raise NumericalError(f"Multivariate gamma needs dim >= 1, got {dim}")
    if not a > 0.5 * (dim - 1):
        raise NumericalError(
            f"Multivariate gamma domain violated: a={a} must exceed (M-1)/2={0.5 * (dim - 1)}"
        )
    return float(multigammaln(a, dim))


def cholesky_lower(matrix: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, raising NumericalError when not positive-definite."""
    try:
        return np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Matrix is not positive-definite: {e}") from e


# Below this dimension the rank-one kernels run on Python floats
SCALAR_KERNEL_MAX_DIM = 24


def _rank_one_scalar(chol: np.ndarray, x: np.ndarray, sign: float) -> None:
    rows = chol.tolist()
    v = x.tolist()
    dim = len(v)
    for k in range(dim):
        row_k = rows[k]
        lkk = row_k[k]
        xk = v[k]
        r_squared = lkk * lkk + sign * xk * xk
        if sign < 0 and (not math.isfinite(r_squared) or r_squared <= DOWNDATE_FLOOR * lkk * lkk):
            raise CholeskyDowndateError(
                f"Downdate lost positive-definiteness at column {k} (r^2={r_squared:.3e})"
            )
        r = math.sqrt(r_squared)
        c = r / lkk
        s = xk / lkk
        row_k[k] = r
        for i in range(k + 1, dim):
            row_i = rows[i]
            lik = (row_i[k] + sign * s * v[i]) / c
            row_i[k] = lik
            v[i] = c * v[i] - s * lik
    chol[...] = rows


def _rank_one_columns(chol: np.ndarray, x: np.ndarray, sign: float) -> None:
    dim = x.shape[0]
    for k in range(dim):
        lkk = chol[k, k]
        r_squared = lkk * lkk + sign * x[k] * x[k]
        if sign < 0 and (not np.isfinite(r_squared) or r_squared <= DOWNDATE_FLOOR * lkk * lkk):
            raise CholeskyDowndateError(
                f"Downdate lost positive-definiteness at column {k} (r^2={r_squared:.3e})"
            )
        r = math.sqrt(r_squared)
        c = r / lkk
        s = x[k] / lkk
        chol[k, k] = r
        if k + 1 < dim:
            chol[k + 1:, k] = (chol[k + 1:, k] + sign * s * x[k + 1:]) / c
            x[k + 1:] = c * x[k + 1:] - s * chol[k + 1:, k]


def _rank_one(chol: np.ndarray, x: np.ndarray, sign: float) -> None:
    x = np.array(x, dtype=float)
    if x.shape[0] <= SCALAR_KERNEL_MAX_DIM:
        _rank_one_scalar(chol, x, sign)
    else:
        _rank_one_columns(chol, x, sign)


def cholesky_update(chol: np.ndarray, x: np.ndarray) -> None:
    """
    In-place rank-one update: L L^T + x x^T.

    Args:
        chol: lower-triangular factor, modified in place
        x: update vector (not modified)
    """
    _rank_one(chol, x, 1.0)


def cholesky_downdate(chol: np.ndarray, x: np.ndarray) -> None:
    """
    In-place rank-one downdate: L L^T - x x^T.

    Raises:
        CholeskyDowndateError: when the result would not be positive-definite.
            Small factors are left untouched; larger ones may be partially
            modified, so callers work on a copy.
    """
    _rank_one(chol, x, -1.0)


def set_scatter(points: np.ndarray, kappa: float, mean: np.ndarray) -> np.ndarray:
    """
    Psi increment from conditioning a posterior with precision kappa and
    mean `mean` on the rows of points: centered scatter plus the shift term.
    """
    t = points.shape[0]
    xbar = points.mean(axis=0)
    centered = points - xbar
    shift = xbar - mean
    return centered.T @ centered + (kappa * t / (kappa + t)) * np.outer(shift, shift)


class NIWPrior:
    """Normal-inverse-Wishart hyperparameters (u, Psi, kappa, v)."""

    def __init__(self, mean: Sequence[float], psi: np.ndarray, kappa: float, nu: float):
        mean = np.asarray(mean, dtype=float)
        psi = np.asarray(psi, dtype=float)
        if mean.ndim != 1:
            raise ConfigurationError("NIW mean must be a vector")
        dim = mean.shape[0]
        if psi.shape != (dim, dim):
            raise ConfigurationError(f"Psi must be {dim}x{dim}, got {psi.shape}")
        if not np.allclose(psi, psi.T, rtol=1e-10, atol=1e-12):
            raise NumericalError("Psi must be symmetric")
        if not kappa > 0:
            raise ConfigurationError(f"kappa must be positive, got {kappa}")
        if not nu > dim - 1:
            raise ConfigurationError(
                f"v={nu} must exceed M-1={dim - 1} for the NIW prior and its Student-t predictive"
            )

        self.mean = mean
        self.psi = psi
        self.kappa = float(kappa)
        self.nu = float(nu)
        self.psi_chol = cholesky_lower(psi)
        self.log_det_psi = 2.0 * float(np.sum(np.log(np.diag(self.psi_chol))))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def scaled(self, ratio: float) -> "NIWPrior":
        """Same prior with Psi multiplied by ratio."""
        if not ratio > 0:
            raise ConfigurationError(f"Psi ratio must be positive, got {ratio}")
        return NIWPrior(self.mean, self.psi * ratio, self.kappa, self.nu)

    @classmethod
    def isotropic(cls, mean: Sequence[float], psi_scale: float, kappa: float, nu: float) -> "NIWPrior":
        mean = np.asarray(mean, dtype=float)
        return cls(mean, psi_scale * np.eye(mean.shape[0]), kappa, nu)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean.tolist(),
            "psi": self.psi.tolist(),
            "kappa": self.kappa,
            "nu": self.nu,
        }


class GaussianTopicStats:
    """
    Sufficient statistics of the points assigned to one topic.

    Derived posterior quantities:
        kappa_n = kappa + n, nu_n = v + n,
        mean_n  = (kappa * u + sum) / kappa_n,
        Psi_s   = chol @ chol.T

    The Student-t predictive terms are cached and dropped whenever the
    statistics or the factor change.
    """

    def __init__(self, prior: NIWPrior):
        self.prior = prior
        dim = prior.dim
        self.n = 0
        self.sum = np.zeros(dim)
        self.scatter = np.zeros((dim, dim))
        self.chol = prior.psi_chol.copy()
        self.refactorizations = 0

    @classmethod
    def from_points(cls, prior: NIWPrior, points: np.ndarray) -> "GaussianTopicStats":
        """Batch construction: raw statistics summed directly, factor from one Cholesky."""
        stats = cls(prior)
        points = np.asarray(points, dtype=float).reshape(-1, prior.dim)
        if points.shape[0]:
            stats.n = points.shape[0]
            stats.sum = points.sum(axis=0)
            stats.scatter = points.T @ points
            stats.chol = cholesky_lower(stats.batch_psi())
        return stats

    @property
    def chol(self) -> np.ndarray:
        return self._chol

    @chol.setter
    def chol(self, value: np.ndarray) -> None:
        self._chol = value
        self._predictive = None

    @property
    def dim(self) -> int:
        return self.prior.dim

    @property
    def kappa_n(self) -> float:
        return self.prior.kappa + self.n

    @property
    def nu_n(self) -> float:
        return self.prior.nu + self.n

    @property
    def mean_n(self) -> np.ndarray:
        return (self.prior.kappa * self.prior.mean + self.sum) / self.kappa_n

    @property
    def dof(self) -> float:
        """Student-t degrees of freedom nu_n - M + 1."""
        return self.nu_n - self.dim + 1

    def psi_matrix(self) -> np.ndarray:
        return self._chol @ self._chol.T

    def log_det_psi(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self._chol))))

    def batch_psi(self) -> np.ndarray:
        """Psi_s recomputed from the raw statistics (centered form)."""
        prior = self.prior
        if self.n == 0:
            return prior.psi.copy()
        xbar = self.sum / self.n
        centered = self.scatter - self.n * np.outer(xbar, xbar)
        shift = xbar - prior.mean
        psi = prior.psi + centered + (prior.kappa * self.n / self.kappa_n) * np.outer(shift, shift)
        return 0.5 * (psi + psi.T)

    def rebuild(self) -> None:
        """Refactorize Psi_s from raw statistics, O(M^3)."""
        self.chol = cholesky_lower(self.batch_psi())
        self.refactorizations += 1

    def _reset(self) -> None:
        self.n = 0
        self.sum = np.zeros(self.dim)
        self.scatter = np.zeros((self.dim, self.dim))
        self.chol = self.prior.psi_chol.copy()

    def add_point(self, x: np.ndarray) -> None:
        x = np.asarray(x, dtype=float)
        kappa_n = self.kappa_n
        diff = x - self.mean_n
        cholesky_update(self._chol, math.sqrt(kappa_n / (kappa_n + 1.0)) * diff)
        self._predictive = None
        self.n += 1
        self.sum += x
        self.scatter += np.outer(x, x)

    def remove_point(self, x: np.ndarray) -> None:
        """
        Remove a previously added point.

        Falls back to a full refactorization when the downdate loses
        positive-definiteness through accumulated rounding.
        """
        if self.n < 1:
            raise NumericalError("remove_point called on empty topic statistics")
        x = np.asarray(x, dtype=float)

        if self.n == 1:
            self._reset()
            return

        self.n -= 1
        self.sum -= x
        self.scatter -= np.outer(x, x)
        kappa_after = self.kappa_n
        diff = x - self.mean_n
        trial = self._chol.copy()
        try:
            cholesky_downdate(trial, math.sqrt(kappa_after / (kappa_after + 1.0)) * diff)
            self.chol = trial
        except CholeskyDowndateError as e:
            logger.warning(f"{e}; rebuilding factor from raw statistics (n={self.n})")
            self.rebuild()

    def add_points(self, points: np.ndarray) -> None:
        """Add a set of points with one Cholesky of the updated Psi_s."""
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        t = points.shape[0]
        if t == 0:
            return
        if t == 1:
            self.add_point(points[0])
            return
        psi = self.psi_matrix() + set_scatter(points, self.kappa_n, self.mean_n)
        self.chol = cholesky_lower(0.5 * (psi + psi.T))
        self.n += t
        self.sum += points.sum(axis=0)
        self.scatter += points.T @ points

    def remove_points(self, points: np.ndarray) -> None:
        """
        Remove a previously added set of points.

        Psi_s loses the set's contribution relative to the remaining
        posterior; the factor is rebuilt from raw statistics if that
        difference is not positive-definite.
        """
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        t = points.shape[0]
        if t == 0:
            return
        if t > self.n:
            raise NumericalError(f"remove_points of {t} points from topic statistics holding {self.n}")
        if t == self.n:
            self._reset()
            return
        if t == 1:
            self.remove_point(points[0])
            return

        self.n -= t
        self.sum -= points.sum(axis=0)
        self.scatter -= points.T @ points
        psi = self.psi_matrix() - set_scatter(points, self.kappa_n, self.mean_n)
        try:
            self.chol = cholesky_lower(0.5 * (psi + psi.T))
        except NumericalError as e:
            logger.warning(f"{e}; rebuilding factor from raw statistics (n={self.n})")
            self.rebuild()

    def _predictive_terms(self) -> Tuple[np.ndarray, np.ndarray, float, float]:
        """
        (mean_n, W, log normaliser, exponent) with the log predictive at x
        equal to normaliser + exponent * log1p(|W (x - mean_n)|^2).
        """
        if self._predictive is None:
            dim = self.dim
            dof = self.dof
            if dof <= 0:
                raise ConfigurationError(
                    f"Student-t degrees of freedom {dof} <= 0; increase v (currently {self.prior.nu}) above M-1"
                )
            kappa_n = self.kappa_n
            scale = (kappa_n + 1.0) / (kappa_n * dof)
            whitening = solve_triangular(self._chol, np.eye(dim), lower=True, check_finite=False)
            whitening /= math.sqrt(scale * dof)
            log_det = dim * math.log(scale) + self.log_det_psi()
            log_normaliser = (
                float(gammaln(0.5 * (dof + dim)))
                - float(gammaln(0.5 * dof))
                - 0.5 * dim * math.log(dof * math.pi)
                - 0.5 * log_det
            )
            self._predictive = (self.mean_n, whitening, log_normaliser, -0.5 * (dof + dim))
        return self._predictive

    def log_predictive(self, x: np.ndarray) -> float:
        """Log multivariate Student-t posterior predictive density at x."""
        mean, whitening, log_normaliser, exponent = self._predictive_terms()
        y = whitening @ (np.asarray(x, dtype=float) - mean)
        return log_normaliser + exponent * math.log1p(float(y @ y))

    def log_predictive_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorised log predictive over the rows of points."""
        mean, whitening, log_normaliser, exponent = self._predictive_terms()
        y = (np.asarray(points, dtype=float) - mean) @ whitening.T
        return log_normaliser + exponent * np.log1p(np.einsum("ij,ij->i", y, y))

    def log_marginal_set(self, points: np.ndarray) -> float:
        """
        Log marginal likelihood of adding the whole set `points` to this topic.

        Equals the sequential sum of log_predictive with each point added
        after it is scored.
        """
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        t = points.shape[0]
        if t == 0:
            return 0.0

        psi_after = self.psi_matrix() + set_scatter(points, self.kappa_n, self.mean_n)
        log_det_after = 2.0 * float(np.sum(np.log(np.diag(cholesky_lower(0.5 * (psi_after + psi_after.T))))))

        dim = self.dim
        nu_before = self.nu_n
        nu_after = nu_before + t
        return (
            -0.5 * t * dim * LOG_PI
            + log_multigamma(dim, 0.5 * nu_after)
            - log_multigamma(dim, 0.5 * nu_before)
            + 0.5 * nu_before * self.log_det_psi()
            - 0.5 * nu_after * log_det_after
            + 0.5 * dim * math.log(self.kappa_n / (self.kappa_n + t))
        )

    def log_evidence(self) -> float:
        """Log marginal likelihood of all held points under the prior."""
        if self.n == 0:
            return 0.0
        prior = self.prior
        dim = self.dim
        return (
            -0.5 * self.n * dim * LOG_PI
            + log_multigamma(dim, 0.5 * self.nu_n)
            - log_multigamma(dim, 0.5 * prior.nu)
            + 0.5 * prior.nu * prior.log_det_psi
            - 0.5 * self.nu_n * self.log_det_psi()
            + 0.5 * dim * math.log(prior.kappa / self.kappa_n)
        )

    def copy(self) -> "GaussianTopicStats":
        other = GaussianTopicStats.__new__(GaussianTopicStats)
        other.prior = self.prior
        other.n = self.n
        other.sum = self.sum.copy()
        other.scatter = self.scatter.copy()
        other._chol = self._chol.copy()
        other._predictive = self._predictive
        other.refactorizations = self.refactorizations
        return other

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "sum": self.sum.tolist(),
            "scatter": self.scatter.tolist(),
            "chol": self._chol.tolist(),
        }

    @classmethod
    def from_dict(cls, prior: NIWPrior, data: Dict[str, Any]) -> "GaussianTopicStats":
        stats = cls(prior)
        stats.n = int(data["n"])
        stats.sum = np.asarray(data["sum"], dtype=float)
        stats.scatter = np.asarray(data["scatter"], dtype=float)
        stats.chol = np.asarray(data["chol"], dtype=float)
        return stats


def new_stats(prior: NIWPrior) -> GaussianTopicStats:
    """Empty topic statistics: n=0, sum=0, chol = Cholesky(Psi)."""
    return GaussianTopicStats(prior)


def embedding_prior(embeddings: np.ndarray, psi_scale: float, kappa: float,
                    nu: Optional[float] = None) -> NIWPrior:
    """Isotropic prior centred on the embedding grand mean; v defaults to M + 1."""
    embeddings = np.asarray(embeddings, dtype=float)
    dim = embeddings.shape[1]
    if nu is None:
        nu = dim + 1.0
    return NIWPrior.isotropic(embeddings.mean(axis=0), psi_scale, kappa, nu)
