"""Sample statistics of point clouds."""

import json
from dataclasses import dataclass

import numpy as np

__all__ = ["CovarianceReport", "covariance", "covariance_to_json"]


@dataclass
class CovarianceReport:
    """Sample mean and covariance of a cloud.

    The covariance uses the unbiased (n - 1) denominator and is exactly
    symmetric: each off-diagonal entry is accumulated once and mirrored.
    """

    mean: np.ndarray
    covariance: np.ndarray
    n: int


def covariance(cloud):
    """Two-pass sample mean and covariance of a PointCloud.

    Requires n >= 2 (the unbiased denominator is n - 1).
    """
    pts = np.asarray(cloud.points, dtype=float)
    n, dim = pts.shape
    if n < 2:
        raise ValueError("covariance needs at least 2 points, got %d" % n)
    mean = pts.mean(axis=0)
    centered = pts - mean
    cov = np.empty((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            v = float(np.dot(centered[:, i], centered[:, j])) / (n - 1)
            cov[i, j] = v
            cov[j, i] = v
    return CovarianceReport(mean=mean, covariance=cov, n=n)


def covariance_to_json(report):
    obj = {
        "n": int(report.n),
        "mean": [float(v) for v in report.mean],
        "covariance": [[float(v) for v in row] for row in report.covariance],
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
