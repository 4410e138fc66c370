import numpy as np
import pytest

from lglg.config import RunConfig
from lglg.synthetic import write_benchmark


def random_spd(rng, n, eig_range=(0.5, 2.0)):
    """SPD matrix with eigenvalues drawn uniformly from eig_range."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = rng.uniform(*eig_range, size=n)
    return (q * lam) @ q.T


def random_symmetric(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def benchmark_dataset(tmp_path_factory):
    """Synthetic grating benchmark: (gallery_manifest, probe_manifest)."""
    root = tmp_path_factory.mktemp("bench")
    return write_benchmark(root, seed=0)


@pytest.fixture(scope="session")
def default_config():
    return RunConfig()


@pytest.fixture(scope="session")
def benchmark_gallery(benchmark_dataset, default_config):
    from lglg import pipeline

    gallery_manifest, _ = benchmark_dataset
    records = pipeline.load_manifest(gallery_manifest)
    return pipeline.enroll(records, default_config)
