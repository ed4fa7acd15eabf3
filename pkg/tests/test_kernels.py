import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexrerank import kernels
from oracles import edit_distance_recursive

try:
    from lexrerank import _kernels  # noqa: F401
    HAVE_EXT = True
except ImportError:
    HAVE_EXT = False

needs_ext = pytest.mark.skipif(not HAVE_EXT, reason="compiled extension not built")


def random_encoding(seed, pairs=40, max_len=7):
    rng = np.random.default_rng(seed)
    src = rng.integers(0, max_len, pairs).astype(np.intc)
    tgt = rng.integers(0, max_len, pairs).astype(np.intc)
    lp = rng.uniform(1e-6, 1.0, int((tgt * (src + 1)).sum()))
    return src, tgt, lp


@needs_ext
@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("diagonal", [True, False])
def test_backends_agree_bitwise(seed, diagonal):
    src, tgt, lp = random_encoding(seed)
    p_py, *rest_py = kernels.estep(src, tgt, lp, 0.1, 2.5, diagonal, backend="python")
    p_c, *rest_c = kernels.estep(src, tgt, lp, 0.1, 2.5, diagonal, backend="cython")
    assert np.array_equal(p_py, p_c)
    assert rest_py == rest_c


@pytest.mark.parametrize("backend", ["python", pytest.param("cython", marks=needs_ext)])
def test_posterior_rows_sum_to_one(backend):
    src, tgt, lp = random_encoding(11)
    post, ll, _, _ = kernels.estep(src, tgt, lp, 0.08, 4.0, True, backend=backend)
    pos = 0
    for n, m in zip(src, tgt):
        for _ in range(m):
            assert abs(post[pos:pos + n + 1].sum() - 1.0) <= 1e-12
            pos += n + 1
    assert pos == len(post)
    assert np.isfinite(ll)


@pytest.mark.parametrize("backend", ["python", pytest.param("cython", marks=needs_ext)])
def test_zero_mass_signals_nan(backend):
    src = np.array([1], dtype=np.intc)
    tgt = np.array([1], dtype=np.intc)
    _, ll, _, _ = kernels.estep(src, tgt, np.zeros(2), 0.08, 4.0, True, backend=backend)
    assert np.isnan(ll)


@pytest.mark.parametrize("backend", ["python", pytest.param("cython", marks=needs_ext)])
@given(a=st.lists(st.sampled_from("abcd"), max_size=8), b=st.lists(st.sampled_from("abcd"), max_size=8))
def test_levenshtein_matches_recursive_definition(backend, a, b):
    assert kernels.levenshtein(a, b, backend=backend) == edit_distance_recursive(tuple(a), tuple(b))


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@needs_ext
def test_benchmark_script_runs(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).parent.parent / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    assert bench.main(["--pairs", "40", "--max-len", "8", "--repeat", "1"]) == 0
    assert "speed-up" in capsys.readouterr().out
