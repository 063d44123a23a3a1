import os
import random
import subprocess
import sys

import pytest

from mms import kernels
from mms.kernels import HAVE_COMPILED, get_kernel
from mms.matrix import space
from mms.symmetry import triple_from

needs_ext = pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")

SHAPES = [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)]


def _triples(sp, rng, k):
    g = sp.gl() if sp.gl_order() < 20000 else None
    out = []
    for _ in range(k):
        if g:
            u, v, w = (rng.choice(g) for _ in range(3))
        else:
            u, v, w = (_rand_inv(sp, rng) for _ in range(3))
        out.append(triple_from(sp, u, v, w))
    return out


def _rand_inv(sp, rng):
    while True:
        m = rng.randrange(sp.count)
        if sp.rank(m) == sp.n:
            return m


def test_python_kernel_always_available():
    k = get_kernel(2, 2, "python")
    assert type(k).__module__ == "mms._kernel_py"


def test_large_codes_fall_back_to_python():
    # 5x5 over GF(7) needs more than 62 bits
    assert type(get_kernel(5, 7, "auto")).__module__ == "mms._kernel_py"


def test_env_selection(monkeypatch):
    monkeypatch.setenv("MMS_KERNEL", "python")
    assert kernels.preferred_backend() == "python"
    monkeypatch.setenv("MMS_KERNEL", "bogus")
    with pytest.raises(ValueError):
        kernels.preferred_backend()


@needs_ext
@pytest.mark.parametrize("n,p", SHAPES)
def test_backends_agree(n, p):
    rng = random.Random(n * 31 + p)
    sp = space(n, p)
    py, cy = get_kernel(n, p, "python"), get_kernel(n, p, "cython")
    assert type(cy).__module__ == "mms._kernel"
    trip = _triples(sp, rng, 300)
    pk_py, pk_cy = py.pack(trip), cy.pack(trip)
    for _ in range(30):
        a, b = rng.randrange(sp.count), rng.randrange(sp.count)
        assert py.mul(a, b) == cy.mul(a, b)
        row = tuple(rng.randrange(sp.count) for _ in range(3))
        assert py.apply(trip[0], row) == cy.apply(trip[0], row)
        assert py.orbit_min(row, pk_py) == cy.orbit_min(row, pk_cy)
        assert py.orbit_min_all(row, pk_py) == cy.orbit_min_all(row, pk_cy)
        fixed = py.apply(trip[0], row)
        assert py.fixing(fixed, pk_py) == cy.fixing(fixed, pk_cy)
    rows = [tuple(rng.randrange(sp.count) for _ in range(3)) for _ in range(5)]
    assert py.apply_rows(trip[1], rows) == [tuple(r) for r in cy.apply_rows(trip[1], rows)]


@needs_ext
@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2)])
def test_invertible_in_span_agree(n, p):
    rng = random.Random(p)
    py, cy = get_kernel(n, p, "python"), get_kernel(n, p, "cython")
    nn = n * n
    for _ in range(5):
        basis = [[rng.randrange(p) for _ in range(2 * nn)] for _ in range(rng.randint(0, 5))]
        off = [rng.randrange(p) for _ in range(2 * nn)]
        assert py.invertible_in_span(off, basis, 2) == [tuple(x) for x in cy.invertible_in_span(off, basis, 2)]


@needs_ext
def test_normal_form_identical_across_backends():
    code = (
        "from mms.fixtures import laderman; from mms.canon import normal_form; "
        "from mms.symmetry import apply, random_element, format_element; from mms.scheme import serialize; "
        "s = apply(random_element(3, 23, 2, 4), laderman(2)); r = normal_form(s); "
        "print(serialize(r.nf) + format_element(r.witness))"
    )
    outs = []
    for backend in ("python", "cython"):
        env = dict(os.environ, MMS_KERNEL=backend)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout)
    assert outs[0] == outs[1]


def test_fallback_when_extension_missing():
    code = (
        "import sys\n"
        "class Block:\n"
        "    def find_spec(self, name, path=None, target=None):\n"
        "        if name == 'mms._kernel':\n"
        "            raise ImportError('blocked')\n"
        "sys.meta_path.insert(0, Block())\n"
        "from mms import kernels\n"
        "from mms.canon import normal_form\n"
        "from mms.fixtures import strassen\n"
        "assert not kernels.HAVE_COMPILED\n"
        "assert type(kernels.get_kernel(2, 2)).__module__ == 'mms._kernel_py'\n"
        "print(normal_form(strassen(3)).nf.rows[0])\n"
    )
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    env = dict(os.environ, MMS_KERNEL="auto")
    direct = subprocess.run(
        [sys.executable, "-c", "from mms.canon import normal_form; from mms.fixtures import strassen; print(normal_form(strassen(3)).nf.rows[0])"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert res.stdout == direct.stdout


def test_benchmark_script_runs():
    script = os.path.join(os.path.dirname(__file__), "..", "benchmarks", "bench_kernels.py")
    res = subprocess.run([sys.executable, script, "--repeat", "1"], capture_output=True, text=True, timeout=600)
    assert res.returncode == 0, res.stderr
    assert "normal_form Laderman x5" in res.stdout
