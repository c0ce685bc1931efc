import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_graphs
from shallowminor import _kernels
from shallowminor.matching import build_aux_graph, max_bipartite_matching
from shallowminor.solvers import _Frame

pure_scan = getattr(_kernels.subset_scan, "py_func", _kernels.subset_scan)
pure_matched = getattr(_kernels.matched_edges, "py_func", _kernels.matched_edges)


def _frame(g):
    return _Frame.build(g, g.vertices)


@settings(max_examples=60)
@given(small_graphs(max_n=7), st.booleans())
def test_compiled_and_pure_scan_agree(g, stm):
    f = _frame(g)
    cand = np.arange(len(f.ids), dtype=np.int64)
    everyone = np.int64((1 << len(f.ids)) - 1)
    args = (f.adj, cand, everyone, stm, np.int64(1), np.int64(1 << len(f.ids)))
    assert tuple(map(int, _kernels.subset_scan(*args))) == tuple(map(int, pure_scan(*args)))


@settings(max_examples=80)
@given(small_graphs(max_n=8), st.data(), st.booleans())
def test_kernel_matching_size_matches_python(g, data, stm):
    nails = data.draw(st.sets(st.sampled_from(sorted(g.vertices)), min_size=1))
    f = _frame(g)
    everyone = np.int64((1 << len(f.ids)) - 1)
    buf = _kernels.scratch(len(f.ids))
    e = pure_matched(f.adj, np.int64(f.mask(nails)), everyone, stm, *buf)
    b = build_aux_graph(g, nails, "stm-half" if stm else "sd1")
    assert e == len(max_bipartite_matching(b)) + len(b.forced_pairs)


def test_popcount_and_lex_order():
    assert _kernels._popcount(np.int64(0b1011)) == 3
    # {0, 3} < {1} as sorted lists; {0} is a prefix of {0, 2}.
    assert _kernels._lex_less(np.int64(0b1001), np.int64(0b10))
    assert _kernels._lex_less(np.int64(0b1), np.int64(0b101))
    assert not _kernels._lex_less(np.int64(0b101), np.int64(0b101))


SNIPPET = """
import json
from shallowminor import _kernels
from shallowminor.graph import petersen_graph
from shallowminor.solvers import densest_depth1_exact
s, m = densest_depth1_exact(petersen_graph(), "stm-half")
print(json.dumps([_kernels.USE_NUMBA, str(s.density), sorted(m.nails)]))
"""


@pytest.mark.parametrize("flag", ["1", ""])
def test_env_flag_selects_backend(flag):
    env = dict(os.environ, SHALLOWMINOR_NO_JIT=flag)
    out = subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True, check=True)
    use_numba, dens, nails = json.loads(out.stdout)
    assert use_numba == (flag == "")
    assert dens == "3/2" and nails == list(range(10))
