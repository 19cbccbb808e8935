"""Parity between the compiled kernels and the pure-Python fallback."""
import numpy as np
import pytest

from kgcoherent import _backend
from kgcoherent import _ladder as py_impl

backends = _backend.available_backends()
needs_compiled = pytest.mark.skipif(
    "compiled" not in backends, reason="compiled kernels not built"
)

CASES = [
    # (abs_s, sign_s, su, log_pref): moderate, strongly geometric, matched width
    (0.2308, 1.0, 0.072, -0.8),
    (0.9231, -1.0, 0.426, -11.08),
    (0.0, 1.0, 72.0, -144.0),
    (0.0, 1.0, 0.0, 0.0),
]


@needs_compiled
@pytest.mark.parametrize("abs_s, sign_s, su, log_pref", CASES)
def test_ladder_weights_agree(abs_s, sign_s, su, log_pref):
    cy = backends["compiled"]
    W1, c1 = py_impl.ladder_weights(abs_s, sign_s, su, log_pref, 300, 60)
    W2, c2 = cy.ladder_weights(abs_s, sign_s, su, log_pref, 300, 60)
    assert np.allclose(W1, W2, rtol=1e-12, atol=1e-300)
    assert np.allclose(c1, c2, rtol=1e-12, atol=1e-300)


@needs_compiled
@pytest.mark.parametrize("abs_s, sign_s, su, log_pref", CASES)
@pytest.mark.parametrize("printed", [True, False])
def test_transverse_weights_agree(abs_s, sign_s, su, log_pref, printed):
    cy = backends["compiled"]
    V1, c1 = py_impl.transverse_weights(abs_s, sign_s, su, log_pref, 300, 60, printed)
    V2, c2 = cy.transverse_weights(abs_s, sign_s, su, log_pref, 300, 60, printed)
    assert np.allclose(V1, V2, rtol=1e-12, atol=1e-300)
    assert np.allclose(c1, c2, rtol=1e-12, atol=1e-300)


@needs_compiled
@pytest.mark.parametrize("abs_s, sign_s, su, log_pref", CASES)
@pytest.mark.parametrize("v", [0.0, 0.31, 7.2])
def test_kg_weights_agree(abs_s, sign_s, su, log_pref, v):
    cy = backends["compiled"]
    G1, c1 = py_impl.kg_weight_matrix(abs_s, sign_s, su, v, log_pref, 200, 24)
    G2, c2 = cy.kg_weight_matrix(abs_s, sign_s, su, v, log_pref, 200, 24)
    # sign-crossing entries sit at roundoff level; compare on the matrix scale
    scale = max(np.max(np.abs(G1)), 1e-300)
    assert np.allclose(G1, G2, rtol=1e-11, atol=1e-13 * scale)
    assert np.allclose(c1, c2, rtol=1e-11, atol=1e-13 * scale)


def test_rescaling_handles_extreme_prefactors():
    # matched width with su=1620 spans ~e^{+-3240}; weights must stay normalized
    W, _ = _backend.ladder_weights(0.0, 1.0, 1620.0, -3240.0, 4000, 2200)
    total = W.sum()
    assert np.isfinite(total)
    assert total > 0.0


def test_transverse_zero_momentum_is_empty():
    V, col = _backend.transverse_weights(0.5, 1.0, 0.0, 0.0, 64, 8)
    assert not V.any()
    assert not col.any()


def test_selected_backend_exports_kernels():
    assert callable(_backend.ladder_weights)
    assert _backend.BACKEND in backends
