import numpy as np
import pytest
import scipy.sparse as sp

from sbd.blockops import det_block, det_prime, solve_block, solve_block_right, split
from sbd.errors import OddDimension, Singular
from sbd.hamiltonians import gen_commuting_block


def test_split_diagonal():
    p = split(np.diag([1.0, 2.0, 3.0, 4.0]))
    np.testing.assert_array_equal(p.a.toarray(), np.diag([1.0, 2.0]))
    np.testing.assert_array_equal(p.d.toarray(), np.diag([3.0, 4.0]))
    assert p.b.nnz == 0 and p.c.nnz == 0


def test_split_scalar_blocks():
    p = split(np.array([[2.0, 1.0], [1.0, 3.0]]))
    assert p.a.toarray() == [[2.0]]
    assert p.b.toarray() == [[1.0]]
    assert p.c.toarray() == [[1.0]]
    assert p.d.toarray() == [[3.0]]


@pytest.mark.parametrize("seed", range(5))
def test_split_reassemble_round_trip(seed):
    rng = np.random.default_rng(seed)
    m = sp.random(8, 8, density=0.4, random_state=rng, dtype=float).astype(complex)
    back = split(m).reassemble()
    assert (back != sp.csr_matrix(m)).nnz == 0  # bitwise on stored values


def test_split_rejects_odd():
    with pytest.raises(OddDimension):
        split(np.eye(5))


class TestSolveBlock:
    def test_identity(self):
        r = np.arange(9, dtype=float).reshape(3, 3)
        x = solve_block(np.eye(3), r)
        np.testing.assert_allclose(x.toarray(), r, atol=1e-14)

    def test_diagonal(self):
        x = solve_block(np.diag([2.0, 4.0]), np.eye(2))
        np.testing.assert_allclose(x.toarray(), np.diag([0.5, 0.25]))

    @pytest.mark.parametrize("seed", range(4))
    def test_residual_bound(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(8, 8)) + np.eye(8) * 4.0
        rhs = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        x = solve_block(a, rhs).toarray()
        resid = np.linalg.norm(a @ x - rhs)
        assert resid <= 1e-9 * np.linalg.norm(rhs)

    def test_singular_detected(self):
        a = np.zeros((3, 3))
        a[0, 0] = 1.0
        with pytest.raises(Singular):
            solve_block(a, np.eye(3))

    def test_near_singular_pivot_detected(self):
        a = np.diag([1.0, 1e-15, 1.0])
        with pytest.raises(Singular):
            solve_block(a, np.eye(3))

    def test_right_solve(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(6, 6)) + np.eye(6) * 3.0
        lhs = rng.normal(size=(6, 6))
        x = solve_block_right(a, lhs).toarray()
        np.testing.assert_allclose(x @ a, lhs, atol=1e-9)


class TestDeterminants:
    def test_scalar_blocks_reduce_to_determinant(self):
        p = split(np.array([[2.0, 1.0], [1.0, 3.0]]))
        assert det_block(p).toarray()[0, 0] == pytest.approx(5.0)
        assert det_prime(p).toarray()[0, 0] == pytest.approx(5.0)

    @pytest.mark.parametrize("seed", range(4))
    def test_scalar_blocks_random(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c, d = rng.normal(size=4) + np.array([3.0, 0, 0, 3.0])
        p = split(np.array([[a, b], [c, d]]))
        # 1x1 blocks: both forms equal the ordinary determinant exactly
        assert det_block(p).toarray()[0, 0] == pytest.approx(a * d - b * c, rel=1e-12)
        assert det_prime(p).toarray()[0, 0] == pytest.approx(a * d - b * c, rel=1e-12)

    def test_block_diagonal_gives_ad(self):
        m = np.zeros((4, 4))
        m[:2, :2] = [[2.0, 1.0], [1.0, 2.0]]
        m[2:, 2:] = [[5.0, 0.0], [0.0, 7.0]]
        p = split(m)
        want = m[:2, :2] @ m[2:, 2:]
        np.testing.assert_allclose(det_block(p).toarray(), want, atol=1e-12)
        np.testing.assert_allclose(det_prime(p).toarray(), want, atol=1e-12)

    @pytest.mark.parametrize("seed", range(6))
    def test_agreement_on_commuting_blocks(self, seed):
        p = split(gen_commuting_block(16, seed=seed))
        dev = np.abs((det_block(p) - det_prime(p)).toarray()).max()
        assert dev < 1e-10

    def test_deviation_scales_linearly_with_noise(self):
        # commuting family plus eps-noise: ||det_block - det_prime|| <= K*eps
        rng = np.random.default_rng(42)
        base = gen_commuting_block(16, seed=7).toarray()
        noise = rng.normal(size=base.shape) + 1j * rng.normal(size=base.shape)
        noise = (noise + noise.conj().T) / 2

        def deviation(eps):
            p = split(base + eps * noise)
            return np.abs((det_block(p) - det_prime(p)).toarray()).max()

        eps_grid = [1e-6, 1e-5, 1e-4, 1e-3]
        devs = [deviation(e) for e in eps_grid]
        k_fit = devs[-1] / eps_grid[-1]
        for e, d in zip(eps_grid, devs):
            assert d <= 10.0 * k_fit * e

    def test_drop_tolerance_zero_keeps_fill_in(self):
        rng = np.random.default_rng(1)
        g = rng.normal(size=(8, 8))
        m = g @ g.T + np.eye(8) * 4.0
        p = split(m)
        kept = det_block(p, drop_tol=0.0)
        pruned = det_block(p, drop_tol=1e-2)
        assert kept.nnz >= pruned.nnz
        dev = np.abs((kept - pruned).toarray()).max()
        assert dev <= 1e-2 * np.abs(kept.toarray()).max()

    def test_schur_variant_differs_generically(self):
        rng = np.random.default_rng(0)
        g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        m = (g + g.conj().T) / 2 + np.eye(8) * 3.0
        p = split(m)
        plain = det_block(p).toarray()
        schur = det_block(p, schur_correction=True).toarray()
        assert np.abs(plain - schur).max() > 1e-8
