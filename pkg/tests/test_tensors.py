import json

import pytest

from instantons.families import (
    degenerate_rank6,
    nc_tensor,
    random_tensor,
    three_nc_tensor,
)
from instantons.linalg import Mat, Stream, sample_invertible
from instantons.tensors import (
    OmegaTensor,
    SkewHPart,
    block_sum,
    decompose,
    kernel_inclusion,
    tensor_from_obj,
    tensor_to_obj,
    unflatten,
)


def test_flatten_zero_and_small_ranks(F):
    zero = OmegaTensor.zero(2, F)
    assert zero.flatten().mat.is_zero()
    single = nc_tensor(F, [1, 0, 0, 0, 0, 0])  # x0 ^ x1
    assert single.rank() == 2
    assert nc_tensor(F).rank() == 4


def test_flatten_skew_and_even_rank(F):
    st = Stream("skewtest", 0)
    for n in (1, 2, 3):
        for _ in range(4):
            t = random_tensor(n, F, st)
            m = t.flatten().mat
            assert (m + m.transpose()).is_zero()
            assert m.rank() % 2 == 0


def test_degenerate_rank6_transcription(F, Q):
    for fld in (F, Q):
        t = degenerate_rank6(fld)
        assert t.rank() == 6
        # degenerate at h = e0, v = e0: that column of the flattening vanishes
        assert t.flatten().mat.take_cols([0]).is_zero()


def test_decompose_roundtrip(F):
    st = Stream("decomp", 1)
    t = random_tensor(2, F, st)
    sym, skewh = decompose(t.flatten())
    assert sym == t
    assert skewh.is_zero()


def test_decompose_dimension_bookkeeping(F):
    # a random skew form on H (x) V with n = 2 splits into 18 + 10 coordinates
    st = Stream("decomp2", 3)
    rows = [[F.zero()] * 8 for _ in range(8)]
    for i in range(8):
        for j in range(i + 1, 8):
            c = st.next_element(F)
            rows[i][j] = c
            rows[j][i] = F.neg(c)
    from instantons.tensors import SkewForm

    s = SkewForm(2, F, Mat.from_rows(F, rows, 8))
    sym, skewh = decompose(s)
    assert sym.coeffs.nrows * sym.coeffs.ncols == 18
    assert skewh.coeffs.nrows * skewh.coeffs.ncols == 10
    assert sym.flatten().mat + skewh.flatten().mat == s.mat


def test_decompose_pure_skewh_part(F):
    st = Stream("decomp3", 5)
    part = SkewHPart(2, F, Mat.from_rows(F, [st.next_vector(F, 10)], 10))
    sym, skewh = decompose(part.flatten())
    assert sym.coeffs.is_zero()
    assert skewh.coeffs == part.coeffs
    with pytest.raises(ValueError):
        unflatten(part.flatten())


def test_image_dims(F, chain52):
    assert nc_tensor(F).image().dim == 4
    assert chain52.image().dim == 12
    assert OmegaTensor.zero(3, F).image().dim == 0
    assert chain52.flatten().mat.kernel().dim == 8  # rank-nullity against rank 12


def test_contract_line_convention(F):
    eta = nc_tensor(F)  # x0^x1 + x2^x3
    q = eta.contract_line([1, 0, 0, 0, 0, 0])  # e0 ^ e1
    assert q.get(0, 0) == 1
    q2 = eta.contract_line([0, 1, 0, 0, 0, 0])  # e0 ^ e2
    assert q2.get(0, 0) == 0
    assert OmegaTensor.zero(2, F).contract_line([1, 0, 0, 0, 0, 0]).is_zero()


def test_contract_line_symmetric_linear(F):
    st = Stream("contract", 2)
    t = random_tensor(3, F, st)
    lam = st.next_vector(F, 6)
    mu = st.next_vector(F, 6)
    q = t.contract_line(lam)
    assert q == q.transpose()
    s = [F.add(a, b) for a, b in zip(lam, mu)]
    assert t.contract_line(s) == q + t.contract_line(mu)


def test_restrict_block_projection(F):
    eta1 = nc_tensor(F, [1, 2, 3, 0, 0, 1])
    eta2 = nc_tensor(F, [0, 1, 0, 5, 0, 7])
    both = block_sum(eta1, eta2)
    restricted = both.restrict_xi([1, 0])
    assert restricted == eta2
    with pytest.raises(ValueError):
        both.restrict_xi([0, 0])


def test_restrict_rank_bound(F, chain52):
    st = Stream("restr", 4)
    rank = chain52.rank()
    for _ in range(5):
        xi = st.next_vector(F, 5)
        if all(F.is_zero(x) for x in xi):
            continue
        assert chain52.restrict_xi(xi).rank() <= rank


def test_conjugate_identity_and_sign(F, full36):
    n = full36.n
    ident = Mat.identity(F, n)
    assert full36.conjugate(ident) == full36
    assert full36.conjugate(-ident) == full36  # quadratic in H
    with pytest.raises(ValueError):
        full36.conjugate(Mat.zeros(F, n, n))


def test_conjugate_preserves_rank(F):
    st = Stream("conj", 9)
    for seed in range(10):
        t = random_tensor(3, F, st)
        g = sample_invertible(3, F, st.child("g", seed))
        assert t.conjugate(g).rank() == t.rank()


def test_restrict_conjugate_equivariance(F, full36):
    # restricting a conjugated tensor along xi matches restricting the
    # original along xi o g^(-1), up to the base change between the kernels
    st = Stream("equivar", 0)
    g = sample_invertible(3, F, st)
    xi = [F.of_int(2), F.of_int(5), F.of_int(1)]
    left = full36.conjugate(g).restrict_xi(xi)
    ginv = g.inverse()
    xi_mat = Mat.from_rows(F, [xi], 3)
    xi_t = (xi_mat @ ginv).row(0)
    right = full36.restrict_xi(xi_t)
    # the two restrictions are conjugate by the base change between kernel bases
    jl = kernel_inclusion(F, xi)
    jr = kernel_inclusion(F, xi_t)
    # g maps ker(xi o g^{-1})... solve jr @ s = g @ jl for the 2x2 base change
    target = g @ jl
    s_cols = []
    for c in range(2):
        col = [target.get(i, c) for i in range(3)]
        sol = jr.solve(col)
        assert sol is not None
        s_cols.append(sol)
    s = Mat.from_rows(F, s_cols, 2).transpose()
    assert right.apply_h_map(s) == left


def test_block_sum_examples(F):
    t = three_nc_tensor(F, seed=1)
    assert t.n == 3 and t.rank() == 12
    eta = nc_tensor(F)
    padded = block_sum(eta, OmegaTensor.zero(1, F))
    assert padded.rank() == eta.rank()
    with pytest.raises(ValueError):
        from instantons.fields import QQ

        block_sum(eta, nc_tensor(QQ))


def test_tensor_file_roundtrip(F, Q, tmp_path):
    from instantons.tensors import read_tensor, write_tensor

    st = Stream("io", 0)
    t = random_tensor(2, F, st)
    path = tmp_path / "t.json"
    write_tensor(t, str(path))
    back = read_tensor(str(path))
    assert back == t and back.field == t.field
    # rational entries serialize as "a/b" strings and round-trip bit-exactly
    from fractions import Fraction

    tq = OmegaTensor.from_entries(
        1, Q, {(0, 0, 0, 1): Fraction(3, 7), (0, 0, 2, 3): Fraction(-2)}
    )
    obj = tensor_to_obj(tq)
    assert {e["c"] for e in obj["entries"]} == {"3/7", "-2"}
    assert tensor_from_obj(json.loads(json.dumps(obj))) == tq
