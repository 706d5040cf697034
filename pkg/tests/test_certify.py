import json

import pytest

from instantons.certify import (
    fiber_dim_check,
    find_pair,
    find_xi,
    propagation_check,
    rank_preservation_checks,
    smoothness_certificate,
)
from instantons.families import (
    extend_fiber,
    nc_tensor,
    sample_instanton,
    thooft_tensor,
)
from instantons.linalg import Mat, Stream, sample_invertible
from instantons.tensors import block_sum


def test_checks_all_true_on_constructed_extension(F, full36):
    ext = extend_fiber(full36, seed=3)
    assert rank_preservation_checks(ext, [1, 0, 0, 0]) == (True, True, True, True)


def test_checks_all_false_on_block_drop(F):
    t = block_sum(nc_tensor(F), nc_tensor(F, [1, 1, 0, 0, 0, 1]))
    assert rank_preservation_checks(t, [1, 0]) == (False, False, False, False)
    with pytest.raises(ValueError):
        rank_preservation_checks(t, [0, 0])


def test_checks_agree_on_samples(F, chain52):
    st = Stream("rkl", 0)
    for _ in range(20):
        xi = st.next_vector(F, 5)
        if all(F.is_zero(x) for x in xi):
            continue
        checks = rank_preservation_checks(chain52, xi)
        assert len(set(checks)) == 1


def test_orbit_transport_of_checks(F, chain52):
    # if the checks pass at xi, they pass at the transported hyperplane for
    # the conjugated tensor
    st = Stream("orbit", 0)
    xi = [F.of_int(1), F.of_int(2), F.of_int(0), F.of_int(4), F.of_int(1)]
    base = rank_preservation_checks(chain52, xi)
    g = sample_invertible(5, F, st)
    conj = chain52.conjugate(g)
    xi_t = (Mat.from_rows(F, [xi], 5) @ g).row(0)  # xi o g
    assert rank_preservation_checks(conj, xi_t) == base


def test_generic_hyperplanes_mostly_preserve(F):
    t = sample_instanton(4, 2, F, 1)
    st = Stream("generic_xi", 0)
    preserved = 0
    for _ in range(100):
        xi = st.next_vector(F, 4)
        if all(F.is_zero(x) for x in xi):
            continue
        if t.restrict_xi(xi).rank() == t.rank():
            preserved += 1
    assert preserved >= 95


def test_find_xi_on_chain_and_net(F, chain52):
    xi, h1, trial, log = find_xi(chain52, 50, seed=0)
    assert h1 <= 1
    assert all(h >= h1 for _t, h in log)
    xi5, h15, _t, _l = find_xi(thooft_tensor(5, F), 50, seed=0)
    assert h15 == 0


def test_find_pair(F, chain52):
    U, trials = find_pair(chain52, seed=0)
    assert U.dim == 2 and trials <= 8
    with pytest.raises(ValueError):
        find_pair(sample_instanton(3, 2, F, 0), seed=0)


def test_fiber_dim_examples(F, full36):
    two_nc = block_sum(nc_tensor(F), nc_tensor(F, [1, 2, 0, 0, 1, 1]))
    assert fiber_dim_check(two_nc) == (12, 12, True)
    sol, exp, ok = fiber_dim_check(full36)
    assert (sol, exp, ok) == (18, 18, True)
    th4_restricted = thooft_tensor(4, F).restrict_xi([0, 1, 0, 0])
    assert fiber_dim_check(th4_restricted)[2] is True


def test_propagation_on_chain(F, chain52):
    xi, _h1, _t, _l = find_xi(chain52, 50, seed=5)
    rep = propagation_check(chain52, xi)
    assert rep.implication_holds and rep.inequality_holds
    assert rep.h2_s2 == 0
    # a dropping hyperplane is rejected
    t = block_sum(nc_tensor(F), nc_tensor(F, [1, 1, 0, 0, 0, 1]))
    with pytest.raises(ValueError):
        propagation_check(t, [1, 0])


def test_propagation_through_44_over_36(F, full36):
    ext = extend_fiber(full36, seed=9)
    rep = propagation_check(ext, [1, 0, 0, 0])
    assert rep.implication_holds and rep.inequality_holds


def test_certificate_smooth_chain(F, chain52):
    cert = smoothness_certificate(chain52, induction_seed=0)
    assert cert.consistent
    assert cert.smooth_point is True
    assert cert.rank == 12
    assert cert.tangent_sym_lambda == 62 == cert.expected_sym_lambda
    assert cert.s2 == (0, 37, 0)
    assert cert.induction_witness["propagation"]["inequality_holds"]


def test_certificate_corank2_dims(F, corank2_n2):
    cert = smoothness_certificate(corank2_n2)
    assert cert.consistent and cert.smooth_point
    assert cert.tangent_sym_lambda == 17


def test_certificate_degenerate_flagged(F):
    from instantons.families import degenerate_rank6

    cert = smoothness_certificate(degenerate_rank6(F))
    assert cert.modular is False
    assert cert.nondegeneracy.is_degenerate
    assert cert.coh_rows is None
    assert cert.consistent  # internal checks still hold


def test_certificate_idempotent(F, corank2_n2):
    a = smoothness_certificate(corank2_n2, induction_seed=1).to_obj()
    b = smoothness_certificate(corank2_n2, induction_seed=1).to_obj()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
