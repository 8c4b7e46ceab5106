import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from threesum_lab.lsd_reduction import (
    BlockParams,
    LSDInstance,
    LSDParameterError,
    ProtocolError,
    a2_core,
    alice_bit_bound,
    alignment_audit,
    base_digits,
    brute_force_disjoint,
    build_a1,
    build_a2,
    build_instance,
    build_queries,
    ceil_log2,
    choose_ell,
    data_element,
    disjoint_via_reduction,
    rank_subset,
    simulate_protocol,
    unrank_subset,
)
from threesum_lab.threesum_core import BitVectorStructure, SortedSumsetStructure, brute_force_answer


@pytest.fixture
def p22():
    return BlockParams.minimal(2, 2, 2)


def test_a1_examples(p22):
    assert data_element(p22, 0, 0) == 1
    assert data_element(p22, 1, 1) == 10
    assert data_element(p22, 0, 1) == 2
    a1 = build_a1([], p22)
    assert len(a1) == p22.n == 4
    assert all(base_digits(x, 5, 3)[2] == 1 for x in a1)  # all dummies carry the marker


def test_a1_digit_shape():
    params = BlockParams.minimal(9, 3, 3)
    for j in range(9):
        for b in range(3):
            dg = base_digits(data_element(params, j, b), params.base, params.ell + 1)
            assert sum(1 for x in dg[: params.ell] if x) == 1
            assert dg[params.ell] == 0


def test_a2_examples(p22):
    assert a2_core(p22) == sorted([5, 10, 1, 2])
    assert a2_core(BlockParams.minimal(2, 2, 1)) == [0]
    params = BlockParams.minimal(9, 3, 3)
    core = a2_core(params)
    assert len(core) == 3 * 3**2
    for x in core:
        assert sum(1 for dg in base_digits(x, params.base, 3) if dg == 0) == 1
    assert len(build_a2(params)) == params.n


def test_a2_too_large():
    with pytest.raises(LSDParameterError):
        BlockParams.minimal(4, 2, 4)  # 4 * 2^3 = 32 > n = 8


def test_query_examples(p22):
    assert build_queries((0, 1), p22) == [11]
    assert build_queries((0, 0), p22) == [6]
    q = build_queries((1, 0, 1, 1), BlockParams.minimal(4, 2, 2))
    assert len(q) == 2
    assert [z // 5**3 for z in q] == [0, 1]


def test_params_validation():
    with pytest.raises(LSDParameterError):
        BlockParams.minimal(3, 2, 2)
    with pytest.raises(LSDParameterError):
        BlockParams(2, 2, 2, 2 * 5**4)  # modulus must strictly exceed the bound


def test_disjoint_examples(p22):
    universe = [(j, b) for j in range(2) for b in range(2)]
    empty = LSDInstance(2, 2, [], (0, 1))
    assert disjoint_via_reduction(empty, p22) and brute_force_disjoint(empty)
    full = LSDInstance(2, 2, universe, (0, 1))
    ts = build_instance(full, p22)
    assert all(brute_force_answer(ts, z) for z in build_queries(full.query_vector, p22))
    assert not disjoint_via_reduction(full, p22)
    one = LSDInstance(2, 2, [(0, 0)], (0, 1))
    ts = build_instance(one, p22)
    assert brute_force_answer(ts, 11)
    assert 1 in ts.a1 and 10 in ts.a2
    assert not disjoint_via_reduction(one, p22) and not brute_force_disjoint(one)


def test_brute_force_disjoint():
    assert brute_force_disjoint(LSDInstance(4, 2, [], (0, 0, 0, 0)))
    assert not brute_force_disjoint(LSDInstance(4, 2, [(3, 1)], (0, 0, 0, 1)))


def _all_instances(N, B):
    universe = [(j, b) for j in range(N) for b in range(B)]
    for mask in range(1 << len(universe)):
        data = [u for k, u in enumerate(universe) if mask >> k & 1]
        for qv in itertools.product(range(B), repeat=N):
            yield LSDInstance(N, B, data, qv)


@pytest.mark.parametrize("N,B,ell", [(2, 2, 1), (2, 2, 2), (3, 2, 1), (4, 2, 2), (2, 3, 2)])
def test_equivalence_exhaustive_small(N, B, ell):
    params = BlockParams.minimal(N, B, ell)
    for inst in _all_instances(N, B):
        assert disjoint_via_reduction(inst, params) == brute_force_disjoint(inst)


def test_equivalence_with_larger_modulus():
    params = BlockParams(4, 2, 2, 10**6 + 3)
    for inst in itertools.islice(_all_instances(4, 2), 0, 4096, 37):
        assert disjoint_via_reduction(inst, params) == brute_force_disjoint(inst)


def test_alignment_audit_clean():
    params = BlockParams.minimal(6, 2, 3)
    rng = random.Random(2)
    for _ in range(30):
        data = [(j, b) for j in range(6) for b in range(2) if rng.random() < 0.5]
        inst = LSDInstance(6, 2, data, [rng.randrange(2) for _ in range(6)])
        assert alignment_audit(inst, params) == []


def test_choose_ell():
    assert choose_ell(2**20, 2, 0.5) == 2
    assert choose_ell(4, 2, 0.5) == 1
    for n in (2**16, 2**20, 2**30, 2**40):
        for B in (2, 4, 16):
            for delta in (0.5, 0.75, 1.0):
                ell = choose_ell(n, B, delta)
                if ell > 1 or math.floor(delta * math.log2(n) / math.log2(2 * B + 1)) - 2 == 1:
                    assert ell * B ** (ell - 1) <= (2 * B + 1) ** ell <= n**delta


def test_group_size_from_choose_ell():
    for log_n, B, delta in [(20, 2, 0.5), (24, 4, 0.75), (30, 2, 1.0), (32, 16, 1.0)]:
        ell = choose_ell(2**log_n, B, delta)
        N = 2**log_n // B
        N -= N % ell
        params = BlockParams.minimal(N, B, ell)
        assert params.delta <= params.n ** (1 + delta)


def test_ceil_log2():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_subset_rank_round_trip():
    for S in range(0, 7):
        for q in range(0, S + 1):
            subsets = list(itertools.combinations(range(S), q))
            for r, sub in enumerate(subsets):
                assert rank_subset(sub, S) == r
                assert unrank_subset(r, S, q) == list(sub)


@given(st.integers(1, 60), st.data())
def test_rank_fits_width(S, data):
    q = data.draw(st.integers(0, S))
    cells = sorted(data.draw(st.sets(st.integers(0, S - 1), min_size=q, max_size=q)))
    r = rank_subset(cells, S)
    assert 0 <= r < math.comb(S, q)
    assert r.bit_length() <= ceil_log2(math.comb(S, q))
    assert unrank_subset(r, S, q) == cells


def _protocol_case(data, qv):
    params = BlockParams.minimal(4, 2, 2)
    inst = LSDInstance(4, 2, data, qv)
    ts = build_instance(inst, params)
    return inst, params, ts, build_queries(qv, params)


def test_protocol_bitvector_single_round():
    inst, params, ts, queries = _protocol_case([(0, 0), (3, 1)], (0, 1, 1, 1))
    tr = simulate_protocol(BitVectorStructure(ts), queries)
    assert tr.num_rounds == 1
    assert tr.rounds[0].cells_requested == len(set(queries)) <= params.num_blocks
    assert tr.bob_bits == tr.rounds[0].cells_requested
    assert tr.answer == brute_force_disjoint(inst) is False
    assert tr.alice_bits <= alice_bit_bound(params.delta, 2, 1)


def test_protocol_zero_queries():
    inst, params, ts, _ = _protocol_case([], (0, 0, 0, 0))
    tr = simulate_protocol(BitVectorStructure(ts), [])
    assert tr.num_rounds == 0 and tr.alice_bits == 0 and tr.bob_bits == 0 and tr.answer


def test_protocol_messages_are_decodable():
    inst, params, ts, queries = _protocol_case([(1, 1)], (0, 1, 0, 0))
    st_ = SortedSumsetStructure(ts, w=params.delta.bit_length())
    tr = simulate_protocol(st_, queries)
    assert tr.answer == brute_force_disjoint(inst)
    prefix = ceil_log2(len(queries) + 1)
    for msg, reply, rec in zip(tr.alice_messages, tr.bob_messages, tr.rounds):
        q = int(msg[:prefix], 2)
        assert q == rec.cells_requested
        body = msg[prefix:]
        cells = unrank_subset(int(body, 2) if body else 0, st_.S, q)
        assert reply == "".join(format(st_.cells[c], f"0{st_.w}b") for c in cells)
        assert len(reply) == q * st_.w


def test_protocol_round_cap():
    inst, params, ts, queries = _protocol_case([(1, 1)], (0, 1, 0, 0))
    st_ = SortedSumsetStructure(ts, w=params.delta.bit_length())
    with pytest.raises(ProtocolError):
        simulate_protocol(st_, queries, T=1)
