import random

import pytest

from trace_kit.arith import QQ, gegenbauer, index_phi1, sigma1_N
from trace_kit.cusp_terms import admissible_cusp_reps
from trace_kit.dirichlet import enumerate_characters, trivial_character
from trace_kit.hecke_operator import GroupRingElem, build_Tn, build_Tn_infty
from trace_kit.local_counts import c_class_closed
from trace_kit.matrix_forms import S, T, U, mat_det, mat_mul
from trace_kit.period_oracle import (
    atkin_coset_desc,
    coset_table,
    dim_period_space,
    dim_translation_fixed,
    hecke_coset_desc,
    period_module,
    sigma_block_map,
    trace_coboundary,
    trace_on_V,
    trace_on_W,
    weight_action,
)

T1 = trivial_character(1)


def test_projective_line_sizes():
    for N in (1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12):
        assert len(coset_table(N)) == index_phi1(N)


def test_coset_lifts_and_lookup():
    for N in (1, 4, 6, 9, 12):
        tb = coset_table(N)
        for i, lift in enumerate(tb.lifts):
            assert mat_det(lift) == 1
            assert tb.index_of(lift[2], lift[3]) == i
        rng = random.Random(N)
        for _ in range(20):
            g = (1, 0, 0, 1)
            for _ in range(6):
                g = mat_mul(g, rng.choice((S, T, (1, -1, 0, 1))))
            idx, gamma = tb.lookup(g)
            assert gamma[2] % N == 0
            assert mat_mul(gamma, tb.lifts[idx]) == g


def test_weight_action_trace_is_gegenbauer():
    rng = random.Random(2)
    count = 0
    while count < 50:
        m = tuple(rng.randint(-5, 5) for _ in range(4))
        if mat_det(m) <= 0:
            continue
        count += 1
        for w in (0, 1, 2, 5, 8):
            wm = weight_action(m, w)
            assert sum(wm[r][r] for r in range(w + 1)) == gegenbauer(
                w, m[0] + m[3], mat_det(m)
            )


def test_generator_relations_on_module():
    for N, chi_idx, w in ((1, 0, 10), (4, 1, 3), (5, 1, 2)):
        chars = enumerate_characters(N)
        chi = chars[chi_idx]
        if chi.parity() != (1 if w % 2 == 0 else -1):
            chi = [c for c in chars if c.parity() == (1 if w % 2 == 0 else -1)][0]
        mod = period_module(N, chi, w)
        rng = random.Random(5)
        vec = mod.zero_vec()
        for c in range(mod.g):
            for i in range(mod.dim):
                vec[c][i] = QQ(rng.randint(-4, 4))
        s2 = mod.apply_gamma(S, mod.apply_gamma(S, vec))
        assert s2 == vec
        u3 = mod.apply_gamma(U, mod.apply_gamma(U, mod.apply_gamma(U, vec)))
        assert u3 == vec


def test_translation_permutation_at_weight_zero():
    # at weight zero the translation acts by a twisted point permutation
    mod = period_module(6, trivial_character(6), 0)
    vec = mod.zero_vec()
    vec[0][3] = QQ(1)
    out = mod.apply_gamma(T, vec)
    assert sorted(out[0]) == sorted(vec[0])


def test_period_space_dims():
    assert dim_period_space(1, T1, 10) == 3
    assert dim_period_space(1, T1, 0) == 0
    # dim W = 2 dim S + dim C; level 11 weight 2: genus 1, 2 cusps -> 2+1
    assert dim_period_space(11, trivial_character(11), 0) == 3


def test_kernel_sum_spans_module():
    # Ker(1+S) + Ker(1+U+U^2) is everything except in the degenerate case,
    # where it has codimension one
    for N, w in ((1, 0), (1, 4), (2, 0), (4, 2), (6, 0)):
        chi = trivial_character(N)
        mod = period_module(N, chi, w)
        bs = mod.kernel_one_plus_S()
        # dim Ker(1+U+U^2) via the structured route: images of (1-U)
        # instead compute rank of (1+U+U^2) acting on the whole module
        dim = mod.dim
        cols = []
        for i in range(dim):
            e = mod.zero_vec()
            e[0][i] = QQ(1)
            vu = mod.apply_gamma(U, e)
            vuu = mod.apply_gamma(U, vu)
            img = [x + y + z for x, y, z in zip(e[0], vu[0], vuu[0])]
            cols.append(img)
        # rank over Q
        rows = [[cols[c][r] for c in range(dim)] for r in range(dim)]
        import trace_kit.period_oracle as po

        work = [list(r) for r in rows if any(r)]
        pivots = po._rref_entries(work, dim, mod._e_ops())
        rank_uuu = len(pivots)
        dim_ker_uuu = dim - rank_uuu
        dim_w = dim_period_space(N, chi, w)
        span_dim = len(bs) + dim_ker_uuu - dim_w
        if (w, True) == (0, chi.is_trivial()):
            assert span_dim == dim - 1, (N, w)
        else:
            assert span_dim == dim, (N, w)


def test_trace_identity_single_matrix():
    # trace over the whole module of one double-coset action factors as
    # (symmetric-power trace) * (class weight)
    rng = random.Random(7)
    for N in (1, 2, 3, 4, 6, 8):
        for chi in enumerate_characters(N):
            w = 2 if chi.parity() == 1 else 3
            for _ in range(6):
                n = rng.randint(1, 8)
                m = None
                while m is None:
                    cand = tuple(rng.randint(-6, 6) for _ in range(4))
                    if mat_det(cand) == n:
                        m = cand
                op = GroupRingElem(n, {m: QQ(1)})
                lhs = trace_on_V(N, chi, w, hecke_coset_desc(N, n), op)
                rhs = c_class_closed(N, chi, m) * gegenbauer(w, m[0] + m[3], n)
                assert lhs == rhs, (N, chi.label(), m)


def test_sigma_block_map_unreachable():
    # a matrix whose conjugates never meet the double coset acts as zero
    sigma = hecke_coset_desc(4, 2)
    bm = sigma_block_map(sigma, (2, 0, 0, 1))
    # top-left entries of candidates are even or the level shares a factor:
    # every block must map somewhere or nowhere consistently; just check shape
    assert len(bm) == len(coset_table(4))
    mod = period_module(4, trivial_character(4), 0)
    vec = mod.zero_vec()
    for i in range(mod.dim):
        vec[0][i] = QQ(1)
    out = mod.apply_sigma(sigma, (2, 4, 4, 10), vec)  # det 4 != 2: never members
    assert not any(any(p) for p in out)


def test_action_compatibility():
    # matrix(|_Sigma (gM)) = matrix(|_Sigma M) * matrix(|g)
    rng = random.Random(11)
    N = 4
    chi = trivial_character(N)
    w = 2
    mod = period_module(N, chi, w)
    sigma = hecke_coset_desc(N, 3)
    op3 = build_Tn(3)
    mats = sorted(op3.coeffs)[:4]
    for m in mats:
        for g in (S, T, U):
            gm = mat_mul(g, m)
            vec = mod.zero_vec()
            for c in range(mod.g):
                for i in range(mod.dim):
                    vec[c][i] = QQ(rng.randint(-3, 3))
            lhs = mod.apply_sigma(sigma, gm, vec)
            rhs = mod.apply_sigma(sigma, m, mod.apply_gamma(g, vec))
            assert lhs == rhs, (m, g)


def test_trace_on_W_examples():
    assert trace_on_W(1, T1, 10, hecke_coset_desc(1, 1), build_Tn(1)) == 3
    assert trace_on_W(1, T1, 10, hecke_coset_desc(1, 2), build_Tn(2)) == 2001
    with pytest.raises(ValueError):
        trace_on_W(1, T1, 10, hecke_coset_desc(1, 2), build_Tn(3))


def test_kernel_certification():
    # the period space is annihilated by both defining operators, exactly
    for N, w in ((1, 10), (4, 2), (6, 1)):
        chars = [c for c in enumerate_characters(N) if c.parity() == (1 if w % 2 == 0 else -1)]
        for chi in chars[:2]:
            mod = period_module(N, chi, w)
            for v in mod.period_space():
                vs = mod.apply_gamma(S, v)
                assert all(not any(QQ(x) + QQ(y) for x, y in zip(p, q)) for p, q in zip(v, vs))
                vu = mod.apply_gamma(U, v)
                vuu = mod.apply_gamma(U, vu)
                total = [
                    [QQ(x) + QQ(y) + QQ(z) for x, y, z in zip(p, q, r)]
                    for p, q, r in zip(v, vu, vuu)
                ]
                assert not any(any(p) for p in total)


def test_proof_chain_correction():
    # trace on the period space minus trace on the whole module equals the
    # weight-zero trivial-character coset count
    for N in (1, 2, 3, 4):
        chiN = trivial_character(N)
        for n in range(1, 6):
            op = build_Tn(n)
            sigma = hecke_coset_desc(N, n)
            for w in (0, 2, 4):
                lhs = trace_on_W(N, chiN, w, sigma, op) - trace_on_V(N, chiN, w, sigma, op)
                want = sigma1_N(N, n) if w == 0 else 0
                assert lhs == want, (N, n, w)


def test_translation_space_dimension():
    for N in (1, 2, 3, 4, 6, 8, 9, 12):
        for chi in enumerate_characters(N):
            w = 0 if chi.parity() == 1 else 1
            assert dim_translation_fixed(N, chi, w) == len(admissible_cusp_reps(N, chi))


def test_coboundary_examples():
    assert trace_coboundary(1, T1, 10, hecke_coset_desc(1, 2), build_Tn_infty(2)) == 2049
    assert trace_coboundary(1, T1, 0, hecke_coset_desc(1, 1), build_Tn_infty(1)) == 0
    # composed coset at level 6
    val = trace_coboundary(6, trivial_character(6), 2, atkin_coset_desc(6, 2, 1), build_Tn_infty(2))
    from trace_kit.cusp_terms import eisenstein_trace_atkin

    assert val == eisenstein_trace_atkin(6, 2, 4, 1)
