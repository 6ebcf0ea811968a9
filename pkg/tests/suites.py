"""Deterministic property suites shared by module tests and acceptance.

Each suite function raises AssertionError on failure and returns a short
summary string on success, so callers can assert and report uniformly.
"""

import numpy as np
from scipy.stats import qmc

from selfsim.group import BoundaryPoint, act_vertex, is_identity, reduce_word, wreath_decompose
from selfsim.hecke import word_perm
from selfsim.renorm import in_omega, renorm_map
from selfsim.schreier import induced_ball, orbital_ball
from selfsim.spectra import spectral_shift_check, sym_eigvals

LETTERS = "abcd"


def _all_words_with_perms(n):
    """Depth-first stream of every word of length <= 8 with its level-n permutation.

    The permutation is grown one composed letter at a time, so the whole
    4^0 + ... + 4^8 enumeration costs one fancy-index per word.
    """
    base = {ch: word_perm(ch, n) for ch in LETTERS}
    identity = np.arange(1 << n)

    def walk(word, perm, budget):
        yield word, perm
        if budget:
            for ch in LETTERS:
                yield from walk(word + ch, perm[base[ch]], budget - 1)

    yield from walk("", identity, 8)


def _perm_from_decomposition(word, n, cache):
    """Level-n permutation rebuilt from the level-1 wreath decomposition."""
    word = reduce_word(word)
    key = (word, n)
    if key not in cache:
        if n == 0:
            res = np.zeros(1, dtype=np.int64)
        else:
            dec = wreath_decompose(word)
            half = 1 << (n - 1)
            p0 = _perm_from_decomposition(dec.section0, n - 1, cache)
            p1 = _perm_from_decomposition(dec.section1, n - 1, cache)
            res = np.empty(1 << n, dtype=np.int64)
            # the section acting below is selected by the input bit, the
            # output bit is the root permutation applied to it
            if dec.swap:
                res[:half] = half + p0
                res[half:] = p1
            else:
                res[:half] = p0
                res[half:] = half + p1
        cache[key] = res
    return cache[key]


def _act_via_decomposition(word, v):
    if not v:
        return v
    dec = wreath_decompose(word)
    section = dec.section0 if v[0] == "0" else dec.section1
    head = v[0]
    if dec.swap:
        head = "1" if head == "0" else "0"
    return head + _act_via_decomposition(section, v[1:])


def suite_decomposition():
    """Wreath decomposition reproduces the action of every word of length <= 8.

    Exhaustively at level 6 through permutation arrays, and against the
    letter-by-letter act_vertex oracle on a fixed word sample over every
    vertex of level <= 6.
    """
    cache = {}
    count = 0
    sampled = 0
    vertices = [format(i, f"0{lvl}b") for lvl in range(7) for i in range(1 << lvl)]
    vertices[0] = ""
    for word, perm in _all_words_with_perms(6):
        rebuilt = _perm_from_decomposition(word, 6, cache)
        assert np.array_equal(perm, rebuilt), f"decomposition mismatch for {word!r}"
        if count % 441 == 0 or len(word) <= 2:
            for v in vertices:
                assert act_vertex(word, v) == _act_via_decomposition(word, v), (word, v)
            sampled += 1
        count += 1
    return f"{count} words at level 6, {sampled} cross-checked on all vertices of level <= 6"


def suite_word_action():
    """is_identity agrees with the brute-force level-10 action for length <= 8."""
    identity = np.arange(1 << 10)
    count = 0
    trivial = 0
    for word, perm in _all_words_with_perms(10):
        acts_trivially = bool(np.array_equal(perm, identity))
        assert is_identity(word) == acts_trivially, f"word problem mismatch for {word!r}"
        trivial += acts_trivially
        count += 1
    return f"{count} words checked on V_10, {trivial} identities"


def _graph_key(g):
    return (g.root, tuple(sorted(g.vertices)), tuple(sorted(g.edges)), tuple(g.labels))


def suite_ball_monotone():
    """Smaller orbital balls are the induced rooted subgraphs of larger ones."""
    cases = [
        (BoundaryPoint.parse("(1)"), ("a", "b", "c", "d"), 16),
        (BoundaryPoint.parse("(0)"), ("a", "b", "c", "d"), 16),
        (BoundaryPoint.parse("01(10)"), ("a", "b", "c", "d"), 12),
        (BoundaryPoint.parse("(1)"), ("a", "d"), 16),
    ]
    checked = 0
    for x, gens, r_max in cases:
        depth = 2 * r_max + 64
        big = orbital_ball(x, gens, r_max, depth)
        for r in range(r_max):
            small = orbital_ball(x, gens, r, depth)
            cut = induced_ball(big, big.root, r)
            assert _graph_key(small) == _graph_key(cut), (str(x), gens, r)
            checked += 1
    return f"{checked} radius pairs across {len(cases)} center/generator cases"


def suite_omega_invariance():
    """Membership in the invariant region is preserved both ways by the map.

    10^5+ quasi-random points of the [-6,6]^2 box away from the beta = +-2
    pole lines; the equivalence is exact, so no tolerance enters.
    """
    pts = qmc.Sobol(d=2, scramble=False).random_base2(m=17) * 12.0 - 6.0
    checked = 0
    for alpha, beta in pts:
        if beta == 2.0 or beta == -2.0:
            continue
        p = (float(alpha), float(beta))
        assert in_omega(p) == in_omega(renorm_map(p)), p
        checked += 1
    assert checked >= 10**5
    return f"{checked} quasi-random points"


def suite_shift_agreement():
    """Direct and shifted spectral membership agree on random symmetric matrices.

    Probes sit either on computed eigenvalues or at distance >= 0.05 from the
    whole spectrum, clear of the band where the two tolerances differ.
    """
    rng = np.random.default_rng(20240814)
    checks = 0
    for _ in range(100):
        dim = int(rng.integers(2, 17))
        raw = rng.uniform(-1.0, 1.0, (dim, dim))
        M = (raw + raw.T) / 2.0
        values = sym_eigvals(M)
        norm = float(np.abs(values).max())
        R = 2.0 * norm if norm else 1.0
        probes = list(rng.choice(values, 10))
        top, bottom = values.max(), values.min()
        for _ in range(10):
            off = 0.05 + float(rng.uniform(0.0, 1.0))
            probes.append(top + off if rng.random() < 0.5 else bottom - off)
        for alpha in probes:
            report = spectral_shift_check(M, float(alpha), R, 1e-8)
            assert report.agree, (dim, alpha, report)
            checks += 1
    return f"{checks} probe agreements over 100 random matrices"
