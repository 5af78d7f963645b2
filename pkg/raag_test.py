from collections import deque
from itertools import product

import pytest

import plmap
import raag
from plmap import NotPhi, Order
from raag import AWord, ExpansionDepthExceeded, Generator, Letter, RaagError, Sign
from sampling import random_phi, random_plf2


def interval(a, b) -> Generator:
    return Generator(plmap.make_plmap([(0, a), (1, b)]))


# Three generators realizing each commutation graph on three vertices
COMMUTATION_GRAPHS = {
    "empty": (interval(0, 1), interval(0, "1/2"), interval("1/4", "3/4")),
    "one_edge": (interval(0, "1/2"), interval("1/2", 1), interval(0, 1)),
    "path": (interval("1/2", 1), interval(0, "1/2"), interval("1/2", "3/4")),
    "triangle": (interval(0, "1/4"), interval("1/4", "1/2"), interval("1/2", 1)),
}
EDGE_COUNTS = {"empty": 0, "one_edge": 1, "path": 2, "triangle": 3}

LEFT, RIGHT, WHOLE = COMMUTATION_GRAPHS["one_edge"]


def letters_word(generators, letters) -> AWord:
    return AWord(tuple(Letter(generators[i], s) for i, s in letters))


def trivial_by_search(generators, letters) -> bool:
    """Shuffle commuting neighbours and cancel inverse neighbours until the word empties"""
    start = tuple(letters)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        if not w:
            return True
        for i in range(len(w) - 1):
            (a, s), (b, t) = w[i], w[i + 1]
            if a == b and s == -t:
                candidates = [w[:i] + w[i + 2:]]
            elif a != b and generators[a].commutes_with(generators[b]):
                candidates = [w[:i] + (w[i + 1], w[i]) + w[i + 2:]]
            else:
                candidates = []
            for other in candidates:
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
    return False


def all_words(size: int, max_length: int):
    alphabet = [(i, s) for i in range(size) for s in (1, -1)]
    for length in range(max_length + 1):
        yield from product(alphabet, repeat=length)


def test_commutation_graphs():
    for name, generators in COMMUTATION_GRAPHS.items():
        graph = raag.commutation_graph(generators)
        assert sorted(graph.nodes) == [0, 1, 2]
        assert graph.number_of_edges() == EDGE_COUNTS[name]
        for i, j in product(range(3), repeat=2):
            if i != j:
                assert graph.has_edge(i, j) == generators[i].commutes_with(generators[j])


def test_generator_validation():
    with pytest.raises(NotPhi):
        Generator(plmap.identity(2))
    with pytest.raises(RaagError):
        Generator(plmap.identity(1), leaf=0)
    with pytest.raises(RaagError):
        raag.gen(plmap.identity(1), sign=2)


def test_generators_are_ordered_by_phi_order_then_leaf():
    assert LEFT < WHOLE < RIGHT
    assert Generator(LEFT.h, 1) < Generator(LEFT.h, 2)
    assert str(Generator(LEFT.h, 2)).endswith("#2")


def test_commuting_generators():
    assert raag.commutes(LEFT.h, RIGHT.h)
    assert not raag.commutes(LEFT.h, WHOLE.h)
    assert LEFT.commutes_with(LEFT)
    assert not Generator(LEFT.h, 1).commutes_with(Generator(LEFT.h, 2))


def test_reduce_word():
    a, b = raag.gen(LEFT.h), raag.gen(RIGHT.h)
    assert raag.reduce_word(a * raag.invert(a)) == raag.EMPTY
    assert raag.reduce_word(a * b * raag.invert(a)) == b
    assert raag.reduce_word(b * a) == a * b
    c = raag.gen(WHOLE.h)
    assert len(raag.reduce_word(a * c * raag.invert(a))) == 3
    assert raag.is_trivial(a * b * raag.invert(a) * raag.invert(b))
    assert not raag.is_trivial(a * c * raag.invert(a) * raag.invert(c))


def test_word_helpers():
    w = raag.word([(LEFT, 1), (RIGHT, -1)])
    assert len(w) == 2
    assert [letter.sign for letter in raag.invert(w)] == [1, -1]
    assert w.generators == [LEFT, RIGHT]


def test_relabel_composes_on_the_right():
    g = plmap.linear(1, 1)
    assert raag.relabel(raag.gen(LEFT.h), g) == raag.gen(LEFT.h)
    half = plmap.make_plmap([(0, 0), (1, "1/2")])
    moved = raag.relabel(raag.gen(WHOLE.h, leaf=2), half)
    assert moved.letters[0].generator == Generator(half, 2)


def test_magnus_of_single_letters():
    a = raag.gen(LEFT.h)
    assert raag.magnus(a, 3).coefficients == {(): 1, (0,): 1}
    assert raag.magnus(raag.invert(a), 3).coefficients == {(): 1, (0,): -1, (0, 0): 1, (0, 0, 0): -1}
    assert raag.magnus(raag.EMPTY, 3).is_one()
    with pytest.raises(RaagError):
        raag.magnus(a, 0)


def test_magnus_of_a_commutator():
    a, c = raag.gen(LEFT.h), raag.gen(WHOLE.h)
    commutator = a * c * raag.invert(a) * raag.invert(c)
    poly = raag.magnus(commutator, 2)
    assert poly.homogeneous(1) == {}
    assert poly.homogeneous(2) == {(0, 1): 1, (1, 0): -1}
    assert poly.terms()[0] == ((), 1)


def test_magnus_respects_commutation():
    a, b = raag.gen(LEFT.h), raag.gen(RIGHT.h)
    assert raag.magnus(a * b, 2).coefficients == raag.magnus(b * a, 2).coefficients


def test_sign():
    a, c = raag.gen(LEFT.h), raag.gen(WHOLE.h)
    assert raag.sign(a, max_degree=4) is Sign.POSITIVE
    assert raag.sign(raag.invert(a), max_degree=4) is Sign.NEGATIVE
    assert raag.sign(raag.EMPTY, max_degree=4) is Sign.ZERO
    assert raag.sign(a * raag.invert(a), max_degree=4) is Sign.ZERO
    commutator = a * c * raag.invert(a) * raag.invert(c)
    assert raag.sign(commutator, max_degree=4) is Sign.NEGATIVE
    assert raag.sign(raag.invert(commutator), max_degree=4) is Sign.POSITIVE
    with pytest.raises(ExpansionDepthExceeded):
        raag.sign(commutator, max_degree=1)


def test_compare():
    a, c = raag.gen(LEFT.h), raag.gen(WHOLE.h)
    assert raag.compare(a, c, max_degree=4) is Order.LESS
    assert raag.compare(c, a, max_degree=4) is Order.GREATER
    assert raag.compare(a * c, a * c, max_degree=4) is Order.EQUAL


@pytest.mark.parametrize("name", sorted(COMMUTATION_GRAPHS))
def test_word_problem_matches_search(name):
    generators = COMMUTATION_GRAPHS[name]
    for letters in all_words(3, 4):
        assert raag.is_trivial(letters_word(generators, letters)) == trivial_by_search(generators, letters)


def test_reduced_words_are_canonical(rng):
    generators = COMMUTATION_GRAPHS["path"]
    for _ in range(200):
        letters = [(rng.randrange(3), rng.choice((1, -1))) for _ in range(rng.randint(0, 6))]
        w = letters_word(generators, letters)
        reduced = raag.reduce_word(w)
        assert raag.reduce_word(reduced) == reduced
        assert raag.is_trivial(w * raag.invert(reduced))


def test_order_is_bi_invariant(rng):
    pool = COMMUTATION_GRAPHS["one_edge"] + (interval("1/4", "3/4"),)

    def random_word():
        return AWord(tuple(Letter(rng.choice(pool), rng.choice((1, -1))) for _ in range(rng.randint(0, 4))))

    for _ in range(150):
        u, w, v = random_word(), random_word(), random_word()
        s = raag.sign(w, max_degree=8)
        assert raag.sign(raag.invert(w), max_degree=8).value == -s.value
        assert raag.sign(u * w * raag.invert(u), max_degree=8) is s
        if s is Sign.POSITIVE and raag.sign(v, max_degree=8) is Sign.POSITIVE:
            assert raag.sign(w * v, max_degree=8) is Sign.POSITIVE


def test_magnus_of_trivial_words_is_one():
    a, b = raag.gen(LEFT.h), raag.gen(RIGHT.h)
    trivial = [raag.EMPTY, a * raag.invert(a), a * b * raag.invert(a) * raag.invert(b)]
    for w in trivial:
        assert raag.is_trivial(w)
        for d in range(1, 7):
            assert raag.magnus(w, d, alphabet=(LEFT, RIGHT)).is_one()


def test_magnus_is_multiplicative(rng):
    pool = COMMUTATION_GRAPHS["path"]

    def random_word():
        return AWord(tuple(Letter(rng.choice(pool), rng.choice((1, -1))) for _ in range(rng.randint(0, 4))))

    for _ in range(60):
        u, v = random_word(), random_word()
        for d in (1, 3, 5):
            product_poly = raag.magnus(u, d, alphabet=pool) * raag.magnus(v, d, alphabet=pool)
            assert raag.magnus(u * v, d, alphabet=pool).coefficients == product_poly.coefficients
    with pytest.raises(RaagError):
        raag.magnus(raag.EMPTY, 2, alphabet=pool[:1]) * raag.magnus(raag.EMPTY, 2, alphabet=pool[1:])


def test_relabel_preserves_commutation_and_order(rng):
    for _ in range(60):
        pool = [random_phi(rng) for _ in range(3)]
        g = random_plf2(rng, 1, 1)
        h1, h2 = pool[0], pool[1]
        assert raag.commutes(h1, h2) == raag.commutes(plmap.act(h1, g), plmap.act(h2, g))

        def random_word():
            return AWord(tuple(Letter(Generator(rng.choice(pool)), rng.choice((1, -1))) for _ in range(rng.randint(0, 3))))

        w1, w2 = random_word(), random_word()
        order = raag.compare(w1, w2, max_degree=8)
        assert raag.compare(raag.relabel(w1, g), raag.relabel(w2, g), max_degree=8) is order
