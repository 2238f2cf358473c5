import pytest
from hypothesis import given, strategies as st

from spreadlab import matrices as M
from spreadlab.fields import embedding, field, least_primitive_polynomial, prime_power

FIELDS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 64]


def poly_mulmod(a, b, f, p):
    """Product of coefficient lists modulo the monic ``f`` over GF(p)."""
    k = len(f) - 1
    out = [0] * (2 * k)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d]
        if c:
            for t in range(k + 1):
                out[d - k + t] = (out[d - k + t] - c * f[t]) % p
    return out[:k]


def x_order(f, p):
    k = len(f) - 1
    one = [1] + [0] * (k - 1)
    x = [0, 1] + [0] * (k - 2) if k > 1 else [(-f[0]) % p]
    acc, n = x, 1
    while acc != one:
        acc = poly_mulmod(acc, x, f, p)
        n += 1
        if n > p ** k:
            return None
    return n


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_defining_polynomial_is_least_primitive(q):
    p, k = prime_power(q)
    f = least_primitive_polynomial(p, k)
    assert f[-1] == 1 and len(f) == k + 1
    assert x_order(list(f), p) == q - 1
    code = sum(c * p ** i for i, c in enumerate(f[:-1]))
    for smaller in range(1, code):
        g = [(smaller // p ** i) % p for i in range(k)] + [1]
        if g[0] == 0:
            continue
        assert x_order(g, p) != q - 1


def test_known_polynomials():
    assert least_primitive_polynomial(2, 3) == (1, 1, 0, 1)
    assert least_primitive_polynomial(2, 2) == (1, 1, 1)


@pytest.mark.parametrize("bad", [1, 6, 12, 100])
def test_prime_power_rejects(bad):
    with pytest.raises(ValueError):
        prime_power(bad)


@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(q, data):
    F = field(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(a, b) == F.mul(b, a)
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, q - 1) == 1
        assert (q - 1) % F.element_order(a) == 0
    # Frobenius is additive and multiplicative
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
    assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
    assert F.frobenius(a, F.k) == a


@pytest.mark.parametrize("small,big", [(2, 4), (2, 8), (4, 16), (3, 9), (3, 27), (5, 25)])
def test_embedding_is_a_homomorphism(small, big):
    F, K = field(small), field(big)
    e = embedding(small, big)
    assert e[0] == 0 and e[1] == 1 and len(set(e)) == small
    for a in range(small):
        for b in range(small):
            assert e[F.add(a, b)] == K.add(e[a], e[b])
            assert e[F.mul(a, b)] == K.mul(e[a], e[b])
    assert sorted(e) == sorted(K.subfield(small))


def test_no_embedding_across_degrees():
    with pytest.raises(ValueError):
        embedding(4, 8)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_sl2_order(q):
    F = field(q)
    elems = M.enumerate_group(F, M.sl2_generators(F))
    assert len(elems) == q * (q * q - 1)
    assert all(M.det(F, a) == 1 for a in elems)


@given(st.sampled_from([3, 4, 5, 7, 9]), st.data())
def test_matrix_inverse_and_det(q, data):
    F = field(q)
    entries = [data.draw(st.integers(0, q - 1)) for _ in range(4)]
    a = M.mat([entries[:2], entries[2:]])
    d = M.det(F, a)
    if d == 0:
        return
    ai = M.inverse(F, a)
    assert M.mul(F, a, ai) == M.identity(2)
    b = M.mat([[1, entries[0]], [0, 1]])
    assert M.det(F, M.mul(F, a, b)) == F.mul(d, M.det(F, b))
