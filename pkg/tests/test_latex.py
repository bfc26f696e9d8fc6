import pytest

from butson.families import FamilyError, Monomial, verify_family
from butson.latex import find_arrays, parse_array, parse_entry

P = ("a", "b")


@pytest.mark.parametrize(
    "text,mono",
    [
        ("1", Monomial(0, (0, 0))),
        ("-1", Monomial(2, (0, 0))),
        (r"\mathbf{i}", Monomial(1, (0, 0))),
        (r"-\mathbf{i}a", Monomial(3, (1, 0))),
        (r"\overline{a}b", Monomial(0, (-1, 1))),
        (r"-\mathbf{i}\overline{b}^2", Monomial(3, (0, -2))),
        (r"a^{3}", Monomial(0, (3, 0))),
    ],
)
def test_parse_entry(text, mono):
    assert parse_entry(text, P) == mono


def test_parse_entry_rejects_unknown_symbol():
    with pytest.raises(FamilyError):
        parse_entry("x", P)


def test_parse_array_and_find():
    body = r"1 & 1\\ 1 & -1\\"
    F = parse_array(body, ("a",), 4, "F2")
    assert F.n == 2 and verify_family(F)
    text = r"""
    F_{2}^{(1)}(a)=\left[\begin{array}{rr}
    1 & a\\
    1 & -a\\
    \end{array}\right]
    """
    found = find_arrays(text)
    assert len(found) == 1
    (G,) = found.values()
    assert G.params == ("a",) and verify_family(G)
