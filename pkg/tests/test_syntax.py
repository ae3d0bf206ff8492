import pytest
from hypothesis import given, strategies as st

from profpres.errors import (
    CompositionMismatch,
    EndpointMismatch,
    UnknownSymbol,
)
from profpres.syntax import (
    CatMorphism,
    CatPresentation,
    Equation,
    FunSym,
    Path,
    Sort,
    all_paths_upto,
    apply_morphism,
    compose_paths,
    typecheck_path,
    validate_presentation,
)


def test_compose_paths_concatenates(ws, pathin):
    fg = pathin("M", "f.g")
    g = pathin("M", "g")
    assert compose_paths(fg, g) == pathin("M", "f.g.g")


def test_identity_paths_are_neutral(ws, pathin):
    f = pathin("M", "f")
    one = pathin("M", "id(*)")
    assert compose_paths(one, f) == f
    assert compose_paths(f, one) == f


def test_compose_paths_endpoint_mismatch(ws, pathin):
    f = pathin("M", "f")
    s = pathin("N", "s")
    with pytest.raises(EndpointMismatch):
        compose_paths(f, s)


def test_typecheck_path_resolves(ws, pathin):
    M = ws["M"]
    p = typecheck_path(M, ["f", "g"], "*")
    assert p == pathin("M", "f.g")
    assert p.start.name == "*" and p.end.name == "*"


def test_typecheck_path_empty_is_identity(ws):
    M = ws["M"]
    p = typecheck_path(M, [], "*")
    assert p.is_identity


def test_typecheck_path_unknown_symbol(ws):
    N = ws["N"]
    with pytest.raises(UnknownSymbol):
        typecheck_path(N, ["f"], "*")


def test_typecheck_path_composition_mismatch(ws):
    A2 = ws["A2"]
    with pytest.raises(CompositionMismatch):
        typecheck_path(A2, ["u", "u"], "a0")


def test_apply_morphism_example(ws, pathin):
    F = ws["F"]
    assert apply_morphism(F, pathin("M", "f.g")) == pathin("M", "f.f.f.g")


def test_apply_morphism_identity_case(ws, pathin):
    F = ws["F"]
    assert apply_morphism(F, pathin("M", "id(*)")) == pathin("M", "id(*)")


def test_apply_morphism_concatenates_images(ws, pathin):
    Fs = ws["Fs"]
    assert apply_morphism(Fs, pathin("N", "s.s")) == pathin("M", "f.g.f.g")


def test_validate_presentation_clean(ws):
    assert validate_presentation(ws["M"]) == []


def test_validate_presentation_non_parallel():
    a = Sort("a", "X")
    b = Sort("b", "X")
    u = FunSym("u", a, b)
    bad = CatPresentation("X", (a, b), (u,), (Equation(Path(a, (u,)), Path(a, ())),))
    codes = [d.code for d in validate_presentation(bad)]
    assert "NonParallelEquation" in codes


def test_validate_presentation_unknown_symbol(ws):
    M = ws["M"]
    foreign = FunSym("z", M.sorts[0], M.sorts[0])
    bad = CatPresentation(
        "M2", M.sorts, M.funs, (Equation(Path(M.sorts[0], (foreign,)), Path(M.sorts[0], ())),)
    )
    codes = [d.code for d in validate_presentation(bad)]
    assert "UnknownSymbol" in codes


@st.composite
def _m_paths(draw, ws_funs):
    n = draw(st.integers(min_value=0, max_value=6))
    return [draw(st.sampled_from(ws_funs)) for _ in range(n)]


def test_concat_associative_property(ws):
    M = ws["M"]
    star = M.sorts[0]

    @given(
        st.lists(st.sampled_from(list(M.funs)), max_size=5),
        st.lists(st.sampled_from(list(M.funs)), max_size=5),
        st.lists(st.sampled_from(list(M.funs)), max_size=5),
    )
    def run(a, b, c):
        p, q, r = Path(star, tuple(a)), Path(star, tuple(b)), Path(star, tuple(c))
        assert compose_paths(compose_paths(p, q), r) == compose_paths(p, compose_paths(q, r))
        one = Path.identity(star)
        assert compose_paths(one, p) == p == compose_paths(p, one)

    run()


def test_morphism_distributes_over_composition(ws):
    M = ws["M"]
    F = ws["F"]
    star = M.sorts[0]

    @given(
        st.lists(st.sampled_from(list(M.funs)), max_size=4),
        st.lists(st.sampled_from(list(M.funs)), max_size=4),
    )
    def run(a, b):
        p, q = Path(star, tuple(a)), Path(star, tuple(b))
        assert F.apply(p.then(q)) == F.apply(p).then(F.apply(q))

    run()


def test_all_paths_upto_counts(ws):
    M = ws["M"]
    # two endomorphisms: 2^0 + ... + 2^k paths
    for k in range(4):
        assert len(all_paths_upto(M, k)) == 2 ** (k + 1) - 1


def test_morphism_composition(ws, pathin):
    F = ws["F"]
    FF = F.then(F)
    assert FF.apply(pathin("M", "f")) == pathin("M", "f.f.f.f")
    assert CatMorphism.identity(ws["M"]).is_identity
