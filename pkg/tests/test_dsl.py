import json
import pathlib

import pytest
from jsonschema import validate as js_validate

from profpres.dsl import (
    entity_json,
    export_json,
    parse_equation_for,
    parse_workspace,
    render,
    render_workspace,
)
from profpres.errors import LexError, ParseError, ResolveError
from profpres.presentations import InstancePresentation

SCHEMA = json.loads(
    (pathlib.Path(__file__).parents[1] / "src/profpres/data/prof.schema.json").read_text()
)


def test_parse_example_category(ws):
    M = ws["M"]
    assert [s.name for s in M.sorts] == ["*"]
    assert [f.name for f in M.funs] == ["f", "g"]
    assert len(M.eqs) == 1


def test_parse_trivial_category():
    ws = parse_workspace("category E { sorts *; }")
    E = ws["E"]
    assert E.funs == () and E.eqs == ()


def test_parse_instance(ws):
    I = ws["I"]
    assert isinstance(I, InstancePresentation)
    assert [g.name for g in I.gens] == ["x", "y"]
    assert str(I.eqs[0]) == "x.s = x"


def test_roundtrip_full_corpus(ws, corpus_text):
    text = render_workspace(ws)
    ws2 = parse_workspace(text, "rendered")
    assert ws2.names() == ws.names()
    for name in ws.names():
        assert ws2[name] == ws[name], name


def test_render_is_stable(ws):
    text = render_workspace(ws)
    assert render_workspace(parse_workspace(text)) == text


def test_render_contains_equation(ws):
    assert "eq f.g = g.f;" in render(ws["M"])


def test_render_identity_path_syntax():
    src = "category C { sorts *; fun e : * -> *; eq e = id(*); }"
    ws = parse_workspace(src)
    assert "eq e = id(*);" in render(ws["C"])
    assert parse_workspace(render(ws["C"]))["C"] == ws["C"]


def test_export_json_deterministic(ws):
    for name in ws.names():
        assert export_json(ws[name]) == export_json(ws[name])


def test_export_json_schema(ws):
    for name in ws.names():
        js_validate(entity_json(ws[name]), SCHEMA)


def test_export_json_golden(ws):
    golden = pathlib.Path(__file__).parent / "data" / "golden_M.json"
    assert export_json(ws["M"]) == golden.read_bytes()


def test_curried_export_has_at_and_act_blocks(ws):
    doc = entity_json(ws["Pc"])
    assert doc["kind"] == "curried"
    assert doc["at"][0]["gens"][0]["name"] == "x"
    assert doc["act"][0]["sym"] == "f"


def test_lex_error_span():
    with pytest.raises(LexError) as err:
        parse_workspace("category M { sorts $; }", "bad.prof")
    assert err.value.span.line == 1
    assert err.value.span.file == "bad.prof"


def test_parse_error_span_inside_source():
    src = "category M {\n  sorts *;\n  fun f * -> *;\n}"
    with pytest.raises(ParseError) as err:
        parse_workspace(src, "bad.prof")
    span = err.value.span
    lines = src.splitlines()
    assert 1 <= span.line <= len(lines)
    assert 1 <= span.column <= len(lines[span.line - 1]) + 1


def test_resolve_error_unknown_entity():
    with pytest.raises(ResolveError):
        parse_workspace("instance I on Nope { gen x : *; }")


def test_resolve_error_duplicate_name():
    with pytest.raises(ResolveError):
        parse_workspace("category A { sorts *; }\ncategory A { sorts *; }")


def test_resolve_error_non_parallel_equation():
    src = (
        "category C { sorts a, b; fun u : a -> b; fun w : a -> a; eq u = w; }"
    )
    with pytest.raises(ResolveError) as err:
        parse_workspace(src)
    assert "NonParallelEquation" in str(err.value)


def test_comments_and_block_comments():
    src = "// leading\ncategory C { sorts *; /* inline\nspanning */ fun f : * -> *; }"
    ws = parse_workspace(src)
    assert [f.name for f in ws["C"].funs] == ["f"]


def test_order_annotation_roundtrip():
    src = "category C { sorts *; fun f : * -> *; fun g : * -> *; order g, f; }"
    ws = parse_workspace(src)
    assert ws["C"].order == ("g", "f")
    assert parse_workspace(render(ws["C"]))["C"] == ws["C"]


def test_parse_equation_for(ws):
    lhs, rhs = parse_equation_for(ws["M"], "f.g = g.f")
    assert str(lhs) == "f.g" and str(rhs) == "g.f"
    lhs, rhs = parse_equation_for(ws["Qapp"], "f.q = q.a")
    assert str(lhs) == "f.q" and str(rhs) == "q.a"
    lhs, rhs = parse_equation_for(ws["I"], "x.s = x")
    assert str(lhs) == "x.s" and str(rhs) == "x"


def test_sort_entry_in_morphism():
    src = (
        "category A { sorts a; }\n"
        "category B { sorts b; }\n"
        "morphism m : A -> B { sort a -> b; }\n"
    )
    ws = parse_workspace(src)
    m = ws["m"]
    assert m.sort_pairs[0][1].name == "b"
    assert parse_workspace(render_workspace(ws) )["m"] == m


def test_stdin_like_source_unterminated_comment():
    with pytest.raises(LexError):
        parse_workspace("/* oops")
