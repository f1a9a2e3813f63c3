import pytest

from announce.errors import FormulaSyntaxError, NotEpistemic, UnknownOperator
from announce.formula import (BOTTOM, TOP, AnnBox, And, ApalBox, Atom, CalBox,
                              GalBox, Imp, Know, Not, Or, agents_of, atoms_of,
                              conj, disj, is_el, is_el_group, modal_depth, to_text)
from announce.parser import parse

p, q = Atom("p"), Atom("q")


def test_figure1_formula_desugars():
    f = parse("~K a q & <!> K a q")
    assert f == And(Not(Know("a", q)), Not(ApalBox(Not(Know("a", q)))))
    assert to_text(f) == "~K a q & ~[!] ~K a q"


def test_group_diamond():
    f = parse("<G{a,b}> (K a (p & q) & K b (p & q))")
    body = And(Know("a", And(p, q)), Know("b", And(p, q)))
    assert f == Not(GalBox({"a", "b"}, Not(body)))


def test_constants_and_kh():
    assert parse("true") == TOP
    assert parse("false") == BOTTOM
    assert parse("Kh a p") == Not(Know("a", Not(p)))
    assert to_text(TOP) == "true"


def test_precedence():
    assert parse("p | q & p") == Or(p, And(q, p))
    assert parse("p -> q -> p") == Imp(p, Imp(q, p))
    assert parse("~p & q") == And(Not(p), q)
    assert parse("K a p -> q") == Imp(Know("a", p), q)
    assert parse("[p] q & p") == And(AnnBox(p, q), p)
    assert parse("<p> q") == Not(AnnBox(p, Not(q)))
    assert parse("[C{}] p") == CalBox(frozenset(), p)
    assert parse("<C{a}> p") == Not(CalBox({"a"}, Not(p)))
    # a bracketed atom named G is an announcement, not a group
    assert parse("[G] p") == AnnBox(Atom("G"), p)


def test_printer_round_trip_examples():
    for text in ["p & q & p", "(p -> q) -> p", "[p | q] K a ~q", "[G{b,a}] [!] p",
                 "~~p", "K a (p | q)", "[C{a}] (p -> [q] false)"]:
        f = parse(text)
        assert parse(to_text(f)) == f


def test_syntax_errors_have_positions():
    with pytest.raises(FormulaSyntaxError) as err:
        parse("p &\n  & q")
    assert (err.value.line, err.value.column) == (2, 3)
    with pytest.raises(UnknownOperator):
        parse("p $ q")
    for bad in ["", "(p", "K p", "p q", "[p q", "<G{a> p", "K true p"]:
        with pytest.raises(FormulaSyntaxError):
            parse(bad)


def test_modal_depth():
    assert modal_depth(p) == 0
    assert modal_depth(Know("a", Know("b", p))) == 2
    assert modal_depth(And(Know("a", p), Not(q))) == 1
    with pytest.raises(NotEpistemic):
        modal_depth(AnnBox(p, q))
    with pytest.raises(NotEpistemic):
        modal_depth(ApalBox(p))


def test_el_checks():
    assert is_el(Know("a", p)) and not is_el(Know("a", AnnBox(p, q)))
    assert is_el_group(And(Know("a", p), Know("b", q)), {"a", "b"})
    assert not is_el_group(Know("a", p), {"a", "b"})
    assert not is_el_group(And(Know("a", p), Know("a", q)), {"a", "b"})
    assert not is_el_group(Know("a", ApalBox(p)), {"a"})
    assert is_el_group(TOP, set())


def test_signature_collectors():
    assert atoms_of(TOP) == set()
    f = parse("<G{a}> K b p & <C{c}> q")
    assert atoms_of(f) == {"p", "q"}
    assert agents_of(f) == {"a", "b", "c"}


def test_conj_disj():
    assert conj([]) == TOP and disj([]) == BOTTOM
    assert conj([p]) == p
    assert conj([p, q, p]) == And(And(p, q), p)


def test_groups_are_sets():
    assert GalBox(["b", "a"], p) == GalBox({"a", "b"}, p)
    assert hash(GalBox(["b", "a"], p)) == hash(GalBox({"a", "b"}, p))


def test_shared_subtrees_compare_fast():
    # two separately built 60-level DAGs of size 2^60 as trees
    def tower(n):
        f = p
        for _ in range(n):
            f = And(f, f)
        return f
    assert tower(60) == tower(60)
    assert tower(60) != tower(59)
