#!/usr/bin/env python3
"""Writes the bundled desk corpus: small CNF problems in named families.

File names are <family>__<tag>.p; every file also carries `% problem:` and
`% family:` header lines. The output is deterministic.

    python3 tools/gen_corpus.py corpus/desk
"""

import argparse
import itertools
import pathlib


def cnf(problem, family, clauses, note=None):
    lines = [f"% problem: {problem}", f"% family: {family}"]
    if note:
        lines.append(f"% {note}")
    for i, (role, text) in enumerate(clauses, 1):
        lines.append(f"cnf(c{i}, {role}, {text}).")
    return "\n".join(lines) + "\n"


def ax(text):
    return ("axiom", text)


def goal(text):
    return ("negated_conjecture", text)


def deepening_example():
    yield "deepening", "example", [goal("~p(f(X,Z))"), ax("p(f(t(c,c),g(e)))")], \
        "one level-2 instance of c1 closes the proof"


def nested():
    # Goal needs a two-step instantiation: first a function head, then constants.
    cases = [
        ("h(X,Y)", "h(s(a),b)"),
        ("h(X,Y)", "h(a,s(b))"),
        ("h(X,Y)", "h(s(a),s(b))"),
        ("k(X)", "k(m(a,b))"),
        ("k(X)", "k(m(b,b))"),
        ("h(X,X)", "h(s(a),s(a))"),
        ("m(X,Y)", "m(s(b),k(a))"),
        ("m(k(X),Y)", "m(k(s(a)),b)"),
    ]
    for i, (pattern, target) in enumerate(cases, 1):
        yield "nested", str(i), [goal(f"~q({pattern})"), ax(f"q({target})"), ax("q(a) | ~q(b)")], None


def euf_ground():
    yield "euf", "cycle35", [ax("f(f(f(a))) = a"), ax("f(f(f(f(f(a))))) = a"), goal("f(a) != a")], None
    yield "euf", "chain", [ax("a = b"), ax("b = c"), goal("f(a) != f(c)")], None
    yield "euf", "binary", [ax("g(a,b) = c"), ax("a = d"), goal("g(d,b) != c")], None
    yield "euf", "pred", [ax("p(a)"), ax("a = b"), goal("~p(b)")], None
    yield "euf", "case", [ax("a = b | a = c"), ax("f(b) = d"), ax("f(c) = d"), goal("f(a) != d")], None
    yield "euf", "nested", [ax("f(a) = b"), ax("f(b) = a"), ax("g(f(f(a))) = c"), goal("g(a) != c")], None
    yield "euf", "sat1", [ax("a = b"), goal("f(a) != f(c)")], "satisfiable"
    yield "euf", "sat2", [ax("f(a) = b"), ax("f(b) = c"), goal("a != c")], "satisfiable"


def pigeonhole():
    def ground_php(pigeons, holes):
        cls = []
        for p in range(1, pigeons + 1):
            cls.append(ax(" | ".join(f"in(p{p},h{h})" for h in range(1, holes + 1))))
        for h in range(1, holes + 1):
            for p, q in itertools.combinations(range(1, pigeons + 1), 2):
                cls.append(ax(f"~in(p{p},h{h}) | ~in(p{q},h{h})"))
        return cls

    yield "php", "3_2", ground_php(3, 2), None
    yield "php", "4_3", ground_php(4, 3), None
    cls = [ax(" | ".join(f"in(p{p},h{h})" for h in (1, 2))) for p in (1, 2, 3)]
    cls.append(ax("~in(X,H) | ~in(Y,H) | X = Y"))
    cls += [ax("p1 != p2"), ax("p1 != p3"), ax("p2 != p3")]
    yield "php", "3_2_axiom", cls, "needs six instances of the exclusion axiom"


def transitivity():
    trans = ax("~r(X,Y) | ~r(Y,Z) | r(X,Z)")
    yield "trans", "ab_bc", [trans, ax("r(a,b)"), ax("r(b,c)"), goal("~r(a,c)")], None
    yield "trans", "ba_ac", [trans, ax("r(b,a)"), ax("r(a,c)"), goal("~r(b,c)")], None
    yield "trans", "loop", [trans, ax("r(a,b)"), ax("r(b,a)"), goal("~r(a,a)")], None
    yield "trans", "chain4", [trans, ax("r(a,b)"), ax("r(b,c)"), ax("r(c,d)"), goal("~r(a,d)")], None
    yield "trans", "sym", [trans, ax("~r(X,Y) | r(Y,X)"), ax("r(a,b)"), goal("~r(b,b)")], None
    yield "trans", "sat", [trans, ax("r(a,b)"), goal("~r(b,a)")], "satisfiable"


def equality_axioms():
    yield "eqax", "unary", [ax("f(X) = g(X)"), goal("f(a) != g(a)")], None
    yield "eqax", "comm", [ax("m(X,Y) = m(Y,X)"), goal("m(a,b) != m(b,a)")], None
    yield "eqax", "inverse", [ax("g(g(X)) = X"), goal("g(g(g(g(a)))) != a")], "needs both X = a and X = g(g(a))"
    yield "eqax", "idem", [ax("m(X,X) = X"), goal("m(m(a,a),a) != a")], None
    yield "eqax", "left_unit", [ax("m(e,X) = X"), ax("m(X,e) = X"), goal("m(e,m(a,e)) != a")], None


def satisfiable():
    yield "sat", "split", [ax("p(X) | q(X)"), goal("~p(a)")], None
    yield "sat", "order", [ax("~lt(X,X)"), ax("lt(a,b)"), goal("~lt(b,a)")], None
    yield "sat", "fun", [ax("f(X) != X | p(X)"), ax("~p(a)"), ax("f(b) = a")], None
    yield "sat", "two", [ax("r(X,Y) | r(Y,X)"), ax("~r(a,b)")], None
    yield "sat", "ground", [ax("p(a) | p(b)"), ax("~p(a) | ~p(b)")], None


def no_constants():
    yield "noconst", "succ", [ax("~p(X) | p(s(X))"), goal("~p(s(s(Y)))"), ax("p(s(Z))")], \
        "no constants: the grounding pass has nothing to substitute"


def single_instance():
    yield "single", "refl", [ax("subset(X,X)"), goal("~subset(a,a)")], None
    yield "single", "member", [ax("~member(X,empty)"), goal("member(a,empty)")], None
    yield "single", "succ", [ax("s(X) != zero"), goal("s(a) = zero")], None
    yield "single", "pair", [ax("fst(pair(X,Y)) = X"), goal("fst(pair(a,b)) != a")], None
    yield "single", "twovar", [ax("~le(X,Y) | le(Y,X)"), ax("le(a,b)"), goal("~le(b,a)")], None
    yield "single", "socrates", [ax("~man(X) | mortal(X)"), ax("man(socrates)"), goal("~mortal(socrates)")], None


def groups():
    yield "group", "unit", [ax("mult(e,X) = X"), goal("mult(e,a) != a")], None
    yield "group", "inv", [ax("mult(inv(X),X) = e"), goal("mult(inv(a),a) != e")], None
    yield "group", "both", [ax("mult(e,X) = X"), ax("mult(inv(X),X) = e"), goal("mult(e,mult(inv(a),a)) != e")], None


def syllogisms():
    yield "syll", "chain", [ax("~a1(X) | a2(X)"), ax("~a2(X) | a3(X)"), ax("a1(k)"), goal("~a3(k)")], None
    yield "syll", "two", [ax("~man(X) | mortal(X)"), ax("man(s) | man(p)"), goal("~mortal(s)"), goal("~mortal(p)")], None
    yield "syll", "func", [ax("~man(X) | man(father(X))"), ax("man(s)"), goal("~man(father(s))")], None
    yield "syll", "grand", [ax("~man(X) | man(father(X))"), ax("man(s)"), goal("~man(father(father(s)))")], None


GENERATORS = [deepening_example, nested, euf_ground, pigeonhole, transitivity, equality_axioms,
              satisfiable, no_constants, single_instance, groups, syllogisms]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("out", type=pathlib.Path)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for old in args.out.glob("*.p"):
        old.unlink()
    count = 0
    for gen in GENERATORS:
        for family, tag, clauses, note in gen():
            name = f"{family}__{tag}"
            (args.out / f"{name}.p").write_text(cnf(name, family, clauses, note))
            count += 1
    print(f"wrote {count} problems to {args.out}")


if __name__ == "__main__":
    main()
