"""Build the first few extensions of a semiloop and unify each with the fixed term.

Run: python demos/01_extensions_and_unification.py
"""
from semiloop import SemiloopSpec, format_term, unify_extension
from semiloop.loops import ExtensionBuilder

sl = SemiloopSpec.parse("h(h(h(x_2,x_1),h(x_2,x_3)),#a)", "h(h(y_3,y_1),h(y_4,y_4))")
builder = ExtensionBuilder(sl)
print(f"semiloop {sl!r}\n")
for n in range(1, 4):
    rep = unify_extension(sl, n, builder)
    print(f"extension {n}: {format_term(builder.term(n))}")
    if rep.unifiable:
        kind = "binds #a, so the next extension has work left" if rep.extendably else "leaves #a free"
        print(f"  mgu {rep.mgu}  ({kind})")
    else:
        out = rep.outcome
        print(f"  {out.kind}: {format_term(out.variable)} occurs in {format_term(out.term)}")
        print(f"  irreducible form {out.irreducible}")
