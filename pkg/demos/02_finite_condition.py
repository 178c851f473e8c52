"""When an extension stops binding #a, its unifier may carry over to every later one.

The check needs the carriers (variables whose image mentions #a) to stay
clear of the extendable term under shifting.  The second semiloop shows a
carrier whose shift lands inside s: its later extensions fail.

Run: python demos/02_finite_condition.py
"""
from semiloop import SemiloopSpec, check_finite_condition, unify_extension
from semiloop.decompose import finite_condition_margin
from semiloop.oracle import oracle_unify_extension

cases = {
    "safe": SemiloopSpec.parse("h(h(h(x_2,h(x_1,x_1)),x_3),#a)", "h(h(y_4,y_3),h(y_1,y_2))"),
    "carrier inside s": SemiloopSpec.parse("h(x_2,h(x_4,#a))", "h(y_1,y_1)"),
}
for name, sl in cases.items():
    print(f"{name}: {sl!r}")
    for k in range(1, 4):
        rep = unify_extension(sl, k)
        if not rep.unifiable:
            print(f"  extension {k} is not unifiable ({rep.outcome.kind})")
            break
        unbound, m, carriers = finite_condition_margin(sl, rep.mgu)
        ok = check_finite_condition(sl, k, rep.mgu)
        print(f"  k={k} mgu={rep.mgu}")
        print(f"       #a unbound={unbound} m={m} carriers={[str(z) for z in carriers]} -> {ok}")
        if ok:
            later = all(oracle_unify_extension(sl, j).unifiable for j in range(k, k + 21))
            print(f"  oracle: extensions {k}..{k + 20} all unifiable: {later}")
            break
    print()
