"""Decompose an extension's unifier layer by layer, find a repeated state, and
rebuild unifiers for much larger extensions from that one trace.

Run: python demos/03_decomposition_and_cycles.py
"""
from semiloop import SemiloopSpec, build_unifier_from_cycle, decompose_Dprime, detect_cycle
from semiloop.classify import semiloop_delta
from semiloop.oracle import oracle_extension, oracle_unify_extension, verify_unifier

sl = SemiloopSpec.parse("h(#a,h(h(x_1,x_1),x_1))", "h(h(h(y_1,y_1),y_1),y_1)")
trace = decompose_Dprime(sl, 5)
print(trace.to_text())

cyc = detect_cycle(trace, semiloop_delta(sl))
print(f"state entering depth {cyc.i} reappears entering depth {cyc.j - 1}: "
      f"period {cyc.period}\n")

for k in (5, 10, 40, 100):
    u = build_unifier_from_cycle(trace, cyc, k)
    ok = verify_unifier(oracle_extension(sl, k), sl.fixed, u)
    same = u == oracle_unify_extension(sl, k).mgu
    print(f"k={k:<4} rebuilt unifier verified={ok} equals direct mgu={same}")
